/** Measure box in page-normalized coordinates, as served by the API. */
export interface MeasureBox {
  page: number;
  x: number;
  y: number;
  w: number;
  h: number;
}

/** One annotated jump; list position is the annotation order. */
export interface Jump {
  from: number;
  to: number;
}

export interface Violation {
  kind: string;
  message: string;
}
