import type { Jump } from './types';

/** Pending first click of a two-click jump annotation, or null. */
export type Draft = { source: number } | null;

export interface ClickOutcome {
  draft: Draft;
  /** Present when the click completed a jump. */
  jump?: Jump;
  /** Present when the click was rejected (same measure twice). */
  hint?: string;
}

/**
 * Two-click state machine: first click arms a draft with the jump source,
 * second click completes the pair. Clicking the source again clears the
 * draft instead of creating a self jump.
 */
export function clickMeasure(draft: Draft, measure: number): ClickOutcome {
  if (draft === null) {
    return { draft: { source: measure } };
  }
  if (draft.source === measure) {
    return { draft: null, hint: 'jump source and target must differ - selection cleared' };
  }
  return { draft: null, jump: { from: draft.source, to: measure } };
}

/**
 * Which logical positions (1-based) visit each physical measure. A measure
 * inside a repeat shows several numbers, e.g. "1, 5".
 */
export function measureLabels(entries: number[]): Map<number, number[]> {
  const labels = new Map<number, number[]>();
  entries.forEach((physical, position) => {
    const positions = labels.get(physical) ?? [];
    positions.push(position + 1);
    labels.set(physical, positions);
  });
  return labels;
}

export function formatLabel(positions: number[] | undefined): string {
  return positions ? positions.join(', ') : '';
}
