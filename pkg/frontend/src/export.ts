export interface ExportFile {
  name: string;
  text: string;
}

/** Trigger a browser download of the exact text (no re-serialization). */
export function downloadTextFile(file: ExportFile): void {
  const blob = new Blob([file.text], { type: 'application/json' });
  const url = URL.createObjectURL(blob);
  const anchor = document.createElement('a');
  anchor.href = url;
  anchor.download = file.name;
  anchor.click();
  URL.revokeObjectURL(url);
}
