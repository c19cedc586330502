import { formatLabel } from './jumps';
import type { MeasureBox } from './types';

export interface OverlayHandlers {
  onMeasureClick(measureIndex: number): void;
}

/**
 * Draw one absolutely-positioned div per measure of the current page over
 * the page image. Positions use percentages of the normalized coordinates,
 * so the overlay tracks the rendered image through any window resize
 * without recomputation.
 */
export function renderOverlays(
  layer: HTMLElement,
  boxes: MeasureBox[],
  page: number,
  labels: Map<number, number[]>,
  draftSource: number | null,
  handlers: OverlayHandlers,
): void {
  layer.replaceChildren();
  boxes.forEach((box, measureIndex) => {
    if (box.page !== page) return;
    const el = document.createElement('div');
    el.className = 'measure-box';
    if (measureIndex === draftSource) el.classList.add('pending');
    el.dataset.measure = String(measureIndex);
    el.style.left = `${box.x * 100}%`;
    el.style.top = `${box.y * 100}%`;
    el.style.width = `${box.w * 100}%`;
    el.style.height = `${box.h * 100}%`;

    const label = document.createElement('span');
    label.className = 'measure-label';
    label.textContent = formatLabel(labels.get(measureIndex));
    el.appendChild(label);

    el.addEventListener('mouseenter', () => el.classList.add('hovered'));
    el.addEventListener('mouseleave', () => el.classList.remove('hovered'));
    el.addEventListener('click', () => handlers.onMeasureClick(measureIndex));
    layer.appendChild(el);
  });
}
