import { ApiClient } from './api';
import { downloadTextFile, type ExportFile } from './export';
import { clickMeasure, measureLabels, type Draft } from './jumps';
import { renderOverlays } from './overlay';
import type { Jump, MeasureBox } from './types';

/**
 * Jump-labeling app: one score page at a time with hoverable measure
 * overlays. Two clicks create a jump; the jump list (annotation order) is
 * replaced wholesale on the service with every edit, and the numbering
 * overlay always re-renders from the service's unroll so the UI never
 * computes logical order itself.
 */
export class App {
  private boxes: MeasureBox[] = [];
  private jumps: Jump[] = [];
  private entries: number[] = [];
  private draft: Draft = null;
  private page = 0;
  private projectId = '';
  private lastOp: Promise<void> = Promise.resolve();

  private readonly banner: HTMLElement;
  private readonly hint: HTMLElement;
  private readonly projectSelect: HTMLSelectElement;
  private readonly pageIndicator: HTMLElement;
  private readonly pageImage: HTMLImageElement;
  private readonly overlayLayer: HTMLElement;
  private readonly jumpList: HTMLOListElement;

  constructor(
    root: HTMLElement,
    private readonly client: ApiClient,
  ) {
    root.innerHTML = `
      <div class="banner hidden"></div>
      <header>
        <label>project
          <select class="project-select"></select>
        </label>
        <nav class="pager">
          <button type="button" class="page-prev">&#8249;</button>
          <span class="page-indicator"></span>
          <button type="button" class="page-next">&#8250;</button>
        </nav>
      </header>
      <main>
        <div class="page-view">
          <img class="page-image" alt="score page" />
          <div class="overlay-layer"></div>
        </div>
        <aside class="sidebar">
          <p class="hint"></p>
          <h2>jumps</h2>
          <ol class="jump-list"></ol>
          <div class="actions">
            <button type="button" class="undo">undo last jump</button>
            <button type="button" class="export">export labels</button>
          </div>
        </aside>
      </main>`;
    this.banner = root.querySelector('.banner')!;
    this.hint = root.querySelector('.hint')!;
    this.projectSelect = root.querySelector('.project-select')!;
    this.pageIndicator = root.querySelector('.page-indicator')!;
    this.pageImage = root.querySelector('.page-image')!;
    this.overlayLayer = root.querySelector('.overlay-layer')!;
    this.jumpList = root.querySelector('.jump-list')!;

    this.projectSelect.addEventListener('change', () => {
      this.enqueue(() => this.loadProject(this.projectSelect.value));
    });
    root.querySelector('.page-prev')!.addEventListener('click', () => this.turnPage(-1));
    root.querySelector('.page-next')!.addEventListener('click', () => this.turnPage(1));
    root.querySelector('.undo')!.addEventListener('click', () => {
      this.enqueue(() => this.undoLastJump());
    });
    root.querySelector('.export')!.addEventListener('click', () => {
      this.enqueue(async () => {
        for (const file of await this.exportFiles()) downloadTextFile(file);
      });
    });
    document.addEventListener('keydown', (event) => {
      if (event.key === 'Escape' && this.draft !== null) {
        this.draft = null;
        this.render();
      }
    });
  }

  async init(): Promise<void> {
    try {
      const projects = await this.client.listProjects();
      this.projectSelect.replaceChildren(
        ...projects.map((id) => new Option(id, id)),
      );
      if (projects.length > 0) await this.loadProject(projects[0]);
    } catch (err) {
      this.showError(err);
    }
  }

  /** Resolves when every queued interaction has finished. */
  settle(): Promise<void> {
    return this.lastOp;
  }

  get currentJumps(): readonly Jump[] {
    return this.jumps;
  }

  get logicalOrder(): readonly number[] {
    return this.entries;
  }

  private enqueue(op: () => Promise<void>): void {
    this.lastOp = this.lastOp.then(async () => {
      try {
        await op();
      } catch (err) {
        this.showError(err);
      }
    });
  }

  private async loadProject(projectId: string): Promise<void> {
    this.projectId = projectId;
    this.boxes = (await this.client.getMeasures(projectId)).data;
    this.jumps = (await this.client.getJumps(projectId)).data;
    this.entries = (await this.client.getLogicalOrder(projectId)).data;
    this.page = 0;
    this.draft = null;
    this.banner.classList.add('hidden');
    this.render();
  }

  private pageCount(): number {
    return this.boxes.reduce((count, box) => Math.max(count, box.page + 1), 1);
  }

  private turnPage(delta: number): void {
    const next = this.page + delta;
    if (next < 0 || next >= this.pageCount()) return;
    this.page = next;
    this.render();
  }

  private handleMeasureClick(measureIndex: number): void {
    const outcome = clickMeasure(this.draft, measureIndex);
    this.draft = outcome.draft;
    this.hint.textContent = outcome.hint ?? '';
    if (outcome.jump) {
      const jump = outcome.jump;
      this.enqueue(() => this.pushJumps([...this.jumps, jump]));
    }
    this.render();
  }

  /** Optimistically apply a whole replacement jump list; roll back on 422. */
  private async pushJumps(next: Jump[]): Promise<void> {
    const previous = this.jumps;
    this.jumps = next;
    this.render();
    const result = await this.client.putJumps(this.projectId, next);
    if (!result.ok) {
      this.jumps = previous;
      this.hint.textContent = result.violations.map((v) => `[${v.kind}] ${v.message}`).join('; ');
      this.render();
      return;
    }
    this.entries = (await this.client.getLogicalOrder(this.projectId)).data;
    this.render();
  }

  private async undoLastJump(): Promise<void> {
    if (this.jumps.length === 0) return;
    await this.pushJumps(this.jumps.slice(0, -1));
  }

  private async moveJump(index: number, delta: number): Promise<void> {
    const target = index + delta;
    if (target < 0 || target >= this.jumps.length) return;
    const next = [...this.jumps];
    [next[index], next[target]] = [next[target], next[index]];
    await this.pushJumps(next);
  }

  /** Raw service artifacts, byte-identical to what is stored on disk. */
  async exportFiles(): Promise<ExportFile[]> {
    const jumps = await this.client.getJumps(this.projectId);
    const order = await this.client.getLogicalOrder(this.projectId);
    return [
      { name: 'jumps.json', text: jumps.raw },
      { name: 'logical_order.json', text: order.raw },
    ];
  }

  private render(): void {
    this.pageIndicator.textContent = `page ${this.page + 1} / ${this.pageCount()}`;
    this.pageImage.src = this.client.pageUrl(this.projectId, this.page);
    renderOverlays(
      this.overlayLayer,
      this.boxes,
      this.page,
      measureLabels(this.entries),
      this.draft?.source ?? null,
      { onMeasureClick: (i) => this.handleMeasureClick(i) },
    );
    this.jumpList.replaceChildren(
      ...this.jumps.map((jump, index) => {
        const item = document.createElement('li');
        const text = document.createElement('span');
        text.textContent = `measure ${jump.from} → measure ${jump.to}`;
        const up = document.createElement('button');
        up.type = 'button';
        up.textContent = '↑';
        up.title = 'fire earlier';
        up.addEventListener('click', () => this.enqueue(() => this.moveJump(index, -1)));
        const down = document.createElement('button');
        down.type = 'button';
        down.textContent = '↓';
        down.title = 'fire later';
        down.addEventListener('click', () => this.enqueue(() => this.moveJump(index, 1)));
        item.append(text, up, down);
        return item;
      }),
    );
  }

  private showError(err: unknown): void {
    this.banner.textContent = err instanceof Error ? err.message : String(err);
    this.banner.classList.remove('hidden');
  }
}

export async function bootstrap(root: HTMLElement, client: ApiClient): Promise<App> {
  const app = new App(root, client);
  await app.init();
  return app;
}
