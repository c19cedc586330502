import type { Jump, MeasureBox, Violation } from './types';

/** A parsed response body plus its exact raw text, kept so exports can be
 * byte-identical to what the service stores. */
export interface RawJson<T> {
  data: T;
  raw: string;
}

export type PutJumpsResult = { ok: true } | { ok: false; violations: Violation[] };

export class ServiceError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return `${this.baseUrl}${path}`;
  }

  private async getRaw<T>(path: string): Promise<RawJson<T>> {
    const response = await fetch(this.url(path));
    if (!response.ok) {
      throw new ServiceError(response.status, `GET ${path} failed (${response.status})`);
    }
    const raw = await response.text();
    return { data: JSON.parse(raw) as T, raw };
  }

  async listProjects(): Promise<string[]> {
    return (await this.getRaw<string[]>('/projects')).data;
  }

  getMeasures(projectId: string): Promise<RawJson<MeasureBox[]>> {
    return this.getRaw(`/projects/${projectId}/measures`);
  }

  getJumps(projectId: string): Promise<RawJson<Jump[]>> {
    return this.getRaw(`/projects/${projectId}/jumps`);
  }

  getLogicalOrder(projectId: string): Promise<RawJson<number[]>> {
    return this.getRaw(`/projects/${projectId}/logical-order`);
  }

  pageUrl(projectId: string, page: number): string {
    return this.url(`/projects/${projectId}/pages/${page}`);
  }

  async putJumps(projectId: string, jumps: Jump[]): Promise<PutJumpsResult> {
    const response = await fetch(this.url(`/projects/${projectId}/jumps`), {
      method: 'PUT',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(jumps.map((j) => ({ from: j.from, to: j.to }))),
    });
    if (response.status === 422) {
      const body = (await response.json()) as { violations?: Violation[]; detail?: string };
      const violations = body.violations ?? [
        { kind: 'invalid', message: body.detail ?? 'request rejected' },
      ];
      return { ok: false, violations };
    }
    if (!response.ok) {
      throw new ServiceError(response.status, `PUT jumps failed (${response.status})`);
    }
    await response.text();
    return { ok: true };
  }
}
