/**
 * Thin fetch wrapper around the editor service. Every response body is
 * validated against the zod wire schemas before the UI sees it, and HTTP
 * error statuses are mapped onto a small typed error hierarchy so callers
 * can branch on conflicts vs. validation failures without string matching.
 */

import {
  CodecInfoSchema,
  DesignDetailSchema,
  DesignSummarySchema,
  EditAckSchema,
  type CodecInfo,
  type DesignDetail,
  type DesignSummary,
  type EditAck,
  type EditOp,
} from "./types.js";
import { z } from "zod";

export class ApiError extends Error {
  constructor(message: string, public readonly status: number) {
    super(message);
    this.name = "ApiError";
  }
}

/** 409: the edit was made against a stale version; refetch and retry. */
export class ConflictError extends ApiError {
  constructor(message: string) {
    super(message, 409);
    this.name = "ConflictError";
  }
}

/** 422: the edit was rejected; findings explain what the server disliked. */
export class InvalidEditError extends ApiError {
  constructor(message: string, public readonly findings: string[]) {
    super(message, 422);
    this.name = "InvalidEditError";
  }
}

/** 502: a pipeline stage failed while generating a design. */
export class StageFailureError extends ApiError {
  constructor(message: string, public readonly stage: string | null) {
    super(message, 502);
    this.name = "StageFailureError";
  }
}

const ListResponseSchema = z.object({ designs: z.array(DesignSummarySchema) });

async function raiseForStatus(res: Response): Promise<void> {
  if (res.ok) return;
  let body: Record<string, unknown> = {};
  try {
    body = (await res.json()) as Record<string, unknown>;
  } catch {
    // non-JSON error body; fall through with the status line only
  }
  const message = typeof body.error === "string" ? body.error : `HTTP ${res.status}`;
  if (res.status === 409) throw new ConflictError(message);
  if (res.status === 422) {
    const findings = Array.isArray(body.findings) ? body.findings.map(String) : [];
    throw new InvalidEditError(message, findings);
  }
  if (res.status === 502) {
    throw new StageFailureError(message, typeof body.stage === "string" ? body.stage : null);
  }
  throw new ApiError(message, res.status);
}

export class ApiClient {
  constructor(public readonly baseUrl: string) {}

  private async getJson<T>(path: string, schema: z.ZodType<T>): Promise<T> {
    const res = await fetch(`${this.baseUrl}${path}`);
    await raiseForStatus(res);
    return schema.parse(await res.json());
  }

  private async postJson<T>(path: string, body: unknown, schema: z.ZodType<T>): Promise<T> {
    const res = await fetch(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    await raiseForStatus(res);
    return schema.parse(await res.json());
  }

  health(): Promise<{ status: string }> {
    return this.getJson("/health", z.object({ status: z.string() }));
  }

  codec(): Promise<CodecInfo> {
    return this.getJson("/codec", CodecInfoSchema);
  }

  async listDesigns(): Promise<DesignSummary[]> {
    return (await this.getJson("/designs", ListResponseSchema)).designs;
  }

  createDesign(intent: string, category: string, seed = 0): Promise<EditAck> {
    return this.postJson("/designs", { intent, category, seed }, EditAckSchema);
  }

  getDesign(id: string): Promise<DesignDetail> {
    return this.getJson(`/designs/${id}`, DesignDetailSchema);
  }

  applyEdit(id: string, edit: EditOp, baseVersion: number): Promise<EditAck> {
    return this.postJson(`/designs/${id}/edits`, { edit, base_version: baseVersion }, EditAckSchema);
  }

  async exportDesign(id: string, format: "svg" | "png"): Promise<Blob> {
    const res = await fetch(`${this.baseUrl}/designs/${id}/export?format=${format}`);
    await raiseForStatus(res);
    return res.blob();
  }

  exportUrl(id: string, format: "svg" | "png"): string {
    return `${this.baseUrl}/designs/${id}/export?format=${format}`;
  }
}
