// Thin fetch wrappers for the two service endpoints. Served from /ui/ on
// the same origin, so relative API paths work unmodified.

import type { ApiErrorBody, ClusterRequest, ClusterResponse } from "./types.js";

export class ServiceError extends Error {
  status: number;
  field?: string;

  constructor(status: number, message: string, field?: string) {
    super(message);
    this.status = status;
    this.field = field;
  }
}

async function parseError(response: Response): Promise<ServiceError> {
  let message = `request failed (${response.status})`;
  let field: string | undefined;
  try {
    const body = (await response.json()) as ApiErrorBody;
    if (body && body.error) {
      message = body.error.message;
      field = body.error.field;
    }
  } catch {
    // non-JSON error body; keep the generic message
  }
  return new ServiceError(response.status, message, field);
}

export async function postCluster(request: ClusterRequest): Promise<ClusterResponse> {
  const response = await fetch("/api/cluster", {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(request),
  });
  if (!response.ok) {
    throw await parseError(response);
  }
  return (await response.json()) as ClusterResponse;
}

export async function getHealth(): Promise<{ status: string; version: string; backend: string }> {
  const response = await fetch("/api/health");
  if (!response.ok) {
    throw await parseError(response);
  }
  return response.json();
}
