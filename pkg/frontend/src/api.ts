// Typed client for the trajectory-correction service. The UI never computes
// trajectory data itself; everything it displays comes back from these calls.

export interface TrajectoryPayload {
    dt: number;
    samples: number[][];
}

export interface DmpDocument {
    dims: number;
    tau: number;
    alpha_z: number;
    beta_z: number;
    alpha_x: number;
    n_basis: number;
    centers: number[];
    widths: number[];
    weights: number[][];
    goal: number[];
    start: number[];
    metadata: { created_at: string; context: string };
}

export interface SplitInfo {
    M: number;
    d_m: number;
    junction_index: number;
    corrective_cut: number;
}

export interface CorrectionPayload {
    merged: TrajectoryPayload;
    dmp: DmpDocument;
    split: SplitInfo;
    diagnostics: Record<string, number>;
}

export interface FitRequest {
    trajectory: string;
    n_basis?: number;
    name?: string;
}

export interface RolloutRequest {
    dmp: string | DmpDocument;
    start?: number[];
    dt?: number;
    duration?: number;
}

export interface CorrectRequest {
    deficient: string;
    corrective: string;
    cut: number;
    lambda?: number;
    name?: string;
}

export class ServiceError extends Error {
    constructor(readonly status: number, readonly code: string, reason: string) {
        super(reason);
    }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ServiceClient {
    constructor(
        private readonly baseUrl: string,
        private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
    ) {}

    private async post<T>(path: string, body: unknown, signal?: AbortSignal): Promise<T> {
        const response = await this.fetchFn(`${this.baseUrl}${path}`, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(body),
            signal,
        });
        return this.decode<T>(response);
    }

    private async decode<T>(response: Response): Promise<T> {
        const payload = await response.json();
        if (!response.ok) {
            const error = payload?.error ?? {};
            throw new ServiceError(response.status, error.code ?? "unknown", error.reason ?? "request failed");
        }
        return payload as T;
    }

    async createSession(): Promise<string> {
        const payload = await this.post<{ id: string }>("/sessions", {});
        return payload.id;
    }

    async uploadTrajectory(session: string, name: string, dt: number, samples: number[][]): Promise<void> {
        await this.post(`/sessions/${session}/trajectories`, { name, dt, samples });
    }

    async fit(session: string, request: FitRequest): Promise<DmpDocument> {
        return this.post(`/sessions/${session}/fit`, request);
    }

    async rollout(session: string, request: RolloutRequest, signal?: AbortSignal): Promise<TrajectoryPayload> {
        return this.post(`/sessions/${session}/rollout`, request, signal);
    }

    async correct(session: string, request: CorrectRequest, signal?: AbortSignal): Promise<CorrectionPayload> {
        return this.post(`/sessions/${session}/correct`, request, signal);
    }

    async inventory(session: string): Promise<{
        id: string;
        trajectories: Record<string, { n_samples: number; dims: number; dt: number }>;
        dmps: Record<string, { dims: number; n_basis: number; tau: number }>;
    }> {
        const response = await this.fetchFn(`${this.baseUrl}/sessions/${session}`, { method: "GET" });
        return this.decode(response);
    }
}
