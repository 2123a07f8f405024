/**
 * Typed client for the dispatch service. The controller depends only on the
 * `Api` interface, so tests substitute a fixture without touching the DOM.
 */

import type {
    ComparisonResponse,
    ConflictDetail,
    DecisionResponse,
    EmulatorState,
    FrontResponse,
    RunRecord,
    Strategy,
} from "./types.js";

export class ApiError extends Error {
    constructor(
        readonly status: number,
        readonly detail: ConflictDetail | string,
    ) {
        super(typeof detail === "string" ? detail : detail.reason);
    }

    get reason(): string {
        return typeof this.detail === "string" ? this.detail : this.detail.reason;
    }
}

export interface Api {
    getRun(runId: string): Promise<RunRecord>;
    getFront(runId: string): Promise<FrontResponse>;
    decide(runId: string, strategy: Strategy): Promise<DecisionResponse>;
    getComparison(runId: string): Promise<ComparisonResponse>;
    actuate(runId: string, solutionId: number, epoch: number | null): Promise<EmulatorState>;
    getEmulator(runId: string): Promise<EmulatorState>;
    replan(runId: string): Promise<{ run_id: string }>;
}

export class HttpApi implements Api {
    constructor(private readonly baseUrl: string = "") {}

    private async request<T>(path: string, init?: RequestInit): Promise<T> {
        const response = await fetch(this.baseUrl + path, init);
        const body = await response.json().catch(() => null);
        if (!response.ok) {
            throw new ApiError(response.status, body?.detail ?? response.statusText);
        }
        return body as T;
    }

    getRun(runId: string): Promise<RunRecord> {
        return this.request(`/runs/${runId}`);
    }

    getFront(runId: string): Promise<FrontResponse> {
        return this.request(`/runs/${runId}/front`);
    }

    decide(runId: string, strategy: Strategy): Promise<DecisionResponse> {
        return this.request(`/runs/${runId}/decision`, {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify({ strategy }),
        });
    }

    getComparison(runId: string): Promise<ComparisonResponse> {
        return this.request(`/runs/${runId}/comparison`);
    }

    actuate(runId: string, solutionId: number, epoch: number | null): Promise<EmulatorState> {
        return this.request(`/runs/${runId}/actuate`, {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify({ solution_id: solutionId, epoch }),
        });
    }

    getEmulator(runId: string): Promise<EmulatorState> {
        return this.request(`/runs/${runId}/emulator`);
    }

    replan(runId: string): Promise<{ run_id: string }> {
        return this.request(`/runs/${runId}/replan`, { method: "POST" });
    }
}
