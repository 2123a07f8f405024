/**
 * Application controller: loads a run, asks the service for the three
 * strategy decisions, tracks the selected solution, and drives actuation
 * and re-planning. Pure state machine over the Api interface; rendering
 * and polling live elsewhere.
 */

import { Api, ApiError } from "./api.js";
import { buildFrontView, FrontView } from "./frontView.js";
import { buildScheduleView, ScheduleView } from "./scheduleView.js";
import type {
    ComparisonResponse,
    DecisionResponse,
    EmulatorState,
    RunRecord,
    Strategy,
} from "./types.js";
import { STRATEGIES } from "./types.js";

export type AppState = {
    runId: string | null;
    run: RunRecord | null;
    frontView: FrontView | null;
    decisions: Partial<Record<Strategy, DecisionResponse>>;
    comparison: ComparisonResponse | null;
    selectedId: number | null;
    scheduleView: ScheduleView | null;
    emulator: EmulatorState | null;
    replanPrompt: boolean;
    errorBanner: string | null;
    notice: string | null;
};

function initialState(): AppState {
    return {
        runId: null,
        run: null,
        frontView: null,
        decisions: {},
        comparison: null,
        selectedId: null,
        scheduleView: null,
        emulator: null,
        replanPrompt: false,
        errorBanner: null,
        notice: null,
    };
}

export class AppController {
    private state: AppState = initialState();

    constructor(
        private readonly api: Api,
        private readonly onChange: (state: AppState) => void = () => {},
    ) {}

    getState(): AppState {
        return this.state;
    }

    private update(patch: Partial<AppState>): void {
        this.state = { ...this.state, ...patch };
        this.onChange(this.state);
    }

    /** Load run status and front; on a terminated run also fetch decisions. */
    async loadRun(runId: string): Promise<void> {
        this.update({ ...initialState(), runId });
        let run: RunRecord;
        try {
            run = await this.api.getRun(runId);
        } catch (err) {
            this.update({
                errorBanner: err instanceof ApiError && err.status === 404
                    ? `run ${runId} not found`
                    : `failed to load run ${runId}: ${String(err)}`,
            });
            return;
        }
        this.update({ run });
        await this.refreshFront();
        if (run.has_emulator) {
            await this.refreshEmulator();
        }
    }

    /** Re-fetch the front and, once terminated, the strategy decisions. */
    async refreshFront(): Promise<void> {
        const runId = this.state.runId;
        if (runId === null) return;
        const front = await this.api.getFront(runId);
        let decisions: Partial<Record<Strategy, DecisionResponse>> = {};
        let comparison: ComparisonResponse | null = null;
        if (front.status === "terminated" && front.members.length > 0) {
            decisions = await this.fetchDecisions(runId);
            comparison = await this.api.getComparison(runId).catch(() => null);
        }
        this.update({
            frontView: buildFrontView(front, decisions),
            decisions,
            comparison,
        });
    }

    private async fetchDecisions(
        runId: string,
    ): Promise<Partial<Record<Strategy, DecisionResponse>>> {
        const decisions: Partial<Record<Strategy, DecisionResponse>> = {};
        for (const strategy of STRATEGIES) {
            try {
                decisions[strategy] = await this.api.decide(runId, strategy);
            } catch (err) {
                if (err instanceof ApiError && err.status === 409) {
                    // no feasible schedule: leave highlights empty
                    return {};
                }
                throw err;
            }
        }
        return decisions;
    }

    async refreshEmulator(): Promise<void> {
        if (this.state.runId === null) return;
        const emulator = await this.api.getEmulator(this.state.runId);
        this.update({ emulator });
    }

    /** Select a front point; decisions carry the schedule for strategy picks. */
    select(solutionId: number): void {
        const decision = Object.values(this.state.decisions).find(
            (d) => d && d.solution.id === solutionId,
        );
        this.update({
            selectedId: solutionId,
            scheduleView: decision ? buildScheduleView(decision) : null,
        });
    }

    selectStrategy(strategy: Strategy): void {
        const decision = this.state.decisions[strategy];
        if (decision) this.select(decision.solution.id);
    }

    /** A solution may be actuated only if the service reports it valid. */
    isActuatable(solutionId: number): boolean {
        const point = this.state.frontView?.points.find((p) => p.id === solutionId);
        if (!point || !point.valid) return false;
        if (!this.state.run?.has_emulator) return false;
        if (this.state.emulator?.finished) return false;
        return true;
    }

    /**
     * Actuate the selected solution. Invalid solutions never reach the
     * service; a stale-epoch conflict raises the re-plan prompt instead.
     */
    async actuateSelected(): Promise<void> {
        const { runId, selectedId, run } = this.state;
        if (runId === null || selectedId === null) {
            this.update({ notice: "select a solution first" });
            return;
        }
        if (!this.isActuatable(selectedId)) {
            this.update({
                notice: `solution ${selectedId} cannot be actuated (invalid or no emulator)`,
            });
            return;
        }
        try {
            const emulator = await this.api.actuate(
                runId, selectedId, run?.plan_epoch ?? null);
            this.update({
                emulator,
                replanPrompt: false,
                notice: `actuated solution ${selectedId}; TES at ` +
                    `${emulator.t_tes.toFixed(2)} degC`,
            });
        } catch (err) {
            if (err instanceof ApiError && err.status === 409) {
                if (err.reason === "stale-epoch") {
                    this.update({
                        replanPrompt: true,
                        notice: "emulator advanced since this plan; re-plan required",
                    });
                    return;
                }
                this.update({ notice: `actuation rejected: ${err.reason}` });
                return;
            }
            throw err;
        }
    }

    /** Start a child run re-planned from the live emulator state. */
    async replan(): Promise<string | null> {
        if (this.state.runId === null) return null;
        const child = await this.api.replan(this.state.runId);
        this.update({ replanPrompt: false, notice: `re-planning as run ${child.run_id}` });
        return child.run_id;
    }
}
