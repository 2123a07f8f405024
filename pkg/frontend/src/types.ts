/**
 * DTO types mirroring the dispatch service's JSON responses.
 */

export type Strategy = "elitist-co2" | "utilitarian" | "elitist-cost";

export const STRATEGIES: Strategy[] = [
    "elitist-co2",
    "utilitarian",
    "elitist-cost",
];

export type RunStatus = "pending" | "running" | "terminated" | "failed";

export type GenerationStats = {
    generation: number;
    evaluations: number;
    archive_size: number;
    min_cost: number;
    min_co2: number;
    valid_count: number;
};

export type RunRecord = {
    run_id: string;
    status: RunStatus;
    error: string | null;
    parent: string | null;
    generations: GenerationStats[];
    archive_size: number;
    plan_epoch: number | null;
    has_emulator: boolean;
};

export type FrontMember = {
    id: number;
    cost_eur: number;
    co2_kg: number;
    v_el: number;
    v_tes: number;
    v_end: number;
    valid: boolean;
};

export type FrontResponse = {
    run_id: string;
    status: RunStatus;
    epoch: number | null;
    members: FrontMember[];
};

export type DecisionResponse = {
    run_id: string;
    strategy: Strategy;
    solution: FrontMember;
    epoch: number | null;
    schedule: {
        c: number[];
        g: number[];
        hp: number[];
        d: number[];
    };
    trajectory: {
        t_tes: number[];
        cost_eur: number[];
        co2_kg: number[];
    };
    tes_band: [number, number];
};

export type ComparisonRow = {
    strategy: Strategy;
    co2_kg: number;
    cost_eur: number;
    co2_index: number;
    cost_index: number;
    solution_id: number;
};

export type ComparisonResponse = {
    rows: ComparisonRow[];
    cost_saving_eur: number;
    cost_saving_pct: number;
    co2_increase_kg: number;
    co2_increase_pct: number;
};

export type EmulatorRecord = {
    cycle: number;
    start_instant: number;
    fallback: boolean;
    cost_eur: number;
    co2_kg: number;
    t_tes_end: number;
};

export type EmulatorState = {
    t_tes: number;
    q_tes: number;
    instant: number;
    epoch: number;
    cycle: number;
    finished: boolean;
    records: EmulatorRecord[];
};

export type ConflictDetail = {
    reason: string;
    message?: string;
    epoch?: number;
};
