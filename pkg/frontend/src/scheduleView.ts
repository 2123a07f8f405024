/**
 * Schedule/prediction view model: per-instant setpoints, the predicted TES
 * temperature with the feasible band overlay, and per-instant cashflows.
 * Everything is rendered verbatim from the decision endpoint's response.
 */

import type { DecisionResponse } from "./types.js";

export type ScheduleRow = {
    instant: number;
    c: number;
    g: number;
    hp: number;
    d: number;
    t_tes: number;
    cost: number;
    co2: number;
};

export type ScheduleView = {
    solutionId: number;
    strategy: string;
    rows: ScheduleRow[];
    band: [number, number];
    tTes: number[];
};

export function buildScheduleView(decision: DecisionResponse): ScheduleView {
    const { schedule, trajectory } = decision;
    const rows = schedule.c.map((c, i) => ({
        instant: i,
        c,
        g: schedule.g[i] ?? 0,
        hp: schedule.hp[i] ?? 0,
        d: schedule.d[i] ?? 0,
        t_tes: trajectory.t_tes[i] ?? NaN,
        cost: trajectory.cost_eur[i] ?? NaN,
        co2: trajectory.co2_kg[i] ?? NaN,
    }));
    return {
        solutionId: decision.solution.id,
        strategy: decision.strategy,
        rows,
        band: decision.tes_band,
        tTes: trajectory.t_tes,
    };
}

const WIDTH = 560;
const HEIGHT = 180;
const PAD = 36;

/** TES temperature polyline with the feasible band drawn behind it. */
export function renderTesSvg(view: ScheduleView): string {
    const [lo, hi] = view.band;
    const values = view.tTes;
    const min = Math.min(lo, ...values) - 2;
    const max = Math.max(hi, ...values) + 2;
    const sx = (i: number) =>
        PAD + (i / Math.max(values.length - 1, 1)) * (WIDTH - PAD - 10);
    const sy = (t: number) =>
        HEIGHT - PAD - ((t - min) / (max - min)) * (HEIGHT - PAD - 8);
    const bandTop = sy(hi);
    const bandBottom = sy(lo);
    const line = values
        .map((t, i) => `${sx(i).toFixed(1)},${sy(t).toFixed(1)}`)
        .join(" ");
    return (
        `<svg class="tes-plot" viewBox="0 0 ${WIDTH} ${HEIGHT}">` +
        `<rect class="tes-band" x="${PAD}" y="${bandTop.toFixed(1)}" ` +
        `width="${WIDTH - PAD - 10}" height="${(bandBottom - bandTop).toFixed(1)}" ` +
        `data-band="${lo},${hi}"/>` +
        `<polyline class="tes-line" points="${line}"/>` +
        `<text class="axis-label" x="${PAD}" y="14">TES temperature [degC], ` +
        `band ${lo}-${hi}</text>` +
        `</svg>`
    );
}

export function renderScheduleTable(view: ScheduleView): string {
    const header =
        "<tr><th>h</th><th>CHP</th><th>GB</th><th>HP</th>" +
        "<th>DH [W]</th><th>TES [degC]</th><th>cost [EUR]</th><th>CO2 [kg]</th></tr>";
    const rows = view.rows
        .map(
            (r) =>
                `<tr><td>${r.instant}</td><td>${r.c}</td><td>${r.g}</td>` +
                `<td>${r.hp}</td><td>${r.d}</td><td>${r.t_tes.toFixed(2)}</td>` +
                `<td>${r.cost.toFixed(2)}</td><td>${r.co2.toFixed(2)}</td></tr>`,
        )
        .join("");
    return `<table class="schedule-table">${header}${rows}</table>`;
}
