/**
 * Pareto front view model and SVG rendering.
 *
 * Every rendered point comes verbatim from the service's front endpoint and
 * every strategy highlight from its decision endpoint; the client never
 * computes welfare metrics of its own.
 */

import type { DecisionResponse, FrontResponse, Strategy } from "./types.js";
import { STRATEGIES } from "./types.js";

export type FrontPoint = {
    id: number;
    co2: number;
    cost: number;
    valid: boolean;
    highlights: Strategy[];
};

export type AxisRange = { min: number; max: number };

export type FrontView = {
    runId: string;
    points: FrontPoint[];
    highlights: Partial<Record<Strategy, number>>; // strategy -> solution id
    co2Range: AxisRange;
    costRange: AxisRange;
    empty: boolean;
};

function range(values: number[]): AxisRange {
    if (values.length === 0) return { min: 0, max: 1 };
    const min = Math.min(...values);
    const max = Math.max(...values);
    return max > min ? { min, max } : { min: min - 0.5, max: max + 0.5 };
}

export function buildFrontView(
    front: FrontResponse,
    decisions: Partial<Record<Strategy, DecisionResponse>>,
): FrontView {
    const highlights: Partial<Record<Strategy, number>> = {};
    for (const strategy of STRATEGIES) {
        const decision = decisions[strategy];
        if (decision) highlights[strategy] = decision.solution.id;
    }
    const points = front.members.map((member) => ({
        id: member.id,
        co2: member.co2_kg,
        cost: member.cost_eur,
        valid: member.valid,
        highlights: STRATEGIES.filter((s) => highlights[s] === member.id),
    }));
    return {
        runId: front.run_id,
        points,
        highlights,
        co2Range: range(points.map((p) => p.co2)),
        costRange: range(points.map((p) => p.cost)),
        empty: points.length === 0,
    };
}

const WIDTH = 560;
const HEIGHT = 360;
const PAD = 48;

function scale(value: number, axis: AxisRange, pixels: number): number {
    return ((value - axis.min) / (axis.max - axis.min)) * pixels;
}

export const STRATEGY_LABEL: Record<Strategy, string> = {
    "elitist-co2": "min CO2",
    utilitarian: "compromise",
    "elitist-cost": "min cost",
};

/** Scatter plot: CO2 on x, cost on y, gray = invalid, red = valid. */
export function renderFrontSvg(view: FrontView): string {
    if (view.empty) {
        return `<svg class="front-plot" viewBox="0 0 ${WIDTH} ${HEIGHT}">` +
            `<text x="${WIDTH / 2}" y="${HEIGHT / 2}" text-anchor="middle" ` +
            `class="empty-front">no solutions yet</text></svg>`;
    }
    const parts: string[] = [];
    parts.push(`<svg class="front-plot" viewBox="0 0 ${WIDTH} ${HEIGHT}">`);
    parts.push(
        `<line class="axis" x1="${PAD}" y1="${HEIGHT - PAD}" x2="${WIDTH - 8}" y2="${HEIGHT - PAD}"/>`,
        `<line class="axis" x1="${PAD}" y1="${HEIGHT - PAD}" x2="${PAD}" y2="8"/>`,
        `<text class="axis-label" x="${WIDTH / 2}" y="${HEIGHT - 10}" text-anchor="middle">CO2 [kg]</text>`,
        `<text class="axis-label" x="14" y="${HEIGHT / 2}" text-anchor="middle" transform="rotate(-90 14 ${HEIGHT / 2})">costs [EUR]</text>`,
    );
    const plotW = WIDTH - PAD - 16;
    const plotH = HEIGHT - PAD - 16;
    for (const point of view.points) {
        const x = PAD + scale(point.co2, view.co2Range, plotW);
        const y = HEIGHT - PAD - scale(point.cost, view.costRange, plotH);
        const cls = point.valid ? "point valid" : "point invalid";
        parts.push(
            `<circle class="${cls}" data-id="${point.id}" cx="${x.toFixed(1)}" ` +
            `cy="${y.toFixed(1)}" r="${point.valid ? 5 : 3.5}"/>`,
        );
        for (const strategy of point.highlights) {
            parts.push(
                `<circle class="highlight ${strategy}" data-id="${point.id}" ` +
                `cx="${x.toFixed(1)}" cy="${y.toFixed(1)}" r="10"/>`,
                `<text class="highlight-label" x="${(x + 13).toFixed(1)}" ` +
                `y="${(y - 8).toFixed(1)}">${STRATEGY_LABEL[strategy]}</text>`,
            );
        }
    }
    parts.push("</svg>");
    return parts.join("");
}
