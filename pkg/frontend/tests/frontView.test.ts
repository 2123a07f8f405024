/**
 * Front view contract: points and highlights come verbatim from the
 * service, invalid solutions render distinctly, error states are explicit.
 */

import { describe, expect, it } from "vitest";

import { AppController } from "../src/app.js";
import { buildFrontView, renderFrontSvg } from "../src/frontView.js";
import { renderApp, renderFrontPanel, renderStatusPanel } from "../src/render.js";
import { STRATEGIES } from "../src/types.js";
import { FixtureApi, REFERENCE, RUN_ID } from "./fixtureService.js";

describe("front view against the fixture service", () => {
    it("renders the three valid reference points plus gray invalid ones", async () => {
        const api = new FixtureApi();
        const controller = new AppController(api);
        await controller.loadRun(RUN_ID);

        const view = controller.getState().frontView;
        expect(view).not.toBeNull();
        const validPoints = view!.points.filter((p) => p.valid);
        expect(validPoints).toHaveLength(3);
        expect(validPoints.map((p) => p.id)).toEqual([0, 1, 2]);

        const svg = renderFrontSvg(view!);
        expect(svg.match(/class="point valid"/g)).toHaveLength(3);
        expect(svg.match(/class="point invalid"/g)).toHaveLength(2);
    });

    it("places the three strategy highlights on the decision endpoint's ids", async () => {
        const api = new FixtureApi();
        const controller = new AppController(api);
        await controller.loadRun(RUN_ID);

        const view = controller.getState().frontView!;
        for (const strategy of STRATEGIES) {
            const served = await api.decide(RUN_ID, strategy);
            expect(view.highlights[strategy]).toBe(served.solution.id);
        }
        // three distinct highlighted points, as in the reference comparison
        const ids = new Set(Object.values(view.highlights));
        expect(ids.size).toBe(3);

        const svg = renderFrontSvg(view);
        for (const strategy of STRATEGIES) {
            expect(svg).toContain(`class="highlight ${strategy}"`);
            expect(svg).toContain(
                `class="highlight ${strategy}" data-id="${REFERENCE[strategy].id}"`,
            );
        }
    });

    it("shows displayed numbers exactly as served", async () => {
        const api = new FixtureApi();
        const controller = new AppController(api);
        await controller.loadRun(RUN_ID);

        const state = controller.getState();
        const html = renderApp(state);
        expect(html).toContain("126396.19");
        expect(html).toContain("67464.70");
        expect(html).toContain("107.93");
        expect(html).toContain("98.89");
        expect(html).toContain("757.89");
    });

    it("reports an explicit empty state for an empty front", () => {
        const view = buildFrontView(
            { run_id: RUN_ID, status: "terminated", epoch: 0, members: [] },
            {},
        );
        expect(view.empty).toBe(true);
        expect(renderFrontSvg(view)).toContain("no solutions yet");
    });

    it("shows the no-feasible-schedule state when the front has no valid point", () => {
        const front = {
            run_id: RUN_ID,
            status: "terminated" as const,
            epoch: 0,
            members: [
                { id: 0, cost_eur: 1.0, co2_kg: 1.0, v_el: 0, v_tes: 3,
                  v_end: 0.0, valid: false },
            ],
        };
        const html = renderFrontPanel({
            ...emptyState(),
            frontView: buildFrontView(front, {}),
        });
        expect(html).toContain("no feasible schedule");
    });

    it("shows an error banner for an unknown run", async () => {
        const controller = new AppController(new FixtureApi());
        await controller.loadRun("999");
        const state = controller.getState();
        expect(state.errorBanner).toContain("not found");
        expect(renderStatusPanel(state)).toContain("not found");
        expect(state.frontView).toBeNull();
    });
});

function emptyState() {
    return new AppController(new FixtureApi()).getState();
}
