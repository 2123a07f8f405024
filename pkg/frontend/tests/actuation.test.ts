/**
 * Human-in-the-loop actuation flow: emulator panel updates from service
 * state, stale plans prompt a re-plan, invalid solutions cannot be actuated.
 */

import { describe, expect, it } from "vitest";

import { AppController } from "../src/app.js";
import { renderEmulatorPanel, renderSchedulePanel } from "../src/render.js";
import { FixtureApi, RUN_ID } from "./fixtureService.js";

async function loadedController(api: FixtureApi): Promise<AppController> {
    const controller = new AppController(api);
    await controller.loadRun(RUN_ID);
    return controller;
}

describe("actuation against the fixture service", () => {
    it("actuating the compromise updates the emulator panel to the served state", async () => {
        const api = new FixtureApi();
        const controller = await loadedController(api);

        controller.selectStrategy("utilitarian");
        expect(controller.getState().selectedId).toBe(1);
        expect(controller.isActuatable(1)).toBe(true);

        await controller.actuateSelected();

        const state = controller.getState();
        expect(state.emulator).not.toBeNull();
        expect(state.emulator!.t_tes).toBe(api.emulator.t_tes);
        expect(state.emulator!.instant).toBe(1);
        expect(state.emulator!.epoch).toBe(1);

        const panel = renderEmulatorPanel(state);
        expect(panel).toContain(`data-t-tes="${api.emulator.t_tes}"`);
        expect(panel).toContain(api.emulator.t_tes.toFixed(2));
        expect(state.replanPrompt).toBe(false);
    });

    it("a stale second actuation raises the re-plan prompt", async () => {
        const api = new FixtureApi();
        const controller = await loadedController(api);
        controller.selectStrategy("utilitarian");
        await controller.actuateSelected();
        expect(controller.getState().replanPrompt).toBe(false);

        // the plan's epoch is now behind the emulator's
        await controller.actuateSelected();
        const state = controller.getState();
        expect(state.replanPrompt).toBe(true);
        expect(renderEmulatorPanel(state)).toContain("re-plan");

        const child = await controller.replan();
        expect(child).toBe(String(Number(RUN_ID) + 1));
        expect(controller.getState().replanPrompt).toBe(false);
    });

    it("invalid solutions cannot be actuated client-side", async () => {
        const api = new FixtureApi();
        const controller = await loadedController(api);

        controller.select(3); // gray point
        expect(controller.isActuatable(3)).toBe(false);

        await controller.actuateSelected();
        expect(api.actuateCalls).toHaveLength(0); // never reached the service
        expect(controller.getState().notice).toContain("cannot be actuated");
        expect(controller.getState().emulator!.instant).toBe(0);
    });

    it("the actuate control renders disabled for an invalid selection", async () => {
        const api = new FixtureApi();
        const controller = await loadedController(api);
        controller.selectStrategy("utilitarian");
        const enabled = renderSchedulePanel(controller.getState());
        expect(enabled).toContain('<button class="actuate" data-id="1">');

        // force a schedule view onto an invalid selection: still disabled
        const state = controller.getState();
        const disabled = renderSchedulePanel({ ...state, selectedId: 3 });
        expect(disabled).toContain("disabled");
    });

    it("the service rejects an invalid solution if one is forced through", async () => {
        const api = new FixtureApi();
        await expect(api.actuate(RUN_ID, 3, 0)).rejects.toMatchObject({
            status: 409,
            detail: { reason: "invalid-solution" },
        });
        expect(api.emulator.instant).toBe(0);
    });

    it("strategy table pick buttons select the served solution", async () => {
        const api = new FixtureApi();
        const controller = await loadedController(api);
        controller.selectStrategy("elitist-cost");
        const state = controller.getState();
        expect(state.selectedId).toBe(2);
        expect(state.scheduleView!.solutionId).toBe(2);
        expect(state.scheduleView!.band).toEqual([43.96, 79.84]);
    });
});
