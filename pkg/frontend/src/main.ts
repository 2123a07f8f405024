/**
 * Browser bootstrap: wires the controller to the DOM and polls running
 * optimizations. The run id lives in the URL hash so reloads keep context.
 */

import { HttpApi } from "./api.js";
import { AppController } from "./app.js";
import { renderApp } from "./render.js";
import type { Strategy } from "./types.js";

const POLL_MS = 1500;

function start(): void {
    const root = document.getElementById("app");
    const input = document.getElementById("run-id") as HTMLInputElement | null;
    const loadButton = document.getElementById("load-run");
    if (!root || !input || !loadButton) throw new Error("missing app shell");

    const controller = new AppController(new HttpApi(""), (state) => {
        root.innerHTML = renderApp(state);
    });

    let pollTimer: number | undefined;

    async function load(runId: string): Promise<void> {
        window.location.hash = runId;
        window.clearInterval(pollTimer);
        await controller.loadRun(runId);
        pollTimer = window.setInterval(async () => {
            const state = controller.getState();
            if (!state.run || state.runId === null) return;
            if (state.run.status === "pending" || state.run.status === "running") {
                await controller.loadRun(state.runId);
            }
        }, POLL_MS);
    }

    loadButton.addEventListener("click", () => {
        if (input.value) void load(input.value.trim());
    });

    root.addEventListener("click", (event) => {
        const target = event.target as HTMLElement;
        if (target.matches("circle.point, circle.highlight")) {
            controller.select(Number(target.getAttribute("data-id")));
        } else if (target.matches("button.pick")) {
            controller.selectStrategy(target.getAttribute("data-strategy") as Strategy);
        } else if (target.matches("button.actuate") && !target.hasAttribute("disabled")) {
            void controller.actuateSelected();
        } else if (target.matches("button.replan")) {
            void controller.replan().then((child) => {
                if (child) void load(child);
            });
        }
    });

    const fromHash = window.location.hash.replace(/^#/, "");
    if (fromHash) {
        input.value = fromHash;
        void load(fromHash);
    }
}

document.addEventListener("DOMContentLoaded", start);
