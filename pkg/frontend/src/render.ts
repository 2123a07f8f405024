/**
 * HTML string templates for the operator panels. Kept DOM-free so view
 * content is testable without a browser.
 */

import { AppState } from "./app.js";
import { renderFrontSvg, STRATEGY_LABEL } from "./frontView.js";
import { renderScheduleTable, renderTesSvg } from "./scheduleView.js";
import { STRATEGIES } from "./types.js";

function esc(text: string): string {
    return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function renderStatusPanel(state: AppState): string {
    if (state.errorBanner) {
        return `<div class="banner error">${esc(state.errorBanner)}</div>`;
    }
    if (!state.run) return `<div class="banner">enter a run id</div>`;
    const run = state.run;
    const last = run.generations[run.generations.length - 1];
    const progress = last
        ? `generation ${last.generation}, ${last.evaluations} evaluations, ` +
          `archive ${last.archive_size}, ${last.valid_count} valid`
        : "no generations yet";
    return (
        `<div class="run-status status-${run.status}">` +
        `run ${esc(run.run_id)}: <strong>${run.status}</strong> (${progress})` +
        (run.error ? `<div class="banner error">${esc(run.error)}</div>` : "") +
        `</div>`
    );
}

export function renderFrontPanel(state: AppState): string {
    if (!state.frontView) return "";
    if (state.frontView.empty) {
        return `<div class="empty-state">no solutions yet</div>`;
    }
    const anyValid = state.frontView.points.some((p) => p.valid);
    const feasibility = anyValid
        ? ""
        : `<div class="empty-state no-feasible">no feasible schedule</div>`;
    return feasibility + renderFrontSvg(state.frontView);
}

export function renderStrategyPanel(state: AppState): string {
    if (!state.comparison) return "";
    const rows = state.comparison.rows
        .map(
            (row) =>
                `<tr data-strategy="${row.strategy}">` +
                `<td>${STRATEGY_LABEL[row.strategy]}</td>` +
                `<td>${row.co2_kg.toFixed(2)}</td>` +
                `<td>${row.cost_eur.toFixed(2)}</td>` +
                `<td>${row.co2_index.toFixed(2)}</td>` +
                `<td>${row.cost_index.toFixed(2)}</td>` +
                `<td><button class="pick" data-strategy="${row.strategy}">view</button></td>` +
                `</tr>`,
        )
        .join("");
    const c = state.comparison;
    return (
        `<table class="comparison"><tr><th>strategy</th><th>CO2 [kg]</th>` +
        `<th>costs [EUR]</th><th>CO2 index</th><th>costs index</th><th></th></tr>` +
        rows +
        `</table>` +
        `<p class="tradeoff">min-cost saves ${c.cost_saving_eur.toFixed(2)} EUR ` +
        `(${c.cost_saving_pct.toFixed(2)}%) over min-CO2 but emits ` +
        `${c.co2_increase_kg.toFixed(2)} kg (${c.co2_increase_pct.toFixed(2)}%) more</p>`
    );
}

export function renderSchedulePanel(state: AppState): string {
    if (!state.scheduleView) return "";
    const actuatable =
        state.selectedId !== null &&
        state.run?.has_emulator === true &&
        state.frontView?.points.find((p) => p.id === state.selectedId)?.valid === true &&
        state.emulator?.finished !== true;
    const button =
        `<button class="actuate" data-id="${state.selectedId}"` +
        `${actuatable ? "" : " disabled"}>actuate</button>`;
    return (
        `<h3>solution ${state.scheduleView.solutionId} ` +
        `(${esc(state.scheduleView.strategy)})</h3>` +
        renderTesSvg(state.scheduleView) +
        button +
        renderScheduleTable(state.scheduleView)
    );
}

export function renderEmulatorPanel(state: AppState): string {
    if (!state.emulator) return "";
    const e = state.emulator;
    const records = e.records
        .map(
            (r) =>
                `<tr><td>${r.cycle}</td><td>${r.start_instant}</td>` +
                `<td>${r.fallback ? "fallback" : "chosen"}</td>` +
                `<td>${r.cost_eur.toFixed(2)}</td><td>${r.co2_kg.toFixed(2)}</td>` +
                `<td>${r.t_tes_end.toFixed(2)}</td></tr>`,
        )
        .join("");
    const replan = state.replanPrompt
        ? `<div class="banner replan-prompt">plan is stale - ` +
          `<button class="replan">re-plan from the current state</button></div>`
        : "";
    return (
        `<div class="emulator-state" data-t-tes="${e.t_tes}">` +
        `TES <strong>${e.t_tes.toFixed(2)} degC</strong>, instant ${e.instant}, ` +
        `epoch ${e.epoch}${e.finished ? ", episode finished" : ""}</div>` +
        replan +
        (records
            ? `<table class="episode"><tr><th>cycle</th><th>start</th><th>via</th>` +
              `<th>cost [EUR]</th><th>CO2 [kg]</th><th>TES end</th></tr>${records}</table>`
            : "")
    );
}

export function renderNotice(state: AppState): string {
    return state.notice ? `<div class="notice">${esc(state.notice)}</div>` : "";
}

export function renderApp(state: AppState): string {
    return (
        `<section id="status">${renderStatusPanel(state)}</section>` +
        `<section id="front">${renderFrontPanel(state)}</section>` +
        `<section id="strategies">${renderStrategyPanel(state)}</section>` +
        `<section id="schedule">${renderSchedulePanel(state)}</section>` +
        `<section id="emulator">${renderEmulatorPanel(state)}</section>` +
        `<section id="notice">${renderNotice(state)}</section>`
    );
}

export { STRATEGIES };
