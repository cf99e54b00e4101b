// DOM + canvas rendering. Logic-free: everything drawn comes straight
// from the DashboardState view models.

import { DashboardState, StripSample } from "./state.js";

const BAND_COLORS: Record<string, string> = {
    high: "#e4572e",
    mid: "#9aa0a6",
    low: "#3d7dd8",
    unvoiced: "transparent",
};

const LABEL_COLORS: Record<string, string> = {
    active_positive: "#2e9e4f",
    active_negative: "#e4572e",
    neutral: "#9aa0a6",
    sober_negative: "#3d7dd8",
    mixed_calm_positive: "#c78f1e",
    insufficient: "#6b7076",
};

export interface Elements {
    amplitude: HTMLCanvasElement;
    pitch: HTMLCanvasElement;
    bar: HTMLElement;
    badge: HTMLElement;
    ticker: HTMLElement;
    status: HTMLElement;
    suggestionText: HTMLElement;
    suggestionMeta: HTMLElement;
    suggestionButton: HTMLButtonElement;
}

function drawStrip(
    canvas: HTMLCanvasElement,
    samples: readonly StripSample[],
    value: (s: StripSample) => number | null,
    scale: [number, number],
    windowMs: number,
): void {
    const ctx = canvas.getContext("2d");
    if (!ctx) return;
    const { width, height } = canvas;
    ctx.clearRect(0, 0, width, height);
    if (samples.length === 0) return;
    const tEnd = samples[samples.length - 1].tMs;
    const tStart = tEnd - windowMs;
    const [lo, hi] = scale;
    for (const sample of samples) {
        const v = value(sample);
        if (v === null) continue; // unvoiced gap
        const x = ((sample.tMs - tStart) / windowMs) * width;
        const h = Math.max(1, ((v - lo) / (hi - lo)) * height);
        ctx.fillStyle = BAND_COLORS[sample.band] ?? "#9aa0a6";
        ctx.fillRect(x, height - h, 2, h);
    }
}

export function render(state: DashboardState, el: Elements): void {
    const samples = state.strip.samples();
    drawStrip(el.amplitude, samples, (s) => s.rms, state.strip.rmsScale, state.strip.windowMs);
    drawStrip(el.pitch, samples, (s) => s.f0Hz, state.strip.f0Scale, state.strip.windowMs);

    el.bar.replaceChildren(
        ...state.bar.map((chip) => {
            const span = document.createElement("span");
            span.className = `chip ${chip.polarity > 0 ? "pos" : "neg"}`;
            span.textContent = chip.word;
            return span;
        }),
    );

    if (state.snapshot) {
        const s = state.snapshot;
        el.badge.textContent = s.discrepancy ? `${s.label} ⚠ tone/text mismatch` : s.label;
        el.badge.style.background = LABEL_COLORS[s.label] ?? "#6b7076";
    } else {
        el.badge.textContent = "no snapshot yet";
        el.badge.style.background = "#6b7076";
    }

    el.ticker.replaceChildren(
        ...state.ticker.map((line) => {
            const div = document.createElement("div");
            div.textContent = `[${(line.startMs / 1000).toFixed(1)}s] ${line.text}`;
            return div;
        }),
    );

    const stale = state.degraded ? " — transcripts stale" : "";
    el.status.textContent = `${state.connection}${stale}`;
    el.status.className = `status ${state.connection}${state.degraded ? " degraded" : ""}`;

    const sug = state.suggestion;
    el.suggestionButton.disabled = sug.phase === "pending" || state.connection !== "live";
    el.suggestionButton.title =
        sug.phase === "pending" ? "a request is already in flight" : "ask for a suggestion";
    if (sug.phase === "pending") {
        el.suggestionText.textContent = "thinking…";
        el.suggestionMeta.textContent = "";
    } else if (sug.phase === "done") {
        el.suggestionText.textContent = sug.text;
        el.suggestionMeta.textContent = `${sug.source} · ${sug.latencyMs} ms`;
    } else if (sug.phase === "error") {
        el.suggestionText.textContent = `request failed: ${sug.error}`;
        el.suggestionMeta.textContent = "";
    } else {
        el.suggestionText.textContent = "";
        el.suggestionMeta.textContent = "";
    }
}
