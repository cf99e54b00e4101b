// Pure view state: the dashboard is a fold over SessionEvents, so
// replaying a recorded log reproduces the exact same final state.

import { Band, SessionEvent } from "./protocol.js";

export const STRIP_WINDOW_MS = 60_000;
// must hold at least as many events as the server-side subscriber queue
// (1024) so the client never drops what the server managed to deliver
export const STRIP_CAPACITY = 4096;
export const TICKER_LINES = 8;

export interface StripSample {
    tMs: number;
    f0Hz: number | null; // null renders as a gap (unvoiced)
    rms: number;
    band: Band;
}

export class StripViewModel {
    readonly windowMs: number;
    readonly capacity: number;
    readonly f0Scale: [number, number] = [60, 400];
    readonly rmsScale: [number, number] = [0, 1];
    private buffer: StripSample[] = [];

    constructor(windowMs = STRIP_WINDOW_MS, capacity = STRIP_CAPACITY) {
        this.windowMs = windowMs;
        this.capacity = capacity;
    }

    push(sample: StripSample): void {
        this.buffer.push(sample);
        const horizon = sample.tMs - this.windowMs;
        while (
            this.buffer.length > this.capacity ||
            (this.buffer.length > 0 && this.buffer[0].tMs < horizon)
        ) {
            this.buffer.shift();
        }
    }

    samples(): readonly StripSample[] {
        return this.buffer;
    }

    spanMs(): number {
        if (this.buffer.length < 2) return 0;
        return this.buffer[this.buffer.length - 1].tMs - this.buffer[0].tMs;
    }
}

export interface BarChip {
    word: string;
    polarity: 1 | -1;
}

export interface SnapshotBadge {
    tMs: number;
    label: string;
    polarity: number;
    band: string;
    discrepancy: boolean;
}

export interface TickerLine {
    startMs: number;
    text: string;
}

export type SuggestionPhase = "idle" | "pending" | "done" | "error";

export interface SuggestionPanel {
    phase: SuggestionPhase;
    text: string;
    source: "live" | "cache" | null;
    latencyMs: number | null;
    error: string | null;
}

export type ConnectionState = "connecting" | "live" | "reconnecting" | "ended";

export interface DashboardState {
    connection: ConnectionState;
    degraded: boolean;
    statusDetail: string;
    strip: StripViewModel;
    bar: BarChip[];
    snapshot: SnapshotBadge | null;
    ticker: TickerLine[];
    suggestion: SuggestionPanel;
    lastSeq: number;
    eventCounts: Record<string, number>;
}

export function initialState(): DashboardState {
    return {
        connection: "connecting",
        degraded: false,
        statusDetail: "",
        strip: new StripViewModel(),
        bar: [],
        snapshot: null,
        ticker: [],
        suggestion: { phase: "idle", text: "", source: null, latencyMs: null, error: null },
        lastSeq: -1,
        eventCounts: {},
    };
}

export function applyEvent(state: DashboardState, event: SessionEvent): DashboardState {
    state.eventCounts[event.kind] = (state.eventCounts[event.kind] ?? 0) + 1;
    if (event.seq >= 0) {
        state.lastSeq = event.seq;
    }
    switch (event.kind) {
        case "prosody":
            state.strip.push({
                tMs: event.t_ms,
                f0Hz: event.band === "unvoiced" ? null : event.f0_hz,
                rms: event.rms,
                band: event.band,
            });
            break;
        case "keyword_bar":
            // mirrors the latest event exactly; the server already caps at 5
            state.bar = event.words.map((w) => ({ word: w.w, polarity: w.pol }));
            break;
        case "snapshot":
            state.snapshot = {
                tMs: event.t_ms,
                label: event.label,
                polarity: event.polarity,
                band: event.band,
                discrepancy: event.discrepancy,
            };
            break;
        case "transcript":
            if (event.text) {
                state.ticker.push({ startMs: event.start_ms, text: event.text });
                while (state.ticker.length > TICKER_LINES) state.ticker.shift();
            }
            break;
        case "suggestion":
            if (event.error) {
                state.suggestion = {
                    phase: "error",
                    text: "",
                    source: null,
                    latencyMs: null,
                    error: event.error,
                };
            } else {
                state.suggestion = {
                    phase: "done",
                    text: event.text,
                    source: event.source,
                    latencyMs: event.latency_ms,
                    error: null,
                };
            }
            break;
        case "status":
            state.statusDetail = event.detail;
            if (event.state === "degraded") state.degraded = true;
            if (event.state === "ended") state.connection = "ended";
            if (event.state === "started") state.connection = "live";
            break;
    }
    return state;
}

// Deterministic summary used by replay snapshot tests and the debug panel.
export function stateDigest(state: DashboardState): object {
    const samples = state.strip.samples();
    const last = samples[samples.length - 1];
    return {
        connection: state.connection,
        degraded: state.degraded,
        lastSeq: state.lastSeq,
        eventCounts: state.eventCounts,
        bar: state.bar,
        snapshot: state.snapshot,
        ticker: state.ticker,
        suggestion: state.suggestion,
        strip: {
            samples: samples.length,
            spanMs: state.strip.spanMs(),
            last: last ? { tMs: last.tMs, f0Hz: last.f0Hz, rms: last.rms, band: last.band } : null,
            voiced: samples.filter((s) => s.f0Hz !== null).length,
        },
    };
}
