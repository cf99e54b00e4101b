// Wire schema of the session event stream (one JSON object per message).

export type Band = "low" | "mid" | "high" | "unvoiced";

export interface ProsodyEvent {
    seq: number;
    kind: "prosody";
    t_ms: number;
    f0_hz: number | null;
    rms: number;
    band: Band;
}

export interface KeywordBarEvent {
    seq: number;
    kind: "keyword_bar";
    words: { w: string; pol: 1 | -1 }[];
}

export interface SnapshotEvent {
    seq: number;
    kind: "snapshot";
    t_ms: number;
    label: string;
    polarity: number;
    band: string;
    discrepancy: boolean;
}

export interface TranscriptEvent {
    seq: number;
    kind: "transcript";
    start_ms: number;
    end_ms: number;
    text: string;
}

export interface SuggestionEvent {
    seq: number;
    kind: "suggestion";
    text: string;
    source: "live" | "cache";
    latency_ms: number;
    error?: string;
}

export interface StatusEvent {
    seq: number;
    kind: "status";
    state: "started" | "degraded" | "ended";
    detail: string;
}

export type SessionEvent =
    | ProsodyEvent
    | KeywordBarEvent
    | SnapshotEvent
    | TranscriptEvent
    | SuggestionEvent
    | StatusEvent;

export function parseEvent(raw: string): SessionEvent {
    return JSON.parse(raw) as SessionEvent;
}
