// WebSocket client: reconnecting stream consumer plus the one and only
// user-initiated upstream message, the suggestion request.

import { parseEvent } from "./protocol.js";
import { applyEvent, DashboardState, initialState } from "./state.js";

export interface ClientOptions {
    url: string;
    reconnectBaseMs?: number;
    reconnectMaxMs?: number;
    // injectable for tests and non-browser runtimes
    webSocketFactory?: (url: string) => WebSocket;
}

export class DashboardClient {
    readonly state: DashboardState;
    onChange: ((state: DashboardState) => void) | null = null;

    private readonly url: string;
    private readonly baseMs: number;
    private readonly maxMs: number;
    private readonly factory: (url: string) => WebSocket;
    private ws: WebSocket | null = null;
    private attempts = 0;
    private closed = false;

    constructor(options: ClientOptions) {
        this.url = options.url;
        this.baseMs = options.reconnectBaseMs ?? 500;
        this.maxMs = options.reconnectMaxMs ?? 15_000;
        this.factory = options.webSocketFactory ?? ((url) => new WebSocket(url));
        this.state = initialState();
    }

    connect(): void {
        if (this.closed) return;
        const ws = this.factory(this.url);
        this.ws = ws;
        ws.onopen = () => {
            this.attempts = 0;
            if (this.state.connection !== "ended") {
                this.state.connection = "live";
                this.notify();
            }
        };
        ws.onmessage = (message: MessageEvent) => {
            applyEvent(this.state, parseEvent(String(message.data)));
            this.notify();
        };
        ws.onclose = () => {
            if (this.closed || this.state.connection === "ended") return;
            this.state.connection = "reconnecting";
            this.notify();
            const delay = Math.min(this.baseMs * 2 ** this.attempts, this.maxMs);
            this.attempts += 1;
            setTimeout(() => this.connect(), delay);
        };
        ws.onerror = () => {
            // onclose follows and drives the retry
        };
    }

    /** Send a suggestion request. Returns false (and sends nothing) while
     * a previous request is pending or the stream is not live. */
    requestSuggestion(): boolean {
        if (this.state.suggestion.phase === "pending") return false;
        if (this.state.connection !== "live" || !this.ws || this.ws.readyState !== 1) {
            return false;
        }
        this.state.suggestion = {
            phase: "pending",
            text: "",
            source: null,
            latencyMs: null,
            error: null,
        };
        this.notify();
        this.ws.send(JSON.stringify({ type: "request_suggestion" }));
        return true;
    }

    close(): void {
        this.closed = true;
        this.ws?.close();
    }

    private notify(): void {
        this.onChange?.(this.state);
    }
}
