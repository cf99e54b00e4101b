// Bootstrap: configuration is limited to the server URL and session id,
// both taken from query parameters (?server=host:port&session=ID).

import { DashboardClient } from "./client.js";
import { Elements, render } from "./render.js";

function required(id: string): HTMLElement {
    const el = document.getElementById(id);
    if (!el) throw new Error(`missing element #${id}`);
    return el;
}

const params = new URLSearchParams(window.location.search);
const server = params.get("server") ?? window.location.host;
const session = params.get("session");

const el: Elements = {
    amplitude: required("amplitude") as HTMLCanvasElement,
    pitch: required("pitch") as HTMLCanvasElement,
    bar: required("bar"),
    badge: required("badge"),
    ticker: required("ticker"),
    status: required("status"),
    suggestionText: required("suggestion-text"),
    suggestionMeta: required("suggestion-meta"),
    suggestionButton: required("suggestion-button") as HTMLButtonElement,
};

if (!session) {
    el.status.textContent = "no session: open ?server=host:port&session=ID";
} else {
    const scheme = window.location.protocol === "https:" ? "wss" : "ws";
    const client = new DashboardClient({
        url: `${scheme}://${server}/session/${session}/stream`,
    });
    let scheduled = false;
    client.onChange = () => {
        // coalesce bursts to the display refresh
        if (scheduled) return;
        scheduled = true;
        requestAnimationFrame(() => {
            scheduled = false;
            render(client.state, el);
        });
    };
    el.suggestionButton.addEventListener("click", () => client.requestSuggestion());
    client.connect();
    render(client.state, el);
}
