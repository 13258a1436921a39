// Page bootstrap: session header, timeline lane with legend, record pager,
// query console. The page can be served from any static host; point it at
// a service on another origin with ?api=http://host:port (the service
// sends permissive CORS headers).

import { makeClient } from "./api.js";
import type { Client, TimelineSegment } from "./api.js";
import { QueryConsole, renderTable } from "./console.js";
import { emptyView } from "./state.js";
import { mountTimeline, renderLegend } from "./timeline.js";

const PAGE_SIZE = 20;

const text = (id: string, value: string): void => {
    const node = document.getElementById(id);
    if (node) node.textContent = value;
};

const loadRecordsPage = async (client: Client, offset: number): Promise<void> => {
    const host = document.getElementById("records");
    if (!host) return;
    const page = await client.records({ offset: String(offset), limit: String(PAGE_SIZE) });
    renderTable(host, page.rows as never[]);
    text("records-meta", `records ${page.offset}..${page.offset + page.rows.length - 1} of ${page.total}`);
    const prev = document.getElementById("prev") as HTMLButtonElement | null;
    const next = document.getElementById("next") as HTMLButtonElement | null;
    if (prev) {
        prev.disabled = offset === 0;
        prev.onclick = () => void loadRecordsPage(client, Math.max(0, offset - PAGE_SIZE));
    }
    if (next) {
        next.disabled = offset + PAGE_SIZE >= page.total;
        next.onclick = () => void loadRecordsPage(client, offset + PAGE_SIZE);
    }
};

// the records route has no interval parameters, so a span click pulls the
// full record list and keeps the rows overlapping the clicked segment
const showRecordsForSegment = async (client: Client, seg: TimelineSegment): Promise<void> => {
    const host = document.getElementById("records");
    if (!host) return;
    const page = await client.records();
    const hits = page.rows.filter((row) => row.start <= seg.end_s && row.end >= seg.start_s);
    renderTable(host, hits as never[]);
    text("records-meta", `${hits.length} records overlapping ${seg.label} ${seg.start_s}s..${seg.end_s}s`);
};

const boot = async (): Promise<void> => {
    const base = new URLSearchParams(window.location.search).get("api") ?? "";
    const client = makeClient(base);
    const view = emptyView();

    const lane = document.getElementById("timeline-lane");
    const legend = document.getElementById("legend");
    const consoleHost = document.getElementById("console-host");
    if (legend) renderLegend(legend);
    if (consoleHost) new QueryConsole(consoleHost, client, view);

    if (lane) {
        await mountTimeline(
            lane,
            async () => {
                const doc = await client.timeline();
                view.timeline = doc.segments;
                return doc.segments;
            },
            { onSpanClick: (seg) => void showRecordsForSegment(client, seg) },
        );
    }

    try {
        const meta = await client.session();
        view.session = meta;
        text(
            "session-meta",
            `session '${meta.id}': ${meta.record_count} records, ${meta.duration_s}s` +
                (meta.frame_count !== null ? `, ${meta.frame_count} frames` : ""),
        );
        await loadRecordsPage(client, 0);
    } catch (failure) {
        text("session-meta", failure instanceof Error ? failure.message : String(failure));
    }
};

if (document.getElementById("app")) {
    void boot();
}
