// Boot-path smoke: importing main.ts against a stubbed service wires the
// header, the timeline lane, and the first records page together.

import { beforeAll, describe, expect, it } from "vitest";

import { flush, stubFetch } from "./helpers.js";

const META = {
    schema_version: 1, id: "demo", record_count: 2, frame_count: 120,
    duration_s: 59.0, source_paths: ["frames.csv", "speech.csv"],
};

const SEGMENTS = [
    { start_s: 0.0, end_s: 30.0, label: "neutral" },
    { start_s: 30.0, end_s: 59.0, label: "happy" },
];

const ROWS = [
    {
        index: 0, text: "Okay.", start: 2.0, end: 2.4, speech_emotion: "neutral",
        speech_confidence: 0.51, avg_fer_score: 0.92, dominant_fer_emotion: "neutral",
    },
    {
        index: 1, text: "Oh nice.", start: 44.0, end: 44.6, speech_emotion: "joy",
        speech_confidence: 0.62, avg_fer_score: 0.81, dominant_fer_emotion: "happy",
    },
];

beforeAll(async () => {
    stubFetch((url) => {
        const path = String(url);
        if (path.startsWith("/api/session")) return { status: 200, body: META };
        if (path.startsWith("/api/timeline")) {
            return { status: 200, body: { schema_version: 1, segments: SEGMENTS, min_run_s: 0.0 } };
        }
        if (path.startsWith("/api/records")) {
            return { status: 200, body: { schema_version: 1, total: 2, offset: 0, rows: ROWS } };
        }
        return { status: 404, body: { schema_version: 1, error: { code: "E_ROUTE", message: path } } };
    });
    document.body.innerHTML = `
      <div id="app">
        <div id="session-meta"></div>
        <div id="legend"></div>
        <div id="timeline-lane"></div>
        <div id="console-host"></div>
        <div id="records-meta"></div>
        <div id="records"></div>
        <button id="prev"></button>
        <button id="next"></button>
      </div>`;
    await import("../src/main.js");
    await flush();
    await flush();
});

describe("page boot", () => {
    it("fills the session header from /api/session", () => {
        expect(document.getElementById("session-meta")!.textContent).toBe(
            "session 'demo': 2 records, 59s, 120 frames",
        );
    });

    it("renders the timeline lane and legend", () => {
        expect(document.querySelectorAll("#timeline-lane .segment").length).toBe(2);
        expect(document.querySelectorAll("#legend .legend-item").length).toBe(7);
    });

    it("shows the first records page", () => {
        expect(document.querySelectorAll("#records tbody tr").length).toBe(2);
        expect(document.getElementById("records-meta")!.textContent).toBe("records 0..1 of 2");
        expect((document.getElementById("next") as HTMLButtonElement).disabled).toBe(true);
    });

    it("selects overlapping records when a span is clicked", async () => {
        (document.querySelectorAll("#timeline-lane .segment")[1] as HTMLElement).click();
        await flush();
        expect(document.getElementById("records-meta")!.textContent).toContain("overlapping happy");
        expect(document.querySelectorAll("#records tbody tr").length).toBe(1);
    });
});
