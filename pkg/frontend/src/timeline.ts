// Timeline lane: one colored span per segment, width proportional to the
// segment's share of the session. The lane never recomputes emotion data;
// it only lays out what /api/timeline returned.

import type { TimelineSegment } from "./api.js";

// Fixed palette so screenshots stay comparable across sessions.
export const EMOTION_COLORS: Record<string, string> = {
    angry: "#d64545",
    disgust: "#7a9a3a",
    fear: "#8458b3",
    happy: "#e8b830",
    sad: "#4a7fb5",
    surprise: "#e07b39",
    neutral: "#9aa0a6",
};

const FALLBACK_COLOR = "#5f6368"; // dropouts ("No face detected") and anything else

export const colorFor = (label: string): string => EMOTION_COLORS[label] ?? FALLBACK_COLOR;

// 100.0 -> "100", 2.5 -> "2.5"; three decimals is plenty for hover text
const fmtSeconds = (value: number): string => String(Math.round(value * 1000) / 1000);

export const spanTooltip = (seg: TimelineSegment): string => {
    const duration = seg.end_s - seg.start_s;
    return `${seg.label}, ${fmtSeconds(duration)} s\n${fmtSeconds(seg.start_s)} s to ${fmtSeconds(seg.end_s)} s`;
};

export type TimelineOptions = {
    laneWidthPx?: number;
    onSpanClick?: (seg: TimelineSegment) => void;
};

export const renderTimeline = (
    lane: HTMLElement,
    segments: TimelineSegment[],
    opts: TimelineOptions = {},
): void => {
    lane.replaceChildren();
    if (segments.length === 0) {
        const empty = document.createElement("div");
        empty.className = "placeholder";
        empty.textContent = "no data";
        lane.append(empty);
        return;
    }
    const laneWidth = opts.laneWidthPx ?? (lane.clientWidth || 960);
    const total = segments.reduce((acc, seg) => acc + (seg.end_s - seg.start_s), 0);
    for (const seg of segments) {
        const span = document.createElement("div");
        span.className = "segment";
        const share = total > 0 ? (seg.end_s - seg.start_s) / total : 0;
        span.style.width = `${(share * laneWidth).toFixed(3)}px`;
        span.style.backgroundColor = colorFor(seg.label);
        span.title = spanTooltip(seg);
        span.dataset.label = seg.label;
        if (opts.onSpanClick) {
            span.addEventListener("click", () => opts.onSpanClick!(seg));
        }
        lane.append(span);
    }
};

export const renderLegend = (host: HTMLElement): void => {
    host.replaceChildren();
    for (const [label, color] of Object.entries(EMOTION_COLORS)) {
        const item = document.createElement("span");
        item.className = "legend-item";
        const chip = document.createElement("span");
        chip.className = "chip";
        chip.style.backgroundColor = color;
        item.append(chip, label);
        host.append(item);
    }
};

// Load-and-render with an error banner; retry re-runs the same loader.
export const mountTimeline = async (
    lane: HTMLElement,
    load: () => Promise<TimelineSegment[]>,
    opts: TimelineOptions = {},
): Promise<void> => {
    try {
        const segments = await load();
        renderTimeline(lane, segments, opts);
    } catch (failure) {
        lane.replaceChildren();
        const banner = document.createElement("div");
        banner.className = "banner";
        const note = document.createElement("span");
        note.textContent = `timeline unavailable: ${failure instanceof Error ? failure.message : String(failure)}`;
        const retry = document.createElement("button");
        retry.className = "retry";
        retry.textContent = "retry";
        retry.addEventListener("click", () => void mountTimeline(lane, load, opts));
        banner.append(note, retry);
        lane.append(banner);
    }
};
