// Session-local view state. No persistence: the service owns the data and
// the page owns nothing but what the user typed and the last answer.

import type { QueryDoc, QueryRow, SessionMeta, TimelineSegment } from "./api.js";

export type QuerySpec = {
    name: string;
    parameters: Record<string, string>;
};

export type HistoryEntry = QuerySpec & { rowCount: number };

export type UiSessionView = {
    session: SessionMeta | null;
    timeline: TimelineSegment[];
    queryName: string;
    parameters: Record<string, string>;
    // rows of the last successful query, and the spec that produced them;
    // the two are only ever written together so they cannot drift apart
    resultRows: QueryRow[] | null;
    resultQuery: QuerySpec | null;
    banner: string | null;
    history: HistoryEntry[];
};

export const emptyView = (): UiSessionView => ({
    session: null,
    timeline: [],
    queryName: "dominant-summary",
    parameters: {},
    resultRows: null,
    resultQuery: null,
    banner: null,
    history: [],
});

const clearStaleResult = (view: UiSessionView): void => {
    view.resultRows = null;
    view.resultQuery = null;
};

export const setQueryName = (view: UiSessionView, name: string): void => {
    if (name === view.queryName) return;
    view.queryName = name;
    view.parameters = {};
    clearStaleResult(view);
};

export const setParameter = (view: UiSessionView, key: string, value: string): void => {
    if (value === "") {
        delete view.parameters[key];
    } else {
        view.parameters[key] = value;
    }
    clearStaleResult(view);
};

export const applyResult = (view: UiSessionView, doc: QueryDoc): void => {
    view.resultRows = doc.rows;
    view.resultQuery = { name: doc.query_name, parameters: doc.parameters };
    view.banner = null;
    view.history.push({
        name: doc.query_name,
        parameters: doc.parameters,
        rowCount: doc.rows.length,
    });
};
