// Interactive query console. Submits /api/query GETs, renders rows, and
// keeps an in-session history so a raw result can be pivoted into a
// refined one (raw-anomalies -> mapped-anomalies) without retyping.

import { ApiError } from "./api.js";
import type { Client, QueryRow } from "./api.js";
import { applyResult, setParameter, setQueryName } from "./state.js";
import type { HistoryEntry, UiSessionView } from "./state.js";

type ParamSpec = { key: string; required: boolean; hint: string };

// Parameter surface of each named query, mirrored from the service.
export const QUERY_CATALOG: Record<string, ParamSpec[]> = {
    "dominant-summary": [],
    "peak": [{ key: "label", required: true, hint: "basic emotion, e.g. happy" }],
    "filter-speech": [{ key: "labels", required: true, hint: "speech labels, comma separated" }],
    "no-face": [],
    "keyword": [{ key: "pattern", required: true, hint: "substring or regex" }],
    "hotspots": [{ key: "labels", required: false, hint: "labels to scan (default confusion set)" }],
    "mapped-anomalies": [
        { key: "include_neutral", required: false, hint: "0 or 1" },
        { key: "mapping", required: false, hint: "server-side mapping file" },
    ],
    "raw-anomalies": [],
    "timeline": [{ key: "min_run", required: false, hint: "merge threshold, seconds" }],
};

const cellText = (value: QueryRow[string]): string => (value === null ? "" : String(value));

type SortState = { key: string; descending: boolean };

const sortedRows = (rows: QueryRow[], sort: SortState | null): QueryRow[] => {
    if (!sort) return rows;
    const copy = [...rows];
    copy.sort((a, b) => {
        const left = a[sort.key];
        const right = b[sort.key];
        let order: number;
        if (typeof left === "number" && typeof right === "number") {
            order = left - right;
        } else {
            order = cellText(left).localeCompare(cellText(right));
        }
        return sort.descending ? -order : order;
    });
    return copy;
};

export const renderTable = (
    host: HTMLElement,
    rows: QueryRow[],
    onHeaderClick?: (key: string) => void,
): void => {
    host.replaceChildren();
    if (rows.length === 0) {
        const empty = document.createElement("div");
        empty.className = "placeholder";
        empty.textContent = "0 rows";
        host.append(empty);
        return;
    }
    const columns: string[] = [];
    for (const row of rows) {
        for (const key of Object.keys(row)) {
            if (!columns.includes(key)) columns.push(key);
        }
    }
    const table = document.createElement("table");
    const head = table.createTHead().insertRow();
    for (const key of columns) {
        const cell = document.createElement("th");
        cell.textContent = key;
        if (onHeaderClick) {
            cell.addEventListener("click", () => onHeaderClick(key));
        }
        head.append(cell);
    }
    const body = table.createTBody();
    for (const row of rows) {
        const line = body.insertRow();
        for (const key of columns) {
            line.insertCell().textContent = cellText(row[key]);
        }
    }
    host.append(table);
};

// dominant-summary gets bars instead of a table; bar lengths come straight
// from the served counts, scaled against the largest one
const renderBars = (host: HTMLElement, rows: QueryRow[]): void => {
    host.replaceChildren();
    const peak = Math.max(1, ...rows.map((row) => Number(row.count ?? 0)));
    for (const row of rows) {
        const count = Number(row.count ?? 0);
        const line = document.createElement("div");
        line.className = "bar-row";
        const name = document.createElement("span");
        name.className = "bar-label";
        name.textContent = cellText(row.label);
        const bar = document.createElement("div");
        bar.className = "bar";
        bar.style.width = `${((count / peak) * 100).toFixed(1)}%`;
        const tally = document.createElement("span");
        tally.className = "bar-count";
        tally.textContent = String(count);
        line.append(name, bar, tally);
        host.append(line);
    }
};

export class QueryConsole {
    private readonly controls = document.createElement("div");
    private readonly note = document.createElement("div");
    private readonly result = document.createElement("div");
    private readonly historyHost = document.createElement("ol");
    private sort: SortState | null = null;
    private busy = false; // at most one in-flight query

    constructor(
        host: HTMLElement,
        private readonly client: Client,
        readonly view: UiSessionView,
    ) {
        this.controls.className = "controls";
        this.note.className = "inline-note";
        this.result.className = "result";
        this.historyHost.className = "history";
        host.append(this.controls, this.note, this.result, this.historyHost);
        this.buildForm();
    }

    private buildForm(): void {
        this.controls.replaceChildren();
        const picker = document.createElement("select");
        picker.className = "query-pick";
        for (const name of Object.keys(QUERY_CATALOG)) {
            const option = document.createElement("option");
            option.value = name;
            option.textContent = name;
            option.selected = name === this.view.queryName;
            picker.append(option);
        }
        picker.addEventListener("change", () => {
            setQueryName(this.view, picker.value);
            this.sort = null;
            this.buildForm();
            this.renderResult();
        });
        this.controls.append(picker);

        for (const spec of QUERY_CATALOG[this.view.queryName] ?? []) {
            const field = document.createElement("input");
            field.className = `param-${spec.key}`;
            field.placeholder = spec.required ? `${spec.key} (required)` : spec.key;
            field.title = spec.hint;
            field.value = this.view.parameters[spec.key] ?? "";
            field.addEventListener("input", () => {
                setParameter(this.view, spec.key, field.value);
                this.renderResult(); // stale rows are gone; blank the pane too
            });
            this.controls.append(field);
        }

        const run = document.createElement("button");
        run.className = "run";
        run.textContent = "run";
        run.addEventListener("click", () => void this.submit());
        this.controls.append(run);
    }

    private setNote(text: string, isError: boolean): void {
        this.note.textContent = text;
        this.note.classList.toggle("error", isError);
    }

    async submit(): Promise<void> {
        if (this.busy) return;
        const specs = QUERY_CATALOG[this.view.queryName] ?? [];
        const missing = specs.find(
            (spec) => spec.required && (this.view.parameters[spec.key] ?? "").trim() === "",
        );
        if (missing) {
            this.setNote(`parameter '${missing.key}' is required`, true);
            return; // validated locally, nothing sent
        }
        this.busy = true;
        try {
            const doc = await this.client.query(this.view.queryName, { ...this.view.parameters });
            applyResult(this.view, doc);
            this.sort = null;
            this.setNote(`${doc.rows.length} rows`, false);
            this.renderResult();
            this.renderHistory();
        } catch (failure) {
            if (failure instanceof ApiError) {
                this.setNote(`${failure.code}: ${failure.message}`, true);
            } else {
                this.setNote(
                    `service unreachable: ${failure instanceof Error ? failure.message : String(failure)}`,
                    true,
                );
            }
        } finally {
            this.busy = false;
        }
    }

    renderResult(): void {
        if (this.view.resultRows === null) {
            this.result.replaceChildren();
            return;
        }
        if (this.view.resultQuery?.name === "dominant-summary") {
            renderBars(this.result, this.view.resultRows);
            return;
        }
        renderTable(this.result, sortedRows(this.view.resultRows, this.sort), (key) => {
            this.sort =
                this.sort && this.sort.key === key
                    ? { key, descending: !this.sort.descending }
                    : { key, descending: false };
            this.renderResult();
        });
    }

    private restore(entry: HistoryEntry): void {
        setQueryName(this.view, entry.name);
        for (const [key, value] of Object.entries(entry.parameters)) {
            setParameter(this.view, key, value);
        }
        this.sort = null;
        this.buildForm();
        this.renderResult();
    }

    renderHistory(): void {
        this.historyHost.replaceChildren();
        for (const entry of this.view.history) {
            const item = document.createElement("li");
            const link = document.createElement("button");
            link.className = "history-entry";
            const args = Object.entries(entry.parameters)
                .map(([key, value]) => `${key}=${value}`)
                .join(" ");
            link.textContent = `${entry.name}${args ? " " + args : ""} (${entry.rowCount} rows)`;
            link.addEventListener("click", () => this.restore(entry));
            item.append(link);
            this.historyHost.append(item);
        }
    }
}
