// Typed client for the session service. Every call is a plain GET; the
// service is read-only and so is this client.

export type SessionMeta = {
    schema_version: number;
    id: string;
    record_count: number;
    frame_count: number | null;
    duration_s: number;
    source_paths: string[];
};

export type FusedRow = {
    index: number;
    text: string;
    start: number;
    end: number;
    speech_emotion: string;
    speech_confidence: number;
    avg_fer_score: number | null;
    dominant_fer_emotion: string;
};

export type RecordsPage = {
    schema_version: number;
    total: number;
    offset: number;
    limit?: number;
    rows: FusedRow[];
};

export type TimelineSegment = {
    start_s: number;
    end_s: number;
    label: string;
};

export type TimelineDoc = {
    schema_version: number;
    segments: TimelineSegment[];
    min_run_s: number;
};

export type QueryRow = Record<string, string | number | boolean | null>;

export type QueryDoc = {
    schema_version: number;
    query_name: string;
    parameters: Record<string, string>;
    rows: QueryRow[];
};

type ErrorDoc = {
    schema_version: number;
    error: { code: string; message: string };
};

/** Non-2xx response carrying the service's E_* code. */
export class ApiError extends Error {
    constructor(readonly code: string, message: string, readonly status: number) {
        super(message);
        this.name = "ApiError";
    }
}

const get = async <T>(base: string, path: string, params?: Record<string, string>): Promise<T> => {
    let url = base + path;
    if (params && Object.keys(params).length > 0) {
        url += "?" + new URLSearchParams(params).toString();
    }
    const response = await fetch(url);
    const body = await response.json();
    if (!response.ok) {
        const failure = (body as ErrorDoc).error;
        throw new ApiError(failure.code, failure.message, response.status);
    }
    return body as T;
};

export const makeClient = (base = "") => ({
    session: () => get<SessionMeta>(base, "/api/session"),
    records: (params: Record<string, string> = {}) => get<RecordsPage>(base, "/api/records", params),
    timeline: (params: Record<string, string> = {}) => get<TimelineDoc>(base, "/api/timeline", params),
    anomalies: (params: Record<string, string> = {}) => get<QueryDoc>(base, "/api/anomalies", params),
    query: (name: string, params: Record<string, string> = {}) =>
        get<QueryDoc>(base, "/api/query", { name, ...params }),
});

export type Client = ReturnType<typeof makeClient>;
