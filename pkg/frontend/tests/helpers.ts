// Shared fetch fake: api.ts only touches ok/status/json(), so a plain
// object stands in for Response and keeps tests free of network plumbing.

import { vi } from "vitest";

export type Route = (url: string) => { status: number; body: unknown } | Promise<{ status: number; body: unknown }>;

export const stubFetch = (route: Route) => {
    const spy = vi.fn(async (url: string) => {
        const { status, body } = await route(url);
        return {
            ok: status >= 200 && status < 300,
            status,
            json: async () => body,
        };
    });
    vi.stubGlobal("fetch", spy as unknown as typeof fetch);
    return spy;
};

export const flush = () => new Promise((resolve) => setTimeout(resolve, 0));

export const queryDoc = (name: string, parameters: Record<string, string>, rows: unknown[]) => ({
    status: 200,
    body: { schema_version: 1, query_name: name, parameters, rows },
});

export const errorDoc = (status: number, code: string, message: string) => ({
    status,
    body: { schema_version: 1, error: { code, message } },
});
