// Shared test plumbing: a scriptable fetch stub for unit tests and a
// helper that spawns the real Python service for end-to-end runs.

import { spawn, ChildProcess } from "node:child_process";
import path from "node:path";
import { fileURLToPath } from "node:url";

type Handler = (url: string, init?: RequestInit) => Response | Promise<Response>;

export function jsonResponse(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

/** Routes POSTs by path suffix; records every request it sees. */
export function fakeFetch(routes: Record<string, Handler>) {
  const calls: { url: string; body: unknown }[] = [];
  const fetchFn = async (url: string, init?: RequestInit): Promise<Response> => {
    calls.push({ url, body: init?.body ? JSON.parse(String(init.body)) : undefined });
    for (const [suffix, handler] of Object.entries(routes)) {
      if (new URL(url).pathname.endsWith(suffix)) {
        return handler(url, init);
      }
    }
    return jsonResponse(404, { error: "NoRoute", message: url });
  };
  return { fetchFn, calls };
}

export interface LiveService {
  baseUrl: string;
  stop: () => void;
}

/** Start the real service (Python) on an ephemeral port. */
export async function startService(challengeTtl = 300): Promise<LiveService> {
  const here = path.dirname(fileURLToPath(import.meta.url));
  const fixture = path.join(here, "serve_fixture.py");
  const child: ChildProcess = spawn("python3", [fixture], {
    env: { ...process.env, FIXTURE_CHALLENGE_TTL: String(challengeTtl) },
    stdio: ["ignore", "pipe", "inherit"],
  });
  const port = await new Promise<number>((resolve, reject) => {
    const timer = setTimeout(() => reject(new Error("service did not start in time")), 20_000);
    let buffer = "";
    child.stdout!.on("data", (chunk: Buffer) => {
      buffer += chunk.toString();
      const match = buffer.match(/PORT=(\d+)/);
      if (match) {
        clearTimeout(timer);
        resolve(Number(match[1]));
      }
    });
    child.on("exit", (code) => {
      clearTimeout(timer);
      reject(new Error(`service exited early with code ${code}`));
    });
  });
  return {
    baseUrl: `http://127.0.0.1:${port}`,
    stop: () => child.kill("SIGTERM"),
  };
}

/** The letter at a 1-based position of an answer, post-normalization. */
export function letterAt(answer: string, position: number): string {
  const letters = answer.toLowerCase().replace(/[^a-z]/g, "");
  return letters[position - 1];
}
