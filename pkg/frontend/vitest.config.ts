import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["test/**/*.test.ts"],
    environment: "node", // DOM suites opt into jsdom per file
    testTimeout: 30_000,
    hookTimeout: 30_000,
  },
});
