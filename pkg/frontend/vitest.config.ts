import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "node",
    include: ["tests/**/*.test.ts"],
    testTimeout: 120000,
    hookTimeout: 30000,
    // integration tests spawn one service per test; keep files sequential
    fileParallelism: false,
  },
});
