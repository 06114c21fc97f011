import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "node",
    include: ["tests/**/*.test.ts"],
    testTimeout: 30000, // the integration suite drives a real server
    hookTimeout: 30000,
  },
});
