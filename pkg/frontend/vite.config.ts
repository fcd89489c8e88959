/// <reference types="vitest" />
import { defineConfig } from "vite";

// The backend is the tpms-forge CLI: `tpms-forge serve --port 8731`.
export default defineConfig({
  server: {
    proxy: {
      "/api": "http://127.0.0.1:8731",
    },
  },
  test: {
    environment: "jsdom",
    testTimeout: 120_000,
  },
});
