/// <reference types="vitest/config" />
import { defineConfig } from "vite";

export default defineConfig({
  server: {
    proxy: {
      // forward API calls to a locally running loop service
      "/sessions": "http://127.0.0.1:8337",
      "/export": "http://127.0.0.1:8337",
    },
  },
  test: {
    environment: "happy-dom",
  },
});
