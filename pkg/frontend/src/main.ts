import { ApiClient } from "./api.js";
import { createApp } from "./app.js";

declare global {
  interface Window {
    MATHQA_API_BASE?: string;
  }
}

const root = document.getElementById("app");
if (root) {
  const base = window.MATHQA_API_BASE ?? "";
  createApp(root, new ApiClient(base));
}
