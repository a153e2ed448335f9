import { mountApp } from "./ui.js";

const root = document.getElementById("app");
if (root) {
  mountApp(root, {
    baseUrl: (window as { QA_BASE_URL?: string } & Window).QA_BASE_URL ?? "http://127.0.0.1:8000",
    enrollCount: 6,
  });
}
