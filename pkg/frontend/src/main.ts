import { ApiClient } from "./api.js";
import { App } from "./dom.js";

const base = new URLSearchParams(window.location.search).get("api") ?? "http://127.0.0.1:8011";
const app = new App(new ApiClient(base), document.getElementById("app")!);
void app.start();
