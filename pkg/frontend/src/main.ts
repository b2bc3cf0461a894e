/** Browser entry point: connect to a running tutor server and start. */

import { ApiClient, HttpTransport } from "./api.js";
import { TutorApp } from "./app.js";
import { IntervalTicker } from "./poller.js";

const params = new URLSearchParams(window.location.search);
const baseUrl = params.get("api") ?? "http://127.0.0.1:8420";
const studentId = params.get("student") ?? `student-${Date.now()}`;

const root = document.getElementById("app");
if (root === null) {
  throw new Error("missing #app container");
}

const app = new TutorApp(root, new ApiClient(new HttpTransport(baseUrl)), new IntervalTicker());
void app.start(studentId);
