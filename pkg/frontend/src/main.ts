/** Browser entry point. The service base URL can be overridden with ?api= */

import { mount } from "./app.js";

const params = new URLSearchParams(window.location.search);
const baseUrl = params.get("api") ?? "http://127.0.0.1:8700";
mount(document.getElementById("app") as HTMLElement, baseUrl);
