// Entry point: the service base URL is configurable via a meta tag or
// defaults to the host that served these assets.

import { startApp } from "./app";

const meta = document.querySelector('meta[name="reqdsl-service"]');
const baseUrl = meta?.getAttribute("content") || "";
startApp(baseUrl);
