import { WorkbenchApi } from "./api.js";
import { WorkbenchController } from "./controller.js";
import {
  renderClusters,
  renderExplore,
  renderPairs,
  renderReportControls,
  renderSetup,
} from "./views.js";

const api = new WorkbenchApi("");
const controller = new WorkbenchController(api);

function render(): void {
  const setup = document.getElementById("setup")!;
  const clusters = document.getElementById("clusters")!;
  const pairs = document.getElementById("pairs")!;
  const explore = document.getElementById("explore")!;
  const report = document.getElementById("report")!;
  renderSetup(controller, setup);
  renderClusters(controller, clusters);
  renderPairs(controller, pairs);
  renderExplore(controller, explore);
  renderReportControls(controller, report);
  const status = document.getElementById("status")!;
  status.textContent = controller.state.sessionId
    ? `session ${controller.state.sessionId.slice(0, 8)} · panel: ${controller.state.panel}`
    : "connecting…";
}

controller.onChange(render);

controller
  .bootstrap()
  .then(render)
  .catch((err) => {
    const status = document.getElementById("status")!;
    status.textContent = `failed to reach the workflow service: ${err}`;
  });
