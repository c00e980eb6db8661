/** Scripted triage walkthrough: police profile, top cluster, top pair,
 * disposition axis, singleton drill-down, redacted report. Runs headlessly
 * against a live service; the UI's demo button and the acceptance test both
 * call this. */

import { WorkbenchController } from "./controller.js";
import { singletonCategories } from "./model.js";
import type { CandidateDoc } from "./types.js";

export const DEFAULT_AXES = ["victim race", "offender gender"];
export const DRILL_AXIS = "disposition";

export interface WalkthroughResult {
  sessionId: string;
  reportText: string;
  drilldown: CandidateDoc[];
  /** Panel-scoped interactions from entering the exploration panel to the
   * drill-down being open. */
  explorationInteractions: string[];
}

export async function runWalkthrough(
  controller: WorkbenchController,
): Promise<WalkthroughResult> {
  await controller.bootstrap();
  await controller.selectProfile("police");
  await controller.runClustering();

  const clusters = controller.state.clusters;
  if (!clusters || clusters.clusters.length === 0) throw new Error("no clusters");
  const first = clusters.clusters[0];
  await controller.openCluster(first.members[0]);

  const pairs = controller.state.pairs;
  if (!pairs || pairs.pairs.length === 0) throw new Error("no ranked pairs");
  const top = pairs.pairs[0];
  await controller.openPair(top.left, top.right);

  await controller.enterExploration(DEFAULT_AXES);
  await controller.addAxis(DRILL_AXIS);

  const model = controller.state.parallelSets;
  if (!model) throw new Error("no parallel sets model");
  const singleton = singletonCategories(model).find((s) => s.attr === DRILL_AXIS);
  if (!singleton) throw new Error("no singleton category on the drill axis");
  const drilldown = controller.openCategory(singleton.attr, singleton.value);

  const explorationInteractions = controller
    .interactionsOnPanel("explore")
    .map((x) => x.action);
  const reportText = await controller.exportReportText(true);
  return {
    sessionId: controller.state.sessionId!,
    reportText,
    drilldown,
    explorationInteractions,
  };
}
