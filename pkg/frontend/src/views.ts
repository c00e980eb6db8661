/** DOM rendering for the four workbench panels. Views read controller state
 * and forward gestures back to it; they never call the API directly. */

import { WorkbenchController } from "./controller.js";
import {
  entropyBars,
  formatFraction,
  parallelSetsLayout,
  shortRef,
  singletonCategories,
} from "./model.js";
import type { CandidateDoc, ClusterDoc, PairDoc } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function chipRow(names: string[], tokenFor: (name: string) => string): HTMLElement {
  const row = el("div", "chip-row");
  for (const name of names) {
    row.appendChild(el("span", `chip chip-${tokenFor(name)}`, name));
  }
  return row;
}

export function renderSetup(controller: WorkbenchController, root: HTMLElement): void {
  const { profiles, collection, selectedQis } = controller.state;
  root.replaceChildren();
  const panel = el("section", "panel");
  panel.appendChild(el("h2", undefined, "Background knowledge"));
  panel.appendChild(
    el(
      "p",
      "hint",
      collection
        ? `${collection.size} curated datasets loaded.`
        : "Loading collection…",
    ),
  );
  const picker = el("div", "profile-picker");
  for (const [name, members] of Object.entries(profiles)) {
    const card = el("button", "profile-card");
    card.appendChild(el("strong", undefined, name));
    card.appendChild(el("small", undefined, members.join(", ")));
    card.addEventListener("click", () => {
      void controller.selectProfile(name).then(() => controller.runClustering());
    });
    picker.appendChild(card);
  }
  panel.appendChild(picker);
  if (selectedQis.length) {
    panel.appendChild(el("p", "hint", `Selected: ${selectedQis.join(", ")}`));
  }
  root.appendChild(panel);
}

function clusterCard(controller: WorkbenchController, cluster: ClusterDoc): HTMLElement {
  const card = el("button", "cluster-card");
  const score = cluster.rank_score;
  card.appendChild(
    el("strong", undefined, `${cluster.members.length} datasets`),
  );
  if (score) {
    card.appendChild(el("span", "badge", `${score.qi_overlap} selected QIs in core`));
  }
  card.appendChild(chipRow(cluster.core_signature, () => "qi"));
  const extended = Object.keys(cluster.extended_signature)
    .filter((attr) => !cluster.core_signature.includes(attr))
    .sort();
  if (extended.length) {
    card.appendChild(chipRow(extended, () => "extended"));
  }
  card.appendChild(
    el("small", "members", cluster.members.map(shortRef).join(", ")),
  );
  card.addEventListener("click", () => void controller.openCluster(cluster.members[0]));
  return card;
}

export function renderClusters(controller: WorkbenchController, root: HTMLElement): void {
  const { clusters } = controller.state;
  root.replaceChildren();
  const panel = el("section", "panel");
  panel.appendChild(el("h2", undefined, "Joinable dataset clusters"));
  if (!clusters) {
    panel.appendChild(el("p", "hint", "Select a profile to group the collection."));
  } else {
    const grid = el("div", "cluster-grid");
    clusters.clusters.forEach((c) => grid.appendChild(clusterCard(controller, c)));
    panel.appendChild(grid);
  }
  root.appendChild(panel);
}

function pairRow(controller: WorkbenchController, pair: PairDoc): HTMLElement {
  const row = el("div", "pair-row");
  const head = el("button", "pair-head");
  head.appendChild(
    el("strong", undefined, `${shortRef(pair.left)} × ${shortRef(pair.right)}`),
  );
  const s = pair.score;
  head.appendChild(
    el(
      "span",
      "score",
      `risk ${formatFraction(s.risk)} · containment ${formatFraction(s.containment)}` +
        ` · unique ${formatFraction(s.unique_match_fraction)}`,
    ),
  );
  head.addEventListener("click", () => {
    void controller
      .openPair(pair.left, pair.right)
      .then(() => controller.enterExploration(pair.key.slice(0, 2)));
  });
  row.appendChild(head);

  const chart = el("div", "entropy-chart");
  for (const bar of entropyBars(pair.shared_attributes, pair.key, 72)) {
    const wrap = el("div", "bar-wrap");
    const column = el("div", `bar bar-${bar.token}${bar.inKey ? " in-key" : ""}`);
    column.style.height = `${Math.max(bar.heightPx, 2)}px`;
    column.title = `${bar.name}: entropy ${bar.value}`;
    wrap.appendChild(column);
    wrap.appendChild(el("small", "bar-label", bar.name));
    const valueLabel = el("small", "bar-value", bar.value.toFixed(2));
    wrap.appendChild(valueLabel);
    wrap.addEventListener("click", () => void controller.toggleKeyAttr(bar.name));
    chart.appendChild(wrap);
  }
  row.appendChild(chart);
  return row;
}

export function renderPairs(controller: WorkbenchController, root: HTMLElement): void {
  const { pairs } = controller.state;
  root.replaceChildren();
  const panel = el("section", "panel");
  panel.appendChild(el("h2", undefined, "Pair triage"));
  if (!pairs) {
    panel.appendChild(el("p", "hint", "Open a cluster to rank its pairs."));
  } else {
    panel.appendChild(
      el("p", "hint", `${pairs.pair_count} pairwise combinations, riskiest first.`),
    );
    const list = el("div", "pair-list");
    pairs.pairs.forEach((p) => list.appendChild(pairRow(controller, p)));
    panel.appendChild(list);
  }
  root.appendChild(panel);
}

function drawParallelSets(controller: WorkbenchController, host: HTMLElement): void {
  const model = controller.state.parallelSets;
  if (!model) return;
  const width = 760;
  const height = 360;
  const layout = parallelSetsLayout(model, width - 140, height - 40);
  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  svg.setAttribute("class", "psets");
  const origin = { x: 70, y: 20 };

  layout.ribbons.forEach((bands) => {
    for (const band of bands) {
      const path = document.createElementNS(SVG_NS, "path");
      const x1 = origin.x + band.x1 + 8;
      const x2 = origin.x + band.x2 - 8;
      const mid = (x1 + x2) / 2;
      const d =
        `M ${x1} ${origin.y + band.y1} ` +
        `C ${mid} ${origin.y + band.y1}, ${mid} ${origin.y + band.y2}, ${x2} ${origin.y + band.y2} ` +
        `l 0 ${band.height} ` +
        `C ${mid} ${origin.y + band.y2 + band.height}, ${mid} ${origin.y + band.y1 + band.height}, ${x1} ${origin.y + band.y1 + band.height} Z`;
      path.setAttribute("d", d);
      path.setAttribute("class", `ribbon${band.count === 1 ? " unit" : ""}`);
      if (band.count === 1) {
        path.addEventListener("click", () =>
          controller.openCategory(
            model.axes[layout.ribbons.indexOf(bands) + 1].attr,
            band.right,
          ),
        );
      }
      svg.appendChild(path);
    }
  });

  layout.axes.forEach((axis) => {
    for (const seg of axis.segments) {
      const rect = document.createElementNS(SVG_NS, "rect");
      rect.setAttribute("x", String(origin.x + axis.x - 8));
      rect.setAttribute("y", String(origin.y + seg.y));
      rect.setAttribute("width", "16");
      rect.setAttribute("height", String(Math.max(seg.height, 2)));
      rect.setAttribute("class", `segment${seg.count === 1 ? " unit" : ""}`);
      rect.addEventListener("click", () => controller.openCategory(axis.attr, seg.value));
      svg.appendChild(rect);

      const label = document.createElementNS(SVG_NS, "text");
      label.setAttribute("x", String(origin.x + axis.x + 12));
      label.setAttribute("y", String(origin.y + seg.y + Math.max(seg.height, 2) / 2 + 3));
      label.setAttribute("class", "segment-label");
      label.textContent = `${seg.value} (${seg.count})`;
      svg.appendChild(label);
    }
    const title = document.createElementNS(SVG_NS, "text");
    title.setAttribute("x", String(origin.x + axis.x));
    title.setAttribute("y", "12");
    title.setAttribute("class", "axis-title");
    title.textContent = axis.attr;
    svg.appendChild(title);
  });
  host.appendChild(svg);
}

function candidateCard(candidate: CandidateDoc): HTMLElement {
  const card = el("div", "candidate");
  card.appendChild(el("strong", `kind kind-${candidate.kind}`, candidate.kind));
  card.appendChild(
    el("small", undefined, candidate.key_attrs.map((a, i) => `${a}=${candidate.key[i]}`).join("  ")),
  );
  if (candidate.revealed_attrs.length) {
    card.appendChild(el("small", "revealed", `reveals: ${candidate.revealed_attrs.join(", ")}`));
  }
  const rows = el("div", "candidate-rows");
  rows.appendChild(el("code", undefined, candidate.left_row.join(" | ")));
  rows.appendChild(el("code", undefined, candidate.right_row.join(" | ")));
  card.appendChild(rows);
  return card;
}

export function renderExplore(controller: WorkbenchController, root: HTMLElement): void {
  const state = controller.state;
  root.replaceChildren();
  const panel = el("section", "panel");
  panel.appendChild(el("h2", undefined, "Joined records"));
  if (!state.join) {
    panel.appendChild(el("p", "hint", "Join a pair to explore its records."));
    root.appendChild(panel);
    return;
  }
  if (state.error) {
    panel.appendChild(el("p", "hint error", state.error));
  }
  panel.appendChild(
    el(
      "p",
      "hint",
      `key [${state.join.spec.key.join(", ")}] · ${state.join.matched_keys} matched keys · ` +
        `${state.join.joined_row_count} joined records` +
        (state.join.truncated ? " (truncated)" : ""),
    ),
  );

  const axisBar = el("div", "axis-bar");
  for (const [attr] of state.join.schema) {
    const active = state.axes.includes(attr);
    const chip = el("button", `chip chip-axis${active ? " active" : ""}`, attr);
    chip.addEventListener("click", () =>
      active ? void controller.removeAxis(attr) : void controller.addAxis(attr),
    );
    axisBar.appendChild(chip);
  }
  panel.appendChild(axisBar);

  const vis = el("div", "vis-host");
  drawParallelSets(controller, vis);
  panel.appendChild(vis);

  if (state.parallelSets) {
    const singles = singletonCategories(state.parallelSets);
    if (singles.length) {
      panel.appendChild(
        el(
          "p",
          "hint",
          `unit-count categories: ${singles.map((s) => `${s.attr}=${s.value}`).join(", ")} (click to drill down)`,
        ),
      );
    }
  }

  if (state.suggestions) {
    const side = el("div", "suggestions");
    side.appendChild(el("h3", undefined, "Feature suggestions"));
    for (const s of state.suggestions.suggestions) {
      side.appendChild(
        el(
          "div",
          "suggestion",
          `${s.attr} · gain ${s.separation_gain.toFixed(3)}${s.overconstraining ? " (overconstraining)" : ""}`,
        ),
      );
    }
    panel.appendChild(side);
  }

  if (state.disclosures) {
    panel.appendChild(
      el(
        "p",
        "hint",
        `disclosure candidates: ${state.disclosures.identity_count} identity, ` +
          `${state.disclosures.attribute_count} attribute`,
      ),
    );
  }

  if (state.drilldown) {
    const modal = el("div", "drilldown");
    modal.appendChild(el("h3", undefined, "Candidate drill-down (redacted)"));
    if (state.drilldown.length === 0) {
      modal.appendChild(el("p", "hint", "No disclosure candidate matches this category."));
    }
    state.drilldown.forEach((c) => modal.appendChild(candidateCard(c)));
    const close = el("button", "close", "close");
    close.addEventListener("click", () => controller.closeDrilldown());
    modal.appendChild(close);
    panel.appendChild(modal);
  }
  root.appendChild(panel);
}

export function renderReportControls(
  controller: WorkbenchController,
  root: HTMLElement,
): void {
  root.replaceChildren();
  const bar = el("div", "report-bar");
  const exportBtn = el("button", "primary", "Export redacted report");
  exportBtn.addEventListener("click", () => {
    void controller.exportReportText(true).then((text) => {
      const blob = new Blob([text], { type: "application/json" });
      const a = document.createElement("a");
      a.href = URL.createObjectURL(blob);
      a.download = "riskcal-report.json";
      a.click();
    });
  });
  bar.appendChild(exportBtn);

  const ackLabel = el("label", "ack");
  const ack = document.createElement("input");
  ack.type = "checkbox";
  ack.addEventListener("change", () => {
    if (ack.checked) controller.acknowledgeRedaction();
  });
  ackLabel.appendChild(ack);
  ackLabel.appendChild(
    document.createTextNode(" I understand the risk of exporting raw values"),
  );
  bar.appendChild(ackLabel);

  const rawBtn = el("button", "danger", "Export raw report");
  rawBtn.addEventListener("click", () => {
    void controller
      .exportReportText(false)
      .then((text) => {
        const blob = new Blob([text], { type: "application/json" });
        const a = document.createElement("a");
        a.href = URL.createObjectURL(blob);
        a.download = "riskcal-report-raw.json";
        a.click();
      })
      .catch((err) => window.alert(String(err)));
  });
  bar.appendChild(rawBtn);
  root.appendChild(bar);
}
