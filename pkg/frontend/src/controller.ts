/** Session controller: application state plus the service calls that mutate
 * it. The DOM views subscribe to this; the scripted walkthrough drives it
 * headlessly. Every user gesture that talks to the panel flows through here
 * so the interaction log is authoritative. */

import { ApiError, WorkbenchApi } from "./api.js";
import { candidatesForCategory } from "./model.js";
import type {
  CandidateDoc,
  ClustersOutput,
  CollectionDoc,
  DisclosuresOutput,
  JoinOutput,
  PairsOutput,
  ParallelSetsOutput,
  ProfilesDoc,
  SuggestOutput,
} from "./types.js";

export type Panel = "setup" | "clusters" | "pairs" | "explore" | "report";

export interface Interaction {
  panel: Panel;
  action: string;
  detail?: string;
}

export interface WorkbenchState {
  panel: Panel;
  sessionId: string | null;
  profiles: ProfilesDoc;
  collection: CollectionDoc | null;
  selectedQis: string[];
  clusters: ClustersOutput | null;
  selectedCluster: string | null;
  pairs: PairsOutput | null;
  selectedPair: [string, string] | null;
  join: JoinOutput | null;
  suggestions: SuggestOutput | null;
  axes: string[];
  parallelSets: ParallelSetsOutput | null;
  disclosures: DisclosuresOutput | null;
  drilldown: CandidateDoc[] | null;
  redactionAcknowledged: boolean;
  error: string | null;
}

export function initialState(): WorkbenchState {
  return {
    panel: "setup",
    sessionId: null,
    profiles: {},
    collection: null,
    selectedQis: [],
    clusters: null,
    selectedCluster: null,
    pairs: null,
    selectedPair: null,
    join: null,
    suggestions: null,
    axes: [],
    parallelSets: null,
    disclosures: null,
    drilldown: null,
    redactionAcknowledged: false,
    error: null,
  };
}

export class WorkbenchController {
  readonly state: WorkbenchState = initialState();
  readonly interactions: Interaction[] = [];
  private listeners: (() => void)[] = [];

  constructor(private readonly api: WorkbenchApi) {}

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener();
  }

  private log(action: string, detail?: string): void {
    this.interactions.push({ panel: this.state.panel, action, detail });
  }

  /** Interactions recorded since the current panel was entered. */
  interactionsOnPanel(panel: Panel): Interaction[] {
    const lastEnter = this.interactions
      .map((x, i) => ({ x, i }))
      .filter(({ x }) => x.action === "enter_panel" && x.detail === panel)
      .map(({ i }) => i)
      .pop();
    if (lastEnter === undefined) return [];
    return this.interactions.slice(lastEnter + 1).filter((x) => x.panel === panel);
  }

  private setPanel(panel: Panel): void {
    this.state.panel = panel;
    this.log("enter_panel", panel);
  }

  async bootstrap(): Promise<void> {
    this.state.profiles = await this.api.getProfiles();
    this.state.collection = await this.api.getCollection();
    this.state.sessionId = await this.api.createSession();
    this.emit();
  }

  private get sessionId(): string {
    if (!this.state.sessionId) throw new Error("session not started");
    return this.state.sessionId;
  }

  async selectProfile(name: string): Promise<void> {
    this.log("select_profile", name);
    const body = await this.api.setQis(this.sessionId, `profile:${name}`);
    this.state.selectedQis = body.selected_qis;
    this.state.clusters = null;
    this.state.pairs = null;
    this.state.join = null;
    this.emit();
  }

  async selectQis(qis: string[]): Promise<void> {
    this.log("select_qis", qis.join(","));
    const body = await this.api.setQis(this.sessionId, qis);
    this.state.selectedQis = body.selected_qis;
    this.emit();
  }

  async runClustering(cut?: number): Promise<void> {
    this.log("run_clustering");
    this.state.clusters = await this.api.runCluster(this.sessionId, cut);
    this.setPanel("clusters");
    this.emit();
  }

  async openCluster(clusterId: string): Promise<void> {
    this.log("open_cluster", clusterId);
    this.state.selectedCluster = clusterId;
    this.state.pairs = await this.api.runPairs(this.sessionId, clusterId);
    this.setPanel("pairs");
    this.emit();
  }

  async openPair(left: string, right: string, key?: string[]): Promise<void> {
    this.log("open_pair", `${left} × ${right}`);
    this.state.selectedPair = [left, right];
    this.state.join = await this.api.runJoin(this.sessionId, left, right, key);
    this.emit();
  }

  /** Re-join the selected pair with an edited key (triage bar toggles). */
  async toggleKeyAttr(attr: string): Promise<void> {
    if (!this.state.join || !this.state.selectedPair) throw new Error("no joined pair");
    this.log("toggle_key_attr", attr);
    const current = this.state.join.spec.key;
    const key = current.includes(attr)
      ? current.filter((k) => k !== attr)
      : [...current, attr];
    const [left, right] = this.state.selectedPair;
    this.state.join = await this.api.runJoin(this.sessionId, left, right, key);
    this.state.parallelSets = null;
    this.state.disclosures = null;
    this.emit();
  }

  /** Move to the exploration panel: suggestions, initial axes, candidates.
   * An empty join renders as an empty state suggesting a looser key. */
  async enterExploration(axes: string[]): Promise<void> {
    if (!this.state.join) throw new Error("join a pair first");
    this.state.error = null;
    try {
      this.state.suggestions = await this.api.runSuggest(this.sessionId);
      this.state.axes = axes;
      this.state.parallelSets = await this.api.runParallelSets(this.sessionId, axes);
      this.state.disclosures = await this.api.runDisclosures(this.sessionId);
    } catch (err) {
      if (err instanceof ApiError && err.code === "EmptyResult") {
        this.state.suggestions = null;
        this.state.parallelSets = null;
        this.state.disclosures = null;
        this.state.error = "The join produced no records; relax the join key.";
      } else {
        throw err;
      }
    }
    this.setPanel("explore");
    this.emit();
  }

  async addAxis(attr: string): Promise<void> {
    this.log("add_axis", attr);
    this.state.axes = [...this.state.axes, attr];
    this.state.parallelSets = await this.api.runParallelSets(this.sessionId, this.state.axes);
    this.emit();
  }

  async removeAxis(attr: string): Promise<void> {
    this.log("remove_axis", attr);
    this.state.axes = this.state.axes.filter((a) => a !== attr);
    this.state.parallelSets = await this.api.runParallelSets(this.sessionId, this.state.axes);
    this.emit();
  }

  /** Clicking a category (or its unit ribbon) opens the drill-down. */
  openCategory(attr: string, value: string): CandidateDoc[] {
    if (!this.state.disclosures) throw new Error("disclosures not loaded");
    this.log("open_category", `${attr}=${value}`);
    this.state.drilldown = candidatesForCategory(this.state.disclosures, attr, value);
    this.emit();
    return this.state.drilldown;
  }

  closeDrilldown(): void {
    this.state.drilldown = null;
    this.emit();
  }

  acknowledgeRedaction(): void {
    this.log("acknowledge_redaction");
    this.state.redactionAcknowledged = true;
    this.emit();
  }

  /** Redacted by default; raw export demands the acknowledgment gate. */
  async exportReportText(redact = true): Promise<string> {
    this.log("export_report", redact ? "redacted" : "raw");
    if (!redact && !this.state.redactionAcknowledged) {
      throw new Error("unredacted export requires acknowledgment");
    }
    return this.api.getReportText(this.sessionId, redact, this.state.redactionAcknowledged);
  }

  async historyDownload(): Promise<string> {
    const doc = await this.api.getSession(this.sessionId);
    return doc.history.map((row) => JSON.stringify(row)).join("\n") + "\n";
  }
}
