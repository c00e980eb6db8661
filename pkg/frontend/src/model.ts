/** Pure view-model helpers: geometry, ordering, and masking for display.
 *
 * Nothing here recomputes a risk number. Every figure shown on screen is a
 * field passed through from a service payload; these helpers only scale and
 * arrange them.
 */

import type {
  AxisDoc,
  CandidateDoc,
  DisclosuresOutput,
  ParallelSetsOutput,
  SharedAttributeDoc,
} from "./types.js";

export const CLASS_TOKENS: Record<string, string> = {
  "quasi-identifier": "qi",
  "direct-identifier": "direct",
  sensitive: "sensitive",
  linking: "linking",
  other: "other",
};

export function classToken(semanticClass: string): string {
  return CLASS_TOKENS[semanticClass] ?? "other";
}

export interface EntropyBar {
  name: string;
  /** Verbatim service value (entropy_min); labels render this, untouched. */
  value: number;
  heightPx: number;
  token: string;
  inKey: boolean;
}

/** Bars for the pair-triage chart: height scales entropy_min into maxPx. */
export function entropyBars(
  shared: SharedAttributeDoc[],
  key: string[],
  maxPx: number,
): EntropyBar[] {
  const top = Math.max(...shared.map((s) => s.entropy_min), 1e-9);
  return shared.map((s) => ({
    name: s.name,
    value: s.entropy_min,
    heightPx: (s.entropy_min / top) * maxPx,
    token: classToken(s.semantic_class),
    inKey: key.includes(s.name),
  }));
}

export interface AxisSegment {
  value: string;
  count: number;
  y: number;
  height: number;
}

export interface AxisLayout {
  attr: string;
  x: number;
  segments: AxisSegment[];
}

export interface RibbonBand {
  left: string;
  right: string;
  count: number;
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  height: number;
}

export interface ParallelSetsLayout {
  axes: AxisLayout[];
  ribbons: RibbonBand[][];
  total: number;
}

const SEGMENT_GAP = 4;

function segmentLayout(axis: AxisDoc, total: number, height: number): AxisSegment[] {
  const gaps = SEGMENT_GAP * Math.max(axis.categories.length - 1, 0);
  const usable = Math.max(height - gaps, 1);
  let y = 0;
  return axis.categories.map((cat) => {
    const h = (cat.count / total) * usable;
    const segment = { value: cat.value, count: cat.count, y, height: h };
    y += h + SEGMENT_GAP;
    return segment;
  });
}

/** SVG geometry for the frequency ribbons; widths stay proportional to counts. */
export function parallelSetsLayout(
  model: ParallelSetsOutput,
  width: number,
  height: number,
): ParallelSetsLayout {
  const n = model.axes.length;
  const step = n > 1 ? width / (n - 1) : 0;
  const axes: AxisLayout[] = model.axes.map((axis, i) => ({
    attr: axis.attr,
    x: n > 1 ? i * step : width / 2,
    segments: segmentLayout(axis, model.total, height),
  }));
  const ribbons: RibbonBand[][] = model.ribbons.map((ribbon, i) => {
    const leftAxis = axes[i];
    const rightAxis = axes[i + 1];
    const leftOffsets = new Map(leftAxis.segments.map((s) => [s.value, s.y]));
    const rightOffsets = new Map(rightAxis.segments.map((s) => [s.value, s.y]));
    const scale = (count: number) =>
      (count / model.total) * Math.max(height - SEGMENT_GAP * 4, 1);
    const bands: RibbonBand[] = [];
    for (const cell of ribbon) {
      const h = scale(cell.count);
      const y1 = leftOffsets.get(cell.left) ?? 0;
      const y2 = rightOffsets.get(cell.right) ?? 0;
      bands.push({
        left: cell.left,
        right: cell.right,
        count: cell.count,
        x1: leftAxis.x,
        y1,
        x2: rightAxis.x,
        y2,
        height: h,
      });
      leftOffsets.set(cell.left, y1 + h);
      rightOffsets.set(cell.right, y2 + h);
    }
    return bands;
  });
  return { axes, ribbons, total: model.total };
}

export interface SingletonCategory {
  axisIndex: number;
  attr: string;
  value: string;
}

/** Unit-count categories: the isolable records worth a drill-down click. */
export function singletonCategories(model: ParallelSetsOutput): SingletonCategory[] {
  const out: SingletonCategory[] = [];
  model.axes.forEach((axis, axisIndex) => {
    for (const cat of axis.categories) {
      if (cat.count === 1) {
        out.push({ axisIndex, attr: axis.attr, value: cat.value });
      }
    }
  });
  return out;
}

const ISO_DATE = /^(\d{4})-(\d{2})(-\d{2}.*)?$/;

/** Mirror of the service's redaction rule, used only to MATCH already-masked
 * candidate cells against raw category labels; never to unmask anything. */
export function maskValue(value: string): string {
  const m = ISO_DATE.exec(value);
  if (m) return `${m[1]}-${m[2]}`;
  if (value.length <= 1) return value;
  return value[0] + "X".repeat(value.length - 1);
}

export function maskCategoryValue(value: string): string {
  return value.split("→").map(maskValue).join("→");
}

/** The candidate's joined-view cell for an attribute (cells arrive masked). */
export function candidateJoinedValue(c: CandidateDoc, attr: string): string | null {
  const ki = c.key_attrs.indexOf(attr);
  if (ki >= 0) return c.key[ki];
  const li = c.left_attrs.indexOf(attr);
  const ri = c.right_attrs.indexOf(attr);
  if (li >= 0 && ri >= 0) {
    const left = c.left_row[li];
    const right = c.right_row[ri];
    return left === right ? left : `${left}→${right}`;
  }
  if (li >= 0) return c.left_row[li];
  if (ri >= 0) return c.right_row[ri];
  return null;
}

/** Candidates whose joined value for `attr` matches a clicked category. */
export function candidatesForCategory(
  disclosures: DisclosuresOutput,
  attr: string,
  categoryValue: string,
): CandidateDoc[] {
  const masked = maskCategoryValue(categoryValue);
  return disclosures.candidates.filter(
    (c) => candidateJoinedValue(c, attr) === masked,
  );
}

export function shortRef(ref: string): string {
  const [, datasetId] = ref.split(":", 2);
  return datasetId ?? ref;
}

export function formatFraction(value: number): string {
  return value.toFixed(3);
}
