/**
 * Layout and SVG emission for parsed DOT graphs.
 *
 * Nodes are placed on layers by breadth-first distance from the start
 * point, which preserves the service's drawing conventions: the start
 * arrow into the initial state and double-circled sink states. Added
 * elements arrive with `style=dashed`, removed ones ghosted with
 * `style=dotted`; both become CSS classes on the emitted groups.
 */

import { DotGraph, DotParseError, parseDot } from "./dot.js";

const LAYER_X = 190;
const ROW_Y = 96;
const MARGIN = 70;
const NODE_RX = 62;
const NODE_RY = 26;

interface Placed {
  id: string;
  x: number;
  y: number;
  attrs: Record<string, string>;
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function layerNodes(graph: DotGraph): Placed[] {
  const adjacency = new Map<string, string[]>();
  for (const node of graph.nodes) {
    adjacency.set(node.id, []);
  }
  for (const edge of graph.edges) {
    adjacency.get(edge.from)?.push(edge.to);
  }

  const rank = new Map<string, number>();
  const queue: string[] = [];
  const start = graph.nodes.find((node) => node.attrs["shape"] === "point");
  if (start !== undefined) {
    rank.set(start.id, 0);
    queue.push(start.id);
  }
  while (queue.length > 0) {
    const current = queue.shift()!;
    for (const next of adjacency.get(current) ?? []) {
      if (!rank.has(next)) {
        rank.set(next, (rank.get(current) ?? 0) + 1);
        queue.push(next);
      }
    }
  }
  let spare = Math.max(0, ...rank.values()) + 1;
  for (const node of graph.nodes) {
    if (!rank.has(node.id)) {
      rank.set(node.id, spare);
    }
  }
  spare = 0;

  const perLayer = new Map<number, number>();
  const placed: Placed[] = [];
  for (const node of graph.nodes) {
    const layer = rank.get(node.id)!;
    const row = perLayer.get(layer) ?? 0;
    perLayer.set(layer, row + 1);
    placed.push({
      id: node.id,
      x: MARGIN + layer * LAYER_X,
      y: MARGIN + row * ROW_Y,
      attrs: node.attrs,
    });
  }
  return placed;
}

function styleClasses(attrs: Record<string, string>): string {
  const classes: string[] = [];
  if (attrs["style"] === "dashed") {
    classes.push("dashed");
  }
  if (attrs["style"] === "dotted") {
    classes.push("ghost");
  }
  return classes.length > 0 ? ` ${classes.join(" ")}` : "";
}

function renderNode(node: Placed): string {
  const classes = `node${styleClasses(node.attrs)}`;
  const label = escapeXml(node.id);
  if (node.attrs["shape"] === "point") {
    return (
      `<g class="${classes} start" data-id="${label}">` +
      `<circle cx="${node.x}" cy="${node.y}" r="5" fill="currentColor"/></g>`
    );
  }
  const rings =
    node.attrs["shape"] === "doublecircle"
      ? `<ellipse cx="${node.x}" cy="${node.y}" rx="${NODE_RX}" ry="${NODE_RY}"/>` +
        `<ellipse cx="${node.x}" cy="${node.y}" rx="${NODE_RX - 5}" ry="${NODE_RY - 5}"/>`
      : `<ellipse cx="${node.x}" cy="${node.y}" rx="${NODE_RX}" ry="${NODE_RY}"/>`;
  return (
    `<g class="${classes}" data-id="${label}">${rings}` +
    `<text x="${node.x}" y="${node.y + 4}" text-anchor="middle">${label}</text></g>`
  );
}

function renderEdge(
  edge: { from: string; to: string; attrs: Record<string, string> },
  positions: Map<string, Placed>,
): string {
  const from = positions.get(edge.from);
  const to = positions.get(edge.to);
  if (from === undefined || to === undefined) {
    return "";
  }
  const classes = `edge${styleClasses(edge.attrs)}`;
  const label = edge.attrs["label"];
  let path: string;
  let labelX: number;
  let labelY: number;
  if (edge.from === edge.to) {
    path =
      `M ${from.x} ${from.y - NODE_RY} ` +
      `C ${from.x - 44} ${from.y - NODE_RY - 52}, ` +
      `${from.x + 44} ${from.y - NODE_RY - 52}, ` +
      `${from.x} ${from.y - NODE_RY}`;
    labelX = from.x;
    labelY = from.y - NODE_RY - 44;
  } else {
    path = `M ${from.x} ${from.y} L ${to.x} ${to.y}`;
    labelX = (from.x + to.x) / 2;
    labelY = (from.y + to.y) / 2 - 6;
  }
  const text =
    label !== undefined
      ? `<text x="${labelX}" y="${labelY}" text-anchor="middle">${escapeXml(label)}</text>`
      : "";
  return (
    `<g class="${classes}" data-from="${escapeXml(edge.from)}" ` +
    `data-to="${escapeXml(edge.to)}">` +
    `<path d="${path}" fill="none" marker-end="url(#arrow)"/>${text}</g>`
  );
}

export function renderGraphSvg(graph: DotGraph): string {
  const placed = layerNodes(graph);
  const positions = new Map(placed.map((node) => [node.id, node]));
  const width = Math.max(...placed.map((n) => n.x), MARGIN) + MARGIN + NODE_RX;
  const height = Math.max(...placed.map((n) => n.y), MARGIN) + MARGIN;
  const edges = graph.edges
    .map((edge) => renderEdge(edge, positions))
    .join("");
  const nodes = placed.map(renderNode).join("");
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" ` +
    `class="fsm-graph" data-graph="${escapeXml(graph.name)}">` +
    `<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" ` +
    `markerWidth="7" markerHeight="7" orient="auto-start-reverse">` +
    `<path d="M 0 0 L 10 5 L 0 10 z" fill="currentColor"/></marker></defs>` +
    `${edges}${nodes}</svg>`
  );
}

export type RenderResult =
  | { ok: true; svg: string }
  | { ok: false; fallback: string };

/** Render DOT text, falling back to the raw text on malformed input. */
export function renderDot(dot: string): RenderResult {
  if (dot.trim() === "") {
    return { ok: false, fallback: dot };
  }
  try {
    const graphs = parseDot(dot);
    return { ok: true, svg: graphs.map(renderGraphSvg).join("\n") };
  } catch (error) {
    if (error instanceof DotParseError) {
      return { ok: false, fallback: dot };
    }
    throw error;
  }
}
