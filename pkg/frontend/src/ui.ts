/** DOM rendering. The whole page is rebuilt from the view on every change,
 * so what is on screen is always a function of the last server response. */

import type { Seat } from "./api.js";
import {
  View,
  cellsOf,
  engineLabel,
  lastEngineValues,
  playableCells,
  seatDescription,
} from "./state.js";

export interface Handlers {
  onStart(engineId: string, seat: Seat): void;
  onCell(cell: number): void;
  onToggleValues(show: boolean): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  attrs: Record<string, string> = {},
  text = "",
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  if (text) node.textContent = text;
  return node;
}

function renderSetup(doc: Document, view: View, handlers: Handlers): HTMLElement {
  const panel = el(doc, "div", { id: "setup" });
  const select = el(doc, "select", { id: "engine-select" });
  for (const engine of view.engines) {
    select.appendChild(el(doc, "option", { value: engine.id }, engineLabel(engine)));
  }
  panel.appendChild(select);

  const seatBox = el(doc, "span", { id: "seat-box" });
  for (const seat of ["O", "X"] as Seat[]) {
    const label = el(doc, "label");
    const radio = el(doc, "input", {
      type: "radio",
      name: "seat",
      value: seat,
      id: `seat-${seat}`,
    }) as HTMLInputElement;
    if (seat === "O") radio.checked = true;
    label.appendChild(radio);
    label.appendChild(doc.createTextNode(` play ${seat} (${seatDescription(seat)})`));
    seatBox.appendChild(label);
  }
  panel.appendChild(seatBox);

  const start = el(doc, "button", { id: "start" }, "Start game") as HTMLButtonElement;
  start.disabled = view.busy || view.phase === "error" || view.engines.length === 0;
  start.addEventListener("click", () => {
    const engineId = (panel.querySelector("#engine-select") as HTMLSelectElement).value;
    const seat = (panel.querySelector('input[name="seat"]:checked') as HTMLInputElement)
      .value as Seat;
    handlers.onStart(engineId, seat);
  });
  panel.appendChild(start);
  return panel;
}

function renderBoard(doc: Document, view: View, handlers: Handlers): HTMLElement {
  const grid = el(doc, "div", { id: "board" });
  const game = view.game;
  const marks = game ? cellsOf(game.board) : Array(9).fill(".");
  const open = playableCells(game, view.busy);
  marks.forEach((mark, i) => {
    const cell = el(doc, "button", {
      class: "cell",
      "data-cell": String(i),
    }, mark === "." ? "" : mark) as HTMLButtonElement;
    cell.disabled = !open.has(i);
    cell.addEventListener("click", () => {
      // disabled buttons never fire, but a synthetic dispatch could;
      // the mask is the client half of the no-illegal-submits rule
      if (open.has(i)) handlers.onCell(i);
    });
    grid.appendChild(cell);
  });
  return grid;
}

function renderValues(doc: Document, view: View): HTMLElement {
  const panel = el(doc, "div", { id: "values" });
  if (!view.showValues || !view.game) return panel;
  const values = lastEngineValues(view.game);
  if (!values) return panel;
  panel.appendChild(el(doc, "p", {}, "engine action values (last move)"));
  const grid = el(doc, "div", { class: "values-grid" });
  values.forEach((v, i) => {
    grid.appendChild(el(doc, "span", { "data-value-cell": String(i) }, v.toFixed(3)));
  });
  panel.appendChild(grid);
  return panel;
}

function renderHistory(doc: Document, view: View): HTMLElement {
  const list = el(doc, "ol", { id: "history" });
  if (!view.game) return list;
  for (const move of view.game.moves) {
    const who = move.values ? "engine" : "you";
    list.appendChild(el(doc, "li", {}, `${move.seat} -> cell ${move.cell} (${who})`));
  }
  return list;
}

export function render(root: HTMLElement, view: View, handlers: Handlers): void {
  const doc = root.ownerDocument;
  root.textContent = "";

  root.appendChild(el(doc, "h1", {}, "Play the engines"));
  root.appendChild(renderSetup(doc, view, handlers));

  const banner = el(doc, "p", { id: "banner", class: view.phase }, view.banner);
  root.appendChild(banner);

  if (view.game) {
    const spec = view.game.engine_spec;
    root.appendChild(el(doc, "p", { id: "opponent" }, `engine: ${spec}`));
  }
  root.appendChild(renderBoard(doc, view, handlers));

  const toggle = el(doc, "label", { id: "values-toggle" });
  const box = el(doc, "input", { type: "checkbox", id: "show-values" }) as HTMLInputElement;
  box.checked = view.showValues;
  box.addEventListener("change", () => handlers.onToggleValues(box.checked));
  toggle.appendChild(box);
  toggle.appendChild(doc.createTextNode(" show engine values"));
  root.appendChild(toggle);

  root.appendChild(renderValues(doc, view));
  root.appendChild(renderHistory(doc, view));
}
