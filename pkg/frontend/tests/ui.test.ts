// @vitest-environment jsdom
import { beforeEach, describe, expect, it, vi } from "vitest";

import { initialView, View } from "../src/state.js";
import { Handlers, render } from "../src/ui.js";
import { gameState } from "./helpers.js";

let root: HTMLElement;
let handlers: Handlers;

beforeEach(() => {
  document.body.innerHTML = '<div id="app"></div>';
  root = document.getElementById("app") as HTMLElement;
  handlers = { onStart: vi.fn(), onCell: vi.fn(), onToggleValues: vi.fn() };
});

function boardMarks(): string[] {
  return Array.from(root.querySelectorAll<HTMLButtonElement>(".cell")).map(
    (b) => b.textContent || ".",
  );
}

function viewWith(over: Partial<View>): View {
  return { ...initialView(), ...over };
}

describe("board rendering", () => {
  it("paints exactly the server board", () => {
    const view = viewWith({
      phase: "playing",
      game: gameState({ board: "OX..O...XX", to_move: "X", human_seat: "X" }),
    });
    render(root, view, handlers);
    expect(boardMarks()).toEqual(["O", "X", ".", ".", "O", ".", ".", ".", "X"]);
  });

  it("enables only empty cells on the human turn", () => {
    const view = viewWith({ phase: "playing", game: gameState({ board: "OX.......O" }) });
    render(root, view, handlers);
    const cells = Array.from(root.querySelectorAll<HTMLButtonElement>(".cell"));
    expect(cells.map((c) => c.disabled)).toEqual(
      [true, true, false, false, false, false, false, false, false],
    );
  });

  it("disables every cell when the engine is to move, when busy, and when over", () => {
    for (const view of [
      viewWith({ phase: "playing", game: gameState({ to_move: "X" }) }),
      viewWith({ phase: "playing", game: gameState(), busy: true }),
      viewWith({ phase: "over", game: gameState({ status: "draw", to_move: null }) }),
    ]) {
      render(root, view, handlers);
      const cells = Array.from(root.querySelectorAll<HTMLButtonElement>(".cell"));
      expect(cells.every((c) => c.disabled)).toBe(true);
    }
  });

  it("clicking an open cell reports it; occupied and disabled cells never do", () => {
    const view = viewWith({ phase: "playing", game: gameState({ board: "O........X", human_seat: "X", to_move: "X" }) });
    render(root, view, handlers);
    const cells = root.querySelectorAll<HTMLButtonElement>(".cell");
    cells[1]?.click();
    expect(handlers.onCell).toHaveBeenCalledWith(1);
    cells[0]?.click(); // occupied
    expect(handlers.onCell).toHaveBeenCalledTimes(1);
  });
});

describe("setup controls", () => {
  it("lists engines and starts with the chosen seat", () => {
    const view = viewWith({
      engines: [
        { id: "a", spec: "a", rating: 1500 },
        { id: "b", spec: "b", rating: null },
      ],
    });
    render(root, view, handlers);
    const options = root.querySelectorAll("#engine-select option");
    expect(options).toHaveLength(2);

    (root.querySelector("#seat-X") as HTMLInputElement).checked = true;
    (root.querySelector("#start") as HTMLButtonElement).click();
    expect(handlers.onStart).toHaveBeenCalledWith("a", "X");
  });

  it("disables start when unreachable or engine list empty", () => {
    render(root, viewWith({ phase: "error", banner: "Service unreachable." }), handlers);
    expect((root.querySelector("#start") as HTMLButtonElement).disabled).toBe(true);
    expect(root.querySelector("#banner")?.textContent).toBe("Service unreachable.");

    render(root, viewWith({ engines: [] }), handlers);
    expect((root.querySelector("#start") as HTMLButtonElement).disabled).toBe(true);
  });
});

describe("diagnostics", () => {
  const played = gameState({
    moves: [
      { seat: "O", cell: 4, values: null },
      { seat: "X", cell: 0, values: [0.9, 0, 0, 0, 0.1, 0, 0, 0, -0.4] },
    ],
  });

  it("hides values until toggled, then shows the last engine vector", () => {
    render(root, viewWith({ phase: "playing", game: played }), handlers);
    expect(root.querySelectorAll("[data-value-cell]")).toHaveLength(0);

    render(root, viewWith({ phase: "playing", game: played, showValues: true }), handlers);
    const shown = root.querySelectorAll("[data-value-cell]");
    expect(shown).toHaveLength(9);
    expect(shown[0]?.textContent).toBe("0.900");
  });

  it("reports the toggle through the handler", () => {
    render(root, viewWith({}), handlers);
    const box = root.querySelector("#show-values") as HTMLInputElement;
    box.checked = true;
    box.dispatchEvent(new Event("change"));
    expect(handlers.onToggleValues).toHaveBeenCalledWith(true);
  });

  it("writes the move history with attribution", () => {
    render(root, viewWith({ phase: "playing", game: played }), handlers);
    const items = Array.from(root.querySelectorAll("#history li")).map((li) => li.textContent);
    expect(items).toEqual(["O -> cell 4 (you)", "X -> cell 0 (engine)"]);
  });
});
