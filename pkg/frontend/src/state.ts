/** Pure projections of API responses into what the page shows.
 *
 * The server is the rules authority; everything here only reads the last
 * response. No move legality is decided locally beyond masking cells that
 * the response already shows as unplayable.
 */

import type { EngineInfo, GameState, Seat } from "./api.js";

export interface View {
  phase: "setup" | "playing" | "over" | "error";
  engines: EngineInfo[];
  game: GameState | null;
  banner: string;
  /** A request is in flight; inputs are disabled until the response lands. */
  busy: boolean;
  showValues: boolean;
}

export function initialView(): View {
  return {
    phase: "setup",
    engines: [],
    game: null,
    banner: "",
    busy: false,
    showValues: false,
  };
}

export function cellsOf(board: string): string[] {
  return board.slice(0, 9).split("");
}

export function isOver(game: GameState): boolean {
  return game.status !== "ongoing";
}

export function humanTurn(game: GameState): boolean {
  return !isOver(game) && game.to_move === game.human_seat;
}

/** Cells a click may post: empty, human's turn, game still running. */
export function playableCells(game: GameState | null, busy: boolean): Set<number> {
  const open = new Set<number>();
  if (!game || busy || !humanTurn(game)) return open;
  cellsOf(game.board).forEach((mark, i) => {
    if (mark === ".") open.add(i);
  });
  return open;
}

export function bannerFor(game: GameState): string {
  if (game.status === "draw") return "Draw.";
  if (game.status === game.human_seat) return "You win.";
  if (game.status !== "ongoing") return "Engine wins.";
  return humanTurn(game) ? "Your move." : "Engine to move.";
}

export function engineLabel(info: EngineInfo): string {
  const rating = info.rating == null ? "" : ` (rated ${Math.round(info.rating)})`;
  return `${info.id}${rating}`;
}

export function seatDescription(seat: Seat): string {
  return seat === "O" ? "you move first" : "engine moves first";
}

/** Latest engine move values, newest first, for the diagnostic panel. */
export function lastEngineValues(game: GameState): number[] | null {
  for (let i = game.moves.length - 1; i >= 0; i--) {
    const move = game.moves[i];
    if (move && move.values) return move.values;
  }
  return null;
}
