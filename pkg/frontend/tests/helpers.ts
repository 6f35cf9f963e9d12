import type { GameState, MoveRecord, Seat } from "../src/api.js";

export function gameState(overrides: Partial<GameState> = {}): GameState {
  return {
    schema: 1,
    id: "g1",
    engine_id: "ccnn-weaker",
    engine_spec: "ccnn-weaker",
    human_seat: "O" as Seat,
    board: ".........O",
    to_move: "O",
    status: "ongoing",
    moves: [] as MoveRecord[],
    ...overrides,
  };
}

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}
