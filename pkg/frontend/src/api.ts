/** Typed client for the game-service JSON API. */

export type Seat = "O" | "X";
export type Status = Seat | "draw" | "ongoing";

export interface EngineInfo {
  id: string;
  spec: string;
  rating: number | null;
}

export interface MoveRecord {
  seat: Seat;
  cell: number;
  /** Engine moves carry the 9 action values it chose from; human moves null. */
  values: number[] | null;
}

export interface GameState {
  schema: number;
  id: string;
  engine_id: string;
  engine_spec: string;
  human_seat: Seat;
  /** Wire form: nine cell characters then the mover's mark. */
  board: string;
  to_move: Seat | null;
  status: Status;
  moves: MoveRecord[];
}

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

async function decode<T>(resp: Response): Promise<T> {
  if (!resp.ok) {
    let detail = `${resp.status}`;
    try {
      const body = (await resp.json()) as { detail?: string };
      if (body.detail) detail = body.detail;
    } catch {
      // non-JSON error body, keep the status text
    }
    throw new ApiError(resp.status, detail);
  }
  return (await resp.json()) as T;
}

export class Api {
  constructor(
    private readonly base: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.fetchFn(this.base + path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    }).then((r) => decode<T>(r));
  }

  async listEngines(): Promise<EngineInfo[]> {
    const doc = await this.fetchFn(this.base + "/api/engines").then((r) =>
      decode<{ engines: EngineInfo[] }>(r),
    );
    return doc.engines;
  }

  createGame(engineId: string, humanSeat: Seat): Promise<GameState> {
    return this.post("/api/games", { engine_id: engineId, human_seat: humanSeat });
  }

  getGame(id: string): Promise<GameState> {
    return this.fetchFn(this.base + `/api/games/${id}`).then((r) =>
      decode<GameState>(r),
    );
  }

  playMove(id: string, cell: number): Promise<GameState> {
    return this.post(`/api/games/${id}/moves`, { cell });
  }
}
