/** Controller: one session per page, requests serialized through `busy`. */

import { Api, ApiError, Seat } from "./api.js";
import { View, bannerFor, initialView, playableCells } from "./state.js";
import { Handlers, render } from "./ui.js";

export class App {
  view: View = initialView();
  private pending: Promise<void> = Promise.resolve();

  constructor(
    private readonly root: HTMLElement,
    private readonly api: Api,
  ) {}

  /** Resolves when every request issued so far has been rendered. */
  whenIdle(): Promise<void> {
    return this.pending;
  }

  private draw(): void {
    const handlers: Handlers = {
      onStart: (engineId, seat) => this.start(engineId, seat),
      onCell: (cell) => this.play(cell),
      onToggleValues: (show) => {
        this.view.showValues = show;
        this.draw();
      },
    };
    render(this.root, this.view, handlers);
  }

  private track(work: () => Promise<void>): void {
    this.pending = this.pending.then(work);
  }

  boot(): void {
    this.track(async () => {
      try {
        this.view.engines = await this.api.listEngines();
        this.view.banner = "Pick an engine and a seat.";
      } catch {
        this.view.phase = "error";
        this.view.banner = "Service unreachable.";
      }
      this.draw();
    });
  }

  start(engineId: string, seat: Seat): void {
    if (this.view.busy || this.view.phase === "error") return;
    this.view.busy = true;
    this.draw();
    this.track(async () => {
      try {
        const game = await this.api.createGame(engineId, seat);
        this.view.game = game;
        this.view.phase = game.status === "ongoing" ? "playing" : "over";
        this.view.banner = bannerFor(game);
      } catch (err) {
        this.view.banner = err instanceof ApiError ? `Error: ${err.message}` : "Service unreachable.";
        if (!(err instanceof ApiError)) this.view.phase = "error";
      }
      this.view.busy = false;
      this.draw();
    });
  }

  play(cell: number): void {
    const game = this.view.game;
    // client half of the legality rule: only cells the mask allows get posted
    if (!game || !playableCells(game, this.view.busy).has(cell)) return;
    this.view.busy = true;
    this.draw();
    this.track(async () => {
      try {
        const next = await this.api.playMove(game.id, cell);
        this.view.game = next;
        this.view.phase = next.status === "ongoing" ? "playing" : "over";
        this.view.banner = bannerFor(next);
      } catch (err) {
        if (err instanceof ApiError) {
          // server refused; re-sync the view from its authoritative state
          this.view.banner = `Error: ${err.message}`;
          try {
            this.view.game = await this.api.getGame(game.id);
          } catch {
            this.view.phase = "error";
          }
        } else {
          this.view.phase = "error";
          this.view.banner = "Service unreachable.";
        }
      }
      this.view.busy = false;
      this.draw();
    });
  }
}

export function mount(root: HTMLElement, base = ""): App {
  const app = new App(root, new Api(base));
  app.boot();
  return app;
}
