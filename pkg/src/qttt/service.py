"""HTTP service for interactive play against trained engines.

JSON API (every response carries a ``schema`` version field):

    GET  /api/engines             -> {schema, engines: [{id, spec, rating}]}
    POST /api/games               <- {engine_id, human_seat: "O"|"X"}
    GET  /api/games/{id}          -> session state
    POST /api/games/{id}/moves    <- {cell: 0..8}

O always moves first, so creating a game with human_seat "X" returns the
engine's opening move already applied. Illegal or out-of-turn moves answer
409 and leave the session untouched. Engine replies are computed
synchronously in sampled-readout mode by default (the exact flag switches
to deterministic expectations).

Sessions live in memory; checkpoints are read once at startup and never
written. The static play UI, when built, is mounted at the site root.
"""

from __future__ import annotations

import threading
import uuid
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

import numpy as np

from . import game
from .engines import Engine, checkpoint_load
from .game import Board, IllegalMove, apply_move, legal_moves, outcome

SCHEMA = 1
DEFAULT_SHOTS = 1024


class EngineEntry:
    def __init__(self, engine: Engine, rating: float | None = None):
        self.engine = engine
        self.rating = rating


class Session:
    def __init__(self, session_id: str, engine_id: str, human_seat: str):
        self.id = session_id
        self.engine_id = engine_id
        self.human_seat = human_seat
        self.board = Board.empty()
        self.moves = []  # {seat, cell, values|None}
        self.lock = threading.Lock()

    @property
    def engine_seat(self) -> str:
        return game.X if self.human_seat == game.O else game.O

    def state(self, engine_spec: str) -> dict:
        status = outcome(self.board)
        return {
            "schema": SCHEMA,
            "id": self.id,
            "engine_id": self.engine_id,
            "engine_spec": engine_spec,
            "human_seat": self.human_seat,
            "board": self.board.to_string(),
            "to_move": self.board.to_move if status == game.ONGOING else None,
            "status": status,
            "moves": self.moves,
        }


class CreateGame(BaseModel):
    engine_id: str
    human_seat: str = Field(pattern="^[OX]$")


class PlayMove(BaseModel):
    cell: int = Field(ge=0, le=8)


def create_app(entries: dict, shots: int | None = DEFAULT_SHOTS,
               static_dir=None, rng_seed=None) -> FastAPI:
    """App over prebuilt engines: ``entries`` maps id -> EngineEntry."""
    app = FastAPI(title="qttt service")
    sessions: dict = {}
    rng = np.random.default_rng(rng_seed)

    def get_entry(engine_id: str) -> EngineEntry:
        entry = entries.get(engine_id)
        if entry is None:
            raise HTTPException(404, f"unknown engine {engine_id!r}")
        return entry

    def get_session(session_id: str) -> Session:
        session = sessions.get(session_id)
        if session is None:
            raise HTTPException(404, f"unknown game {session_id!r}")
        return session

    def engine_reply(session: Session, entry: EngineEntry):
        values = entry.engine.evaluate(session.board, shots=shots, rng=rng)
        legal = legal_moves(session.board)
        cell = max(legal, key=lambda c: (values[c], -c))
        session.board = apply_move(session.board, cell)
        session.moves.append({"seat": session.engine_seat, "cell": int(cell),
                              "values": [float(v) for v in values]})

    @app.get("/api/engines")
    def list_engines():
        return {"schema": SCHEMA,
                "engines": [{"id": i, "spec": e.engine.spec.key, "rating": e.rating}
                            for i, e in sorted(entries.items())]}

    @app.post("/api/games", status_code=201)
    def create_game(req: CreateGame):
        entry = get_entry(req.engine_id)
        session = Session(uuid.uuid4().hex, req.engine_id, req.human_seat)
        if session.engine_seat == game.O:
            engine_reply(session, entry)
        sessions[session.id] = session
        return session.state(entry.engine.spec.key)

    @app.get("/api/games/{session_id}")
    def get_game(session_id: str):
        session = get_session(session_id)
        return session.state(entries[session.engine_id].engine.spec.key)

    @app.post("/api/games/{session_id}/moves")
    def play_move(session_id: str, req: PlayMove):
        session = get_session(session_id)
        entry = entries[session.engine_id]
        with session.lock:
            if outcome(session.board) != game.ONGOING:
                raise HTTPException(409, "game is over")
            if session.board.to_move != session.human_seat:
                raise HTTPException(409, "not your turn")
            try:
                session.board = apply_move(session.board, req.cell)
            except IllegalMove as e:
                raise HTTPException(409, str(e)) from None
            session.moves.append({"seat": session.human_seat,
                                  "cell": req.cell, "values": None})
            if outcome(session.board) == game.ONGOING:
                engine_reply(session, entry)
            return session.state(entry.engine.spec.key)

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    return app


def load_entries(checkpoint_dir) -> dict:
    """One engine per checkpoint file, keyed by its spec string."""
    import json
    entries = {}
    for path in sorted(Path(checkpoint_dir).glob("*.json")):
        engine = checkpoint_load(path)
        rating = json.loads(path.read_text()).get("rating")
        entries[engine.spec.key] = EngineEntry(engine, rating)
    return entries


def app_from_config(config: dict) -> FastAPI:
    block = config.get("serve", {})
    ckpt_dir = block.get("checkpoint_dir")
    if ckpt_dir is None or not Path(ckpt_dir).is_dir():
        raise FileNotFoundError(f"serve.checkpoint_dir missing: {ckpt_dir!r}")
    entries = load_entries(ckpt_dir)
    if not entries:
        raise FileNotFoundError(f"no checkpoints in {ckpt_dir}")
    shots = block.get("shots", DEFAULT_SHOTS)
    if block.get("exact"):
        shots = None
    static_dir = block.get("static_dir")
    if static_dir is None:
        bundled = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        static_dir = bundled if bundled.is_dir() else None
    return create_app(entries, shots=shots, static_dir=static_dir,
                      rng_seed=block.get("rng_seed"))


def serve(config: dict):
    """Blocking entry point used by the serve command."""
    import uvicorn
    block = config.get("serve", {})
    app = app_from_config(config)
    uvicorn.run(app, host=block.get("host", "127.0.0.1"),
                port=int(block.get("port", 8000)), log_level="warning")
    return Path(config.get("out_dir", "."))
