"""Config-driven experiment runner and artifact writer.

A run is described by one JSON document:

    {
      "command": "train" | "tournament" | "qi-fixed" | "qi-sweep"
                 | "serve" | "emit-plots",
      "seed": 0,
      "out_dir": "runs/example",
      "engines": ["ccnn-weaker", ...],
      "train": {"episodes": 10000, "gamma": 0.9, ...},
      "arena": {"games_per_pair": 100, "k": 32, "n_games": 10000},
      "channel": {"model": 1, "distance_km": 100.0, "pattern": "B",
                  "models": [1, 2], "patterns": ["A","B","C"],
                  "distances": [0.01, 0.1, 1.0, 10.0], "seeds": [0,1,2],
                  "eval_games": 10000},
      "serve": {"host": "127.0.0.1", "port": 8000, "shots": 1024,
                "checkpoint_dir": "...", "static_dir": "..."}
    }

Only the blocks a command reads need to be present. Every run writes
``manifest.json`` (the fully resolved config plus library versions); feeding
a manifest back in reproduces every CSV byte for byte in exact mode, since
all randomness flows from the recorded seeds.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import asdict
from pathlib import Path

from . import __version__
from .arena import GreedyPlayer, round_robin
from .channel import (ChannelConfig, FIXED_DISTANCE_KM, distance_sweep,
                      run_pattern_experiment)
from .engines import build_engine, checkpoint_load, checkpoint_save
from .trainer import TrainConfig, train, write_training_log

OUT_ROOT_ENV = "QTTT_OUT_ROOT"
COMMANDS = ("train", "tournament", "qi-fixed", "qi-sweep", "serve", "emit-plots")


class ConfigError(Exception):
    pass


class MissingData(Exception):
    pass


def _require(cond: bool, msg: str):
    if not cond:
        raise ConfigError(msg)


def load_config(path) -> dict:
    try:
        with open(path) as f:
            doc = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"config {path} is not valid JSON: {e}") from None
    if "config" in doc and "command" not in doc:  # accept a manifest as-is
        doc = doc["config"]
    _require(isinstance(doc, dict), "config root must be an object")
    return doc


def resolve_config(config: dict, seed=None, out_dir=None) -> dict:
    config = dict(config)
    if seed is not None:
        config["seed"] = seed
    config.setdefault("seed", 0)
    if out_dir is not None:
        config["out_dir"] = out_dir
    _require(config.get("command") in COMMANDS,
             f"command must be one of {COMMANDS}, got {config.get('command')!r}")
    if config["command"] != "emit-plots" or "out_dir" not in config:
        root = os.environ.get(OUT_ROOT_ENV, "runs")
        config.setdefault("out_dir", str(Path(root) / config["command"]))
    return config


def train_config_from(block: dict | None, seed: int) -> TrainConfig:
    block = dict(block or {})
    block.setdefault("seed", seed)
    allowed = set(TrainConfig.__dataclass_fields__)
    unknown = set(block) - allowed
    _require(not unknown, f"unknown train options: {sorted(unknown)}")
    try:
        return TrainConfig(**block)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"bad train block: {e}") from None


def _write_manifest(out: Path, config: dict):
    import numpy
    doc = {"schema": 1, "config": config,
           "versions": {"qttt": __version__, "numpy": numpy.__version__}}
    (out / "manifest.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _write_csv(path: Path, header: list, rows: list):
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(header)
        w.writerows(rows)


def _fmt(x: float) -> str:
    return f"{x:.6f}"


# ---------------------------------------------------------------------------
# Commands


def run_train(config: dict) -> Path:
    out = Path(config["out_dir"])
    keys = config.get("engines")
    _require(isinstance(keys, list) and keys, "train needs a non-empty engines list")
    (out / "checkpoints").mkdir(parents=True, exist_ok=True)
    (out / "logs").mkdir(exist_ok=True)
    seed = config["seed"]
    tcfg = train_config_from(config.get("train"), seed)
    for key in keys:
        engine = build_engine(key, seed=seed)
        log = train(engine, tcfg)
        checkpoint_save(engine, out / "checkpoints" / f"{key}.json", seed=seed)
        write_training_log(log, out / "logs" / f"{key}-training.csv")
    _write_manifest(out, config)
    return out


def _tournament_players(config: dict, out: Path) -> dict:
    keys = config.get("engines")
    _require(isinstance(keys, list) and len(keys) >= 2,
             "tournament needs at least 2 engine keys")
    _require(len(set(keys)) == len(keys), "duplicate engine keys")
    seed = config["seed"]
    engines = {}
    if "train" in config:
        tcfg = train_config_from(config["train"], seed)
        (out / "checkpoints").mkdir(parents=True, exist_ok=True)
        for key in keys:
            engine = build_engine(key, seed=seed)
            train(engine, tcfg)
            checkpoint_save(engine, out / "checkpoints" / f"{key}.json", seed=seed)
            engines[key] = engine
    else:
        ckpt_dir = Path(config.get("checkpoint_dir", out / "checkpoints"))
        for key in keys:
            path = ckpt_dir / f"{key}.json"
            _require(path.exists(), f"no checkpoint for {key} at {path}")
            engines[key] = checkpoint_load(path, expect_spec=key)
    return {key: GreedyPlayer(engine) for key, engine in engines.items()}


def run_tournament(config: dict) -> Path:
    out = Path(config["out_dir"])
    out.mkdir(parents=True, exist_ok=True)
    players = _tournament_players(config, out)
    arena_cfg = config.get("arena", {})
    log = []
    table = round_robin(players,
                        games_per_pair=arena_cfg.get("games_per_pair", 100),
                        k=arena_cfg.get("k", 32.0),
                        seed=config["seed"], log=log)
    _write_csv(out / "ratings.csv", ["engine_id", "games", "rating"],
               [[i, table.games[i], _fmt(table.ratings[i])] for i in sorted(table.ratings)])
    history_rows = [[i, g, _fmt(r)] for i in sorted(table.history)
                    for g, r in table.history[i]]
    _write_csv(out / "history.csv", ["engine_id", "games_played", "rating"], history_rows)
    with open(out / "games.jsonl", "w") as f:
        for rec in log:
            f.write(json.dumps(rec, sort_keys=True) + "\n")
    _write_manifest(out, config)
    return out


def _channel_block(config: dict) -> dict:
    block = config.get("channel")
    _require(isinstance(block, dict), "this command needs a channel block")
    return block


def run_qi_fixed(config: dict) -> Path:
    """Patterns x models at one distance; one row per (model, pattern, seed)."""
    out = Path(config["out_dir"])
    out.mkdir(parents=True, exist_ok=True)
    block = _channel_block(config)
    keys = config.get("engines")
    _require(isinstance(keys, list) and len(keys) == 1,
             "qi-fixed runs one engine spec at a time")
    spec_key = keys[0]
    distance = float(block.get("distance_km", FIXED_DISTANCE_KM))
    models = block.get("models", [block.get("model", 1)])
    patterns = block.get("patterns", ["A", "B", "C"])
    seeds = block.get("seeds", [config["seed"]])
    eval_games = int(block.get("eval_games", 10000))
    tcfg = train_config_from(config.get("train"), config["seed"])
    rows = []
    pattern_a_cache = {}
    for seed in seeds:
        for model in models:
            for pattern in patterns:
                cfg = ChannelConfig(model=int(model), distance_km=distance,
                                    attenuation=float(block.get("attenuation", 0.2)),
                                    pattern=pattern)
                if pattern == "A":  # channel never active: model-independent
                    if seed not in pattern_a_cache:
                        pattern_a_cache[seed] = run_pattern_experiment(
                            spec_key, cfg, tcfg, int(seed), eval_games)
                    rating = pattern_a_cache[seed]
                else:
                    rating = run_pattern_experiment(spec_key, cfg, tcfg,
                                                    int(seed), eval_games)
                rows.append([model, pattern, _fmt(distance), _fmt(cfg.sigma),
                             _fmt(rating), seed])
    _write_csv(out / "qi-fixed.csv",
               ["model", "pattern", "distance_km", "sigma", "final_rating", "seed"],
               rows)
    _write_manifest(out, config)
    return out


def run_qi_sweep(config: dict) -> Path:
    out = Path(config["out_dir"])
    out.mkdir(parents=True, exist_ok=True)
    block = _channel_block(config)
    keys = config.get("engines")
    _require(isinstance(keys, list) and len(keys) == 1,
             "qi-sweep runs one engine spec at a time")
    spec_key = keys[0]
    distances = block.get("distances")
    _require(isinstance(distances, list) and distances,
             "qi-sweep needs a channel.distances list")
    model = int(block.get("model", 1))
    seeds = block.get("seeds", [config["seed"]])
    eval_games = int(block.get("eval_games", 10000))
    tcfg = train_config_from(config.get("train"), config["seed"])
    rows = []
    for seed in seeds:
        results = distance_sweep(spec_key, model, distances, int(seed), tcfg,
                                 n_eval_games=eval_games,
                                 attenuation=float(block.get("attenuation", 0.2)))
        for d, sigma, rating in results:
            rows.append([model, "B", _fmt(d), _fmt(sigma), _fmt(rating), seed])
    _write_csv(out / "sweep.csv",
               ["model", "pattern", "distance_km", "sigma", "final_rating", "seed"],
               rows)
    _write_manifest(out, config)
    return out


def emit_plots(results_dir) -> Path:
    """Distill run CSVs into per-figure tidy tables under ``plots/``."""
    results = Path(results_dir)
    plots = results / "plots"
    produced = []
    history = results / "history.csv"
    if history.exists():
        with open(history) as f:
            rows = list(csv.DictReader(f))
        plots.mkdir(exist_ok=True)
        _write_csv(plots / "rating_vs_games.csv", ["series", "games", "rating"],
                   [[r["engine_id"], r["games_played"], r["rating"]] for r in rows])
        produced.append("rating_vs_games.csv")
    sweep = results / "sweep.csv"
    if sweep.exists():
        with open(sweep) as f:
            rows = list(csv.DictReader(f))
        cells = {}
        for r in rows:
            cells.setdefault((r["model"], float(r["distance_km"])), []).append(
                float(r["final_rating"]))
        plots.mkdir(exist_ok=True)
        _write_csv(plots / "rating_vs_distance.csv",
                   ["series", "distance_km", "mean_rating", "n_seeds"],
                   [[f"model-{m}", _fmt(d), _fmt(sum(v) / len(v)), len(v)]
                    for (m, d), v in sorted(cells.items())])
        produced.append("rating_vs_distance.csv")
    fixed = results / "qi-fixed.csv"
    if fixed.exists():
        with open(fixed) as f:
            rows = list(csv.DictReader(f))
        cells = {}
        for r in rows:
            cells.setdefault((r["model"], r["pattern"]), []).append(
                float(r["final_rating"]))
        plots.mkdir(exist_ok=True)
        _write_csv(plots / "rating_by_pattern.csv",
                   ["series", "pattern", "mean_rating", "n_seeds"],
                   [[f"model-{m}", p, _fmt(sum(v) / len(v)), len(v)]
                    for (m, p), v in sorted(cells.items())])
        produced.append("rating_by_pattern.csv")
    if not produced:
        raise MissingData(f"no history.csv, sweep.csv or qi-fixed.csv in {results}")
    return plots


def run(config: dict, seed=None, out_dir=None) -> Path:
    """Dispatch one resolved config. Returns the artifact directory."""
    config = resolve_config(config, seed=seed, out_dir=out_dir)
    command = config["command"]
    if command == "train":
        return run_train(config)
    if command == "tournament":
        return run_tournament(config)
    if command == "qi-fixed":
        return run_qi_fixed(config)
    if command == "qi-sweep":
        return run_qi_sweep(config)
    if command == "emit-plots":
        _require("out_dir" in config, "emit-plots needs an out_dir (or --out)")
        return emit_plots(config["out_dir"])
    if command == "serve":
        from .service import serve
        return serve(config)
    raise ConfigError(f"unhandled command {command!r}")


def describe_train_config(tcfg: TrainConfig) -> dict:
    return asdict(tcfg)
