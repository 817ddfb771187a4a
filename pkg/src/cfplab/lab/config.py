"""Experiment configuration: JSON loading, validation and dispatch."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from ..analytic.words import parse_word
from ..ensembles import check_cn_integer
from ..errors import CfpError, ConfigError
from ..spectral import BlockModelSpec
from . import experiments as ex

__all__ = ["EXPERIMENTS", "ExperimentConfig", "load_config", "parse_config", "run_config"]

EXPERIMENTS = ("moment", "fpinv", "dyson", "decouple", "freeness", "blockmodel", "annulus")

_KEYS = (
    "experiment-name",
    "n",
    "c",
    "r",
    "N",
    "words",
    "trials",
    "seed",
    "tolerance",
    "output",
    "format",
    "threads",
)
_TOL_KEYS = {"stderr-multiplier": "multiplier", "absolute": "absolute", "relative": "relative"}


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to rerun one experiment.

    ``n`` and ``r`` are always stored as tuples.  ``words`` holds word
    strings in the :func:`~cfplab.analytic.parse_word` grammar; an empty
    tuple selects the experiment's default word list.
    """

    experiment: str
    n: tuple = (200,)
    c: float = 1.0
    r: tuple = (0.6,)
    N: int = 2
    words: tuple = ()
    trials: int = 10
    seed: int = 0
    tolerance: ex.Tolerance = field(default_factory=ex.Tolerance)
    output: str | None = None
    format: str = "csv"
    threads: int = 1

    def validate(self) -> "ExperimentConfig":
        """Check every precondition before any sampling starts."""
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}", "experiment-name")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1", "trials")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1", "threads")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}", "format")
        if not self.c >= 1:
            raise ConfigError(f"c must be >= 1, got {self.c}", "c")
        if not self.n or any(k < 1 for k in self.n):
            raise ConfigError("n must be positive", "n")
        if any(r < 0 for r in self.r):
            raise ConfigError("radii must be >= 0", "r")
        for i, w in enumerate(self.words):
            try:
                parse_word(w)
            except CfpError as exc:
                raise ConfigError(str(exc), f"words[{i}]") from exc
        try:
            for n in self.n:
                if self.experiment in ("moment", "fpinv", "decouple", "annulus"):
                    check_cn_integer(n, self.c)
                elif self.experiment == "blockmodel":
                    BlockModelSpec(self.N, n, self.c)
                    check_cn_integer(self.N * n, self.c)
        except CfpError as exc:
            raise ConfigError(str(exc), "n") from exc
        if self.experiment == "dyson" and any(k < 20 for k in self.n):
            raise ConfigError("dyson check needs n >= 20", "n")
        if self.experiment == "freeness" and any(k < 50 for k in self.n):
            raise ConfigError("freeness check needs n >= 50", "n")
        return self


def _as_tuple(value, key, kind):
    items = value if isinstance(value, list) else [value]
    out = []
    for i, item in enumerate(items):
        if isinstance(item, bool) or not isinstance(item, (int, float)):
            raise ConfigError(f"expected a number, got {item!r}", f"{key}[{i}]" if isinstance(value, list) else key)
        if kind is int and int(item) != item:
            raise ConfigError(f"expected an integer, got {item!r}", key)
        out.append(kind(item))
    return tuple(out)


def _scalar(doc, key, kind):
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)) or (kind is int and int(value) != value):
        raise ConfigError(f"expected {kind.__name__}, got {value!r}", key)
    return kind(value)


def parse_config(doc: dict) -> ExperimentConfig:
    """Build and validate an :class:`ExperimentConfig` from a decoded JSON object."""
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(doc) - set(_KEYS))
    if unknown:
        raise ConfigError(f"unknown key (allowed: {', '.join(_KEYS)})", unknown[0])
    if "experiment-name" not in doc:
        raise ConfigError("missing required key", "experiment-name")
    kw = {"experiment": doc["experiment-name"]}
    if "n" in doc:
        kw["n"] = _as_tuple(doc["n"], "n", int)
    if "r" in doc:
        kw["r"] = _as_tuple(doc["r"], "r", float)
    for key, kind in (("c", float), ("N", int), ("trials", int), ("seed", int), ("threads", int)):
        if key in doc:
            kw[key] = _scalar(doc, key, kind)
    if "words" in doc:
        words = doc["words"]
        if not isinstance(words, list) or not all(isinstance(w, str) for w in words):
            raise ConfigError("expected a list of word strings", "words")
        kw["words"] = tuple(words)
    if "tolerance" in doc:
        tol = doc["tolerance"]
        if isinstance(tol, (int, float)) and not isinstance(tol, bool):
            kw["tolerance"] = ex.Tolerance(multiplier=float(tol))
        elif isinstance(tol, dict):
            bad = sorted(set(tol) - set(_TOL_KEYS))
            if bad:
                raise ConfigError("unknown key", f"tolerance.{bad[0]}")
            kw["tolerance"] = ex.Tolerance(**{_TOL_KEYS[k]: float(v) for k, v in tol.items()})
        else:
            raise ConfigError("expected a number or an object", "tolerance")
    for key in ("output", "format"):
        if key in doc:
            if not isinstance(doc[key], str):
                raise ConfigError("expected a string", key)
            kw[key] = doc[key]
    if kw.get("seed", 0) < 0:
        raise ConfigError("seed must be an unsigned 64-bit integer", "seed")
    return ExperimentConfig(**kw).validate()


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    return parse_config(doc)


def _words_or(cfg, default):
    return list(cfg.words) if cfg.words else list(default)


def run_config(cfg: ExperimentConfig) -> list:
    """Run the experiment described by ``cfg`` and return its report rows."""
    cfg.validate()
    common = dict(tol=cfg.tolerance, threads=cfg.threads)
    name = cfg.experiment
    if name == "moment":
        return ex.run_moment_check(cfg.c, cfg.n, _words_or(cfg, ex.DEFAULT_WORDS), cfg.trials, cfg.seed, **common)
    if name == "fpinv":
        return ex.run_fpinv_sweep(cfg.c, cfg.n, cfg.r, cfg.trials, cfg.seed, **common)
    if name == "dyson":
        return [row for n in cfg.n for row in ex.run_dyson_check(n, cfg.trials, cfg.seed, **common)]
    if name == "decouple":
        return ex.run_decoupling_check(cfg.c, cfg.n, _words_or(cfg, ex.DEFAULT_WORDS), cfg.trials, cfg.seed, **common)
    if name == "freeness":
        words = _words_or(cfg, ex.FREENESS_WORDS)
        return [row for n in cfg.n for row in ex.run_freeness_check(n, cfg.trials, words, cfg.seed, **common)]
    if name == "blockmodel":
        words = _words_or(cfg, ex.DEFAULT_WORDS)
        return [row for n in cfg.n
                for row in ex.run_blockmodel_check(cfg.N, cfg.c, n, words, cfg.trials, cfg.seed, **common)]
    return ex.run_annulus_check(cfg.c, cfg.n, (1, 2), cfg.trials, cfg.seed, **common)


def with_overrides(cfg: ExperimentConfig, **changes) -> ExperimentConfig:
    """Copy of ``cfg`` with the non-``None`` entries of ``changes`` applied."""
    return replace(cfg, **{k: v for k, v in changes.items() if v is not None}).validate()
