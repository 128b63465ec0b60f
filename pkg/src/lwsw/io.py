"""Run configuration, profile files, reports and CSV output."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ParameterError
from .grid import SpectralGrid
from .model import ModelParams, ProfileSet

FORMAT_VERSION = 1


class ConfigError(ValueError):
    """Malformed configuration (unknown keys, wrong types)."""


# --- config --------------------------------------------------------------------

_GRID_KEYS = {"half_width", "size"}
_SOLVER_KEYS = {"kind", "tol", "max_iter", "init"}
_INIT_KEYS = {"kind", "amplitude", "width", "noise"}
_OUTPUT_KEYS = {"profile", "report"}
_TOP_KEYS = {"model", "grid", "solver", "output", "seed"}
SOLVERS = ("petviashvili", "weinstein")


def _reject_unknown(d: dict, allowed: set, where: str):
    if not isinstance(d, dict):
        raise ConfigError(f"{where} must be an object")
    extra = set(d) - allowed
    if extra:
        raise ConfigError(f"unknown key(s) in {where}: {sorted(extra)}")


@dataclass
class RunConfig:
    params: ModelParams
    half_width: float = 40.0
    size: int = 1024
    solver: str = "petviashvili"
    tol: float | None = None
    max_iter: int | None = None
    init_amplitude: float = 1.0
    init_width: float = 2.0
    init_noise: float = 0.0
    seed: int | None = None
    output: dict = field(default_factory=dict)

    @property
    def grid(self) -> SpectralGrid:
        return SpectralGrid(self.half_width, self.size)

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        _reject_unknown(d, _TOP_KEYS, "config")
        if "model" not in d:
            raise ConfigError("config needs a 'model' section")
        params = ModelParams.from_dict(d["model"])
        grid = d.get("grid", {})
        _reject_unknown(grid, _GRID_KEYS, "grid")
        solver = d.get("solver", {})
        _reject_unknown(solver, _SOLVER_KEYS, "solver")
        init = solver.get("init", {})
        _reject_unknown(init, _INIT_KEYS, "solver.init")
        if init.get("kind", "gaussian") != "gaussian":
            raise ConfigError("solver.init.kind must be 'gaussian'")
        output = d.get("output", {})
        _reject_unknown(output, _OUTPUT_KEYS, "output")
        cfg = cls(params=params,
                  half_width=float(grid.get("half_width", 40.0)),
                  size=int(grid.get("size", 1024)),
                  solver=solver.get("kind", "petviashvili"),
                  tol=solver.get("tol"), max_iter=solver.get("max_iter"),
                  init_amplitude=float(init.get("amplitude", 1.0)),
                  init_width=float(init.get("width", 2.0)),
                  init_noise=float(init.get("noise", 0.0)),
                  seed=d.get("seed"), output=dict(output))
        cfg.validate()
        return cfg

    def validate(self):
        if self.solver not in SOLVERS:
            raise ConfigError(f"solver kind must be one of {SOLVERS}, got {self.solver!r}")
        try:
            self.grid
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        self.params.require_positive_eta()


def load_config(path) -> RunConfig:
    with open(path) as fh:
        return RunConfig.from_dict(json.load(fh))


# --- JSON ----------------------------------------------------------------------

def _clean(obj):
    """Make an object strict-JSON friendly (NaN/inf -> None, numpy -> python)."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def write_json(path, obj):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(_clean(obj), fh, indent=1, allow_nan=False)
        fh.write("\n")


def save_profile(path, theta: ProfileSet, meta: dict | None = None):
    """Write the profile file (JSON; floats in shortest round-trip form)."""
    doc = {
        "format_version": FORMAT_VERSION,
        "tool_version": __version__,
        "params": theta.params.to_dict(),
        "grid": {"L": theta.grid.half_width, "M": theta.grid.size},
        "phi": [row.tolist() for row in theta.phi],
        "psi": theta.psi.tolist(),
        "meta": meta or {},
    }
    write_json(path, doc)


def load_profile(path) -> tuple[ProfileSet, dict]:
    with open(path) as fh:
        doc = json.load(fh)
    try:
        if doc.get("format_version") != FORMAT_VERSION:
            raise ConfigError(f"unsupported profile format_version {doc.get('format_version')!r}")
        params = ModelParams.from_dict(doc["params"])
        grid = SpectralGrid(float(doc["grid"]["L"]), int(doc["grid"]["M"]))
        theta = ProfileSet(np.array(doc["phi"], dtype=float), np.array(doc["psi"], dtype=float),
                           params, grid)
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed profile file: {exc}") from None
    except ParameterError:
        raise
    return theta, doc.get("meta", {})


# --- CSV -----------------------------------------------------------------------

def write_csv(path, header: list[str], rows):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])


def read_csv_columns(path) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise ConfigError(f"{path} is empty") from None
        rows = [r for r in reader if r]
    try:
        data = np.array(rows, dtype=float).reshape(len(rows), len(header))
    except ValueError as exc:
        raise ConfigError(f"{path}: non-numeric or ragged CSV ({exc})") from None
    return {name: data[:, i] for i, name in enumerate(header)}
