"""Numerical certification of the qualitative properties of computed profiles.

Every check returns plain dicts that carry the measured number, the threshold
it was judged against, and a boolean ``pass``.  :func:`verify_profile` bundles
them into a :class:`PropertyReport`.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .grid import SpectralGrid
from .model import (
    ProfileSet,
    center_profile,
    multiplier_estimate,
    multiplier_identity,
    ode_residual,
)


@dataclass
class Thresholds:
    psi_floor: float = 1e-12        # relative underflow floor for strict positivity of Psi
    one_sign: float = 1e-10         # relative slack for the one-sign test of Phi_j
    evenness: float = 1e-6
    monotonicity: float = 1e-8
    edge_points: int = 5            # monotonicity window stops this many points before L
    decay_rel: float = 0.02
    decay_floor: float = 1e-11      # samples below this fraction of the peak are not fitted
    fourier_imag: float = 1e-10
    fourier_floor: float = 1e-12
    residual: float = 1e-6


def _oriented(f: np.ndarray) -> np.ndarray:
    """Multiply by the sign at the point of largest magnitude."""
    i = int(np.argmax(np.abs(f)))
    return f if f[i] >= 0 else -f


def _names(theta: ProfileSet) -> list[str]:
    return [f"Phi_{j + 1}" for j in range(theta.params.N)] + ["Psi"]


# --- sign ----------------------------------------------------------------------

def check_sign(theta: ProfileSet, th: Thresholds | None = None) -> dict:
    """Psi strictly positive above the underflow floor; each Phi_j of one sign."""
    th = th or Thresholds()
    psi = theta.psi
    scale = float(np.max(np.abs(psi)))
    floor = th.psi_floor * scale
    psi_ok = scale > 0 and float(psi.min()) > -floor and float(psi.max()) > 0
    psi_res = {
        "min": float(psi.min()), "max": float(psi.max()), "floor": floor,
        "points_below_floor": int(np.count_nonzero(psi <= floor)),
        "min_above_floor": float(psi[psi > floor].min()) if np.any(psi > floor) else 0.0,
        "threshold": f"min > -{th.psi_floor:g}*max|Psi|", "pass": bool(psi_ok),
    }
    phis = []
    for j, f in enumerate(theta.phi):
        amax = float(np.max(np.abs(f)))
        sign = 1.0 if f[int(np.argmax(np.abs(f)))] >= 0 else -1.0
        signed_min = float(np.min(sign * f))
        ok = amax > 0 and signed_min > -th.one_sign * amax
        corr = 0.0
        if amax > 0:
            u = f / amax  # normalize first; far-from-dominant components underflow otherwise
            corr = float(np.dot(np.abs(u), u) / np.dot(u, u))
        phis.append({"component": f"Phi_{j + 1}", "sign": int(sign), "signed_min": signed_min,
                     "max_abs": amax, "threshold": th.one_sign, "abs_correlation": corr,
                     "negligible": bool(amax <= th.psi_floor * scale), "pass": bool(ok)})
    return {"psi": psi_res, "phi": phis, "pass": bool(psi_ok and all(p["pass"] for p in phis))}


# --- symmetry / monotonicity ------------------------------------------------------

def mirror(grid: SpectralGrid, f: np.ndarray) -> np.ndarray:
    """``f(-x)`` on the grid (index i -> (M - i) mod M)."""
    idx = (grid.size - np.arange(grid.size)) % grid.size
    return f[..., idx]


def check_symmetry_monotonicity(theta: ProfileSet, th: Thresholds | None = None,
                                center: bool = True) -> dict:
    th = th or Thresholds()
    if center:
        theta = center_profile(theta)
    g = theta.grid
    stop = g.size - th.edge_points  # last index with x <= L - edge_points*h
    out = []
    for name, f in zip(_names(theta), theta.components):
        f = _oriented(f)
        amax = float(np.max(np.abs(f)))
        if amax == 0:
            out.append({"component": name, "asymmetry": 0.0, "uphill": 0.0, "trivial": True,
                        "pass_even": True, "pass_monotone": True})
            continue
        asym = float(np.max(np.abs(f - mirror(g, f)))) / amax
        seg = f[g.mid:stop + 1]
        uphill = float(max(np.max(np.diff(seg)), 0.0)) / amax
        out.append({"component": name, "asymmetry": asym, "uphill": uphill,
                    "pass_even": asym <= th.evenness, "pass_monotone": uphill <= th.monotonicity})
    return {"components": out, "evenness_threshold": th.evenness,
            "monotonicity_threshold": th.monotonicity,
            "max_asymmetry": max(c["asymmetry"] for c in out),
            "max_uphill": max(c["uphill"] for c in out),
            "pass": all(c["pass_even"] and c["pass_monotone"] for c in out)}


# --- decay ---------------------------------------------------------------------

def fit_decay_rate(grid: SpectralGrid, f: np.ndarray, window: tuple[float, float] | None = None,
                   floor: float = 1e-11) -> float:
    """Least-squares slope of ``log f`` against x on a window of the positive half-line.

    The window defaults to ``[L/2, 3L/4]``.  It is cut back at the first sample
    that is nonpositive or below ``floor * max|f|`` (rounding noise); fewer
    than four usable samples is an error.
    """
    f = np.asarray(f, dtype=float)
    lo, hi = window if window is not None else (grid.half_width / 2, 3 * grid.half_width / 4)
    sel = np.nonzero((grid.x >= lo) & (grid.x <= hi))[0]
    cutoff = floor * np.max(np.abs(f))
    bad = np.nonzero(f[sel] <= cutoff)[0]
    if bad.size:
        sel = sel[: bad[0]]
    if sel.size < 4:
        raise ValueError(f"not enough positive samples to fit a decay rate on [{lo:g}, {hi:g}]")
    slope, _ = np.polyfit(grid.x[sel], np.log(f[sel]), 1)
    return float(slope)


def decay_targets(theta: ProfileSet) -> list[float]:
    """Expected rates: sqrt(sigma) for each Phi_j, min(sqrt(eta), 2 sqrt(sigma)) for Psi."""
    p = theta.params
    rs = math.sqrt(p.sigma)
    return [rs] * p.N + [min(math.sqrt(p.eta), 2 * rs)]


def check_decay(theta: ProfileSet, th: Thresholds | None = None, window=None) -> dict:
    th = th or Thresholds()
    out = []
    for name, f, target in zip(_names(theta), theta.components, decay_targets(theta)):
        try:
            slope = fit_decay_rate(theta.grid, _oriented(f), window, th.decay_floor)
        except ValueError as exc:
            out.append({"component": name, "slope": None, "target": -target, "error": str(exc),
                        "pass": False})
            continue
        rel = abs(-slope - target) / target
        out.append({"component": name, "slope": slope, "target": -target, "rel_error": rel,
                    "threshold": th.decay_rel, "pass": rel <= th.decay_rel})
    return {"components": out, "pass": all(c["pass"] for c in out)}


# --- Fourier positivity ------------------------------------------------------------

def centered_transform(grid: SpectralGrid, f: np.ndarray) -> np.ndarray:
    """``h * sum f(x_i) exp(-i xi x_i)`` for ``xi >= 0`` (origin at the grid midpoint)."""
    return grid.spacing * np.fft.rfft(np.fft.ifftshift(f))


def check_fourier_positivity(theta: ProfileSet, th: Thresholds | None = None) -> dict:
    """Transforms real, positive and non-increasing in |xi| above the noise floor."""
    th = th or Thresholds()
    out = []
    for name, f in zip(_names(theta), theta.components):
        f = _oriented(f)
        fh = centered_transform(theta.grid, f)
        scale = float(np.max(np.abs(fh)))
        if scale == 0:
            out.append({"component": name, "trivial": True, "pass": True})
            continue
        imag = float(np.max(np.abs(fh.imag))) / scale
        floor = th.fourier_floor * scale
        re = fh.real
        live = np.abs(fh) > floor
        min_live = float(re[live].min()) / scale
        both = live[:-1] & live[1:]
        rises = np.diff(re)[both]
        rise = float(max(rises.max(), 0.0)) / scale if rises.size else 0.0
        ok_imag = imag <= th.fourier_imag
        ok_pos = min_live > 0
        ok_mono = rise <= th.fourier_floor
        out.append({"component": name, "max_imag": imag, "min_real_above_floor": min_live,
                    "max_rise": rise, "modes_above_floor": int(np.count_nonzero(live)),
                    "imag_threshold": th.fourier_imag, "floor": th.fourier_floor,
                    "pass_real": ok_imag, "pass_positive": ok_pos, "pass_monotone": ok_mono,
                    "pass": ok_imag and ok_pos and ok_mono})
    trivial = all(c.get("trivial", False) for c in out)
    return {"components": out, "trivial": trivial, "pass": all(c["pass"] for c in out)}


# --- report --------------------------------------------------------------------

@dataclass
class PropertyReport:
    positivity: dict
    symmetry: dict
    decay: dict
    fourier_positivity: dict
    multiplier: dict
    residual: dict
    thresholds: dict = field(default_factory=dict)
    version: str = __version__

    @property
    def all_pass(self) -> bool:
        return all(part["pass"] for part in (self.positivity, self.symmetry, self.decay,
                                             self.fourier_positivity, self.multiplier,
                                             self.residual))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["all_pass"] = self.all_pass
        return d


def verify_profile(theta: ProfileSet, th: Thresholds | None = None) -> PropertyReport:
    """Center ``theta`` and run every check."""
    th = th or Thresholds()
    res = ode_residual(theta, 1.0)
    theta = center_profile(theta)
    if theta.is_zero():
        kappa = ident = float("nan")
        mult = {"kappa_hat": kappa, "two_K_over_3F": ident, "pass": False, "trivial": True}
    else:
        kappa = multiplier_estimate(theta)
        ident = multiplier_identity(theta)
        mult = {"kappa_hat": kappa, "two_K_over_3F": ident, "abs_difference": abs(kappa - ident),
                "pass": kappa > 0}
    return PropertyReport(
        positivity=check_sign(theta, th),
        symmetry=check_symmetry_monotonicity(theta, th, center=False),
        decay=check_decay(theta, th),
        fourier_positivity=check_fourier_positivity(theta, th),
        multiplier=mult,
        residual={"value": res, "threshold": th.residual, "pass": res <= th.residual},
        thresholds=asdict(th),
    )
