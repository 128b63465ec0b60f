"""Ground states by direct minimization of the Weinstein quotient.

``Lambda = K / (int F)^(2/3)`` is invariant under ``Theta -> t Theta``, so its
minimizers are only defined up to scale.  :func:`rescale_to_solution` picks the
scale that solves the profile system, and :func:`compute_I` the one that meets
the constraint ``int F = lambda`` of the constrained problem.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import SolverError
from .fixed_point import ensure_positive_constraint, initial_profile
from .grid import SpectralGrid
from .model import (
    ModelParams,
    ProfileSet,
    SolveReport,
    apply_L,
    apply_L_inverse,
    apply_Nl,
    center_profile,
    functional_F_integral,
    functional_K,
    inner,
    multiplier_estimate,
    ode_residual,
    weinstein_Lambda,
)

log = logging.getLogger(__name__)

# slack for Armijo tests once the predicted decrease drops below rounding
_ROUNDOFF = 8 * np.finfo(float).eps


@dataclass
class VariationalConfig:
    tol: float = 1e-9
    max_iter: int = 5000
    shrink: float = 0.5
    armijo: float = 1e-4
    max_backtracks: int = 40
    init: ProfileSet | None = None
    gaussian_amplitude: float = 1.0
    gaussian_width: float = 2.0
    init_noise: float = 0.0
    seed: int | None = None

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not 0 < self.shrink < 1:
            raise ValueError("shrink must lie in (0, 1)")


def _normalize(theta: ProfileSet) -> ProfileSet:
    return theta.scaled(1.0 / math.sqrt(functional_K(theta)))


def _search_direction(theta: ProfileSet) -> tuple[ProfileSet, float]:
    """Preconditioned descent direction and its L-norm.

    The Frechet derivative of Lambda is ``2 F^(-2/3) (L Theta - mu Nl(Theta))``
    with ``mu = 2K / (3F)``.  Preconditioning by ``L^{-1}`` and dropping the
    positive prefactor gives ``p = Theta - mu L^{-1} Nl(Theta)``; the unit step
    ``Theta - p`` is then a plain fixed-point update.
    """
    K = functional_K(theta)
    F = functional_F_integral(theta)
    mu = 2 * K / (3 * F)
    target = apply_L_inverse(apply_Nl(theta)).scaled(mu)
    p = theta.with_components(theta.components - target.components)
    pnorm = math.sqrt(max(inner(apply_L(p), p), 0.0))
    return p, pnorm


def weinstein_minimize(params: ModelParams, grid: SpectralGrid,
                       cfg: VariationalConfig | None = None) -> tuple[ProfileSet, SolveReport]:
    """Minimize Lambda by L^{-1}-preconditioned gradient descent with backtracking.

    Iterates are kept on ``K = 1``.  Convergence is declared when the
    preconditioned gradient ``||p||_L / sqrt(K)`` drops below ``cfg.tol``.  The
    returned minimizer is normalized to ``K = 1`` and centered; use
    :func:`rescale_to_solution` to turn it into a profile.
    """
    cfg = cfg or VariationalConfig()
    params.require_positive_eta()
    name = "weinstein"
    theta = initial_profile(params, grid, cfg.init, cfg.gaussian_amplitude,
                            cfg.gaussian_width, cfg.init_noise, cfg.seed)
    theta = _normalize(ensure_positive_constraint(theta, name))
    lam = weinstein_Lambda(theta)
    history = [lam]
    p, gnorm = _search_direction(theta)
    step = 1.0
    it = 0
    while gnorm > cfg.tol and it < cfg.max_iter:
        it += 1
        F = functional_F_integral(theta)
        # directional derivative of Lambda along -p (K = 1 on the iterate)
        slope = 2 * F ** (-2.0 / 3.0) * gnorm**2
        s = min(1.0, 2 * step)
        for _ in range(cfg.max_backtracks):
            trial = theta.with_components(theta.components - s * p.components)
            if functional_F_integral(trial) > 0:
                lam_trial = weinstein_Lambda(trial)
                if lam_trial <= lam - cfg.armijo * s * slope + _ROUNDOFF * abs(lam):
                    break
            s *= cfg.shrink
        else:
            report = SolveReport(name, it, gnorm, False, gradient_norm=gnorm,
                                 Lambda_value=lam, tol=cfg.tol, history=history)
            raise SolverError("line-search-stagnation",
                              f"no acceptable step at iteration {it} (gradient {gnorm:.3e})",
                              report)
        step = s
        theta = _normalize(trial)
        lam = weinstein_Lambda(theta)
        history.append(lam)
        p, gnorm = _search_direction(theta)

    K = functional_K(theta)
    F = functional_F_integral(theta)
    converged = gnorm <= cfg.tol
    report = SolveReport(name, it, gnorm, converged, K_value=K, F_integral=F, lambda_value=F,
                         Lambda_value=lam, gradient_norm=gnorm, tol=cfg.tol, history=history)
    if not converged:
        raise SolverError("non-convergence",
                          f"gradient {gnorm:.3e} > tol {cfg.tol:.1e} after {it} iterations",
                          report)
    log.debug("weinstein converged in %d iterations, Lambda = %.12g", it, lam)
    return center_profile(theta), report


def rescale_to_solution(delta: ProfileSet) -> ProfileSet:
    """Scale a Lambda-minimizer into a solution: ``(2/3) Lambda(D) D / (int F(D))^(1/3)``."""
    F = functional_F_integral(delta)
    if not F > 0:
        raise ValueError(f"cannot rescale: int F = {F:.6g} is not positive")
    return delta.scaled(2.0 / 3.0 * weinstein_Lambda(delta) / F ** (1.0 / 3.0))


def scale_to_constraint(delta: ProfileSet, lam: float) -> ProfileSet:
    """Element of the constrained minimizing set: ``int F`` of the result equals ``lam``."""
    if not lam > 0:
        raise ValueError("lambda must be positive")
    F = functional_F_integral(delta)
    if not F > 0:
        raise ValueError(f"cannot rescale: int F = {F:.6g} is not positive")
    return delta.scaled((lam / F) ** (1.0 / 3.0))


def solve_via_weinstein(params: ModelParams, grid: SpectralGrid,
                        cfg: VariationalConfig | None = None) -> tuple[ProfileSet, SolveReport]:
    """:func:`weinstein_minimize` followed by :func:`rescale_to_solution`."""
    delta, report = weinstein_minimize(params, grid, cfg)
    theta = rescale_to_solution(delta)
    report.profile_residual = ode_residual(theta, 1.0)
    report.K_value = functional_K(theta)
    report.F_integral = report.lambda_value = functional_F_integral(theta)
    return theta, report


def compute_I(params: ModelParams, grid: SpectralGrid, lam: float,
              cfg: VariationalConfig | None = None, *, Lambda_min: float | None = None) -> float:
    """Constrained minimum ``I_lambda = lambda^(2/3) * min Lambda``.

    Pass ``Lambda_min`` to reuse an earlier minimization.
    """
    if not lam > 0:
        raise ValueError("lambda must be positive")
    if Lambda_min is None:
        _, report = weinstein_minimize(params, grid, cfg)
        Lambda_min = report.Lambda_value
    return lam ** (2.0 / 3.0) * Lambda_min


@dataclass
class SweepRow:
    lam: float
    I: float
    kappa: float
    Lambda: float

    @property
    def scaled_I(self) -> float:
        return self.I / self.lam ** (2.0 / 3.0)


def i_lambda_sweep(params: ModelParams, grid: SpectralGrid, lambdas,
                   cfg: VariationalConfig | None = None) -> list[SweepRow]:
    """``I_lambda`` and the multiplier over a list of lambdas from one minimization."""
    delta, report = weinstein_minimize(params, grid, cfg)
    rows = []
    for lam in lambdas:
        u = scale_to_constraint(delta, lam)
        rows.append(SweepRow(float(lam), compute_I(params, grid, lam, Lambda_min=report.Lambda_value),
                             multiplier_estimate(u), report.Lambda_value))
    return rows


def sweep_verdicts(rows: list[SweepRow]) -> dict:
    """Positivity, monotonicity, strict m-lambda scaling and strict subadditivity."""
    table = {r.lam: r.I for r in rows}
    lams = sorted(table)
    scaled = np.array([r.scaled_I for r in rows])
    spread = float((scaled.max() - scaled.min()) / abs(scaled.mean())) if rows else 0.0
    positive = all(v > 0 for v in table.values())
    increasing = all(table[a] < table[b] for a, b in zip(lams, lams[1:]))
    Lmin = rows[0].Lambda if rows else float("nan")

    def I(lam):
        return lam ** (2.0 / 3.0) * Lmin

    m_checks = [{"lambda": lam, "m": m, "I_m_lambda": I(m * lam), "m_I_lambda": m * I(lam),
                 "holds": I(m * lam) < m * I(lam)} for lam in lams for m in (1.5, 2.0, 4.0)]
    pairs = [{"lambda1": a, "lambda2": b, "I_sum_lambda": I(a + b), "sum_I": I(a) + I(b),
              "holds": I(a + b) < I(a) + I(b)}
             for i, a in enumerate(lams) for b in lams[i:]]
    return {
        "scaling_spread": spread,
        "positive": positive,
        "strictly_increasing": increasing,
        "strict_m_lambda": all(c["holds"] for c in m_checks),
        "strict_subadditivity": all(c["holds"] for c in pairs),
        "multipliers_positive": all(r.kappa > 0 for r in rows),
        "m_lambda_checks": m_checks,
        "subadditivity_checks": pairs,
    }
