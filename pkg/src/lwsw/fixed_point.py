"""Stabilized fixed-point (Petviashvili) iteration for the profile system.

Each step applies ``L^{-1} Nl`` and rescales by a power of the stabilizing factor
``m = <L Theta, Theta> / <Nl(Theta), Theta> = K / (1.5 int F)``, which is 1 at
any solution.  The rescaling removes the unstable direction along ``Theta``
itself that makes the bare map diverge or collapse to zero.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import SolverError
from .grid import SpectralGrid
from .model import (
    ModelParams,
    ProfileSet,
    SolveReport,
    apply_L_inverse,
    apply_Nl,
    center_profile,
    functional_F_integral,
    functional_K,
    gaussian_profile,
    ode_residual,
    weinstein_Lambda,
)

log = logging.getLogger(__name__)

TRIVIAL_NORM = 1e-12


@dataclass
class FixedPointConfig:
    tol: float = 1e-10
    max_iter: int = 2000
    stabilizer_exponent: float = 2.0
    init: ProfileSet | None = None  # None -> centered Gaussian
    gaussian_amplitude: float = 1.0
    gaussian_width: float = 2.0
    init_noise: float = 0.0
    seed: int | None = None
    center: bool = True

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


def initial_profile(params: ModelParams, grid: SpectralGrid, init: ProfileSet | None,
                    amplitude: float, width: float, noise: float = 0.0,
                    seed: int | None = None) -> ProfileSet:
    """Starting iterate shared by both solvers.

    ``noise`` adds a seeded, smooth relative perturbation to the Gaussian.
    """
    if init is not None:
        if init.params != params or init.grid != grid:
            init = ProfileSet(init.phi, init.psi, params, grid)
        return init.copy()
    theta = gaussian_profile(params, grid, amplitude, width)
    if noise:
        rng = np.random.default_rng(seed)
        envelope = np.exp(-((grid.x / (2 * width)) ** 2))
        pert = rng.standard_normal((params.N + 1, grid.size)) * envelope
        pert = grid.helmholtz_inverse(pert, 1.0)  # smooth it
        pert *= noise * amplitude / np.max(np.abs(pert))
        theta = theta.with_components(theta.components + pert)
    return theta


def ensure_positive_constraint(theta: ProfileSet, solver: str) -> ProfileSet:
    """Flip the sign of Psi once if ``int F <= 0``; fail if that does not help."""
    if theta.norm() < TRIVIAL_NORM:
        raise SolverError("trivial-limit", "initial iterate is (numerically) zero",
                          SolveReport(solver, 0, 0.0, False))
    if functional_F_integral(theta) > 0:
        return theta
    flipped = ProfileSet(theta.phi, -theta.psi, theta.params, theta.grid)
    if functional_F_integral(flipped) > 0:
        log.info("int F <= 0 at initialization; flipped the sign of Psi")
        return flipped
    raise SolverError("nonpositive-constraint",
                      "int F <= 0 at initialization even after flipping Psi",
                      SolveReport(solver, 0, float("nan"), False))


def petviashvili_solve(params: ModelParams, grid: SpectralGrid,
                       cfg: FixedPointConfig | None = None) -> tuple[ProfileSet, SolveReport]:
    """Solve ``L Theta = Nl(Theta)`` from a positive initial guess.

    Returns the (centered) profile and a :class:`SolveReport`.  Raises
    :class:`SolverError` on collapse to zero, nonpositive constraint at the start,
    or non-convergence within ``cfg.max_iter``.
    """
    cfg = cfg or FixedPointConfig()
    params.require_positive_eta()
    name = "petviashvili"
    theta = initial_profile(params, grid, cfg.init, cfg.gaussian_amplitude,
                            cfg.gaussian_width, cfg.init_noise, cfg.seed)
    theta = ensure_positive_constraint(theta, name)

    history = []
    m = float("nan")
    residual = ode_residual(theta, 1.0)
    for it in range(1, cfg.max_iter + 1):
        K = functional_K(theta)
        F = functional_F_integral(theta)
        if theta.norm() < TRIVIAL_NORM or not F > 0:
            raise SolverError("trivial-limit", f"iterate collapsed at iteration {it}",
                              SolveReport(name, it, residual, False, history=history))
        m = K / (1.5 * F)
        update = apply_L_inverse(apply_Nl(theta))
        theta = update.scaled(m**cfg.stabilizer_exponent)
        residual = ode_residual(theta, 1.0)
        history.append(residual)
        if not np.isfinite(residual):
            break
        if residual <= cfg.tol:
            break
    else:
        it = cfg.max_iter

    if theta.norm() < TRIVIAL_NORM:
        raise SolverError("trivial-limit", "iteration converged to the zero profile",
                          SolveReport(name, it, residual, False, history=history))

    converged = bool(np.isfinite(residual) and residual <= cfg.tol)
    # stabilizer at the returned iterate
    K = functional_K(theta)
    F = functional_F_integral(theta)
    report = SolveReport(
        solver=name, iterations=it, final_residual=float(residual), converged=converged,
        K_value=K, F_integral=F, lambda_value=F,
        Lambda_value=weinstein_Lambda(theta) if F > 0 else float("nan"),
        final_stabilizer=K / (1.5 * F) if F else float("nan"), tol=cfg.tol, history=history)
    if not converged:
        raise SolverError("non-convergence",
                          f"residual {residual:.3e} > tol {cfg.tol:.1e} after {it} iterations",
                          report)
    if cfg.center:
        theta = center_profile(theta)
    log.debug("petviashvili converged in %d iterations, residual %.3e", it, residual)
    return theta, report
