"""Model parameters, profile containers and the functionals of the profile problem.

The profile system solved throughout the package is::

    -Phi_j'' + sigma Phi_j          = kappa alpha_j Psi Phi_j            (j = 1..N)
    -gamma Psi'' + c_tau Psi        = kappa/2 (beta Psi^2 + sum_j alpha_j Phi_j^2)

with ``sigma = omega - c^2/4`` and ``c_tau = c - tau``; ``kappa = 1`` is the
solitary-wave normalization.  Writing ``L`` for the diagonal operator
``diag(sigma - d_xx, ..., c_tau - gamma d_xx)`` and ``Nl`` for the right-hand
side at ``kappa = 1``, a solitary wave is a nonzero solution of ``L Theta = Nl(Theta)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .errors import ParameterError
from .grid import SpectralGrid


@dataclass(frozen=True)
class ModelParams:
    alpha: tuple[float, ...]
    beta: float
    gamma: float
    tau: float
    c: float
    omega: float

    def __post_init__(self):
        alpha = tuple(float(a) for a in np.atleast_1d(self.alpha))
        object.__setattr__(self, "alpha", alpha)
        for name in ("beta", "gamma", "tau", "c", "omega"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ParameterError(f"{name} finite", f"{name} = {value}")
            object.__setattr__(self, name, value)
        if not alpha:
            raise ParameterError("N >= 1", "alpha is empty")
        if not all(math.isfinite(a) for a in alpha):
            raise ParameterError("alpha_j finite", f"alpha = {alpha}")
        if self.c <= 0:
            raise ParameterError("c > 0", f"c = {self.c}")
        if self.sigma <= 0:
            raise ParameterError(
                "sigma > 0", f"sigma = omega - c^2/4 = {self.omega} - {self.c}^2/4 = {self.sigma}")
        if self.tau > self.c:
            raise ParameterError("tau <= c", f"tau = {self.tau}, c = {self.c}")
        if self.beta < 0:
            raise ParameterError("beta >= 0", f"beta = {self.beta}")
        if self.gamma <= 0:
            raise ParameterError("gamma > 0", f"gamma = {self.gamma}")
        bad = [j + 1 for j, a in enumerate(alpha) if a <= 0]
        if bad:
            raise ParameterError("alpha_j > 0", f"alpha_{bad[0]} = {alpha[bad[0] - 1]}")

    @property
    def N(self) -> int:
        return len(self.alpha)

    @property
    def sigma(self) -> float:
        return self.omega - self.c**2 / 4

    @property
    def c_tau(self) -> float:
        return self.c - self.tau

    @property
    def eta(self) -> float:
        return self.c_tau / self.gamma

    @property
    def beta_j(self) -> tuple[float, ...]:
        """Coupling coefficients of the long-wave forcing, ``alpha_j / 2``."""
        return tuple(a / 2 for a in self.alpha)

    def require_positive_eta(self):
        """The convolution form of the profile system needs ``tau < c``."""
        if self.c_tau <= 0:
            raise ParameterError("tau < c (eta > 0)", f"tau = {self.tau}, c = {self.c}")

    def with_(self, **changes) -> "ModelParams":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return {"alpha": list(self.alpha), "beta": self.beta, "gamma": self.gamma,
                "tau": self.tau, "c": self.c, "omega": self.omega}

    @classmethod
    def from_dict(cls, d: dict) -> "ModelParams":
        d = dict(d)
        n = d.pop("N", None)
        unknown = set(d) - {"alpha", "beta", "gamma", "tau", "c", "omega"}
        if unknown:
            raise ParameterError("known parameter names", f"unknown keys {sorted(unknown)}")
        missing = {"alpha", "beta", "gamma", "tau", "c", "omega"} - set(d)
        if missing:
            raise ParameterError("complete parameter set", f"missing {sorted(missing)}")
        alpha = d["alpha"]
        if np.isscalar(alpha):
            alpha = [alpha] * int(n or 1)
        if n is not None and len(alpha) != int(n):
            raise ParameterError("N == len(alpha)", f"N = {n}, len(alpha) = {len(alpha)}")
        return cls(alpha=tuple(alpha), beta=d["beta"], gamma=d["gamma"], tau=d["tau"],
                   c=d["c"], omega=d["omega"])


@dataclass
class ProfileSet:
    """Tuple ``(Phi_1, ..., Phi_N, Psi)`` sampled on a grid."""

    phi: np.ndarray
    psi: np.ndarray
    params: ModelParams
    grid: SpectralGrid

    def __post_init__(self):
        self.phi = np.array(self.phi, dtype=float, ndmin=2)
        self.psi = np.array(self.psi, dtype=float)
        m = self.grid.size
        if self.phi.shape != (self.params.N, m):
            raise ValueError(f"phi has shape {self.phi.shape}, expected {(self.params.N, m)}")
        if self.psi.shape != (m,):
            raise ValueError(f"psi has shape {self.psi.shape}, expected {(m,)}")
        if not (np.all(np.isfinite(self.phi)) and np.all(np.isfinite(self.psi))):
            raise ValueError("profile contains non-finite values")

    @property
    def components(self) -> np.ndarray:
        """All N+1 components stacked into an ``(N+1, M)`` array."""
        return np.vstack([self.phi, self.psi[None, :]])

    def with_components(self, comps: np.ndarray) -> "ProfileSet":
        return ProfileSet(comps[:-1], comps[-1], self.params, self.grid)

    def scaled(self, t: float) -> "ProfileSet":
        return ProfileSet(t * self.phi, t * self.psi, self.params, self.grid)

    def shifted(self, d: float) -> "ProfileSet":
        return self.with_components(self.grid.shift(self.components, d))

    def norm(self) -> float:
        """Grid L^2 norm of the whole tuple."""
        return math.sqrt(self.grid.integrate(np.sum(self.components**2)))

    def is_zero(self, atol: float = 0.0) -> bool:
        return bool(np.max(np.abs(self.components)) <= atol)

    def copy(self) -> "ProfileSet":
        return ProfileSet(self.phi.copy(), self.psi.copy(), self.params, self.grid)


@dataclass
class SolveReport:
    solver: str
    iterations: int
    final_residual: float
    converged: bool
    K_value: float = float("nan")
    F_integral: float = float("nan")
    lambda_value: float = float("nan")
    Lambda_value: float = float("nan")
    final_stabilizer: float | None = None
    gradient_norm: float | None = None
    profile_residual: float | None = None
    tol: float | None = None
    history: list = field(default_factory=list, repr=False)

    def to_dict(self, with_history: bool = False) -> dict:
        d = {k: v for k, v in self.__dict__.items() if k != "history"}
        if with_history:
            d["history"] = list(self.history)
        return d


# --- operators -----------------------------------------------------------------

def _symbols(params: ModelParams, grid: SpectralGrid) -> np.ndarray:
    """Fourier symbols of L, one row per component."""
    xi2 = grid.xi**2
    rows = [params.sigma + xi2] * params.N + [params.c_tau + params.gamma * xi2]
    return np.vstack(rows)


def apply_L(theta: ProfileSet) -> ProfileSet:
    sym = _symbols(theta.params, theta.grid)
    out = np.fft.ifft(np.fft.fft(theta.components, axis=-1) * sym, axis=-1).real
    return theta.with_components(out)


def apply_L_inverse(theta: ProfileSet) -> ProfileSet:
    p, g = theta.params, theta.grid
    p.require_positive_eta()
    out = np.empty_like(theta.components)
    out[:-1] = g.helmholtz_inverse(theta.phi, p.sigma)
    out[-1] = g.helmholtz_inverse(theta.psi, p.eta, mass=p.gamma)
    return theta.with_components(out)


def apply_Nl(theta: ProfileSet) -> ProfileSet:
    p = theta.params
    alpha = np.asarray(p.alpha)[:, None]
    phi_part = alpha * theta.phi * theta.psi
    psi_part = 0.5 * (p.beta * theta.psi**2 + np.sum(alpha * theta.phi**2, axis=0))
    return ProfileSet(phi_part, psi_part, p, theta.grid)


def inner(a: ProfileSet, b: ProfileSet) -> float:
    """Grid L^2 inner product summed over components."""
    return float(a.grid.integrate(np.sum(a.components * b.components)))


# --- functionals ---------------------------------------------------------------

def functional_K(theta: ProfileSet) -> float:
    """Quadratic form ``sum_j int (Phi_j'^2 + sigma Phi_j^2) + int (gamma Psi'^2 + c_tau Psi^2)``.

    Evaluated in Fourier space, so ``K(Theta) == <L Theta, Theta>`` holds to rounding.
    """
    g = theta.grid
    fhat = np.fft.fft(theta.components, axis=-1)
    weights = _symbols(theta.params, g)
    return float(g.spacing / g.size * np.sum(weights * np.abs(fhat) ** 2))


def functional_F_integral(theta: ProfileSet) -> float:
    """``int (beta/3) Psi^3 + (sum_j alpha_j Phi_j^2) Psi dx``."""
    p = theta.params
    alpha = np.asarray(p.alpha)[:, None]
    dens = p.beta / 3 * theta.psi**3 + np.sum(alpha * theta.phi**2, axis=0) * theta.psi
    return float(theta.grid.integrate(dens))


def weinstein_Lambda(theta: ProfileSet) -> float:
    """Scale-invariant quotient ``K / (int F)^(2/3)``; needs ``int F > 0``."""
    F = functional_F_integral(theta)
    if not F > 0:
        raise ValueError(
            f"Weinstein quotient undefined: int F = {F:.6g} is not positive "
            f"(min Psi = {theta.psi.min():.3g}, max Psi = {theta.psi.max():.3g})")
    return functional_K(theta) / F ** (2.0 / 3.0)


def ode_residual(theta: ProfileSet, kappa: float = 1.0) -> float:
    """Residual of ``L Theta - kappa Nl(Theta)``, normalized by ``max(1, ||Theta||)``."""
    r = apply_L(theta).components - kappa * apply_Nl(theta).components
    rss = math.sqrt(theta.grid.integrate(np.sum(r**2)))
    return rss / max(1.0, theta.norm())


def multiplier_estimate(theta: ProfileSet) -> float:
    """Least-squares ``kappa`` minimizing ``ode_residual(theta, kappa)``."""
    b = apply_Nl(theta)
    bb = inner(b, b)
    if theta.is_zero() or bb == 0:
        raise ValueError("multiplier undefined for the zero profile")
    return inner(apply_L(theta), b) / bb


def multiplier_identity(theta: ProfileSet) -> float:
    """``2K / (3 int F)``; equals the multiplier at any solution of the kappa-system."""
    return 2 * functional_K(theta) / (3 * functional_F_integral(theta))


# --- helpers -------------------------------------------------------------------

def zero_profile(params: ModelParams, grid: SpectralGrid) -> ProfileSet:
    return ProfileSet(np.zeros((params.N, grid.size)), np.zeros(grid.size), params, grid)


def gaussian_profile(params: ModelParams, grid: SpectralGrid, amplitude: float = 1.0,
                     width: float = 2.0) -> ProfileSet:
    bump = amplitude * np.exp(-((grid.x / width) ** 2))
    return ProfileSet(np.tile(bump, (params.N, 1)), bump.copy(), params, grid)


def reference_params(n: int = 1) -> ModelParams:
    """Parameters with a closed-form ground state: sigma = c_tau = eta = 1."""
    return ModelParams(alpha=(2.0,) * n, beta=1.0, gamma=1.0, tau=0.0, c=1.0, omega=1.25)


def sech2_profile(grid: SpectralGrid, n: int = 1, center: float = 0.0) -> ProfileSet:
    """Exact solution for :func:`reference_params`.

    ``Phi_j = sqrt(27/32)/sqrt(n) sech^2(x/2)``, ``Psi = 3/4 sech^2(x/2)``.
    """
    s = 1.0 / np.cosh((grid.x - center) / 2) ** 2
    phi = np.tile(math.sqrt(27 / 32 / n) * s, (n, 1))
    return ProfileSet(phi, 0.75 * s, reference_params(n), grid)


def peak_location(grid: SpectralGrid, f: np.ndarray, newton_steps: int = 20) -> float:
    """Sub-grid location of the maximum of ``f`` via Newton on its interpolant."""
    i = int(np.argmax(f))
    x0 = grid.x[i]
    for _ in range(newton_steps):
        d1 = grid.evaluate(f, x0, order=1)[0]
        d2 = grid.evaluate(f, x0, order=2)[0]
        if d2 >= 0:
            break
        step = d1 / d2
        if abs(step) > grid.spacing:
            step = math.copysign(grid.spacing, step)
        x0 -= step
        if abs(step) < 1e-15 * max(1.0, grid.half_width):
            break
    return float(x0)


def center_profile(theta: ProfileSet) -> ProfileSet:
    """Translate so the maximum of Psi sits at x = 0."""
    x_peak = peak_location(theta.grid, theta.psi)
    if x_peak == 0.0:
        return theta.copy()
    return theta.shifted(-x_peak)


__all__: Sequence[str] = [
    "ModelParams", "ProfileSet", "SolveReport", "apply_L", "apply_L_inverse", "apply_Nl",
    "inner", "functional_K", "functional_F_integral", "weinstein_Lambda", "ode_residual",
    "multiplier_estimate", "multiplier_identity", "zero_profile", "gaussian_profile",
    "reference_params", "sech2_profile", "peak_location", "center_profile",
]
