"""Periodic Fourier grid on [-L, L) and the spectral operators used everywhere else."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class SpectralGrid:
    """Uniform periodic grid ``x_i = -L + i*h`` with ``M`` points.

    Fields are plain numpy arrays living in physical space; every transform
    happens inside the operator methods.
    """

    half_width: float = 40.0
    size: int = 1024
    x: np.ndarray = field(init=False, repr=False, compare=False)
    xi: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not (self.half_width > 0 and np.isfinite(self.half_width)):
            raise ValueError(f"half_width must be positive, got {self.half_width}")
        m = int(self.size)
        if m != self.size or m < 2 or m & (m - 1):
            raise ValueError(f"size must be a power of two >= 2, got {self.size}")
        object.__setattr__(self, "size", m)
        x = -self.half_width + self.spacing * np.arange(m)
        # FFT ordering: 0, 1, ..., M/2-1, -M/2, ..., -1 (times pi/L)
        xi = np.pi / self.half_width * np.fft.fftfreq(m, d=1.0 / m)
        x.flags.writeable = False
        xi.flags.writeable = False
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "xi", xi)

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.size

    h = spacing

    @property
    def mid(self) -> int:
        """Index of the grid point x = 0."""
        return self.size // 2

    @property
    def nyquist(self) -> int:
        return self.size // 2

    def _check(self, f) -> np.ndarray:
        f = np.asarray(f)
        if f.shape[-1] != self.size:
            raise ValueError(f"field length {f.shape[-1]} does not match grid size {self.size}")
        if not np.all(np.isfinite(f)):
            raise ValueError("field contains non-finite values")
        return f

    def _back(self, fhat, like: np.ndarray) -> np.ndarray:
        out = np.fft.ifft(fhat, axis=-1)
        return out.real.copy() if not np.iscomplexobj(like) else out

    def derivative(self, f, order: int = 1) -> np.ndarray:
        """Spectral derivative of the given order along the last axis."""
        f = self._check(f)
        if order < 1 or int(order) != order:
            raise ValueError("order must be a positive integer")
        symbol = (1j * self.xi) ** order
        if order % 2:
            symbol[self.nyquist] = 0.0
        return self._back(np.fft.fft(f, axis=-1) * symbol, f)

    def helmholtz_inverse(self, f, s: float, mass: float = 1.0) -> np.ndarray:
        """Solve ``(mass*s - mass*d_xx) g = f`` exactly in the discrete spectral sense."""
        if not s > 0:
            raise ValueError(f"Helmholtz shift s must be positive, got {s}")
        if not mass > 0:
            raise ValueError(f"mass must be positive, got {mass}")
        f = self._check(f)
        return self._back(np.fft.fft(f, axis=-1) / (mass * (s + self.xi**2)), f)

    def helmholtz(self, f, s: float, mass: float = 1.0) -> np.ndarray:
        """Forward operator ``mass*(s - d_xx) f``."""
        f = self._check(f)
        return self._back(np.fft.fft(f, axis=-1) * (mass * (s + self.xi**2)), f)

    def shift(self, f, d: float) -> np.ndarray:
        """Periodic translation ``f(x) -> f(x - d)`` by an arbitrary real ``d``.

        For real input the Nyquist mode keeps only its real part so the
        result stays real.
        """
        f = self._check(f)
        if d == 0:
            return f.copy()
        return self._back(np.fft.fft(f, axis=-1) * np.exp(-1j * self.xi * d), f)

    fractional_shift = shift

    def integrate(self, f) -> float | np.ndarray:
        """Rectangle rule ``h * sum f(x_i)`` (spectrally accurate for smooth decaying f)."""
        f = np.asarray(f)
        return self.spacing * f.sum(axis=-1)

    quadrature = integrate

    def spectral_energy(self, f) -> float:
        """``int |f|^2`` computed in wavenumber space (discrete Parseval)."""
        fhat = np.fft.fft(self._check(f), axis=-1)
        return self.spacing * np.sum(np.abs(fhat) ** 2, axis=-1) / self.size

    def evaluate(self, f, points, order: int = 0) -> np.ndarray:
        """Trigonometric interpolant of ``f`` (or its derivative) at arbitrary points."""
        f = self._check(f)
        points = np.atleast_1d(np.asarray(points, dtype=float))
        coeff = np.fft.fft(f) / self.size
        xi = self.xi
        # split the Nyquist mode over +/- xi so real data interpolates to real values
        coeff[self.nyquist] /= 2
        coeff = np.append(coeff, coeff[self.nyquist])
        xi = np.append(xi, -xi[self.nyquist])
        basis = np.exp(1j * np.outer(points + self.half_width, xi))
        vals = basis @ (coeff * (1j * xi) ** order)
        return vals if np.iscomplexobj(f) else vals.real


def green_kernel(x, s: float) -> np.ndarray:
    """Free-space Green's function of ``s - d_xx``: ``exp(-sqrt(s)|x|) / (2 sqrt(s))``."""
    if not s > 0:
        raise ValueError("s must be positive")
    rs = np.sqrt(s)
    return np.exp(-rs * np.abs(np.asarray(x, dtype=float))) / (2 * rs)


def symmetric_transform_kernel(x, s: float) -> np.ndarray:
    """Closed form ``sqrt(pi/2) exp(-sqrt(s)|x|) / (2 sqrt(s))``.

    This is the exponential kernel as written with the unitary transform
    convention; it differs from :func:`green_kernel` by a constant factor only,
    so its decay rate is the same ``sqrt(s)``.
    """
    return np.sqrt(np.pi / 2) * green_kernel(x, s)


def impulse_response(grid: SpectralGrid, s: float) -> np.ndarray:
    """``(s - d_xx)^{-1}`` applied to a unit-mass spike at x = 0 (periodized Green's function)."""
    spike = np.zeros(grid.size)
    spike[grid.mid] = 1.0 / grid.spacing
    return grid.helmholtz_inverse(spike, s)
