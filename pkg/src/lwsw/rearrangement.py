"""Symmetric decreasing rearrangement of grid data and the classical inequalities it obeys.

Grid convention: for ``M`` samples with midpoint index ``M // 2`` (the point
``x = 0``), the sorted values are laid out at offsets ``0, +1, -1, +2, -2, ...``
from the midpoint.  Distinct values cannot be exactly even on a grid, so the
pairs interleave: ``f*[mid+i] >= f*[mid-i] >= f*[mid+i+1]``.  With ties (level
sets) the result is even up to one unpaired sample.  For even ``M`` the
smallest value lands on index 0.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np


class InequalityCheck(NamedTuple):
    lhs: float
    rhs: float
    holds: bool


def _nonnegative(f) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if f.ndim != 1:
        raise ValueError("expected a one-dimensional field")
    if not np.all(np.isfinite(f)):
        raise ValueError("field contains non-finite values")
    if np.any(f < 0):
        raise ValueError(f"rearrangement needs nonnegative data (min = {f.min():.3g})")
    return f


def placement_order(m: int) -> np.ndarray:
    """Grid indices in the order they receive decreasing values."""
    mid = m // 2
    order = [mid]
    for i in range(1, m):
        order.extend((mid + i, mid - i))
    return np.array([i for i in order if 0 <= i < m][:m])


def rearrange(f) -> np.ndarray:
    """Symmetric decreasing rearrangement of nonnegative samples."""
    f = _nonnegative(f)
    out = np.empty_like(f)
    out[placement_order(f.size)] = np.sort(f)[::-1]
    return out


def distribution(f, a: float) -> int:
    """Number of samples strictly above ``a`` (measure of the level set, in cells)."""
    return int(np.count_nonzero(np.asarray(f) > a))


def hardy_littlewood_check(f, g, spacing: float = 1.0) -> InequalityCheck:
    """``int f g <= int f* g*``."""
    f, g = _nonnegative(f), _nonnegative(g)
    if f.shape != g.shape:
        raise ValueError("fields live on different grids")
    lhs = spacing * float(np.dot(f, g))
    rhs = spacing * float(np.dot(rearrange(f), rearrange(g)))
    return InequalityCheck(lhs, rhs, lhs <= rhs + 1e-12)


def dirichlet_sum(f, spacing: float = 1.0) -> float:
    """``sum ((f_{i+1} - f_i) / h)^2 h`` with periodic wrap-around."""
    d = (np.roll(f, -1) - f) / spacing
    return spacing * float(np.dot(d, d))


def polya_szego_check(f, spacing: float = 1.0) -> InequalityCheck:
    """``||(f*)'||^2 <= ||f'||^2`` for nearest-neighbor differences on the periodic grid.

    The discrete inequality is exact for cyclic forward differences; spectral
    derivatives of rearranged data ring and are not used here.
    """
    f = _nonnegative(f)
    lhs = dirichlet_sum(rearrange(f), spacing)
    rhs = dirichlet_sum(f, spacing)
    return InequalityCheck(lhs, rhs, lhs <= rhs + 1e-12 * max(1.0, rhs))


# --- Riesz ----------------------------------------------------------------------
#
# The rearrangement inequality for three functions does not hold for every
# discrete tie-breaking rule on the integers, so the check works with the
# piecewise-constant interpolants (cell i = [x_i - h/2, x_i + h/2]) for which
# the continuum statement applies verbatim.  Everything lives on half-cells of
# width h/2; the rearranged step function puts the largest value on
# [-h/2, h/2] and every further value on one half-cell on each side.

def _as_half_cells(f) -> tuple[np.ndarray, int]:
    """Half-cell samples of the step interpolant and the index of the half-cell [0, h/2]."""
    m = f.size
    mid = m // 2
    # cell i spans half-cells 2(i - mid) - 1 and 2(i - mid)
    return np.repeat(f, 2), 2 * mid + 1


def _rearranged_half_cells(f) -> tuple[np.ndarray, int]:
    m = f.size
    v = np.sort(f)[::-1]
    out = np.empty(2 * m)
    out[m - 1] = out[m] = v[0]
    k = np.arange(1, m)
    out[m - 1 - k] = v[1:]
    out[m + k] = v[1:]
    return out, m


def _triple_convolution_at_zero(fs, gs, ks, delta: float) -> float:
    """``int int F(y) G(z) K(-y-z) dy dz`` for step functions on half-cells of width delta."""
    (F, oF), (G, oG), (K, oK) = fs, gs, ks
    # values of F*G at nodes x = (q - oF - oG + 1) * delta; piecewise linear between
    C = delta * np.convolve(F, G)
    nodes = np.concatenate([[0.0], C, [0.0]])
    m = np.arange(len(C) + 1) - oF - oG  # node m*delta starts cell [m, m+1]
    cell = 0.5 * delta * (nodes[:-1] + nodes[1:])
    kidx = -(m + 1) + oK
    ok = (kidx >= 0) & (kidx < K.size)
    return float(np.dot(cell[ok], K[kidx[ok]]))


def riesz_value(f, g, k, spacing: float = 1.0) -> float:
    """``(f * g * k)(0)`` for the piecewise-constant interpolants."""
    f, g, k = (_nonnegative(a) for a in (f, g, k))
    return _triple_convolution_at_zero(_as_half_cells(f), _as_half_cells(g),
                                       _as_half_cells(k), spacing / 2)


def riesz_check(f, g, k, spacing: float = 1.0) -> InequalityCheck:
    """``(f * g * k)(0) <= (f* * g* * k*)(0)``."""
    f, g, k = (_nonnegative(a) for a in (f, g, k))
    if not f.shape == g.shape == k.shape:
        raise ValueError("fields live on different grids")
    delta = spacing / 2
    lhs = _triple_convolution_at_zero(_as_half_cells(f), _as_half_cells(g), _as_half_cells(k), delta)
    rhs = _triple_convolution_at_zero(_rearranged_half_cells(f), _rearranged_half_cells(g),
                                      _rearranged_half_cells(k), delta)
    return InequalityCheck(lhs, rhs, lhs <= rhs + 1e-10 * rhs)


def lp_norms_preserved(f, ps=(1, 2, 3), spacing: float = 1.0) -> dict:
    """``int |f|^p`` before and after rearrangement, with an exact multiset comparison."""
    f = _nonnegative(f)
    fs = rearrange(f)
    same = bool(np.array_equal(np.sort(f), np.sort(fs)))
    return {"multiset_equal": same,
            "norms": {p: (spacing * float(np.sum(f**p)), spacing * float(np.sum(fs**p))) for p in ps}}
