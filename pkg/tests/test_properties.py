import json

import numpy as np
import pytest

from lwsw.grid import SpectralGrid, green_kernel
from lwsw.model import ProfileSet, reference_params, sech2_profile, zero_profile
from lwsw.properties import (
    Thresholds,
    check_decay,
    check_fourier_positivity,
    check_sign,
    check_symmetry_monotonicity,
    fit_decay_rate,
    verify_profile,
)


def test_exact_family_all_pass(exact):
    report = verify_profile(exact)
    assert report.all_pass
    d = report.to_dict()
    json.dumps(d)
    assert d["version"] and d["thresholds"]["evenness"] == 1e-6


def test_sign_checks(exact):
    res = check_sign(exact)
    assert res["pass"] and res["psi"]["min"] > 0
    assert abs(res["phi"][0]["abs_correlation"] - 1) <= 1e-10
    neg = ProfileSet(-exact.phi, exact.psi, exact.params, exact.grid)
    res = check_sign(neg)
    assert res["pass"] and res["phi"][0]["sign"] == -1
    assert abs(res["phi"][0]["abs_correlation"] + 1) <= 1e-10
    bad = ProfileSet(exact.phi * np.tanh(exact.grid.x)[None], exact.psi, exact.params, exact.grid)
    assert not check_sign(bad)["pass"]


def test_symmetry_of_exact_family(exact):
    res = check_symmetry_monotonicity(exact)
    assert res["pass"] and res["max_asymmetry"] <= 1e-10 and res["max_uphill"] <= 1e-15


def test_shifted_profile_recentered(exact):
    shifted = exact.shifted(0.3)
    assert not check_symmetry_monotonicity(shifted, center=False)["pass"]
    assert check_symmetry_monotonicity(shifted)["pass"]
    assert verify_profile(shifted).all_pass


def test_two_bump_fails_monotonicity(grid, exact):
    x = grid.x
    bumps = np.exp(-x**2) + 0.8 * np.exp(-(x - 5) ** 2) + 0.8 * np.exp(-(x + 5) ** 2)
    theta = ProfileSet(exact.phi, bumps, exact.params, grid)
    comps = check_symmetry_monotonicity(theta)["components"]
    assert comps[0]["pass_monotone"]
    assert comps[1]["pass_even"] and not comps[1]["pass_monotone"]


def test_decay_slopes(exact, grid):
    assert fit_decay_rate(grid, exact.phi[0]) == pytest.approx(-1.0, rel=0.02)
    assert fit_decay_rate(grid, exact.psi) == pytest.approx(-1.0, rel=0.02)
    assert fit_decay_rate(grid, green_kernel(grid.x, 4.0), window=(2.0, 8.0)) == pytest.approx(-2.0, rel=1e-6)
    assert check_decay(exact)["pass"]


def test_decay_fit_needs_positive_samples(grid):
    with pytest.raises(ValueError):
        fit_decay_rate(grid, -np.exp(-grid.x**2))


def test_fourier_positivity(exact, grid):
    assert check_fourier_positivity(exact)["pass"]
    res = check_fourier_positivity(zero_profile(reference_params(), grid))
    assert res["pass"] and res["trivial"]
    off = check_fourier_positivity(exact.shifted(0.3))
    assert not off["pass"]
    assert not off["components"][0]["pass_real"]


def test_zero_profile_report_is_not_all_pass(grid):
    assert not verify_profile(zero_profile(reference_params(), grid)).all_pass


def test_solver_outputs_pass(petviashvili_ref, weinstein_ref):
    from lwsw.variational import rescale_to_solution

    assert verify_profile(petviashvili_ref[0]).all_pass
    assert verify_profile(rescale_to_solution(weinstein_ref[0])).all_pass


def _verdicts(report):
    d = report.to_dict()
    return {k: d[k]["pass"] for k in ("positivity", "symmetry", "decay", "fourier_positivity",
                                      "multiplier", "residual")}


def test_verdicts_independent_of_resolution():
    coarse = verify_profile(sech2_profile(SpectralGrid(40.0, 512)))
    fine = verify_profile(sech2_profile(SpectralGrid(40.0, 2048)))
    assert _verdicts(coarse) == _verdicts(fine)
    assert coarse.all_pass


def test_thresholds_are_configurable(exact):
    strict = Thresholds(decay_rel=1e-12)
    assert not check_decay(exact, strict)["pass"]


def test_unequal_couplings_flag_negligible_component():
    from lwsw.fixed_point import petviashvili_solve
    from lwsw.model import ModelParams

    g = SpectralGrid(40.0, 512)
    p = ModelParams(alpha=(1.0, 3.0), beta=0.5, gamma=2.0, tau=-0.5, c=1.0, omega=0.6)
    res = check_sign(petviashvili_solve(p, g)[0])
    assert res["pass"]
    assert res["phi"][0]["negligible"] and not res["phi"][1]["negligible"]
    assert np.isfinite(res["phi"][0]["abs_correlation"])
