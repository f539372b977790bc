"""Finite-difference eigensolver and algebraic-vs-numerical comparison."""

import math

import numpy as np
import pytest

from sip_effmass import (
    ConfigError,
    FamilyCoeffs,
    FamilyModel,
    GridSpec,
    MuMap,
    NumericalError,
    ParamTriple,
    compare,
    discretize,
    discretize_model,
    lowest_eigenvalues,
    morse_reduced_compare,
    psi0_generic,
    rayleigh_quotient,
    registry_get,
)

PROFILE = registry_get("constant", m0=0.5)
MUMAP = MuMap(PROFILE)


def test_gridspec_validation():
    with pytest.raises(ConfigError):
        GridSpec(1.0, 0.0, 100)
    with pytest.raises(ConfigError):
        GridSpec(0.0, 1.0, 10)
    g = GridSpec(0.0, 1.0, 101)
    assert g.h == pytest.approx(0.01)
    assert g.nodes().size == 101
    assert g.interior().size == 99
    assert g.halved().n_points == 64 or g.halved().n_points == 50  # floor at 64


def test_particle_in_a_box():
    """V = 0, U = 1 on [0, 1]: eigenvalues (n pi)^2."""
    grid = GridSpec(0.0, 1.0, 4001)
    diag, off = discretize(PROFILE, lambda x: np.zeros_like(x), grid)
    res = lowest_eigenvalues(diag, off, 4, grid=grid)
    exact = [(n * math.pi) ** 2 for n in range(1, 5)]
    for e, ex in zip(res.eigenvalues, exact):
        assert abs(e - ex) < 5e-4 * ex
    assert np.all(res.residuals < 1e-8)


def test_oscillator_eigenvalues():
    """V = x^2, U = 1: eigenvalues 2n + 1."""
    def solve(n_points):
        grid = GridSpec(-12.0, 12.0, n_points)
        diag, off = discretize(PROFILE, lambda x: x * x, grid)
        return lowest_eigenvalues(diag, off, 6, grid=grid).eigenvalues

    fine = solve(4001)
    exact = np.array([2 * n + 1.0 for n in range(6)])
    assert np.max(np.abs(fine - exact)) < 2e-4
    # Richardson extrapolation of the O(h^2) stencil removes the leading error
    extrapolated = (4.0 * fine - solve(2001)) / 3.0
    assert np.max(np.abs(extrapolated - exact)) < 1e-8


def test_second_order_convergence():
    """Halving h divides the eigenvalue error by about four."""
    exact = 1.0

    def err(n):
        grid = GridSpec(-12.0, 12.0, n)
        diag, off = discretize(PROFILE, lambda x: x * x, grid)
        return abs(lowest_eigenvalues(diag, off, 1, grid=grid).eigenvalues[0] - exact)

    ratio = err(1001) / err(2001)
    assert 3.5 < ratio < 4.5


def test_eigensolver_matches_dense_reference():
    """Cross-check the bisection result against numpy's dense solver."""
    rng = np.random.default_rng(7)
    n = 300
    diag = rng.uniform(1.0, 5.0, n)
    off = rng.uniform(-1.0, 1.0, n - 1)
    dense = np.zeros((n, n))
    dense[np.arange(n), np.arange(n)] = diag
    dense[np.arange(n - 1), np.arange(1, n)] = off
    dense[np.arange(1, n), np.arange(n - 1)] = off
    ref = np.sort(np.linalg.eigvalsh(dense))[:5]
    res = lowest_eigenvalues(diag, off, 5)
    assert np.max(np.abs(res.eigenvalues - ref)) < 1e-10


def test_lowest_eigenvalues_argument_checks():
    diag = np.ones(100)
    off = np.zeros(99)
    with pytest.raises(ConfigError):
        lowest_eigenvalues(diag, off, 0)
    with pytest.raises(ConfigError):
        lowest_eigenvalues(diag, off, 13)
    with pytest.raises(ConfigError):
        lowest_eigenvalues(np.ones(5), np.zeros(4), 5)


def test_discretize_rejects_pole_on_interior():
    grid = GridSpec(-1.0, 1.0, 201)
    with np.errstate(divide="ignore"), pytest.raises(NumericalError):
        discretize(PROFILE, lambda x: 1.0 / x, grid)  # x = 0 is a node


def test_singular_endpoint_is_allowed():
    """A potential singular exactly at a boundary node must discretize."""
    grid = GridSpec(0.0, 50.0, 2001)
    diag, off = discretize(PROFILE, lambda r: -1.0 / r, grid)
    assert np.all(np.isfinite(diag))


def test_rayleigh_quotient_bounds_ground_energy():
    grid = GridSpec(-12.0, 12.0, 2001)
    diag, off = discretize(PROFILE, lambda x: x * x, grid)
    v = np.exp(-0.5 * grid.interior() ** 2)
    rq = rayleigh_quotient(diag, off, v)
    e0 = lowest_eigenvalues(diag, off, 1, grid=grid).eigenvalues[0]
    assert rq >= e0 - 1e-12
    assert abs(rq - 1.0) < 1e-4


def test_rayleigh_quotient_of_zero_mode():
    """The variational energy of the sampled zero mode sits near 0."""
    model = FamilyModel.morse_reduced(
        a=-1.0, lambda0=1.0, sigma0=-2.5, profile=PROFILE, mumap=MUMAP
    )
    grid = GridSpec(-15.0, 5.0, 4001)
    table = psi0_generic(model, grid.interior())
    diag, off = discretize_model(model, grid)
    rq = rayleigh_quotient(diag, off, table.psi)
    assert abs(rq) < 5e-4


def test_morse_reduced_compare_gaps():
    grid = GridSpec(-15.0, 5.0, 4001)
    report = morse_reduced_compare(-1.0, 2.5, PROFILE, MUMAP, grid, 3)
    assert report["gaps"][0] == 0.0
    assert abs(report["gaps"][1] - 4.0) < 5e-3
    assert abs(report["gaps"][2] - 6.0) < 5e-3
    assert abs(report["ground_energy"]) < 5e-3
    assert report["flags"][:3] == ["match", "match", "match"]
    assert report["bound_flags"][:3] == [True, True, True]


def test_compare_flags_degenerate_tables_as_diagnostic():
    model = FamilyModel(
        family="pt_trig",
        coeffs=FamilyCoeffs(a=1.0, b=0.0, c=1.0),
        params0=ParamTriple(2.0, 0.0, 0.0),
        profile=PROFILE,
        mumap=MUMAP,
    )
    grid = GridSpec(1e-9, math.pi / 2 - 1e-9, 2001)
    report = compare(model, grid, 3)
    assert report["diagnostic_only"] is True
    assert all(f == "diagnostic" for f in report["flags"])


def test_refinement_guard_triggers_on_coarse_grids():
    model = FamilyModel.morse_reduced(
        a=-1.0, lambda0=1.0, sigma0=-2.5, profile=PROFILE, mumap=MUMAP
    )
    grid = GridSpec(-15.0, 5.0, 130)
    with pytest.raises(NumericalError):
        morse_reduced_compare(-1.0, 2.5, PROFILE, MUMAP, grid, 3, tol=1e-8)


def test_morse_reduced_compare_variable_mass():
    profile = registry_get("asinh_mu", m0=0.5, alpha=0.1)
    mumap = MuMap(profile)
    grid = GridSpec(-15.0, 5.0, 4001)
    report = morse_reduced_compare(-1.0, 2.5, profile, mumap, grid, 3)
    assert abs(report["gaps"][1] - 4.0) < 5e-3
    assert abs(report["gaps"][2] - 6.0) < 5e-3
