"""Smoke tests for the python module against the known combinatorial anchors."""

import math
import os
import sys

module_dir = os.environ.get("WICKLAB_MODULE_DIR")
if module_dir:
    sys.path.insert(0, module_dir)

import _wicklab as wl  # noqa: E402


def test_counts():
    assert [wl.tree_count(n) for n in range(6)] == [1, 1, 3, 12, 55, 273]
    assert wl.couple_count(2) == 108
    assert wl.regular_couple_count(3) == 96
    assert len(wl.enumerate_trees(3)) == 12
    assert len(wl.enumerate_couples(1)) == 2
    assert len(wl.enumerate_couples(2, regular=True)) == 12


def test_couple_predicates():
    couples = wl.enumerate_couples(2)
    regs = set(wl.enumerate_couples(2, regular=True))
    for c in couples:
        assert wl.is_regular(c) == (c in regs)
        assert (wl.regular_index(c) == 0) == (c in regs)
    for c in regs:
        assert wl.polarity(c) == 1.0 + 0.0j


def test_resonance_and_theta():
    assert wl.resonance_factor([1, 0, 0], [0, 1, 0], [0, 0, 1]) == 1.0
    # single node at zero frequency: Theta = t
    v = wl.theta([-1], [0.0], 0.7)
    assert abs(v - 0.7) < 1e-14
    # chain of two: t^2/2
    v = wl.theta([-1, 0], [0.0, 0.0], 1.0)
    assert abs(v - 0.5) < 1e-13
    assert wl.linear_extension_count([-1, -1, -1]) == 6
    assert wl.decay_bound([-1], [0.0], 2.0) == 2.0


def test_gauss_sum():
    assert abs(wl.gauss_sum(0.0, 0.0, 0, 9) - 10.0) < 1e-12
    m = wl.gauss_sum_moment(4, 1, resolution=64)
    assert abs(m - 6.0) < 1e-5


def test_spectra_and_counting():
    couples = wl.enumerate_couples(1)
    v = wl.finite_L_spectrum(couples[0], 0.0, [0, 0, 0], 2.0)
    assert abs(v) < 1e-14  # vanishes at t = 0
    cnt = wl.count_quasi_resonant(couples[0], [0], 1.0, d=1, radius=1.0, q=1.0, gamma=0.0)
    assert cnt == 7
    lim = wl.kinetic_limit_spectrum(couples[0], 0.5, [0.0, 0.0, 0.0])
    assert lim > 0


def test_wigner():
    # pure Gaussian: 2^{d/2} psi^2 at the phase-space origin
    w = wl.wigner([0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0], amplitude=1.0)
    assert abs(w - 2.0 ** 1.5) < 1e-12


def test_solver_runs():
    t, data = wl.solve_wk(T=0.1, dt=0.05, mk=5)
    assert abs(t - 0.1) < 1e-12
    assert len(data) == 125
    assert all(math.isfinite(x) for x in data)


def test_mc_crosscheck():
    rep = wl.wick_crosscheck(0, 0, 1.0, [2, 0, 0], [2, 0, 0], L=2.0, radius=1.0, nsamples=500)
    assert rep["z"] <= 4.0


def test_config_hash_stable():
    text = wl.default_config_json()
    assert wl.config_hash(text) == wl.config_hash(text)
