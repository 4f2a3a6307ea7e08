"""Quadrature oracle internals: damping ladders, panels, dual routes."""

import math

import numpy as np
import pytest

from weakmellin.errors import DomainError
from weakmellin.oracle import (
    ArchOracleParams,
    _panel_edges,
    _sphere_average,
    _square_bessel,
    oracle_complex_square_mellin,
    oracle_hermitian_mellin,
    oracle_radial_mellin,
    oracle_real_mellin,
    oracle_real_sign_mellin,
)


def test_eps_ladder_ratios_are_near_two():
    # clean linear eps-dependence halves the successive differences
    for res in (
        oracle_real_mellin(1, 0.5, 0.6 + 0.4j),
        oracle_hermitian_mellin(1, 0.3, 1, 0.5 - 0.2j),
        oracle_radial_mellin(1, 0.6, 2, 0.7),
    ):
        assert 1.8 <= res.ratio <= 2.2
        assert len(res.eps_values) == 3
        assert res.err_est < 1e-5 * abs(res.value)


def test_exact_zero_paths():
    assert complex(oracle_real_sign_mellin(1, 0, 0.6)) == 0
    assert complex(oracle_hermitian_mellin(1, 0, 2, 0.6)) == 0
    assert complex(oracle_complex_square_mellin(1, 0, 3, 0.6)) == 0


def test_strip_rejections():
    with pytest.raises(DomainError):
        oracle_real_mellin(1, 0, 0.05)
    with pytest.raises(DomainError):
        oracle_complex_square_mellin(1, 0.2, 0, 0.95)
    with pytest.raises(DomainError):
        oracle_complex_square_mellin(1, 0.2, 2, 0.5)
    with pytest.raises(DomainError):
        oracle_real_mellin(0, 1, 0.5)


def test_panel_edges_respect_the_phase_budget():
    rate = lambda x: 2 * math.pi * x + 1.0
    edges = _panel_edges(1e-120, 1.0, 50.0, rate, 8.0)
    assert edges[0] == 1e-120 and edges[-1] == 50.0
    assert np.all(np.diff(edges) > 0)
    osc = edges[edges >= 1.0]
    widths = np.diff(osc)
    # budget checked against the rate at the left edge of each panel
    assert np.all(widths * (2 * math.pi * osc[:-1] + 1.0) < 8.0 * 1.3)


def test_sphere_average_small_and_large_arguments():
    w = np.array([0.0, 1e-9, 0.5, 2.0, 10.0])
    # two-point sphere: plain cosine
    got = _sphere_average(1, w)
    assert np.allclose(got, np.cos(w), atol=1e-12)
    # three variables: the classical sinc profile
    got3 = _sphere_average(3, w[2:])
    assert np.allclose(got3, np.sin(w[2:]) / w[2:], atol=1e-12)
    # continuity across the series switch
    lo, hi = _sphere_average(4, np.array([9.99e-7, 1.01e-6]))
    assert abs(lo - hi) < 1e-9


def test_square_dual_routes_agree():
    # the Gaussian-parameter route and the damped Bessel route are
    # independent machinery; at b = 0 both apply
    params = ArchOracleParams()
    for a in (1.0 + 0j, 1.5 - 0.8j):
        for s in (0.45 + 0.6j, 0.7):
            schwinger = complex(oracle_complex_square_mellin(a, 0, 0, s))
            bessel = complex(_square_bessel(complex(a), 0, complex(s), params))
            assert abs(schwinger - bessel) < 2e-7 * abs(schwinger)


def test_negative_angular_index_matches_conjugate_symmetry():
    # substituting z -> conj(z) in the integral flips n and conjugates b
    b = 0.35 * complex(math.cos(0.5), math.sin(0.5))
    s = 0.5 + 0.3j
    direct = complex(oracle_hermitian_mellin(1, b, -2, s))
    swapped = complex(oracle_hermitian_mellin(1, b.conjugate(), 2, s))
    assert abs(direct - swapped) < 1e-7 * abs(direct)
