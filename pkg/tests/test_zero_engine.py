"""Zero engine: companion roots, circle certificates, winding, line scans."""

import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weakmellin.errors import (
    BoundaryZeroError,
    ConvergenceError,
    DomainError,
    UncertifiedError,
)
from weakmellin.padic_core import unit_characters
from weakmellin.padic_zeta import (
    LocalFactor,
    local_factor,
    local_factor_unramified,
    padic_vector_factor,
)
from weakmellin.zero_engine import (
    ZeroReport,
    circle_zeros,
    exp_poly_roots,
    line_zeros,
    unit_circle_certificate,
    winding_count,
)


# ---------------------------------------------------------------------------
# report plumbing


def test_report_rejects_zero_multiplicity():
    with pytest.raises(DomainError):
        ZeroReport(0.5 + 1j, 0, "CompanionRoots", True, 0.0)


def test_report_rejects_unknown_method():
    with pytest.raises(DomainError):
        ZeroReport(0.5 + 1j, 1, "Guessing", False, 0.0)


# ---------------------------------------------------------------------------
# companion roots of finite-place numerators


def _escape_case(p, k):
    # a unit quadratic coefficient with |b| = p^k lands at level k
    return Fraction(1), Fraction(1, p**k)


@pytest.mark.parametrize("p,k", [(3, 1), (3, 2), (5, 1)])
def test_companion_roots_on_unit_circle(p, k):
    a, b = _escape_case(p, k)
    factor = local_factor_unramified(a, b, p)
    assert factor.k == k and factor.delta == 0
    reports = exp_poly_roots(factor)
    assert len(reports) == 2 * k
    for rep in reports:
        assert rep.method == "CompanionRoots"
        assert rep.certified
        assert rep.residual <= 1e-10
        x = p ** (rep.location - factor.n_dim / 2.0)
        assert abs(abs(x) - 1.0) <= 1e-10
        assert 0.0 <= rep.location.imag < 2.0 * math.pi / math.log(p)
    count, _ = unit_circle_certificate(factor)
    assert count == 2 * k


def test_no_zeros_at_trivial_level():
    factor = local_factor_unramified(Fraction(1), Fraction(0), 5)
    assert factor.k == 0 and factor.delta == 0
    assert exp_poly_roots(factor) == []
    assert unit_circle_certificate(factor) == (0, [])


def test_two_adic_base_roots():
    factor = local_factor_unramified(Fraction(1), Fraction(0), 2)
    reports = exp_poly_roots(factor)
    assert len(reports) == 2
    for rep in reports:
        assert rep.certified
        # |2^s| = sqrt(2) on the zero set
        assert abs(abs(2.0 ** complex(rep.location)) - math.sqrt(2)) <= 1e-9


def test_ramified_roots_on_critical_line():
    seen = 0
    for chi in unit_characters(3, 1):
        factor = local_factor(1, Fraction(1, 3), 3, chi=chi)
        if factor.kind != "ramified" or factor.omega == 0:
            continue
        reports = exp_poly_roots(factor)
        assert reports
        seen += len(reports)
        for rep in reports:
            assert rep.certified
            assert abs(rep.location.real - 0.5) <= 1e-10
            assert abs(factor.evaluate(rep.location)) < 1e-10
    assert seen > 0


def test_circle_zeros_match_companion_roots():
    factor = local_factor_unramified(Fraction(1), Fraction(1, 9), 3)
    assert factor.k == 2
    comp = exp_poly_roots(factor)
    circ = circle_zeros(factor)
    assert len(comp) == len(circ)
    for rc, rs in zip(comp, circ):
        assert rs.method == "SignChange"
        assert rs.certified
        assert abs(rc.location - rs.location) <= 1e-8


def test_twist_shifts_reported_zeros():
    plain = local_factor_unramified(Fraction(1), Fraction(1, 3), 3)
    phase = cmath.exp(0.7j)
    twisted = local_factor_unramified(
        Fraction(1), Fraction(1, 3), 3, twist=phase
    )
    period = 2.0 * math.pi / math.log(3)
    plain_ims = sorted(r.location.imag for r in exp_poly_roots(plain))
    twist_ims = sorted(r.location.imag for r in exp_poly_roots(twisted))
    shift = 0.7 / math.log(3)
    expected = sorted((im + shift) % period for im in plain_ims)
    assert np.allclose(twist_ims, expected, atol=1e-9)
    for rep in exp_poly_roots(twisted):
        assert abs(twisted.evaluate(rep.location)) < 1e-9


@pytest.mark.parametrize(
    "p,configs",
    [
        (3, ((1, 0), (1, Fraction(1, 3)))),
        (3, ((3, 0), (3, 0))),
        (5, ((1, 0), (1, Fraction(1, 5)))),
    ],
)
def test_vector_factor_roots_verified_by_winding(p, configs):
    # parity-homogeneous component valuations keep the zeros on Re = n/2
    factor = padic_vector_factor(configs, p)
    reports = exp_poly_roots(factor)
    assert reports, "expected zeros for the two-component factor"
    for rep in reports:
        assert rep.certified
        assert abs(rep.location.real - factor.n_dim / 2.0) <= 1e-10
        assert abs(factor.evaluate(rep.location)) < 1e-8


def test_vector_mixed_parity_root_reported_off_line():
    # the off-line zero must come back uncensored and still certified
    factor = padic_vector_factor(((1, 0), (3, 0)), 3)
    reports = exp_poly_roots(factor)
    assert len(reports) == 1
    rep = reports[0]
    assert rep.certified
    assert abs(rep.location.real - factor.n_dim / 2.0) > 0.05


@settings(max_examples=25, deadline=None)
@given(
    theta=st.floats(0.0, 2.0 * math.pi, allow_nan=False),
    k=st.integers(1, 3),
    delta=st.integers(0, 1),
    p=st.sampled_from([2, 3, 5, 7]),
)
def test_random_scalar_numerators_stay_on_circle(theta, k, delta, p):
    factor = LocalFactor(
        p=p, kind="unramified", k=k, delta=delta,
        gamma=cmath.exp(1j * theta),
    )
    reports = exp_poly_roots(factor)
    assert len(reports) == 2 * k + delta
    count, _ = unit_circle_certificate(factor)
    assert count == 2 * k + delta
    for rep in reports:
        x = p ** (rep.location - 0.5)
        assert abs(abs(x) - 1.0) <= 1e-9


# ---------------------------------------------------------------------------
# winding counts


def test_winding_counts_known_roots():
    roots = [0.3 + 0.4j, 0.7 + 0.6j, 0.5 + 0.5j]

    def fn(z):
        out = 1.0 + 0.0j
        for r in roots:
            out *= z - r
        return out

    assert winding_count(fn, (0.0, 1.0, 0.0, 1.0)) == 3
    assert winding_count(fn, (0.0, 0.5 - 0.01, 0.0, 1.0)) == 1


def test_winding_adds_back_listed_poles():
    def fn(z):
        return (z - 0.4 - 0.5j) / (z - 0.6 - 0.5j)

    count = winding_count(fn, (0.0, 1.0, 0.0, 1.0), poles=[0.6 + 0.5j])
    assert count == 1


def test_winding_counts_multiplicity():
    def fn(z):
        return (z - 0.5 - 0.5j) ** 3

    assert winding_count(fn, (0.0, 1.0, 0.0, 1.0)) == 3


def test_winding_refuses_boundary_zero():
    def fn(z):
        return z - 0.5  # zero sits exactly on the bottom edge

    with pytest.raises(BoundaryZeroError):
        winding_count(fn, (0.0, 1.0, 0.0, 1.0))


def test_winding_refuses_pole_near_contour():
    def fn(z):
        return 1.0 / (z - 0.5 - 0.0004j)

    with pytest.raises(BoundaryZeroError):
        winding_count(fn, (0.0, 1.0, 0.0, 1.0), poles=[0.5 + 0.0004j])


def test_winding_rejects_degenerate_rect():
    with pytest.raises(DomainError):
        winding_count(lambda z: z, (1.0, 1.0, 0.0, 1.0))


def test_winding_gives_up_on_discontinuous_phase():
    def fn(z):
        # half-angle phase is discontinuous along a ray crossing the
        # contour, so the step criterion can never be met there
        return cmath.exp(0.5j * cmath.phase(z - 0.5 - 0.5j))

    with pytest.raises(ConvergenceError):
        winding_count(fn, (0.0, 1.0, 0.0, 1.0), max_samples=4096)


def test_winding_unaffected_by_huge_scale_variation():
    # modulus varies by ~1e-10 top to bottom, as completed strip
    # functions do; the windowed boundary check must not misfire
    def fn(z):
        return (z - 0.5 - 15j) * cmath.exp(-0.75 * z.imag)

    assert winding_count(fn, (-0.1, 1.1, 1.0, 30.0)) == 1


@settings(max_examples=20, deadline=None)
@given(
    st.lists(
        st.complex_numbers(
            min_magnitude=0.0, max_magnitude=0.35, allow_nan=False,
            allow_infinity=False,
        ),
        min_size=0, max_size=4,
    )
)
def test_winding_counts_random_interior_roots(offsets):
    center = 0.5 + 0.5j
    roots = [center + off for off in offsets]

    def fn(z):
        out = 1.0 + 0.0j
        for r in roots:
            out *= z - r
        return out

    assert winding_count(fn, (0.0, 1.0, 0.0, 1.0)) == len(roots)


# ---------------------------------------------------------------------------
# vertical-line scans


def _sin_line_fn(s):
    # zeros exactly at s = 1/2 + i k for integer k
    return cmath.sin(1j * math.pi * (s - 0.5))


def test_line_scan_finds_integer_ladder():
    reports = line_zeros(_sin_line_fn, 0.5, 0.4, 5.6, samples=600)
    assert len(reports) == 5
    for n, rep in enumerate(reports, start=1):
        assert rep.method == "Winding+Bisection"
        assert rep.certified
        assert rep.multiplicity == 1
        assert rep.residual <= 1e-10
        assert abs(rep.location - complex(0.5, n)) <= 1e-9
    ims = [r.location.imag for r in reports]
    assert ims == sorted(ims)


def test_line_scan_recovers_slightly_offline_zero():
    z0 = 0.5002 + 2.0j

    def fn(s):
        return (s - z0) * cmath.exp(0.1 * s)

    reports = line_zeros(fn, 0.5, 1.0, 3.0, samples=400)
    assert len(reports) == 1
    assert abs(reports[0].location - z0) <= 1e-9
    assert reports[0].certified


def test_line_scan_handles_decaying_scale():
    # same ladder, modulated by a strong vertical decay; the relative
    # dip detector must still see every zero
    def fn(s):
        return _sin_line_fn(s) * cmath.exp(-0.9 * s.imag)

    reports = line_zeros(fn, 0.5, 0.4, 5.6, samples=600)
    assert [round(r.location.imag) for r in reports] == [1, 2, 3, 4, 5]
    assert all(r.certified for r in reports)


def test_line_scan_separates_close_pair():
    # gap fits inside the outer winding square but not the inner shells
    z1, z2 = 0.5 + 2.0j, 0.5 + 2.0008j

    def fn(s):
        return (s - z1) * (s - z2)

    reports = line_zeros(fn, 0.5, 1.9, 2.1, samples=2000)
    assert len(reports) == 2
    for rep, want in zip(reports, (z1, z2)):
        assert rep.certified
        assert rep.multiplicity == 1  # the inner shells see one zero each
        assert abs(rep.location - want) <= 1e-8


def test_line_scan_reports_double_zero_multiplicity():
    z0 = 0.5 + 2.0j

    def fn(s):
        return (s - z0) ** 2

    reports = line_zeros(fn, 0.5, 1.5, 2.5, samples=400)
    assert len(reports) == 1
    assert reports[0].multiplicity == 2
    assert abs(reports[0].location - z0) <= 1e-5


def test_line_scan_strict_raises_on_unpolishable_dip():
    # real-valued modulus dip with no analytic zero: the Jacobian is
    # singular, polish fails, and strict mode refuses the result
    def fn(s):
        return abs(s - (0.5 + 2.0j)) + 1e-3

    reports = line_zeros(fn, 0.5, 1.5, 2.5, samples=400)
    assert reports and not any(r.certified for r in reports)
    with pytest.raises(UncertifiedError):
        line_zeros(fn, 0.5, 1.5, 2.5, samples=400, strict=True)


def test_line_scan_ignores_smooth_nonvanishing_stretch():
    def fn(s):
        return cmath.exp(0.3 * s) + 2.0

    assert line_zeros(fn, 0.5, 0.0, 10.0, samples=500) == []


def test_line_scan_rejects_empty_range():
    with pytest.raises(DomainError):
        line_zeros(_sin_line_fn, 0.5, 2.0, 1.0)


def test_line_scan_respects_listed_poles():
    # simple pole just outside the scan line must not break certification
    z0 = 0.5 + 3.0j
    pole = 0.5 + 7.0j

    def fn(s):
        return (s - z0) / (s - pole)

    reports = line_zeros(fn, 0.5, 2.0, 4.0, samples=300, poles=[pole])
    assert len(reports) == 1
    assert reports[0].certified
    assert abs(reports[0].location - z0) <= 1e-9
