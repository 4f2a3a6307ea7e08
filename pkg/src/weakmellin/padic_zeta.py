"""Closed-form zeta factors of quadratic-phase characters at finite places.

For f(x) = psi(a x^2/2 + b x) on the p-adic field, the transfer factor is

    Z(s, chi) = sum_j m(j) p^(-js),   m(j) = unit average of f chi at p^j.

The profile m(j) has rigid structure: it is exactly 1 (or exactly 0 for
ramified chi) for large j, exactly 0 below a support cutoff, and carries a
geometric phase tail in between.  That turns Z into an explicit rational
function of p^(-s).  This module computes the structure constants

    k      escape level after rescaling
    delta  parity of the valuation of the quadratic coefficient
    gamma  quadratic Gauss phase, modulus 1

and evaluates the resulting closed forms.  The numerators assemble into a
single self-inversive polynomial

    P(X) = gamma X^D - (gamma/Q) X^(D-1) - X/Q + 1,

X = q^(s - n/2), Q = q^(n/2), D = 2k + delta, whose roots sit on |X| = 1;
root extraction and certification live in zero_engine.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import (
    DegenerateError,
    DomainError,
    PoleError,
    SupportEscapeError,
    WeakMellinError,
)
from .padic_core import (
    UnitCharacter,
    psi_p,
    theta_additive,
    unit_average,
    valuation,
)

__all__ = [
    "LocalFactor",
    "local_factor",
    "local_factor_unramified",
    "local_factor_ramified",
    "padic_vector_factor",
    "qp2_special_eval",
    "weil_index_padic",
    "rho0_gauss_sum",
    "rescale_normal_form",
]

_POLE_EPS = 1e-12


def rescale_normal_form(a, b, p: int, n_chi: int = 0):
    """Substitute x -> cx with a p-power c so the quadratic coefficient has
    valuation delta in {0, 1} (unramified) or -n_chi + delta (ramified).

    Returns (a_norm, b_norm, e_scale, delta) with the original factor equal
    to p^(e_scale * s') times the normalized one, s' the twist-shifted s.
    """
    a, b = Fraction(a), Fraction(b)
    if a == 0:
        raise DegenerateError("quadratic coefficient must be nonzero")
    va = int(valuation(a, p))
    target_parity_base = -n_chi
    # choose e with v(a) + 2e in {target_parity_base, target_parity_base + 1}
    e = math.ceil((target_parity_base - va) / 2)
    c = Fraction(p) ** e
    a_norm = a * c * c
    b_norm = b * c
    delta = int(valuation(a_norm, p)) - target_parity_base
    e_scale = -e  # |c|^s = p^(e_scale * s)
    return a_norm, b_norm, e_scale, delta


def _trivial_on_integers(a_half, b, p: int) -> bool:
    """Is x -> psi(a_half x^2 + b x) identically 1 on the p-adic integers?

    For odd p this needs both coefficients integral.  At p = 2 the square
    has the extra structure x^2 - x in 2 Z_2, so the sharp rule is
    v(a_half) >= -1 together with v(a_half + b) >= 0.
    """
    va = valuation(a_half, p)
    vb = valuation(b, p)
    if p != 2:
        return va >= 0 and vb >= 0
    return va >= -1 and valuation(a_half + b, p) >= 0


def detect_escape_level(a_norm, b_norm, p: int) -> int:
    """Smallest k with the phase trivial on integer multiples of p^j for
    every j >= k.  Exact: scans with exact valuations from a guaranteed
    stability point downward."""
    a_norm, b_norm = Fraction(a_norm), Fraction(b_norm)

    def trivial(j: int) -> bool:
        y = Fraction(p) ** j
        return _trivial_on_integers(a_norm * y * y / 2, b_norm * y, p)

    delta = int(valuation(a_norm, p))
    vb = valuation(b_norm, p)
    j = max(0, 1 - delta, *( [int(-vb)] if b_norm != 0 else [] ))
    while not trivial(j):  # p = 2 cancellation can push past the envelope
        j += 1
        if j > 64:
            raise SupportEscapeError("no escape level found below 64")
    while j > -64 and trivial(j - 1):
        j -= 1
    return j


def weil_index_padic(a, b, p: int) -> complex:
    """Unit-modulus Gauss phase gamma of the normalized pair.

    gamma = q^(k + delta/2) * theta(p^(-k-delta)) where theta is the exact
    additive integral; the tail recursion theta(y/p) = theta(y)/q makes the
    choice of depth immaterial.  Completing the square gives the law
    gamma_{a,b} = gamma_{a,0} * psi(-b^2/(2a)) for escape level matching b.
    """
    a_norm, b_norm, _, delta = rescale_normal_form(a, b, p)
    k = detect_escape_level(a_norm, b_norm, p)
    th = theta_additive(a_norm, b_norm, p, Fraction(p) ** (-k - delta))
    gamma = p ** (k + delta / 2.0) * th
    if abs(abs(gamma) - 1.0) > 1e-9:
        raise WeakMellinError(
            f"gauss phase lost unit modulus: |gamma| = {abs(gamma)}"
        )
    return gamma


@dataclass(frozen=True)
class LocalFactor:
    """Closed-form factor at one finite place.

    kind is one of "unramified", "ramified", "vanishing", "vector".  Fields
    not applying to a kind stay at their defaults.  evaluate() accepts any
    complex s away from the pole lattice of the factor.
    """

    p: int
    kind: str
    k: int = 0
    delta: int = 0
    gamma: complex = 1.0 + 0.0j
    e_scale: int = 0
    twist: complex = 1.0 + 0.0j
    chi: UnitCharacter | None = None
    # ramified two-term data: Z = C (q^(-ks) + omega q^(-k-delta/2) q^((k+delta)s))
    C: complex = 0.0 + 0.0j
    omega: complex = 0.0 + 0.0j
    # vector data
    n_dim: int = 1
    mid_terms: tuple = field(default_factory=tuple)  # ((j, coeff), ...)
    tail_j: int = 0
    tail_coeff: complex = 0.0 + 0.0j

    @property
    def q(self) -> int:
        return self.p

    @property
    def degree(self) -> int:
        """Number of zeros per vertical period: D = 2k + delta."""
        return 2 * self.k + self.delta

    def shifted_s(self, s: complex) -> complex:
        """Absorb an unramified twist into a vertical shift of s."""
        arg = cmath.phase(complex(self.twist))
        if arg == 0.0:
            return complex(s)
        return complex(s) - 1j * arg / math.log(self.p)

    def evaluate(self, s: complex) -> complex:
        s = self.shifted_s(s)
        if self.kind == "vanishing":
            return 0.0 + 0.0j
        if self.kind == "unramified":
            return self._eval_unramified(s)
        if self.kind == "ramified":
            return self._eval_ramified(s)
        if self.kind == "vector":
            return self._eval_vector(s)
        raise DomainError(f"unknown factor kind {self.kind!r}")

    # prefactor from the normalizing substitution x -> cx
    def _scale(self, s: complex) -> complex:
        if self.e_scale == 0:
            return 1.0 + 0.0j
        return complex(self.p) ** (self.e_scale * s)

    def _eval_unramified(self, s: complex) -> complex:
        q = self.p
        qs = q ** (-s)
        if abs(1.0 - qs) < _POLE_EPS:
            raise PoleError(f"local factor pole near s = {s} (p = {self.p})")
        pre = self._scale(s)
        k, delta, gamma = self.k, self.delta, self.gamma
        if k == 0 and delta == 0:
            return pre / (1.0 - qs)
        head = (1.0 - q ** (s - 1.0)) * q ** (-k * s) / (1.0 - qs)
        if delta == 0:
            tail = gamma * q ** (k * (s - 1.0))
        else:
            tail = gamma * math.sqrt(q) * q ** ((k + 1.0) * (s - 1.0))
        return pre * (head + tail) / (1.0 - 1.0 / q)

    def entire_eval(self, s: complex) -> complex:
        """(1 - twist p^(-s)) * factor, written without the cancelled pole.

        This is the form the global assembly multiplies against the
        correction quotient; it is entire, so no PoleError is possible.
        """
        if self.kind == "vanishing":
            return 0.0 + 0.0j
        if self.kind != "unramified":
            raise DomainError("entire_eval applies to unramified factors")
        s = self.shifted_s(s)
        q = self.p
        pre = self._scale(s)
        k, delta, gamma = self.k, self.delta, self.gamma
        if k == 0 and delta == 0:
            return pre
        head = (1.0 - q ** (s - 1.0)) * q ** (-k * s)
        if delta == 0:
            tail = gamma * q ** (k * (s - 1.0))
        else:
            tail = gamma * math.sqrt(q) * q ** ((k + 1.0) * (s - 1.0))
        return pre * (head + tail * (1.0 - q ** (-s))) / (1.0 - 1.0 / q)

    def _eval_ramified(self, s: complex) -> complex:
        q = self.p
        pre = self._scale(s)
        k, delta = self.k, self.delta
        top = q ** (-k * s)
        bot = self.omega * q ** (-k - delta / 2.0) * q ** ((k + delta) * s)
        return pre * self.C * (top + bot)

    def _eval_vector(self, s: complex) -> complex:
        p = self.p
        ps = p ** (-s)
        if abs(1.0 - ps) < _POLE_EPS:
            raise PoleError(f"vector factor pole near s = {s}")
        n = self.n_dim
        down = p ** (s - n)
        if abs(1.0 - down) < _POLE_EPS:
            raise PoleError(f"vector factor pole near s = {s} (lower tail)")
        # mid_terms covers (tail_j, k); theta == 1 from k upward
        m_sum = sum(c * p ** (-j * s) for j, c in self.mid_terms)
        upper = p ** (-self.k * s) / (1.0 - ps)
        lower = self.tail_coeff * p ** (-self.tail_j * s) / (1.0 - down)
        m_theta = m_sum + upper + lower
        return (1.0 - down) * m_theta / (1.0 - 1.0 / p)

    def zero_poly(self):
        """Coefficients (highest degree first) of the numerator polynomial
        in X = q^(s - n/2), plus (Q, D).  Roots give the zeros of the factor
        within one vertical period."""
        if self.kind == "vanishing":
            raise DomainError("identically zero factor has no zero polynomial")
        D = self.degree
        n = self.n_dim
        Q = self.p ** (n / 2.0)
        if self.kind == "vector":
            return self._vector_zero_poly()
        if self.kind == "ramified":
            # zeros solve X^D = -1/omega
            if D == 0:
                return np.array([1.0 + 0j]), Q, 0
            coeffs = np.zeros(D + 1, dtype=complex)
            coeffs[0] = self.omega
            coeffs[-1] = 1.0
            return coeffs, Q, D
        if D == 0:
            return np.array([1.0 + 0j]), Q, 0
        coeffs = np.zeros(D + 1, dtype=complex)
        coeffs[0] += self.gamma
        if D >= 1:
            coeffs[1] += -self.gamma / Q
            coeffs[-2] += -1.0 / Q
        coeffs[-1] += 1.0
        return coeffs, Q, D

    def _vector_zero_poly(self):
        """Exact numerator of the vector factor, assembled from the stored
        Laurent profile and converted to the X = p^(s - n/2) variable.

        With t = p^(-s) the factor times t (1 - t) is the Laurent polynomial

            (t - p^(-n)) (1 - t) mid(t) + (t - p^(-n)) t^m + c t^(T+1) (1 - t)

        (m the stabilization level, T the tail start, c the tail value).
        Neither t = 1 nor t = p^(-n) is a root, so after clearing powers of
        t the remaining roots are exactly the zeros of the factor."""
        p, n, m, T = self.p, self.n_dim, self.k, self.tail_j
        lo = T + 1  # lowest power appearing; tail start sits below m
        size = (m + 1) - lo + 1
        c = np.zeros(size, dtype=complex)  # c[i] multiplies t^(lo + i)

        def add(power, val):
            c[power - lo] += val

        pn = float(p) ** (-n)
        for j, coeff in self.mid_terms:
            # (t - p^-n)(1 - t) t^j = -t^(j+2) + (1 + p^-n) t^(j+1) - p^-n t^j
            add(j + 2, -coeff)
            add(j + 1, (1.0 + pn) * coeff)
            add(j, -pn * coeff)
        add(m + 1, 1.0)
        add(m, -pn)
        add(T + 1, self.tail_coeff)
        add(T + 2, -self.tail_coeff)

        # strip structurally cancelled ends (exact zeros up to roundoff)
        tol = 1e-10 * np.max(np.abs(c))
        keep = np.nonzero(np.abs(c) > tol)[0]
        if keep.size == 0:
            raise WeakMellinError("vector numerator collapsed to zero")
        c = c[keep[0] : keep[-1] + 1]
        D = c.size - 1
        Q = float(p) ** (n / 2.0)
        # N(t) = sum_i c[i] t^i with t = p^(-n/2) / X turns into the X
        # polynomial sum_i c[i] p^(-i n/2) X^(D - i), highest degree first
        coeffs = np.array(
            [c[i] * Q ** (-float(i)) for i in range(c.size)], dtype=complex
        )
        return coeffs, Q, D

    def zeros_in_im_range(self, im_lo: float, im_hi: float) -> list[complex]:
        """All zeros of the factor with imaginary part in [im_lo, im_hi],
        found from the explicit periodic root structure."""
        coeffs, _, D = self.zero_poly()
        if D == 0:
            return []
        roots = np.roots(coeffs)
        period = 2.0 * math.pi / math.log(self.p)
        shift = cmath.phase(complex(self.twist)) / math.log(self.p)
        out = []
        for r in roots:
            base = self.n_dim / 2.0 + cmath.log(r) / math.log(self.p)
            re0 = base.real
            im0 = base.imag + shift
            t = math.ceil((im_lo - im0) / period - 1e-12)
            while im0 + t * period <= im_hi + 1e-12:
                out.append(complex(re0, im0 + t * period))
                t += 1
        return sorted(out, key=lambda z: (z.imag, z.real))


def local_factor_unramified(a, b, p: int, twist: complex = 1.0) -> LocalFactor:
    a_norm, b_norm, e_scale, delta = rescale_normal_form(a, b, p)
    k = detect_escape_level(a_norm, b_norm, p)
    if k == 0 and delta == 0:
        gamma = 1.0 + 0.0j
    else:
        gamma = p ** (k + delta / 2.0) * theta_additive(
            a_norm, b_norm, p, Fraction(p) ** (-k - delta)
        )
        if abs(abs(gamma) - 1.0) > 1e-9:
            raise WeakMellinError(f"|gamma| = {abs(gamma)} off the unit circle")
    return LocalFactor(
        p=p, kind="unramified", k=k, delta=delta, gamma=complex(gamma),
        e_scale=e_scale, twist=complex(twist),
    )


def qp2_special_eval(s: complex) -> complex:
    """The 2-adic factor of psi(x^2/2) written out longhand.

    Kept as an independent expression (not routed through LocalFactor) so
    the generic machinery can be checked against it.
    """
    s = complex(s)
    den = 1.0 - 2.0 ** (-s)
    if abs(den) < _POLE_EPS:
        raise PoleError(f"pole near s = {s}")
    e8 = cmath.exp(1j * math.pi / 4.0)
    return (2.0 ** (1.0 - s) * (1.0 - 2.0 ** (s - 1.0)) + e8 * 2.0**s * den) / den


def _ramified_window(a_norm, b_norm, p: int, chi: UnitCharacter):
    """Exact profile of unit averages on the provably complete support.

    Scans downward from the triviality edge.  A level j is provably zero
    without computation when the linear part of the coset decomposition has
    uniformly negative valuation: no residue survives the indicator.  Three
    consecutive provable zeros end the scan (the predicate is eventually
    monotone in -j since the quadratic valuation falls twice as fast).
    """
    n = chi.conductor_exponent
    delta = int(valuation(a_norm, p)) + n
    vb = valuation(b_norm, p)  # inf when b_norm == 0

    # above this, phase trivial on conductor-level cosets, so average = 0
    hi = max(1, (2 - delta) // 2)
    if b_norm != 0:
        hi = max(hi, 1 - n - int(vb))

    def provably_zero(j: int) -> bool:
        va_j = -n + delta + 2 * j
        m_min = max(n, math.ceil(-va_j / 2))
        if b_norm == 0:
            return va_j < -m_min
        vb_j = int(vb) + j
        if va_j == vb_j:
            return False  # cancellation possible, must compute
        return min(va_j, vb_j) < -m_min

    profile = {}
    j = hi
    consec = 0
    while consec < 3:
        if j < hi - 64:
            raise SupportEscapeError("ramified support scan exceeded 64 levels")
        if provably_zero(j):
            consec += 1
        else:
            consec = 0
            val = unit_average(a_norm, b_norm, p, Fraction(p) ** j, chi=chi)
            if abs(val) > 1e-13:
                profile[j] = val
        j -= 1
    return profile, delta


def local_factor_ramified(a, b, p: int, chi: UnitCharacter, twist: complex = 1.0) -> LocalFactor:
    """Factor against a ramified character: a finite Laurent polynomial.

    The exact profile has at most two nonzero coefficients, at the escape
    level k and its mirror -(k + delta).  An empty profile means the factor
    vanishes identically (an odd character against an even phase).
    """
    if p == 2:
        raise DomainError("ramified factors at p = 2 are out of scope")
    n = chi.conductor_exponent
    if n == 0:
        raise DomainError("character is unramified; use local_factor_unramified")
    a_norm, b_norm, e_scale, delta = rescale_normal_form(a, b, p, n_chi=n)
    profile, delta_check = _ramified_window(a_norm, b_norm, p, chi)
    if delta != delta_check:
        raise WeakMellinError("normalization parity mismatch")
    if not profile:
        return LocalFactor(
            p=p, kind="vanishing", chi=chi, e_scale=e_scale, twist=complex(twist)
        )
    ks = sorted(profile)
    k = ks[-1]
    if len(ks) == 1:
        # degenerate single-term factor: monomial, zero-free
        C = profile[k]
        return LocalFactor(
            p=p, kind="ramified", k=k, delta=-2 * k, gamma=1.0,
            e_scale=e_scale, twist=complex(twist), chi=chi,
            C=complex(C), omega=0.0,
        )
    if len(ks) != 2 or ks[0] != -(k + delta):
        raise WeakMellinError(
            f"unexpected ramified support {ks}; two-term structure violated"
        )
    C = profile[k]
    bottom = profile[-(k + delta)]
    omega = bottom / C * p ** (k + delta / 2.0)
    if abs(abs(omega) - 1.0) > 1e-9:
        raise WeakMellinError(f"|omega| = {abs(omega)} off the unit circle")
    return LocalFactor(
        p=p, kind="ramified", k=k, delta=delta, gamma=1.0,
        e_scale=e_scale, twist=complex(twist), chi=chi,
        C=complex(C), omega=complex(omega),
    )


def local_factor(a, b, p: int, chi: UnitCharacter | None = None, twist: complex = 1.0) -> LocalFactor:
    if chi is None or chi.is_trivial:
        return local_factor_unramified(a, b, p, twist=twist)
    return local_factor_ramified(a, b, p, chi, twist=twist)


def rho0_gauss_sum(chi: UnitCharacter) -> complex:
    """Normalized Gauss sum of a ramified character, modulus exactly 1."""
    n = chi.conductor_exponent
    if n == 0:
        raise DomainError("gauss sum needs a ramified character")
    p = chi.p
    pn = p**n
    total = 0.0 + 0.0j
    for eps in range(1, pn):
        if eps % p == 0:
            continue
        total += chi(eps) * psi_p(Fraction(eps, pn), p)
    return total / p ** (n / 2.0)


def _theta_product(configs, p: int, y) -> complex:
    out = 1.0 + 0.0j
    for a, b in configs:
        out *= theta_additive(a, b, p, y)
    return out


def padic_vector_factor(configs, p: int, twist: complex = 1.0) -> LocalFactor:
    """Diagonal-scaling factor of a product of quadratic phases on an
    n-dimensional p-adic space.

    Detects the stable region (product of thetas equal to 1) and the
    geometric lower tail (ratio p^n per step) from exact values, and stores
    the finite middle explicitly.

    The zeros all sit on Re(s) = n/2 when the component quadratic
    coefficients have valuations of equal parity.  Mixing parities
    genuinely moves zeros off that line (the numerator stops being
    self-inversive); zero_poly still reports the true roots.
    """
    configs = tuple((Fraction(a), Fraction(b)) for a, b in configs)
    n = len(configs)
    if n == 0:
        raise DegenerateError("empty configuration")
    for a, _ in configs:
        if a == 0:
            raise DegenerateError("quadratic coefficient must be nonzero")

    cache: dict[int, complex] = {}

    def theta(j: int) -> complex:
        if j not in cache:
            cache[j] = _theta_product(configs, p, Fraction(p) ** j)
        return cache[j]

    # upper stabilization: theta == 1 exactly from some m on
    m = 0
    while any(abs(theta(j) - 1.0) > 1e-13 for j in (m, m + 1, m + 2)):
        m += 1
        if m > 48:
            raise SupportEscapeError("no upper stabilization below 48")
    while m > -48 and all(
        abs(theta(j) - 1.0) <= 1e-13 for j in (m - 1, m, m + 1)
    ):
        m -= 1

    # lower tail: theta(p^(j-1)) = theta(p^j) / p^n exactly
    scale = float(p) ** n

    def in_tail(j: int) -> bool:
        # a genuine tail value is nonzero; a support gap fakes the ratio
        t0, t1 = theta(j - 1), theta(j)
        if abs(t1) == 0.0:
            return False
        return abs(t0 * scale - t1) <= 1e-12 * abs(t1)

    t = m
    while not (in_tail(t) and in_tail(t - 1) and in_tail(t - 2)):
        t -= 1
        if t < m - 96:
            raise SupportEscapeError("no lower tail found within 96 levels")
    while t < m and in_tail(t + 1):
        t += 1
    tail_j = t - 1  # highest level already inside the geometric tail

    mid = []
    for j in range(tail_j + 1, m):
        c = theta(j)
        if abs(c) > 1e-15:
            mid.append((j, complex(c)))
    return LocalFactor(
        p=p, kind="vector", k=m, n_dim=n, twist=complex(twist),
        mid_terms=tuple(mid), tail_j=tail_j,
        tail_coeff=complex(theta(tail_j)),
    )
