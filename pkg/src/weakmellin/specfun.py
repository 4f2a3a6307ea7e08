"""Scalar special functions used by the zeta-factor machinery.

Everything here is self-contained: a Lanczos log-gamma, Euler-Maclaurin
Riemann and Hurwitz zeta, a Kummer confluent hypergeometric with an
80-bit fast path plus a wide-decimal rescue for heavy cancellation,
Dirichlet characters of general modulus, and the completed Riemann xi.
External packages (mpmath, sympy) appear only in the test suite as
cross-checks, never here.

Accuracy targets: ~1e-13 relative for gamma and zeta on the working region
Re(s) >= -0.5, |Im(s)| <= 60, away from poles.  Values outside that region go
through reflection formulas or raise DomainError.
"""

from __future__ import annotations

import cmath
import decimal
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import (
    ConvergenceError,
    DomainError,
    PoleError,
    PrecisionWarning,
)

__all__ = [
    "log_gamma",
    "gamma",
    "gamma_ratio",
    "EvalQuality",
    "hyp1f1",
    "hyp1f1_eval",
    "riemann_zeta",
    "hurwitz_zeta",
    "DirichletCharacter",
    "characters",
    "dirichlet_l",
    "completed_xi",
]

TWO_PI = 2.0 * math.pi

# Lanczos approximation, g = 7, 9 coefficients.  Gives ~15 significant
# digits for Re(z) >= 0.5; the reflection formula covers the rest.
_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_POLE_TOL = 1e-9


def _near_nonpositive_int(z: complex) -> bool:
    if abs(z.imag) > _POLE_TOL:
        return False
    r = round(z.real)
    return r <= 0 and abs(z.real - r) <= _POLE_TOL


def log_gamma(z: complex) -> complex:
    """Log of the gamma function.

    The imaginary part is continuous along the Lanczos evaluation, not
    reduced to the principal branch; exp(log_gamma(z)) is always Gamma(z).
    Raises PoleError within 1e-9 of a non-positive integer.
    """
    z = complex(z)
    if _near_nonpositive_int(z):
        raise PoleError(f"gamma pole at z = {z}")
    if z.real < 0.5:
        # reflection: log pi/sin(pi z) - log_gamma(1 - z)
        return cmath.log(math.pi / cmath.sin(math.pi * z)) - log_gamma(1.0 - z)
    zz = z - 1.0
    x = _LANCZOS_C[0]
    for i in range(1, 9):
        x += _LANCZOS_C[i] / (zz + i)
    t = zz + _LANCZOS_G + 0.5
    return 0.5 * math.log(TWO_PI) + (zz + 0.5) * cmath.log(t) - t + cmath.log(x)


def gamma(z: complex) -> complex:
    return cmath.exp(log_gamma(z))


def gamma_ratio(num: complex, den: complex) -> complex:
    """Gamma(num) / Gamma(den) with pole bookkeeping.

    A pole in the denominator alone kills the ratio exactly (returns 0).
    A pole in the numerator alone is a genuine pole of the ratio.  Both at
    poles is a removable 0/0 whose limit depends on the approach direction,
    which plain values cannot resolve, so it is refused.
    """
    num_pole = _near_nonpositive_int(complex(num))
    den_pole = _near_nonpositive_int(complex(den))
    if den_pole and not num_pole:
        return 0.0 + 0.0j
    if num_pole and den_pole:
        raise PoleError(
            f"gamma_ratio 0/0 at num={num}, den={den}; evaluate at a nearby point"
        )
    if num_pole:
        raise PoleError(f"gamma_ratio pole at num={num}")
    return cmath.exp(log_gamma(num) - log_gamma(den))


@dataclass(frozen=True)
class EvalQuality:
    """Value of a series plus how much cancellation it survived."""

    value: complex
    cancellation_ratio: float
    terms_used: int


_HYP_MAX_TERMS = 500
_HYP_Z_CAP = 40.0
_HYP_EPS80 = 1.08e-19
_HYP_REL_TARGET = 1e-12
_HYP_MAX_DIGITS = 60


def _hyp1f1_decimal(a: complex, b: complex, z: complex, digits: int) -> complex:
    """Rerun the Kummer series with ``digits``-place decimal arithmetic.

    Same recurrence as the fast path, reached only when cancellation has
    chewed through the 80-bit significand.  Inputs are double precision,
    so rounding them is not the bottleneck; the wide significand is.
    """
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        ar, ai = decimal.Decimal(a.real), decimal.Decimal(a.imag)
        br, bi = decimal.Decimal(b.real), decimal.Decimal(b.imag)
        zr, zi = decimal.Decimal(z.real), decimal.Decimal(z.imag)
        tr = sr = decimal.Decimal(1)
        ti = si = decimal.Decimal(0)
        floor = decimal.Decimal(10) ** -(digits + 3)
        max_partial = decimal.Decimal(1)
        small_run = 0
        for k in range(_HYP_MAX_TERMS):
            nr, ni = ar + k, ai
            tr, ti = tr * nr - ti * ni, tr * ni + ti * nr
            tr, ti = tr * zr - ti * zi, tr * zi + ti * zr
            dr, di = br + k, bi
            dmod = (dr * dr + di * di) * (k + 1)
            tr, ti = (tr * dr + ti * di) / dmod, (ti * dr - tr * di) / dmod
            sr += tr
            si += ti
            partial = abs(sr) + abs(si)
            if partial > max_partial:
                max_partial = partial
            if abs(tr) + abs(ti) <= floor * max_partial:
                small_run += 1
                if small_run >= 3:
                    return complex(float(sr), float(si))
            else:
                small_run = 0
    raise ConvergenceError(
        f"hyp1f1({a}, {b}, {z}) did not converge in {_HYP_MAX_TERMS} terms"
    )


def hyp1f1_eval(a: complex, b: complex, z: complex) -> EvalQuality:
    """Kummer 1F1(a; b; z) by Taylor series in extended precision.

    The term recurrence and the partial sums run in 80-bit floats.  The
    running-maximum partial sum over the final value estimates how many
    digits cancellation destroyed; when the fast value cannot promise
    twelve clean digits the series reruns in decimal arithmetic wide
    enough to absorb the loss (up to 60 places).  Restricted to
    |z| <= 40: beyond that the scale swings outgrow even that budget and
    callers must rescale upstream.  Emits PrecisionWarning only if the
    widest rerun still leaves fewer than about seven clean digits.
    """
    a = complex(a)
    b = complex(b)
    z = complex(z)
    if abs(z) > _HYP_Z_CAP:
        raise DomainError(f"hyp1f1 argument |z| = {abs(z):.3g} exceeds {_HYP_Z_CAP}")

    aw = np.clongdouble(a)
    bw = np.clongdouble(b)
    zw = np.clongdouble(z)
    term = np.clongdouble(1.0)
    total = np.clongdouble(1.0)
    max_partial = 1.0
    small_run = 0
    k = 0
    while k < _HYP_MAX_TERMS:
        bk = bw + k
        if abs(bk) < 1e-12:
            raise PoleError(f"hyp1f1 pole: b = {b} hits a non-positive integer")
        term = term * (aw + k) * zw / (bk * (k + 1))
        k += 1
        total = total + term
        partial = float(abs(total))
        if partial > max_partial:
            max_partial = partial
        if abs(term) < 1e-20 * max(max_partial, 1e-300):
            small_run += 1
            if small_run >= 3:
                break
        else:
            small_run = 0
    else:
        raise ConvergenceError(
            f"hyp1f1({a}, {b}, {z}) did not converge in {_HYP_MAX_TERMS} terms"
        )

    value = complex(total)
    ratio = max_partial / max(abs(value), 1e-300)
    est_rel = _HYP_EPS80 * ratio
    if est_rel > _HYP_REL_TARGET:
        digits = min(_HYP_MAX_DIGITS, 25 + int(math.log10(max(ratio, 1.0))))
        value = _hyp1f1_decimal(a, b, z, digits)
        for _ in range(2):
            # the fast value may have underestimated the ratio; recheck
            ratio = max_partial / max(abs(value), 1e-300)
            est_rel = 10.0 ** (1 - digits) * ratio
            if est_rel <= _HYP_REL_TARGET or digits >= _HYP_MAX_DIGITS:
                break
            digits = min(_HYP_MAX_DIGITS, 25 + int(math.log10(max(ratio, 1.0))))
            value = _hyp1f1_decimal(a, b, z, digits)
    if est_rel > 1e-7:
        warnings.warn(
            f"hyp1f1({a}, {b}, {z}): cancellation ratio {ratio:.2e} leaves "
            f"an estimated relative error {est_rel:.1e}",
            PrecisionWarning,
            stacklevel=2,
        )
    return EvalQuality(value=value, cancellation_ratio=ratio, terms_used=k)


def hyp1f1(a: complex, b: complex, z: complex) -> complex:
    return hyp1f1_eval(a, b, z).value


# Bernoulli numbers B_2 .. B_24 as exact fractions, used by Euler-Maclaurin.
_BERNOULLI = (
    Fraction(1, 6),
    Fraction(-1, 30),
    Fraction(1, 42),
    Fraction(-1, 30),
    Fraction(5, 66),
    Fraction(-691, 2730),
    Fraction(7, 6),
    Fraction(-3617, 510),
    Fraction(43867, 798),
    Fraction(-174611, 330),
    Fraction(854513, 138),
    Fraction(-236364091, 2730),
)

_EM_N = 50
_EM_M = 12
_ZETA_IM_CAP = 60.0


def _cexpm1(w: complex) -> complex:
    # complex expm1; cmath has none.  Taylor near 0, direct otherwise.
    if abs(w) < 1e-4:
        return w * (1.0 + w * (0.5 + w * (1.0 / 6.0 + w / 24.0)))
    return cmath.exp(w) - 1.0


def _em_tail(s: complex, base: float) -> complex:
    """Euler-Maclaurin correction terms at cutoff `base` (= N + a)."""
    out = 0.0 + 0.0j
    rising = s  # (s)_{2k-1} built incrementally
    for k in range(1, _EM_M + 1):
        coeff = float(_BERNOULLI[k - 1] / math.factorial(2 * k))
        out += coeff * rising * base ** (-s - (2 * k - 1))
        if k < _EM_M:
            rising *= (s + 2 * k - 1) * (s + 2 * k)
    return out


def _hurwitz_em(s: complex, a: float, skip_pole: bool) -> complex:
    """Euler-Maclaurin Hurwitz zeta, valid Re(s) > -0.5, |Im(s)| <= 60.

    With skip_pole the exact simple-pole part 1/(s-1) is omitted, which is
    what character sums with zero mean need to pass smoothly through s = 1.
    """
    acc = 0.0 + 0.0j
    for n in range(_EM_N):
        acc += (n + a) ** (-s)
    base = _EM_N + a
    lb = math.log(base)
    # base^(1-s)/(s-1) = [expm1((1-s) lb)] / (s-1)  +  1/(s-1)
    if abs(s - 1.0) < 1e-12:
        regular = complex(-lb)
    else:
        regular = _cexpm1((1.0 - s) * lb) / (s - 1.0)
    acc += regular
    if not skip_pole:
        acc += 1.0 / (s - 1.0)
    acc += 0.5 * base ** (-s)
    acc += _em_tail(s, base)
    return acc


def riemann_zeta(s: complex) -> complex:
    """Riemann zeta by Euler-Maclaurin, functional equation for Re(s) < 0.

    Raises PoleError within 1e-6 of s = 1 and DomainError for |Im(s)| > 60
    (the correction terms start losing accuracy there).
    """
    s = complex(s)
    if abs(s - 1.0) < 1e-6:
        raise PoleError(f"zeta pole at s = {s}")
    if abs(s.imag) > _ZETA_IM_CAP:
        raise DomainError(f"riemann_zeta restricted to |Im s| <= {_ZETA_IM_CAP}")
    if s.real < 0.0:
        # zeta(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s) zeta(1-s)
        return (
            2.0**s
            * math.pi ** (s - 1.0)
            * cmath.sin(math.pi * s / 2.0)
            * gamma(1.0 - s)
            * riemann_zeta(1.0 - s)
        )
    return _hurwitz_em(s, 1.0, skip_pole=False)


def hurwitz_zeta(s: complex, a: float, *, skip_pole: bool = False) -> complex:
    """Hurwitz zeta(s, a) for real a in (0, 1].

    skip_pole=True returns zeta(s, a) - 1/(s-1), the entire part, computed
    without cancellation near s = 1.
    """
    s = complex(s)
    if not 0.0 < a <= 1.0:
        raise DomainError(f"hurwitz_zeta needs 0 < a <= 1, got a = {a}")
    if s.real < -0.5:
        raise DomainError("hurwitz_zeta restricted to Re(s) >= -0.5")
    if abs(s.imag) > _ZETA_IM_CAP:
        raise DomainError(f"hurwitz_zeta restricted to |Im s| <= {_ZETA_IM_CAP}")
    if not skip_pole and abs(s - 1.0) < 1e-6:
        raise PoleError(f"hurwitz_zeta pole at s = {s}")
    return _hurwitz_em(s, a, skip_pole)


# ---------------------------------------------------------------------------
# Dirichlet characters of general modulus.
#
# The unit group mod q is the product over prime powers p^k || q of cyclic
# pieces: a primitive-root power for odd p, the pair {-1, 3} for 2^k with
# k >= 3, {3} for k = 2, trivial for k = 1.  A character is a choice of
# exponent against each generator; values are exact rational phases.
# ---------------------------------------------------------------------------


def _factorize(q: int) -> list[tuple[int, int]]:
    out = []
    d = 2
    while d * d <= q:
        if q % d == 0:
            k = 0
            while q % d == 0:
                q //= d
                k += 1
            out.append((d, k))
        d += 1
    if q > 1:
        out.append((q, 1))
    return out


def _mult_order(g: int, mod: int, group_order: int) -> int:
    order = group_order
    for p, _ in _factorize(group_order):
        while order % p == 0 and pow(g, order // p, mod) == 1:
            order //= p
    return order


@lru_cache(maxsize=None)
def _local_generators(p: int, k: int) -> tuple[tuple[int, int], ...]:
    """Generators (g, order) of the unit group mod p^k."""
    mod = p**k
    if p == 2:
        if k == 1:
            return ()
        if k == 2:
            return ((3, 2),)
        return ((mod - 1, 2), (3, 2 ** (k - 2)))
    phi = (p - 1) * p ** (k - 1)
    g = 2
    while g % p == 0 or _mult_order(g, mod, phi) != phi:
        g += 1
    return ((g, phi),)


@lru_cache(maxsize=None)
def _dlog_table(p: int, k: int) -> dict[int, tuple[int, ...]]:
    """unit mod p^k  ->  exponent tuple against the local generators."""
    gens = _local_generators(p, k)
    mod = p**k
    table = {1 % mod: tuple(0 for _ in gens)}
    if not gens:
        return table
    # enumerate the full product of generator powers; group order <= 1000
    def extend(idx: int, val: int, exps: tuple[int, ...]) -> None:
        if idx == len(gens):
            table.setdefault(val, exps)
            return
        g, order = gens[idx]
        cur = 1
        for e in range(order):
            extend(idx + 1, (val * cur) % mod, exps + (e,))
            cur = (cur * g) % mod

    extend(0, 1, ())
    return table


class DirichletCharacter:
    """A Dirichlet character mod q, q <= 1000, with exact phase arithmetic.

    `index` lists one exponent per local generator, in the order produced by
    iterating the prime-power factors of q smallest first.
    """

    def __init__(self, q: int, index: tuple[int, ...]):
        if not 1 <= q <= 1000:
            raise DomainError(f"modulus {q} outside supported range 1..1000")
        self.modulus = q
        self._factors = _factorize(q)
        self._gens: list[tuple[int, int, int, int]] = []  # (p, k, order, exponent)
        flat = []
        for p, k in self._factors:
            for _, order in _local_generators(p, k):
                flat.append((p, k, order))
        if len(index) != len(flat):
            raise DomainError(
                f"index length {len(index)} != generator count {len(flat)} for q={q}"
            )
        self.index = tuple(m % order for (_, _, order), m in zip(flat, index))
        for (p, k, order), m in zip(flat, self.index):
            self._gens.append((p, k, order, m))

    @classmethod
    def principal(cls, q: int) -> "DirichletCharacter":
        flat_len = sum(len(_local_generators(p, k)) for p, k in _factorize(q))
        return cls(q, tuple(0 for _ in range(flat_len)))

    def phase(self, n: int) -> Fraction | None:
        """chi(n) = exp(2 pi i * phase(n)); None when gcd(n, q) > 1."""
        n %= self.modulus
        if self.modulus == 1:
            return Fraction(0)
        if math.gcd(n, self.modulus) != 1:
            return None
        total = Fraction(0)
        pos = 0
        for p, k in self._factors:
            exps = _dlog_table(p, k)[n % (p**k)]
            for e in exps:
                _, _, order, m = self._gens[pos]
                total += Fraction(m * e, order)
                pos += 1
        return total % 1

    def __call__(self, n: int) -> complex:
        ph = self.phase(n)
        if ph is None:
            return 0.0 + 0.0j
        return cmath.exp(2j * math.pi * float(ph))

    @property
    def is_principal(self) -> bool:
        return all(m == 0 for m in self.index)

    @property
    def is_even(self) -> bool:
        ph = self.phase(self.modulus - 1) if self.modulus > 1 else Fraction(0)
        return ph == 0

    @property
    def order(self) -> int:
        out = 1
        for _, _, order, m in self._gens:
            out = math.lcm(out, order // math.gcd(order, m))
        return out

    @lru_cache(maxsize=None)
    def _conductor(self) -> int:
        q = self.modulus
        for d in sorted(_divisors(q)):
            ok = True
            for n in range(1, q + 1):
                if math.gcd(n, q) == 1 and n % d == 1 % d:
                    if self.phase(n) != 0:
                        ok = False
                        break
            if ok:
                return d
        return q  # unreachable: d = q always works

    @property
    def conductor(self) -> int:
        return self._conductor()

    @property
    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    def primitive_character(self) -> "DirichletCharacter":
        """The primitive character of conductor f inducing this one."""
        f = self.conductor
        if f == self.modulus:
            return self
        for cand in characters(f):
            if all(
                cand.phase(n) == self.phase(n)
                for n in range(1, self.modulus + 1)
                if math.gcd(n, self.modulus) == 1
            ):
                return cand
        raise ConvergenceError("no inducing primitive character found")  # unreachable

    def value_tuple(self) -> tuple:
        return tuple(self.phase(n) for n in range(self.modulus))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DirichletCharacter):
            return NotImplemented
        return self.modulus == other.modulus and self.index == other.index

    def __hash__(self) -> int:
        return hash((self.modulus, self.index))

    def __repr__(self) -> str:
        return f"DirichletCharacter(q={self.modulus}, index={self.index})"


def _divisors(q: int) -> list[int]:
    out = [1]
    for p, k in _factorize(q):
        out = [d * p**e for d in out for e in range(k + 1)]
    return out


def characters(q: int):
    """Iterate over all phi(q) Dirichlet characters mod q."""
    flat = []
    for p, k in _factorize(q):
        for _, order in _local_generators(p, k):
            flat.append(order)
    if not flat:
        yield DirichletCharacter(q, ())
        return

    def rec(prefix: tuple[int, ...], rest: list[int]):
        if not rest:
            yield DirichletCharacter(q, prefix)
            return
        for m in range(rest[0]):
            yield from rec(prefix + (m,), rest[1:])

    yield from rec((), flat)


def dirichlet_l(s: complex, chi: DirichletCharacter) -> complex:
    """Dirichlet L-function via Hurwitz zeta over residues.

    Non-principal characters evaluate smoothly through s = 1 because the
    per-residue pole parts carry weight sum(chi) = 0 and are dropped exactly.
    """
    s = complex(s)
    q = chi.modulus
    if chi.is_principal:
        # L(s, chi0) = zeta(s) * prod_{p | q} (1 - p^-s); pole at 1 survives
        val = riemann_zeta(s)
        for p, _ in _factorize(q):
            val *= 1.0 - p ** (-s)
        return val
    acc = 0.0 + 0.0j
    for n in range(1, q + 1):
        c = chi(n)
        if c != 0:
            acc += c * hurwitz_zeta(s, n / q, skip_pole=True)
    return q ** (-s) * acc


def completed_xi(s: complex) -> complex:
    """pi^(-s/2) Gamma(s/2) zeta(s), reflected to itself at s -> 1-s.

    Meromorphic with simple poles at 0 and 1 only; the trivial zeros of zeta
    are cancelled, so values like completed_xi(-2) are finite and nonzero.
    """
    s = complex(s)
    if abs(s) < 1e-6 or abs(s - 1.0) < 1e-6:
        raise PoleError(f"completed xi pole at s = {s}")
    if s.real < 0.0:
        return completed_xi(1.0 - s)
    return math.pi ** (-s / 2.0) * gamma(s / 2.0) * riemann_zeta(s)
