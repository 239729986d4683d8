"""Jacobi theta functions on the imaginary axis and theta series of packings.

Numeric values are ``mpmath.mpf`` computed at ``DEFAULT_DPS`` significant
digits unless a caller asks for more.  Exact series are ``QSeries`` objects
whose exponents live on the half-integer grid.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence

import mpmath
from mpmath import mp, mpf

from .codes import WeightEnumerator
from .exceptions import DomainError

DEFAULT_DPS = 50
DEFAULT_ORDER = 64
# below this tau the sums are evaluated at 1/tau through the modular transform
_MODULAR_SWITCH = mpf("0.2")


def _working_dps(dps):
    return max(mp.dps, dps or DEFAULT_DPS)


# ---------------------------------------------------------------------------
# exact q-series

@dataclass(frozen=True)
class QSeries:
    """Truncated power series in q^(1/2) with exact coefficients.

    ``coefficients[k]`` is the coefficient of ``q**(k/2)``; every term with
    ``k >= order`` (``order == len(coefficients)``) is unknown.
    """

    coefficients: tuple

    def __post_init__(self):
        if not self.coefficients:
            raise ValueError("a q-series needs a positive truncation order")
        object.__setattr__(self, "coefficients", tuple(self.coefficients))

    @property
    def order(self) -> int:
        return len(self.coefficients)

    @property
    def truncation_exponent(self) -> Fraction:
        return Fraction(self.order, 2)

    @classmethod
    def from_exponents(cls, terms, order: int) -> "QSeries":
        """Build from ``{2 * exponent: coefficient}`` pairs, dropping k >= order."""
        coeffs = [0] * order
        for k, c in dict(terms).items():
            if k < 0:
                raise ValueError("exponents must be nonnegative")
            if k < order:
                coeffs[k] += c
        return cls(tuple(coeffs))

    def __add__(self, other: "QSeries") -> "QSeries":
        order = min(self.order, other.order)
        return QSeries(tuple(a + b for a, b in zip(self.coefficients[:order], other.coefficients[:order])))

    def __mul__(self, other):
        if isinstance(other, Rational):
            return QSeries(tuple(other * c for c in self.coefficients))
        order = min(self.order, other.order)
        a = self.coefficients[:order]
        b = other.coefficients[:order]
        nz_b = [(j, c) for j, c in enumerate(b) if c]
        out = [0] * order
        for i, ca in enumerate(a):
            if not ca:
                continue
            for j, cb in nz_b:
                if i + j >= order:
                    break
                out[i + j] += ca * cb
        return QSeries(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "QSeries":
        if e < 0:
            raise ValueError("negative powers are not supported")
        result = QSeries((1,) + (0,) * (self.order - 1))
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def coefficient(self, exponent) -> int:
        k = Fraction(exponent) * 2
        if k.denominator != 1:
            raise ValueError("exponent must be a multiple of 1/2")
        k = int(k)
        if k >= self.order:
            raise IndexError(f"exponent {exponent} lies beyond the truncation order")
        return self.coefficients[k]

    def is_integral_exponents(self) -> bool:
        return all(c == 0 for c in self.coefficients[1::2])

    def integer_coefficients(self) -> list:
        """Coefficients of q^0, q^1, ... (requires no half-integer exponents)."""
        if not self.is_integral_exponents():
            raise ValueError("series has half-integer exponents")
        return list(self.coefficients[0::2])

    def evaluate(self, tau, dps: int | None = None):
        """Sum the known terms at q = exp(-pi tau)."""
        with mp.workdps(_working_dps(dps)):
            half_q = mpmath.exp(-mp.pi * mpf(tau) / 2)
            total = mpf(0)
            power = mpf(1)
            for c in self.coefficients:
                if c:
                    # ints and Fractions both expose numerator/denominator
                    total += mpf(c.numerator) / c.denominator * power
                power *= half_q
            return +total

    def to_json(self) -> list:
        return [[k, str(c)] for k, c in enumerate(self.coefficients) if c]

    @classmethod
    def from_json(cls, items, order: int) -> "QSeries":
        return cls.from_exponents({int(k): _parse_coeff(c) for k, c in items}, order)


def _parse_coeff(text):
    value = Fraction(text)
    return value.numerator if value.denominator == 1 else value


def theta3_series(order: int = DEFAULT_ORDER, scale: int = 1) -> QSeries:
    """Series of theta_3(scale * z) = sum_m q^(scale m^2)."""
    terms = {}
    m = 0
    while 2 * scale * m * m < order:
        terms[2 * scale * m * m] = 1 if m == 0 else 2
        m += 1
    return QSeries.from_exponents(terms, order)


def theta2_series(order: int = DEFAULT_ORDER, scale: int = 1) -> QSeries:
    """Series of theta_2(scale * z) = sum_m q^(scale (m + 1/2)^2).

    ``scale * (2m + 1)^2 / 4`` must land on the half-integer grid, i.e. ``scale``
    must be even.
    """
    if scale % 2:
        raise ValueError("theta_2(scale z) needs an even scale on the half-integer grid")
    terms = {}
    m = 0
    while scale * (2 * m + 1) ** 2 // 2 < order:
        terms[scale * (2 * m + 1) ** 2 // 2] = 2
        m += 1
    return QSeries.from_exponents(terms, order)


# ---------------------------------------------------------------------------
# numeric theta functions

def _theta_sum(kind: int, q, eps):
    """Direct sum of theta_kind at nome q, returning (value, tail bound)."""
    total = mpf(0)
    if kind == 2:
        m = 0
        while True:
            term = 2 * q ** ((m + mpf(1) / 2) ** 2)
            total += term
            m += 1
            if term < eps:
                break
        # successive terms shrink at least by q^(2m) < q
        return total, term * q / (1 - q)
    total = mpf(1)
    sign = -1 if kind == 4 else 1
    m = 1
    while True:
        term = 2 * q ** (m * m)
        total += term * (sign**m)
        m += 1
        if term < eps:
            break
    return total, term * q / (1 - q)


def jacobi_theta(kind: int, tau, dps: int | None = None, return_bound: bool = False):
    """theta_2, theta_3 or theta_4 evaluated at z = i*tau (nome q = e^{-pi tau}).

    For tau below 0.2 the modular relations
    theta_3(i tau) = tau^(-1/2) theta_3(i/tau) and
    theta_4(i tau) = tau^(-1/2) theta_2(i/tau) (and the swap for theta_2)
    are used so that the sums never suffer from cancellation.
    """
    if kind not in (2, 3, 4):
        raise ValueError("kind must be 2, 3 or 4")
    with mp.workdps(_working_dps(dps) + 10):
        tau = mpf(tau)
        if not tau > 0:
            raise DomainError(f"tau must be positive, got {tau}")
        eps = mpf(10) ** (-(mp.dps + 10))
        if tau < _MODULAR_SWITCH:
            partner = {2: 4, 3: 3, 4: 2}[kind]
            value, bound = _theta_sum(partner, mpmath.exp(-mp.pi / tau), eps)
            factor = 1 / mpmath.sqrt(tau)
            value, bound = value * factor, bound * factor
        else:
            value, bound = _theta_sum(kind, mpmath.exp(-mp.pi * tau), eps)
    value, bound = +value, +bound
    return (value, bound) if return_bound else value


def s_of_tau(tau, dps: int | None = None):
    """theta_4(i tau) / theta_3(i tau), strictly increasing from 0 to 1."""
    with mp.workdps(_working_dps(dps) + 5):
        value = jacobi_theta(4, tau, dps=mp.dps) / jacobi_theta(3, tau, dps=mp.dps)
    return +value


def t_of_tau(tau, dps: int | None = None):
    with mp.workdps(_working_dps(dps) + 5):
        s = s_of_tau(tau, dps=mp.dps)
        value = s * s
    return +value


def s_of_tau_product(tau, terms: int | None = None, dps: int = 20):
    """Low-precision product form prod_m tanh^2((m - 1/2) pi tau) of s(tau)."""
    with mp.workdps(dps):
        tau = mpf(tau)
        if not tau > 0:
            raise DomainError(f"tau must be positive, got {tau}")
        value = mpf(1)
        m = 1
        while True:
            factor = mpmath.tanh((m - mpf(1) / 2) * mp.pi * tau) ** 2
            value *= factor
            m += 1
            if (terms is not None and m > terms) or (terms is None and 1 - factor < mpf(10) ** (-dps - 2)):
                break
        return +value


def tau_of_t(t, dps: int | None = None, tol=mpf("1e-20")):
    """Inverse of ``t_of_tau`` by bisection on log(tau)."""
    with mp.workdps(_working_dps(dps) + 10):
        t = mpf(t)
        if not 0 < t < 1:
            raise DomainError(f"t must lie strictly inside (0, 1), got {t}")
        lo = hi = mpf(1)
        while t_of_tau(lo, dps=mp.dps) > t:
            lo /= 2
        while t_of_tau(hi, dps=mp.dps) < t:
            hi *= 2
        while hi - lo > tol * lo:
            mid = mpmath.sqrt(lo * hi)
            if t_of_tau(mid, dps=mp.dps) < t:
                lo = mid
            else:
                hi = mid
        value = (lo + hi) / 2
    return +value


# ---------------------------------------------------------------------------
# theta series of Construction A and periodic packings

def theta_construction_a(W: WeightEnumerator, tau=None, order: int | None = None, dps: int | None = None):
    """Theta series of (1/sqrt 2)(C + 2Z^n) from the weight enumerator of C.

    Pass ``tau`` for a numeric value at z = i*tau, or ``order`` for the exact
    series truncated at exponent ``order / 2``.  Substitutes
    x -> theta_3(2z), y -> theta_2(2z) into W(x, y).
    """
    if (tau is None) == (order is None):
        raise ValueError("give exactly one of tau (numeric) or order (series)")
    items = W.as_dict()
    if tau is not None:
        with mp.workdps(_working_dps(dps) + 5):
            x = jacobi_theta(3, 2 * mpf(tau), dps=mp.dps)
            y = jacobi_theta(2, 2 * mpf(tau), dps=mp.dps)
            value = mpmath.fsum(a * x ** (W.n - w) * y**w for w, a in items.items())
        return +value
    if order <= 0:
        raise ValueError("truncation order must be positive")
    X = theta3_series(order, scale=2)
    Y = theta2_series(order, scale=2)
    x_pows = [QSeries((1,) + (0,) * (order - 1))]
    y_pows = [QSeries((1,) + (0,) * (order - 1))]
    for _ in range(W.n):
        x_pows.append(x_pows[-1] * X)
        y_pows.append(y_pows[-1] * Y)
    total = QSeries((0,) * order)
    for w, a in items.items():
        total = total + a * (x_pows[W.n - w] * y_pows[w])
    if not any(total.coefficients):
        raise ValueError(
            f"truncation order {order} is too small to contain any nonzero term"
        )
    return total


def _shell_counts(offset: Sequence[int], base: int, bound: int) -> dict[int, int]:
    """Count vectors x in offset + base*Z^n by squared norm, for norms <= bound."""
    per_coord = []
    for u in offset:
        values = []
        # all x = u + base*z with x^2 <= bound
        z_lo = -((int(bound**0.5) + abs(u)) // base) - 1
        z_hi = (int(bound**0.5) + abs(u)) // base + 1
        for z in range(z_lo, z_hi + 1):
            x = u + base * z
            if x * x <= bound:
                values.append(x * x)
        per_coord.append(sorted(values))
    counts = {0: 1}
    for values in per_coord:
        nxt: dict[int, int] = {}
        for s, c in counts.items():
            for v in values:
                if s + v > bound:
                    break
                nxt[s + v] = nxt.get(s + v, 0) + c
        counts = nxt
    return counts


def theta_periodic_packing(
    scale_sq,
    translates: Sequence[Sequence[int]],
    base: int,
    max_norm,
    distance_invariant: bool = True,
) -> QSeries:
    """Exact theta series of the periodic packing sqrt(scale_sq) * (U + base*Z^n).

    ``scale_sq`` is the (rational) square of the scaling factor, so
    Construction A uses ``Fraction(1, 2)``.  Points are enumerated shell by
    shell up to squared norm ``max_norm`` (after scaling).  With
    ``distance_invariant`` the series is the sum over translates of the
    shells of ``base*Z^n + u_j - u_1``; otherwise the average over all ordered
    translate pairs is returned, which can have fractional coefficients.
    """
    scale_sq = Fraction(scale_sq)
    max_norm = Fraction(max_norm)
    if scale_sq <= 0:
        raise ValueError("scale must be positive")
    if max_norm < 0:
        raise ValueError("max_norm must be nonnegative")
    vecs = [tuple(int(v) for v in u) for u in translates]
    if not vecs:
        raise ValueError("need at least one translate")
    n = len(vecs[0])
    if any(len(u) != n for u in vecs):
        raise ValueError("translates must share one dimension")
    residues = [tuple(v % base for v in u) for u in vecs]
    if len(set(residues)) != len(residues):
        raise ValueError("translates are not distinct modulo the base lattice")
    if (2 * scale_sq).denominator != 1:
        # every integer norm must land on the half-integer grid
        raise ValueError("scale_sq * integer norms must be multiples of 1/2")
    bound = int(max_norm / scale_sq)
    order = int(2 * max_norm) + 1

    def shells(diff):
        return _shell_counts(diff, base, bound)

    totals: dict[int, Fraction | int] = {}
    if distance_invariant:
        ref = vecs[0] if (0,) * n not in vecs else (0,) * n
        pairs = [(u, ref) for u in vecs]
        weight = 1
    else:
        pairs = list(itertools.product(vecs, vecs))
        weight = Fraction(1, len(vecs))
    for u, v in pairs:
        diff = [a - b for a, b in zip(u, v)]
        for norm, c in shells(diff).items():
            totals[norm] = totals.get(norm, 0) + weight * c
    terms = {}
    for norm, c in totals.items():
        k = 2 * scale_sq * norm
        c = Fraction(c)
        terms[int(k)] = c.numerator if c.denominator == 1 else c
    return QSeries.from_exponents(terms, order)
