"""Secrecy function and secrecy gains of Construction A lattices.

Everything is driven by the weight enumerator of the underlying code.  The
workhorse is the polynomial

    f(t) = sum_w A_w (1 + t)^((n - w)/2) (1 - t)^(w/2),   0 < t < 1,

in terms of which the secrecy function reads Xi(tau) = 2^(n/2) / f(t(tau)).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import mpmath
import numpy as np
import sympy
from mpmath import mp, mpf

from .codes import WeightEnumerator, is_formally_self_dual
from .exceptions import DomainError, NormalizationError, PreconditionError
from .theta import DEFAULT_DPS, jacobi_theta, t_of_tau, tau_of_t, theta_construction_a

INV_SQRT2 = 1 / math.sqrt(2)


def _dps(dps):
    return max(mp.dps, dps or DEFAULT_DPS)


def _check_t(t):
    if not 0 < t < 1:
        raise DomainError(f"t must lie strictly inside (0, 1), got {t}")


def f_code(W: WeightEnumerator, t, dps: int | None = None):
    """High-precision value of f(t) for the code with enumerator ``W``."""
    with mp.workdps(_dps(dps) + 5):
        t = mpf(t)
        _check_t(t)
        a, b = mpmath.sqrt(1 + t), mpmath.sqrt(1 - t)
        value = mpmath.fsum(A * a ** (W.n - w) * b**w for w, A in W.as_dict().items())
    return +value


def log_f_code(W: WeightEnumerator, t) -> float:
    """log f(t) in double precision, safe for long codes."""
    t = float(t)
    _check_t(t)
    la, lb = math.log1p(t) / 2, math.log1p(-t) / 2
    logs = [math.log(A) + (W.n - w) * la + w * lb for w, A in W.as_dict().items()]
    top = max(logs)
    return top + math.log(math.fsum(math.exp(x - top) for x in logs))


def _require_unit_volume(W: WeightEnumerator):
    if W.size * W.size != 2**W.n:
        raise NormalizationError(
            f"code size {W.size} differs from 2^(n/2) for n = {W.n}; "
            "the lattice does not have unit volume"
        )


def secrecy_function(W: WeightEnumerator, tau, dps: int | None = None):
    """Xi(tau) for the unit-volume lattice (1/sqrt 2)(C + 2Z^n)."""
    _require_unit_volume(W)
    with mp.workdps(_dps(dps) + 5):
        t = t_of_tau(tau, dps=mp.dps)
        value = mpf(2) ** (mpf(W.n) / 2) / f_code(W, t, dps=mp.dps)
    return +value


def log_secrecy_function(W: WeightEnumerator, tau) -> float:
    _require_unit_volume(W)
    t = t_of_tau(tau)
    return W.n * math.log(2) / 2 - log_f_code(W, t)


def secrecy_function_from_theta(W: WeightEnumerator, tau, dps: int | None = None):
    """Xi via theta series directly, for any code size.

    The reference lattice is nu Z^n with nu chosen so both lattices share the
    same volume 2^(n/2) / |C|.
    """
    with mp.workdps(_dps(dps) + 5):
        tau = mpf(tau)
        nu_sq = (mpf(2) ** (mpf(W.n) / 2) / W.size) ** (mpf(2) / W.n)
        ref = jacobi_theta(3, nu_sq * tau, dps=mp.dps) ** W.n
        value = ref / theta_construction_a(W, tau=tau, dps=mp.dps)
    return +value


def _golden_min(func, a, b, tol):
    """Golden-section search for a minimum of ``func`` on [a, b]."""
    invphi = (mpmath.sqrt(5) - 1) / 2
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = func(c), func(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = func(d)
    x = (a + b) / 2
    return x, func(x)


@dataclass(frozen=True)
class StrongGain:
    xi: object
    t_star: object
    tau_star: object
    conjecture_verified: bool
    constant: bool = False


def strong_secrecy_gain(W: WeightEnumerator, grid: int = 1024, tol=mpf("1e-14"),
                        dps: int | None = None) -> StrongGain:
    """Maximum of Xi over tau > 0, found by minimizing f on (0, 1).

    A uniform grid locates every basin of f, golden-section search refines
    each one, and the smallest refined value wins.  ``conjecture_verified``
    reports whether the maximizer sits at t = 1/sqrt 2 (tau = 1).
    """
    _require_unit_volume(W)
    with mp.workdps(_dps(dps) + 5):
        f = lambda t: f_code(W, t, dps=mp.dps)
        ts = [mpf(i) / (grid + 1) for i in range(1, grid + 1)]
        vals = [f(t) for t in ts]
        lo, hi = min(vals), max(vals)
        target = 1 / mpmath.sqrt(2)
        if hi - lo <= mpf(10) ** (-mp.dps + 15) * hi:
            # f is constant, e.g. for sums of repetition codes
            xi = mpf(2) ** (mpf(W.n) / 2) / f(target)
            return StrongGain(+xi, +target, mpf(1), True, constant=True)
        best = None
        for i, v in enumerate(vals):
            left = vals[i - 1] if i > 0 else mpmath.inf
            right = vals[i + 1] if i + 1 < grid else mpmath.inf
            if v <= left and v <= right:
                a = ts[i - 1] if i > 0 else ts[0] / 2
                b = ts[i + 1] if i + 1 < grid else (ts[-1] + 1) / 2
                t, ft = _golden_min(f, a, b, tol)
                if best is None or ft < best[1]:
                    best = (t, ft)
        t_star, f_star = best
        xi = mpf(2) ** (mpf(W.n) / 2) / f_star
        verified = abs(t_star - target) < mpf("1e-8")
        tau_star = mpf(1) if verified else tau_of_t(t_star, dps=mp.dps)
        return StrongGain(+xi, +t_star, +tau_star, bool(verified))


def weak_secrecy_gain(W: WeightEnumerator, dps: int | None = None):
    """Xi at tau = 1, i.e. 2^(n/2) / f(1/sqrt 2)."""
    _require_unit_volume(W)
    with mp.workdps(_dps(dps) + 5):
        value = mpf(2) ** (mpf(W.n) / 2) / f_code(W, 1 / mpmath.sqrt(2), dps=mp.dps)
    return +value


@dataclass(frozen=True)
class SymmetryResult:
    taus: tuple
    residuals: tuple
    max_residual: object
    nu: object


def symmetry_check(W: WeightEnumerator, taus, nu=None, dps: int | None = None) -> SymmetryResult:
    """Relative gap |Xi(tau / nu^2) - Xi(1 / (nu^2 tau))| / Xi(tau / nu^2).

    Xi is computed straight from theta series, so the check is independent
    of the t-parametrization.  ``nu`` defaults to the Construction A scale
    (2^(n/2) / |C|)^(1/n).
    """
    with mp.workdps(_dps(dps) + 5):
        if nu is None:
            nu = (mpf(2) ** (mpf(W.n) / 2) / W.size) ** (mpf(1) / W.n)
        nu_sq = mpf(nu) ** 2
        residuals = []
        for tau in taus:
            tau = mpf(tau)
            if not tau > 0:
                raise DomainError(f"tau must be positive, got {tau}")
            a = secrecy_function_from_theta(W, tau / nu_sq, dps=mp.dps)
            b = secrecy_function_from_theta(W, 1 / (nu_sq * tau), dps=mp.dps)
            residuals.append(abs(a - b) / a)
        return SymmetryResult(tuple(taus), tuple(residuals), max(residuals), nu)


# ---------------------------------------------------------------------------
# polynomial form for even formally self-dual codes

def _poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _poly_pow(p, e):
    out = [1]
    for _ in range(e):
        out = _poly_mul(out, p)
    return out


def f_polynomial(W: WeightEnumerator) -> list[int]:
    """Integer coefficients of f(t) in t (even codes of even length only)."""
    if W.n % 2 or not W.is_even():
        raise PreconditionError("f is a polynomial in t only for even codes of even length")
    out = [0] * (W.n // 2 + 1)
    for w, A in W.as_dict().items():
        term = _poly_mul(_poly_pow([1, 1], (W.n - w) // 2), _poly_pow([1, -1], w // 2))
        for i, c in enumerate(term):
            out[i] += A * c
    return out


def _solve_exact(matrix, rhs):
    """Least-structure exact solve of an overdetermined consistent system."""
    rows = [list(map(Fraction, r)) + [Fraction(b)] for r, b in zip(matrix, rhs)]
    ncols = len(matrix[0])
    pivot_row = 0
    pivots = []
    for col in range(ncols):
        sel = next((r for r in range(pivot_row, len(rows)) if rows[r][col] != 0), None)
        if sel is None:
            continue
        rows[pivot_row], rows[sel] = rows[sel], rows[pivot_row]
        pv = rows[pivot_row][col]
        rows[pivot_row] = [x / pv for x in rows[pivot_row]]
        for r in range(len(rows)):
            if r != pivot_row and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[pivot_row])]
        pivots.append(col)
        pivot_row += 1
    for r in range(pivot_row, len(rows)):
        if rows[r][-1] != 0:
            return None
    solution = [Fraction(0)] * ncols
    for r, col in enumerate(pivots):
        solution[col] = rows[r][-1]
    return solution


@dataclass(frozen=True)
class GleasonCoefficients:
    """f(t) / 2^(n/2) = sum_r coefficients[r] * h^r with h = t^4 - t^2 + 1."""

    n: int
    coefficients: tuple

    def evaluate(self, h):
        return sum(a * h**r for r, a in enumerate(self.coefficients))


def gleason_decompose(W: WeightEnumerator) -> GleasonCoefficients:
    """Exact expansion of f / 2^(n/2) in powers of h = t^4 - t^2 + 1."""
    if not W.is_even():
        raise PreconditionError("the expansion needs an even code")
    if not is_formally_self_dual(W).is_fsd:
        raise PreconditionError("the expansion needs a formally self-dual code")
    poly = f_polynomial(W)
    scale = Fraction(2) ** (W.n // 2)
    target = [Fraction(c) / scale for c in poly]
    degree = W.n // 8
    basis = [_poly_pow([1, 0, -1, 0, 1], r) for r in range(degree + 1)]
    matrix = [[(b[j] if j < len(b) else 0) for b in basis] for j in range(len(target))]
    coeffs = _solve_exact(matrix, target)
    if coeffs is None:
        raise PreconditionError("f has no expansion in powers of h (nonzero residual)")
    if sum(coeffs) != 1:
        raise PreconditionError(f"coefficients sum to {sum(coeffs)} instead of 1")
    return GleasonCoefficients(W.n, tuple(coeffs))


@dataclass(frozen=True)
class SufficientVerdict:
    applicable: bool
    certified: bool | None
    minimum: object = None
    argmin: object = None
    derivative_coefficients: tuple = ()


def sufficient_condition_check(coeffs: GleasonCoefficients) -> SufficientVerdict:
    """Exact test that p(h) = sum_r r a_r h^(r-1) stays positive on [3/4, 1].

    Positivity makes f decreasing in h there, which pins the maximum of the
    secrecy function at tau = 1.  Codes of length below 8 have no h-dependence
    and the test does not apply.
    """
    a = coeffs.coefficients
    if len(a) < 2:
        return SufficientVerdict(False, None)
    h = sympy.Symbol("h")
    p_coeffs = tuple(r * a[r] for r in range(1, len(a)))
    p = sum(sympy.Rational(c.numerator, c.denominator) * h ** (r - 1)
            for r, c in enumerate(p_coeffs, start=1))
    p = sympy.Poly(p, h)
    lo, hi = sympy.Rational(3, 4), sympy.Integer(1)
    candidates = [lo, hi]
    dp = p.diff(h)
    if not dp.is_zero:
        candidates += [r for r in dp.real_roots() if lo < r < hi]
    values = [(p.eval(c), c) for c in candidates]
    minimum, argmin = min(values, key=lambda v: sympy.N(v[0], 50))
    positive = p.count_roots(lo, hi) == 0 and p.eval(lo) > 0
    if minimum.is_Rational:
        minimum = Fraction(int(minimum.p), int(minimum.q))
    else:
        minimum = mpf(str(sympy.N(minimum, 50)))
    if argmin.is_Rational:
        argmin = Fraction(int(argmin.p), int(argmin.q))
    else:
        argmin = mpf(str(sympy.N(argmin, 50)))
    return SufficientVerdict(True, bool(positive), minimum, argmin, p_coeffs)


# ---------------------------------------------------------------------------
# derivative sign pattern

@dataclass(frozen=True)
class DerivativeVerdict:
    status: str
    sign_changes: tuple
    xi: object = None


def _f_prime_terms(W, t):
    t = np.asarray(t, dtype=float)
    total = np.zeros_like(t)
    scale = np.zeros_like(t)
    for w, A in W.as_dict().items():
        a, b = (W.n - w) / 2, w / 2
        term = np.zeros_like(t)
        if a:
            term += a * (1 + t) ** (a - 1) * (1 - t) ** b
        if b:
            term -= b * (1 + t) ** a * (1 - t) ** (b - 1)
        total += float(A) * term
        scale += float(A) * np.abs(term)
    return total, scale


def f_prime(W: WeightEnumerator, t, dps: int | None = None):
    with mp.workdps(_dps(dps) + 5):
        t = mpf(t)
        _check_t(t)
        total = mpf(0)
        for w, A in W.as_dict().items():
            a, b = mpf(W.n - w) / 2, mpf(w) / 2
            if a:
                total += A * a * (1 + t) ** (a - 1) * (1 - t) ** b
            if b:
                total -= A * b * (1 + t) ** a * (1 - t) ** (b - 1)
    return +total


def derivative_sign_analysis(W: WeightEnumerator, grid: int = 4096) -> DerivativeVerdict:
    """Locate the sign changes of f' on (0, 1).

    Status is ``"minimum-at-1/sqrt2"`` when f' changes sign exactly once,
    from negative to positive, at t = 1/sqrt 2; ``"constant"`` when f' is
    numerically zero; ``"other"`` otherwise.
    """
    _require_unit_volume(W)
    ts = np.arange(1, grid + 1) / (grid + 1)
    vals, scale = _f_prime_terms(W, ts)
    if np.all(np.abs(vals) <= 1e-9 * scale):
        return DerivativeVerdict("constant", ())
    signs = np.where(np.abs(vals) <= 1e-12 * scale, 0, np.sign(vals)).astype(int)
    changes = []
    last_idx = None
    for i, s in enumerate(signs):
        if s == 0:
            continue
        if last_idx is not None and s != signs[last_idx]:
            lo, hi = mpf(ts[last_idx]), mpf(ts[i])
            with mp.workdps(DEFAULT_DPS):
                s_lo = mpmath.sign(f_prime(W, lo))
                while hi - lo > mpf("1e-20"):
                    mid = (lo + hi) / 2
                    if mpmath.sign(f_prime(W, mid)) == s_lo:
                        lo = mid
                    else:
                        hi = mid
                changes.append((+(lo + hi) / 2, int(signs[last_idx]), int(s)))
        last_idx = i
    target = INV_SQRT2
    if len(changes) == 1 and changes[0][1] < 0 < changes[0][2] and abs(float(changes[0][0]) - target) < 1e-6:
        t0 = changes[0][0]
        with mp.workdps(DEFAULT_DPS):
            xi = mpf(2) ** (mpf(W.n) / 2) / f_code(W, t0)
        return DerivativeVerdict("minimum-at-1/sqrt2", tuple(c[0] for c in changes), xi)
    return DerivativeVerdict("other", tuple(c[0] for c in changes))


# ---------------------------------------------------------------------------
# necessary-condition score

def necessary_condition_score(W: WeightEnumerator) -> Fraction:
    """sum_w A_w / (w + 1); among equal-length FSD codes a higher secrecy
    function everywhere forces a lower score."""
    return sum((Fraction(A, w + 1) for w, A in W.as_dict().items()), Fraction(0))


def phi_code(W: WeightEnumerator, u) -> float:
    """sum_w A_w u^w; its integral over (0, 1) is the score.

    With u = sqrt((1 - t)/(1 + t)), f(t) = (1 + t)^(n/2) phi(u), so a smaller
    phi everywhere means a larger secrecy function everywhere.
    """
    return sum(A * u**w for w, A in W.as_dict().items())


@dataclass(frozen=True)
class ScoreComparison:
    names: tuple
    scores: tuple
    order: tuple
    dominates: dict = field(default_factory=dict)


def compare_scores(named_enumerators, grid: int = 512) -> ScoreComparison:
    """Rank codes by score and record pointwise dominance of phi on (0, 1).

    ``dominates[(a, b)]`` is true when phi_a <= phi_b on the whole grid.
    """
    names = tuple(name for name, _ in named_enumerators)
    Ws = [W for _, W in named_enumerators]
    if len({W.n for W in Ws}) > 1:
        raise ValueError("codes must share one length")
    scores = tuple(necessary_condition_score(W) for W in Ws)
    order = tuple(names[i] for i in sorted(range(len(names)), key=lambda i: scores[i]))
    us = np.arange(1, grid + 1) / (grid + 1)
    phis = [np.array([phi_code(W, float(u)) for u in us]) for W in Ws]
    dom = {}
    for i, a in enumerate(names):
        for j, b in enumerate(names):
            if i != j:
                dom[(a, b)] = bool(np.all(phis[i] <= phis[j] * (1 + 1e-12)))
    return ScoreComparison(names, scores, order, dom)


# ---------------------------------------------------------------------------
# report

@dataclass
class SecrecyReport:
    name: str
    n: int
    size: int
    is_fsd: bool
    weak_gain: float
    strong_gain: float
    t_star: float
    tau_star: float
    conjecture_verified: bool
    status: str
    sufficient_condition: bool | None
    derivative_status: str
    necessary_score: str
    symmetry_max_residual: float

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)


def analyze(W: WeightEnumerator, name: str = "", symmetry_taus=(0.25, 0.5, 2.0, 4.0)) -> SecrecyReport:
    """Run every secrecy diagnostic on a unit-volume Construction A lattice.

    ``status`` is ``"certified"`` when the exact sufficient condition holds,
    ``"grid-verified"`` when numerical search puts the maximum at tau = 1,
    and ``"inconclusive"`` otherwise.
    """
    _require_unit_volume(W)
    fsd = is_formally_self_dual(W).is_fsd
    strong = strong_secrecy_gain(W)
    weak = weak_secrecy_gain(W)
    sufficient = None
    if fsd and W.is_even():
        verdict = sufficient_condition_check(gleason_decompose(W))
        sufficient = verdict.certified if verdict.applicable else None
    deriv = derivative_sign_analysis(W)
    if sufficient:
        status = "certified"
    elif strong.conjecture_verified and deriv.status in ("minimum-at-1/sqrt2", "constant"):
        status = "grid-verified"
    else:
        status = "inconclusive"
    sym = symmetry_check(W, symmetry_taus)
    return SecrecyReport(
        name=name, n=W.n, size=W.size, is_fsd=fsd,
        weak_gain=float(weak), strong_gain=float(strong.xi),
        t_star=float(strong.t_star), tau_star=float(strong.tau_star),
        conjecture_verified=strong.conjecture_verified, status=status,
        sufficient_condition=sufficient, derivative_status=deriv.status,
        necessary_score=str(necessary_condition_score(W)),
        symmetry_max_residual=float(sym.max_residual),
    )


def secrecy_curve(W: WeightEnumerator, taus_db) -> list[tuple[float, float]]:
    """(tau in dB, Xi) pairs, with tau = 10^(tau_db / 10)."""
    return [(float(d), float(secrecy_function(W, mpf(10) ** (mpf(d) / 10)))) for d in taus_db]


def curve_to_csv(points) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["tau_db", "xi"])
    for d, x in points:
        writer.writerow([repr(d), repr(x)])
    return buf.getvalue()
