"""Property-based checks of the algebraic invariants."""

from fractions import Fraction

from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st
from mpmath import mp, mpf

from conftest import brute_force_dual_enumerator
from secrecygain.codes import (
    LinearCode,
    WeightEnumerator,
    direct_sum,
    gf2_rank,
    is_formally_self_dual,
    macwilliams_transform,
)
from secrecygain.convcode import is_catastrophic, poly_degree, tailbite
from secrecygain.exceptions import ConstructionError
from secrecygain.secrecy import necessary_condition_score, secrecy_function
from secrecygain.theta import QSeries, t_of_tau, theta_construction_a, theta_periodic_packing
from secrecygain.wiretap import check_unique_decomposition


@st.composite
def linear_codes(draw, max_n=10):
    n = draw(st.integers(2, max_n))
    k = draw(st.integers(1, n))
    rows = draw(st.lists(st.integers(1, 2**n - 1), min_size=k, max_size=k))
    assume(gf2_rank(rows) == k)
    return LinearCode(n, tuple(rows))


@given(linear_codes())
@settings(max_examples=40, deadline=None)
def test_macwilliams_is_dual(code):
    dual = macwilliams_transform(code.weight_enumerator(), code.size)
    assert dual == brute_force_dual_enumerator(code.n, code.rows)


@given(linear_codes(max_n=8))
@settings(max_examples=30, deadline=None)
def test_macwilliams_is_an_involution(code):
    W = code.weight_enumerator()
    dual = macwilliams_transform(W, W.size)
    assert macwilliams_transform(dual, dual.size) == W


@given(linear_codes(max_n=8))
@settings(max_examples=30, deadline=None)
def test_enumerator_sums_to_size(code):
    W = code.weight_enumerator()
    assert sum(W.counts) == code.size == 2**code.k


@given(linear_codes(max_n=6), linear_codes(max_n=6))
@settings(max_examples=20, deadline=None)
def test_direct_sum_multiplies(a, b):
    assert direct_sum([a, b]).weight_enumerator() == a.weight_enumerator() * b.weight_enumerator()


@given(linear_codes(max_n=6))
@settings(max_examples=20, deadline=None)
def test_fsd_iff_transform_fixes(code):
    W = code.weight_enumerator()
    fsd = is_formally_self_dual(W).is_fsd
    expected = W.size**2 == 2**W.n and macwilliams_transform(W, W.size) == W
    assert fsd == expected


@given(st.lists(st.integers(0, 15), min_size=1, max_size=6, unique=True))
@settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.too_slow])
def test_theta_series_matches_brute_force_for_linear(rows):
    code = LinearCode(4, tuple(r for r in _independent(rows)) or (0b1111,))
    from secrecygain.codes import word_to_bits

    translates = [word_to_bits(w, 4) for w in code.codewords()]
    brute = theta_periodic_packing(Fraction(1, 2), translates, 2, 6)
    assert theta_construction_a(code.weight_enumerator(), order=13) == brute


def _independent(rows):
    out = []
    for r in rows:
        if r and gf2_rank(out + [r]) > len(out):
            out.append(r)
    return out


@given(
    st.lists(st.integers(-3, 3), min_size=4, max_size=12),
    st.lists(st.integers(-3, 3), min_size=4, max_size=12),
)
def test_qseries_product_commutes(a, b):
    x, y = QSeries(tuple(a)), QSeries(tuple(b))
    assert x * y == y * x
    assert (x + y) * x == x * x + y * x


@given(st.floats(0.05, 20))
@settings(max_examples=25, deadline=None)
def test_t_is_increasing_and_bounded(tau):
    with mp.workdps(40):
        t1, t2 = t_of_tau(tau), t_of_tau(tau * 1.01)
        assert 0 < t1 < t2 < 1


@given(st.integers(1, 7), st.integers(1, 7), st.integers(4, 9))
@settings(max_examples=40, deadline=None)
def test_tailbiting_non_catastrophic_is_fsd(g1, g2, L):
    assume(not is_catastrophic(g1, g2))
    assume(L > max(poly_degree(g1), poly_degree(g2)))
    try:
        code = tailbite(g1, g2, L)
    except ConstructionError:
        return
    assert is_formally_self_dual(code.weight_enumerator()).is_fsd


@given(st.floats(0.1, 10))
@settings(max_examples=15, deadline=None)
def test_secrecy_symmetric_under_inversion(tau):
    W = WeightEnumerator.from_dict(16, {0: 1, 6: 112, 8: 30, 10: 112, 16: 1})
    with mp.workdps(50):
        a, b = secrecy_function(W, tau), secrecy_function(W, 1 / mpf(tau))
        assert abs(a - b) < mpf("1e-35") * a


@given(
    st.lists(st.integers(0, 15), min_size=1, max_size=4, unique=True),
    st.lists(st.integers(0, 15), min_size=1, max_size=4, unique=True),
)
@settings(max_examples=50, deadline=None)
def test_valid_decomposition_tiles_a(b_words, c_words):
    B = sorted(set(b_words) | {0})
    C = sorted(set(c_words) | {0})
    sums = {b ^ c for b in B for c in C}
    result = check_unique_decomposition(sorted(sums), B, C)
    if result.valid:
        assert len(sums) == len(B) * len(C)
    else:
        assert result.witness in sums


@given(linear_codes(max_n=8))
@settings(max_examples=20, deadline=None)
def test_score_bounds(code):
    W = code.weight_enumerator()
    score = necessary_condition_score(W)
    assert Fraction(W.size, W.n + 1) <= score <= W.size
