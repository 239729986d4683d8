from fractions import Fraction

import mpmath
import pytest
from mpmath import mp, mpf

from secrecygain.codes import WeightEnumerator
from secrecygain.exceptions import DomainError, NormalizationError, PreconditionError
from secrecygain.secrecy import (
    analyze,
    compare_scores,
    curve_to_csv,
    derivative_sign_analysis,
    f_code,
    f_polynomial,
    gleason_decompose,
    log_f_code,
    log_secrecy_function,
    necessary_condition_score,
    secrecy_curve,
    secrecy_function,
    secrecy_function_from_theta,
    strong_secrecy_gain,
    sufficient_condition_check,
    symmetry_check,
    weak_secrecy_gain,
)
from secrecygain.theta import t_of_tau


def test_f_polynomial_nordstrom_robinson(enumerators):
    # -64(-4 + 8t^2 - 5t^4 - 6t^6 + 3t^8)
    assert f_polynomial(enumerators["n16"]) == [256, 0, -512, 0, 320, 0, 384, 0, -192]


def test_f_polynomial_c20(enumerators):
    # -64(5t^8 - 10t^6 - 35t^4 + 40t^2 - 16)
    expected = [1024, 0, -2560, 0, 2240, 0, 640, 0, -320] + [0, 0]
    assert f_polynomial(enumerators["c20"]) == expected


def test_f_domain(enumerators):
    with pytest.raises(DomainError):
        f_code(enumerators["h8"], 1)


def test_secrecy_function_via_t_matches_theta_route(enumerators):
    with mp.workdps(60):
        for key in ("633", "c12", "n16"):
            W = enumerators[key]
            for tau in (0.4, 1, 2.2):
                a = secrecy_function(W, tau)
                b = secrecy_function_from_theta(W, tau)
                assert abs(a - b) < mpf("1e-40") * a


def test_secrecy_times_f_is_constant(enumerators):
    W = enumerators["c20"]
    with mp.workdps(60):
        for tau in (0.3, 1.7):
            product = secrecy_function(W, tau) * f_code(W, t_of_tau(tau))
            assert abs(product - 2**10) < mpf("1e-40")


def test_normalization_required(non_fsd):
    W = WeightEnumerator.from_dict(4, {0: 1, 2: 1})
    with pytest.raises(NormalizationError):
        secrecy_function(W, 1)


@pytest.mark.parametrize(
    "key, expected",
    [("633", 1.172), ("h8", 4 / 3), ("c12", 1.657), ("n16", 2.2069), ("c18", 2.485), ("c20", 2.813)],
)
def test_strong_gain_values(enumerators, key, expected):
    gain = strong_secrecy_gain(enumerators[key])
    assert abs(float(gain.xi) - expected) < 1e-3
    assert gain.conjecture_verified


def test_extended_hamming_closed_form(enumerators):
    with mp.workdps(50):
        assert abs(weak_secrecy_gain(enumerators["h8"]) - mpf(4) / 3) < mpf("1e-40")


def test_repetition_code_is_flat(enumerators):
    gain = strong_secrecy_gain(enumerators["rep2"])
    assert gain.constant
    assert abs(float(gain.xi) - 1) < 1e-12


def test_weak_equals_strong_when_conjecture_holds(enumerators):
    for key in ("633", "n16", "c20"):
        W = enumerators[key]
        assert abs(float(strong_secrecy_gain(W).xi) - float(weak_secrecy_gain(W))) < 1e-12


def test_log_domain_matches_high_precision(enumerators):
    W = enumerators["c20"]
    with mp.workdps(50):
        ref = mpmath.log(f_code(W, mpf("0.3")))
    assert abs(log_f_code(W, 0.3) - float(ref)) < 1e-13
    assert abs(log_secrecy_function(W, 1) - float(mpmath.log(weak_secrecy_gain(W)))) < 1e-12


def test_symmetry_for_fsd_codes(enumerators):
    res = symmetry_check(enumerators["n16"], [0.3, 0.7, 1.5, 3])
    assert res.max_residual < mpf("1e-18")


def test_symmetry_broken_for_non_fsd(non_fsd):
    assert symmetry_check(non_fsd, [0.3, 0.7, 1.5, 3]).max_residual > 1e-3


def test_symmetry_scaled_non_unit_volume():
    # a [4,1] code: unit volume fails, yet symmetry holds around nu^-2
    W = WeightEnumerator.from_dict(2, {0: 1, 2: 1}) * WeightEnumerator.from_dict(2, {0: 1, 2: 1})
    assert symmetry_check(W, [0.5, 2]).max_residual < mpf("1e-30")


def test_gleason_18(enumerators):
    coeffs = gleason_decompose(enumerators["c18"])
    assert coeffs.coefficients == (Fraction(-29, 16), Fraction(27, 8), Fraction(-9, 16))
    verdict = sufficient_condition_check(coeffs)
    assert verdict.certified is True
    assert verdict.minimum == Fraction(9, 4)
    assert verdict.argmin == 1


def test_gleason_re_expansion(enumerators):
    for key in ("h8", "n16", "c18", "c20"):
        W = enumerators[key]
        coeffs = gleason_decompose(W)
        scale = Fraction(2) ** (W.n // 2)
        poly = f_polynomial(W)
        for t in (Fraction(1, 3), Fraction(2, 5), Fraction(7, 9)):
            h = t**4 - t**2 + 1
            direct = sum(Fraction(c) * t**i for i, c in enumerate(poly)) / scale
            assert coeffs.evaluate(h) == direct


def test_gleason_preconditions(enumerators, non_fsd):
    with pytest.raises(PreconditionError):
        gleason_decompose(enumerators["633"])
    with pytest.raises(PreconditionError):
        gleason_decompose(WeightEnumerator.from_dict(4, {0: 1, 2: 2, 4: 1}) * WeightEnumerator.from_dict(2, {0: 1}))


def test_sufficient_condition_not_applicable_below_8():
    W = WeightEnumerator.from_dict(2, {0: 1, 2: 1})
    assert not sufficient_condition_check(gleason_decompose(W)).applicable


def test_derivative_analysis(enumerators):
    for key in ("633", "c12", "n16", "c20"):
        W = enumerators[key]
        verdict = derivative_sign_analysis(W)
        assert verdict.status == "minimum-at-1/sqrt2"
        strong = strong_secrecy_gain(W)
        assert abs(verdict.sign_changes[0] - strong.t_star) < 1e-8
        assert abs(verdict.xi - strong.xi) < 1e-10
    assert derivative_sign_analysis(enumerators["rep2"]).status == "constant"


def test_necessary_score_direct_sums(enumerators):
    a = enumerators["rep2"] * enumerators["n16"]
    b = enumerators["633"] * enumerators["633"] * enumerators["633"]
    assert necessary_condition_score(a) < necessary_condition_score(b)
    cmp = compare_scores([("a", a), ("b", b)])
    assert cmp.order == ("a", "b")
    # the weight-2 word of the first code makes its phi larger near u = 0
    assert not cmp.dominates[("a", "b")]


def test_score_is_integral_of_phi(enumerators):
    from scipy.integrate import quad

    from secrecygain.secrecy import phi_code

    W = enumerators["c12"]
    value, _ = quad(lambda u: phi_code(W, u), 0, 1)
    assert abs(value - float(necessary_condition_score(W))) < 1e-10


def test_compare_scores_needs_equal_lengths(enumerators):
    with pytest.raises(ValueError):
        compare_scores([("x", enumerators["633"]), ("y", enumerators["h8"])])


def test_analyze_report(enumerators):
    rep = analyze(enumerators["c18"], "c18")
    assert rep.status == "certified"
    assert rep.sufficient_condition is True
    assert '"strong_gain"' in rep.to_json()
    assert analyze(enumerators["633"]).status == "grid-verified"


def test_curve_peak_at_zero_db(enumerators):
    points = secrecy_curve(enumerators["n16"], [d / 2 for d in range(-20, 21)])
    best = max(points, key=lambda p: p[1])
    assert best[0] == 0.0
    assert curve_to_csv(points).splitlines()[0] == "tau_db,xi"


def test_corpus_score_consistency():
    from secrecygain.codefile import load_corpus

    entries = [e for e in load_corpus() if is_fsd(e.weight_enumerator)]
    taus = [0.2, 0.5, 0.8, 1, 1.5, 3]
    curves = {e.name: [float(secrecy_function(e.weight_enumerator, t)) for t in taus] for e in entries}
    for a in entries:
        for b in entries:
            if a is b or a.weight_enumerator.n != b.weight_enumerator.n:
                continue
            if all(x >= y for x, y in zip(curves[a.name], curves[b.name])):
                assert necessary_condition_score(a.weight_enumerator) <= necessary_condition_score(b.weight_enumerator)


def test_corpus_derivative_agrees_with_search():
    from secrecygain.codefile import load_corpus

    for e in load_corpus():
        verdict = derivative_sign_analysis(e.weight_enumerator)
        strong = strong_secrecy_gain(e.weight_enumerator)
        assert verdict.status == "minimum-at-1/sqrt2"
        assert abs(verdict.sign_changes[0] - strong.t_star) < 1e-8


def is_fsd(W):
    from secrecygain.codes import is_formally_self_dual

    return is_formally_self_dual(W).is_fsd
