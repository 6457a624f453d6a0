import math

import pytest

from pythmod.counting import (
    CountConfig,
    count_box_exact,
    count_equation_box,
    count_pythagorean,
    count_smoothed,
    dual_triple_count,
    predict_main_term,
    r2,
    transition_check,
)
from pythmod.errors import RangeViolation, SmallPrime, TooLarge
from pythmod.padic import PrimePowerModulus
from pythmod.weights import gaussian

W1 = gaussian(1.0)


def cfg(p, n, N, **kw):
    return CountConfig(PrimePowerModulus(p, n), float(N), kw.pop("weight", W1), **kw)


def test_small_prime_rejected():
    for p in (3, 5):
        with pytest.raises(SmallPrime):
            cfg(p, 3, 100)


def test_config_validation():
    with pytest.raises(ValueError):
        cfg(7, 2, 0.5)
    with pytest.raises(ValueError):
        cfg(7, 2, 10, method="fft")
    with pytest.raises(ValueError):
        cfg(7, 2, 10, cutoff=1.0)  # below the 1e-12 truncation radius


def test_predict_main_term_examples():
    got = predict_main_term(cfg(7, 6, 3545))
    assert got == pytest.approx(24 / 49 * 3545**3 / 117649, rel=1e-12)
    assert got == pytest.approx(1.8547e5, rel=1e-3)
    got13 = predict_main_term(cfg(13, 4, 1000))
    assert got13 == pytest.approx(8 * 12 / 169 * 1e9 / 28561, rel=1e-12)


def test_predict_main_term_scaling_laws():
    base = predict_main_term(cfg(7, 3, 50))
    assert predict_main_term(cfg(7, 3, 100)) == pytest.approx(8 * base, rel=1e-12)
    assert predict_main_term(cfg(7, 4, 50)) == pytest.approx(base / 7, rel=1e-12)
    scaled = predict_main_term(cfg(7, 3, 50, weight=gaussian(2.0), cutoff=6.0))
    assert scaled == pytest.approx(8 * base, rel=1e-12)  # mass s enters cubed


@pytest.mark.parametrize(
    "p,n,N",
    [(7, 1, 3), (7, 2, 10), (7, 3, 25), (11, 2, 20), (13, 1, 8)],
)
def test_methods_agree(p, n, N):
    a = count_smoothed(cfg(p, n, N, method="triple-loop")).measured_T
    b = count_smoothed(cfg(p, n, N, method="sqrt-bucket")).measured_T
    assert b == pytest.approx(a, rel=1e-6)


def test_smoothed_report_fields():
    rep = count_smoothed(cfg(7, 2, 10))
    assert rep.q == 49 and rep.method == "sqrt-bucket"
    assert rep.ratio == pytest.approx(rep.measured_T / rep.predicted_T0)
    assert rep.nu == pytest.approx(math.log(10) / math.log(49))
    assert rep.seconds >= 0
    d = rep.to_dict()
    assert d["measured_T"] == rep.measured_T


def test_smoothed_vanishing_weight():
    # scale so small that every unit point of the box carries no weight
    rep = count_smoothed(cfg(7, 1, 3, weight=gaussian(0.01)))
    assert rep.measured_T <= 1e-12


def test_thread_count_does_not_change_floats():
    base = count_smoothed(cfg(7, 3, 40)).measured_T
    for threads in (1, 2, 4):
        got = count_smoothed(cfg(7, 3, 40, threads=threads)).measured_T
        assert got == base  # bitwise identical reduction
    tl = count_smoothed(cfg(7, 2, 10, method="triple-loop")).measured_T
    tl4 = count_smoothed(cfg(7, 2, 10, method="triple-loop", threads=4)).measured_T
    assert tl == tl4


def test_triple_loop_gate():
    with pytest.raises(TooLarge):
        count_smoothed(cfg(7, 2, 10**4, method="triple-loop"))


def _box_brute(p, n, N):
    q = p**n
    total = 0
    for x1 in range(-N, N + 1):
        if x1 % p == 0:
            continue
        for x2 in range(-N, N + 1):
            if x2 % p == 0:
                continue
            s = x1 * x1 + x2 * x2
            for x3 in range(-N, N + 1):
                if x3 % p == 0:
                    continue
                if (s - x3 * x3) % q == 0:
                    total += 1
    return total


def test_count_box_exact_examples():
    m49 = PrimePowerModulus(7, 2)
    assert count_box_exact(m49, 4) == 0
    got = count_box_exact(m49, 10)
    assert got == _box_brute(7, 2, 10) == 104  # frozen from the brute oracle
    assert count_box_exact(PrimePowerModulus(7, 1), 0) == 0


@pytest.mark.parametrize("p,n,N", [(7, 2, 17), (7, 3, 30), (7, 4, 50), (11, 2, 21)])
def test_count_box_exact_matches_brute(p, n, N):
    assert count_box_exact(PrimePowerModulus(p, n), N) == _box_brute(p, n, N)


def test_transition_examples():
    res = transition_check(PrimePowerModulus(7, 6), 200)
    assert res.equal and res.congruence_count == res.equation_count == 1280
    res = transition_check(PrimePowerModulus(7, 2), 4)
    assert res == (0, 0, True)
    with pytest.raises(RangeViolation):
        transition_check(PrimePowerModulus(7, 2), 10)  # 10 >= sqrt(24.5)


def _r2_brute(m):
    count = 0
    a = 0
    while a * a <= m:
        b2 = m - a * a
        b = math.isqrt(b2)
        if b * b == b2:
            for aa in ({a, -a} if a else {0}):
                for bb in ({b, -b} if b else {0}):
                    count += 1
        a += 1
    return count


def test_r2_examples():
    assert r2(0) == 1
    assert r2(25) == 12
    assert r2(3) == 0
    assert r2(-4) == 0


def test_r2_brute_oracle_full_range():
    for m in range(0, 10001):
        assert r2(m) == _r2_brute(m), m


def _pyth_brute(N):
    count = 0
    for x3 in range(-N, N + 1):
        for x1 in range(-N, N + 1):
            b2 = x3 * x3 - x1 * x1
            if b2 < 0:
                continue
            b = math.isqrt(b2)
            if b * b == b2:
                count += 1 if b == 0 else 2
    return count


def test_count_pythagorean_examples():
    assert count_pythagorean(0) == 1
    assert count_pythagorean(5) == 57


def test_count_pythagorean_brute_oracle():
    for N in (0, 1, 2, 3, 5, 17, 100, 345, 500):
        assert count_pythagorean(N) == _pyth_brute(N), N


def test_count_pythagorean_monotone():
    values = [count_pythagorean(N) for N in range(0, 120, 7)]
    assert values == sorted(values)


def test_count_pythagorean_axis_decomposition():
    # total = origin + 8N axis triples + nondegenerate equation count
    for N in (5, 20, 60):
        assert count_pythagorean(N) == 1 + 8 * N + count_equation_box(N)


def test_dual_triple_count_examples():
    assert dual_triple_count(5, 10**6) == 56  # pythagorean(5) minus the origin
    assert dual_triple_count(5, 10**6) == count_pythagorean(5) - 1
    assert dual_triple_count(0, 7) == 0
    # congruence solutions strictly exceed equation solutions for small moduli
    assert dual_triple_count(3, 7) > count_pythagorean(3) - 1


def _dual_brute(L, mod):
    total = 0
    for l1 in range(-L, L + 1):
        for l2 in range(-L, L + 1):
            for l3 in range(-L, L + 1):
                if (l1, l2, l3) == (0, 0, 0):
                    continue
                if (l1 * l1 + l2 * l2 - l3 * l3) % mod == 0:
                    total += 1
    return total


@pytest.mark.parametrize(
    "L,mod", [(3, 7), (4, 49), (5, 25), (6, 11), (2, 1), (5, 51), (3, 19)]
)
def test_dual_triple_count_brute(L, mod):
    # (5, 51) and (3, 19) exercise the equation shortcut: modulus > 2 L^2
    assert dual_triple_count(L, mod) == _dual_brute(L, mod)


def test_dual_triple_count_gate():
    with pytest.raises(TooLarge):
        dual_triple_count(10**4 + 1, 7)
