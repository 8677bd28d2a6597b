import json
import time

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from tauvalues.arith import primes_up_to
from tauvalues.diophantine import (
    DJCertificate,
    IdentityViolation,
    crt_incompatible,
    default_dj_pool,
    dj_exclude,
    fib_lucas_mod,
    find_norm_generator,
    generate_fm,
    genEVT_defective_check,
    is_11th_power_residue,
    search_eight_ell_power,
    search_two_ell_power,
    solve_p_squared_eq,
    taup4_point,
)
from tauvalues.tau import tau_prime_power


def test_fm_listed_polynomials():
    fm = generate_fm(4)
    assert fm[0].coeffs == (1,) and not fm[0].has_sqrt_y
    assert fm[1].coeffs == (1,) and fm[1].has_sqrt_y
    assert fm[2].coeffs == (1, -1)  # Y - X
    assert fm[3].coeffs == (1, -2)  # sqrt(Y) (Y - 2X)
    assert fm[4].coeffs == (1, -3, 1)  # Y^2 - 3XY + X^2
    assert str(fm[2]) == "Y - X"
    assert str(fm[4]) == "Y^2 - 3*X*Y + X^2"
    assert str(fm[3]) == "sqrt(Y)*(Y - 2*X)"
    assert str(fm[0]) == "1"
    with pytest.raises(ValueError):
        generate_fm(-1)


def test_fm_generating_function():
    # 1/(1 - s T + X T^2) with s = sqrt(Y), compared symbolically up to T^12
    X, s, T = sympy.symbols("X s T")
    series = sympy.series(1 / (1 - s * T + X * T**2), T, 0, 13).removeO()
    poly = sympy.Poly(sympy.expand(series), T)
    for f in generate_fm(12):
        got = f(X, s * s, sqrt_y=s)
        assert sympy.expand(got - poly.coeff_monomial(T**f.index)) == 0


def test_fm_evaluate_needs_square_for_odd_index():
    f3 = generate_fm(3)[3]
    assert f3(1, 4) == 2 * (4 - 2)
    with pytest.raises(ValueError):
        f3(1, 5)


def test_f2m_gives_tau_even_powers(table):
    fm = generate_fm(10)
    for p in primes_up_to(50):
        for m in range(1, 6):
            assert fm[2 * m](p**11, table[p] ** 2) == tau_prime_power(table[p], p, 2 * m)


def test_f_odd_gives_tau_odd_powers(table):
    fm = generate_fm(9)
    for p in primes_up_to(50):
        for m in (1, 3, 5, 7, 9):
            assert fm[m](p**11, table[p] ** 2, sqrt_y=table[p]) == tau_prime_power(table[p], p, m)


def test_taup4_point(table):
    x, y = taup4_point(2, -24, table)
    assert (x, y) == (2, 2 * 576 - 3 * 2048) and y == -4992
    assert y * y == 5 * 2**22 + 4 * table[16]
    for p in primes_up_to(200):
        x, y = taup4_point(p, table[p], table)
        a = tau_prime_power(table[p], p, 4)
        assert y * y == 5 * x**22 + 4 * a
    with pytest.raises(IdentityViolation):
        taup4_point(3, 253, table)
    with pytest.raises(IdentityViolation):
        taup4_point(3, 253)


def test_p_squared_equation():
    assert solve_p_squared_eq(10**6, 100) == [(1, 2, 1)]


def test_two_ell_power_small():
    sols = search_two_ell_power(100, 9, 10)
    keys = {(s.ell, s.j, s.p, s.d, s.eps) for s in sols}
    assert (13, 1, 3, 3, -1) in keys
    assert (11, 2, 3, 5, -1) in keys
    assert all(s.p == 3 and s.eps == -1 for s in sols)
    assert not any(s.p == 5 for s in sols)


def test_eight_ell_power_small():
    sols = search_eight_ell_power(100, 9, 10)
    keys = {(s.ell, s.j, s.p, s.d, s.eps) for s in sols}
    assert (43, 1, 7, 3, 1) in keys
    assert not any(s.d == 5 for s in sols)  # 7^5 + 1 = 8 * 11 * 191
    assert all(s.p == 7 and s.eps == 1 for s in sols)
    assert not any(s.p == 3 for s in sols)


def _brute(t, p_max, d_max, j_max):
    out = set()
    for p in primes_up_to(p_max):
        for d in range(3, d_max + 1, 2):
            for eps in (1, -1):
                v = p**d + eps
                if v % t:
                    continue
                w = v // t
                f = sympy.factorint(w)
                if len(f) == 1:
                    (ell, j), = f.items()
                    if ell > 2 and j <= j_max:
                        out.add((ell, j, p, d, eps))
    return out


@pytest.mark.parametrize("t,search", [(2, search_two_ell_power), (8, search_eight_ell_power)])
def test_power_search_matches_brute_force(t, search):
    got = {(s.ell, s.j, s.p, s.d, s.eps) for s in search(300, 11, 64)}
    assert got == _brute(t, 300, 11, 64)


def test_genevt():
    r3 = genEVT_defective_check(3)
    assert r3.four_value == 121 and r3.four_solution == (11, 1)
    r6 = genEVT_defective_check(6)
    assert r6.four_value == (3**11 - 1) // 2 and r6.eight_value == (7**11 + 1) // 8
    assert r6.four_solution is None and r6.eight_solution is None and not r6.solvable
    r1 = genEVT_defective_check(1)
    assert r1.trivial and r1.solvable
    with pytest.raises(ValueError):
        genEVT_defective_check(0)


def test_fibonacci_lucas_linkage():
    fib = [0, 1]
    for _ in range(1001):
        fib.append(fib[-1] + fib[-2])
    luc = [2, 1]
    for _ in range(1000):
        luc.append(luc[-1] + luc[-2])
    for n in range(1, 1001):
        assert luc[n] == fib[n - 1] + fib[n + 1]


def test_fib_lucas_mod_examples():
    r = fib_lucas_mod(19, 4, 89)
    assert r.period == 44 and r.power_residue_classes == frozenset()
    r89 = fib_lucas_mod(42, 13, 89)
    assert r89.period == 44 and r89.power_residue_classes == {1, 12, 23, 34}
    r199 = fib_lucas_mod(42, 13, 199)
    assert r199.period == 22 and r199.power_residue_classes == {11}
    assert crt_incompatible(r89, r199)
    assert crt_incompatible(r, r89)
    assert not crt_incompatible(r89, r89)
    for q in (2, 5):
        with pytest.raises(ValueError):
            fib_lucas_mod(1, 1, q)
    with pytest.raises(ValueError):
        fib_lucas_mod(1, 1, 91)


@pytest.mark.parametrize("q", [3, 7, 11, 23, 89, 199, 331])
def test_period_is_pisano(q):
    # the pair (F_n, F_(n+1)) returns to (0, 1) exactly at the period
    r = fib_lucas_mod(1, 0, q)
    a, b = 0, 1
    for n in range(1, 10 * q):
        a, b = b, (a + b) % q
        if (a, b) == (0, 1):
            assert n == r.period
            break


@given(st.integers(-50, 50), st.integers(-50, 50), st.sampled_from([23, 67, 89, 199]))
@settings(max_examples=40, deadline=None)
def test_fib_classes_direct(a, b, q):
    r = fib_lucas_mod(a, b, q)
    fib = [0, 1]
    while len(fib) < r.period + 2:
        fib.append(fib[-1] + fib[-2])
    for n in range(r.period):
        luc = 2 if n == 0 else fib[n - 1] + fib[n + 1]
        x = (a * fib[n] + b * luc) % q
        is_power = x == 0 or any(pow(z, 11, q) == x for z in range(1, q))
        assert (n in r.power_residue_classes) == is_power


def test_11th_power_residue():
    q = 89
    powers = {pow(z, 11, q) for z in range(q)}
    assert all(is_11th_power_residue(x, q) == (x in powers) for x in range(q))
    assert all(is_11th_power_residue(x, 101) for x in range(101))


def test_dj_exclude_examples():
    t0 = time.perf_counter()
    c281 = dj_exclude(281, (19, 4))
    c919 = dj_exclude(-919, (42, 13))
    assert time.perf_counter() - t0 < 1.0
    assert c281.excluded and all(b.primes_used == [89] for b in c281.branches)
    assert c919.excluded and all(b.primes_used == [89, 199] for b in c919.branches)
    c461 = dj_exclude(461)
    assert c461.verdict == "inconclusive"
    assert dj_exclude(-599).verdict == "inconclusive"
    assert dj_exclude(281).excluded  # generator found automatically
    d = json.loads(c919.to_json())
    assert DJCertificate.from_dict(d).to_dict() == c919.to_dict()


def test_dj_inputs():
    assert dj_exclude(7).excluded  # 7 is inert in Q(sqrt 5)
    with pytest.raises(ValueError):
        dj_exclude(281, (19, 5))
    with pytest.raises(ValueError):
        dj_exclude(21)
    assert all(q % 11 == 1 for q in default_dj_pool())
    assert max(default_dj_pool()) <= 2000


@pytest.mark.parametrize("ell", [11, 19, 29, 31, 41, 281, 461, 599, 919])
def test_norm_generator(ell):
    u, v = find_norm_generator(ell)
    assert abs(u * u - 5 * v * v) == ell
    assert find_norm_generator(13) is None
