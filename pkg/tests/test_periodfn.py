import mpmath as mp
import pytest
from hypothesis import given, settings, strategies as st

from plab import periodfn as pf
from plab.context import EvalContext
from plab.errors import DomainError

TOL30 = mp.mpf("1e-29")


def _raw_sum(f, N=10**5):
    """Raw partial sum with an integral tail estimate, the brute-force oracle."""
    return mp.fsum(f(n) for n in range(1, N + 1))


@pytest.mark.parametrize(
    ("x", "expected"),
    [
        (1, lambda: mp.mpf(1) / 2 + (mp.euler - mp.log(2 * mp.pi)) / 2),
        (2, lambda: mp.mpf(1) / 4 + (mp.euler - mp.log(mp.pi)) / 2),
    ],
    ids=["x1", "x2"],
)
def test_frak_F1_closed(hp, ctx30, x, expected):
    assert abs(pf.frak_F1(x, ctx=ctx30) - expected()) < TOL30


def test_frak_F1_at_one_numeric(ctx30):
    assert mp.nstr(pf.frak_F1(1, ctx=ctx30), 7) == "-0.1303307"


@pytest.mark.parametrize(("x", "expected"), [(1, "0.5"), (2, "0.25"), ("0.5", "0.5")], ids=["x1", "x2", "half"])
@pytest.mark.parametrize("method", list(pf.EvalMethod), ids=lambda m: m.value)
def test_F1_closed_values(hp, ctx30, x, expected, method):
    if method is pf.EvalMethod.ASYMPTOTIC:
        pytest.skip("asymptotic route is undefined for 1/2 < |x| < 2 and too short at x = 2")
    assert abs(pf.F1(x, method=method, ctx=ctx30) - mp.mpf(expected)) < TOL30


def test_F1_integral_route_at_ten(hp, ctx30):
    assert abs(pf.F1_integral(10, ctx=ctx30) - pf.F1(10, ctx=ctx30)) < mp.mpf("1e-30")


def test_frak_F1_raw_oracle():
    """Low-precision comparison against the raw digamma series with its leading tail."""
    with mp.workdps(20):
        N = 20000
        raw = mp.fsum(mp.digamma(n) + mp.mpf(1) / (2 * n) - mp.log(n) for n in range(1, N + 1))
        raw -= mp.mpf(1) / (12 * N)  # summand ~ -1/(12 n^2)
        assert abs(raw - pf.frak_F1(1, ctx=EvalContext(20))) < mp.mpf("1e-9")


def test_conjugate_symmetry(hp, ctx30):
    z = mp.mpc("0.3", "1.7")
    assert abs(pf.frak_F1(mp.conj(z), ctx=ctx30) - mp.conj(pf.frak_F1(z, ctx=ctx30))) < TOL30


def test_complex_series_matches_integral(hp, ctx30):
    z = mp.mpc(1, 1)
    assert abs(pf.F1(z, ctx=ctx30) - pf.F1_integral(z, ctx=ctx30)) < TOL30


@pytest.mark.parametrize("x", [0, -1, "-2.5"], ids=["zero", "neg1", "neg2.5"])
def test_cut_raises(x):
    with pytest.raises(DomainError):
        pf.F1(x)


def test_integral_route_domain():
    with pytest.raises(DomainError):
        pf.F1_integral(mp.mpc(-1, 1))


def test_asymptotic_within_bound(hp, ctx30):
    v = pf.F1_asymptotic(25, 12, ctx=ctx30)
    assert abs(v.value - pf.F1(25, ctx=ctx30)) <= v.bound


def test_asymptotic_small_x_mirror(hp, ctx30):
    v = pf.F1_asymptotic("0.04", 8, ctx=ctx30)
    assert abs(v.value - pf.F1("0.04", ctx=ctx30)) <= v.bound


def test_asymptotic_n2_coefficient(hp):
    """The first correction is zeta(-1) zeta(2) / x^2 = -pi^2 / (72 x^2)."""
    x = mp.mpf(30)
    one = pf.F1_asymptotic(x, 1, ctx=EvalContext(30)).value
    base = -(mp.euler - mp.log(2 * mp.pi / x)) / 2
    assert abs(one - base + mp.pi**2 / (72 * x**2)) < mp.mpf("1e-30")


def test_asymptotic_odd_terms_vanish(hp):
    a = pf.F1_asymptotic(30, 1, ctx=EvalContext(30)).value
    b = pf.F1_asymptotic(30, 2, ctx=EvalContext(30)).value
    assert a == b


def test_asymptotic_gap():
    with pytest.raises(DomainError):
        pf.F1_asymptotic(1, 4)
    with pytest.raises(DomainError):
        pf.F1_asymptotic(30, 0)


def test_frak_Fk_k1_is_frak_F1(ctx30):
    assert pf.frak_Fk(1, "2.7", ctx=ctx30) == pf.frak_F1("2.7", ctx=ctx30)


def test_frak_F3_at_one_raw(hp):
    """sum n^-2 psi(n) against a raw sum with the 1/n^2 (log n - 1/(2n)) tail integrated."""
    with mp.workdps(20):
        N = 20000
        raw = mp.fsum(mp.digamma(n) / n**2 for n in range(1, N + 1))
        raw += mp.quad(lambda t: (mp.log(t) - 1 / (2 * t)) / t**2, [N + mp.mpf(1) / 2, mp.inf])
        assert abs(raw - pf.frak_Fk(3, 1, ctx=EvalContext(20))) < mp.mpf("1e-9")


def test_herglotz_J_at_one(hp, ctx30):
    v = pf.frak_Fk(2, 2, ctx=ctx30) - 2 * pf.frak_Fk(2, 1, ctx=ctx30) + pf.frak_Fk(2, "0.5", ctx=ctx30) + mp.pi**2 / 12
    assert abs(v - mp.log(2) ** 2 / 2) < TOL30


def test_Fk_derivative_i0(ctx30):
    assert pf.Fk_derivative(3, 0, "1.3", ctx=ctx30) == pf.frak_Fk(3, "1.3", ctx=ctx30)


def test_Fk_derivative_raw(hp):
    with mp.workdps(20):
        N = 20000
        raw = mp.fsum(mp.psi(1, n) / n for n in range(1, N + 1))
        raw += mp.quad(lambda t: 1 / t**2 + 1 / (2 * t**3), [N + mp.mpf(1) / 2, mp.inf])
        assert abs(raw - pf.Fk_derivative(3, 1, 1, ctx=EvalContext(20))) < mp.mpf("1e-9")


def test_Fk_derivative_finite_difference(hp):
    h = mp.mpf("1e-8")
    ctx = EvalContext(30)
    fd = (pf.Fk_derivative(4, 1, 2 + h, ctx=ctx) - pf.Fk_derivative(4, 1, 2 - h, ctx=ctx)) / (2 * h)
    exact = pf.Fk_derivative(4, 2, 2, ctx=ctx)
    assert abs(fd - exact) < mp.mpf("1e-6") * abs(exact)


def test_Fk_derivative_domain():
    with pytest.raises(DomainError):
        pf.Fk_derivative(3, 3, 1)
    with pytest.raises(DomainError):
        pf.Fk_derivative(2, 0, 1)


@given(st.floats(0.05, 20))
@settings(max_examples=15, deadline=None)
def test_three_term_relation(x):
    ctx = EvalContext(30)
    with mp.workdps(60):
        x = mp.mpf(x)
        r = pf.F1(x, ctx=ctx) - pf.F1(x + 1, ctx=ctx) - pf.F1(x / (x + 1), ctx=ctx) / (x + 1)
        assert abs(r) < mp.mpf("1e-25")


@given(st.floats(0.05, 20), st.floats(-10, 10))
@settings(max_examples=15, deadline=None)
def test_two_term_relation_complex(re, im):
    ctx = EvalContext(30)
    with mp.workdps(60):
        x = mp.mpc(re, im)
        r = pf.F1(x, ctx=ctx) - pf.F1(1 / x, ctx=ctx) / x
        assert abs(r) < mp.mpf("1e-25")
