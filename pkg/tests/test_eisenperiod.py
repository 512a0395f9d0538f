import mpmath as mp
import pytest

from plab import eisenperiod as ep
from plab.context import EvalContext
from plab.errors import DomainError, PoleError
from plab.periodfn import F1

I = mp.mpc(0, 1)
TOL = mp.mpf("1e-25")


def test_E1_at_i(hp):
    v = ep.E1_q(I, ctx=EvalContext(30))
    q = mp.exp(-2 * mp.pi)
    partial = 1 - 4 * (q + 2 * q**2 + 2 * q**3 + 3 * q**4)
    assert abs(v - partial) < 10 * q**5
    assert abs(v - mp.mpf("0.99250224")) < mp.mpf("5e-8")


def test_E1_periodic_and_cusp(hp):
    ctx = EvalContext(30)
    tau = mp.mpc("0.2", "0.8")
    assert abs(ep.E1_q(tau, ctx=ctx) - ep.E1_q(tau + 1, ctx=ctx)) < mp.mpf("1e-29")
    assert abs(ep.E1_q(mp.mpc(0, 30), ctx=ctx) - 1) < mp.mpf("1e-29")


def test_E1_domain():
    with pytest.raises(DomainError):
        ep.E1_q(mp.mpc(0, -1))


def test_q_params_truncation(hp):
    p = ep.q_params(I)
    assert abs(mp.exp(-2 * mp.pi) ** p.trunc) < mp.mpf(10) ** (-mp.mp.dps)


@pytest.mark.parametrize("tau", [I, mp.mpc("0.5", 1), mp.mpc(0, 2)], ids=["i", "half+i", "2i"])
def test_prop51(hp, tau):
    assert ep.prop51_residual(tau, ctx=EvalContext(30)) < TOL


@pytest.mark.parametrize("N", range(1, 9))
def test_kurokawa_vs_series(hp, N):
    ctx = EvalContext(30)
    assert abs(ep.kurokawa_F1(N, ctx=ctx) - F1(N, ctx=ctx)) < TOL
    assert abs(ep.kurokawa_F1(N, inverted=True, ctx=ctx) - F1(mp.mpf(1) / N, ctx=ctx)) < TOL


def test_kurokawa_examples(hp):
    ctx = EvalContext(30)
    assert abs(ep.kurokawa_F1(1, ctx=ctx) - mp.mpf(1) / 2) < mp.mpf("1e-30")
    assert abs(ep.kurokawa_F1(3, ctx=ctx) - (mp.mpf(1) / 6 - mp.pi / (18 * mp.sqrt(3)))) < mp.mpf("1e-30")
    assert abs(ep.kurokawa_F1(5, inverted=True, ctx=ctx) - 5 * ep.kurokawa_F1(5, ctx=ctx)) < mp.mpf("1e-29")


@pytest.mark.parametrize("tau", [I, mp.mpc("0.3", "0.9")], ids=["i", "generic"])
def test_R1_routes(hp, tau):
    ctx = EvalContext(30)
    assert abs(ep.R1(tau, ctx=ctx) - ep.R1_eisenstein(tau, ctx=ctx)) < TOL
    assert abs(ep.R1(tau, ctx=ctx) * mp.pi * 1j / tau + F1(tau, ctx=ctx)) < mp.mpf("1e-29")


def test_R1_cusp_limit(hp):
    ctx = EvalContext(30)
    N = 3
    near = ep.R1(mp.mpc(N, "1e-6"), ctx=ctx)
    at = -N / (mp.pi * 1j) * ep.kurokawa_F1(N, ctx=ctx)
    assert abs(near - at) < mp.mpf("1e-4")


@pytest.mark.parametrize("s", ["0.75", "1.5", 2, 3])
def test_psi_at_one(hp, s):
    s = mp.mpf(s)
    assert abs(ep.psi_plus(s, 1, ctx=EvalContext(30)) - mp.zeta(2 * s - 1)) < mp.mpf("1e-29")


def test_psi_at_one_lattice_oracle():
    """Direct lattice sum over m, n >= 1 of (m+n)^-4 with the edges m = 0 or n = 0 halved."""
    with mp.workdps(20):
        # sum_{k>=2} (k-1) k^-4 + sum_{k>=1} k^-4 (two half edges) = zeta(3)
        inner = mp.nsum(lambda k: (k - 1) / k**4, [2, mp.inf]) + mp.zeta(4)
        assert abs(ep.psi_plus(2, 1, ctx=EvalContext(20)) - inner) < mp.mpf("1e-18")


@pytest.mark.parametrize("x", ["0.3", 1, "2.7", mp.mpc(1, 2)], ids=["0.3", "1", "2.7", "1+2i"])
def test_psi_half_is_minus_F1(hp, x):
    ctx = EvalContext(30)
    assert abs(ep.psi_plus("0.5", x, ctx=ctx) + F1(x, ctx=ctx)) < TOL


def test_psi_half_branch_is_continuous(hp):
    """Off-branch evaluation near s = 1/2 approaches -F1."""
    ctx = EvalContext(30)
    near = ep.psi_plus(mp.mpf("0.5") + mp.mpf("1e-12"), "1.7", ctx=ctx)
    assert abs(near + F1("1.7", ctx=ctx)) < mp.mpf("1e-10")


def test_psi_errors():
    with pytest.raises(PoleError):
        ep.psi_plus(1, 2)
    with pytest.raises(DomainError):
        ep.psi_plus("1.5", -2)
    with pytest.raises(DomainError):
        ep.psi_plus(-1, 2)


@pytest.mark.parametrize(("s", "x"), [("1.5", 1), (2, "0.7"), ("1.2", 3), ("2.5", mp.mpc(1, 1))])
def test_psi_integral_route(hp, s, x):
    ctx = EvalContext(30)
    assert abs(ep.psi_plus_integral(s, x, ctx=ctx) - ep.psi_plus(s, x, ctx=ctx)) < TOL


def test_psi_integral_value(hp):
    assert abs(ep.psi_plus_integral("1.5", 1, ctx=EvalContext(30)) - mp.pi**2 / 6) < TOL


def test_psi_integral_domain():
    with pytest.raises(DomainError):
        ep.psi_plus_integral(1, 1)


def test_growth_large_x(hp):
    res, bound = ep.psi_growth_residual("1.5", 100, ctx=EvalContext(30))
    assert res < mp.mpf("1e-8")
    assert res < bound


def test_growth_printed_form(hp):
    """The three printed terms at (1.5, 100) agree to 1e-8; the third is not the exact next term."""
    x = mp.mpf(100)
    printed = mp.zeta(3) / 2 + mp.zeta(2) / (2 * x**2) + mp.gamma(4) / (12 * x**4)
    assert abs(ep.psi_plus("1.5", x, ctx=EvalContext(30)) - printed) < mp.mpf("1e-8")


def test_growth_leading_constant(hp):
    main, _ = ep.psi_growth_expansion("1.5", mp.mpf(10) ** 6, ctx=EvalContext(30))
    assert mp.nstr(main, 8) == "0.60102845"


def test_growth_small_x(hp):
    res, bound = ep.psi_growth_residual("1.2", "0.01", ctx=EvalContext(30))
    assert res < bound


def test_growth_mid_range():
    with pytest.raises(DomainError):
        ep.psi_growth_expansion("1.5", 3)


@pytest.mark.parametrize(("s", "x"), [("1.25", "1.3"), ("0.5", "0.8"), ("2.5", "0.4"), ("0.8", "5")])
def test_three_term(hp, s, x):
    assert ep.psi_three_term_residual(s, x, ctx=EvalContext(30)) < TOL


def test_residue_and_constant_at_one():
    with mp.workdps(120):
        ctx = EvalContext(60)
        data = ep.psi_laurent("1.7", ctx=ctx)
        assert abs(data.residue - 1 / (2 * mp.mpf("1.7"))) < mp.mpf("1e-8")
        assert abs(data.constant - ep.psi_laurent_constant("1.7", ctx=ctx)) < mp.mpf("1e-8")


def test_E2s_weight_one_limit(hp):
    """At s = 1/2, 2/zeta(0) = -4 and sigma_0 = d, so E_2s is E1."""
    ctx = EvalContext(30)
    tau = mp.mpc("0.1", "0.9")
    assert abs(ep.E2s_q("0.5", tau, ctx=ctx) - ep.E1_q(tau, ctx=ctx)) < mp.mpf("1e-29")


def test_E2s_cusp_and_domain(hp):
    assert abs(ep.E2s_q("1.25", mp.mpc(0, 30), ctx=EvalContext(30)) - 1) < mp.mpf("1e-29")
    assert mp.isfinite(ep.E2s_q("1.25", I, ctx=EvalContext(30)))
    with pytest.raises(DomainError):
        ep.E2s_q(0, I)


def test_E2s_trivial_zero():
    """1 - 2s = -2 is a trivial zero of zeta."""
    with pytest.raises(DomainError):
        ep.E2s_q("1.5", I)


@pytest.mark.parametrize(("s", "tau"), [("1.25", I), ("1.6", mp.mpc("0.5", 2)), ("2.3", mp.mpc("-0.4", "0.7"))])
def test_prop63(hp, s, tau):
    assert ep.prop63_residual(s, tau, ctx=EvalContext(30)) < mp.mpf("1e-15")


def test_Psi_periodic(hp):
    ctx = EvalContext(30)
    tau = mp.mpc("0.2", "1.1")
    # only the E_2s(tau) part is periodic; compare the q-series parts directly
    assert abs(ep.E2s_q("1.25", tau, ctx=ctx) - ep.E2s_q("1.25", tau + 1, ctx=ctx)) < mp.mpf("1e-29")


def test_Psi_at_i(hp):
    ctx = EvalContext(30)
    s = mp.mpf("1.25")
    assert abs(ep.Psi_s(s, I, ctx=ctx) - (1 - mp.expjpi(-s)) * ep.E2s_q(s, I, ctx=ctx)) < mp.mpf("1e-29")


def test_f_s_constant_term(hp):
    ctx = EvalContext(30)
    s = mp.mpf("1.25")
    const = (1 + mp.expjpi(-2 * s)) * mp.zeta(2 * s) / 2
    assert abs(ep.f_s(s, mp.mpc(0, 8), ctx=ctx) - const) < mp.mpf("1e-15")
    expected = const * ep.E2s_q(s, I, ctx=ctx)
    assert abs(ep.f_s(s, I, ctx=ctx) - expected) < mp.mpf("1e-25")


@pytest.mark.parametrize("tau", [I, mp.mpc("0.3", "0.8"), mp.mpc("-0.6", "1.4")], ids=["i", "right", "left"])
def test_f_s_qseries(hp, tau):
    ctx = EvalContext(30)
    assert abs(ep.f_s("1.7", tau, ctx=ctx) - ep.f_s_qseries("1.7", tau, ctx=ctx)) < TOL


def test_f_s_lattice_at_two():
    """f_2(i) against a brute-force Eisenstein lattice sum."""
    with mp.workdps(20):
        ctx = EvalContext(20)
        # f_2(tau) = (1 + 1) zeta(4) / 2 * E_4(tau) and E_4(i) = G_4(i) / (2 zeta(4))
        M = 200
        g4 = mp.fsum(
            mp.mpc(m, n) ** -4 for m in range(-M, M + 1) for n in range(-M, M + 1) if (m, n) != (0, 0)
        )
        tail = 2 * mp.pi / (2 * M**2)  # |sum over |z| > M| bound, loose
        assert abs(mp.re(ep.f_s(2, I, ctx=ctx)) - g4 / 2) < tail
