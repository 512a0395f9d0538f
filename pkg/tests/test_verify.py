import json

import mpmath as mp
import pytest

from plab import verify
from plab.context import EvalContext
from plab.errors import DomainError, UnknownSuite


@pytest.mark.parametrize("kind", ["real-positive", "complex-offcut", "upper-half"])
def test_grid_deterministic(kind):
    assert verify.grid(42, 5, kind) == verify.grid(42, 5, kind)
    assert verify.grid(42, 5, kind) != verify.grid(43, 5, kind)


def test_grid_bounds():
    for x in verify.grid(7, 200, "real-positive"):
        assert 0.05 <= x <= 20
    for z in verify.grid(7, 200, "complex-offcut"):
        assert 0.05 * (1 - 1e-9) <= abs(z) <= 20 * (1 + 1e-9)
        assert abs(mp.arg(z)) <= 3 + 1e-9
    for z in verify.grid(7, 200, "upper-half"):
        assert 0.5 <= z.imag <= 3 and -1 <= z.real <= 1


def test_grid_errors():
    with pytest.raises(DomainError):
        verify.grid(1, 0)
    with pytest.raises(DomainError):
        verify.grid(1, 3, "lattice")


@pytest.mark.parametrize("n", [2, 3, 4])
def test_cot_grid_margin(n):
    from plab.heckeact import hecke_hat

    for x, y in verify.cot_grid(5, 10, n):
        for m in hecke_hat(n).matrices:
            for v in (m.a * x + m.b * y, m.c * x + m.d * y):
                assert abs(v - round(v)) >= 1e-3


def test_tolerance_provenance():
    ctx = EvalContext(40)
    assert verify.tolerance(ctx, 5) == mp.mpf(10) ** -35
    assert verify.tolerance(ctx, 30, "1e-6") == mp.mpf("1e-6")


def test_xi_integral_at_one(hp):
    ctx = EvalContext(20)
    v = verify.xi_integral(1, ctx=ctx)
    assert abs(v - (mp.euler - mp.log(2 * mp.pi) + mp.mpf(1) / 2)) < mp.mpf("1e-15")
    assert mp.nstr(v, 7) == "-0.7606614"


def test_xi_integral_symmetry_and_left_member(hp):
    ctx = EvalContext(20)
    a, b = verify.xi_integral(2, ctx=ctx), verify.xi_integral("0.5", ctx=ctx)
    assert abs(a - b) < mp.mpf("1e-15")
    assert abs(a - verify.xi_left_member(2, ctx=ctx)) < mp.mpf("1e-15")


def test_xi_integral_domain():
    with pytest.raises(DomainError):
        verify.xi_integral(0)


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        verify.run_suite("nope")


def test_report_schema():
    ctx = EvalContext(20, seed=3)
    (rep,) = verify.run_suite("higher-klf", ctx)
    d = json.loads(rep.to_json())
    assert set(d) == {"suite", "seed", "precision", "cases", "pass", "elapsed_ms"}
    assert set(d["cases"][0]) == {"id", "inputs", "residual", "tolerance", "pass"}
    assert d["pass"] is True and d["seed"] == 3 and d["precision"] == 20
    assert all(c["residual"] >= 0 for c in d["cases"])
    assert "elapsed_ms" not in json.loads(rep.to_json(timing=False))


def test_report_deterministic():
    ctx = EvalContext(20, seed=11)
    a = verify.run_suite("jfun", ctx, points=2)[0].to_json(timing=False)
    b = verify.run_suite("jfun", ctx, points=2)[0].to_json(timing=False)
    assert a == b


def test_builder_records_errors():
    def boom():
        raise ArithmeticError("no convergence")

    b = verify._Builder(EvalContext(20))
    b.add("boom", {}, boom, 1)
    assert b.cases[0].residual == mp.inf and not b.cases[0].passed
    assert "error" in b.cases[0].inputs


def test_csv_and_text():
    (rep,) = verify.run_suite("eisen", EvalContext(20), points=1)
    rows = rep.to_csv().strip().splitlines()
    assert rows[0] == "suite,id,inputs,residual,tolerance,pass"
    assert len(rows) == len(rep.cases) + 1
    assert rep.to_text().splitlines()[-1].startswith("eisen: PASS")


@pytest.mark.slow
@pytest.mark.parametrize("suite", verify.SUITES)
def test_suite_passes_at_30(suite):
    reports = verify.run_suite(suite, EvalContext(30))
    failed = [c.id for r in reports for c in r.cases if not c.passed]
    assert not failed
