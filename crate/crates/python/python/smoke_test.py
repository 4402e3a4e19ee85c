"""Smoke test for the dunkl_sn extension module.

Build and install first:

    maturin build --release -o dist && pip install dist/dunkl_sn-*.whl
    python python/smoke_test.py
"""

import math

import dunkl_sn as d


def close(a, b, tol):
    assert abs(a - b) <= tol, f"{a} vs {b} (tol {tol})"


def main():
    # kernel and Bessel function
    close(d.kernel([0.0, 0.0, 0.0], ell=3, kappa="1")["value"], 1.0, 0.0)
    close(d.bessel([1.0, 1.0, 1.0], kappa=1)["value"], math.e, 1e-14)
    both = d.kernel([0.4, -0.9, 0.5], ell=2, kappa=0.5, method="both")
    assert both["method"] == "both" and both["discrepancy"] < 1e-10
    # n = 3, kappa = 1, x = (1, 0, -1): reference value from mpmath
    close(d.bessel([1.0, 0.0, -1.0], kappa="1")["value"], 1.0861612696304876, 1e-14)
    total = sum(d.kernel([0.3, -1.2, 0.8], ell=l, kappa="3/2")["value"] for l in (1, 2, 3))
    close(total, 3 * d.bessel([0.3, -1.2, 0.8], kappa="3/2")["value"], 1e-12)

    # exact intertwiner and the Dunkl relation D_1 V = V d_1
    v = d.intertwine_monomial(3, 1, 2, "1/2")
    assert str(v) == "3/7 * x1^2 + 6/35 * x1 x2 + 6/35 * x1 x3 + 3/35 * x2^2 + 2/35 * x2 x3 + 3/35 * x3^2", str(v)
    lhs = v.dunkl(1, "1/2")
    rhs = d.intertwine_monomial(3, 1, 1, "1/2") * d.MultiPoly("2", 3)
    assert lhs == rhs
    assert d.MultiPoly(str(v), 3) == v

    # numeric intertwiner matches the exact polynomial
    x = [0.7, -0.2, 0.4]
    close(d.intertwine_single(lambda s: s * s, 1, x, 0.5), v.eval(x), 1e-13)
    close(d.intertwine_single(math.exp, 3, x, 1.0), d.kernel(x, ell=3, kappa=1)["value"], 1e-12)

    # callback errors propagate
    try:
        d.intertwine_single(lambda s: 1 / 0, 1, x, 0.5)
    except ZeroDivisionError:
        pass
    else:
        raise AssertionError("callback exception was swallowed")

    # quadrature and moments
    rule = d.SimplexRule(3, 0.5, 6)
    assert len(rule) == 36
    got = rule.expectation(lambda t: t[0] ** 2 * t[1])
    num, den = map(int, d.dirichlet_moment(3, "1/2", [2, 1, 0]).split("/"))
    close(got, num / den, 1e-15)

    # special functions
    close(d.humbert_phi2([1.0], 1.0, [0.7])["value"], math.exp(0.7), 1e-15)
    close(d.lauricella_fd(-1.0, [1.0, 1.0], 3.0, [0.2, -0.1])["value"], 1 - (0.2 - 0.1) / 3, 1e-15)
    close(d.degenerate_ho(1.0, 1.0, [0.0, 0.0, 0.0])["value"], 1.0, 0.0)

    # errors surface as DunklError
    try:
        d.kernel([0.0, 0.0], ell=5)
    except d.DunklError:
        pass
    else:
        raise AssertionError("expected DunklError")

    reports = d.run_suite(["ir1", "kernel-sum"], points=4)
    assert reports and all(r["passed"] for r in reports)

    print(f"smoke test ok ({len(reports)} suite reports)")


if __name__ == "__main__":
    main()
