"""Smoke test for the pyl1stab extension module.

Run after `maturin develop -m crates/python/Cargo.toml`, or with the built
shared library on PYTHONPATH as pyl1stab.so.
"""

import cmath
from fractions import Fraction

import pyl1stab


def main():
    p = pyl1stab.Polynomial([1, "1/2", 0, 0, "-1/2", Fraction(-1, 2)])
    assert p.degree == 5 and p.backend == "exact", repr(p)

    cert = p.check()
    assert cert["verdict"] == "certified" and cert["stage"] == 4, cert
    assert cert["tail_sums"][-1] == "23/32"
    assert pyl1stab.revalidate(cert)

    rows = p.trace()
    assert [r["tail_sum"] for r in rows] == ["3/2", "5/4", "9/8", "17/16", "23/32"]

    jury = p.jury()
    assert jury["verdict"] == "stable" and len(jury["rows"]) == 7

    roots = p.roots()
    assert len(roots) == 5 and max(abs(z) for z in roots) < 1
    for z in roots:
        assert abs(z**5 + 0.5 * z**4 - 0.5 * z - 0.5) < 1e-9
    assert p.schur_numeric() == "inside"

    assert pyl1stab.Polynomial([1, -3, 1]).check()["verdict"] == "definitely_unstable"
    assert pyl1stab.Polynomial([1.0, -0.5, 0.25], backend="float").check()["stage"] == 0

    assert pyl1stab.c2("1/2", "-1/2") is True
    assert pyl1stab.c2(2, 0) is False
    assert pyl1stab.c3(0, 0, 0) is True

    report = pyl1stab.cournot("1/4", 3)
    assert report["p3"]["closed_form"] == "1/2" and report["p3"]["certified_within_k"]

    ricker = pyl1stab.ricker(1, 3, "1/2")
    assert ricker["verdict"]["kind"] in ("stable_sufficient", "unknown", "unstable_necessary")

    summary = pyl1stab.scan("quadratic-alpha-beta", x_steps=40, y_steps=30)
    assert summary["cells"] == 41 * 31 and summary["soundness_violations"] == 0
    pgm = pyl1stab.scan("quadratic-alpha-beta", x_steps=40, y_steps=30, format="pgm")
    assert pgm.startswith(b"P5\n41 31\n255\n")

    try:
        pyl1stab.Polynomial([0, 1])
    except ValueError:
        pass
    else:
        raise AssertionError("zero leading coefficient accepted")

    assert cmath.isclose(sum(roots), -0.5, abs_tol=1e-9)
    print("pyl1stab smoke test: ok")


if __name__ == "__main__":
    main()
