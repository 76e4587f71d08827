"""Smoke test for the padiccf extension module."""

from fractions import Fraction

import padiccf


def main():
    e = padiccf.expand("1/3", 5)
    assert e.quotients == ["2", "-3/5"], e.quotients
    assert e.termination == "finite", e.termination
    assert e.evaluate() == "1/3"
    assert e.audit()["determinant"] == []

    alpha = padiccf.expand("(-1/10 + 1/10*sqrt(101))", 5, max_terms=40)
    assert alpha.is_periodic()
    assert len(alpha) == 40
    assert alpha.golden()["holds_on_range"]
    assert all(Fraction(q) == Fraction(1, 5) for q in alpha.quotients[1:])
    s = {entry["k"]: entry["s"] for entry in alpha.loglog()["entries"]}
    assert abs(s[2] - 0.4866415643132425) < 1e-12

    assert padiccf.evaluate(["0", "1/5", "2/5"]) == "10/27"

    params = padiccf.ridout_params(2, "1/3")
    assert params["m"] == "3601"
    assert params["log10_delta_inv"] == str(3601 * 2**3601)

    f = padiccf.MinimalPolynomial([1, 0, -6])
    assert f.discriminant == 24
    assert f.liouville_constant(5)["c"] == "1/7"
    assert f.liouville(5, 50)["holds_on_range"]
    found = f.enumerate(5, "1/2", 1000)
    assert found["gap_law"]["holds_on_range"]

    try:
        padiccf.expand("1/3", 4)
    except ValueError:
        pass
    else:
        raise AssertionError("p = 4 accepted")
    print("smoke test passed")


if __name__ == "__main__":
    main()
