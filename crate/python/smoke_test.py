"""Smoke test for the torsionlab Python module."""

from fractions import Fraction
from pathlib import Path

import torsionlab as tl

ROOT = Path(__file__).resolve().parent.parent


def main():
    two = tl.Sequence("constant 2")
    assert [two.ratio(n) for n in range(1, 5)] == [2, 2, 2, 2]
    assert two.u(10) == 1024

    fact = tl.Sequence("factorial")
    assert fact.u(5) == 720
    assert str(fact.divergent_part()) != ""

    evens = tl.Set("evens")
    assert 4 in evens and 5 not in evens
    assert tl.Set("union(squares, (finite 2, 3))").members(10) == [1, 2, 3, 4, 9]

    third = tl.Element(two, "rational 1/3")
    assert third.digits(6) == [0, 1, 0, 1, 0, 1]
    assert third.value() == Fraction(1, 3)
    norms = third.norms(8)
    assert all(lo == hi == Fraction(1, 3) for lo, hi in norms)

    fin = tl.Ideal(two, "fin")
    v = tl.classify(third, fin)
    assert v.decision == "NonMember", v.trace
    assert "R1" in v.trace

    squares = tl.Element(two, "digits on squares value 1")
    d1 = tl.Ideal(two, "density 1")
    assert tl.classify(squares, d1).decision == "Member"
    reports = tl.scan(squares, d1, n_max=1024, epsilons=["1/4"])
    assert reports[0]["epsilon"] == Fraction(1, 4)
    assert reports[0]["verdict"]

    w = tl.witness(two, evens, d1)
    assert tl.classify(w, d1).decision == "NonMember"

    try:
        tl.Sequence("constnat 2")
    except ValueError as e:
        assert "ratio grammar" in str(e)
    else:
        raise AssertionError("malformed ratio accepted")

    exp = tl.Experiment.load(ROOT / "experiments" / "euler.toml")
    assert exp.classify().decision == "Member"
    assert "ideal" in tl.grammar_text()

    print("python smoke test passed")


if __name__ == "__main__":
    main()
