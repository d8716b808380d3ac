"""Smoke test for the Python bindings: parse, count, solve, enumerate, render."""

import json
from fractions import Fraction
from pathlib import Path

import pychessbisect as cb

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"


def side(normal, offset, point):
    return sum(Fraction(a) * b for a, b in zip(normal, point)) - Fraction(offset)


def main():
    problem = cb.Problem.load(str(PROBLEMS / "ham2d.json"))
    assert problem.dimension == 2 and problem.num_families == 1

    report = problem.parity()
    assert report.n == 1 and report.n_mod2 == 1

    solution = problem.solve()
    assert solution.parity == 1 and solution.oracle_agrees
    (normal, offset), = solution.hyperplanes
    colors = json.loads(problem.to_json())["input"]["colors"]
    for points in colors:
        signs = [side(normal, offset, [Fraction(x) for x in p]) for p in points]
        above = sum(s > 0 for s in signs)
        below = sum(s < 0 for s in signs)
        assert above == below, signs

    two = cb.Problem.load(str(PROBLEMS / "two_lines.json"))
    partitions = two.enumerate()
    assert len(partitions) % 2 == 1
    assert two.solve(engine="tracked").partition in partitions

    even = cb.Problem.load(str(PROBLEMS / "three_lines_even.json"))
    try:
        even.solve()
    except cb.ParityZeroNoWitness:
        pass
    else:
        raise AssertionError("even instance without enumeration should raise")

    try:
        cb.Problem.from_json('{"dimension": 2}')
    except ValueError as e:
        assert "families" in str(e)
    else:
        raise AssertionError("incomplete problem should be rejected")

    assert cb.stirling2(5, 2) == 15
    assert cb.parity_table(2, 3) == [[1, 1, 1], [1, 1, 0]]

    ce = json.loads(cb.counterexample(2, [1, 1], certify=True))
    assert ce["certification"]["outcome"] == "no-solution"

    assert problem.render_svg().startswith("<svg")
    print("python smoke test: ok")


if __name__ == "__main__":
    main()
