"""Smoke test for the Python extension.

Build and install first, e.g. `maturin develop -m crates/python/Cargo.toml`,
then run `python python/smoke_test.py`.
"""

from fractions import Fraction
from pathlib import Path

import multihook as mh

DATA = Path(__file__).resolve().parent.parent / "crates" / "core" / "data"


def main():
    ps = mh.Seed((DATA / "ps.seed").read_text())
    assert ps.digest == mh.Seed.ps().digest
    assert (ps.tau0, ps.eta, ps.hook_degree) == (3, 4, 3)
    assert ps.mean_depth == Fraction(1)

    linear = mh.Sequence("linear")
    assert linear.tau(ps, 3) == 15
    assert mh.limiting_average_degree(ps) == 4
    assert mh.limiting_min_degree_proportion(ps) == Fraction(1, 3)
    assert mh.expected_total_path_length(ps, linear, 1) == 8

    k2 = mh.Seed.k2()
    const1 = mh.Sequence("const:1")
    assert mh.min_degree_pmf(k2, const1, 2) == {2: Fraction(2, 3), 3: Fraction(1, 3)}
    assert mh.expected_depth(k2, const1, 1) == Fraction(5, 6)
    assert mh.generalized_harmonic(1, 2) == Fraction(1, 3)

    net = mh.Network(ps, linear, rng_seed=1, track_ecc=True)
    net.grow(3)
    assert (net.order, net.edge_count) == (15, 28)
    assert net.diameter == max(net.eccentricities)
    assert mh.replay(net.trace_json()) == []

    example = mh.Network(ps, linear, track_ecc=True)
    for latches in ([1], [4, 5], [3, 7, 9]):
        example.step_with(latches)
    assert (example.total_path_length, example.min_degree_count, example.diameter) == (45, 3, 10)
    assert mh.replay((DATA / "example_trace.json").read_text()) == []

    rows = mh.simulate(ps, linear, 5, 2000, rng_seed=3, stats=["tpl"])
    assert all(r["pass"] for r in rows)

    try:
        mh.Sequence("const:0")
    except ValueError:
        pass
    else:
        raise AssertionError("const:0 accepted")

    report = mh.verify_grid(max_n=3, runs=12)
    assert all(not failures for _, failures in report.values())
    print("python smoke test passed")


if __name__ == "__main__":
    main()
