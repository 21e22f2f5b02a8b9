"""Smoke test for the Python bindings.

Build and install first, e.g. `pip install --no-build-isolation -e crates/py`
or `maturin develop -m crates/py/Cargo.toml`, then run this file.
"""

import math

import betaskel


def main():
    square = betaskel.PointSet([(0, 0), (1, 0), (1, 1), (0, 1)])
    assert len(square) == 4

    sides = [(0, 1), (0, 3), (1, 2), (2, 3)]
    assert betaskel.brute_force(square, "inf").edges == sides
    assert betaskel.dt_filter(square, "21/10").edges == sides
    g = betaskel.batched(square, math.inf)
    assert g.edges == sides and g.algorithm == "batched" and g.beta == "inf"
    assert g.stats()["m"] == betaskel.choose_group_size(4)

    assert betaskel.region_contains(square, 0, 1, ("0.5", "0.1"), 3)
    assert not betaskel.region_contains(square, 0, 1, (1, 0), 3)
    assert betaskel.region_contains(square, 0, 1, (1, 0), 3, closure="closed")

    pts = betaskel.PointSet.generate(200, seed=7)
    dt = set(betaskel.delaunay_edges(pts))
    for beta in ("5/2", 3, 10.0, "inf"):
        for closure in ("open", "closed"):
            fast = betaskel.batched(pts, beta, closure, paranoid=True).edges
            assert fast == betaskel.dt_filter(pts, beta, closure).edges
            assert set(fast) <= dt

    for bad in (lambda: betaskel.batched(square, 2),
                lambda: betaskel.PointSet([(0, 0), ("0.0", 0)]),
                lambda: betaskel.brute_force(square, "1/2", variant="circle")):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
