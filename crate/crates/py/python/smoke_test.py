"""Quick end-to-end check of the Python bindings.

    maturin develop -m crates/py/Cargo.toml
    python crates/py/python/smoke_test.py
"""

import json
import math

import roadricci


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol


def main():
    k4 = roadricci.RoadGraph([(a, b) for a in "abcd" for b in "abcd" if a < b])
    assert k4.node_count == 4 and k4.edge_count == 6
    kappa = k4.curvature()
    assert all(close(k, 2 / 3) for k in kappa.values()), kappa

    bridge = roadricci.RoadGraph(
        [("a", "b"), ("b", "c"), ("a", "c"), ("x", "y"), ("y", "z"), ("x", "z"), ("c", "x")]
    )
    kappa = bridge.curvature()
    assert min(kappa, key=kappa.get) == ("c", "x")
    assert bridge.betweenness()[("c", "x")] == 9.0
    assert close(bridge.edge_curvature("x", "c"), kappa[("c", "x")])

    stats = roadricci.RoadGraph([("1", "2"), ("2", "3")]).stats()
    assert stats.diameter == 2 and close(stats.avg_path_length, 4 / 3)

    curve = bridge.attack("curvature", grid_step=1 / 7)
    assert curve.tvr_mean[0] == 1.0 and curve.tvr_mean[1] == 0.5
    assert close(curve.tvr_mean[-1], 1 / 6)

    cost = [[1, 3, 3], [1, 1, 1], [3, 3, 1]]
    assert close(roadricci.wasserstein([1 / 3] * 3, [1 / 3] * 3, cost), 1.0)

    h = roadricci.histogram(list(kappa.values()))
    assert sum(h.counts) == 7 and len(h.bin_edges) == 41

    g, trunks = roadricci.generate_benchmark("grid-radial", 8)
    r = g.correlate()
    assert -1.0 <= r.pearson_r <= 1.0 and r.n == g.edge_count
    curv = g.attack("curvature").tvr_mean[20]
    rand = g.attack("random", trials=10, seed=42).tvr_mean[20]
    assert curv < rand, (curv, rand)
    doc = json.loads(g.geojson())
    assert len(doc["features"]) == g.edge_count
    assert not math.isnan(doc["features"][0]["properties"]["kappa"])
    assert len(trunks) == 12

    try:
        roadricci.RoadGraph([("a", "a")])
    except ValueError as e:
        assert "self-loop" in str(e)
    else:
        raise AssertionError("self-loop accepted")

    print(f"ok: {g!r}, TVR at f=0.2 curvature {curv:.3f} vs random {rand:.3f}")


if __name__ == "__main__":
    main()
