"""Smoke test for the pymatsuo extension module.

Build and install first:
    pip install --no-build-isolation -e crates/py
"""

import pymatsuo


def main():
    stats = pymatsuo.space_stats("W3A:4")
    assert stats["points"] == 18, stats

    crit = pymatsuo.critical_values("A:3")
    assert crit["rational_roots"] == ["-1", "2"], crit

    line = pymatsuo.close("A:3", "b_{1,2}; b_{1,3}")
    assert line["dimension"] == 3, line

    fusion = pymatsuo.fusion("W2A:3", "b_{1,2}", law="J")
    assert fusion["passed"], fusion

    flip = pymatsuo.flip_report("Wr3x3", 2, etas=["2"])
    assert flip["flip_dim_symbolic"] == 30, flip
    assert flip["flip_dims_at"]["2"] == 29, flip

    census = pymatsuo.classify("WrA4:2", sample=20, seed=3)
    assert census["configs"] > 0, census

    try:
        pymatsuo.close("A:3", "b_{1,9}")
    except ValueError:
        pass
    else:
        raise AssertionError("malformed generator accepted")

    print("pymatsuo smoke test passed")


if __name__ == "__main__":
    main()
