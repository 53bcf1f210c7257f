"""Smoke test for the miniwalls extension module on the P2 worked instance.

Build and place the module next to this script, then run it:

    cargo build --release -p miniwalls-py --features extension-module
    cp target/release/libminiwalls.so python/miniwalls$(python3 -c 'import sysconfig; print(sysconfig.get_config_var("EXT_SUFFIX"))')
    python3 python/smoke_test.py
"""

import os
import sys
from fractions import Fraction

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import miniwalls as mw  # noqa: E402


def main() -> None:
    p2 = mw.Lattice.preset("P2")
    stab = mw.Stability(p2, ["-1/2"], [1])
    t = mw.ChernType(0, [1], ch2="-3/2")
    assert t.c2(p2) == 2
    assert stab.shadow(t) == (0, Fraction(1), Fraction(1))
    assert mw.central_charge(t, stab) == (0, 1, 1)

    walls = mw.find_mini_walls(t, stab, "1/2", 2, rank_bound=1, filter="aside")
    assert [w["m_squared"] for w in walls] == [Fraction(5, 4)], walls
    (witness,) = walls[0]["witnesses"]
    assert witness["shadow"] == (1, 0, Fraction(-1, 8)), witness

    heart = mw.find_mini_walls(t, stab, "1/2", 2, rank_bound=1, filter="heart")
    assert [w["m_squared"] for w in heart] == [Fraction(5, 4), Fraction(13, 4)]
    assert mw.find_mini_walls(t, stab, "1/2", 2, rank_bound=1, filter="bside") == []

    cells = mw.chamber_decomposition(t, stab, "1/2", 2, rank_bound=1, filter="aside")
    assert [c["kind"] for c in cells] == ["chamber", "wall", "chamber"]

    a = mw.ChernType(1, [0], ch2=0)
    assert mw.wall_of_pair(t, a, stab) == Fraction(5, 4)
    assert mw.phase_compare(a, t, stab, 2) == -1
    assert mw.phase_compare(a, t, stab, Fraction(1, 2)) == 1

    check = mw.crosscheck_walls(t, stab, "1/2", 2, rank_bound=1, filter="aside")
    assert check["clean"] and check["walls"] == [Fraction(5, 4)], check

    points = mw.ChernType(0, [0], ch2=3)
    assert mw.classify_moduli(points, stab)["kind"] == "SymmetricProduct"
    assert mw.classify_moduli(points, stab)["symmetric_power"] == 3

    rank2 = mw.ChernType(2, [1], c2=3, lattice=p2)
    region = mw.walls_through_region(rank2, p2, [1], [1])
    assert region["walls"] == [] and region["saturated"]
    assert mw.classify_moduli(rank2, stab)["kind"] == "GiesekerSimpson"
    assert mw.dual_type(mw.dual_type(rank2)) == rank2
    strata = mw.uhlenbeck_strata(rank2, p2)
    assert [(s[1], s[2]) for s in strata] == [(3, 0), (2, 1), (1, 2)], strata

    threshold = mw.large_volume_threshold(t, stab, rank_bound=1)
    assert threshold["threshold"] == 1

    try:
        mw.find_mini_walls(t, stab, 1, rank_bound=1, filter="heart")
    except mw.RefusedError:
        pass
    else:
        raise AssertionError("unbounded interval at heart level must be refused")

    try:
        mw.Stability(p2, [0], [-1])
    except ValueError:
        pass
    else:
        raise AssertionError("non-ample omega must be rejected")

    print("smoke test passed")


if __name__ == "__main__":
    main()
