"""Growing and shrinking minimally rigid graphs.

Starts from a single edge, grows graphs with the two vertex-addition
operations, then runs the reduction search to recover a construction
history and replays it.
"""

from collections import Counter

from gcs2d import (
    extend_h1,
    extend_h2,
    fixture,
    is_laman,
    random_laman,
    reduction_sequence,
    replay_sequence,
)


def main():
    g = fixture("triangle")
    print("triangle:", g.n, "vertices,", g.m, "edges, minimally rigid:", is_laman(g))

    g = extend_h1(g, "D", "A", "B")
    print("after attaching D to A,B:", g.n, "vertices,", g.m, "edges,", is_laman(g))

    g = extend_h2(g, "E", ("A", "B"), "C")
    print("after splitting edge A-B with E:", g.n, "vertices,", g.m, "edges,", is_laman(g))

    print()
    for seed in range(3):
        r = random_laman(12, seed, p_h2=0.4)
        print(f"random n=12 seed={seed}: {r.m} edges (2n-3 = {2 * 12 - 3}), rigid: {is_laman(r)}")

    print()
    spindle = fixture("moser-spindle")
    seq = reduction_sequence(spindle)
    print("Moser spindle reduces to base edge", seq.base_edge, "through:")
    for step in seq.steps:
        print("  ", step)
    replay = replay_sequence(seq)
    same = Counter(frozenset(c.between) for c in replay.constraints) == Counter(
        frozenset(c.between) for c in spindle.constraints
    )
    print("replaying the steps reproduces the spindle edge multiset:", same)


if __name__ == "__main__":
    main()
