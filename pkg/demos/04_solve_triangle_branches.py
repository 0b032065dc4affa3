"""Numeric construction, branch by branch.

A solved plan fixes the gauge (first entity at the origin, second along the
positive x axis) and resolves each step with ruler-and-compass intersections.
Quadratic steps have up to two roots; the branch selector picks among them.
The two classic failure modes show up here as exceptions: circles that miss
each other, and entities the constraints never pin down.
"""

from gcs2d import (
    EmptyIntersectionError,
    UnderDeterminedError,
    build_graph,
    decompose,
    distance,
    enumerate_solutions,
    execute,
    extract_plan,
    fixture,
    point,
    verify,
)


def triangle(ab, ac, bc):
    return build_graph(
        [point("A"), point("B"), point("C")],
        [distance("A", "B", ab), distance("A", "C", ac), distance("B", "C", bc)],
    )


def main():
    g = triangle(3, 4, 5)
    plan = extract_plan(decompose(g), g)
    for branch in (0, 1):
        sol = execute(plan, g, (branch,))
        c = sol.placements["C"]
        print(f"branch {branch}: C = ({c.x:+.6f}, {c.y:+.6f}),"
              f" max residual {verify(g, sol).max_abs:.2e}")
    print("enumeration finds", len(enumerate_solutions(plan, g)), "solutions in total")

    print()
    g = triangle(1, 1, 3)
    plan = extract_plan(decompose(g), g)
    try:
        enumerate_solutions(plan, g)
    except EmptyIntersectionError as exc:
        print("sides 1,1,3:", exc)

    g = fixture("degenerate-triangle")  # sides 1, 1, 2
    plan = extract_plan(decompose(g), g)
    found = enumerate_solutions(plan, g)
    sol = found[0][1]
    print("sides 1,1,2: one tangent solution, degenerate steps", sol.degenerate_steps,
          "- C lands at", sol.placements["C"])

    print()
    g = fixture("three-angle-triangle")
    plan = extract_plan(decompose(g), g)
    try:
        execute(plan, g)
    except UnderDeterminedError as exc:
        print("three angles only:", exc, f"(entity {exc.entity})")


if __name__ == "__main__":
    main()
