"""Emit DOT and SVG renderings next to this script.

The DOT view shows the constraint graph itself (entities as nodes, shaped by
kind).  The SVG view needs solved placements, so the demo solves the
quadrilateral-with-auxiliary-point fixture first.
"""

from pathlib import Path

from gcs2d import decompose, enumerate_solutions, extract_plan, fixture, to_dot, to_svg

OUT = Path(__file__).resolve().parent


def main():
    g = fixture("quad-angle-aux")
    dot_path = OUT / "quad_angle_aux.dot"
    dot_path.write_text(to_dot(g), encoding="utf-8")
    print("wrote", dot_path)

    plan = extract_plan(decompose(g), g)
    sol = enumerate_solutions(plan, g, limit=1)[0][1]
    svg_path = OUT / "quad_angle_aux.svg"
    svg_path.write_text(to_svg(g, sol.placements), encoding="utf-8")
    print("wrote", svg_path)
    print("open the SVG in a browser; points are red dots, carrier lines blue")


if __name__ == "__main__":
    main()
