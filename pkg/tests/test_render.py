from gcs2d import decompose, enumerate_solutions, extract_plan, fixture, to_dot, to_svg


def test_dot_lists_every_entity_and_constraint():
    g = fixture("triangle")
    dot = to_dot(g)
    assert dot.startswith("graph")
    for entity_id in ("A", "B", "C"):
        assert f'"{entity_id}"' in dot
    assert dot.count("--") == 3
    assert "distance=1" in dot


def test_dot_shapes_follow_entity_kinds():
    dot = to_dot(fixture("cramer-castillon"))
    assert "shape=box" in dot  # lines
    assert "shape=doublecircle" in dot  # circles
    assert "shape=circle" in dot  # points


def test_svg_contains_labelled_dots():
    g = fixture("triangle")
    plan = extract_plan(decompose(g), g)
    sol = enumerate_solutions(plan, g)[0][1]
    svg = to_svg(g, sol.placements)
    assert svg.startswith("<svg")
    assert 'viewBox="0 0 800 600"' in svg
    assert svg.count('fill="crimson"') == 3
    for entity_id in ("A", "B", "C"):
        assert f">{entity_id}</text>" in svg


def test_svg_draws_lines_for_line_entities():
    g = fixture("quad-angle-aux")
    plan = extract_plan(decompose(g), g)
    sol = enumerate_solutions(plan, g, limit=1)[0][1]
    svg = to_svg(g, sol.placements)
    assert "<line" in svg
