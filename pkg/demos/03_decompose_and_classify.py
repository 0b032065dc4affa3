"""Bottom-up decomposition over the whole fixture catalog.

Every constraint edge seeds a cluster; pair and triangle merge rules then
run to a fixpoint.  Graphs split into three classes: fully reducible (one
cluster swallows everything), partially reducible (some rigid pieces form
but cannot recombine), and irreducible (no rule ever applies).
"""

from gcs2d import decompose, fixture, fixture_names


def main():
    for name in fixture_names():
        g = fixture(name)
        result = decompose(g)
        pieces = [sorted(c.entity_ids) for c in result.final_clusters if not c.is_seed]
        print(f"{name:22s} {result.reducibility.value:20s} merges={len(result.merge_log)}")
        if result.reducibility.value == "partially_reducible" and pieces:
            print(f"{'':22s} rigid pieces found: {pieces}")
    print()

    result = decompose(fixture("moser-spindle"))
    print("Moser spindle merge log:")
    for record in result.merge_log:
        print(f"  {record.rule}: clusters {record.parents} join over {record.shared}")


if __name__ == "__main__":
    main()
