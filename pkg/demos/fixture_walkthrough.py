"""Walk the bundled 12-researcher fixture through every stage of the pipeline.

    python3 demos/fixture_walkthrough.py
"""

from __future__ import annotations

from pathlib import Path

from kinmerit.ingest import load_bundle
from kinmerit.pipeline import run_pipeline

FIXTURE = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "ok"


def main() -> None:
    bundle = load_bundle(FIXTURE)
    res = run_pipeline(bundle)

    print("cited-only medians")
    for (year, cat), median in res.baseline.cells.items():
        print(f"  {year} {cat:<6} {median:g}")
    print("  empty cells:", sorted(res.baseline.empty_cells))

    print("\nproductivity and rank")
    for rid, card in res.scorecards.items():
        r = res.ranked.get(rid)
        where = f"{r.percentile:6.1f} in {r.cohort_key[0]} {r.cohort_key[1].name}" if r else "  not ranked"
        print(f"  {rid}  P={card.P:.3f}  t={card.t_years}  {where}")

    print("\nlinks and pairs")
    for link in res.links:
        print(f"  {link.university_id} {link.surname}: children {sorted(link.children)} "
              f"parents {sorted(link.parents)}")
    for p in res.pairs:
        print(f"  pair {p.child_id} <- {sorted(p.parent_ids)} ({p.cardinality_class.value})")

    table1 = res.report("overall")
    print("\nchildren vs controls")
    for g in table1.groups:
        avg = "-" if g.avg_percentile is None else f"{g.avg_percentile:.1f}"
        print(f"  {g.label:<30} n={g.n_observations:<3} avg={avg}")


if __name__ == "__main__":
    main()
