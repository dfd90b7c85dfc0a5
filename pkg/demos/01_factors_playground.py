"""Factor basics on a hand-built log: opinion lean, attention spread, contrast.

Run: python3 demos/01_factors_playground.py
"""

from datetime import datetime, timezone

import numpy as np

from polarscope import (
    CommunitySpec,
    Dataset,
    DebateConfig,
    InteractionRecord,
    factor_vectors,
    normalized_entropy,
    opinion_factor,
    transform,
)

CONFIG = DebateConfig(
    debate_name="playground",
    community_pos=CommunitySpec("camp_pos", ("pos_a", "pos_b", "pos_c", "pos_d")),
    community_neg=CommunitySpec("camp_neg", ("neg_a", "neg_b", "neg_c", "neg_d")),
)


def record(user: str, source: str, day: int) -> InteractionRecord:
    community = "camp_pos" if source.startswith("pos") else "camp_neg"
    ts = datetime(2022, 1, 1 + day, tzinfo=timezone.utc)
    return InteractionRecord(user, source, community, ts)


def build_dataset() -> Dataset:
    rows = []
    # devotee: one side, one source
    rows += [record("devotee", "pos_a", d) for d in range(8)]
    # omnivore: one side, every source equally
    rows += [record("omnivore", s, d) for d in range(2) for s in ("pos_a", "pos_b", "pos_c", "pos_d")]
    # straddler: both sides, evenly
    rows += [record("straddler", "pos_a", d) for d in range(4)]
    rows += [record("straddler", "neg_a", d) for d in range(4)]
    # leaner: mostly one side, a little of the other
    rows += [record("leaner", "neg_b", d) for d in range(6)]
    rows += [record("leaner", "pos_b", d) for d in range(2)]
    return Dataset.from_records(CONFIG, rows)


def main() -> None:
    print("== entropy building block ==")
    for dist in ((0.5, 0.5), (0.9, 0.1), (1.0, 0.0)):
        print(f"  normalized_entropy{dist} = {normalized_entropy(dist):.4f}")

    print("\n== oriented opinion from interaction counts ==")
    for pos, neg in ((10, 0), (0, 10), (5, 5), (9, 1), (1, 9)):
        print(f"  {pos:>2} pos / {neg:>2} neg -> opinion {opinion_factor(pos, neg):.4f}")

    print("\n== per-user factors on a tiny log ==")
    ds = build_dataset()
    print(f"  {'user':<10} {'opinion':>8} {'src_pos':>8} {'src_neg':>8}")
    for v in factor_vectors(ds):
        print(
            f"  {v.user_id:<10} {v.opinion:>8.3f} {v.source_pos:>8.3f} {v.source_neg:>8.3f}"
        )
    print("  (source factor 1.0 = single source, 0.0 = evenly spread; a user")
    print("   with no interactions on a side scores 1.0 there by convention)")

    print("\n== contrast transform: stiffness reshapes the unit interval ==")
    xs = np.array([0.0, 0.25, 0.5, 0.75, 1.0])
    print(f"  {'x':>10}", *(f"{x:>7.2f}" for x in xs))
    for s in (0.33, 0.5, 1.0, 2.0):
        ys = transform(xs, s)
        print(f"  s = {s:<5}", *(f"{y:>7.3f}" for y in ys))
    print("  (fixed points at 0, 0.5, 1; s < 1 pushes values toward the ends,")
    print("   which separates near-saturated users before clustering)")


if __name__ == "__main__":
    main()
