"""Whole-timespan analysis: generate a synthetic debate, cluster its users.

Run: python3 demos/02_aggregate_pipeline.py
"""

from collections import Counter

from polarscope import (
    adjusted_rand_index,
    factor_vectors,
    feature_matrix,
    generate_scenario,
    preset,
    select_k,
)


def main() -> None:
    scenario = preset("aggregate-vaccine")
    print(f"scenario: {scenario.name} ({scenario.n_users} users, 4 planted archetypes)")
    ds, truth = generate_scenario(scenario, seed=7)
    print(f"generated {len(ds)} interactions")

    vectors = factor_vectors(ds)
    ids, X = feature_matrix(vectors, scenario.params.stiffness)
    model = select_k(X, scenario.params, ids=ids)
    print(
        f"\nselect_k chose k={model.k} "
        f"(silhouette {model.silhouette:.3f}, davies_bouldin {model.davies_bouldin:.3f})"
    )

    assignment = model.assignment
    print(f"\n{'cluster':>7} {'size':>6} {'share':>7}   dominant planted archetype")
    for cluster, size in sorted(model.cluster_sizes().items()):
        members = [uid for uid in ids if assignment[uid] == cluster]
        dominant, hits = Counter(
            truth.archetype_final[uid] for uid in members
        ).most_common(1)[0]
        share = 100.0 * size / len(ids)
        purity = 100.0 * hits / size
        print(f"{cluster:>7} {size:>6} {share:>6.1f}%   {dominant} ({purity:.0f}% pure)")

    ari = adjusted_rand_index(
        [truth.archetype_final[uid] for uid in ids],
        [assignment[uid] for uid in ids],
    )
    print(f"\nagreement with planted archetypes: ARI = {ari:.3f}")


if __name__ == "__main__":
    main()
