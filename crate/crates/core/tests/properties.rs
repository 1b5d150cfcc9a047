use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use zzcoh::engine::{compute_diagram_with, EngineOptions};
use zzcoh::filtration::random::{random_filtration, RandomParams};
use zzcoh::filtration::{build_rips, PointCloud};
use zzcoh::oracle::{betti, oracle_diagram, std_persistence, OracleLimits};
use zzcoh::{compute_diagram, Field, PersistenceDiagram, ZigzagFiltration};

fn filtration() -> impl Strategy<Value = ZigzagFiltration> {
    (any::<u64>(), 2u32..=7, 1usize..=80, 0usize..=3, 0.3f64..0.9).prop_map(
        |(seed, vertices, max_arrows, max_dim, insert_bias)| {
            let params = RandomParams {
                vertices,
                max_arrows,
                max_dim,
                insert_bias,
            };
            random_filtration(&mut ChaCha8Rng::seed_from_u64(seed), params)
        },
    )
}

fn field() -> impl Strategy<Value = Field> {
    prop::sample::select(vec![2u64, 3, 5, 7, 11]).prop_map(|p| Field::new(p).unwrap())
}

fn audited(fil: &ZigzagFiltration, field: Field) -> PersistenceDiagram {
    compute_diagram_with(fil, field, EngineOptions { audit: true }).unwrap().0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn engine_matches_module_oracle(fil in filtration(), field in field()) {
        let expected = oracle_diagram(&fil, field, OracleLimits::default()).unwrap();
        prop_assert_eq!(audited(&fil, field), expected);
    }

    #[test]
    fn interval_counts_match_betti_numbers(fil in filtration(), field in field()) {
        let d = compute_diagram(&fil, field).unwrap();
        let top = fil.max_dim().unwrap_or(0);
        let mut mismatch = None;
        fil.replay(|t, k| {
            for q in 0..=top {
                let alive = d.in_dim(q).filter(|i| i.contains(t)).count();
                if mismatch.is_none() && alive != betti(k, q, field) {
                    mismatch = Some((t, q));
                }
            }
        });
        prop_assert_eq!(mismatch, None);
    }

    #[test]
    fn each_arrow_changes_total_rank_by_one(fil in filtration()) {
        let d = compute_diagram(&fil, Field::f2()).unwrap();
        for t in 1..=fil.len() {
            prop_assert_eq!(d.alive_at(t).abs_diff(d.alive_at(t - 1)), 1);
        }
    }

    #[test]
    fn prefix_diagram_is_clipped_diagram(fil in filtration(), cut in any::<prop::sample::Index>(), field in field()) {
        let len = cut.index(fil.len() + 1);
        let full = compute_diagram(&fil, field).unwrap();
        prop_assert_eq!(compute_diagram(&fil.prefix(len), field).unwrap(), full.clip(len));
    }

    #[test]
    fn diagram_text_round_trips(fil in filtration()) {
        let d = compute_diagram(&fil, Field::f2()).unwrap();
        prop_assert_eq!(PersistenceDiagram::read_from(d.to_text().as_bytes()).unwrap(), d);
    }

    #[test]
    fn forward_rips_matches_column_reduction(
        points in prop::collection::vec(prop::array::uniform3(0.0f64..1.0), 1..20),
        threshold in 0.0f64..0.8,
        field in field(),
    ) {
        let pc = PointCloud::new(points.iter().map(|p| p.to_vec()).collect()).unwrap();
        let fil = build_rips(&pc, threshold, 3);
        prop_assert_eq!(compute_diagram(&fil, field).unwrap(), std_persistence(&fil, field).unwrap());
    }
}
