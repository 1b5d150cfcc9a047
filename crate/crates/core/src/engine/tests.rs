use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::filtration::random::{random_filtration, RandomParams};
use crate::oracle::{oracle_diagram, OracleLimits};

fn s(v: &[u32]) -> Simplex {
    Simplex::from_slice(v)
}

fn f2() -> Field {
    Field::f2()
}

fn lit(ops: &[(bool, &[u32])]) -> ZigzagFiltration {
    ZigzagFiltration::from_literal(ops)
}

fn triangle_boundary() -> Vec<(bool, &'static [u32])> {
    vec![
        (true, &[0]),
        (true, &[1]),
        (true, &[2]),
        (true, &[0, 1]),
        (true, &[1, 2]),
        (true, &[0, 2]),
    ]
}

fn diagram(ops: &[(bool, &[u32])]) -> String {
    compute_diagram_with(&lit(ops), f2(), EngineOptions { audit: true })
        .unwrap()
        .0
        .to_text()
}

#[test]
fn first_vertex_is_born() {
    let mut e = ZigzagEngine::new(f2());
    let out = e.insert(&s(&[0])).unwrap();
    let ReflectionOutcome::Born { row } = out else { panic!("{out:?}") };
    assert_eq!(e.row_kind(row), Some(RowKind::F));
    assert_eq!(e.row_birth(row), Some(BirthKey::new(1, true)));
    assert_eq!(e.audit(), Ok(()));
}

#[test]
fn edge_kills_younger_component() {
    let mut e = ZigzagEngine::new(f2());
    e.insert(&s(&[0])).unwrap();
    e.insert(&s(&[1])).unwrap();
    let out = e.insert(&s(&[0, 1])).unwrap();
    let ReflectionOutcome::Killed { interval, leftover } = out else { panic!("{out:?}") };
    assert_eq!(interval, Interval::finite(0, 2, 3));
    assert!(matches!(e.row_kind(leftover), Some(RowKind::G(_))));
    e.audit().unwrap();
    assert_eq!(e.finish(), vec![Interval::infinite(0, 1)]);
}

#[test]
fn face_kills_loop() {
    let mut e = ZigzagEngine::new(Field::new(3).unwrap());
    for (_, v) in triangle_boundary() {
        e.insert(&s(v)).unwrap();
    }
    let out = e.insert(&s(&[0, 1, 2])).unwrap();
    assert!(matches!(
        out,
        ReflectionOutcome::Killed { interval, .. } if interval == Interval::finite(1, 6, 7)
    ));
    e.audit().unwrap();
}

#[test]
fn removal_examples() {
    assert_eq!(diagram(&[(true, &[0]), (false, &[0])]), "0 1 2\n");
    assert_eq!(
        diagram(&[(true, &[0]), (true, &[1]), (true, &[0, 1]), (false, &[0, 1])]),
        "0 1 inf\n0 2 3\n0 4 inf\n"
    );
    let mut ops = triangle_boundary();
    ops.push((true, &[0, 1, 2]));
    ops.push((false, &[0, 1, 2]));
    assert_eq!(diagram(&ops), "0 1 inf\n0 2 4\n0 3 5\n1 6 7\n1 8 inf\n");
}

#[test]
fn compute_diagram_examples() {
    assert!(compute_diagram(&ZigzagFiltration::default(), f2()).unwrap().is_empty());
    assert_eq!(diagram(&[(true, &[0])]), "0 1 inf\n");
    let mut ops = triangle_boundary();
    ops.push((true, &[0, 1, 2]));
    assert_eq!(diagram(&ops), "0 1 inf\n0 2 4\n0 3 5\n1 6 7\n");
}

#[test]
fn rejects_invalid_arrows() {
    let mut e = ZigzagEngine::new(f2());
    assert!(matches!(
        e.insert(&s(&[0, 1])),
        Err(EngineError::Complex(ComplexError::MissingFace { .. }))
    ));
    e.insert(&s(&[0])).unwrap();
    e.insert(&s(&[1])).unwrap();
    e.insert(&s(&[0, 1])).unwrap();
    assert!(matches!(
        e.remove(&s(&[0])),
        Err(EngineError::Complex(ComplexError::HasCoface { .. }))
    ));
    assert!(matches!(
        e.remove(&s(&[2])),
        Err(EngineError::Complex(ComplexError::Absent(_)))
    ));
    assert_eq!(e.arrow(), 3);
    e.audit().unwrap();
}

#[test]
fn audit_reports_corrupted_g_row() {
    let mut e = ZigzagEngine::new(f2());
    e.insert(&s(&[0])).unwrap();
    e.insert(&s(&[1])).unwrap();
    let ReflectionOutcome::Killed { leftover, .. } = e.insert(&s(&[0, 1])).unwrap() else {
        panic!()
    };
    // Drop the H partner's entry so that δg no longer matches it.
    let RowKind::G(h) = e.row_kind(leftover).unwrap() else { panic!() };
    let edge = e.complex.id_of(&s(&[0, 1])).unwrap();
    e.row_mut(h).entries.clear();
    e.index_remove(edge, h);
    let err = e.audit().unwrap_err();
    assert_eq!(err.row, Some(leftover));
    assert!(err.to_string().contains("δα_g ≠ α_h"), "{err}");
    assert!(err.to_string().contains(&format!("row {leftover}")));
}

#[test]
fn transposition_of_independent_entries_is_a_swap() {
    let mut e = ZigzagEngine::new(f2());
    for v in [0, 1] {
        e.insert(&s(&[v])).unwrap();
    }
    assert_eq!(e.suffix(), vec![s(&[1]), s(&[0])]);
    e.transpose_adjacent(0).unwrap();
    assert_eq!(e.suffix(), vec![s(&[0]), s(&[1])]);
    assert_eq!(e.stats().transpositions, 0);
    e.audit().unwrap();
    e.transpose_adjacent(0).unwrap();
    assert_eq!(e.suffix(), vec![s(&[1]), s(&[0])]);
    assert!(matches!(
        e.transpose_adjacent(1),
        Err(EngineError::InvalidPosition { pos: 1, len: 2 })
    ));
}

#[test]
fn transposition_refuses_face_before_coface() {
    let mut e = ZigzagEngine::new(f2());
    for v in [&[0][..], &[1], &[0, 1]] {
        e.insert(&s(v)).unwrap();
    }
    // Suffix is {0,1}, {1}, {0}: moving {1} ahead of {0,1} is invalid.
    assert!(matches!(
        e.transpose_adjacent(0),
        Err(EngineError::ForbiddenTransposition { .. })
    ));
    e.transpose_adjacent(1).unwrap();
    e.audit().unwrap();
}

/// Valid positions for a transposition in the current suffix.
fn legal_positions(e: &ZigzagEngine) -> Vec<usize> {
    let suffix = e.suffix();
    (0..suffix.len().saturating_sub(1))
        .filter(|&k| !suffix[k + 1].is_face_of(&suffix[k]))
        .collect()
}

#[test]
fn double_transposition_restores_diagram() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let params = RandomParams {
        vertices: 5,
        max_arrows: 40,
        ..RandomParams::default()
    };
    for _ in 0..100 {
        let fil = random_filtration(&mut rng, params);
        let cut = rng.random_range(0..=fil.len());
        let expected = compute_diagram(&fil, f2()).unwrap();
        let mut e = ZigzagEngine::new(f2());
        let mut out = Vec::new();
        for (t, op) in fil.ops().iter().enumerate() {
            if t == cut {
                let legal = legal_positions(&e);
                if !legal.is_empty() {
                    let pos = legal[rng.random_range(0..legal.len())];
                    e.transpose_adjacent(pos).unwrap();
                    e.audit().unwrap();
                    if !e.suffix()[pos + 1].is_face_of(&e.suffix()[pos]) {
                        e.transpose_adjacent(pos).unwrap();
                        e.audit().unwrap();
                    }
                }
            }
            out.extend(e.apply(op).unwrap());
        }
        out.extend(e.finish());
        assert_eq!(PersistenceDiagram::new(out), expected);
    }
}

#[test]
fn forced_transpositions_keep_oracle_diagram() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let params = RandomParams {
        vertices: 5,
        max_arrows: 40,
        ..RandomParams::default()
    };
    for p in [2, 3] {
        let field = Field::new(p).unwrap();
        for _ in 0..150 {
            let fil = random_filtration(&mut rng, params);
            let expected = oracle_diagram(&fil, field, OracleLimits::default()).unwrap();
            let mut e = ZigzagEngine::new(field);
            let mut out = Vec::new();
            for op in fil.ops() {
                for _ in 0..rng.random_range(0..3) {
                    let legal = legal_positions(&e);
                    if !legal.is_empty() {
                        e.transpose_adjacent(legal[rng.random_range(0..legal.len())]).unwrap();
                        e.audit().unwrap();
                    }
                }
                out.extend(e.apply(op).unwrap());
                e.audit().unwrap();
            }
            out.extend(e.finish());
            assert_eq!(PersistenceDiagram::new(out), expected, "{}", fil.to_ops_text());
        }
    }
}

#[test]
fn engine_matches_oracle_on_random_filtrations() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for p in [2, 5] {
        let field = Field::new(p).unwrap();
        for _ in 0..200 {
            let fil = random_filtration(&mut rng, RandomParams::default());
            let (got, _) = compute_diagram_with(&fil, field, EngineOptions { audit: true }).unwrap();
            let expected = oracle_diagram(&fil, field, OracleLimits::default()).unwrap();
            assert_eq!(got, expected, "{}", fil.to_ops_text());
        }
    }
}

#[test]
fn stats_track_sizes() {
    let mut ops = triangle_boundary();
    ops.push((true, &[0, 1, 2]));
    ops.push((false, &[0, 1, 2]));
    let (_, stats) = compute_diagram_with(&lit(&ops), f2(), EngineOptions::default()).unwrap();
    assert_eq!(stats.arrows, 8);
    assert_eq!(stats.max_complex_size, 7);
    assert_eq!(stats.peak_rows, 7);
}
