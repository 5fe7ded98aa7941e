use permuta::model::{Constraint, ModelSpec, PermTag, Problem, VarRef};
use permuta::problems::InstanceKind;
use permuta::sat::*;
use permuta::search::{solve, Algorithm, Goal, Heuristic, SearchConfig};

fn x(i: u32) -> VarRef {
    VarRef::primal(i)
}

fn atom(n: u32, i: u32, j: u32) -> usize {
    BoolAtom { i, j }.index(n) as usize
}

fn langford(n: u32, m: u32) -> Problem {
    InstanceKind::Langford { n, m }.build(ModelSpec::Permutation(PermTag::Neq)).unwrap()
}

#[test]
fn lockstep_langford() {
    for (n, m) in [(2, 3), (2, 4)] {
        let p = langford(n, m);
        for v in [SatVariant::PrimalSAT, SatVariant::ChannellingSAT] {
            let r = lockstep_compare(&p, v).unwrap();
            assert!(r.equal(), "L({n},{m}) {v:?}: {r:?}");
            assert!(r.fc_branches > 0);
        }
    }
}

#[test]
fn lockstep_random_seeds() {
    for seed in 0..50 {
        let p = random_permutation_csp(5, 5, 0.7, seed);
        for v in [SatVariant::PrimalSAT, SatVariant::ChannellingSAT] {
            let r = lockstep_compare(&p, v).unwrap();
            assert!(r.equal(), "seed {seed} {v:?}: {r:?}");
        }
    }
}

#[test]
fn channelling_clauses_catch_dual_wipeout() {
    // x1 = 1 rules out value 2 for x2, x3, x4
    let side: Vec<Constraint> = (2..=4)
        .map(|k| {
            let allowed =
                (1..=4).flat_map(|u| (1..=4).map(move |v| (u, v))).filter(|&(u, v)| !(u == 1 && v == 2)).collect();
            Constraint::BinaryTable { a: x(1), b: x(k), allowed }
        })
        .collect();
    for (variant, want) in [(SatVariant::ChannellingSAT, UnitStatus::Conflict), (SatVariant::PrimalSAT, UnitStatus::Ok)]
    {
        let cs = encode_direct(4, variant, &side).unwrap();
        let mut a = empty_assignment(&cs);
        a[atom(4, 1, 1)] = Some(true);
        let (out, st) = unit_propagate(&cs, a);
        assert_eq!(st, want, "{variant:?}");
        if st == UnitStatus::Ok {
            for (i, j) in [(1, 2), (2, 2), (3, 2), (4, 2), (2, 1), (3, 1), (4, 1)] {
                assert_eq!(out[atom(4, i, j)], Some(false));
            }
        }
    }
}

#[test]
fn mac_beats_dp_on_shared_value() {
    let n = 3;
    let no3: Vec<(u32, u32)> =
        (1..=n).flat_map(|u| (1..=n).map(move |v| (u, v))).filter(|&(u, v)| u != 3 && v != 3).collect();
    let side: Vec<Constraint> = [(1, 2), (2, 3), (1, 3)]
        .iter()
        .map(|&(a, b)| Constraint::BinaryTable { a: x(a), b: x(b), allowed: no3.clone() })
        .collect();
    let mut p = Problem::new(n, n);
    let scope: Vec<VarRef> = (1..=n).map(x).collect();
    p.post_permutation(&scope, &[1, 2, 3], PermTag::C);
    for c in &side {
        p.post(c.clone());
    }
    let r = solve(&p, &SearchConfig::new(Algorithm::MAC, Heuristic::LexStatic, Goal::AllSolutions)).unwrap();
    assert_eq!((r.stats.solutions, r.stats.nodes), (0, 0));
    let cs = encode_direct(n, SatVariant::ChannellingSAT, &side).unwrap();
    let (_, st) = unit_propagate(&cs, empty_assignment(&cs));
    assert_eq!(st, UnitStatus::Ok);
    let dp = dp_solve(&cs, BranchOrder::Lex, true);
    assert!(!dp.is_sat());
    assert!(dp.branches >= 1);
}

#[test]
fn model_counts_are_factorials() {
    let mut f = 1;
    for n in 1..=5u32 {
        f *= n as usize;
        for v in [SatVariant::PrimalSAT, SatVariant::ChannellingSAT] {
            let cs = encode_direct(n, v, &[]).unwrap();
            assert_eq!(dp_solve(&cs, BranchOrder::Lex, true).models.len(), f, "n={n} {v:?}");
        }
    }
}

#[test]
fn channelling_contains_primal() {
    let p = encode_direct(5, SatVariant::PrimalSAT, &[]).unwrap();
    let c = encode_direct(5, SatVariant::ChannellingSAT, &[]).unwrap();
    assert!(p.clauses.iter().all(|cl| c.clauses.contains(cl)));
    assert_eq!(c.clauses.len(), p.clauses.len() + 5);
}

#[test]
fn dp_models_satisfy_problem() {
    let p = langford(2, 4);
    let r = solve(&p, &SearchConfig::new(Algorithm::MAC, Heuristic::LexStatic, Goal::AllSolutions)).unwrap();
    let lock = lockstep_compare(&p, SatVariant::ChannellingSAT).unwrap();
    assert_eq!(lock.dp_models, r.stats.solutions);
    assert_eq!(r.stats.solutions, 2);
}
