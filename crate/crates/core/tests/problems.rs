mod common;

use std::collections::BTreeSet;

use common::quasigroup_oracle;

use permuta::model::{InjTag, ModelSpec, PermTag, Problem, VarRef};
use permuta::problems::*;
use permuta::search::{solve, Algorithm, Goal, Heuristic, SearchConfig};

fn all_solutions(p: &Problem, spec: ModelSpec) -> Vec<Vec<u32>> {
    let cfg = SearchConfig::new(Algorithm::default_for(spec), Heuristic::LexStatic, Goal::AllSolutions);
    let r = solve(p, &cfg).unwrap();
    assert_eq!(r.stats.solutions as usize, r.solutions.len());
    for s in &r.solutions {
        assert!(p.is_solution(s));
    }
    r.solutions
}

fn primal_set(p: &Problem, spec: ModelSpec) -> BTreeSet<Vec<u32>> {
    all_solutions(p, spec).into_iter().map(|s| s[..p.primal.len()].to_vec()).collect()
}

fn perm_specs() -> impl Iterator<Item = ModelSpec> {
    PermTag::ALL.into_iter().map(ModelSpec::Permutation)
}

#[test]
fn langford_example_assignment() {
    let opts = LangfordOptions { symmetry_breaking: false, dual_separation: true };
    let p = langford_with(2, 4, ModelSpec::Permutation(PermTag::C), opts).unwrap();
    let x = [5, 1, 2, 3, 7, 4, 6, 8];
    let d = [2, 3, 4, 6, 1, 7, 5, 8];
    assert_eq!(langford_sequence(&x, 4), vec![2, 3, 4, 2, 1, 3, 1, 4]);
    let mut flat = x.to_vec();
    flat.extend(d);
    assert!(p.is_solution(&flat));
    let sols = all_solutions(&p, ModelSpec::Permutation(PermTag::C));
    assert!(sols.contains(&flat));
    // its reversal 41312432 is the representative kept by symmetry breaking
    let kept = langford(2, 4, ModelSpec::Permutation(PermTag::C)).unwrap();
    assert!(!kept.is_solution(&flat));
    let rep = all_solutions(&kept, ModelSpec::Permutation(PermTag::C));
    assert_eq!(rep.len(), 1);
    assert_eq!(langford_sequence(&rep[0][..8], 4), vec![4, 1, 3, 1, 2, 4, 3, 2]);
}

#[test]
fn langford_counts_with_and_without_mirrors() {
    for (n, m, both) in [(2, 3, 2), (2, 4, 2), (3, 9, 6)] {
        let spec = ModelSpec::Permutation(PermTag::C);
        let off =
            langford_with(n, m, spec, LangfordOptions { symmetry_breaking: false, dual_separation: true }).unwrap();
        let on = langford(n, m, spec).unwrap();
        assert_eq!(all_solutions(&off, spec).len(), both, "L({n},{m})");
        assert_eq!(all_solutions(&on, spec).len(), both / 2, "L({n},{m}) with symmetry breaking");
    }
}

#[test]
fn langford_solutions_are_model_independent() {
    for (n, m) in [(2, 3), (2, 4)] {
        let sets: Vec<_> =
            perm_specs().map(|s| (s, primal_set(&InstanceKind::Langford { n, m }.build(s).unwrap(), s))).collect();
        for (s, set) in &sets {
            assert_eq!(set, &sets[0].1, "L({n},{m}) {}", s.cli_name());
            for x in set {
                let seq = langford_sequence(x, m);
                for v in 1..=m {
                    let pos: Vec<usize> = seq.iter().enumerate().filter(|&(_, &u)| u == v).map(|(k, _)| k).collect();
                    assert!(pos.windows(2).all(|w| w[1] - w[0] == v as usize + 1), "{seq:?}");
                }
            }
        }
    }
}

#[test]
fn qg_order_four_matches_table_oracle() {
    for qg4 in [false, true] {
        for sym in [false, true] {
            let oracle = quasigroup_oracle(4, qg4, sym);
            // no idempotent QG4 of order 4 exists
            assert_eq!(oracle.is_empty(), qg4);
            for s in perm_specs() {
                let got = primal_set(&quasigroup(qg4, 4, s, sym).unwrap(), s);
                assert_eq!(got, oracle, "qg4={qg4} symmetry={sym} {}", s.cli_name());
            }
        }
    }
    let bench = InstanceKind::QG3(4).build(ModelSpec::Permutation(PermTag::C)).unwrap();
    assert_eq!(primal_set(&bench, ModelSpec::Permutation(PermTag::C)), quasigroup_oracle(4, false, true));
}

fn golomb_marks(p: &Problem, sols: &[Vec<u32>], marks: u32) -> BTreeSet<Vec<u32>> {
    sols.iter().map(|s| (1..=marks).map(|k| s[p.index_of(VarRef::aux(k))]).collect()).collect()
}

fn golomb_oracle(marks: u32, length: u32) -> BTreeSet<Vec<u32>> {
    let mut out = BTreeSet::new();
    let inner = marks as usize - 2;
    for bits in 0u64..1 << (length - 1) {
        if bits.count_ones() as usize != inner {
            continue;
        }
        let mut r = vec![0];
        r.extend((1..length).filter(|k| bits >> (k - 1) & 1 == 1));
        r.push(length);
        if is_golomb_ruler(&r) {
            out.insert(r);
        }
    }
    out
}

#[test]
fn golomb_solutions_are_model_independent() {
    let oracle = golomb_oracle(4, 6);
    assert_eq!(oracle, BTreeSet::from([vec![0, 1, 4, 6], vec![0, 2, 5, 6]]));
    let modes = PermTag::ALL
        .into_iter()
        .map(GolombMode::PaddedPermutation)
        .chain(InjTag::ALL.into_iter().map(GolombMode::Injection));
    for mode in modes {
        let p = golomb(4, 6, mode).unwrap();
        let sols = all_solutions(&p, mode.model());
        assert_eq!(golomb_marks(&p, &sols, 4), oracle, "{mode:?}");
        let first = (golomb_pairs(4).len()) as usize;
        for s in &sols {
            let used: BTreeSet<u32> = s[..p.primal.len()].iter().copied().collect();
            assert_eq!(used.len(), p.primal.len(), "padded values repeat: {s:?}");
            assert!(s[..first].iter().all(|&d| d <= 6));
        }
    }
}

#[test]
fn example_ruler() {
    let r = [0, 1, 4, 9, 11];
    assert!(is_golomb_ruler(&r));
    assert!(!golomb_distances(&r).contains(&6));
    assert!(!is_golomb_ruler(&[0, 1, 2, 4]));
}

#[test]
fn magic_three() {
    let spec = ModelSpec::Permutation(PermTag::C);
    let p = InstanceKind::Magic(3).build(spec).unwrap();
    let sols = all_solutions(&p, spec);
    // the Lo Shu square in its eight orientations
    assert_eq!(sols.len(), 8);
    for s in &sols {
        let x = &s[..9];
        for r in 0..3 {
            assert_eq!(x[3 * r..3 * r + 3].iter().sum::<u32>(), magic_total(3));
        }
        assert_eq!(x[4], 5);
    }
}

#[test]
fn sport_small_first_solution() {
    let none = InstanceKind::Sport(4).build(ModelSpec::Permutation(PermTag::C)).unwrap();
    assert!(all_solutions(&none, ModelSpec::Permutation(PermTag::C)).is_empty());
    for (n, spec) in [(6, ModelSpec::Permutation(PermTag::C)), (5, ModelSpec::Injection(InjTag::C2))] {
        let p = InstanceKind::Sport(n).build(spec).unwrap();
        let cfg = SearchConfig::new(Algorithm::default_for(spec), Heuristic::SdP, Goal::FirstSolution);
        let r = solve(&p, &cfg).unwrap();
        assert_eq!(r.stats.solutions, 1, "sport:{n}");
        let x = &r.solutions[0][..p.primal.len()];
        assert_eq!(x.iter().collect::<BTreeSet<_>>().len(), x.len());
    }
}
