use permuta::domain::Domain;
use permuta::lab::lattice::{config, config_count, Relation};
use permuta::lab::{
    self, all_distinct, brute_force_gac, check_level, enforce_pc, fixtures, BinaryNetwork, LatticeMode, Level, Verdict,
};
use permuta::model::{ModelSpec, PermTag, VarRef};
use proptest::prelude::*;

fn d(v: &[u32]) -> Domain {
    Domain::from_values(v.iter().copied())
}

fn perm_models(tags: &[PermTag]) -> Vec<ModelSpec> {
    tags.iter().map(|&t| ModelSpec::Permutation(t)).collect()
}

#[test]
fn stored_instances_reproduce_except_known_gaps() {
    let mut mismatches = Vec::new();
    for f in fixtures::builtin() {
        for r in f.replay().unwrap() {
            if !r.ok() {
                mismatches.push(format!("{} {} {}", r.fixture, r.level, r.model.cli_name()));
            }
        }
    }
    mismatches.sort();
    assert_eq!(
        mismatches,
        vec!["even-ends ACPC neq-c-neq", "four-two ACPC neq-c-neq", "overlapping-triples GAC all-diff"]
    );
}

#[test]
fn small_lattice_has_no_violation() {
    let models = perm_models(&[PermTag::Neq, PermTag::C, PermTag::AllDiff]);
    let rep = lab::verify_lattice(3, &Level::ALL, &models, LatticeMode::Exhaustive);
    assert_eq!(rep.configs, 343);
    assert_eq!(rep.violations(), 0);
    assert!(!rep.arrows.is_empty());
}

#[test]
fn ac_row_at_four() {
    let models = perm_models(&PermTag::ALL);
    let rep = lab::verify_lattice(4, &[Level::AC, Level::GAC], &models, LatticeMode::Exhaustive);
    assert_eq!(rep.configs, 50_625);
    assert_eq!(rep.violations(), 0);
}

#[test]
fn full_lattice_violations_are_the_bc_dual_row() {
    let rep = lab::verify_lattice(3, &Level::ALL, &perm_models(&PermTag::ALL), LatticeMode::Exhaustive);
    let viol: Vec<_> = rep.arrows.iter().filter(|a| matches!(a.verdict, Verdict::Violated(_))).collect();
    assert_eq!(viol.len(), 1);
    assert_eq!(viol[0].stronger, (Level::BC, PermTag::AllDiff));
    assert_eq!(viol[0].weaker, (Level::BC, PermTag::NeqCNeq));
    // incomparabilities other than GAC vs ACPC all have both witnesses
    for a in &rep.arrows {
        if a.relation == Relation::Incomparable && a.stronger.0 != Level::GAC {
            assert!(matches!(a.verdict, Verdict::Incomparable(..)), "{:?}", a);
        }
    }
    let csv = rep.to_csv();
    assert!(csv.starts_with("config_id,level_pair,model_pair,verdict,witness\n"));
    assert!(csv.contains(",violated,"));
}

#[test]
fn sampling_is_reproducible() {
    let models = perm_models(&[PermTag::Neq, PermTag::C]);
    let a = lab::verify_lattice(5, &[Level::AC], &models, LatticeMode::Sample { count: 200, seed: 7 });
    let b = lab::verify_lattice(5, &[Level::AC], &models, LatticeMode::Sample { count: 200, seed: 7 });
    assert_eq!(a, b);
    assert_eq!(a.violations(), 0);
}

#[test]
fn alldiff_strictness_witness() {
    let primal = [d(&[1, 2]), d(&[1, 2]), d(&[1, 2]), d(&[3, 4, 5]), d(&[3, 4, 5])];
    let values: Vec<u32> = (1..=5).collect();
    assert!(check_level(&BinaryNetwork::permutation(&primal, &values, PermTag::C), Level::AC));
    assert!(!check_level(&BinaryNetwork::permutation(&primal, &values, PermTag::AllDiff), Level::GAC));
}

#[test]
fn pc_tightens_even_pair() {
    let f = fixtures::find("even-ends").unwrap();
    let net = f.network(ModelSpec::Permutation(PermTag::Neq)).unwrap();
    let out = enforce_pc(&net).unwrap();
    assert_eq!(out.relation_pairs(0, 2), vec![(1, 3), (3, 1)]);
    assert_eq!(out.domains, net.domains);
}

// Independent AC oracle: scan constraints directly instead of relation rows.
fn naive_ac(primal: &[Domain], tag: PermTag) -> bool {
    let values: Vec<u32> = (1..=primal.len() as u32).collect();
    let p = lab::permutation_problem(primal, &values, tag);
    let doms = p.flat_domains();
    if doms.iter().any(|d| d.is_empty()) {
        return false;
    }
    for c in &p.constraints {
        let scope = c.scope();
        if scope.len() != 2 {
            continue;
        }
        for (x, y) in [(scope[0], scope[1]), (scope[1], scope[0])] {
            for a in p.domain(x) {
                let ok = p.domain(y).iter().any(|b| c.is_satisfied(|v: VarRef| if v == x { a } else { b }));
                if !ok {
                    return false;
                }
            }
        }
    }
    true
}

#[test]
fn ac_matches_naive_oracle() {
    let values: Vec<u32> = (1..=3).collect();
    for id in 0..config_count(3) {
        let primal = config(3, id);
        for tag in [PermTag::Neq, PermTag::C, PermTag::NeqCNeq] {
            let net = BinaryNetwork::permutation(&primal, &values, tag);
            assert_eq!(check_level(&net, Level::AC), naive_ac(&primal, tag), "{id} {tag:?}");
        }
    }
}

#[test]
fn gac_matches_brute_force() {
    let values: Vec<u32> = (1..=4).collect();
    for id in (0..config_count(4)).step_by(37) {
        let primal = config(4, id);
        let net = BinaryNetwork::permutation(&primal, &values, PermTag::AllDiff);
        let bf = brute_force_gac(&primal, all_distinct).unwrap();
        let consistent = bf == primal;
        assert_eq!(check_level(&net, Level::GAC), consistent, "{id}");
    }
}

fn binary_tags() -> Vec<PermTag> {
    PermTag::ALL.into_iter().filter(|t| !t.has_alldiff()).collect()
}

fn domain_strategy(n: u32) -> impl Strategy<Value = Vec<Domain>> {
    prop::collection::vec(1u128..(1 << n), n as usize)
        .prop_map(|v| v.into_iter().map(|m| Domain::from_bits(m << 1)).collect())
}

proptest! {
    #[test]
    fn enforce_pc_idempotent_and_shrinking(primal in domain_strategy(4), tag in prop::sample::select(PermTag::ALL.to_vec())) {
        let values: Vec<u32> = (1..=4).collect();
        let net = BinaryNetwork::permutation(&primal, &values, tag);
        if let Ok(out) = enforce_pc(&net) {
            for (a, b) in out.domains.iter().zip(&net.domains) {
                prop_assert!(a.is_subset(*b));
            }
            let again = enforce_pc(&out).unwrap();
            prop_assert_eq!(again, out);
        }
    }

    #[test]
    fn level_hierarchy_per_network(primal in domain_strategy(4), tag in prop::sample::select(binary_tags())) {
        let values: Vec<u32> = (1..=4).collect();
        let net = BinaryNetwork::permutation(&primal, &values, tag);
        let chain = [Level::ACPC, Level::SAC, Level::PIC, Level::RPC, Level::AC, Level::BC];
        for w in chain.windows(2) {
            if check_level(&net, w[0]) {
                prop_assert!(check_level(&net, w[1]), "{} without {}", w[0], w[1]);
            }
        }
    }
}

#[test]
fn random_fixpoint_equivalences() {
    let bad = lab::sweep::propagator_equivalence(400, 11);
    assert!(bad.is_empty(), "{:?}", &bad[..bad.len().min(3)]);
}

#[test]
fn gac_filter_matches_enumeration() {
    let bad = lab::sweep::gac_oracle(400, 5);
    assert!(bad.is_empty(), "{:?}", &bad[..bad.len().min(3)]);
}

#[test]
fn c2_without_dummies_is_stronger_than_neq() {
    use permuta::model::{build_injection_model, InjTag};
    use permuta::propagate::{propagate_fixpoint, DomainStore};
    let primal = vec![d(&[1, 2, 3]), d(&[1, 2]), d(&[1, 2])];
    let fix = |tag| {
        let mut p = build_injection_model(3, 3, ModelSpec::Injection(tag)).unwrap();
        p.primal = primal.clone();
        let mut s = DomainStore::from_problem(&p);
        assert!(!propagate_fixpoint(&p, &mut s).is_wipeout());
        s.domains()[..3].to_vec()
    };
    assert_eq!(fix(InjTag::Neq), primal);
    assert_eq!(fix(InjTag::C2)[0], d(&[3]));
}
