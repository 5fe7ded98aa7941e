//! Randomized cross-checks between propagators of equivalent models.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{all_distinct, brute_force_gac};
use crate::domain::Domain;
use crate::model::{build_injection_model, build_permutation_model, InjTag, ModelSpec, PermTag, Problem};
use crate::propagate::{gac_alldiff, propagate_fixpoint, DomainStore};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepMismatch {
    pub case: usize,
    pub detail: String,
}

fn random_domain(rng: &mut ChaCha8Rng, lo: u32, hi: u32) -> Domain {
    loop {
        let d: Domain = (lo..=hi).filter(|_| rng.gen_bool(0.6)).collect();
        if !d.is_empty() {
            return d;
        }
    }
}

/// Fixpoint domains, or `None` on wipeout.
fn fixpoint(p: &Problem) -> Option<Vec<Domain>> {
    let mut s = DomainStore::from_problem(p);
    let out = propagate_fixpoint(p, &mut s);
    (!out.is_wipeout()).then(|| s.domains().to_vec())
}

fn with_primal(p: &Problem, primal: &[Domain]) -> Problem {
    let mut q = p.clone();
    q.primal = primal.to_vec();
    q
}

fn primal_part(f: &Option<Vec<Domain>>, n: usize) -> Option<Vec<Domain>> {
    f.as_ref().map(|d| d[..n].to_vec())
}

const C_CLASS: [PermTag; 4] = [PermTag::C, PermTag::NeqC, PermTag::CNeq, PermTag::NeqCNeq];
const INJ_CLASS: [InjTag; 4] = [InjTag::Neq, InjTag::C1, InjTag::C2, InjTag::C3];

/// On `count` random stores (permutations with n <= 6, injections with
/// n <= 5, n < m <= 8): the channelling models reach one fixpoint, every
/// model with an all-different matches the primal all-different on the
/// primal block, and the injection channellings match the primal
/// not-equals on the primal block.
pub fn propagator_equivalence(count: usize, seed: u64) -> Vec<SweepMismatch> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    for case in 0..count {
        if case % 2 == 0 {
            let n = rng.gen_range(2..=6u32);
            let primal: Vec<Domain> = (0..n).map(|_| random_domain(&mut rng, 1, n)).collect();
            let dual: Vec<Domain> = (0..n).map(|_| random_domain(&mut rng, 1, n)).collect();
            let models: Vec<Problem> = PermTag::ALL
                .iter()
                .map(|&t| with_primal(&build_permutation_model(n, ModelSpec::Permutation(t)).unwrap(), &primal))
                .collect();
            // channelling class on arbitrary dual domains
            let fp: Vec<Option<Vec<Domain>>> = C_CLASS
                .iter()
                .map(|&t| {
                    let mut p = models[PermTag::ALL.iter().position(|&u| u == t).unwrap()].clone();
                    p.dual = dual.clone();
                    fixpoint(&p)
                })
                .collect();
            for (t, f) in C_CLASS.iter().zip(&fp).skip(1) {
                if *f != fp[0] {
                    bad.push(SweepMismatch {
                        case,
                        detail: format!("{} differs from c on {primal:?} / {dual:?}", t.symbol()),
                    });
                }
            }
            let reference = primal_part(&fixpoint(&models[2]), n as usize);
            for (t, p) in PermTag::ALL.iter().zip(&models) {
                if t.has_alldiff() && primal_part(&fixpoint(p), n as usize) != reference {
                    bad.push(SweepMismatch { case, detail: format!("{} differs from ∀ on {primal:?}", t.symbol()) });
                }
            }
        } else {
            let n = rng.gen_range(2..=5u32);
            let m = rng.gen_range(n + 1..=8u32);
            let primal: Vec<Domain> = (0..n).map(|_| random_domain(&mut rng, 1, m)).collect();
            let fp: Vec<Option<Vec<Domain>>> = INJ_CLASS
                .iter()
                .map(|&t| {
                    let p = with_primal(&build_injection_model(n, m, ModelSpec::Injection(t)).unwrap(), &primal);
                    primal_part(&fixpoint(&p), n as usize)
                })
                .collect();
            for (t, f) in INJ_CLASS.iter().zip(&fp).skip(1) {
                if *f != fp[0] {
                    bad.push(SweepMismatch {
                        case,
                        detail: format!("{} differs from ≠ on n={n} m={m} {primal:?}", t.symbol()),
                    });
                }
            }
        }
    }
    bad
}

/// GAC on random all-different scopes (n <= 7) against enumeration.
pub fn gac_oracle(count: usize, seed: u64) -> Vec<SweepMismatch> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    for case in 0..count {
        let n = rng.gen_range(1..=7u32);
        let width = rng.gen_range(n..=n + 2);
        let doms: Vec<Domain> = (0..n).map(|_| random_domain(&mut rng, 1, width)).collect();
        let bf = brute_force_gac(&doms, all_distinct).expect("small enumeration");
        let bf = (!bf.iter().any(|d| d.is_empty())).then_some(bf);
        let fast = gac_alldiff(&doms);
        if fast != bf {
            bad.push(SweepMismatch { case, detail: format!("{doms:?}: filter {fast:?}, enumeration {bf:?}") });
        }
    }
    bad
}
