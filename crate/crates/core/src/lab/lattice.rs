//! Exhaustive and sampled checking of the tightness arrows between
//! (level, model) pairs on single-permutation problems.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::fixtures::{self, Fixture, FixtureKind};
use super::{holds_on_domains, BinaryNetwork, Level};
use crate::domain::Domain;
use crate::model::{dual_equivalent_over, ModelSpec, PermTag};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `a -> b`: a-consistency implies b-consistency, strictly.
    Tighter,
    /// `a <-> b`
    Equivalent,
    /// `a (x) b`: neither implies the other.
    Incomparable,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Tighter => "->",
            Relation::Equivalent => "<->",
            Relation::Incomparable => "(x)",
        }
    }
}

pub type Atom = (Level, PermTag);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Claim {
    pub a: Atom,
    pub b: Atom,
    pub relation: Relation,
}

/// A primal domain configuration. `config_id` is the index in the
/// enumeration order, or `None` for a stored proof instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub config_id: Option<u64>,
    pub label: String,
    pub values: Vec<u32>,
    pub domains: Vec<Domain>,
}

impl Witness {
    pub fn masks(&self) -> String {
        self.domains.iter().map(|d| d.bits().to_string()).collect::<Vec<_>>().join(" ")
    }

    fn id(&self) -> String {
        match self.config_id {
            Some(i) => i.to_string(),
            None => format!("stored:{}", self.label),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Never violated; `strict` holds a configuration separating the two
    /// sides when one was found.
    Implied {
        strict: Option<Witness>,
    },
    Violated(Witness),
    /// Witnesses for `a && !b` and `b && !a`.
    Incomparable(Witness, Witness),
    /// An incomparability with at least one direction lacking a witness.
    Unwitnessed {
        a_not_b: Option<Witness>,
        b_not_a: Option<Witness>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowResult {
    pub stronger: Atom,
    pub weaker: Atom,
    pub relation: Relation,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeReport {
    pub n: u32,
    pub configs: u64,
    pub arrows: Vec<ArrowResult>,
}

impl LatticeReport {
    pub fn violations(&self) -> usize {
        self.arrows.iter().filter(|a| matches!(a.verdict, Verdict::Violated(_))).count()
    }

    pub fn unwitnessed(&self) -> usize {
        self.arrows.iter().filter(|a| matches!(a.verdict, Verdict::Unwitnessed { .. })).count()
    }

    /// `config_id,level_pair,model_pair,verdict,witness`
    pub fn to_csv(&self) -> String {
        let mut s = String::from("config_id,level_pair,model_pair,verdict,witness\n");
        for a in &self.arrows {
            let lp = format!("{}{}{}", a.stronger.0, a.relation.symbol(), a.weaker.0);
            let mp = format!("{}{}{}", a.stronger.1.symbol(), a.relation.symbol(), a.weaker.1.symbol());
            let (verdict, wit): (&str, Vec<&Witness>) = match &a.verdict {
                Verdict::Implied { strict: Some(w) } => ("implied-strict", vec![w]),
                Verdict::Implied { strict: None } => ("implied", vec![]),
                Verdict::Violated(w) => ("violated", vec![w]),
                Verdict::Incomparable(w1, w2) => ("incomparable", vec![w1, w2]),
                Verdict::Unwitnessed { a_not_b, b_not_a } => {
                    ("unwitnessed", a_not_b.iter().chain(b_not_a.iter()).collect())
                }
            };
            let id = wit.iter().map(|w| w.id()).collect::<Vec<_>>().join("|");
            let id = if id.is_empty() { "-".to_string() } else { id };
            let masks = wit.iter().map(|w| w.masks()).collect::<Vec<_>>().join("|");
            writeln!(s, "{id},{lp},{mp},{verdict},{masks}").unwrap();
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeMode {
    Exhaustive,
    Sample { count: u64, seed: u64 },
}

/// Every arrow of the single-permutation lattice.
pub fn claims() -> Vec<Claim> {
    use Level::*;
    use PermTag::*;
    use Relation::*;
    let c = |a: Atom, relation: Relation, b: Atom| Claim { a, b, relation };
    let mut v = vec![
        // all-different family
        c((GAC, AllDiffCAllDiff), Equivalent, (GAC, AllDiffC)),
        c((GAC, AllDiffC), Equivalent, (GAC, AllDiff)),
        // ACPC row
        c((GAC, AllDiff), Incomparable, (ACPC, NeqCNeq)),
        c((ACPC, NeqCNeq), Equivalent, (ACPC, NeqC)),
        c((ACPC, NeqC), Equivalent, (ACPC, C)),
        c((ACPC, CNeq), Equivalent, (ACPC, C)),
        c((ACPC, C), Tighter, (ACPC, Neq)),
        c((ACPC, Neq), Incomparable, (AC, C)),
        // SAC row
        c((GAC, AllDiff), Tighter, (SAC, NeqCNeq)),
        c((SAC, NeqCNeq), Equivalent, (SAC, NeqC)),
        c((SAC, NeqC), Equivalent, (SAC, C)),
        c((SAC, CNeq), Equivalent, (SAC, C)),
        c((SAC, C), Tighter, (SAC, Neq)),
        c((SAC, Neq), Incomparable, (AC, C)),
        // PIC row
        c((GAC, AllDiff), Tighter, (PIC, NeqCNeq)),
        c((PIC, NeqCNeq), Tighter, (PIC, NeqC)),
        c((PIC, NeqC), Tighter, (PIC, C)),
        c((PIC, C), Incomparable, (PIC, Neq)),
        c((PIC, Neq), Incomparable, (AC, C)),
        // RPC row
        c((GAC, AllDiff), Tighter, (RPC, NeqCNeq)),
        c((RPC, NeqCNeq), Tighter, (RPC, NeqC)),
        c((RPC, NeqC), Tighter, (RPC, C)),
        c((RPC, C), Incomparable, (RPC, Neq)),
        c((RPC, Neq), Incomparable, (AC, C)),
        // AC row
        c((GAC, AllDiff), Tighter, (AC, NeqCNeq)),
        c((AC, NeqCNeq), Equivalent, (AC, NeqC)),
        c((AC, NeqC), Equivalent, (AC, C)),
        c((AC, CNeq), Equivalent, (AC, C)),
        c((AC, C), Tighter, (AC, Neq)),
        // BC row
        c((BC, AllDiff), Tighter, (BC, NeqCNeq)),
        c((BC, NeqCNeq), Equivalent, (BC, NeqC)),
        c((BC, NeqC), Equivalent, (BC, C)),
        c((BC, CNeq), Equivalent, (BC, C)),
        c((BC, C), Tighter, (BC, Neq)),
        c((GAC, AllDiff), Tighter, (BC, AllDiff)),
    ];
    for m in [NeqCNeq, NeqC, C, Neq] {
        let chain = [ACPC, SAC, PIC, RPC, AC, BC];
        for w in chain.windows(2) {
            v.push(c((w[0], m), Tighter, (w[1], m)));
        }
    }
    v
}

fn atoms(claims: &[Claim]) -> Vec<Atom> {
    let mut out: Vec<Atom> = Vec::new();
    for c in claims {
        for a in [c.a, c.b] {
            if !out.contains(&a) {
                out.push(a);
            }
        }
    }
    out
}

/// Networks for every model tag, built once per (n, value list).
struct Templates {
    values: Vec<u32>,
    nets: Vec<(PermTag, BinaryNetwork)>,
}

impl Templates {
    fn new(n: usize, values: &[u32], tags: &[PermTag]) -> Self {
        let full = Domain::from_values(values.iter().copied());
        let primal = vec![full; n];
        let nets = tags.iter().map(|&t| (t, BinaryNetwork::permutation(&primal, values, t))).collect();
        Templates { values: values.to_vec(), nets }
    }

    fn eval(&self, primal: &[Domain], atoms: &[Atom]) -> u128 {
        let dual = dual_equivalent_over(primal, &self.values);
        let mut bits = 0u128;
        let mut cache: Vec<Option<BinaryNetwork>> = vec![None; self.nets.len()];
        for (k, &(level, tag)) in atoms.iter().enumerate() {
            let t = self.nets.iter().position(|(x, _)| *x == tag).unwrap();
            let net = cache[t].get_or_insert_with(|| {
                let base = &self.nets[t].1;
                let mut doms = primal.to_vec();
                if base.len() > primal.len() {
                    doms.extend_from_slice(&dual);
                }
                base.with_domains(&doms)
            });
            if holds_on_domains(net, level) {
                bits |= 1 << k;
            }
        }
        bits
    }
}

fn tags_of(atoms: &[Atom]) -> Vec<PermTag> {
    let mut t: Vec<PermTag> = Vec::new();
    for a in atoms {
        if !t.contains(&a.1) {
            t.push(a.1);
        }
    }
    t
}

/// The `idx`-th configuration in lexicographic bitmask order (x1 most
/// significant); values are `1..=n`.
pub fn config(n: u32, mut idx: u64) -> Vec<Domain> {
    let base = (1u64 << n) - 1;
    let mut out = vec![Domain::EMPTY; n as usize];
    for k in (0..n as usize).rev() {
        let mask = (idx % base) + 1;
        idx /= base;
        out[k] = Domain::from_bits((mask as u128) << 1);
    }
    out
}

pub fn config_count(n: u32) -> u64 {
    ((1u64 << n) - 1).pow(n)
}

/// Checks the arrows whose levels are all in `levels` and whose models are
/// all in `models`. Stored permutation proof instances are replayed in
/// addition to the generated configurations.
pub fn verify_lattice(n: u32, levels: &[Level], models: &[ModelSpec], mode: LatticeMode) -> LatticeReport {
    assert!((1..=5).contains(&n), "lattice size must be 1..=5");
    if mode == LatticeMode::Exhaustive {
        assert!(n <= 4, "exhaustive enumeration is limited to n <= 4");
    }
    let wanted = |a: &Atom| levels.contains(&a.0) && models.contains(&ModelSpec::Permutation(a.1));
    let claims: Vec<Claim> = claims().into_iter().filter(|c| wanted(&c.a) && wanted(&c.b)).collect();
    let atoms = atoms(&claims);
    let tags = tags_of(&atoms);
    let values: Vec<u32> = (1..=n).collect();
    let tpl = Templates::new(n as usize, &values, &tags);

    let ids: Vec<u64> = match mode {
        LatticeMode::Exhaustive => (0..config_count(n)).collect(),
        LatticeMode::Sample { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let total = config_count(n);
            (0..count).map(|_| rng.gen_range(0..total)).collect()
        }
    };
    let results: Vec<u128> = ids.par_iter().map(|&id| tpl.eval(&config(n, id), &atoms)).collect();

    // stored instances
    let stored: Vec<(Witness, u128)> = fixtures::builtin()
        .iter()
        .filter(|f| f.kind == FixtureKind::Permutation && f.side.is_empty())
        .map(|f| stored_eval(f, &atoms))
        .collect();

    let idx = |a: &Atom| atoms.iter().position(|x| x == a).unwrap();
    let find = |pa: usize, pb: usize| -> Option<Witness> {
        // configuration where pa holds and pb fails
        let hit = results.iter().position(|&r| r >> pa & 1 == 1 && r >> pb & 1 == 0);
        if let Some(k) = hit {
            let id = ids[k];
            return Some(Witness {
                config_id: Some(id),
                label: String::new(),
                values: values.clone(),
                domains: config(n, id),
            });
        }
        stored.iter().find(|(_, r)| r >> pa & 1 == 1 && r >> pb & 1 == 0).map(|(w, _)| w.clone())
    };

    let mut arrows = Vec::new();
    for c in &claims {
        let (pa, pb) = (idx(&c.a), idx(&c.b));
        match c.relation {
            Relation::Tighter => {
                let verdict = match find(pa, pb) {
                    Some(w) => Verdict::Violated(w),
                    None => Verdict::Implied { strict: find(pb, pa) },
                };
                arrows.push(ArrowResult { stronger: c.a, weaker: c.b, relation: c.relation, verdict });
            }
            Relation::Equivalent => {
                for (x, y, px, py) in [(c.a, c.b, pa, pb), (c.b, c.a, pb, pa)] {
                    let verdict = match find(px, py) {
                        Some(w) => Verdict::Violated(w),
                        None => Verdict::Implied { strict: None },
                    };
                    arrows.push(ArrowResult { stronger: x, weaker: y, relation: c.relation, verdict });
                }
            }
            Relation::Incomparable => {
                let verdict = match (find(pa, pb), find(pb, pa)) {
                    (Some(w1), Some(w2)) => Verdict::Incomparable(w1, w2),
                    (a_not_b, b_not_a) => Verdict::Unwitnessed { a_not_b, b_not_a },
                };
                arrows.push(ArrowResult { stronger: c.a, weaker: c.b, relation: c.relation, verdict });
            }
        }
    }
    LatticeReport { n, configs: ids.len() as u64, arrows }
}

fn stored_eval(f: &Fixture, atoms: &[Atom]) -> (Witness, u128) {
    let tags = tags_of(atoms);
    let tpl = Templates::new(f.primal.len(), &f.values, &tags);
    let bits = tpl.eval(&f.primal, atoms);
    (Witness { config_id: None, label: f.name.clone(), values: f.values.clone(), domains: f.primal.clone() }, bits)
}

/// A seed for sampling, from `PERMUTA_SEED` when set.
pub fn seed_from_env(default: u64) -> u64 {
    std::env::var("PERMUTA_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(default)
}
