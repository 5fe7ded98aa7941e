//! Direct SAT encodings of permutation problems, unit propagation, a DP
//! solver and a lockstep comparison against forward checking.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::model::{Block, Constraint, PermTag, Problem, VarRef};
use crate::search::{self, Algorithm, Goal, Heuristic, SearchConfig};

/// X_ij: primal x_i takes j, equivalently dual d_j takes i.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoolAtom {
    pub i: u32,
    pub j: u32,
}

impl BoolAtom {
    /// 1-based DIMACS number `(i-1)*n + j`.
    pub fn index(self, n: u32) -> u32 {
        (self.i - 1) * n + self.j
    }

    pub fn from_index(idx: u32, n: u32) -> Self {
        BoolAtom { i: (idx - 1) / n + 1, j: (idx - 1) % n + 1 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SatVariant {
    PrimalSAT,
    ChannellingSAT,
}

impl SatVariant {
    /// The CSP model forward checking mirrors.
    pub fn csp_tag(self) -> PermTag {
        match self {
            SatVariant::PrimalSAT => PermTag::Neq,
            SatVariant::ChannellingSAT => PermTag::C,
        }
    }
}

/// CNF over atoms 1..=n*n; literals are signed atom numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseSet {
    pub n: u32,
    pub clauses: Vec<Vec<i32>>,
}

impl ClauseSet {
    pub fn num_atoms(&self) -> u32 {
        self.n * self.n
    }

    fn lit(&self, i: u32, j: u32, positive: bool) -> i32 {
        let a = BoolAtom { i, j }.index(self.n) as i32;
        if positive {
            a
        } else {
            -a
        }
    }

    /// Adds a clause, dropping duplicate literals and tautologies.
    pub fn add(&mut self, mut clause: Vec<i32>) {
        clause.sort_unstable_by_key(|l| (l.abs(), *l));
        clause.dedup();
        if clause.windows(2).any(|w| w[0] == -w[1]) {
            return;
        }
        self.clauses.push(clause);
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.num_atoms(), self.clauses.len());
        for c in &self.clauses {
            for l in c {
                write!(s, "{l} ").unwrap();
            }
            s.push_str("0\n");
        }
        s
    }

    pub fn from_dimacs(text: &str) -> Result<Self> {
        let mut n = None;
        let mut clauses = Vec::new();
        let mut cur = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            let perr = |msg: String| Error::Parse { line: ln + 1, msg };
            if let Some(rest) = line.strip_prefix("p cnf") {
                let atoms: u32 = rest
                    .split_whitespace()
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| perr("bad header".into()))?;
                let root = (atoms as f64).sqrt().round() as u32;
                if root * root != atoms {
                    return Err(perr(format!("{atoms} atoms is not a square")));
                }
                n = Some(root);
                continue;
            }
            for t in line.split_whitespace() {
                let l: i32 = t.parse().map_err(|_| perr(format!("bad literal `{t}`")))?;
                if l == 0 {
                    clauses.push(std::mem::take(&mut cur));
                } else {
                    cur.push(l);
                }
            }
        }
        let n = n.ok_or_else(|| Error::Parse { line: 1, msg: "missing `p cnf` header".into() })?;
        Ok(ClauseSet { n, clauses })
    }
}

/// Direct encoding of a permutation of `n` values with optional side
/// constraints over primal variables (unary or binary).
pub fn encode_direct(n: u32, variant: SatVariant, side: &[Constraint]) -> Result<ClauseSet> {
    let mut cs = ClauseSet { n, clauses: Vec::new() };
    for i in 1..=n {
        cs.add((1..=n).map(|j| cs.lit(i, j, true)).collect());
    }
    for i in 1..=n {
        for j in 1..=n {
            for k in j + 1..=n {
                cs.add(vec![cs.lit(i, j, false), cs.lit(i, k, false)]);
            }
        }
    }
    for j in 1..=n {
        for i in 1..=n {
            for k in i + 1..=n {
                cs.add(vec![cs.lit(i, j, false), cs.lit(k, j, false)]);
            }
        }
    }
    if variant == SatVariant::ChannellingSAT {
        for j in 1..=n {
            cs.add((1..=n).map(|i| cs.lit(i, j, true)).collect());
        }
    }
    for c in side {
        encode_side(&mut cs, c)?;
    }
    Ok(cs)
}

fn encode_side(cs: &mut ClauseSet, c: &Constraint) -> Result<()> {
    let n = cs.n;
    let scope = c.scope();
    if scope.iter().any(|v| v.block != Block::Primal || v.index > n) {
        return Err(Error::InvalidArgument(format!("side constraint {c:?} is not over primal variables 1..={n}")));
    }
    match scope.as_slice() {
        [a] => {
            for u in 1..=n {
                if !c.is_satisfied(|_| u) {
                    cs.add(vec![cs.lit(a.index, u, false)]);
                }
            }
        }
        [a, b] if a != b => {
            for u in 1..=n {
                for v in 1..=n {
                    if !c.is_satisfied(|x| if x == *a { u } else { v }) {
                        cs.add(vec![cs.lit(a.index, u, false), cs.lit(b.index, v, false)]);
                    }
                }
            }
        }
        _ => return Err(Error::InvalidArgument(format!("side constraint {c:?} is not unary or binary"))),
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnitStatus {
    Ok,
    Conflict,
}

/// Atom values indexed by atom number (index 0 unused).
pub type Assignment = Vec<Option<bool>>;

pub fn empty_assignment(cs: &ClauseSet) -> Assignment {
    vec![None; cs.num_atoms() as usize + 1]
}

fn lit_value(a: &Assignment, l: i32) -> Option<bool> {
    a[l.unsigned_abs() as usize].map(|v| v == (l > 0))
}

/// Closes `a` under unit resolution.
pub fn unit_propagate(cs: &ClauseSet, mut a: Assignment) -> (Assignment, UnitStatus) {
    let st = propagate_in_place(cs, &mut a);
    (a, st)
}

fn propagate_in_place(cs: &ClauseSet, a: &mut Assignment) -> UnitStatus {
    loop {
        let mut changed = false;
        for c in &cs.clauses {
            let mut unit = None;
            let mut open = 0;
            let mut sat = false;
            for &l in c {
                match lit_value(a, l) {
                    Some(true) => {
                        sat = true;
                        break;
                    }
                    Some(false) => {}
                    None => {
                        open += 1;
                        unit = Some(l);
                    }
                }
            }
            if sat {
                continue;
            }
            match open {
                0 => return UnitStatus::Conflict,
                1 => {
                    let l = unit.unwrap();
                    a[l.unsigned_abs() as usize] = Some(l > 0);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            return UnitStatus::Ok;
        }
    }
}

/// How DP picks its next branching atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranchOrder {
    /// Lowest i with no true atom, then lowest open j: the mirror of
    /// lexicographic variable order with ascending values.
    Lex,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpResult {
    /// Models found (each as the primal assignment x_1..x_n).
    pub models: Vec<Vec<u32>>,
    /// Atoms set true by choice.
    pub branches: u64,
    /// Choices, in order, as (i, j).
    pub trace: Vec<(u32, u32)>,
}

impl DpResult {
    pub fn is_sat(&self) -> bool {
        !self.models.is_empty()
    }
}

struct Dp<'a> {
    cs: &'a ClauseSet,
    all: bool,
    out: DpResult,
}

impl Dp<'_> {
    fn pick(&self, a: &Assignment) -> Option<BoolAtom> {
        let n = self.cs.n;
        for i in 1..=n {
            if (1..=n).any(|j| a[BoolAtom { i, j }.index(n) as usize] == Some(true)) {
                continue;
            }
            if let Some(j) = (1..=n).find(|&j| a[BoolAtom { i, j }.index(n) as usize].is_none()) {
                return Some(BoolAtom { i, j });
            }
        }
        None
    }

    /// True stops the search.
    fn run(&mut self, mut a: Assignment) -> bool {
        if propagate_in_place(self.cs, &mut a) == UnitStatus::Conflict {
            return false;
        }
        let Some(atom) = self.pick(&a) else {
            let n = self.cs.n;
            let model: Vec<u32> = (1..=n)
                .map(|i| (1..=n).find(|&j| a[BoolAtom { i, j }.index(n) as usize] == Some(true)).unwrap_or(0))
                .collect();
            self.out.models.push(model);
            return !self.all;
        };
        let idx = atom.index(self.cs.n) as usize;
        self.out.branches += 1;
        self.out.trace.push((atom.i, atom.j));
        let mut t = a.clone();
        t[idx] = Some(true);
        if self.run(t) {
            return true;
        }
        a[idx] = Some(false);
        self.run(a)
    }
}

/// Davis-Putnam search. `all` enumerates every model.
pub fn dp_solve(cs: &ClauseSet, order: BranchOrder, all: bool) -> DpResult {
    let BranchOrder::Lex = order;
    let mut dp = Dp { cs, all, out: DpResult { models: Vec::new(), branches: 0, trace: Vec::new() } };
    dp.run(empty_assignment(cs));
    dp.out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LockstepReport {
    pub variant: SatVariant,
    pub fc_branches: u64,
    pub dp_branches: u64,
    pub fc_solutions: u64,
    pub dp_models: u64,
    /// First position where the positive decision sequences differ, with
    /// the FC and DP decisions there.
    pub divergence: Option<(usize, Option<(u32, u32)>, Option<(u32, u32)>)>,
}

impl LockstepReport {
    pub fn equal(&self) -> bool {
        self.fc_branches == self.dp_branches && self.divergence.is_none() && self.fc_solutions == self.dp_models
    }
}

/// Primal domain restrictions and side constraints of a permutation
/// problem, dropping its permutation constraints.
fn side_constraints(p: &Problem) -> Result<Vec<Constraint>> {
    let n = p.primal.len() as u32;
    let mut side = Vec::new();
    for (i, d) in p.primal.iter().enumerate() {
        if d.max().is_some_and(|v| v > n) || d.contains(0) {
            return Err(Error::InvalidArgument(format!("x{} has values outside 1..={n}", i + 1)));
        }
        let missing: Vec<u32> = (1..=n).filter(|&v| !d.contains(v)).collect();
        if !missing.is_empty() {
            side.push(Constraint::UnaryForbid(VarRef::primal(i as u32 + 1), missing));
        }
    }
    for c in &p.constraints {
        let on_primal = c.scope().iter().all(|v| v.block == Block::Primal);
        match c {
            Constraint::NotEquals(..) | Constraint::AllDifferent(_) if on_primal => {}
            Constraint::Channel { .. } => {}
            _ if !on_primal => {
                if !matches!(c, Constraint::NotEquals(..) | Constraint::AllDifferent(_)) {
                    return Err(Error::InvalidArgument(format!("cannot encode {c:?}")));
                }
            }
            _ => side.push(c.clone()),
        }
    }
    Ok(side)
}

/// Runs FC (lexicographic, fail-first singletons) on the permutation model
/// mirrored by `variant` and DP on its encoding, enumerating all solutions
/// in both, and compares the positive decision sequences.
pub fn lockstep_compare(p: &Problem, variant: SatVariant) -> Result<LockstepReport> {
    let n = p.primal.len() as u32;
    let side = side_constraints(p)?;
    let cs = encode_direct(n, variant, &side)?;
    let mut fcp = Problem::new(n, n);
    let scope: Vec<VarRef> = (1..=n).map(VarRef::primal).collect();
    let values: Vec<u32> = (1..=n).collect();
    fcp.post_permutation(&scope, &values, variant.csp_tag());
    for c in side {
        fcp.post(c);
    }
    let mut cfg = SearchConfig::new(Algorithm::FC, Heuristic::LexStatic, Goal::AllSolutions);
    cfg.fail_first_singletons = true;
    cfg.keep_solutions = false;
    let (fc, decisions) = search::solve_traced(&fcp, &cfg)?;
    let fc_seq: Vec<(u32, u32)> = decisions
        .iter()
        .filter(|d| d.positive)
        .map(|d| match d.var.block {
            Block::Primal => (d.var.index, d.value),
            // a dual choice d_j = i is the same atom as x_i = j
            _ => (d.value, d.var.index),
        })
        .collect();
    let dp = dp_solve(&cs, BranchOrder::Lex, true);
    let divergence = (0..fc_seq.len().max(dp.trace.len()))
        .find(|&k| fc_seq.get(k) != dp.trace.get(k))
        .map(|k| (k, fc_seq.get(k).copied(), dp.trace.get(k).copied()));
    Ok(LockstepReport {
        variant,
        fc_branches: fc.stats.branches,
        dp_branches: dp.branches,
        fc_solutions: fc.stats.solutions,
        dp_models: dp.models.len() as u64,
        divergence,
    })
}

/// A permutation of 1..=n with `k` random binary table constraints, each
/// allowing a pair of values with probability `density`.
pub fn random_permutation_csp(n: u32, k: usize, density: f64, seed: u64) -> Problem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = Problem::new(n, n);
    let scope: Vec<VarRef> = (1..=n).map(VarRef::primal).collect();
    let values: Vec<u32> = (1..=n).collect();
    p.post_permutation(&scope, &values, PermTag::Neq);
    for _ in 0..k {
        let a = rng.gen_range(1..=n);
        let mut b = rng.gen_range(1..n);
        if b >= a {
            b += 1;
        }
        let mut allowed = Vec::new();
        for u in 1..=n {
            for v in 1..=n {
                if rng.gen_bool(density) {
                    allowed.push((u, v));
                }
            }
        }
        p.post(Constraint::BinaryTable { a: VarRef::primal(a), b: VarRef::primal(b), allowed });
    }
    p
}

/// Primal domains a unit-propagated assignment leaves open.
pub fn open_domains(cs: &ClauseSet, a: &Assignment) -> Vec<Domain> {
    let n = cs.n;
    (1..=n).map(|i| (1..=n).filter(|&j| a[BoolAtom { i, j }.index(n) as usize] != Some(false)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clause_counts() {
        let p = encode_direct(3, SatVariant::PrimalSAT, &[]).unwrap();
        assert_eq!((p.num_atoms(), p.clauses.len()), (9, 21));
        let c = encode_direct(3, SatVariant::ChannellingSAT, &[]).unwrap();
        assert_eq!(c.clauses.len(), 24);
        let one = encode_direct(1, SatVariant::PrimalSAT, &[]).unwrap();
        assert_eq!((one.num_atoms(), one.clauses.len()), (1, 1));
    }

    #[test]
    fn dimacs_round_trip() {
        let c = encode_direct(3, SatVariant::ChannellingSAT, &[]).unwrap();
        let text = c.to_dimacs();
        assert!(text.starts_with("p cnf 9 24\n"));
        assert_eq!(ClauseSet::from_dimacs(&text).unwrap(), c);
    }

    #[test]
    fn unit_basics() {
        let cs = ClauseSet { n: 1, clauses: vec![vec![1]] };
        let (a, st) = unit_propagate(&cs, empty_assignment(&cs));
        assert_eq!((a[1], st), (Some(true), UnitStatus::Ok));
        let empty = ClauseSet { n: 2, clauses: vec![] };
        let (a, st) = unit_propagate(&empty, empty_assignment(&empty));
        assert_eq!(st, UnitStatus::Ok);
        assert!(a.iter().all(|v| v.is_none()));
    }

    #[test]
    fn dp_counts_models() {
        let cs = encode_direct(2, SatVariant::PrimalSAT, &[]).unwrap();
        assert_eq!(dp_solve(&cs, BranchOrder::Lex, true).models.len(), 2);
        let side = [Constraint::UnaryForbid(VarRef::primal(1), vec![1, 2, 3])];
        let cs = encode_direct(3, SatVariant::PrimalSAT, &side).unwrap();
        let r = dp_solve(&cs, BranchOrder::Lex, true);
        assert!(!r.is_sat());
        assert_eq!(r.branches, 0);
    }
}
