//! Definitional consistency checkers on an extensional binary network.

pub mod fixtures;
pub mod lattice;
pub mod sweep;

use std::fmt;
use std::str::FromStr;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::model::{dual_equivalent_over, Constraint, InjTag, PermTag, Problem, VarRef};
use crate::propagate::gac_alldiff;

pub use lattice::{verify_lattice, LatticeMode, LatticeReport, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    BC,
    AC,
    RPC,
    PIC,
    SAC,
    PC,
    ACPC,
    GAC,
}

impl Level {
    pub const ALL: [Level; 8] =
        [Level::BC, Level::AC, Level::RPC, Level::PIC, Level::SAC, Level::PC, Level::ACPC, Level::GAC];

    pub fn name(self) -> &'static str {
        match self {
            Level::BC => "BC",
            Level::AC => "AC",
            Level::RPC => "RPC",
            Level::PIC => "PIC",
            Level::SAC => "SAC",
            Level::PC => "PC",
            Level::ACPC => "ACPC",
            Level::GAC => "GAC",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Level {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Level::ALL
            .into_iter()
            .find(|l| l.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown level `{s}`")))
    }
}

/// Domains plus explicit binary relations. Pairs without a relation are
/// universal. All-different scopes of arity > 2 are kept aside and only
/// consulted by the GAC and BC checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryNetwork {
    pub names: Vec<VarRef>,
    pub domains: Vec<Domain>,
    /// Rows per relation: values `0..width`.
    width: usize,
    /// `rel[(i * nv + j) * width + a]` = values of `j` compatible with `i = a`.
    rel: Vec<Domain>,
    constrained: Vec<bool>,
    pub nonbinary: Vec<Vec<usize>>,
}

impl BinaryNetwork {
    /// A network with no constraints.
    pub fn new(names: Vec<VarRef>, domains: Vec<Domain>, width: usize) -> Self {
        assert!(width >= 1);
        let nv = domains.len();
        BinaryNetwork {
            names,
            domains,
            width,
            rel: vec![Domain::range(0, width as u32 - 1); nv * nv * width],
            constrained: vec![false; nv * nv],
            nonbinary: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.domains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domains.is_empty()
    }

    pub fn is_constrained(&self, i: usize, j: usize) -> bool {
        self.constrained[i * self.len() + j]
    }

    /// Values of `j` compatible with `i = a`, ignoring domains.
    #[inline]
    pub fn sup(&self, i: usize, a: u32, j: usize) -> Domain {
        if (a as usize) < self.width {
            self.rel[(i * self.len() + j) * self.width + a as usize]
        } else {
            Domain::EMPTY
        }
    }

    pub fn allowed(&self, i: usize, a: u32, j: usize, b: u32) -> bool {
        self.sup(i, a, j).contains(b)
    }

    /// Intersects the `(i, j)` relation with `pred`.
    pub fn restrict_pair(&mut self, i: usize, j: usize, pred: impl Fn(u32, u32) -> bool) {
        assert_ne!(i, j);
        let nv = self.len();
        for a in 0..self.width as u32 {
            for b in 0..self.width as u32 {
                if !pred(a, b) {
                    self.rel[(i * nv + j) * self.width + a as usize].remove(b);
                    self.rel[(j * nv + i) * self.width + b as usize].remove(a);
                }
            }
        }
        self.constrained[i * nv + j] = true;
        self.constrained[j * nv + i] = true;
    }

    fn remove_pair(&mut self, i: usize, a: u32, j: usize, b: u32) {
        let nv = self.len();
        self.rel[(i * nv + j) * self.width + a as usize].remove(b);
        self.rel[(j * nv + i) * self.width + b as usize].remove(a);
        self.constrained[i * nv + j] = true;
        self.constrained[j * nv + i] = true;
    }

    /// Allowed pairs of `(i, j)` restricted to the current domains.
    pub fn relation_pairs(&self, i: usize, j: usize) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for a in self.domains[i] {
            for b in self.sup(i, a, j).intersect(self.domains[j]) {
                out.push((a, b));
            }
        }
        out
    }

    /// Compiles a problem whose constraints are unary, binary, or
    /// all-different.
    pub fn from_problem(p: &Problem) -> Result<Self> {
        let domains = p.flat_domains();
        let width = domains.iter().filter_map(|d| d.max()).max().map_or(1, |m| m as usize + 1);
        let names: Vec<VarRef> = p.vars().collect();
        let mut net = BinaryNetwork::new(names, domains, width);
        for c in &p.constraints {
            let mut scope: Vec<usize> = c.scope().iter().map(|v| p.index_of(*v)).collect();
            if let Constraint::AllDifferent(_) = c {
                if scope.len() > 2 {
                    net.nonbinary.push(scope);
                    continue;
                }
            }
            scope.sort_unstable();
            scope.dedup();
            match scope.len() {
                0 => {}
                1 => {
                    let i = scope[0];
                    net.domains[i] = net.domains[i].iter().filter(|&a| c.is_satisfied(|_| a)).collect();
                }
                2 => {
                    let (i, j) = (scope[0], scope[1]);
                    let (vi, vj) = (p.var_at(i), p.var_at(j));
                    net.restrict_pair(i, j, |a, b| {
                        c.is_satisfied(|v| {
                            if v == vi {
                                a
                            } else if v == vj {
                                b
                            } else {
                                0
                            }
                        })
                    });
                }
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "constraint of arity {} is not binary: {}",
                        scope.len(),
                        crate::text::constraint_text(c)
                    )))
                }
            }
        }
        Ok(net)
    }

    /// Network of a permutation model over `values` with the given primal
    /// domains; dual domains are the equivalent ones.
    pub fn permutation(primal: &[Domain], values: &[u32], tag: PermTag) -> Self {
        let p = permutation_problem(primal, values, tag);
        BinaryNetwork::from_problem(&p).expect("permutation models are binary or all-different")
    }

    /// Network of an injection model with explicit dual domains.
    pub fn injection(primal: &[Domain], dual: &[Domain], tag: InjTag) -> Self {
        let n = primal.len() as u32;
        let m = dual.len() as u32;
        let mut p = Problem::new(n, m);
        p.primal = primal.to_vec();
        let scope: Vec<VarRef> = (1..=n).map(VarRef::primal).collect();
        let values: Vec<u32> = (1..=m).collect();
        p.post_injection(&scope, &values, tag);
        if !p.dual.is_empty() {
            p.dual = dual.to_vec();
        }
        BinaryNetwork::from_problem(&p).expect("injection models are binary or all-different")
    }

    pub fn with_domains(&self, domains: &[Domain]) -> Self {
        let mut n = self.clone();
        n.domains.copy_from_slice(domains);
        n
    }

    fn constrained_pairs(&self) -> Vec<(usize, usize)> {
        let nv = self.len();
        let mut out = Vec::new();
        for i in 0..nv {
            for j in 0..nv {
                if i != j && self.is_constrained(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// Builds the permutation model over an explicit value list.
pub fn permutation_problem(primal: &[Domain], values: &[u32], tag: PermTag) -> Problem {
    let n = primal.len() as u32;
    let mut p = Problem::new(n, values.len() as u32);
    p.primal = primal.to_vec();
    let scope: Vec<VarRef> = (1..=n).map(VarRef::primal).collect();
    let duals = p.post_permutation(&scope, values, tag);
    let dd = dual_equivalent_over(primal, values);
    for (d, dom) in duals.iter().zip(dd) {
        *p.domain_mut(*d) = dom;
    }
    p
}

fn nonempty(net: &BinaryNetwork) -> bool {
    net.domains.iter().all(|d| !d.is_empty())
}

/// AC-3 style closure over the constrained pairs. Returns `false` on
/// wipeout.
pub fn ac_closure(net: &BinaryNetwork, doms: &mut [Domain]) -> bool {
    let pairs = net.constrained_pairs();
    if doms.iter().any(|d| d.is_empty()) {
        return false;
    }
    loop {
        let mut changed = false;
        for &(i, j) in &pairs {
            let dj = doms[j];
            let nd: Domain = doms[i].iter().filter(|&a| net.sup(i, a, j).intersects(dj)).collect();
            if nd != doms[i] {
                if nd.is_empty() {
                    return false;
                }
                doms[i] = nd;
                changed = true;
            }
        }
        if !changed {
            return true;
        }
    }
}

fn is_ac(net: &BinaryNetwork) -> bool {
    nonempty(net)
        && net.constrained_pairs().iter().all(|&(i, j)| {
            let dj = net.domains[j];
            net.domains[i].iter().all(|a| net.sup(i, a, j).intersects(dj))
        })
}

fn is_rpc(net: &BinaryNetwork) -> bool {
    if !is_ac(net) {
        return false;
    }
    let nv = net.len();
    let d = &net.domains;
    for (i, j) in net.constrained_pairs() {
        for a in d[i] {
            let s = net.sup(i, a, j).intersect(d[j]);
            let Some(b) = s.value() else { continue };
            for k in 0..nv {
                if k == i || k == j {
                    continue;
                }
                if !net.sup(i, a, k).intersect(net.sup(j, b, k)).intersects(d[k]) {
                    return false;
                }
            }
        }
    }
    true
}

fn is_pic(net: &BinaryNetwork) -> bool {
    if !is_ac(net) {
        return false;
    }
    let nv = net.len();
    let d = &net.domains;
    for i in 0..nv {
        for a in d[i] {
            for j in 0..nv {
                if j == i {
                    continue;
                }
                let sj = net.sup(i, a, j).intersect(d[j]);
                for k in j + 1..nv {
                    if k == i {
                        continue;
                    }
                    let sk = net.sup(i, a, k).intersect(d[k]);
                    if !sj.iter().any(|b| net.sup(j, b, k).intersects(sk)) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn is_sac(net: &BinaryNetwork) -> bool {
    if !nonempty(net) {
        return false;
    }
    let mut doms = net.domains.clone();
    for i in 0..net.len() {
        for a in net.domains[i] {
            doms.copy_from_slice(&net.domains);
            doms[i] = Domain::singleton(a);
            if !ac_closure(net, &mut doms) {
                return false;
            }
        }
    }
    true
}

/// Path consistency over the complete constraint graph: every allowed
/// pair of current values extends to every third variable.
fn is_pc(net: &BinaryNetwork) -> bool {
    if !nonempty(net) {
        return false;
    }
    let nv = net.len();
    let d = &net.domains;
    for i in 0..nv {
        for j in i + 1..nv {
            for a in d[i] {
                for b in net.sup(i, a, j).intersect(d[j]) {
                    for k in 0..nv {
                        if k == i || k == j {
                            continue;
                        }
                        if !net.sup(i, a, k).intersect(net.sup(j, b, k)).intersects(d[k]) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

fn is_gac(net: &BinaryNetwork) -> bool {
    is_ac(net)
        && net.nonbinary.iter().all(|scope| {
            let doms: Vec<Domain> = scope.iter().map(|&v| net.domains[v]).collect();
            gac_alldiff(&doms).is_some_and(|g| g == doms)
        })
}

fn hull(d: Domain) -> Domain {
    match (d.min(), d.max()) {
        (Some(lo), Some(hi)) => Domain::range(lo, hi),
        _ => Domain::EMPTY,
    }
}

fn is_bc(net: &BinaryNetwork) -> bool {
    if !nonempty(net) {
        return false;
    }
    let d = &net.domains;
    for (i, j) in net.constrained_pairs() {
        let hj = hull(d[j]);
        for a in [d[i].min().unwrap(), d[i].max().unwrap()] {
            if !net.sup(i, a, j).intersects(hj) {
                return false;
            }
        }
    }
    for scope in &net.nonbinary {
        let hulls: Vec<Domain> = scope.iter().map(|&v| hull(d[v])).collect();
        for (p, &v) in scope.iter().enumerate() {
            for a in [d[v].min().unwrap(), d[v].max().unwrap()] {
                let mut h = hulls.clone();
                h[p] = Domain::singleton(a);
                if gac_alldiff(&h).is_none() {
                    return false;
                }
            }
        }
    }
    true
}

/// Whether `net` satisfies `level`, by direct definition.
///
/// AC, RPC, PIC, SAC, PC and ACPC look at the binary part only; GAC and BC
/// also check the all-different scopes.
pub fn check_level(net: &BinaryNetwork, level: Level) -> bool {
    match level {
        Level::BC => is_bc(net),
        Level::AC => is_ac(net),
        Level::RPC => is_rpc(net),
        Level::PIC => is_pic(net),
        Level::SAC => is_sac(net),
        Level::PC => is_pc(net),
        Level::ACPC => is_ac(net) && is_pc(net),
        Level::GAC => is_gac(net),
    }
}

/// Domain-level reading used when comparing models: the level holds iff
/// enforcing it removes no domain value. Matches [`check_level`] except
/// for PC and ACPC, which may tighten relations without pruning values.
pub fn holds_on_domains(net: &BinaryNetwork, level: Level) -> bool {
    match level {
        Level::PC | Level::ACPC => {
            (level == Level::PC || is_ac(net)) && enforce_pc(net).is_ok_and(|out| out.domains == net.domains)
        }
        _ => check_level(net, level),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Inconsistent;

/// Strong path consistency: AC and PC enforced to a joint fixpoint over the
/// complete graph. Relations end up restricted to the final domains.
pub fn enforce_pc(net: &BinaryNetwork) -> std::result::Result<BinaryNetwork, Inconsistent> {
    let mut net = net.clone();
    let nv = net.len();
    if !nonempty(&net) {
        return Err(Inconsistent);
    }
    loop {
        let mut changed = false;
        // restrict relations to domains
        for i in 0..nv {
            for j in 0..nv {
                if i == j {
                    continue;
                }
                for a in 0..net.width as u32 {
                    let row = net.sup(i, a, j);
                    let keep = if net.domains[i].contains(a) { row.intersect(net.domains[j]) } else { Domain::EMPTY };
                    for b in row.minus(keep) {
                        net.remove_pair(i, a, j, b);
                        changed = true;
                    }
                }
            }
        }
        // AC over all pairs
        for i in 0..nv {
            for j in 0..nv {
                if i == j {
                    continue;
                }
                let dj = net.domains[j];
                let nd: Domain = net.domains[i].iter().filter(|&a| net.sup(i, a, j).intersects(dj)).collect();
                if nd.is_empty() {
                    return Err(Inconsistent);
                }
                if nd != net.domains[i] {
                    net.domains[i] = nd;
                    changed = true;
                }
            }
        }
        // PC
        for i in 0..nv {
            for j in i + 1..nv {
                for a in net.domains[i] {
                    for b in net.sup(i, a, j).intersect(net.domains[j]) {
                        let ok = (0..nv).all(|k| {
                            k == i || k == j || net.sup(i, a, k).intersect(net.sup(j, b, k)).intersects(net.domains[k])
                        });
                        if !ok {
                            net.remove_pair(i, a, j, b);
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            return Ok(net);
        }
    }
}

pub const BRUTE_FORCE_LIMIT: u128 = 10_000_000;

/// Keeps `v` in the domain of variable `k` iff some full assignment with
/// `x_k = v` satisfies `allowed`.
pub fn brute_force_gac(doms: &[Domain], allowed: impl Fn(&[u32]) -> bool) -> Result<Vec<Domain>> {
    let size: u128 = doms.iter().map(|d| d.len() as u128).product();
    if size > BRUTE_FORCE_LIMIT {
        return Err(Error::EnumerationTooLarge { size, limit: BRUTE_FORCE_LIMIT });
    }
    let mut out = vec![Domain::EMPTY; doms.len()];
    if size == 0 {
        return Ok(out);
    }
    let vals: Vec<Vec<u32>> = doms.iter().map(|d| d.iter().collect()).collect();
    let mut idx = vec![0usize; doms.len()];
    let mut assign: Vec<u32> = vals.iter().map(|v| v[0]).collect();
    loop {
        if allowed(&assign) {
            for (o, &a) in out.iter_mut().zip(&assign) {
                o.insert(a);
            }
        }
        let mut k = doms.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < vals[k].len() {
                assign[k] = vals[k][idx[k]];
                break;
            }
            idx[k] = 0;
            assign[k] = vals[k][0];
        }
    }
}

/// Predicate for an all-different scope, usable with [`brute_force_gac`].
pub fn all_distinct(a: &[u32]) -> bool {
    let mut seen = Domain::EMPTY;
    a.iter().all(|&v| {
        let fresh = !seen.contains(v);
        seen.insert(v);
        fresh
    })
}
