//! Chronological backtracking with FC, MAC or MGAC propagation.
//!
//! Branching stays on the selected variable: `x = v` first, then `x != v`
//! with propagation, then the next value, until `x` is bound or refuted
//! out. Both kinds of decision count as nodes; a decision whose
//! propagation wipes out a domain counts as a fail.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::model::{Block, Constraint, ModelSpec, Problem, VarRef};
use crate::propagate::{AllDiffMode, DomainStore, Engine};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algorithm {
    FC,
    MAC,
    MGAC,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::FC => "fc",
            Algorithm::MAC => "mac",
            Algorithm::MGAC => "mgac",
        }
    }

    /// MGAC when the model posts an all-different, MAC otherwise.
    pub fn default_for(spec: ModelSpec) -> Self {
        if spec.has_alldiff() {
            Algorithm::MGAC
        } else {
            Algorithm::MAC
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fc" => Ok(Algorithm::FC),
            "mac" => Ok(Algorithm::MAC),
            "mgac" => Ok(Algorithm::MGAC),
            _ => Err(Error::InvalidArgument(format!("unknown algorithm `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Heuristic {
    LexStatic,
    SdP,
    SdD,
    SdPd,
    Sd2P,
    Sd2D,
    Sd2Pd,
}

impl Heuristic {
    pub const ALL: [Heuristic; 7] = [
        Heuristic::LexStatic,
        Heuristic::SdP,
        Heuristic::SdD,
        Heuristic::SdPd,
        Heuristic::Sd2P,
        Heuristic::Sd2D,
        Heuristic::Sd2Pd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Heuristic::LexStatic => "lex",
            Heuristic::SdP => "sd_p",
            Heuristic::SdD => "sd_d",
            Heuristic::SdPd => "sd_pd",
            Heuristic::Sd2P => "sd2_p",
            Heuristic::Sd2D => "sd2_d",
            Heuristic::Sd2Pd => "sd2_pd",
        }
    }

    pub fn needs_dual(self) -> bool {
        !matches!(self, Heuristic::LexStatic | Heuristic::SdP | Heuristic::Sd2P)
    }

    fn dual_values(self) -> bool {
        matches!(self, Heuristic::Sd2P | Heuristic::Sd2D | Heuristic::Sd2Pd)
    }

    /// (primal block, dual block) searched by the variable ordering.
    fn blocks(self) -> (bool, bool) {
        match self {
            Heuristic::LexStatic | Heuristic::SdP | Heuristic::Sd2P => (true, false),
            Heuristic::SdD | Heuristic::Sd2D => (false, true),
            Heuristic::SdPd | Heuristic::Sd2Pd => (true, true),
        }
    }
}

impl fmt::Display for Heuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Heuristic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let k = s.to_ascii_lowercase().replace(['-', '+'], "_");
        let k = match k.as_str() {
            "static" | "lexstatic" => "lex",
            "sd_p_d" => "sd_pd",
            "sd2_p_d" => "sd2_pd",
            other => other,
        }
        .to_string();
        Heuristic::ALL.into_iter().find(|h| h.name() == k).ok_or_else(|| Error::UnknownHeuristic(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Goal {
    FirstSolution,
    AllSolutions,
}

impl Goal {
    pub fn name(self) -> &'static str {
        match self {
            Goal::FirstSolution => "first",
            Goal::AllSolutions => "all",
        }
    }
}

impl fmt::Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Goal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "first" | "one" => Ok(Goal::FirstSolution),
            "all" => Ok(Goal::AllSolutions),
            _ => Err(Error::InvalidArgument(format!("unknown goal `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub algorithm: Algorithm,
    pub heuristic: Heuristic,
    pub goal: Goal,
    /// Instantiate singleton domains before anything else. Only matters for
    /// FC, where a singleton is not yet propagated.
    pub fail_first_singletons: bool,
    pub time_limit: Option<Duration>,
    /// Keep solutions in the result (counting happens regardless).
    pub keep_solutions: bool,
}

impl SearchConfig {
    pub fn new(algorithm: Algorithm, heuristic: Heuristic, goal: Goal) -> Self {
        SearchConfig { algorithm, heuristic, goal, fail_first_singletons: true, time_limit: None, keep_solutions: true }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Decisions whose propagation wiped out a domain.
    pub fails: u64,
    /// Positive and negative decisions.
    pub nodes: u64,
    /// Positive decisions only.
    pub branches: u64,
    pub solutions: u64,
    pub elapsed: Duration,
    /// Set when the time limit stopped the search.
    pub aborted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    /// Full assignments in flat variable order.
    pub solutions: Vec<Vec<u32>>,
    pub stats: SearchStats,
}

impl SearchResult {
    /// Primal projection of each stored solution.
    pub fn primal_solutions(&self, p: &Problem) -> Vec<Vec<u32>> {
        self.solutions.iter().map(|s| s[..p.primal.len()].to_vec()).collect()
    }
}

/// One branching decision: `var = value` or, when not positive,
/// `var != value`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Decision {
    pub var: VarRef,
    pub value: u32,
    pub positive: bool,
    pub depth: u32,
}

/// `(var, value) -> counterpart variable` through channelling constraints.
#[derive(Clone, Debug)]
struct Counterparts(Vec<Vec<(u32, u32)>>);

impl Counterparts {
    fn new(p: &Problem) -> Self {
        let mut c = vec![Vec::new(); p.num_vars()];
        for con in &p.constraints {
            if let Constraint::Channel { primal, dual, primal_value, dual_value } = con {
                let (x, d) = (p.index_of(*primal), p.index_of(*dual));
                c[x].push((*primal_value, d as u32));
                c[d].push((*dual_value, x as u32));
            }
        }
        Counterparts(c)
    }

    fn get(&self, var: usize, value: u32) -> Option<usize> {
        self.0[var].iter().find(|e| e.0 == value).map(|e| e.1 as usize)
    }
}

fn block_range(p: &Problem, block: Block) -> std::ops::Range<usize> {
    let (np, nd) = (p.primal.len(), p.dual.len());
    match block {
        Block::Primal => 0..np,
        Block::Dual => np..np + nd,
        Block::Aux => np + nd..p.num_vars(),
    }
}

fn pick(p: &Problem, store: &DomainStore, cfg: &SearchConfig, unbound: impl Fn(usize) -> bool) -> Option<usize> {
    if cfg.fail_first_singletons {
        if let Some(v) = (0..p.num_vars()).find(|&v| unbound(v) && store.get(v).len() == 1) {
            return Some(v);
        }
    }
    let (use_p, use_d) = cfg.heuristic.blocks();
    let mut cands = Vec::new();
    if use_p {
        cands.push(block_range(p, Block::Primal));
    }
    if use_d {
        cands.push(block_range(p, Block::Dual));
    }
    let chosen = if cfg.heuristic == Heuristic::LexStatic {
        cands.into_iter().flatten().find(|&v| unbound(v))
    } else {
        // smallest domain; earlier ranges (primal) and lower indices win ties
        cands.into_iter().flatten().filter(|&v| unbound(v)).min_by_key(|&v| (store.get(v).len(), v))
    };
    chosen.or_else(|| (0..p.num_vars()).find(|&v| unbound(v)))
}

/// The next branching variable, or `None` when every variable is bound.
///
/// `assigned` marks instantiated variables (as FC tracks them); when absent
/// a variable is bound iff its domain is a singleton.
pub fn select_variable(
    p: &Problem,
    store: &DomainStore,
    assigned: Option<&[bool]>,
    cfg: &SearchConfig,
) -> Option<VarRef> {
    let v = match assigned {
        Some(a) => pick(p, store, cfg, |v| !a[v]),
        None => pick(p, store, cfg, |v| store.get(v).len() > 1),
    };
    v.map(|v| p.var_at(v))
}

fn value_order(store: &DomainStore, var: usize, cfg: &SearchConfig, cp: &Counterparts) -> Vec<u32> {
    let mut vals: Vec<u32> = store.get(var).iter().collect();
    if cfg.heuristic.dual_values() {
        let key = |v: u32| cp.get(var, v).map_or(0, |o| store.get(o).len());
        vals.sort_by_key(|&v| (key(v), v));
    }
    vals
}

/// Values of `var` in branching order.
pub fn select_value_order(p: &Problem, store: &DomainStore, var: VarRef, cfg: &SearchConfig) -> Vec<u32> {
    value_order(store, p.index_of(var), cfg, &Counterparts::new(p))
}

/// Forward checking over the problem's constraints.
struct Fc {
    /// Constraint indices per variable.
    cons_of: Vec<Vec<u32>>,
    scopes: Vec<Vec<u32>>,
    assigned: Vec<bool>,
    /// `(value, other, other_value)` for channel refutation mirroring.
    mirror: Vec<Vec<(u32, u32, u32)>>,
}

impl Fc {
    fn new(p: &Problem) -> Self {
        let n = p.num_vars();
        let mut cons_of = vec![Vec::new(); n];
        let mut scopes = Vec::new();
        let mut mirror = vec![Vec::new(); n];
        for (ci, c) in p.constraints.iter().enumerate() {
            let mut s: Vec<u32> = c.scope().iter().map(|v| p.index_of(*v) as u32).collect();
            s.sort_unstable();
            s.dedup();
            for &v in &s {
                cons_of[v as usize].push(ci as u32);
            }
            scopes.push(s);
            if let Constraint::Channel { primal, dual, primal_value, dual_value } = c {
                let (x, d) = (p.index_of(*primal) as u32, p.index_of(*dual) as u32);
                mirror[x as usize].push((*primal_value, d, *dual_value));
                mirror[d as usize].push((*dual_value, x, *primal_value));
            }
        }
        Fc { cons_of, scopes, assigned: vec![false; n], mirror }
    }

    /// Narrows `v` to `d`, removing the mirrored channel values too: x_i
    /// losing j and d_j losing i are the same event.
    fn prune(&self, s: &mut DomainStore, v: usize, d: Domain) -> bool {
        let removed = s.get(v).minus(d);
        s.set(v, d);
        if d.is_empty() {
            return false;
        }
        for &(val, other, oval) in &self.mirror[v] {
            if removed.contains(val) {
                let od = s.get(other as usize);
                if od.contains(oval) {
                    let nd = od.minus(Domain::singleton(oval));
                    s.set(other as usize, nd);
                    if nd.is_empty() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Forward checks the constraints of the freshly assigned `x`.
    fn check(&mut self, p: &Problem, s: &mut DomainStore, x: usize) -> bool {
        let a = s.get(x).value().unwrap();
        for k in 0..self.cons_of[x].len() {
            let ci = self.cons_of[x][k] as usize;
            let c = &p.constraints[ci];
            let free: Vec<u32> = self.scopes[ci].iter().copied().filter(|&v| !self.assigned[v as usize]).collect();
            match c {
                Constraint::NotEquals(..) | Constraint::AllDifferent(_) => {
                    for y in free {
                        let d = s.get(y as usize);
                        if d.contains(a) {
                            let mut nd = d;
                            nd.remove(a);
                            if !self.prune(s, y as usize, nd) {
                                return false;
                            }
                        }
                    }
                }
                _ => match free.len() {
                    0 => {
                        if !c.is_satisfied(|v| s.get(p.index_of(v)).value().unwrap_or(0)) {
                            return false;
                        }
                    }
                    1 => {
                        let y = free[0] as usize;
                        let d = s.get(y);
                        let nd: Domain = d
                            .iter()
                            .filter(|&b| {
                                c.is_satisfied(|v| {
                                    let i = p.index_of(v);
                                    if i == y {
                                        b
                                    } else {
                                        s.get(i).value().unwrap_or(0)
                                    }
                                })
                            })
                            .collect();
                        if nd != d && !self.prune(s, y, nd) {
                            return false;
                        }
                    }
                    _ => {}
                },
            }
        }
        true
    }

    fn assign(
        &mut self,
        p: &Problem,
        s: &mut DomainStore,
        x: usize,
        v: u32,
        undo: &mut Vec<usize>,
        cascade: bool,
    ) -> bool {
        self.assigned[x] = true;
        undo.push(x);
        if !self.prune(s, x, Domain::singleton(v)) || !self.check(p, s, x) {
            return false;
        }
        if cascade {
            self.cascade(p, s, undo)
        } else {
            true
        }
    }

    fn cascade(&mut self, p: &Problem, s: &mut DomainStore, undo: &mut Vec<usize>) -> bool {
        while let Some(y) = (0..self.assigned.len()).find(|&y| !self.assigned[y] && s.get(y).len() == 1) {
            self.assigned[y] = true;
            undo.push(y);
            if !self.check(p, s, y) {
                return false;
            }
        }
        true
    }

    fn refute(
        &mut self,
        p: &Problem,
        s: &mut DomainStore,
        x: usize,
        v: u32,
        undo: &mut Vec<usize>,
        cascade: bool,
    ) -> bool {
        let d = s.get(x).minus(Domain::singleton(v));
        if !self.prune(s, x, d) {
            return false;
        }
        if cascade {
            self.cascade(p, s, undo)
        } else {
            true
        }
    }

    /// Unary constraints and singleton cascade at the root.
    fn root(&mut self, p: &Problem, s: &mut DomainStore, cascade: bool) -> bool {
        for (ci, c) in p.constraints.iter().enumerate() {
            if self.scopes[ci].len() == 1 {
                let y = self.scopes[ci][0] as usize;
                let nd: Domain = s.get(y).iter().filter(|&b| c.is_satisfied(|_| b)).collect();
                if !self.prune(s, y, nd) {
                    return false;
                }
            }
        }
        let mut undo = Vec::new();
        !cascade || self.cascade(p, s, &mut undo)
    }
}

struct Solver<'a> {
    p: &'a Problem,
    cfg: SearchConfig,
    store: DomainStore,
    engine: Option<Engine>,
    fc: Option<Fc>,
    cp: Counterparts,
    stats: SearchStats,
    solutions: Vec<Vec<u32>>,
    start: Instant,
    trace: Option<Vec<Decision>>,
    depth: u32,
}

impl Solver<'_> {
    fn timed_out(&mut self) -> bool {
        if self.stats.aborted {
            return true;
        }
        if let Some(limit) = self.cfg.time_limit {
            if self.stats.nodes % 1024 == 0 && self.start.elapsed() > limit {
                self.stats.aborted = true;
            }
        }
        self.stats.aborted
    }

    fn select(&self) -> Option<usize> {
        match &self.fc {
            Some(fc) => pick(self.p, &self.store, &self.cfg, |v| !fc.assigned[v]),
            None => pick(self.p, &self.store, &self.cfg, |v| self.store.get(v).len() > 1),
        }
    }

    fn leaf(&mut self) -> bool {
        let sol: Vec<u32> = self.store.domains().iter().map(|d| d.value().unwrap_or(0)).collect();
        if !self.p.is_solution(&sol) {
            self.stats.fails += 1;
            return false;
        }
        self.stats.solutions += 1;
        if self.cfg.keep_solutions {
            self.solutions.push(sol);
        }
        self.cfg.goal == Goal::FirstSolution
    }

    /// Applies `x = v` (positive) or `x != v`; false on wipeout.
    fn decide(&mut self, x: usize, v: u32, positive: bool, undo: &mut Vec<usize>) -> bool {
        if let Some(t) = &mut self.trace {
            t.push(Decision { var: self.p.var_at(x), value: v, positive, depth: self.depth });
        }
        let cascade = self.cfg.fail_first_singletons;
        if let Some(fc) = &mut self.fc {
            return if positive {
                fc.assign(self.p, &mut self.store, x, v, undo, cascade)
            } else {
                fc.refute(self.p, &mut self.store, x, v, undo, cascade)
            };
        }
        let engine = self.engine.as_mut().unwrap();
        let dom = if positive { Domain::singleton(v) } else { self.store.get(x).minus(Domain::singleton(v)) };
        engine.narrow(&mut self.store, x, dom).is_ok()
    }

    fn unassign(&mut self, undo: &mut Vec<usize>, mark: usize) {
        if let Some(fc) = &mut self.fc {
            for &y in &undo[mark..] {
                fc.assigned[y] = false;
            }
        }
        undo.truncate(mark);
    }

    fn is_bound(&self, x: usize) -> bool {
        match &self.fc {
            Some(fc) => fc.assigned[x],
            None => self.store.get(x).len() == 1,
        }
    }

    /// Explores the subtree below the current state; true stops the search.
    fn node(&mut self, undo: &mut Vec<usize>) -> bool {
        if self.timed_out() {
            return true;
        }
        let Some(x) = self.select() else { return self.leaf() };
        let order = value_order(&self.store, x, &self.cfg, &self.cp);
        self.store.checkpoint();
        let frame = undo.len();
        let mut stop = false;
        for v in order {
            if !self.store.get(x).contains(v) {
                continue;
            }
            // positive branch
            self.stats.nodes += 1;
            self.stats.branches += 1;
            self.store.checkpoint();
            let mark = undo.len();
            if self.decide(x, v, true, undo) {
                self.depth += 1;
                stop = self.node(undo);
                self.depth -= 1;
            } else {
                self.stats.fails += 1;
            }
            self.unassign(undo, mark);
            self.store.restore();
            if stop || self.store.get(x).len() == 1 {
                break;
            }
            // negative branch
            self.stats.nodes += 1;
            if !self.decide(x, v, false, undo) {
                self.stats.fails += 1;
                break;
            }
            if self.is_bound(x) {
                stop = self.node(undo);
                break;
            }
        }
        self.unassign(undo, frame);
        self.store.restore();
        stop
    }
}

/// Searches `p` with the given configuration.
pub fn solve(p: &Problem, cfg: &SearchConfig) -> Result<SearchResult> {
    run(p, cfg, false).map(|r| r.0)
}

/// [`solve`], also returning every decision in the order taken.
pub fn solve_traced(p: &Problem, cfg: &SearchConfig) -> Result<(SearchResult, Vec<Decision>)> {
    run(p, cfg, true)
}

fn run(p: &Problem, cfg: &SearchConfig, traced: bool) -> Result<(SearchResult, Vec<Decision>)> {
    if cfg.heuristic.needs_dual() && p.dual.is_empty() {
        return Err(Error::WrongModelKind {
            tag: cfg.heuristic.name().into(),
            context: "a problem without dual variables",
        });
    }
    if let Some(v) = p.vars().find(|v| p.domain(*v).is_empty()) {
        return Err(Error::InvalidArgument(format!("empty domain for {v}")));
    }
    let start = Instant::now();
    let mut s = Solver {
        p,
        cfg: *cfg,
        store: DomainStore::from_problem(p),
        engine: None,
        fc: None,
        cp: Counterparts::new(p),
        stats: SearchStats::default(),
        solutions: Vec::new(),
        start,
        trace: traced.then(Vec::new),
        depth: 0,
    };
    let root_ok = match cfg.algorithm {
        Algorithm::FC => {
            let mut fc = Fc::new(p);
            let ok = fc.root(p, &mut s.store, cfg.fail_first_singletons);
            s.fc = Some(fc);
            ok
        }
        Algorithm::MAC | Algorithm::MGAC => {
            let mode = if cfg.algorithm == Algorithm::MGAC { AllDiffMode::Gac } else { AllDiffMode::Decompose };
            let mut e = Engine::new(p, mode);
            let ok = e.propagate_all(&mut s.store).is_ok();
            s.engine = Some(e);
            ok
        }
    };
    if root_ok {
        let mut undo = Vec::new();
        s.node(&mut undo);
    }
    s.stats.elapsed = start.elapsed();
    Ok((SearchResult { solutions: s.solutions, stats: s.stats }, s.trace.unwrap_or_default()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_permutation_model, PermTag};

    fn cfg(h: Heuristic) -> SearchConfig {
        SearchConfig::new(Algorithm::MAC, h, Goal::AllSolutions)
    }

    #[test]
    fn parse_names() {
        assert_eq!("sd2_pd".parse::<Heuristic>().unwrap(), Heuristic::Sd2Pd);
        assert_eq!("lex".parse::<Heuristic>().unwrap(), Heuristic::LexStatic);
        assert!("sd3".parse::<Heuristic>().is_err());
        assert_eq!("mgac".parse::<Algorithm>().unwrap(), Algorithm::MGAC);
    }

    #[test]
    fn sd_pd_tie_prefers_primal() {
        let mut p = build_permutation_model(2, ModelSpec::Permutation(PermTag::C)).unwrap();
        p.primal = vec![Domain::from_values([1, 2, 3]), Domain::from_values([1, 2])];
        p.dual = vec![Domain::from_values([1, 2]), Domain::from_values([1, 2, 3, 4])];
        let s = DomainStore::from_problem(&p);
        assert_eq!(select_variable(&p, &s, None, &cfg(Heuristic::SdPd)), Some(VarRef::primal(2)));
        assert_eq!(select_variable(&p, &s, None, &cfg(Heuristic::SdD)), Some(VarRef::dual(1)));
    }

    #[test]
    fn singletons_first() {
        let mut p = build_permutation_model(3, ModelSpec::Permutation(PermTag::Neq)).unwrap();
        p.primal[2] = Domain::singleton(7);
        let s = DomainStore::from_problem(&p);
        let assigned = [false; 3];
        let v = select_variable(&p, &s, Some(&assigned), &cfg(Heuristic::LexStatic));
        assert_eq!(v, Some(VarRef::primal(3)));
        let mut c = cfg(Heuristic::LexStatic);
        c.fail_first_singletons = false;
        assert_eq!(select_variable(&p, &s, Some(&assigned), &c), Some(VarRef::primal(1)));
    }

    #[test]
    fn sd2_orders_by_dual_size() {
        let mut p = build_permutation_model(2, ModelSpec::Permutation(PermTag::C)).unwrap();
        p.dual = vec![Domain::from_values([1, 2, 3]), Domain::singleton(1)];
        let s = DomainStore::from_problem(&p);
        assert_eq!(select_value_order(&p, &s, VarRef::primal(1), &cfg(Heuristic::Sd2Pd)), vec![2, 1]);
        assert_eq!(select_value_order(&p, &s, VarRef::primal(1), &cfg(Heuristic::SdPd)), vec![1, 2]);
    }

    #[test]
    fn permutations_counted_by_every_algorithm() {
        for tag in PermTag::ALL {
            let p = build_permutation_model(4, ModelSpec::Permutation(tag)).unwrap();
            for alg in [Algorithm::FC, Algorithm::MAC, Algorithm::MGAC] {
                let r = solve(&p, &SearchConfig::new(alg, Heuristic::LexStatic, Goal::AllSolutions)).unwrap();
                assert_eq!(r.stats.solutions, 24, "{tag:?} {alg:?}");
                assert!(r.stats.fails <= r.stats.nodes);
            }
        }
    }

    #[test]
    fn single_variable() {
        let p = build_permutation_model(1, ModelSpec::Permutation(PermTag::C)).unwrap();
        let r = solve(&p, &SearchConfig::new(Algorithm::MAC, Heuristic::LexStatic, Goal::AllSolutions)).unwrap();
        assert_eq!(r.stats.solutions, 1);
        assert_eq!(r.stats.fails, 0);
        assert_eq!(r.solutions, vec![vec![1, 1]]);
    }

    #[test]
    fn dual_heuristic_needs_dual_block() {
        let p = build_permutation_model(3, ModelSpec::Permutation(PermTag::Neq)).unwrap();
        assert!(solve(&p, &cfg(Heuristic::SdD)).is_err());
    }
}
