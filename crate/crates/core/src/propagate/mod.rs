//! Propagation engine: event rules for not-equals and channelling, plus
//! queued propagators for everything else, run to a common fixpoint.

pub mod alldiff;
pub mod props;
pub mod store;

use std::collections::VecDeque;
use std::fmt::Write as _;

pub use alldiff::{gac_alldiff, AllDiffFilter};
pub use store::DomainStore;

use crate::domain::Domain;
use crate::model::{Constraint, Problem, VarRef};
use props::Prop;

/// How all-different constraints are propagated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AllDiffMode {
    /// Matching-based generalized arc consistency.
    Gac,
    /// AC on the pairwise not-equals decomposition.
    Decompose,
}

#[derive(Clone, Copy, Debug)]
enum EdgeKind {
    /// `var = value <=> other = other_value`
    Iff,
    /// `var = value => other = other_value`
    Forward,
    /// `other = other_value => var = value`, seen from `var`
    Backward,
}

#[derive(Clone, Copy, Debug)]
struct Edge {
    value: u32,
    other: u32,
    other_value: u32,
    kind: EdgeKind,
    cause: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceRow {
    pub var: usize,
    pub value: u32,
    /// Index of the causing constraint in `Problem::constraints`.
    pub cause: usize,
}

const NO_PROP: u32 = u32::MAX;

#[derive(Clone, Debug)]
struct Core {
    neq: Vec<Vec<(u32, u32)>>,
    chan: Vec<Vec<Edge>>,
    watch: Vec<Vec<u32>>,
    var_queue: VecDeque<u32>,
    var_queued: Vec<bool>,
    prop_queue: VecDeque<u32>,
    prop_queued: Vec<bool>,
    trace: Option<Vec<TraceRow>>,
    current: u32,
}

impl Core {
    #[inline]
    fn narrow(&mut self, s: &mut DomainStore, v: u32, to: Domain, cause: u32) -> Result<bool, usize> {
        let old = s.get(v as usize);
        let nd = old.intersect(to);
        if nd == old {
            return Ok(false);
        }
        if let Some(t) = &mut self.trace {
            t.extend(old.minus(nd).iter().map(|value| TraceRow { var: v as usize, value, cause: cause as usize }));
        }
        s.set(v as usize, nd);
        if nd.is_empty() {
            return Err(v as usize);
        }
        if !self.var_queued[v as usize] {
            self.var_queued[v as usize] = true;
            self.var_queue.push_back(v);
        }
        for &p in &self.watch[v as usize] {
            if p != self.current && !self.prop_queued[p as usize] {
                self.prop_queued[p as usize] = true;
                self.prop_queue.push_back(p);
            }
        }
        Ok(true)
    }

    fn process_var(&mut self, s: &mut DomainStore, v: u32) -> Result<(), usize> {
        let d = s.get(v as usize);
        if let Some(a) = d.value() {
            for k in 0..self.neq[v as usize].len() {
                let (u, cause) = self.neq[v as usize][k];
                self.narrow(s, u, Domain::singleton(a).minus_all(), cause)?;
            }
        }
        for k in 0..self.chan[v as usize].len() {
            let e = self.chan[v as usize][k];
            let absent = !d.contains(e.value);
            let fixed = d.value() == Some(e.value);
            match e.kind {
                EdgeKind::Iff => {
                    if absent {
                        self.narrow(s, e.other, Domain::singleton(e.other_value).minus_all(), e.cause)?;
                    } else if fixed {
                        self.narrow(s, e.other, Domain::singleton(e.other_value), e.cause)?;
                    }
                }
                EdgeKind::Forward => {
                    if fixed {
                        self.narrow(s, e.other, Domain::singleton(e.other_value), e.cause)?;
                    }
                }
                EdgeKind::Backward => {
                    if absent {
                        self.narrow(s, e.other, Domain::singleton(e.other_value).minus_all(), e.cause)?;
                    }
                }
            }
        }
        Ok(())
    }

    fn clear(&mut self) {
        for v in self.var_queue.drain(..) {
            self.var_queued[v as usize] = false;
        }
        for p in self.prop_queue.drain(..) {
            self.prop_queued[p as usize] = false;
        }
        self.current = NO_PROP;
    }
}

trait MinusAll {
    fn minus_all(self) -> Domain;
}

impl MinusAll for Domain {
    /// Complement within `0..=127`.
    #[inline]
    fn minus_all(self) -> Domain {
        Domain::from_bits(!self.bits())
    }
}

/// Propagators compiled from a problem's constraints.
#[derive(Clone, Debug)]
pub struct Engine {
    props: Vec<Prop>,
    prop_cause: Vec<u32>,
    core: Core,
    out: Vec<(u32, Domain)>,
}

impl Engine {
    pub fn new(p: &Problem, mode: AllDiffMode) -> Self {
        Self::with_filter(p, mode, |_| true)
    }

    /// Compiles only the constraints accepted by `keep`.
    pub fn with_filter(p: &Problem, mode: AllDiffMode, keep: impl Fn(&Constraint) -> bool) -> Self {
        let n = p.num_vars();
        let mut core = Core {
            neq: vec![Vec::new(); n],
            chan: vec![Vec::new(); n],
            watch: vec![Vec::new(); n],
            var_queue: VecDeque::new(),
            var_queued: vec![false; n],
            prop_queue: VecDeque::new(),
            prop_queued: Vec::new(),
            trace: None,
            current: NO_PROP,
        };
        let mut props = Vec::new();
        let mut prop_cause = Vec::new();
        let ix = |v: &VarRef| p.index_of(*v) as u32;
        for (ci, c) in p.constraints.iter().enumerate() {
            if !keep(c) {
                continue;
            }
            let cause = ci as u32;
            let mut add_neq = |a: u32, b: u32| {
                core.neq[a as usize].push((b, cause));
                core.neq[b as usize].push((a, cause));
            };
            let mut prop = None;
            match c {
                Constraint::NotEquals(a, b) => add_neq(ix(a), ix(b)),
                Constraint::AllDifferent(vars) => match mode {
                    AllDiffMode::Decompose => {
                        for i in 0..vars.len() {
                            for j in i + 1..vars.len() {
                                add_neq(ix(&vars[i]), ix(&vars[j]));
                            }
                        }
                    }
                    AllDiffMode::Gac => {
                        prop = Some(Prop::AllDiff { vars: vars.iter().map(ix).collect(), filter: AllDiffFilter::new() })
                    }
                },
                Constraint::Channel { primal, dual, primal_value, dual_value }
                | Constraint::DualSepLink {
                    first: primal,
                    first_value: primal_value,
                    second: dual,
                    second_value: dual_value,
                } => {
                    let (x, d) = (ix(primal), ix(dual));
                    core.chan[x as usize].push(Edge {
                        value: *primal_value,
                        other: d,
                        other_value: *dual_value,
                        kind: EdgeKind::Iff,
                        cause,
                    });
                    core.chan[d as usize].push(Edge {
                        value: *dual_value,
                        other: x,
                        other_value: *primal_value,
                        kind: EdgeKind::Iff,
                        cause,
                    });
                }
                Constraint::ChannelImplies { primal, dual, primal_value, dual_value } => {
                    let (x, d) = (ix(primal), ix(dual));
                    core.chan[x as usize].push(Edge {
                        value: *primal_value,
                        other: d,
                        other_value: *dual_value,
                        kind: EdgeKind::Forward,
                        cause,
                    });
                    core.chan[d as usize].push(Edge {
                        value: *dual_value,
                        other: x,
                        other_value: *primal_value,
                        kind: EdgeKind::Backward,
                        cause,
                    });
                }
                Constraint::Offset(a, b, k) => prop = Some(Prop::Offset { a: ix(a), b: ix(b), k: *k }),
                Constraint::Less(a, b) => prop = Some(Prop::Less { a: ix(a), b: ix(b) }),
                Constraint::Sum { terms, total } => {
                    prop = Some(Prop::Sum { terms: terms.iter().map(|(c, v)| (*c, ix(v))).collect(), total: *total })
                }
                Constraint::BinaryTable { a, b, allowed } => {
                    let mut sup_a = vec![Domain::EMPTY; 128];
                    let mut sup_b = vec![Domain::EMPTY; 128];
                    for &(x, y) in allowed {
                        sup_a[x as usize].insert(y);
                        sup_b[y as usize].insert(x);
                    }
                    prop = Some(Prop::Table { a: ix(a), b: ix(b), sup_a, sup_b });
                }
                Constraint::UnaryForbid(a, values) => {
                    prop = Some(Prop::Forbid { a: ix(a), values: values.iter().copied().collect() })
                }
                Constraint::Element { row, col, cells, value } => {
                    prop = Some(Prop::Element {
                        row: ix(row),
                        col: ix(col),
                        cells: cells.iter().map(ix).collect(),
                        value: *value,
                    })
                }
                Constraint::AtMost { vars, values, limit } => {
                    prop = Some(Prop::AtMost {
                        vars: vars.iter().map(ix).collect(),
                        values: values.iter().copied().collect(),
                        limit: *limit,
                    })
                }
            }
            if let Some(pr) = prop {
                let id = props.len() as u32;
                let mut scope = pr.scope();
                scope.sort_unstable();
                scope.dedup();
                for v in scope {
                    core.watch[v as usize].push(id);
                }
                props.push(pr);
                prop_cause.push(cause);
            }
        }
        core.prop_queued = vec![false; props.len()];
        Engine { props, prop_cause, core, out: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.core.neq.len()
    }

    pub fn set_tracing(&mut self, on: bool) {
        self.core.trace = if on { Some(Vec::new()) } else { None };
    }

    pub fn take_trace(&mut self) -> Vec<TraceRow> {
        self.core.trace.as_mut().map(std::mem::take).unwrap_or_default()
    }

    /// Schedules the rules and propagators watching `v`.
    pub fn notify(&mut self, v: usize) {
        if !self.core.var_queued[v] {
            self.core.var_queued[v] = true;
            self.core.var_queue.push_back(v as u32);
        }
        for &p in &self.core.watch[v] {
            if !self.core.prop_queued[p as usize] {
                self.core.prop_queued[p as usize] = true;
                self.core.prop_queue.push_back(p);
            }
        }
    }

    /// Narrows `v` to `dom ∩ D(v)` and propagates to fixpoint.
    pub fn narrow(&mut self, s: &mut DomainStore, v: usize, dom: Domain) -> Result<(), usize> {
        let r = self.core.narrow(s, v as u32, dom, u32::MAX);
        if let Err(w) = r {
            self.core.clear();
            return Err(w);
        }
        self.run(s)
    }

    /// Propagates every constraint from scratch.
    pub fn propagate_all(&mut self, s: &mut DomainStore) -> Result<(), usize> {
        for v in 0..self.num_vars() {
            if s.get(v).is_empty() {
                return Err(v);
            }
            self.notify(v);
        }
        self.run(s)
    }

    /// Runs queued work until fixpoint or wipeout.
    pub fn run(&mut self, s: &mut DomainStore) -> Result<(), usize> {
        let r = self.run_inner(s);
        if r.is_err() {
            self.core.clear();
        }
        r
    }

    fn run_inner(&mut self, s: &mut DomainStore) -> Result<(), usize> {
        loop {
            if let Some(v) = self.core.var_queue.pop_front() {
                self.core.var_queued[v as usize] = false;
                self.core.process_var(s, v)?;
                continue;
            }
            let Some(p) = self.core.prop_queue.pop_front() else { break };
            self.core.prop_queued[p as usize] = false;
            self.out.clear();
            if self.props[p as usize].run(s, &mut self.out).is_err() {
                let w = self.props[p as usize].scope().into_iter().min().unwrap_or(0);
                return Err(w as usize);
            }
            self.core.current = p;
            let cause = self.prop_cause[p as usize];
            for k in 0..self.out.len() {
                let (v, d) = self.out[k];
                if let Err(w) = self.core.narrow(s, v, d, cause) {
                    self.core.current = NO_PROP;
                    return Err(w);
                }
            }
            self.core.current = NO_PROP;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Fixpoint,
    /// The first variable whose domain emptied.
    Wipeout(VarRef),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropOutcome {
    pub status: Status,
    /// Removed (variable, value) pairs in flat variable order.
    pub pruned: Vec<(VarRef, u32)>,
}

impl PropOutcome {
    pub fn is_wipeout(&self) -> bool {
        matches!(self.status, Status::Wipeout(_))
    }
}

fn outcome(p: &Problem, before: &[Domain], s: &DomainStore, r: Result<(), usize>) -> PropOutcome {
    let mut pruned = Vec::new();
    for (i, old) in before.iter().enumerate() {
        for v in old.minus(s.get(i)) {
            pruned.push((p.var_at(i), v));
        }
    }
    let status = match r {
        Ok(()) => Status::Fixpoint,
        Err(w) => Status::Wipeout(p.var_at(w)),
    };
    PropOutcome { status, pruned }
}

fn run_filtered(
    p: &Problem,
    s: &mut DomainStore,
    mode: AllDiffMode,
    keep: impl Fn(&Constraint) -> bool,
) -> PropOutcome {
    let before = s.domains().to_vec();
    let mut e = Engine::with_filter(p, mode, keep);
    let r = e.propagate_all(s);
    outcome(p, &before, s, r)
}

/// AC on the problem's not-equals constraints.
pub fn enforce_ac_neq(p: &Problem, s: &mut DomainStore) -> PropOutcome {
    run_filtered(p, s, AllDiffMode::Decompose, |c| matches!(c, Constraint::NotEquals(..)))
}

/// AC on the problem's channelling constraints (both directions and the
/// one-directional form).
pub fn enforce_ac_channel(p: &Problem, s: &mut DomainStore) -> PropOutcome {
    run_filtered(p, s, AllDiffMode::Decompose, |c| {
        matches!(c, Constraint::Channel { .. } | Constraint::ChannelImplies { .. })
    })
}

/// GAC on a single all-different over `scope`.
pub fn enforce_gac_alldiff(p: &Problem, s: &mut DomainStore, scope: &[VarRef]) -> PropOutcome {
    let before = s.domains().to_vec();
    let doms: Vec<Domain> = scope.iter().map(|v| s.get(p.index_of(*v))).collect();
    let r = match gac_alldiff(&doms) {
        Some(new) => {
            for (v, d) in scope.iter().zip(new) {
                s.set(p.index_of(*v), d);
            }
            Ok(())
        }
        None => Err(scope.iter().map(|v| p.index_of(*v)).min().unwrap_or(0)),
    };
    outcome(p, &before, s, r)
}

/// Every constraint of the problem to a joint fixpoint, all-different by GAC.
pub fn propagate_fixpoint(p: &Problem, s: &mut DomainStore) -> PropOutcome {
    propagate_fixpoint_with(p, s, AllDiffMode::Gac)
}

pub fn propagate_fixpoint_with(p: &Problem, s: &mut DomainStore, mode: AllDiffMode) -> PropOutcome {
    run_filtered(p, s, mode, |_| true)
}

/// Renders a pruning trace as CSV rows `var,value,constraint`.
pub fn trace_csv(p: &Problem, rows: &[TraceRow]) -> String {
    let mut s = String::from("var,value,constraint\n");
    for r in rows {
        let cause = p
            .constraints
            .get(r.cause)
            .map(|c| format!("{}#{}", crate::text::constraint_text(c).split(' ').next().unwrap_or(""), r.cause))
            .unwrap_or_else(|| "decision".into());
        writeln!(s, "{},{},{}", p.var_at(r.var), r.value, cause).unwrap();
    }
    s
}
