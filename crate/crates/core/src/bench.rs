//! Benchmark runs, CSV reports and the embedded reference fail counts.

use std::fmt::Write as _;
use std::sync::OnceLock;
use std::time::Duration;

use crate::error::{Error, Result};
use crate::lab::{self, fixtures, LatticeMode, Level};
use crate::model::{ModelSpec, PermTag};
use crate::problems::InstanceKind;
use crate::sat::{lockstep_compare, random_permutation_csp, LockstepReport, SatVariant};
use crate::search::{solve, Algorithm, Goal, Heuristic, SearchConfig, SearchStats};

const REFERENCE: &str = include_str!("../data/reference.csv");

pub const CSV_HEADER: &str = "instance,model,heuristic,algorithm,goal,fails,nodes,solutions,time_ms,ref_fails,delta";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReferenceCell {
    pub table: u8,
    pub instance: InstanceKind,
    pub model: ModelSpec,
    pub heuristic: Heuristic,
    pub goal: Goal,
    pub fails: u64,
}

fn parse_reference(text: &str) -> Result<Vec<ReferenceCell>> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, rec) in rd.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| Error::Parse { line, msg: e.to_string() })?;
        if rec.len() != 6 {
            return Err(Error::Parse { line, msg: format!("expected 6 fields, got {}", rec.len()) });
        }
        let num = |k: usize| {
            rec[k].parse::<u64>().map_err(|_| Error::Parse { line, msg: format!("bad number `{}`", &rec[k]) })
        };
        out.push(ReferenceCell {
            table: num(0)? as u8,
            instance: rec[1].parse()?,
            model: rec[2].parse()?,
            heuristic: rec[3].parse()?,
            goal: rec[4].parse()?,
            fails: num(5)?,
        });
    }
    Ok(out)
}

/// Every embedded cell, in file order.
pub fn reference_cells() -> &'static [ReferenceCell] {
    static CELLS: OnceLock<Vec<ReferenceCell>> = OnceLock::new();
    CELLS.get_or_init(|| parse_reference(REFERENCE).expect("embedded reference table"))
}

pub fn lookup(
    instance: InstanceKind,
    model: ModelSpec,
    heuristic: Heuristic,
    goal: Goal,
) -> Option<&'static ReferenceCell> {
    reference_cells()
        .iter()
        .find(|c| c.instance == instance && c.model == model && c.heuristic == heuristic && c.goal == goal)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunSpec {
    pub instance: InstanceKind,
    pub model: ModelSpec,
    pub heuristic: Heuristic,
    pub algorithm: Algorithm,
    pub goal: Goal,
    pub time_limit: Option<Duration>,
}

impl RunSpec {
    /// MGAC for models with an all-different, MAC otherwise.
    pub fn new(instance: InstanceKind, model: ModelSpec, heuristic: Heuristic, goal: Goal) -> Self {
        RunSpec { instance, model, heuristic, algorithm: Algorithm::default_for(model), goal, time_limit: None }
    }

    pub fn from_cell(c: &ReferenceCell) -> Self {
        RunSpec::new(c.instance, c.model, c.heuristic, c.goal)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunRow {
    pub spec: RunSpec,
    pub stats: SearchStats,
    pub ref_fails: Option<u64>,
}

impl RunRow {
    pub fn fails(&self) -> u64 {
        self.stats.fails
    }

    /// `fails - ref_fails`.
    pub fn delta(&self) -> Option<i64> {
        self.ref_fails.map(|r| self.stats.fails as i64 - r as i64)
    }

    pub fn csv_line(&self) -> String {
        let s = &self.spec;
        let opt = |v: Option<String>| v.unwrap_or_default();
        let fails = if self.stats.aborted { format!("{}+", self.stats.fails) } else { self.stats.fails.to_string() };
        format!(
            "\"{}\",{},{},{},{},{},{},{},{},{},{}",
            s.instance,
            s.model.cli_name(),
            s.heuristic.name(),
            s.algorithm.name(),
            s.goal.name(),
            fails,
            self.stats.nodes,
            self.stats.solutions,
            self.stats.elapsed.as_millis(),
            opt(self.ref_fails.map(|r| r.to_string())),
            opt(self.delta().map(|d| d.to_string())),
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunReport {
    pub rows: Vec<RunRow>,
}

impl RunReport {
    pub fn to_csv(&self) -> String {
        let mut s = format!("{CSV_HEADER}\n");
        for r in &self.rows {
            s.push_str(&r.csv_line());
            s.push('\n');
        }
        s
    }

    pub fn aborted(&self) -> bool {
        self.rows.iter().any(|r| r.stats.aborted)
    }
}

pub fn run_one(spec: &RunSpec) -> Result<RunRow> {
    if !spec.instance.accepts(spec.model) {
        return Err(Error::WrongModelKind { tag: spec.model.cli_name().to_string(), context: "this instance" });
    }
    let p = spec.instance.build(spec.model)?;
    let mut cfg = SearchConfig::new(spec.algorithm, spec.heuristic, spec.goal);
    cfg.time_limit = spec.time_limit;
    cfg.keep_solutions = false;
    let r = solve(&p, &cfg)?;
    let ref_fails = lookup(spec.instance, spec.model, spec.heuristic, spec.goal).map(|c| c.fails);
    Ok(RunRow { spec: *spec, stats: r.stats, ref_fails })
}

/// Outcome of a `verify` subcommand: a CSV body and a violation count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOutcome {
    pub csv: String,
    pub violations: usize,
}

impl VerifyOutcome {
    pub fn ok(&self) -> bool {
        self.violations == 0
    }
}

pub fn verify_fixtures() -> Result<VerifyOutcome> {
    let mut csv = String::from("fixture,level,model,expected,actual,ok\n");
    let mut violations = 0;
    for f in fixtures::builtin() {
        for r in f.replay()? {
            violations += usize::from(!r.ok());
            writeln!(csv, "{},{},{},{},{},{}", r.fixture, r.level, r.model.cli_name(), r.expected, r.actual, r.ok())
                .unwrap();
        }
    }
    Ok(VerifyOutcome { csv, violations })
}

pub fn verify_lattice(n: u32, mode: LatticeMode) -> VerifyOutcome {
    let models: Vec<ModelSpec> = PermTag::ALL.iter().map(|&t| ModelSpec::Permutation(t)).collect();
    let rep = lab::verify_lattice(n, &Level::ALL, &models, mode);
    VerifyOutcome { csv: rep.to_csv(), violations: rep.violations() }
}

pub const LOCKSTEP_SEEDS: u64 = 50;

/// DP against FC on L(2,3), L(2,4) and seeded random 5-permutation problems.
pub fn lockstep_suite() -> Result<Vec<(String, LockstepReport)>> {
    let mut cases = vec![
        (
            "langford:2,3".to_string(),
            InstanceKind::Langford { n: 2, m: 3 }.build(ModelSpec::Permutation(PermTag::Neq))?,
        ),
        (
            "langford:2,4".to_string(),
            InstanceKind::Langford { n: 2, m: 4 }.build(ModelSpec::Permutation(PermTag::Neq))?,
        ),
    ];
    for seed in 0..LOCKSTEP_SEEDS {
        cases.push((format!("random:5,{seed}"), random_permutation_csp(5, 5, 0.7, seed)));
    }
    let mut out = Vec::new();
    for (name, p) in &cases {
        for v in [SatVariant::PrimalSAT, SatVariant::ChannellingSAT] {
            out.push((name.clone(), lockstep_compare(p, v)?));
        }
    }
    Ok(out)
}

pub fn verify_lockstep() -> Result<VerifyOutcome> {
    let mut csv = String::from("case,variant,fc_branches,dp_branches,fc_solutions,dp_models,equal\n");
    let mut violations = 0;
    for (name, r) in lockstep_suite()? {
        violations += usize::from(!r.equal());
        writeln!(
            csv,
            "\"{name}\",{:?},{},{},{},{},{}",
            r.variant,
            r.fc_branches,
            r.dp_branches,
            r.fc_solutions,
            r.dp_models,
            r.equal()
        )
        .unwrap();
    }
    Ok(VerifyOutcome { csv, violations })
}

/// Fail counts of every permutation tag on one instance under lex.
pub fn dominance_runs(instance: InstanceKind, goal: Goal) -> Result<Vec<RunRow>> {
    PermTag::ALL
        .iter()
        .map(|&t| run_one(&RunSpec::new(instance, ModelSpec::Permutation(t), Heuristic::LexStatic, goal)))
        .collect()
}

/// Checks fails(∀) <= fails(c) <= fails(≠), equal fails inside the
/// channelling class and inside the all-different class.
pub fn dominance_violations(rows: &[RunRow]) -> Vec<String> {
    let fails = |t: PermTag| rows.iter().find(|r| r.spec.model == ModelSpec::Permutation(t)).map(RunRow::fails);
    let mut out = Vec::new();
    let (Some(a), Some(c), Some(ne)) = (fails(PermTag::AllDiff), fails(PermTag::C), fails(PermTag::Neq)) else {
        return vec!["missing ∀, c or ≠ run".to_string()];
    };
    if a > c {
        out.push(format!("fails(∀)={a} > fails(c)={c}"));
    }
    if c > ne {
        out.push(format!("fails(c)={c} > fails(≠)={ne}"));
    }
    for r in rows {
        let ModelSpec::Permutation(t) = r.spec.model else { continue };
        let class = if t.has_alldiff() {
            a
        } else if t == PermTag::Neq {
            ne
        } else {
            c
        };
        if r.fails() != class {
            out.push(format!("fails({})={} differs from its class ({class})", t.symbol(), r.fails()));
        }
    }
    out
}

pub fn verify_dominance(instance: InstanceKind, goal: Goal, sweep: usize, seed: u64) -> Result<VerifyOutcome> {
    let rows = dominance_runs(instance, goal)?;
    let mut csv = RunReport { rows: rows.clone() }.to_csv();
    let mut issues = dominance_violations(&rows);
    issues.extend(
        lab::sweep::propagator_equivalence(sweep, seed)
            .into_iter()
            .map(|m| format!("fixpoint case {}: {}", m.case, m.detail)),
    );
    if !issues.is_empty() {
        csv.push_str("violation\n");
        for i in &issues {
            writeln!(csv, "\"{i}\"").unwrap();
        }
    }
    Ok(VerifyOutcome { csv, violations: issues.len() })
}
