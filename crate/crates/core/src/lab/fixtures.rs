//! Stored domain configurations with expected consistency results.

use std::sync::OnceLock;

use super::{holds_on_domains, BinaryNetwork, Level};
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::model::{dual_equivalent_over, Constraint, Family, InjTag, ModelSpec, PermTag, Problem, VarRef};
use crate::text::parse_constraint;

const BUILTIN: &str = include_str!("../../fixtures/instances.txt");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixtureKind {
    Permutation,
    Injection,
    /// Several all-different (or clique) scopes over the primal variables.
    Custom,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expectation {
    pub level: Level,
    pub model: ModelSpec,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixture {
    pub name: String,
    pub kind: FixtureKind,
    pub primal: Vec<Domain>,
    pub dual: Vec<Domain>,
    pub values: Vec<u32>,
    pub side: Vec<Constraint>,
    /// 1-based primal indices.
    pub scopes: Vec<Vec<u32>>,
    pub expect: Vec<Expectation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplayResult {
    pub fixture: String,
    pub level: Level,
    pub model: ModelSpec,
    pub expected: bool,
    pub actual: bool,
}

impl ReplayResult {
    pub fn ok(&self) -> bool {
        self.expected == self.actual
    }
}

fn domains(s: &str, ln: usize) -> Result<Vec<Domain>> {
    s.split('|')
        .map(|part| {
            part.split_whitespace()
                .map(|t| t.parse::<u32>().map_err(|_| Error::Parse { line: ln + 1, msg: format!("bad value `{t}`") }))
                .collect::<Result<Domain>>()
        })
        .collect()
}

pub fn parse(text: &str) -> Result<Vec<Fixture>> {
    let mut out = Vec::new();
    let mut cur: Option<Fixture> = None;
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let perr = |msg: String| Error::Parse { line: ln + 1, msg };
        let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
        if key == "instance" {
            if cur.is_some() {
                return Err(perr("missing `end`".into()));
            }
            cur = Some(Fixture {
                name: rest.trim().to_string(),
                kind: FixtureKind::Permutation,
                primal: Vec::new(),
                dual: Vec::new(),
                values: Vec::new(),
                side: Vec::new(),
                scopes: Vec::new(),
                expect: Vec::new(),
            });
            continue;
        }
        let f = cur.as_mut().ok_or_else(|| perr(format!("`{key}` outside an instance")))?;
        match key {
            "kind" => {
                f.kind = match rest.trim() {
                    "permutation" => FixtureKind::Permutation,
                    "injection" => FixtureKind::Injection,
                    "custom" => FixtureKind::Custom,
                    other => return Err(perr(format!("unknown kind `{other}`"))),
                }
            }
            "x" => f.primal = domains(rest, ln)?,
            "d" => f.dual = domains(rest, ln)?,
            "values" => {
                f.values = rest
                    .split_whitespace()
                    .map(|t| t.parse().map_err(|_| perr(format!("bad value `{t}`"))))
                    .collect::<Result<_>>()?
            }
            "side" => {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                f.side.push(parse_constraint(&toks, ln)?);
            }
            "scopes" => {
                for s in rest.split_whitespace() {
                    let scope = s
                        .split(',')
                        .map(|t| t.parse().map_err(|_| perr(format!("bad index `{t}`"))))
                        .collect::<Result<Vec<u32>>>()?;
                    f.scopes.push(scope);
                }
            }
            "expect" => {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                if toks.len() != 3 {
                    return Err(perr("expected `expect <level> <model> <true|false>`".into()));
                }
                let level: Level = toks[0].parse()?;
                let mut model: ModelSpec = toks[1].parse()?;
                if f.kind == FixtureKind::Injection {
                    model = match model {
                        ModelSpec::Permutation(PermTag::Neq) => ModelSpec::Injection(InjTag::Neq),
                        ModelSpec::Permutation(PermTag::AllDiff) => ModelSpec::Injection(InjTag::AllDiff),
                        m => m,
                    };
                }
                let holds = toks[2].parse().map_err(|_| perr(format!("bad flag `{}`", toks[2])))?;
                f.expect.push(Expectation { level, model, holds });
            }
            "end" => {
                let mut f = cur.take().unwrap();
                if f.values.is_empty() {
                    f.values = default_values(&f);
                }
                out.push(f);
            }
            other => return Err(perr(format!("unknown directive `{other}`"))),
        }
    }
    if cur.is_some() {
        return Err(Error::Parse { line: text.lines().count(), msg: "missing `end`".into() });
    }
    Ok(out)
}

fn default_values(f: &Fixture) -> Vec<u32> {
    if f.kind == FixtureKind::Injection {
        return (1..=f.dual.len() as u32).collect();
    }
    let union = f.primal.iter().fold(Domain::EMPTY, |u, d| u.union(*d));
    if union.is_empty() {
        (1..=f.primal.len() as u32).collect()
    } else {
        union.iter().collect()
    }
}

/// The fixtures shipped with the crate.
pub fn builtin() -> &'static [Fixture] {
    static CELL: OnceLock<Vec<Fixture>> = OnceLock::new();
    CELL.get_or_init(|| parse(BUILTIN).expect("built-in fixtures parse"))
}

impl Fixture {
    /// The problem for `model` on this fixture's domains.
    pub fn problem(&self, model: ModelSpec) -> Result<Problem> {
        let n = self.primal.len() as u32;
        let scope: Vec<VarRef> = (1..=n).map(VarRef::primal).collect();
        let mut p;
        match (self.kind, model) {
            (FixtureKind::Permutation, ModelSpec::Permutation(tag)) => {
                p = super::permutation_problem(&self.primal, &self.values, tag);
            }
            (FixtureKind::Injection, ModelSpec::Injection(tag)) => {
                p = Problem::new(n, self.dual.len() as u32);
                p.primal = self.primal.clone();
                let duals = p.post_injection(&scope, &self.values, tag);
                for (d, dom) in duals.iter().zip(&self.dual) {
                    *p.domain_mut(*d) = *dom;
                }
            }
            (FixtureKind::Custom, ModelSpec::Permutation(tag @ (PermTag::Neq | PermTag::AllDiff))) => {
                p = Problem::new(n, 0);
                p.primal = self.primal.clone();
                let family = if tag == PermTag::Neq { Family::Neq } else { Family::AllDiff };
                for s in &self.scopes {
                    let vars: Vec<VarRef> = s.iter().map(|&i| VarRef::primal(i)).collect();
                    p.post_family(&vars, family);
                }
            }
            _ => {
                return Err(Error::WrongModelKind { tag: model.symbol().into(), context: "this fixture" });
            }
        }
        for c in &self.side {
            p.post(c.clone());
        }
        Ok(p)
    }

    pub fn network(&self, model: ModelSpec) -> Result<BinaryNetwork> {
        BinaryNetwork::from_problem(&self.problem(model)?)
    }

    /// Checks every expectation with [`holds_on_domains`].
    pub fn replay(&self) -> Result<Vec<ReplayResult>> {
        self.expect
            .iter()
            .map(|e| {
                let net = self.network(e.model)?;
                Ok(ReplayResult {
                    fixture: self.name.clone(),
                    level: e.level,
                    model: e.model,
                    expected: e.holds,
                    actual: holds_on_domains(&net, e.level),
                })
            })
            .collect()
    }

    /// Dual domains equivalent to the primal ones over `values`.
    pub fn equivalent_duals(&self) -> Vec<Domain> {
        dual_equivalent_over(&self.primal, &self.values)
    }
}

pub fn find(name: &str) -> Option<&'static Fixture> {
    builtin().iter().find(|f| f.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_parses() {
        let all = builtin();
        assert!(all.len() >= 15);
        let f = find("overlapping-triples").unwrap();
        assert_eq!(f.scopes.len(), 3);
        assert_eq!(f.values, vec![1, 2, 3]);
        let z = find("zero-block").unwrap();
        assert_eq!(z.values, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn rejects_unterminated() {
        assert!(parse("instance a\nx 1 | 2\n").is_err());
        assert!(parse("x 1\n").is_err());
    }
}
