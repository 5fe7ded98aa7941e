//! Variables, constraints and the builders for every permutation and
//! injection model variant.
//!
//! A [`Problem`] keeps three variable blocks: primal decision variables,
//! dual variables (one per value of a permutation or injection), and
//! auxiliary variables used by side constraints (the marks of a Golomb
//! ruler, for example). Indices and values are 1-based except where a
//! domain explicitly contains 0.

use std::fmt;
use std::str::FromStr;

use crate::domain::{Domain, MAX_VALUE};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Block {
    Primal,
    Dual,
    Aux,
}

impl Block {
    pub fn prefix(self) -> char {
        match self {
            Block::Primal => 'x',
            Block::Dual => 'd',
            Block::Aux => 'a',
        }
    }
}

/// A variable reference; `index` is 1-based within its block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarRef {
    pub block: Block,
    pub index: u32,
}

impl VarRef {
    pub fn primal(index: u32) -> Self {
        VarRef { block: Block::Primal, index }
    }

    pub fn dual(index: u32) -> Self {
        VarRef { block: Block::Dual, index }
    }

    pub fn aux(index: u32) -> Self {
        VarRef { block: Block::Aux, index }
    }
}

impl fmt::Display for VarRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.block.prefix(), self.index)
    }
}

impl FromStr for VarRef {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut chars = s.chars();
        let block = match chars.next() {
            Some('x') => Block::Primal,
            Some('d') => Block::Dual,
            Some('a') => Block::Aux,
            _ => return Err(Error::InvalidArgument(format!("bad variable `{s}`"))),
        };
        let index: u32 = chars.as_str().parse().map_err(|_| Error::InvalidArgument(format!("bad variable `{s}`")))?;
        if index == 0 {
            return Err(Error::InvalidArgument(format!("variable index must be 1-based: `{s}`")));
        }
        Ok(VarRef { block, index })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Constraint {
    NotEquals(VarRef, VarRef),
    /// `primal = primal_value <=> dual = dual_value`.
    Channel {
        primal: VarRef,
        dual: VarRef,
        primal_value: u32,
        dual_value: u32,
    },
    /// `primal = primal_value => dual = dual_value`.
    ChannelImplies {
        primal: VarRef,
        dual: VarRef,
        primal_value: u32,
        dual_value: u32,
    },
    AllDifferent(Vec<VarRef>),
    /// `b = a + k`.
    Offset(VarRef, VarRef, i32),
    /// `a < b`.
    Less(VarRef, VarRef),
    /// `first = first_value <=> second = second_value`, the dual form of a
    /// Langford separation.
    DualSepLink {
        first: VarRef,
        first_value: u32,
        second: VarRef,
        second_value: u32,
    },
    /// `sum(coef * var) = total`.
    Sum {
        terms: Vec<(i32, VarRef)>,
        total: i32,
    },
    BinaryTable {
        a: VarRef,
        b: VarRef,
        allowed: Vec<(u32, u32)>,
    },
    UnaryForbid(VarRef, Vec<u32>),
    /// `cells[row - 1][col - 1] = value` where `cells` is a square matrix
    /// stored row-major.
    Element {
        row: VarRef,
        col: VarRef,
        cells: Vec<VarRef>,
        value: u32,
    },
    /// At most `limit` of `vars` take a value from `values`.
    AtMost {
        vars: Vec<VarRef>,
        values: Vec<u32>,
        limit: u32,
    },
}

impl Constraint {
    pub fn scope(&self) -> Vec<VarRef> {
        match self {
            Constraint::NotEquals(a, b) | Constraint::Offset(a, b, _) | Constraint::Less(a, b) => {
                vec![*a, *b]
            }
            Constraint::Channel { primal, dual, .. } | Constraint::ChannelImplies { primal, dual, .. } => {
                vec![*primal, *dual]
            }
            Constraint::DualSepLink { first, second, .. } => vec![*first, *second],
            Constraint::AllDifferent(vars) | Constraint::AtMost { vars, .. } => vars.clone(),
            Constraint::Sum { terms, .. } => terms.iter().map(|&(_, v)| v).collect(),
            Constraint::BinaryTable { a, b, .. } => vec![*a, *b],
            Constraint::UnaryForbid(a, _) => vec![*a],
            Constraint::Element { row, col, cells, .. } => {
                let mut s = vec![*row, *col];
                s.extend(cells.iter().copied());
                s
            }
        }
    }

    /// Whether a complete assignment satisfies the constraint.
    pub fn is_satisfied(&self, value: impl Fn(VarRef) -> u32) -> bool {
        match self {
            Constraint::NotEquals(a, b) => value(*a) != value(*b),
            Constraint::Channel { primal, dual, primal_value, dual_value }
            | Constraint::DualSepLink {
                first: primal,
                first_value: primal_value,
                second: dual,
                second_value: dual_value,
            } => (value(*primal) == *primal_value) == (value(*dual) == *dual_value),
            Constraint::ChannelImplies { primal, dual, primal_value, dual_value } => {
                value(*primal) != *primal_value || value(*dual) == *dual_value
            }
            Constraint::AllDifferent(vars) => {
                let mut seen = Domain::EMPTY;
                vars.iter().all(|v| {
                    let x = value(*v);
                    let fresh = !seen.contains(x);
                    seen.insert(x);
                    fresh
                })
            }
            Constraint::Offset(a, b, k) => value(*b) as i64 == value(*a) as i64 + *k as i64,
            Constraint::Less(a, b) => value(*a) < value(*b),
            Constraint::Sum { terms, total } => {
                terms.iter().map(|&(c, v)| c as i64 * value(v) as i64).sum::<i64>() == *total as i64
            }
            Constraint::BinaryTable { a, b, allowed } => allowed.contains(&(value(*a), value(*b))),
            Constraint::UnaryForbid(a, values) => !values.contains(&value(*a)),
            Constraint::Element { row, col, cells, value: target } => {
                let k = (cells.len() as f64).sqrt() as u32;
                let (r, c) = (value(*row), value(*col));
                if r == 0 || c == 0 || r > k || c > k {
                    return false;
                }
                value(cells[((r - 1) * k + (c - 1)) as usize]) == *target
            }
            Constraint::AtMost { vars, values, limit } => {
                vars.iter().filter(|v| values.contains(&value(**v))).count() as u32 <= *limit
            }
        }
    }
}

/// Which of the primal/dual permutation constraint families is posted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PermTag {
    Neq,
    C,
    AllDiff,
    NeqC,
    CNeq,
    AllDiffC,
    CAllDiff,
    NeqCNeq,
    AllDiffCNeq,
    NeqCAllDiff,
    AllDiffCAllDiff,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    None,
    Neq,
    AllDiff,
}

impl PermTag {
    pub const ALL: [PermTag; 11] = [
        PermTag::Neq,
        PermTag::C,
        PermTag::AllDiff,
        PermTag::NeqC,
        PermTag::CNeq,
        PermTag::AllDiffC,
        PermTag::CAllDiff,
        PermTag::NeqCNeq,
        PermTag::AllDiffCNeq,
        PermTag::NeqCAllDiff,
        PermTag::AllDiffCAllDiff,
    ];

    /// (primal family, channelling, dual family)
    pub fn parts(self) -> (Family, bool, Family) {
        use Family as F;
        match self {
            PermTag::Neq => (F::Neq, false, F::None),
            PermTag::C => (F::None, true, F::None),
            PermTag::AllDiff => (F::AllDiff, false, F::None),
            PermTag::NeqC => (F::Neq, true, F::None),
            PermTag::CNeq => (F::None, true, F::Neq),
            PermTag::AllDiffC => (F::AllDiff, true, F::None),
            PermTag::CAllDiff => (F::None, true, F::AllDiff),
            PermTag::NeqCNeq => (F::Neq, true, F::Neq),
            PermTag::AllDiffCNeq => (F::AllDiff, true, F::Neq),
            PermTag::NeqCAllDiff => (F::Neq, true, F::AllDiff),
            PermTag::AllDiffCAllDiff => (F::AllDiff, true, F::AllDiff),
        }
    }

    pub fn has_dual(self) -> bool {
        self.parts().1
    }

    pub fn has_alldiff(self) -> bool {
        let (p, _, d) = self.parts();
        p == Family::AllDiff || d == Family::AllDiff
    }

    pub fn symbol(self) -> &'static str {
        match self {
            PermTag::Neq => "≠",
            PermTag::C => "c",
            PermTag::AllDiff => "∀",
            PermTag::NeqC => "≠c",
            PermTag::CNeq => "c≠",
            PermTag::AllDiffC => "∀c",
            PermTag::CAllDiff => "c∀",
            PermTag::NeqCNeq => "≠c≠",
            PermTag::AllDiffCNeq => "∀c≠",
            PermTag::NeqCAllDiff => "≠c∀",
            PermTag::AllDiffCAllDiff => "∀c∀",
        }
    }

    pub fn cli_name(self) -> &'static str {
        match self {
            PermTag::Neq => "neq",
            PermTag::C => "c",
            PermTag::AllDiff => "all-diff",
            PermTag::NeqC => "neq-c",
            PermTag::CNeq => "c-neq",
            PermTag::AllDiffC => "alldiff-c",
            PermTag::CAllDiff => "c-alldiff",
            PermTag::NeqCNeq => "neq-c-neq",
            PermTag::AllDiffCNeq => "alldiff-c-neq",
            PermTag::NeqCAllDiff => "neq-c-alldiff",
            PermTag::AllDiffCAllDiff => "alldiff-c-alldiff",
        }
    }
}

/// Injection model variants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InjTag {
    Neq,
    AllDiff,
    C1,
    C2,
    C3,
    C2Neq,
    AllDiffC2,
}

impl InjTag {
    pub const ALL: [InjTag; 7] =
        [InjTag::Neq, InjTag::AllDiff, InjTag::C1, InjTag::C2, InjTag::C3, InjTag::C2Neq, InjTag::AllDiffC2];

    pub fn has_dual(self) -> bool {
        !matches!(self, InjTag::Neq | InjTag::AllDiff)
    }

    pub fn has_alldiff(self) -> bool {
        matches!(self, InjTag::AllDiff | InjTag::AllDiffC2)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            InjTag::Neq => "≠",
            InjTag::AllDiff => "∀",
            InjTag::C1 => "c1",
            InjTag::C2 => "c2",
            InjTag::C3 => "c3",
            InjTag::C2Neq => "c2≠",
            InjTag::AllDiffC2 => "∀c2",
        }
    }

    pub fn cli_name(self) -> &'static str {
        match self {
            InjTag::Neq => "injection-neq",
            InjTag::AllDiff => "injection-alldiff",
            InjTag::C1 => "injection-c1",
            InjTag::C2 => "injection-c2",
            InjTag::C3 => "injection-c3",
            InjTag::C2Neq => "injection-c2neq",
            InjTag::AllDiffC2 => "injection-alldiff-c2",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelSpec {
    Permutation(PermTag),
    Injection(InjTag),
}

impl ModelSpec {
    pub fn has_dual(self) -> bool {
        match self {
            ModelSpec::Permutation(t) => t.has_dual(),
            ModelSpec::Injection(t) => t.has_dual(),
        }
    }

    pub fn has_alldiff(self) -> bool {
        match self {
            ModelSpec::Permutation(t) => t.has_alldiff(),
            ModelSpec::Injection(t) => t.has_alldiff(),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            ModelSpec::Permutation(t) => t.symbol(),
            ModelSpec::Injection(t) => t.symbol(),
        }
    }

    pub fn cli_name(self) -> &'static str {
        match self {
            ModelSpec::Permutation(t) => t.cli_name(),
            ModelSpec::Injection(t) => t.cli_name(),
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for ModelSpec {
    type Err = Error;

    /// Accepts the CLI names (`neq-c`, `injection-c2`) and the symbolic
    /// tags (`≠c`, `c2≠`).
    fn from_str(s: &str) -> Result<Self> {
        for t in PermTag::ALL {
            if s == t.cli_name() || s == t.symbol() {
                return Ok(ModelSpec::Permutation(t));
            }
        }
        if s == "alldiff" {
            return Ok(ModelSpec::Permutation(PermTag::AllDiff));
        }
        for t in InjTag::ALL {
            if s == t.cli_name() || s == t.symbol() {
                return Ok(ModelSpec::Injection(t));
            }
        }
        let short = s.strip_prefix("injection-").unwrap_or(s);
        let inj = match short {
            "c1" => Some(InjTag::C1),
            "c2" => Some(InjTag::C2),
            "c3" => Some(InjTag::C3),
            "c2neq" | "c2-neq" => Some(InjTag::C2Neq),
            "alldiff-c2" => Some(InjTag::AllDiffC2),
            _ => None,
        };
        inj.map(ModelSpec::Injection).ok_or_else(|| Error::UnknownModel(s.to_string()))
    }
}

/// A CSP instance: domains for each block plus a constraint list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Problem {
    /// Number of primal variables.
    pub n: u32,
    /// Number of values of the underlying permutation or injection.
    pub m: u32,
    pub primal: Vec<Domain>,
    pub dual: Vec<Domain>,
    pub aux: Vec<Domain>,
    pub constraints: Vec<Constraint>,
}

impl Problem {
    /// `n` primal variables, each with domain `{1..m}`.
    pub fn new(n: u32, m: u32) -> Self {
        Problem {
            n,
            m,
            primal: vec![Domain::range(1, m); n as usize],
            dual: Vec::new(),
            aux: Vec::new(),
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.primal.len() + self.dual.len() + self.aux.len()
    }

    pub fn index_of(&self, v: VarRef) -> usize {
        let i = v.index as usize - 1;
        match v.block {
            Block::Primal => i,
            Block::Dual => self.primal.len() + i,
            Block::Aux => self.primal.len() + self.dual.len() + i,
        }
    }

    pub fn var_at(&self, idx: usize) -> VarRef {
        let np = self.primal.len();
        let nd = self.dual.len();
        if idx < np {
            VarRef::primal(idx as u32 + 1)
        } else if idx < np + nd {
            VarRef::dual((idx - np) as u32 + 1)
        } else {
            VarRef::aux((idx - np - nd) as u32 + 1)
        }
    }

    pub fn contains(&self, v: VarRef) -> bool {
        let len = match v.block {
            Block::Primal => self.primal.len(),
            Block::Dual => self.dual.len(),
            Block::Aux => self.aux.len(),
        };
        v.index >= 1 && v.index as usize <= len
    }

    pub fn domain(&self, v: VarRef) -> Domain {
        let i = v.index as usize - 1;
        match v.block {
            Block::Primal => self.primal[i],
            Block::Dual => self.dual[i],
            Block::Aux => self.aux[i],
        }
    }

    pub fn domain_mut(&mut self, v: VarRef) -> &mut Domain {
        let i = v.index as usize - 1;
        match v.block {
            Block::Primal => &mut self.primal[i],
            Block::Dual => &mut self.dual[i],
            Block::Aux => &mut self.aux[i],
        }
    }

    /// All domains in flat index order (primal, dual, aux).
    pub fn flat_domains(&self) -> Vec<Domain> {
        self.primal.iter().chain(&self.dual).chain(&self.aux).copied().collect()
    }

    pub fn vars(&self) -> impl Iterator<Item = VarRef> + '_ {
        (0..self.num_vars()).map(|i| self.var_at(i))
    }

    pub fn add_dual(&mut self, dom: Domain) -> VarRef {
        self.dual.push(dom);
        VarRef::dual(self.dual.len() as u32)
    }

    pub fn add_aux(&mut self, dom: Domain) -> VarRef {
        self.aux.push(dom);
        VarRef::aux(self.aux.len() as u32)
    }

    pub fn post(&mut self, c: Constraint) {
        debug_assert!(c.scope().iter().all(|v| self.contains(*v)), "constraint scope out of range: {c:?}");
        self.constraints.push(c);
    }

    /// Checks a complete flat assignment against domains and constraints.
    pub fn is_solution(&self, assignment: &[u32]) -> bool {
        if assignment.len() != self.num_vars() {
            return false;
        }
        let doms = self.flat_domains();
        if doms.iter().zip(assignment).any(|(d, &v)| !d.contains(v)) {
            return false;
        }
        let value = |v: VarRef| assignment[self.index_of(v)];
        self.constraints.iter().all(|c| c.is_satisfied(value))
    }

    /// Posts a permutation model over `scope` with one dual variable per
    /// entry of `values`. Dual values are 1-based positions in `scope`.
    /// Returns the dual variables (empty if the tag has no dual block).
    pub fn post_permutation(&mut self, scope: &[VarRef], values: &[u32], tag: PermTag) -> Vec<VarRef> {
        let (primal, channel, dual) = tag.parts();
        self.post_family(scope, primal);
        if !channel {
            return Vec::new();
        }
        let positions = Domain::range(1, scope.len() as u32);
        let duals: Vec<VarRef> = values.iter().map(|_| self.add_dual(positions)).collect();
        for (p, &x) in scope.iter().enumerate() {
            for (k, &v) in values.iter().enumerate() {
                self.post(Constraint::Channel { primal: x, dual: duals[k], primal_value: v, dual_value: p as u32 + 1 });
            }
        }
        self.post_family(&duals, dual);
        duals
    }

    /// Posts an injection model from `scope` into `values` (`values.len()`
    /// may exceed `scope.len()`). Returns the dual variables.
    pub fn post_injection(&mut self, scope: &[VarRef], values: &[u32], tag: InjTag) -> Vec<VarRef> {
        let n = scope.len() as u32;
        let m = values.len() as u32;
        match tag {
            InjTag::Neq => {
                self.post_family(scope, Family::Neq);
                Vec::new()
            }
            InjTag::AllDiff => {
                self.post_family(scope, Family::AllDiff);
                Vec::new()
            }
            InjTag::C1 => {
                let duals: Vec<VarRef> = values.iter().map(|_| self.add_dual(Domain::range(1, n))).collect();
                for (p, &x) in scope.iter().enumerate() {
                    for (k, &v) in values.iter().enumerate() {
                        self.post(Constraint::ChannelImplies {
                            primal: x,
                            dual: duals[k],
                            primal_value: v,
                            dual_value: p as u32 + 1,
                        });
                    }
                }
                duals
            }
            InjTag::C2 | InjTag::C2Neq | InjTag::AllDiffC2 | InjTag::C3 => {
                if tag == InjTag::AllDiffC2 {
                    self.post_family(scope, Family::AllDiff);
                }
                // c2: dummies n+1..m are distinct; c3: one shared dummy n+1.
                let dom = if tag == InjTag::C3 { Domain::range(1, n + 1) } else { Domain::range(1, m) };
                let duals: Vec<VarRef> = values.iter().map(|_| self.add_dual(dom)).collect();
                for (p, &x) in scope.iter().enumerate() {
                    for (k, &v) in values.iter().enumerate() {
                        self.post(Constraint::Channel {
                            primal: x,
                            dual: duals[k],
                            primal_value: v,
                            dual_value: p as u32 + 1,
                        });
                    }
                }
                if tag == InjTag::C2Neq {
                    self.post_family(&duals, Family::Neq);
                }
                duals
            }
        }
    }

    pub(crate) fn post_family(&mut self, scope: &[VarRef], family: Family) {
        match family {
            Family::None => {}
            Family::Neq => {
                for i in 0..scope.len() {
                    for j in i + 1..scope.len() {
                        self.post(Constraint::NotEquals(scope[i], scope[j]));
                    }
                }
            }
            Family::AllDiff => self.post(Constraint::AllDifferent(scope.to_vec())),
        }
    }
}

/// Builds the model of a plain permutation of `{1..n}` named by `spec`.
pub fn build_permutation_model(n: u32, spec: ModelSpec) -> Result<Problem> {
    let ModelSpec::Permutation(tag) = spec else {
        return Err(Error::WrongModelKind { tag: spec.symbol().into(), context: "a permutation model" });
    };
    check_size(n, n)?;
    let mut p = Problem::new(n, n);
    let scope: Vec<VarRef> = (1..=n).map(VarRef::primal).collect();
    let values: Vec<u32> = (1..=n).collect();
    p.post_permutation(&scope, &values, tag);
    Ok(p)
}

/// Builds an injection of `n` variables into `{1..m}`.
pub fn build_injection_model(n: u32, m: u32, spec: ModelSpec) -> Result<Problem> {
    let ModelSpec::Injection(tag) = spec else {
        return Err(Error::WrongModelKind { tag: spec.symbol().into(), context: "an injection model" });
    };
    if m < n {
        return Err(Error::InvalidArgument(format!("injection needs m >= n, got n={n}, m={m}")));
    }
    check_size(n, m)?;
    let mut p = Problem::new(n, m);
    let scope: Vec<VarRef> = (1..=n).map(VarRef::primal).collect();
    let values: Vec<u32> = (1..=m).collect();
    p.post_injection(&scope, &values, tag);
    Ok(p)
}

fn check_size(n: u32, m: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one variable".into()));
    }
    if m + 1 > MAX_VALUE {
        return Err(Error::ValueOutOfRange(m + 1));
    }
    Ok(())
}

/// `dom(d_j) = { i : j in dom(x_i) }` for `j` in `1..=n`, `n = primal.len()`.
pub fn dual_equivalent_domains(primal: &[Domain]) -> Vec<Domain> {
    let values: Vec<u32> = (1..=primal.len() as u32).collect();
    dual_equivalent_over(primal, &values)
}

/// Dual domains over an explicit value list: the k-th dual variable holds
/// the (1-based) positions of the primal variables whose domain contains
/// `values[k]`.
pub fn dual_equivalent_over(primal: &[Domain], values: &[u32]) -> Vec<Domain> {
    values
        .iter()
        .map(|&v| primal.iter().enumerate().filter(|(_, d)| d.contains(v)).map(|(i, _)| i as u32 + 1).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn count(p: &Problem, pred: impl Fn(&Constraint) -> bool) -> usize {
        p.constraints.iter().filter(|c| pred(c)).count()
    }

    #[test]
    fn channel_model_counts() {
        let p = build_permutation_model(3, ModelSpec::Permutation(PermTag::C)).unwrap();
        assert_eq!(p.primal.len(), 3);
        assert_eq!(p.dual.len(), 3);
        assert_eq!(count(&p, |c| matches!(c, Constraint::Channel { .. })), 9);
        assert_eq!(count(&p, |c| matches!(c, Constraint::NotEquals(..))), 0);
    }

    #[test]
    fn neq_c_neq_counts() {
        let p = build_permutation_model(4, ModelSpec::Permutation(PermTag::NeqCNeq)).unwrap();
        let primal_neq = count(&p, |c| matches!(c, Constraint::NotEquals(a, _) if a.block == Block::Primal));
        let dual_neq = count(&p, |c| matches!(c, Constraint::NotEquals(a, _) if a.block == Block::Dual));
        assert_eq!((primal_neq, dual_neq), (6, 6));
        assert_eq!(count(&p, |c| matches!(c, Constraint::Channel { .. })), 16);
    }

    #[test]
    fn alldiff_model_has_no_dual() {
        let p = build_permutation_model(5, ModelSpec::Permutation(PermTag::AllDiff)).unwrap();
        assert!(p.dual.is_empty());
        assert_eq!(p.constraints, vec![Constraint::AllDifferent((1..=5).map(VarRef::primal).collect())]);
    }

    #[test]
    fn tag_kind_is_checked() {
        assert!(build_permutation_model(3, ModelSpec::Injection(InjTag::C2)).is_err());
        assert!(build_injection_model(3, 5, ModelSpec::Permutation(PermTag::C)).is_err());
        assert!(build_injection_model(4, 3, ModelSpec::Injection(InjTag::C2)).is_err());
    }

    #[test]
    fn injection_c2_and_c3_shapes() {
        let p = build_injection_model(3, 5, ModelSpec::Injection(InjTag::C2)).unwrap();
        assert!(p.primal.iter().all(|d| *d == Domain::range(1, 5)));
        assert_eq!(p.dual.len(), 5);
        assert!(p.dual.iter().all(|d| *d == Domain::range(1, 5)));
        assert_eq!(count(&p, |c| matches!(c, Constraint::Channel { .. })), 15);

        let p = build_injection_model(3, 5, ModelSpec::Injection(InjTag::C3)).unwrap();
        assert_eq!(p.dual.len(), 5);
        assert!(p.dual.iter().all(|d| *d == Domain::from_values([1, 2, 3, 4])));

        let p = build_injection_model(3, 5, ModelSpec::Injection(InjTag::C1)).unwrap();
        assert!(p.dual.iter().all(|d| *d == Domain::range(1, 3)));
        assert_eq!(count(&p, |c| matches!(c, Constraint::ChannelImplies { .. })), 15);
    }

    #[test]
    fn composite_tags_are_unions_of_components() {
        let set = |t: PermTag| -> HashSet<Constraint> {
            build_permutation_model(4, ModelSpec::Permutation(t)).unwrap().constraints.into_iter().collect()
        };
        let neq = set(PermTag::Neq);
        let c = set(PermTag::C);
        let ad = set(PermTag::AllDiff);
        let union = |a: &HashSet<Constraint>, b: &HashSet<Constraint>| a.union(b).cloned().collect::<HashSet<_>>();
        assert_eq!(set(PermTag::NeqC), union(&neq, &c));
        assert_eq!(set(PermTag::AllDiffC), union(&ad, &c));
        // Dual families live on d-variables; check them by block.
        let cneq = set(PermTag::CNeq);
        assert!(c.is_subset(&cneq));
        assert_eq!(cneq.len() - c.len(), 6);
        assert_eq!(set(PermTag::NeqCNeq), union(&neq, &cneq));
        assert_eq!(set(PermTag::AllDiffCNeq), union(&ad, &cneq));
        let call = set(PermTag::CAllDiff);
        assert_eq!(set(PermTag::NeqCAllDiff), union(&neq, &call));
        assert_eq!(set(PermTag::AllDiffCAllDiff), union(&ad, &call));
    }

    #[test]
    fn dual_domains_examples() {
        let d = |v: &[u32]| Domain::from_values(v.iter().copied());
        assert_eq!(dual_equivalent_domains(&[d(&[1]), d(&[2])]), vec![d(&[1]), d(&[2])]);
        assert_eq!(dual_equivalent_domains(&[d(&[1, 2]), d(&[1, 2])]), vec![d(&[1, 2]), d(&[1, 2])]);
        let primal = [d(&[1, 2]), d(&[1, 2]), d(&[1, 2]), d(&[3, 4, 5]), d(&[3, 4, 5])];
        assert_eq!(
            dual_equivalent_domains(&primal),
            vec![d(&[1, 2, 3]), d(&[1, 2, 3]), d(&[4, 5]), d(&[4, 5]), d(&[4, 5])]
        );
    }

    #[test]
    fn model_spec_parsing() {
        assert_eq!("neq-c".parse::<ModelSpec>().unwrap(), ModelSpec::Permutation(PermTag::NeqC));
        assert_eq!("∀c∀".parse::<ModelSpec>().unwrap(), ModelSpec::Permutation(PermTag::AllDiffCAllDiff));
        assert_eq!("injection-c2neq".parse::<ModelSpec>().unwrap(), ModelSpec::Injection(InjTag::C2Neq));
        assert_eq!("c2".parse::<ModelSpec>().unwrap(), ModelSpec::Injection(InjTag::C2));
        assert!("bogus".parse::<ModelSpec>().is_err());
        for t in PermTag::ALL {
            assert_eq!(t.cli_name().parse::<ModelSpec>().unwrap(), ModelSpec::Permutation(t));
        }
        for t in InjTag::ALL {
            assert_eq!(t.cli_name().parse::<ModelSpec>().unwrap(), ModelSpec::Injection(t));
        }
    }
}
