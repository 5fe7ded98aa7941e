//! Benchmark problem builders.

use std::fmt;
use std::str::FromStr;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::model::{Constraint, Family, InjTag, ModelSpec, PermTag, Problem, VarRef};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LangfordOptions {
    /// Remove reversal symmetry.
    pub symmetry_breaking: bool,
    /// Post the separation constraints on the dual block as well.
    pub dual_separation: bool,
}

impl Default for LangfordOptions {
    fn default() -> Self {
        LangfordOptions { symmetry_breaking: true, dual_separation: true }
    }
}

/// Digit (1..=m) and occurrence (1-based) encoded by value `i` in 1..=n*m.
pub fn langford_occurrence(i: u32, m: u32) -> (u32, u32) {
    ((i - 1) % m + 1, (i - 1) / m + 1)
}

/// Langford's problem L(n, m) with default options.
pub fn langford(n: u32, m: u32, model: ModelSpec) -> Result<Problem> {
    langford_with(n, m, model, LangfordOptions::default())
}

/// x_i is the position of occurrence `(i-1)/m + 1` of digit `(i-1)%m + 1`;
/// d_j is the occurrence placed at position j.
pub fn langford_with(n: u32, m: u32, model: ModelSpec, opts: LangfordOptions) -> Result<Problem> {
    if !(2..=3).contains(&n) {
        return Err(Error::InvalidArgument(format!("langford needs 2 or 3 occurrences, got {n}")));
    }
    if m < 2 {
        return Err(Error::InvalidArgument(format!("langford needs at least 2 digits, got {m}")));
    }
    let ModelSpec::Permutation(tag) = model else {
        return Err(Error::WrongModelKind { tag: model.symbol().into(), context: "langford" });
    };
    let len = n * m;
    if len >= 127 {
        return Err(Error::ValueOutOfRange(len));
    }
    let mut p = Problem::new(len, len);
    let x = |i: u32| VarRef::primal(i);
    let scope: Vec<VarRef> = (1..=len).map(x).collect();
    let positions: Vec<u32> = (1..=len).collect();
    let duals = p.post_permutation(&scope, &positions, tag);
    for i in 1..=m {
        for k in 0..n - 1 {
            p.post(Constraint::Offset(x(i + k * m), x(i + (k + 1) * m), i as i32 + 1));
        }
    }
    if opts.dual_separation && !duals.is_empty() {
        for i in 1..=m {
            for k in 0..n - 1 {
                let (a, b) = (i + k * m, i + (k + 1) * m);
                for j in 1..=len {
                    let j2 = j + i + 1;
                    if j2 <= len {
                        p.post(Constraint::DualSepLink {
                            first: duals[j as usize - 1],
                            first_value: a,
                            second: duals[j2 as usize - 1],
                            second_value: b,
                        });
                    } else {
                        // occurrence `a` cannot sit this late
                        p.post(Constraint::UnaryForbid(duals[j as usize - 1], vec![a]));
                    }
                }
            }
        }
    }
    if opts.symmetry_breaking {
        langford_symmetry(&mut p, n, m);
    }
    Ok(p)
}

/// Copy n-1 of digit m (the middle one for n = 3, the first for n = 2)
/// stays in the first half; when it can sit exactly on the mirror line,
/// digit m - 1 must then lean left.
fn langford_symmetry(p: &mut Problem, n: u32, m: u32) {
    let len = n * m;
    let x = |i: u32| VarRef::primal(i);
    // Reversal sends copy k of a digit to the mirror of copy n-1-k, so a
    // chain whose copy n-2 sits at a maps to one whose copy n-2 sits at
    // mirror(a). Break by a <= mirror(a).
    let start = (n - 2) * m;
    let mirror = |a: u32, digit: u32| -> i64 { (len + 1) as i64 - a as i64 - (3 - n as i64) * (digit + 1) as i64 };
    let anchor = x(start + m);
    let next = x(start + m - 1);
    let forbid: Vec<u32> = (1..=len).filter(|&a| a as i64 > mirror(a, m)).collect();
    if !forbid.is_empty() {
        p.post(Constraint::UnaryForbid(anchor, forbid));
    }
    if m > 1 {
        if let Some(c) = (1..=len).find(|&a| a as i64 == mirror(a, m)) {
            let mut allowed = Vec::new();
            for a in 1..=len {
                for b in 1..=len {
                    if a != c || (b as i64) < mirror(b, m - 1) {
                        allowed.push((a, b));
                    }
                }
            }
            p.post(Constraint::BinaryTable { a: anchor, b: next, allowed });
        }
    }
}

/// The Langford sequence (digits by position) of a primal assignment.
pub fn langford_sequence(x: &[u32], m: u32) -> Vec<u32> {
    let mut seq = vec![0; x.len()];
    for (i, &pos) in x.iter().enumerate() {
        seq[pos as usize - 1] = langford_occurrence(i as u32 + 1, m).0;
    }
    seq
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GolombMode {
    /// Distances plus filler variables forming a permutation of 1..=length.
    PaddedPermutation(PermTag),
    Injection(InjTag),
}

impl GolombMode {
    pub fn model(self) -> ModelSpec {
        match self {
            GolombMode::PaddedPermutation(t) => ModelSpec::Permutation(t),
            GolombMode::Injection(t) => ModelSpec::Injection(t),
        }
    }
}

impl From<ModelSpec> for GolombMode {
    fn from(m: ModelSpec) -> Self {
        match m {
            ModelSpec::Permutation(t) => GolombMode::PaddedPermutation(t),
            ModelSpec::Injection(t) => GolombMode::Injection(t),
        }
    }
}

/// Index pairs (i < j) of distance variables, in primal order.
pub fn golomb_pairs(marks: u32) -> Vec<(u32, u32)> {
    let mut v = Vec::new();
    for i in 1..=marks {
        for j in i + 1..=marks {
            v.push((i, j));
        }
    }
    v
}

/// Golomb ruler with `marks` marks and the given length. Primal variables
/// are the distances t_j - t_i (then fillers); the marks are auxiliary
/// with t_1 = 0 and t_marks = length.
pub fn golomb(marks: u32, length: u32, mode: GolombMode) -> Result<Problem> {
    if marks < 3 {
        return Err(Error::InvalidArgument(format!("golomb needs at least 3 marks, got {marks}")));
    }
    let pairs = golomb_pairs(marks);
    let k = pairs.len() as u32;
    if length < k {
        return Err(Error::InvalidArgument(format!("length {length} is shorter than the {k} distances")));
    }
    if length >= 127 {
        return Err(Error::ValueOutOfRange(length));
    }
    let values: Vec<u32> = (1..=length).collect();
    let mut p;
    match mode {
        GolombMode::PaddedPermutation(tag) => {
            p = Problem::new(length, length);
            let scope: Vec<VarRef> = (1..=length).map(VarRef::primal).collect();
            p.post_permutation(&scope, &values, tag);
        }
        GolombMode::Injection(tag) => {
            p = Problem::new(k, length);
            let scope: Vec<VarRef> = (1..=k).map(VarRef::primal).collect();
            p.post_injection(&scope, &values, tag);
        }
    }
    let t: Vec<VarRef> = (1..=marks)
        .map(|i| {
            let d = match i {
                1 => Domain::singleton(0),
                _ if i == marks => Domain::singleton(length),
                _ => Domain::range(1, length - 1),
            };
            p.add_aux(d)
        })
        .collect();
    for w in t.windows(2) {
        p.post(Constraint::Less(w[0], w[1]));
    }
    for (idx, &(i, j)) in pairs.iter().enumerate() {
        let d = VarRef::primal(idx as u32 + 1);
        p.post(Constraint::Sum { terms: vec![(1, t[j as usize - 1]), (-1, t[i as usize - 1]), (-1, d)], total: 0 });
    }
    Ok(p)
}

/// Distances of a ruler given by its marks, in [`golomb_pairs`] order.
pub fn golomb_distances(marks: &[u32]) -> Vec<u32> {
    golomb_pairs(marks.len() as u32).iter().map(|&(i, j)| marks[j as usize - 1] - marks[i as usize - 1]).collect()
}

/// Whether `marks` (ascending, starting at 0) form a Golomb ruler.
pub fn is_golomb_ruler(marks: &[u32]) -> bool {
    let mut d = golomb_distances(marks);
    let n = d.len();
    d.sort_unstable();
    d.dedup();
    marks.first() == Some(&0) && marks.windows(2).all(|w| w[0] < w[1]) && d.len() == n
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BenchmarkKind {
    QG3,
    QG4,
    Sport,
    Magic,
}

/// Quasigroup, sport scheduling or magic square instance of `size`.
/// Quasigroups get the last-column symmetry breaking.
pub fn build_benchmark(kind: BenchmarkKind, size: u32, model: ModelSpec) -> Result<Problem> {
    match kind {
        BenchmarkKind::QG3 | BenchmarkKind::QG4 => quasigroup(kind == BenchmarkKind::QG4, size, model, true),
        BenchmarkKind::Sport => sport(size, model),
        BenchmarkKind::Magic => magic(size, model),
    }
}

fn perm_tag(model: ModelSpec, what: &'static str) -> Result<PermTag> {
    match model {
        ModelSpec::Permutation(t) => Ok(t),
        _ => Err(Error::WrongModelKind { tag: model.symbol().into(), context: what }),
    }
}

/// Idempotent quasigroup of order m; cell (a, b) is primal (a-1)*m + b.
/// QG3: (a*b)*(b*a) = a, QG4: (b*a)*(a*b) = a. Symmetry breaking posts
/// a*m >= a-1 on the last column.
pub fn quasigroup(qg4: bool, m: u32, model: ModelSpec, symmetry_breaking: bool) -> Result<Problem> {
    if !(2..=9).contains(&m) {
        return Err(Error::InvalidArgument(format!("quasigroup order must be in 2..=9, got {m}")));
    }
    let tag = perm_tag(model, "quasigroups")?;
    let mut p = Problem::new(m * m, m);
    let cell = |a: u32, b: u32| VarRef::primal((a - 1) * m + b);
    let values: Vec<u32> = (1..=m).collect();
    for a in 1..=m {
        *p.domain_mut(cell(a, a)) = Domain::singleton(a);
    }
    if symmetry_breaking {
        for a in 3..=m {
            p.post(Constraint::UnaryForbid(cell(a, m), (1..a - 1).collect()));
        }
    }
    for a in 1..=m {
        let row: Vec<VarRef> = (1..=m).map(|b| cell(a, b)).collect();
        p.post_permutation(&row, &values, tag);
    }
    for b in 1..=m {
        let col: Vec<VarRef> = (1..=m).map(|a| cell(a, b)).collect();
        p.post_permutation(&col, &values, tag);
    }
    let cells: Vec<VarRef> = (1..=m * m).map(VarRef::primal).collect();
    for a in 1..=m {
        for b in 1..=m {
            if a == b {
                continue;
            }
            let (row, col) = if qg4 { (cell(b, a), cell(a, b)) } else { (cell(a, b), cell(b, a)) };
            p.post(Constraint::Element { row, col, cells: cells.clone(), value: a });
        }
    }
    Ok(p)
}

/// Teams of game `g` (1-based) in the order (1,2), (1,3), ..., (n-1,n).
pub fn sport_game(n: u32, g: u32) -> (u32, u32) {
    let mut k = 0;
    for i in 1..=n {
        for j in i + 1..=n {
            k += 1;
            if k == g {
                return (i, j);
            }
        }
    }
    panic!("game {g} out of range for {n} teams");
}

/// Weeks and periods for `n` teams.
pub fn sport_shape(n: u32) -> (u32, u32) {
    if n % 2 == 0 {
        (n - 1, n / 2)
    } else {
        (n, (n - 1) / 2)
    }
}

/// Round-robin schedule: slot (week w, period q) is primal
/// (w-1)*periods + q and takes a game. Even n uses game ids 1..=G as a
/// permutation; odd n codes game (i, j) as (i-1)*n + j and takes an
/// injection into 1..=n(n-1).
fn sport(n: u32, model: ModelSpec) -> Result<Problem> {
    if !(4..=12).contains(&n) {
        return Err(Error::InvalidArgument(format!("sport needs 4..=12 teams, got {n}")));
    }
    let (weeks, periods) = sport_shape(n);
    let slots = weeks * periods;
    let games = n * (n - 1) / 2;
    let even = n % 2 == 0;
    let pairs: Vec<(u32, u32)> = (1..=games).map(|g| sport_game(n, g)).collect();
    let code = |g: usize| if even { g as u32 + 1 } else { (pairs[g].0 - 1) * n + pairs[g].1 };
    let scope: Vec<VarRef> = (1..=slots).map(VarRef::primal).collect();
    let mut p;
    match (even, model) {
        (true, ModelSpec::Permutation(tag)) => {
            p = Problem::new(slots, games);
            let values: Vec<u32> = (1..=games).collect();
            p.post_permutation(&scope, &values, tag);
        }
        (false, ModelSpec::Injection(tag)) => {
            let m = n * (n - 1);
            p = Problem::new(slots, m);
            let values: Vec<u32> = (1..=m).collect();
            let real: Domain = (0..games as usize).map(code).collect();
            for d in p.primal.iter_mut() {
                *d = real;
            }
            p.post_injection(&scope, &values, tag);
        }
        _ => {
            let ctx = if even { "sport with an even team count" } else { "sport with an odd team count" };
            return Err(Error::WrongModelKind { tag: model.symbol().into(), context: ctx });
        }
    }
    let slot = |w: u32, q: u32| VarRef::primal((w - 1) * periods + q);
    // games sharing a team cannot share a week
    let mut disjoint = Vec::new();
    for g in 0..games as usize {
        for h in 0..games as usize {
            let (a, b) = (pairs[g], pairs[h]);
            if a.0 != b.0 && a.0 != b.1 && a.1 != b.0 && a.1 != b.1 {
                disjoint.push((code(g), code(h)));
            }
        }
    }
    for w in 1..=weeks {
        for q in 1..=periods {
            for r in q + 1..=periods {
                p.post(Constraint::BinaryTable { a: slot(w, q), b: slot(w, r), allowed: disjoint.clone() });
            }
        }
    }
    for q in 1..=periods {
        let vars: Vec<VarRef> = (1..=weeks).map(|w| slot(w, q)).collect();
        for t in 1..=n {
            let values: Vec<u32> =
                (0..games as usize).filter(|&g| pairs[g].0 == t || pairs[g].1 == t).map(code).collect();
            p.post(Constraint::AtMost { vars: vars.clone(), values, limit: 2 });
        }
    }
    Ok(p)
}

/// Order-n magic square, cell (r, c) is primal (r-1)*n + c.
fn magic(n: u32, model: ModelSpec) -> Result<Problem> {
    if !(2..=6).contains(&n) {
        return Err(Error::InvalidArgument(format!("magic square order must be in 2..=6, got {n}")));
    }
    let tag = perm_tag(model, "magic squares")?;
    let nn = n * n;
    let mut p = Problem::new(nn, nn);
    let cell = |r: u32, c: u32| VarRef::primal((r - 1) * n + c);
    let scope: Vec<VarRef> = (1..=nn).map(VarRef::primal).collect();
    let values: Vec<u32> = (1..=nn).collect();
    p.post_permutation(&scope, &values, tag);
    let total = magic_total(n) as i32;
    let mut lines: Vec<Vec<VarRef>> = Vec::new();
    for r in 1..=n {
        lines.push((1..=n).map(|c| cell(r, c)).collect());
    }
    for c in 1..=n {
        lines.push((1..=n).map(|r| cell(r, c)).collect());
    }
    lines.push((1..=n).map(|i| cell(i, i)).collect());
    lines.push((1..=n).map(|i| cell(i, n + 1 - i)).collect());
    for l in lines {
        p.post(Constraint::Sum { terms: l.into_iter().map(|v| (1, v)).collect(), total });
    }
    Ok(p)
}

pub fn magic_total(n: u32) -> u32 {
    n * (n * n + 1) / 2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InstanceKind {
    Langford { n: u32, m: u32 },
    QG3(u32),
    QG4(u32),
    Golomb { marks: u32, length: u32 },
    Sport(u32),
    Magic(u32),
}

impl InstanceKind {
    pub fn build(self, model: ModelSpec) -> Result<Problem> {
        match self {
            // benchmark runs keep both mirror images
            InstanceKind::Langford { n, m } => {
                langford_with(n, m, model, LangfordOptions { symmetry_breaking: false, ..Default::default() })
            }
            InstanceKind::QG3(s) => build_benchmark(BenchmarkKind::QG3, s, model),
            InstanceKind::QG4(s) => build_benchmark(BenchmarkKind::QG4, s, model),
            InstanceKind::Golomb { marks, length } => golomb(marks, length, model.into()),
            InstanceKind::Sport(s) => build_benchmark(BenchmarkKind::Sport, s, model),
            InstanceKind::Magic(s) => build_benchmark(BenchmarkKind::Magic, s, model),
        }
    }

    /// Whether `model` fits this instance (injection tags only for Golomb
    /// and odd sport, permutation tags otherwise).
    pub fn accepts(self, model: ModelSpec) -> bool {
        match (self, model) {
            (InstanceKind::Golomb { .. }, _) => true,
            (InstanceKind::Sport(n), ModelSpec::Injection(_)) => n % 2 == 1,
            (InstanceKind::Sport(n), ModelSpec::Permutation(_)) => n % 2 == 0,
            (_, m) => matches!(m, ModelSpec::Permutation(_)),
        }
    }
}

impl fmt::Display for InstanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InstanceKind::Langford { n, m } => write!(f, "langford:{n},{m}"),
            InstanceKind::QG3(s) => write!(f, "qg3:{s}"),
            InstanceKind::QG4(s) => write!(f, "qg4:{s}"),
            InstanceKind::Golomb { marks, length } => write!(f, "golomb:{marks},{length}"),
            InstanceKind::Sport(s) => write!(f, "sport:{s}"),
            InstanceKind::Magic(s) => write!(f, "magic:{s}"),
        }
    }
}

impl FromStr for InstanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("bad instance `{s}`"));
        let (name, args) = s.trim().split_once(':').ok_or_else(bad)?;
        let nums: Vec<u32> = args.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?;
        match (name.to_ascii_lowercase().as_str(), nums.as_slice()) {
            ("langford", &[n, m]) => Ok(InstanceKind::Langford { n, m }),
            ("qg3", &[s]) => Ok(InstanceKind::QG3(s)),
            ("qg4", &[s]) => Ok(InstanceKind::QG4(s)),
            ("golomb", &[marks, length]) => Ok(InstanceKind::Golomb { marks, length }),
            ("sport", &[s]) => Ok(InstanceKind::Sport(s)),
            ("magic", &[s]) => Ok(InstanceKind::Magic(s)),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Instance {
    pub kind: InstanceKind,
    pub model: ModelSpec,
}

impl Instance {
    pub fn new(kind: InstanceKind, model: ModelSpec) -> Self {
        Instance { kind, model }
    }

    pub fn build(&self) -> Result<Problem> {
        self.kind.build(self.model)
    }
}

/// Families posted on the primal block by a permutation tag, for callers
/// that want the raw decomposition.
pub fn primal_family(tag: PermTag) -> Family {
    tag.parts().0
}
