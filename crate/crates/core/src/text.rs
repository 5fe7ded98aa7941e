//! Line-oriented text form of a [`Problem`].
//!
//! ```text
//! vars 3 3
//! dom x1 1 2 3
//! dom d1 1 2 3
//! ctr channel x1 d1 1 1
//! ```

use std::fmt::Write as _;

use crate::domain::{Domain, MAX_VALUE};
use crate::error::{Error, Result};
use crate::model::{Block, Constraint, Problem, VarRef};

pub fn to_text(p: &Problem) -> String {
    let mut s = String::new();
    writeln!(s, "vars {} {}", p.n, p.m).unwrap();
    for v in p.vars() {
        write!(s, "dom {v}").unwrap();
        for x in p.domain(v) {
            write!(s, " {x}").unwrap();
        }
        s.push('\n');
    }
    for c in &p.constraints {
        s.push_str("ctr ");
        s.push_str(&constraint_text(c));
        s.push('\n');
    }
    s
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn constraint_text(c: &Constraint) -> String {
    match c {
        Constraint::NotEquals(a, b) => format!("neq {a} {b}"),
        Constraint::Channel { primal, dual, primal_value, dual_value } => {
            format!("channel {primal} {dual} {primal_value} {dual_value}")
        }
        Constraint::ChannelImplies { primal, dual, primal_value, dual_value } => {
            format!("implies {primal} {dual} {primal_value} {dual_value}")
        }
        Constraint::AllDifferent(vars) => format!("alldiff {}", join(vars)),
        Constraint::Offset(a, b, k) => format!("offset {a} {b} {k}"),
        Constraint::Less(a, b) => format!("less {a} {b}"),
        Constraint::DualSepLink { first, first_value, second, second_value } => {
            format!("seplink {first} {first_value} {second} {second_value}")
        }
        Constraint::Sum { terms, total } => {
            format!("sum {total} {}", join(terms.iter().map(|(c, v)| format!("{c}*{v}"))))
        }
        Constraint::BinaryTable { a, b, allowed } => {
            format!("table {a} {b} {}", join(allowed.iter().map(|(x, y)| format!("{x}:{y}"))))
        }
        Constraint::UnaryForbid(a, values) => format!("forbid {a} {}", join(values)),
        Constraint::Element { row, col, cells, value } => {
            format!("element {row} {col} {value} {}", join(cells))
        }
        Constraint::AtMost { vars, values, limit } => {
            format!("atmost {limit} {} {} {}", vars.len(), join(vars), join(values))
        }
    }
    .trim_end()
    .to_string()
}

pub fn from_text(text: &str) -> Result<Problem> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty input".into() })?;
    let h: Vec<&str> = header.split_whitespace().collect();
    let perr = |line: usize, msg: String| Error::Parse { line: line + 1, msg };
    if h.len() != 3 || h[0] != "vars" {
        return Err(perr(hline, "expected `vars <n> <m>`".into()));
    }
    let n: u32 = h[1].parse().map_err(|_| perr(hline, "bad n".into()))?;
    let m: u32 = h[2].parse().map_err(|_| perr(hline, "bad m".into()))?;
    let mut p = Problem { n, m, primal: Vec::new(), dual: Vec::new(), aux: Vec::new(), constraints: Vec::new() };

    for (ln, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "dom" => {
                let v: VarRef = toks.get(1).ok_or_else(|| perr(ln, "missing variable".into()))?.parse()?;
                let mut d = Domain::EMPTY;
                for t in &toks[2..] {
                    let x = num(t, ln)?;
                    if x > MAX_VALUE {
                        return Err(Error::ValueOutOfRange(x));
                    }
                    d.insert(x);
                }
                let block = match v.block {
                    Block::Primal => &mut p.primal,
                    Block::Dual => &mut p.dual,
                    Block::Aux => &mut p.aux,
                };
                if v.index as usize != block.len() + 1 {
                    return Err(perr(ln, format!("domain for {v} out of order")));
                }
                block.push(d);
            }
            "ctr" => {
                let c = parse_constraint(&toks[1..], ln)?;
                if let Some(bad) = c.scope().into_iter().find(|v| !p.contains(*v)) {
                    return Err(perr(ln, format!("unknown variable {bad}")));
                }
                p.constraints.push(c);
            }
            other => return Err(perr(ln, format!("unknown directive `{other}`"))),
        }
    }
    Ok(p)
}

fn num<T: std::str::FromStr>(t: &str, ln: usize) -> Result<T> {
    t.parse().map_err(|_| Error::Parse { line: ln + 1, msg: format!("bad number `{t}`") })
}

fn var(t: Option<&&str>, ln: usize) -> Result<VarRef> {
    t.ok_or(Error::Parse { line: ln + 1, msg: "missing variable".into() })?.parse()
}

fn vars(ts: &[&str]) -> Result<Vec<VarRef>> {
    ts.iter().map(|t| t.parse()).collect()
}

pub(crate) fn parse_constraint(t: &[&str], ln: usize) -> Result<Constraint> {
    let perr = |msg: &str| Error::Parse { line: ln + 1, msg: msg.to_string() };
    let kind = *t.first().ok_or_else(|| perr("missing constraint kind"))?;
    let arg = |i: usize| t.get(i).copied().ok_or_else(|| perr("missing argument"));
    Ok(match kind {
        "neq" => Constraint::NotEquals(var(t.get(1), ln)?, var(t.get(2), ln)?),
        "channel" | "implies" => {
            let (primal, dual) = (var(t.get(1), ln)?, var(t.get(2), ln)?);
            let (primal_value, dual_value) = (num(arg(3)?, ln)?, num(arg(4)?, ln)?);
            if kind == "channel" {
                Constraint::Channel { primal, dual, primal_value, dual_value }
            } else {
                Constraint::ChannelImplies { primal, dual, primal_value, dual_value }
            }
        }
        "alldiff" => Constraint::AllDifferent(vars(&t[1..])?),
        "offset" => Constraint::Offset(var(t.get(1), ln)?, var(t.get(2), ln)?, num(arg(3)?, ln)?),
        "less" => Constraint::Less(var(t.get(1), ln)?, var(t.get(2), ln)?),
        "seplink" => Constraint::DualSepLink {
            first: var(t.get(1), ln)?,
            first_value: num(arg(2)?, ln)?,
            second: var(t.get(3), ln)?,
            second_value: num(arg(4)?, ln)?,
        },
        "sum" => {
            let total = num(arg(1)?, ln)?;
            let terms = t[2..]
                .iter()
                .map(|term| {
                    let (c, v) = term.split_once('*').ok_or_else(|| perr("expected coef*var"))?;
                    Ok((num(c, ln)?, v.parse()?))
                })
                .collect::<Result<Vec<_>>>()?;
            Constraint::Sum { terms, total }
        }
        "table" => {
            let allowed = t[3..]
                .iter()
                .map(|pair| {
                    let (x, y) = pair.split_once(':').ok_or_else(|| perr("expected a:b"))?;
                    Ok((num(x, ln)?, num(y, ln)?))
                })
                .collect::<Result<Vec<_>>>()?;
            Constraint::BinaryTable { a: var(t.get(1), ln)?, b: var(t.get(2), ln)?, allowed }
        }
        "forbid" => {
            let values = t[2..].iter().map(|x| num(x, ln)).collect::<Result<Vec<_>>>()?;
            Constraint::UnaryForbid(var(t.get(1), ln)?, values)
        }
        "element" => Constraint::Element {
            row: var(t.get(1), ln)?,
            col: var(t.get(2), ln)?,
            value: num(arg(3)?, ln)?,
            cells: vars(&t[4..])?,
        },
        "atmost" => {
            let limit = num(arg(1)?, ln)?;
            let k: usize = num(arg(2)?, ln)?;
            if t.len() < 3 + k {
                return Err(perr("atmost scope shorter than declared"));
            }
            let values = t[3 + k..].iter().map(|x| num(x, ln)).collect::<Result<Vec<_>>>()?;
            Constraint::AtMost { vars: vars(&t[3..3 + k])?, values, limit }
        }
        other => return Err(perr(&format!("unknown constraint `{other}`"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_injection_model, build_permutation_model, ModelSpec, PermTag};

    #[test]
    fn round_trip_models() {
        for t in PermTag::ALL {
            let p = build_permutation_model(4, ModelSpec::Permutation(t)).unwrap();
            let s = to_text(&p);
            let q = from_text(&s).unwrap();
            assert_eq!(p, q);
            assert_eq!(s, to_text(&q));
        }
        let p = build_injection_model(3, 5, "c1".parse().unwrap()).unwrap();
        assert_eq!(from_text(&to_text(&p)).unwrap(), p);
    }

    #[test]
    fn round_trip_every_kind() {
        let mut p = Problem::new(2, 3);
        let d = p.add_dual(Domain::range(1, 2));
        let a = p.add_aux(Domain::range(0, 5));
        let (x1, x2) = (VarRef::primal(1), VarRef::primal(2));
        p.post(Constraint::Offset(x1, x2, -1));
        p.post(Constraint::Less(x1, a));
        p.post(Constraint::DualSepLink { first: d, first_value: 1, second: x2, second_value: 3 });
        p.post(Constraint::Sum { terms: vec![(1, x1), (-2, a)], total: -3 });
        p.post(Constraint::BinaryTable { a: x1, b: x2, allowed: vec![(1, 2), (3, 1)] });
        p.post(Constraint::UnaryForbid(x1, vec![2]));
        p.post(Constraint::Element { row: x1, col: x2, cells: vec![x1, x2, d, a], value: 1 });
        p.post(Constraint::AtMost { vars: vec![x1, x2], values: vec![1, 3], limit: 1 });
        *p.domain_mut(x2) = Domain::EMPTY;
        let s = to_text(&p);
        assert_eq!(from_text(&s).unwrap(), p);
        assert!(s.contains("dom x2\n"));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(from_text("").is_err());
        assert!(from_text("vars 1 1\ndom x2 1\n").is_err());
        assert!(from_text("vars 1 1\ndom x1 1\nctr neq x1 x2\n").is_err());
        assert!(from_text("vars 1 1\ndom x1 1\nctr frob x1\n").is_err());
    }
}
