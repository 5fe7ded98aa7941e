//! Propagators for the constraint kinds without a dedicated event rule.
//!
//! Each `run` reads the store and pushes narrowed domains into `out`. A run
//! leaves its own constraint at a local fixpoint.

use super::alldiff::AllDiffFilter;
use super::store::DomainStore;
use crate::domain::Domain;

#[derive(Clone, Debug)]
pub enum Prop {
    AllDiff {
        vars: Vec<u32>,
        filter: AllDiffFilter,
    },
    Offset {
        a: u32,
        b: u32,
        k: i32,
    },
    Less {
        a: u32,
        b: u32,
    },
    /// `sup_a[v]` is the set of values of `b` compatible with `a = v`.
    Table {
        a: u32,
        b: u32,
        sup_a: Vec<Domain>,
        sup_b: Vec<Domain>,
    },
    Forbid {
        a: u32,
        values: Domain,
    },
    Sum {
        terms: Vec<(i32, u32)>,
        total: i32,
    },
    Element {
        row: u32,
        col: u32,
        cells: Vec<u32>,
        value: u32,
    },
    AtMost {
        vars: Vec<u32>,
        values: Domain,
        limit: u32,
    },
}

pub struct Wipe;

impl Prop {
    pub fn scope(&self) -> Vec<u32> {
        match self {
            Prop::AllDiff { vars, .. } | Prop::AtMost { vars, .. } => vars.clone(),
            Prop::Offset { a, b, .. } | Prop::Less { a, b } | Prop::Table { a, b, .. } => vec![*a, *b],
            Prop::Forbid { a, .. } => vec![*a],
            Prop::Sum { terms, .. } => terms.iter().map(|t| t.1).collect(),
            Prop::Element { row, col, cells, .. } => {
                let mut s = vec![*row, *col];
                s.extend(cells);
                s
            }
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Prop::AllDiff { .. } => "alldiff",
            Prop::Offset { .. } => "offset",
            Prop::Less { .. } => "less",
            Prop::Table { .. } => "table",
            Prop::Forbid { .. } => "forbid",
            Prop::Sum { .. } => "sum",
            Prop::Element { .. } => "element",
            Prop::AtMost { .. } => "atmost",
        }
    }

    pub fn run(&mut self, s: &DomainStore, out: &mut Vec<(u32, Domain)>) -> Result<(), Wipe> {
        match self {
            Prop::AllDiff { vars, filter } => {
                let doms: Vec<Domain> = vars.iter().map(|&v| s.get(v as usize)).collect();
                let new = filter.filter(&doms).ok_or(Wipe)?;
                for ((&v, old), nd) in vars.iter().zip(&doms).zip(new) {
                    if nd != *old {
                        out.push((v, nd));
                    }
                }
            }
            Prop::Offset { a, b, k } => {
                let (da, db) = (s.get(*a as usize), s.get(*b as usize));
                let nb = db.intersect(da.shift(*k));
                let na = da.intersect(nb.shift(-*k));
                push2(out, (*a, da, na), (*b, db, nb))?;
            }
            Prop::Less { a, b } => {
                let (da, db) = (s.get(*a as usize), s.get(*b as usize));
                let na = match db.max() {
                    Some(m) => da.intersect(Domain::below(m)),
                    None => Domain::EMPTY,
                };
                let nb = match na.min() {
                    Some(m) => db.intersect(Domain::above(m)),
                    None => Domain::EMPTY,
                };
                push2(out, (*a, da, na), (*b, db, nb))?;
            }
            Prop::Table { a, b, sup_a, sup_b } => {
                let (da, db) = (s.get(*a as usize), s.get(*b as usize));
                let na: Domain =
                    da.iter().filter(|&v| sup_a.get(v as usize).is_some_and(|t| t.intersects(db))).collect();
                let nb: Domain =
                    db.iter().filter(|&v| sup_b.get(v as usize).is_some_and(|t| t.intersects(na))).collect();
                push2(out, (*a, da, na), (*b, db, nb))?;
            }
            Prop::Forbid { a, values } => {
                let da = s.get(*a as usize);
                let na = da.minus(*values);
                if na.is_empty() {
                    return Err(Wipe);
                }
                if na != da {
                    out.push((*a, na));
                }
            }
            Prop::Sum { terms, total } => {
                let mut doms: Vec<Domain> = terms.iter().map(|t| s.get(t.1 as usize)).collect();
                let unit = terms.iter().all(|t| t.0.abs() == 1);
                if unit && terms.len() <= 3 {
                    sum_gac_unit(terms, *total, &mut doms)?;
                } else {
                    sum_bounds(terms, *total, &mut doms)?;
                }
                for (t, nd) in terms.iter().zip(doms) {
                    if nd != s.get(t.1 as usize) {
                        out.push((t.1, nd));
                    }
                }
            }
            Prop::Element { row, col, cells, value } => {
                let k = (cells.len() as f64).sqrt().round() as u32;
                let (dr, dc) = (s.get(*row as usize), s.get(*col as usize));
                let ok = |r: u32, c: u32| {
                    r >= 1
                        && c >= 1
                        && r <= k
                        && c <= k
                        && s.get(cells[((r - 1) * k + c - 1) as usize] as usize).contains(*value)
                };
                let nr: Domain = dr.iter().filter(|&r| dc.iter().any(|c| ok(r, c))).collect();
                let nc: Domain = dc.iter().filter(|&c| nr.iter().any(|r| ok(r, c))).collect();
                push2(out, (*row, dr, nr), (*col, dc, nc))?;
                if let (Some(r), Some(c)) = (nr.value(), nc.value()) {
                    let cell = cells[((r - 1) * k + c - 1) as usize];
                    let dcell = s.get(cell as usize);
                    if dcell != Domain::singleton(*value) {
                        out.push((cell, Domain::singleton(*value)));
                    }
                }
            }
            Prop::AtMost { vars, values, limit } => {
                let forced = vars.iter().filter(|&&v| s.get(v as usize).is_subset(*values)).count() as u32;
                if forced > *limit {
                    return Err(Wipe);
                }
                if forced == *limit {
                    for &v in vars.iter() {
                        let d = s.get(v as usize);
                        if !d.is_subset(*values) && d.intersects(*values) {
                            out.push((v, d.minus(*values)));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn push2(out: &mut Vec<(u32, Domain)>, a: (u32, Domain, Domain), b: (u32, Domain, Domain)) -> Result<(), Wipe> {
    if a.2.is_empty() || b.2.is_empty() {
        return Err(Wipe);
    }
    for (v, old, new) in [a, b] {
        if new != old {
            out.push((v, new));
        }
    }
    Ok(())
}

/// `{c * x + off : x in d}` for `c` in {1, -1}.
fn affine(d: Domain, c: i32, off: i32) -> Domain {
    if c == 1 {
        d.shift(off)
    } else {
        // {127 - x} then shift so that the result is {off - x}
        Domain::from_bits(d.bits().reverse_bits()).shift(off - 127)
    }
}

/// GAC on `sum(c_i x_i) = total` with unit coefficients and arity <= 3.
fn sum_gac_unit(terms: &[(i32, u32)], total: i32, doms: &mut [Domain]) -> Result<(), Wipe> {
    let n = terms.len();
    loop {
        let mut changed = false;
        for i in 0..n {
            // c_i x_i = total - sum_{j != i} c_j x_j
            let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            let reachable = match others.len() {
                0 => {
                    let v = total * terms[i].0;
                    if (0..=127).contains(&v) {
                        Domain::singleton(v as u32)
                    } else {
                        Domain::EMPTY
                    }
                }
                1 => {
                    let j = others[0];
                    // x_i = c_i * (total - c_j x_j)
                    let ci = terms[i].0;
                    affine(doms[j], -terms[j].0 * ci, total * ci)
                }
                _ => {
                    let (j, l) = (others[0], others[1]);
                    let ci = terms[i].0;
                    let mut acc = Domain::EMPTY;
                    for a in doms[j] {
                        let off = (total - terms[j].0 * a as i32) * ci;
                        acc = acc.union(affine(doms[l], -terms[l].0 * ci, off));
                    }
                    acc
                }
            };
            let nd = doms[i].intersect(reachable);
            if nd.is_empty() {
                return Err(Wipe);
            }
            if nd != doms[i] {
                doms[i] = nd;
                changed = true;
            }
        }
        if !changed {
            return Ok(());
        }
    }
}

fn sum_bounds(terms: &[(i32, u32)], total: i32, doms: &mut [Domain]) -> Result<(), Wipe> {
    let bound = |c: i32, d: Domain| -> (i64, i64) {
        let (lo, hi) = (d.min().unwrap() as i64, d.max().unwrap() as i64);
        let c = c as i64;
        if c >= 0 {
            (c * lo, c * hi)
        } else {
            (c * hi, c * lo)
        }
    };
    loop {
        let mut changed = false;
        let bs: Vec<(i64, i64)> = terms.iter().zip(doms.iter()).map(|(t, d)| bound(t.0, *d)).collect();
        let slo: i64 = bs.iter().map(|b| b.0).sum();
        let shi: i64 = bs.iter().map(|b| b.1).sum();
        let total = total as i64;
        if total < slo || total > shi {
            return Err(Wipe);
        }
        for (i, t) in terms.iter().enumerate() {
            let c = t.0 as i64;
            if c == 0 {
                continue;
            }
            // c x in [lo, hi]
            let lo = total - (shi - bs[i].1);
            let hi = total - (slo - bs[i].0);
            let (xlo, xhi) =
                if c > 0 { (div_ceil(lo, c), div_floor(hi, c)) } else { (div_ceil(hi, c), div_floor(lo, c)) };
            let xlo = xlo.max(0);
            if xhi < xlo {
                return Err(Wipe);
            }
            let xhi = xhi.min(127) as u32;
            let nd = doms[i].intersect(Domain::range(xlo as u32, xhi));
            if nd.is_empty() {
                return Err(Wipe);
            }
            if nd != doms[i] {
                doms[i] = nd;
                changed = true;
            }
        }
        if !changed {
            return Ok(());
        }
    }
}

fn div_floor(a: i64, b: i64) -> i64 {
    a.div_euclid(b) - if b < 0 && a.rem_euclid(b) != 0 { 1 } else { 0 }
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -div_floor(-a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_ceil_division() {
        assert_eq!(div_floor(7, 2), 3);
        assert_eq!(div_floor(-7, 2), -4);
        assert_eq!(div_floor(7, -2), -4);
        assert_eq!(div_floor(-7, -2), 3);
        assert_eq!(div_ceil(7, 2), 4);
        assert_eq!(div_ceil(-7, 2), -3);
        assert_eq!(div_ceil(7, -2), -3);
    }

    #[test]
    fn affine_negation() {
        let d = Domain::from_values([1, 3]);
        assert_eq!(affine(d, -1, 10), Domain::from_values([7, 9]));
        assert_eq!(affine(d, 1, -1), Domain::from_values([0, 2]));
    }

    #[test]
    fn unit_sum_is_gac() {
        // d + t1 - t2 = 0 with t1 in {0}, t2 in {3, 5}, d in 1..10
        let terms = [(1, 0), (1, 1), (-1, 2)];
        let mut doms = [Domain::range(1, 10), Domain::singleton(0), Domain::from_values([3, 5])];
        sum_gac_unit(&terms, 0, &mut doms).ok().unwrap();
        assert_eq!(doms[0], Domain::from_values([3, 5]));
    }

    #[test]
    fn bounds_sum() {
        let terms = [(1, 0), (1, 1), (1, 2)];
        let mut doms = [Domain::range(1, 9), Domain::singleton(9), Domain::singleton(8)];
        assert!(sum_bounds(&terms, 15, &mut doms).is_err());
        let mut doms = [Domain::range(1, 9), Domain::singleton(5), Domain::range(1, 3)];
        sum_bounds(&terms, 15, &mut doms).ok().unwrap();
        assert_eq!(doms[0], Domain::range(7, 9));
    }
}
