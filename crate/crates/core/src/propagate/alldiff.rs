//! Matching-based GAC filtering for all-different.
//!
//! A maximum matching between variables and values is found (warm-started
//! from the previous call), then an edge survives iff it is matched, lies on
//! an even alternating cycle (same strongly connected component) or on an
//! even alternating path from a free value.

use crate::domain::Domain;

const NONE: u32 = u32::MAX;
const NVALS: usize = 128;

#[derive(Clone, Debug, Default)]
pub struct AllDiffFilter {
    /// Matched value per scope position, kept between calls as a warm start.
    mate: Vec<u32>,
    var_of: Vec<u32>,
    // Tarjan scratch
    index: Vec<u32>,
    low: Vec<u32>,
    comp: Vec<u32>,
    on_stack: Vec<bool>,
    stack: Vec<u32>,
    counter: u32,
    ncomp: u32,
}

impl AllDiffFilter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the GAC-filtered domains, or `None` if no matching covers
    /// every variable.
    pub fn filter(&mut self, doms: &[Domain]) -> Option<Vec<Domain>> {
        let k = doms.len();
        if !self.maximum_matching(doms) {
            return None;
        }

        let union = doms.iter().fold(Domain::EMPTY, |u, d| u.union(*d));
        let matched: Domain = self.mate.iter().copied().collect();
        let free = union.minus(matched);

        // Values reachable from a free value along alternating edges.
        let mut reach = free;
        let mut frontier = free;
        while !frontier.is_empty() {
            let mut next = Domain::EMPTY;
            for (i, d) in doms.iter().enumerate() {
                let m = self.mate[i];
                if d.intersects(frontier) && !reach.contains(m) {
                    next.insert(m);
                }
            }
            reach = reach.union(next);
            frontier = next;
        }

        let nodes = k + NVALS;
        self.index.clear();
        self.index.resize(nodes, NONE);
        self.low.clear();
        self.low.resize(nodes, 0);
        self.comp.clear();
        self.comp.resize(nodes, NONE);
        self.on_stack.clear();
        self.on_stack.resize(nodes, false);
        self.stack.clear();
        self.counter = 0;
        self.ncomp = 0;
        for i in 0..k {
            if self.index[i] == NONE {
                self.strongconnect(i as u32, doms);
            }
        }

        let out = doms
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let ci = self.comp[i];
                d.iter()
                    .filter(|&v| v == self.mate[i] || reach.contains(v) || self.comp[k + v as usize] == ci)
                    .collect()
            })
            .collect();
        Some(out)
    }

    fn maximum_matching(&mut self, doms: &[Domain]) -> bool {
        let k = doms.len();
        self.mate.resize(k, NONE);
        self.var_of.clear();
        self.var_of.resize(NVALS, NONE);
        for i in 0..k {
            let m = self.mate[i];
            if m != NONE && doms[i].contains(m) && self.var_of[m as usize] == NONE {
                self.var_of[m as usize] = i as u32;
            } else {
                self.mate[i] = NONE;
            }
        }
        for i in 0..k {
            if self.mate[i] == NONE {
                let mut visited = 0u128;
                if !self.augment(i, doms, &mut visited) {
                    return false;
                }
            }
        }
        true
    }

    fn augment(&mut self, i: usize, doms: &[Domain], visited: &mut u128) -> bool {
        let cand = Domain::from_bits(doms[i].bits() & !*visited);
        for v in cand {
            if self.var_of[v as usize] == NONE {
                self.mate[i] = v;
                self.var_of[v as usize] = i as u32;
                return true;
            }
        }
        for v in cand {
            if *visited & (1u128 << v) != 0 {
                continue;
            }
            *visited |= 1u128 << v;
            let j = self.var_of[v as usize] as usize;
            if self.augment(j, doms, visited) {
                self.mate[i] = v;
                self.var_of[v as usize] = i as u32;
                return true;
            }
        }
        false
    }

    // Matched edges run var -> value, the others value -> var.
    fn strongconnect(&mut self, node: u32, doms: &[Domain]) {
        let k = doms.len() as u32;
        let n = node as usize;
        self.index[n] = self.counter;
        self.low[n] = self.counter;
        self.counter += 1;
        self.stack.push(node);
        self.on_stack[n] = true;

        let mut succ: Vec<u32> = Vec::new();
        if node < k {
            let m = self.mate[n];
            succ.push(k + m);
        } else {
            let v = node - k;
            for (i, d) in doms.iter().enumerate() {
                if d.contains(v) && self.mate[i] != v {
                    succ.push(i as u32);
                }
            }
        }
        for w in succ {
            let wi = w as usize;
            if self.index[wi] == NONE {
                self.strongconnect(w, doms);
                self.low[n] = self.low[n].min(self.low[wi]);
            } else if self.on_stack[wi] {
                self.low[n] = self.low[n].min(self.index[wi]);
            }
        }

        if self.low[n] == self.index[n] {
            loop {
                let w = self.stack.pop().unwrap();
                self.on_stack[w as usize] = false;
                self.comp[w as usize] = self.ncomp;
                if w == node {
                    break;
                }
            }
            self.ncomp += 1;
        }
    }
}

/// One-shot GAC filtering of an all-different over `doms`.
pub fn gac_alldiff(doms: &[Domain]) -> Option<Vec<Domain>> {
    AllDiffFilter::new().filter(doms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(v: &[u32]) -> Domain {
        Domain::from_values(v.iter().copied())
    }

    #[test]
    fn pigeonhole_fails() {
        assert!(gac_alldiff(&[d(&[1, 2]), d(&[1, 2]), d(&[1, 2]), d(&[3, 4, 5]), d(&[3, 4, 5])]).is_none());
    }

    #[test]
    fn hall_interval_prunes() {
        let out = gac_alldiff(&[d(&[1, 2]), d(&[1, 2]), d(&[1, 2, 3])]).unwrap();
        assert_eq!(out, vec![d(&[1, 2]), d(&[1, 2]), d(&[3])]);
    }

    #[test]
    fn free_values_keep_edges() {
        let doms = [d(&[1, 2, 3]), d(&[1, 2, 3])];
        assert_eq!(gac_alldiff(&doms).unwrap(), doms.to_vec());
    }

    #[test]
    fn warm_start_survives_shrinking() {
        let mut f = AllDiffFilter::new();
        let a = [d(&[1, 2, 3]), d(&[1, 2, 3]), d(&[1, 2, 3])];
        assert_eq!(f.filter(&a).unwrap(), a.to_vec());
        let b = [d(&[1]), d(&[1, 2, 3]), d(&[1, 2])];
        assert_eq!(f.filter(&b).unwrap(), vec![d(&[1]), d(&[3]), d(&[2])]);
    }
}
