use crate::domain::Domain;
use crate::model::Problem;

/// Mutable domains with a restoration trail.
///
/// Variables are addressed by their flat index (primal, then dual, then
/// auxiliary), as produced by [`Problem::index_of`].
#[derive(Clone, Debug)]
pub struct DomainStore {
    doms: Vec<Domain>,
    revisions: Vec<u64>,
    trail: Vec<(u32, Domain)>,
    marks: Vec<usize>,
}

impl DomainStore {
    pub fn new(doms: Vec<Domain>) -> Self {
        let revisions = vec![0; doms.len()];
        DomainStore { doms, revisions, trail: Vec::new(), marks: Vec::new() }
    }

    pub fn from_problem(p: &Problem) -> Self {
        DomainStore::new(p.flat_domains())
    }

    pub fn len(&self) -> usize {
        self.doms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.doms.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> Domain {
        self.doms[i]
    }

    pub fn domains(&self) -> &[Domain] {
        &self.doms
    }

    pub fn revision(&self, i: usize) -> u64 {
        self.revisions[i]
    }

    /// Replaces the domain of `i`. Domains only shrink; the old value is
    /// trailed when a checkpoint is open.
    #[inline]
    pub fn set(&mut self, i: usize, d: Domain) {
        debug_assert!(d.is_subset(self.doms[i]), "domain of var {i} must only shrink");
        if d == self.doms[i] {
            return;
        }
        if !self.marks.is_empty() {
            self.trail.push((i as u32, self.doms[i]));
        }
        self.doms[i] = d;
        self.revisions[i] += 1;
    }

    pub fn checkpoint(&mut self) {
        self.marks.push(self.trail.len());
    }

    /// Undoes every change since the most recent checkpoint.
    pub fn restore(&mut self) {
        let mark = self.marks.pop().expect("restore without checkpoint");
        while self.trail.len() > mark {
            let (i, d) = self.trail.pop().unwrap();
            self.doms[i as usize] = d;
            self.revisions[i as usize] += 1;
        }
    }

    pub fn depth(&self) -> usize {
        self.marks.len()
    }

    pub fn all_singletons(&self) -> bool {
        self.doms.iter().all(|d| d.is_singleton())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn restore_is_exact() {
        let init = vec![Domain::range(1, 4); 3];
        let mut s = DomainStore::new(init.clone());
        s.checkpoint();
        s.set(0, Domain::singleton(2));
        s.checkpoint();
        s.set(0, Domain::EMPTY);
        s.set(2, Domain::range(1, 2));
        s.restore();
        assert_eq!(s.get(0), Domain::singleton(2));
        assert_eq!(s.get(2), Domain::range(1, 4));
        s.restore();
        assert_eq!(s.domains(), &init[..]);
        assert!(s.revision(0) > 0);
    }
}
