use std::collections::BTreeSet;

pub fn permutations(n: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..n as usize {
            let mut q = p.clone();
            q.insert(k, n);
            out.push(q);
        }
    }
    out
}

/// Row-major QG3/QG4 tables of order m with q(a,a)=a, by row permutations.
/// `lean` keeps only tables with q(a,m) >= a-1.
pub fn quasigroup_oracle(m: u32, qg4: bool, lean: bool) -> BTreeSet<Vec<u32>> {
    let rows: Vec<Vec<Vec<u32>>> =
        (1..=m).map(|a| permutations(m).into_iter().filter(|r| r[a as usize - 1] == a).collect()).collect();
    let mut out = BTreeSet::new();
    let mut pick = vec![0usize; m as usize];
    loop {
        let table: Vec<u32> = (0..m as usize).flat_map(|a| rows[a][pick[a]].clone()).collect();
        let q = |a: u32, b: u32| table[((a - 1) * m + b - 1) as usize];
        let latin = (1..=m).all(|b| (1..=m).map(|a| q(a, b)).collect::<BTreeSet<_>>().len() == m as usize);
        let identity =
            (1..=m).all(|a| (1..=m).all(|b| if qg4 { q(q(b, a), q(a, b)) == a } else { q(q(a, b), q(b, a)) == a }));
        let last = !lean || (1..=m).all(|a| q(a, m) + 1 >= a);
        if latin && identity && last {
            out.insert(table);
        }
        let mut k = 0;
        loop {
            if k == pick.len() {
                return out;
            }
            pick[k] += 1;
            if pick[k] < rows[k].len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
    }
}
