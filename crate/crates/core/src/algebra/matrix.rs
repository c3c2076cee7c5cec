use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::{BinaryHeap, HashMap, HashSet};

/// Sparse matrix with exact integer entries, column-major storage.
#[derive(Debug, Clone, Default)]
pub struct SparseIntMat {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, i64)>>,
}

impl SparseIntMat {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseIntMat {
            rows,
            cols,
            data: vec![Vec::new(); cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Add v at (r, c), accumulating with any existing entry.
    pub fn push(&mut self, r: usize, c: usize, v: i64) {
        debug_assert!(r < self.rows && c < self.cols);
        if v == 0 {
            return;
        }
        let col = &mut self.data[c];
        if let Some(e) = col.iter_mut().find(|(rr, _)| *rr == r) {
            e.1 += v;
            if e.1 == 0 {
                col.retain(|(_, vv)| *vv != 0);
            }
        } else {
            col.push((r, v));
        }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let nr = rows.len();
        let nc = rows.first().map_or(0, |r| r.len());
        let mut m = SparseIntMat::new(nr, nc);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.push(i, j, v);
            }
        }
        m
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|c| c.len()).sum()
    }

    pub fn col(&self, c: usize) -> &[(usize, i64)] {
        &self.data[c]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |&(r, v)| (r, c, v)))
    }

    /// Rank over the prime field F_p (p prime), by sparse Gaussian elimination.
    pub fn rank_mod_p(&self, p: u64) -> usize {
        assert!(p >= 2);
        let inv = |a: u64| -> u64 { mod_pow(a, p - 2, p) };
        // pivot row -> normalized pivot column entries
        let mut pivots: HashMap<usize, Vec<(usize, u64)>> = HashMap::new();
        let mut rank = 0;
        for c in 0..self.cols {
            let mut col: HashMap<usize, u64> = HashMap::new();
            for &(r, v) in &self.data[c] {
                let vm = v.rem_euclid(p as i64) as u64;
                if vm != 0 {
                    *col.entry(r).or_insert(0) += vm;
                }
            }
            col.retain(|_, v| {
                *v %= p;
                *v != 0
            });
            loop {
                let hit = col.keys().find(|r| pivots.contains_key(r)).cloned();
                let Some(r) = hit else { break };
                let a = col[&r];
                for &(rr, vv) in &pivots[&r] {
                    let e = col.entry(rr).or_insert(0);
                    *e = (*e + (p - a % p) * vv % p) % p;
                    if *e == 0 {
                        col.remove(&rr);
                    }
                }
            }
            if let Some((&r, &a)) = col.iter().min_by_key(|(&r, _)| r) {
                let ai = inv(a);
                let norm: Vec<(usize, u64)> =
                    col.iter().map(|(&rr, &vv)| (rr, vv * ai % p)).collect();
                pivots.insert(r, norm);
                rank += 1;
            }
        }
        rank
    }

    /// Exact rank over the rationals.
    pub fn rank_q(&self) -> usize {
        smith_normal_form(self).1
    }
}

fn mod_pow(b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc: u128 = 1;
    let mm = m as u128;
    let mut bb = (b % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * bb % mm;
        }
        bb = bb * bb % mm;
        e >>= 1;
    }
    acc as u64
}

/// Smith normal form: returns the nonzero diagonal divisors d1 | d2 | ... and the rank.
///
/// Strategy: a sparse phase eliminates +-1 pivots chosen by a Markowitz
/// fill-in score (each contributes divisor 1 and exact unimodular row/column
/// operations), then the small residual block is finished by a dense
/// big-integer Smith reduction. Entries in the sparse phase are tracked in
/// i128 with checked arithmetic; on overflow the remaining block falls back
/// to the dense big-integer path immediately.
pub fn smith_normal_form(m: &SparseIntMat) -> (Vec<BigInt>, usize) {
    let mut st = SparseElim::new(m);
    let units = st.eliminate_units();
    let residual = st.residual_dense();
    let mut divisors: Vec<BigInt> = vec![BigInt::from(1); units];
    let tail = dense_snf(residual);
    divisors.extend(tail);
    let rank = divisors.len();
    (divisors, rank)
}

/// Sparse unimodular elimination state shared by SNF.
struct SparseElim {
    cols: HashMap<usize, HashMap<usize, i128>>,
    rows: HashMap<usize, HashSet<usize>>,
    overflow: bool,
}

impl SparseElim {
    fn new(m: &SparseIntMat) -> Self {
        let mut cols: HashMap<usize, HashMap<usize, i128>> = HashMap::new();
        let mut rows: HashMap<usize, HashSet<usize>> = HashMap::new();
        for (r, c, v) in m.entries() {
            cols.entry(c).or_default().insert(r, v as i128);
            rows.entry(r).or_default().insert(c);
        }
        SparseElim {
            cols,
            rows,
            overflow: false,
        }
    }

    fn score(&self, r: usize, c: usize) -> u64 {
        let rn = self.rows.get(&r).map_or(0, |s| s.len());
        let cn = self.cols.get(&c).map_or(0, |s| s.len());
        (rn.saturating_sub(1) as u64) * (cn.saturating_sub(1) as u64)
    }

    /// Eliminate unit (+-1) pivots until none remain; returns how many were consumed.
    fn eliminate_units(&mut self) -> usize {
        use std::cmp::Reverse;
        let mut heap: BinaryHeap<Reverse<(u64, usize, usize)>> = BinaryHeap::new();
        for (&c, col) in &self.cols {
            for (&r, &v) in col {
                if v == 1 || v == -1 {
                    heap.push(Reverse((self.score(r, c), r, c)));
                }
            }
        }
        let mut count = 0;
        while let Some(Reverse((sc, r, c))) = heap.pop() {
            if self.overflow {
                break;
            }
            let Some(&v) = self.cols.get(&c).and_then(|col| col.get(&r)) else {
                continue;
            };
            if v != 1 && v != -1 {
                continue;
            }
            let now = self.score(r, c);
            if now != sc {
                heap.push(Reverse((now, r, c)));
                continue;
            }
            self.cancel_unit(r, c, v, &mut |rr, cc, vv| {
                if vv == 1 || vv == -1 {
                    // score pushed lazily; validated on pop
                    Some((rr, cc))
                } else {
                    None
                }
            }, &mut heap);
            count += 1;
        }
        count
    }

    /// Pivot on (r, c) whose value is +-1; clears row r and column c.
    fn cancel_unit(
        &mut self,
        r: usize,
        c: usize,
        v: i128,
        classify: &mut dyn FnMut(usize, usize, i128) -> Option<(usize, usize)>,
        heap: &mut BinaryHeap<std::cmp::Reverse<(u64, usize, usize)>>,
    ) {
        debug_assert!(v == 1 || v == -1);
        let pivot_col = self.cols.remove(&c).unwrap();
        for (&rr, _) in &pivot_col {
            self.rows.get_mut(&rr).map(|s| s.remove(&c));
        }
        let other_cols: Vec<usize> = self
            .rows
            .remove(&r)
            .map(|s| s.into_iter().collect())
            .unwrap_or_default();
        for j in other_cols {
            if j == c {
                continue;
            }
            let Some(a) = self.cols.get_mut(&j).and_then(|col| col.remove(&r)) else {
                continue;
            };
            self.rows.get_mut(&r).map(|s| s.remove(&j));
            // col_j -= (a / v) * pivot_col ; v is a unit so a / v = a * v
            let factor = a * v;
            for (&rr, &pv) in &pivot_col {
                if rr == r {
                    continue;
                }
                let delta = match factor.checked_mul(pv) {
                    Some(x) => x,
                    None => {
                        self.overflow = true;
                        return;
                    }
                };
                let col = self.cols.entry(j).or_default();
                let e = col.entry(rr).or_insert(0);
                let nv = match e.checked_sub(delta) {
                    Some(x) => x,
                    None => {
                        self.overflow = true;
                        return;
                    }
                };
                *e = nv;
                if *e == 0 {
                    col.remove(&rr);
                    self.rows.get_mut(&rr).map(|s| s.remove(&j));
                } else {
                    self.rows.entry(rr).or_default().insert(j);
                    if let Some((pr, pc)) = classify(rr, j, nv) {
                        heap.push(std::cmp::Reverse((self.score(pr, pc), pr, pc)));
                    }
                }
            }
        }
    }

    /// Materialize the remaining active block as a dense big-integer matrix.
    fn residual_dense(&self) -> Vec<Vec<BigInt>> {
        let mut row_ids: Vec<usize> = self
            .rows
            .iter()
            .filter(|(_, s)| !s.is_empty())
            .map(|(&r, _)| r)
            .collect();
        let mut col_ids: Vec<usize> = self
            .cols
            .iter()
            .filter(|(_, m)| !m.is_empty())
            .map(|(&c, _)| c)
            .collect();
        row_ids.sort_unstable();
        col_ids.sort_unstable();
        let rpos: HashMap<usize, usize> =
            row_ids.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let mut out = vec![vec![BigInt::zero(); col_ids.len()]; row_ids.len()];
        for (j, &c) in col_ids.iter().enumerate() {
            for (&r, &v) in &self.cols[&c] {
                out[rpos[&r]][j] = BigInt::from(v);
            }
        }
        out
    }
}

/// Dense Smith normal form over the integers; returns nonzero divisors (made positive).
fn dense_snf(mut m: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let nr = m.len();
    let nc = m.first().map_or(0, |r| r.len());
    let mut out = Vec::new();
    let mut t = 0;
    while t < nr.min(nc) {
        // locate the minimal-absolute-value nonzero entry in the submatrix
        let mut best: Option<(usize, usize)> = None;
        for i in t..nr {
            for j in t..nc {
                if !m[i][j].is_zero()
                    && best.map_or(true, |(bi, bj)| m[i][j].abs() < m[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(t, bi);
        for row in m.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..nr {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = rounded_div(&m[i][t], &m[t][t]);
                if !q.is_zero() {
                    for j in t..nc {
                        let sub = &q * &m[t][j];
                        m[i][j] -= sub;
                    }
                }
                if !m[i][t].is_zero() {
                    m.swap(t, i);
                    clean = false;
                }
            }
            for j in t + 1..nc {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = rounded_div(&m[t][j], &m[t][t]);
                if !q.is_zero() {
                    for i in t..nr {
                        let sub = &q * &m[i][t];
                        m[i][j] -= sub;
                    }
                }
                if !m[t][j].is_zero() {
                    for row in m.iter_mut() {
                        row.swap(t, j);
                    }
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // pivot must divide every remaining entry
            let mut fixed = true;
            'scan: for i in t + 1..nr {
                for j in t + 1..nc {
                    if !(&m[i][j] % &m[t][t]).is_zero() {
                        for jj in t..nc {
                            let add = m[i][jj].clone();
                            m[t][jj] += add;
                        }
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        out.push(m[t][t].abs());
        t += 1;
    }
    out
}

/// Quotient rounding toward the nearest integer; keeps remainders small.
fn rounded_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = num_integer::Integer::div_rem(a, b);
    if (&r + &r).abs() > b.abs() {
        if r.sign() == b.sign() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snf_of(rows: &[Vec<i64>]) -> (Vec<i64>, usize) {
        let m = SparseIntMat::from_dense(rows);
        let (d, r) = smith_normal_form(&m);
        (
            d.iter().map(|x| i64::try_from(x).unwrap()).collect(),
            r,
        )
    }

    #[test]
    fn identity() {
        assert_eq!(snf_of(&[vec![1, 0], vec![0, 1]]), (vec![1, 1], 2));
    }

    #[test]
    fn divisor_chain() {
        assert_eq!(snf_of(&[vec![2, 4], vec![6, 8]]), (vec![2, 4], 2));
    }

    #[test]
    fn zero_matrix() {
        let zeros = vec![vec![0, 0, 0]; 3];
        assert_eq!(snf_of(&zeros), (vec![], 0));
    }

    #[test]
    fn torsion_example() {
        // diag(2, 3) has SNF diag(1, 6)
        assert_eq!(snf_of(&[vec![2, 0], vec![0, 3]]), (vec![1, 6], 2));
    }

    #[test]
    fn rectangular() {
        assert_eq!(snf_of(&[vec![1, 2, 3]]), (vec![1], 1));
        assert_eq!(snf_of(&[vec![2, 4, 6]]), (vec![2], 1));
    }

    #[test]
    fn rank_mod_p_matches() {
        let m = SparseIntMat::from_dense(&[vec![1, 1], vec![1, 3]]);
        assert_eq!(m.rank_mod_p(5), 2);
        // determinant 2: rank drops mod 2
        assert_eq!(m.rank_mod_p(2), 1);
        assert_eq!(m.rank_q(), 2);
        let z = SparseIntMat::from_dense(&[vec![2, 4], vec![6, 8]]);
        assert_eq!(z.rank_mod_p(2), 0);
        assert_eq!(z.rank_q(), 2);
    }
}
