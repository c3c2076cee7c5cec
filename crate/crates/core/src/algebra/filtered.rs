use super::complex::{is_prime, BigradedComplex, Coeffs, GradedGenerator, HomologyTable};
use crate::error::{Error, InvariantError, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::{BinaryHeap, HashMap, HashSet};

/// Field arithmetic carried by a context object, so the prime of a prime
/// field lives in one place rather than in every element.
pub trait FieldOps: Clone {
    type Elem: Clone + PartialEq + std::fmt::Debug;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b))
    }
}

/// The rationals with exact big-integer arithmetic.
#[derive(Debug, Clone, Default)]
pub struct QField;

impl FieldOps for QField {
    type Elem = BigRational;
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero());
        a.recip()
    }
}

/// The prime field F_p for a runtime prime p; elements stored as 0..p-1.
#[derive(Debug, Clone)]
pub struct PrimeField(pub u64);

impl FieldOps for PrimeField {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.0
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.0 as i64) as u64
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.0
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.0 - b % self.0) % self.0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.0 as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.0 - a % self.0) % self.0
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0);
        // Fermat: a^(p-2)
        let mut acc: u128 = 1;
        let p = self.0 as u128;
        let mut bb = (*a as u128) % p;
        let mut e = self.0 - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * bb % p;
            }
            bb = bb * bb % p;
            e >>= 1;
        }
        acc as u64
    }
}

/// Spectral-sequence pages of a downward-filtered complex.
/// pages[k] holds the page of index k+1 (the first listed page is the
/// associated-graded generator counts; the next is the homology of the
/// filtration-preserving layer; the last is stable).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralPages {
    pub pages: Vec<HomologyTable>,
    /// (u, f) of the generators surviving to the last page.
    pub survivors: Vec<(i64, i64)>,
}

impl SpectralPages {
    pub fn last(&self) -> &HomologyTable {
        self.pages.last().expect("at least one page")
    }
    pub fn total_surviving_rank(&self) -> usize {
        self.survivors.len()
    }
}

/// A filtered complex over a field with the filtration-preserving layer
/// already cancelled, together with the data needed to keep reducing.
#[derive(Debug, Clone)]
pub struct FilteredModel<F: FieldOps> {
    pub field: F,
    pub gens: Vec<GradedGenerator>,
    /// column i: targets of generator i with field coefficients
    pub d: Vec<Vec<(usize, F::Elem)>>,
}

impl<F: FieldOps> FilteredModel<F> {
    pub fn euler_characteristic(&self, var: &str) -> super::laurent::Laurent {
        let mut p = super::laurent::Laurent::zero(&[var]);
        for g in &self.gens {
            let sign: i64 = if g.u.rem_euclid(2) == 1 { -1 } else { 1 };
            p.add_term(&[g.f], sign);
        }
        p
    }
}

/// Filtered Gaussian elimination engine.
///
/// Cancels differential entries in order of filtration drop, lowest first.
/// Cancelling an entry of drop n creates only fill-in of drop >= n, so after
/// the drop-n pass completes the remaining differential drops by more than n
/// and each intermediate generator count is a well-defined page.
struct Reducer<F: FieldOps> {
    field: F,
    gens: Vec<GradedGenerator>,
    alive: Vec<bool>,
    cols: Vec<HashMap<usize, F::Elem>>,
    rows: Vec<HashSet<usize>>,
}

impl<F: FieldOps> Reducer<F> {
    fn from_complex(field: F, c: &BigradedComplex) -> Self {
        let gens = c.generators().to_vec();
        let n = gens.len();
        let mut cols: Vec<HashMap<usize, F::Elem>> = vec![HashMap::new(); n];
        let mut rows: Vec<HashSet<usize>> = vec![HashSet::new(); n];
        for (i, col) in c.differential().iter().enumerate() {
            for &(j, v) in col {
                let fv = field.from_i64(v);
                if !field.is_zero(&fv) {
                    cols[i].insert(j, fv);
                    rows[j].insert(i);
                }
            }
        }
        Reducer {
            field,
            gens,
            alive: vec![true; n],
            cols,
            rows,
        }
    }

    fn drop_of(&self, i: usize, j: usize) -> i64 {
        self.gens[i].f - self.gens[j].f
    }

    fn page(&self) -> HomologyTable {
        let mut t = HomologyTable::default();
        let mut counts: HashMap<(i64, i64), usize> = HashMap::new();
        for (i, g) in self.gens.iter().enumerate() {
            if self.alive[i] {
                *counts.entry((g.u, g.f)).or_insert(0) += 1;
            }
        }
        for ((u, f), n) in counts {
            t.insert(u, f, n, Vec::new());
        }
        t
    }

    fn min_drop(&self) -> Option<i64> {
        let mut best: Option<i64> = None;
        for (i, col) in self.cols.iter().enumerate() {
            if !self.alive[i] {
                continue;
            }
            for (&j, _) in col {
                let d = self.drop_of(i, j);
                best = Some(best.map_or(d, |b: i64| b.min(d)));
            }
        }
        best
    }

    fn score(&self, i: usize, j: usize) -> u64 {
        let cn = self.cols[i].len();
        let rn = self.rows[j].len();
        (cn.saturating_sub(1) as u64) * (rn.saturating_sub(1) as u64)
    }

    /// Cancel every entry of filtration drop exactly n.
    fn run_phase(&mut self, n: i64) {
        use std::cmp::Reverse;
        let mut heap: BinaryHeap<Reverse<(u64, usize, usize)>> = BinaryHeap::new();
        for (i, col) in self.cols.iter().enumerate() {
            if !self.alive[i] {
                continue;
            }
            for (&j, _) in col {
                if self.drop_of(i, j) == n {
                    heap.push(Reverse((self.score(i, j), i, j)));
                }
            }
        }
        while let Some(Reverse((sc, i, j))) = heap.pop() {
            if !self.alive[i] || !self.alive[j] {
                continue;
            }
            if !self.cols[i].contains_key(&j) {
                continue;
            }
            debug_assert_eq!(self.drop_of(i, j), n);
            let now = self.score(i, j);
            if now != sc {
                heap.push(Reverse((now, i, j)));
                continue;
            }
            self.cancel(i, j, n, &mut heap);
        }
    }

    /// Cancel the acyclic pair (i, j) along the invertible entry d(i)[j].
    fn cancel(
        &mut self,
        i: usize,
        j: usize,
        phase: i64,
        heap: &mut BinaryHeap<std::cmp::Reverse<(u64, usize, usize)>>,
    ) {
        let field = self.field.clone();
        let pivot_col: Vec<(usize, F::Elem)> = {
            let col = std::mem::take(&mut self.cols[i]);
            col.into_iter().collect()
        };
        for &(k, _) in &pivot_col {
            self.rows[k].remove(&i);
        }
        let c = pivot_col
            .iter()
            .find(|(k, _)| *k == j)
            .map(|(_, v)| v.clone())
            .expect("pivot entry present");
        let c_inv = field.inv(&c);

        // other sources hitting j receive the correction -(c'/c) * d(i)
        let srcs: Vec<usize> = std::mem::take(&mut self.rows[j])
            .into_iter()
            .filter(|&x| x != i)
            .collect();
        for x in srcs {
            let Some(cx) = self.cols[x].remove(&j) else {
                continue;
            };
            let factor = field.mul(&cx, &c_inv);
            for (k, v) in &pivot_col {
                if *k == j {
                    continue;
                }
                let delta = field.mul(&factor, v);
                let entry = self.cols[x].get(k).cloned().unwrap_or_else(|| field.zero());
                let nv = field.sub(&entry, &delta);
                if field.is_zero(&nv) {
                    self.cols[x].remove(k);
                    self.rows[*k].remove(&x);
                } else {
                    let fresh = self.cols[x].insert(*k, nv).is_none();
                    self.rows[*k].insert(x);
                    if self.drop_of(x, *k) == phase {
                        let _ = fresh;
                        heap.push(std::cmp::Reverse((self.score(x, *k), x, *k)));
                    }
                }
            }
        }

        // incoming entries of i and outgoing entries of j disappear with the pair
        for x in std::mem::take(&mut self.rows[i]) {
            self.cols[x].remove(&i);
        }
        for (k, _) in std::mem::take(&mut self.cols[j]) {
            self.rows[k].remove(&j);
        }
        self.alive[i] = false;
        self.alive[j] = false;
    }

    /// Compact the live part into a standalone filtered model.
    fn snapshot(&self) -> FilteredModel<F> {
        let mut remap: HashMap<usize, usize> = HashMap::new();
        let mut gens = Vec::new();
        for (i, g) in self.gens.iter().enumerate() {
            if self.alive[i] {
                remap.insert(i, gens.len());
                gens.push(*g);
            }
        }
        let mut d = vec![Vec::new(); gens.len()];
        for (i, col) in self.cols.iter().enumerate() {
            if !self.alive[i] {
                continue;
            }
            let mut entries: Vec<(usize, F::Elem)> = col
                .iter()
                .map(|(&j, v)| (remap[&j], v.clone()))
                .collect();
            entries.sort_by_key(|e| e.0);
            d[remap[&i]] = entries;
        }
        FilteredModel {
            field: self.field.clone(),
            gens,
            d,
        }
    }

    fn survivors(&self) -> Vec<(i64, i64)> {
        let mut out: Vec<(i64, i64)> = self
            .gens
            .iter()
            .enumerate()
            .filter(|(i, _)| self.alive[*i])
            .map(|(_, g)| (g.u, g.f))
            .collect();
        out.sort();
        out
    }
}

fn reduce_with<F: FieldOps>(
    field: F,
    c: &BigradedComplex,
) -> (FilteredModel<F>, SpectralPages) {
    let mut r = Reducer::from_complex(field, c);
    let mut pages = vec![r.page()]; // associated graded
    let mut model: Option<FilteredModel<F>> = None;
    let mut last_phase: i64 = -1;
    loop {
        let Some(m) = r.min_drop() else { break };
        // phases between last_phase+1 and m-1 cancel nothing: duplicate pages
        for _ in last_phase + 1..m {
            pages.push(r.page());
        }
        if m > 0 && model.is_none() {
            model = Some(r.snapshot());
        }
        r.run_phase(m);
        pages.push(r.page());
        last_phase = m;
        if last_phase == 0 && model.is_none() {
            model = Some(r.snapshot());
        }
    }
    if last_phase < 0 {
        // no differential at all: the second page equals the first
        pages.push(r.page());
    }
    let model = model.unwrap_or_else(|| r.snapshot());
    let survivors = r.survivors();
    (model, SpectralPages { pages, survivors })
}

/// Reduce over the rationals: returns the minimal filtered model (the
/// filtration-preserving layer fully cancelled) and all pages down to the
/// stable one.
pub fn filtered_reduce_q(c: &BigradedComplex) -> (FilteredModel<QField>, SpectralPages) {
    reduce_with(QField, c)
}

/// Reduce over F_p, p prime.
pub fn filtered_reduce_p(
    c: &BigradedComplex,
    p: u64,
) -> Result<(FilteredModel<PrimeField>, SpectralPages)> {
    if !is_prime(p) {
        return Err(Error::Invariant(InvariantError::BadCoefficients(format!(
            "{p} is not prime"
        ))));
    }
    Ok(reduce_with(PrimeField(p), c))
}

/// Pages only, for any field coefficient choice. Integer coefficients are
/// rejected: page extraction relies on field arithmetic.
pub fn spectral_pages(c: &BigradedComplex, coeffs: Coeffs) -> Result<SpectralPages> {
    match coeffs {
        Coeffs::Q => Ok(filtered_reduce_q(c).1),
        Coeffs::Zp(p) => Ok(filtered_reduce_p(c, p)?.1),
        Coeffs::Z => Err(Error::Invariant(InvariantError::BadCoefficients(
            "filtered reduction needs field coefficients".into(),
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trefoil_hfk_model() -> BigradedComplex {
        BigradedComplex::new(
            vec![
                GradedGenerator { u: 0, f: 1 },
                GradedGenerator { u: -1, f: 0 },
                GradedGenerator { u: -2, f: -1 },
            ],
            vec![vec![], vec![(2, 1)], vec![]],
        )
        .unwrap()
    }

    #[test]
    fn trefoil_model_pages() {
        let (model, pages) = filtered_reduce_q(&trefoil_hfk_model());
        // first two pages list all three generators
        assert_eq!(pages.pages[0].total_rank(), 3);
        assert_eq!(pages.pages[1].total_rank(), 3);
        assert_eq!(pages.pages[1].rank(0, 1), 1);
        assert_eq!(pages.pages[1].rank(-1, 0), 1);
        assert_eq!(pages.pages[1].rank(-2, -1), 1);
        // the drop-1 differential cancels the lower pair
        assert_eq!(pages.last().total_rank(), 1);
        assert_eq!(pages.survivors, vec![(0, 1)]);
        // minimal model still has all three generators and the pending drop-1 arrow
        assert_eq!(model.gens.len(), 3);
        assert_eq!(model.d.iter().map(|c| c.len()).sum::<usize>(), 1);
    }

    #[test]
    fn trivial_differential() {
        let c = BigradedComplex::new(
            vec![
                GradedGenerator { u: 0, f: 0 },
                GradedGenerator { u: 1, f: 2 },
            ],
            vec![vec![], vec![]],
        )
        .unwrap();
        let (model, pages) = filtered_reduce_q(&c);
        assert_eq!(pages.pages.len(), 2);
        assert_eq!(pages.pages[0], pages.pages[1]);
        assert_eq!(pages.survivors.len(), 2);
        assert_eq!(model.gens.len(), 2);
    }

    #[test]
    fn acyclic_pair_same_filtration() {
        let c = BigradedComplex::new(
            vec![
                GradedGenerator { u: 1, f: 3 },
                GradedGenerator { u: 0, f: 3 },
            ],
            vec![vec![(1, 1)], vec![]],
        )
        .unwrap();
        let (model, pages) = filtered_reduce_q(&c);
        assert_eq!(pages.pages[0].total_rank(), 2);
        assert_eq!(pages.last().total_rank(), 0);
        assert!(pages.survivors.is_empty());
        assert!(model.gens.is_empty());
    }

    #[test]
    fn acyclic_pair_drop_one() {
        let c = BigradedComplex::new(
            vec![
                GradedGenerator { u: 1, f: 1 },
                GradedGenerator { u: 0, f: 0 },
            ],
            vec![vec![(1, 1)], vec![]],
        )
        .unwrap();
        let (_, pages) = filtered_reduce_q(&c);
        assert_eq!(pages.pages[1].rank(1, 1), 1);
        assert_eq!(pages.pages[1].rank(0, 0), 1);
        assert_eq!(pages.last().total_rank(), 0);
        assert!(pages.survivors.is_empty());
    }

    #[test]
    fn mod_p_reduction() {
        // x -> 2y is invertible over Q and F_3 but zero over F_2
        let c = BigradedComplex::new(
            vec![
                GradedGenerator { u: 1, f: 0 },
                GradedGenerator { u: 0, f: 0 },
            ],
            vec![vec![(1, 2)], vec![]],
        )
        .unwrap();
        let (_, pq) = filtered_reduce_q(&c);
        assert_eq!(pq.last().total_rank(), 0);
        let (_, p2) = filtered_reduce_p(&c, 2).unwrap();
        assert_eq!(p2.last().total_rank(), 2);
        let (_, p3) = filtered_reduce_p(&c, 3).unwrap();
        assert_eq!(p3.last().total_rank(), 0);
        assert!(filtered_reduce_p(&c, 4).is_err());
        assert!(spectral_pages(&c, Coeffs::Z).is_err());
    }

    #[test]
    fn page_monotonicity() {
        let (_, pages) = filtered_reduce_q(&trefoil_hfk_model());
        for w in pages.pages.windows(2) {
            for (k, &(r1, _)) in w[1].entries.iter().map(|(k, v)| (*k, v)) {
                assert!(r1 <= w[0].rank(k.0, k.1));
            }
        }
    }
}
