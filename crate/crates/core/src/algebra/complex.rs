use super::laurent::Laurent;
use super::matrix::{smith_normal_form, SparseIntMat};
use crate::error::{Error, InvariantError, Result};
use num_bigint::BigInt;
use std::collections::BTreeMap;

/// Coefficient systems supported by homology computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coeffs {
    Q,
    Zp(u64),
    Z,
}

impl Coeffs {
    pub fn label(&self) -> String {
        match self {
            Coeffs::Q => "Q".into(),
            Coeffs::Zp(p) => format!("Z/{p}"),
            Coeffs::Z => "Z".into(),
        }
    }
}

/// A homogeneous generator with homological grading u and filtration grading f.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GradedGenerator {
    pub u: i64,
    pub f: i64,
}

/// Finite free bigraded complex. The differential lowers u by exactly 1 and
/// never raises f; both facts are checked at construction together with d^2 = 0.
#[derive(Debug, Clone)]
pub struct BigradedComplex {
    gens: Vec<GradedGenerator>,
    /// d[i] = sparse column of generator i: (target index, integer coefficient)
    d: Vec<Vec<(usize, i64)>>,
}

impl BigradedComplex {
    pub fn new(gens: Vec<GradedGenerator>, d: Vec<Vec<(usize, i64)>>) -> Result<Self> {
        assert_eq!(gens.len(), d.len(), "one differential column per generator");
        for (i, col) in d.iter().enumerate() {
            for &(j, c) in col {
                if c == 0 {
                    continue;
                }
                if gens[j].u != gens[i].u - 1 {
                    return Err(Error::Invariant(InvariantError::BadGradingStep {
                        from: gens[i].u,
                        to: gens[j].u,
                    }));
                }
                if gens[j].f > gens[i].f {
                    return Err(Error::Invariant(InvariantError::FiltrationRaised {
                        from: gens[i].f,
                        to: gens[j].f,
                    }));
                }
            }
        }
        let c = BigradedComplex { gens, d };
        c.check_d_squared()?;
        Ok(c)
    }

    fn check_d_squared(&self) -> Result<()> {
        for i in 0..self.gens.len() {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for &(j, cj) in &self.d[i] {
                for &(k, ck) in &self.d[j] {
                    let e = acc.entry(k).or_insert(0);
                    *e = e
                        .checked_add(
                            cj.checked_mul(ck)
                                .ok_or(Error::Invariant(InvariantError::Internal(
                                    "overflow in d^2 check".into(),
                                )))?,
                        )
                        .ok_or(Error::Invariant(InvariantError::Internal(
                            "overflow in d^2 check".into(),
                        )))?;
                }
            }
            if acc.values().any(|&v| v != 0) {
                return Err(Error::Invariant(InvariantError::DifferentialNotSquareZero {
                    index: i,
                }));
            }
        }
        Ok(())
    }

    pub fn generators(&self) -> &[GradedGenerator] {
        &self.gens
    }

    pub fn differential(&self) -> &[Vec<(usize, i64)>] {
        &self.d
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// The layer d_n: entries whose filtration drop f(src) - f(tgt) equals n.
    pub fn layer(&self, n: i64) -> Vec<Vec<(usize, i64)>> {
        self.d
            .iter()
            .enumerate()
            .map(|(i, col)| {
                col.iter()
                    .filter(|&&(j, _)| self.gens[i].f - self.gens[j].f == n)
                    .cloned()
                    .collect()
            })
            .collect()
    }

    /// Sum over generators of (-1)^u f^(f-grading): invariant under filtered reduction.
    pub fn filtered_euler_characteristic(&self, var: &str) -> Laurent {
        let mut p = Laurent::zero(&[var]);
        for g in &self.gens {
            let sign: i64 = if g.u.rem_euclid(2) == 1 { -1 } else { 1 };
            p.add_term(&[g.f], sign);
        }
        p
    }
}

/// Per-bigrading free ranks and torsion divisors.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HomologyTable {
    /// (u, f) -> (free rank, torsion divisors > 1 in divisibility order)
    pub entries: BTreeMap<(i64, i64), (usize, Vec<BigInt>)>,
}

impl HomologyTable {
    pub fn insert(&mut self, u: i64, f: i64, rank: usize, torsion: Vec<BigInt>) {
        if rank == 0 && torsion.is_empty() {
            return;
        }
        self.entries.insert((u, f), (rank, torsion));
    }

    pub fn rank(&self, u: i64, f: i64) -> usize {
        self.entries.get(&(u, f)).map_or(0, |e| e.0)
    }

    pub fn torsion(&self, u: i64, f: i64) -> &[BigInt] {
        self.entries
            .get(&(u, f))
            .map_or(&[] as &[BigInt], |e| &e.1)
    }

    pub fn total_rank(&self) -> usize {
        self.entries.values().map(|e| e.0).sum()
    }

    pub fn has_torsion(&self) -> bool {
        self.entries.values().any(|e| !e.1.is_empty())
    }

    /// Bigradings carrying at least one torsion divisor divisible by p.
    pub fn torsion_positions(&self, p: u64) -> Vec<(i64, i64)> {
        let p = BigInt::from(p);
        self.entries
            .iter()
            .filter(|(_, (_, tor))| tor.iter().any(|d| (d % &p) == BigInt::from(0)))
            .map(|(&k, _)| k)
            .collect()
    }

    /// Poincare polynomial over the free ranks: sum rank * u^i f^j.
    /// Variable order: (f-variable, u-variable), so a table entry at
    /// (u, f) contributes to exponent (f, u).
    pub fn poincare_polynomial(&self, f_var: &str, u_var: &str) -> Laurent {
        let mut p = Laurent::zero(&[f_var, u_var]);
        for (&(u, f), &(rank, _)) in &self.entries {
            if rank > 0 {
                p.add_term(&[f, u], rank as i64);
            }
        }
        p
    }

    /// Euler characteristic with (-1)^u weights over free ranks.
    pub fn euler_characteristic(&self, f_var: &str) -> Laurent {
        self.poincare_polynomial(f_var, "u").substitute_sign(1, true)
    }

    /// Regroup free ranks by delta = f - weight * u. Khovanov uses weight 2
    /// (delta = q - 2u), knot Floer uses weight 1 (delta = A - M).
    pub fn delta_buckets(&self, weight: i64) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for (&(u, f), &(rank, _)) in &self.entries {
            if rank > 0 {
                *out.entry(f - weight * u).or_insert(0) += rank;
            }
        }
        out
    }
}

/// Homology of the filtration-preserving layer d_0, reported per (u, f) bigrading.
///
/// For complexes whose differential preserves f exactly (d = d_0) this is the
/// homology of the total complex. Over Z the torsion divisors come from the
/// Smith normal form of the incoming block.
pub fn homology(c: &BigradedComplex, coeffs: Coeffs) -> Result<HomologyTable> {
    if let Coeffs::Zp(p) = coeffs {
        if !is_prime(p) {
            return Err(Error::Invariant(InvariantError::BadCoefficients(format!(
                "{p} is not prime"
            ))));
        }
    }
    // bucket generators by bigrading
    let mut buckets: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
    for (i, g) in c.generators().iter().enumerate() {
        buckets.entry((g.u, g.f)).or_default().push(i);
    }
    let index_in: BTreeMap<(i64, i64), BTreeMap<usize, usize>> = buckets
        .iter()
        .map(|(&k, v)| (k, v.iter().enumerate().map(|(pos, &g)| (g, pos)).collect()))
        .collect();

    // d0 block from bigrading (u, f) to (u-1, f)
    let block = |u: i64, f: i64| -> SparseIntMat {
        let src = buckets.get(&(u, f)).map_or(&[] as &[usize], |v| v);
        let tgt_index = index_in.get(&(u - 1, f));
        let tgt_len = buckets.get(&(u - 1, f)).map_or(0, |v| v.len());
        let mut m = SparseIntMat::new(tgt_len, src.len());
        if let Some(tgt_index) = tgt_index {
            for (col, &g) in src.iter().enumerate() {
                for &(j, coef) in &c.differential()[g] {
                    if let Some(&row) = tgt_index.get(&j) {
                        m.push(row, col, coef);
                    }
                }
            }
        }
        m
    };

    let mut out = HomologyTable::default();
    for (&(u, f), gens) in &buckets {
        let dim = gens.len();
        let a = block(u, f); // out of (u, f)
        let b = block(u + 1, f); // into (u, f)
        let (rank_a, rank_b, torsion) = match coeffs {
            Coeffs::Q => (a.rank_q(), b.rank_q(), Vec::new()),
            Coeffs::Zp(p) => (a.rank_mod_p(p), b.rank_mod_p(p), Vec::new()),
            Coeffs::Z => {
                let (div_b, rank_b) = smith_normal_form(&b);
                let torsion: Vec<BigInt> = div_b
                    .into_iter()
                    .filter(|d| *d > BigInt::from(1))
                    .collect();
                (a.rank_q(), rank_b, torsion)
            }
        };
        let free = dim - rank_a - rank_b;
        out.insert(u, f, free, torsion);
    }
    Ok(out)
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= p {
        if p % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trefoil_hfk_model() -> BigradedComplex {
        // generators x1 (u 0, f 1), x0 (u -1, f 0), x-1 (u -2, f -1); d(x0) = x-1
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
    fn d0_homology_of_trefoil_model() {
        let c = trefoil_hfk_model();
        let h = homology(&c, Coeffs::Q).unwrap();
        assert_eq!(h.rank(0, 1), 1);
        assert_eq!(h.rank(-1, 0), 1);
        assert_eq!(h.rank(-2, -1), 1);
        assert_eq!(h.total_rank(), 3);
        let p = h.poincare_polynomial("t", "u");
        assert_eq!(p.render(true), "t + u^-1 + t^-1u^-2");
    }

    #[test]
    fn euler_characteristic() {
        let c = trefoil_hfk_model();
        let e = c.filtered_euler_characteristic("t");
        assert_eq!(e.render(true), "t - 1 + t^-1");
    }

    #[test]
    fn rejects_bad_differentials() {
        // d raises f
        let r = BigradedComplex::new(
            vec![
                GradedGenerator { u: 1, f: 0 },
                GradedGenerator { u: 0, f: 1 },
            ],
            vec![vec![(1, 1)], vec![]],
        );
        assert!(r.is_err());
        // d^2 != 0
        let r = BigradedComplex::new(
            vec![
                GradedGenerator { u: 2, f: 0 },
                GradedGenerator { u: 1, f: 0 },
                GradedGenerator { u: 0, f: 0 },
            ],
            vec![vec![(1, 1)], vec![(2, 1)], vec![]],
        );
        assert!(r.is_err());
    }

    #[test]
    fn integral_torsion() {
        // x -> 2y in matching filtration: H = Z/2 at the target
        let c = BigradedComplex::new(
            vec![
                GradedGenerator { u: 1, f: 0 },
                GradedGenerator { u: 0, f: 0 },
            ],
            vec![vec![(1, 2)], vec![]],
        )
        .unwrap();
        let h = homology(&c, Coeffs::Z).unwrap();
        assert_eq!(h.rank(0, 0), 0);
        assert_eq!(h.torsion(0, 0), &[BigInt::from(2)]);
        let h2 = homology(&c, Coeffs::Zp(2)).unwrap();
        assert_eq!(h2.rank(0, 0), 1);
        assert_eq!(h2.rank(1, 0), 1);
        let hq = homology(&c, Coeffs::Q).unwrap();
        assert_eq!(hq.total_rank(), 0);
    }
}
