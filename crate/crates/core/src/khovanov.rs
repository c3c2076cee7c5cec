//! Khovanov homology from the cube of resolutions: unreduced and reduced
//! complexes with (u, q) gradings, homology over Q / F_p / Z with torsion,
//! the Lee deformation, the s-invariant, and the delta-grading view.
//!
//! The underlying [`BigradedComplex`] stores (-u, -q) so that the differential
//! lowers the homological grading and never raises the filtration; public
//! tables use the usual Khovanov sign convention.

use crate::algebra::{
    filtered_reduce_q, smith_normal_form, BigradedComplex, Coeffs, GradedGenerator, HomologyTable,
    SparseIntMat,
};
use crate::diagram::PlanarDiagram;
use crate::error::{Error, InputError, InvariantError, Result};
use rayon::prelude::*;
use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};

/// Optional deformation of the Khovanov differential.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Deformation {
    None,
    Lee,
}

/// Hard cap on the cube: 2^n resolution vertices.
const MAX_CUBE_CROSSINGS: usize = 24;

/// The (possibly deformed) Khovanov complex of a diagram.
pub struct KhovanovComplex {
    complex: BigradedComplex,
    reduced: bool,
    deformation: Deformation,
}

impl KhovanovComplex {
    pub fn complex(&self) -> &BigradedComplex {
        &self.complex
    }

    pub fn reduced(&self) -> bool {
        self.reduced
    }

    pub fn deformation(&self) -> Deformation {
        self.deformation
    }

    pub fn len(&self) -> usize {
        self.complex.len()
    }

    pub fn is_empty(&self) -> bool {
        self.complex.is_empty()
    }

    /// (u, q) of a generator in the Khovanov sign convention.
    pub fn kh_grading(&self, i: usize) -> (i64, i64) {
        let g = self.complex.generators()[i];
        (-g.u, -g.f)
    }
}

/// Circle decomposition of one resolution vertex.
#[derive(Clone)]
struct Resolution {
    /// arc index -> circle id, ids in order of first arc occurrence
    circ: Vec<u8>,
    count: usize,
}

/// Cube-of-resolutions data in arc-index form.
struct Cube {
    tuples: Vec<[usize; 4]>,
    arcs: usize,
    n_minus: i64,
    /// n_plus - 2 n_minus, plus one for the reduced q-shift
    q_base0: i64,
    reduced: bool,
    /// arc index of the marked arc (reduced only)
    marked: usize,
    /// crossingless diagram: one free circle
    free_circle: bool,
    lee: bool,
}

impl Cube {
    fn new(
        d: &PlanarDiagram,
        reduced: bool,
        marked: Option<usize>,
        deformation: Deformation,
    ) -> Result<Cube> {
        let n = d.len();
        if n > MAX_CUBE_CROSSINGS {
            return Err(Error::Invariant(InvariantError::ResourceLimit(format!(
                "cube of resolutions with {n} crossings exceeds the supported {MAX_CUBE_CROSSINGS}"
            ))));
        }
        let lee = matches!(deformation, Deformation::Lee);
        if reduced && lee {
            return Err(Error::Input(InputError::InvalidParameter(
                "the Lee deformation of the reduced complex is not supported".into(),
            )));
        }
        let mut index: BTreeMap<usize, usize> = BTreeMap::new();
        for c in d.crossings() {
            for &lab in &c.labels() {
                let next = index.len();
                index.entry(lab).or_insert(next);
            }
        }
        let tuples: Vec<[usize; 4]> = d
            .crossings()
            .iter()
            .map(|c| c.labels().map(|lab| index[&lab]))
            .collect();
        let marked_idx = if reduced {
            match marked {
                Some(lab) => *index.get(&lab).ok_or_else(|| {
                    Error::Input(InputError::InvalidParameter(format!(
                        "marked arc {lab} not in diagram"
                    )))
                })?,
                None if n == 0 => 0, // the free circle is the marked circle
                None => {
                    return Err(Error::Input(InputError::InvalidParameter(
                        "reduced complex requires a marked arc".into(),
                    )))
                }
            }
        } else {
            0
        };
        let n_plus = d.positive_crossings() as i64;
        let n_minus = d.negative_crossings() as i64;
        Ok(Cube {
            arcs: index.len(),
            tuples,
            n_minus,
            q_base0: n_plus - 2 * n_minus + i64::from(reduced),
            reduced,
            marked: marked_idx,
            free_circle: n == 0,
            lee,
        })
    }

    fn n(&self) -> usize {
        self.tuples.len()
    }

    fn u_of(&self, v: u64) -> i64 {
        v.count_ones() as i64 - self.n_minus
    }

    fn q_base(&self, v: u64) -> i64 {
        v.count_ones() as i64 + self.q_base0
    }

    fn resolve(&self, mask: u64) -> Resolution {
        if self.free_circle {
            return Resolution {
                circ: Vec::new(),
                count: 1,
            };
        }
        let mut parent: Vec<u8> = (0..self.arcs as u8).collect();
        fn root(p: &mut [u8], mut x: u8) -> u8 {
            while p[x as usize] != x {
                p[x as usize] = p[p[x as usize] as usize];
                x = p[x as usize];
            }
            x
        }
        for (i, t) in self.tuples.iter().enumerate() {
            let [a, b, c, dd] = t.map(|x| x as u8);
            let pairs = if mask >> i & 1 == 0 {
                [(a, b), (c, dd)]
            } else {
                [(a, dd), (b, c)]
            };
            for (x, y) in pairs {
                let (rx, ry) = (root(&mut parent, x), root(&mut parent, y));
                if rx != ry {
                    parent[rx.max(ry) as usize] = rx.min(ry);
                }
            }
        }
        let mut id = vec![u8::MAX; self.arcs];
        let mut circ = vec![0u8; self.arcs];
        let mut count = 0u8;
        for e in 0..self.arcs {
            let r = root(&mut parent, e as u8) as usize;
            if id[r] == u8::MAX {
                id[r] = count;
                count += 1;
            }
            circ[e] = id[r];
        }
        Resolution {
            circ,
            count: count as usize,
        }
    }

    /// The marked circle id of a resolution (reduced complexes only).
    fn marked_id(&self, r: &Resolution) -> u32 {
        if self.free_circle {
            0
        } else {
            r.circ[self.marked] as u32
        }
    }

    /// Image terms of the label set `xmask` along the edge flipping crossing
    /// `at`, as (target label set, coefficient) pairs without the edge sign.
    fn edge_terms(&self, at: usize, src: &Resolution, tgt: &Resolution, xmask: u32) -> Vec<(u32, i64)> {
        let [a, _, c, _] = self.tuples[at];
        let s1 = src.circ[a] as u32;
        let s2 = src.circ[c] as u32;
        // labels of circles untouched by this edge carry over
        let mut map = vec![u32::MAX; src.count];
        for e in 0..self.arcs {
            map[src.circ[e] as usize] = tgt.circ[e] as u32;
        }
        let mut base: u32 = 0;
        for j in 0..src.count as u32 {
            if j != s1 && j != s2 && xmask >> j & 1 == 1 {
                base |= 1 << map[j as usize];
            }
        }
        let mut out = Vec::with_capacity(2);
        if s1 != s2 {
            // merge: two source circles meet one target circle
            let t = tgt.circ[a] as u32;
            debug_assert_eq!(t, tgt.circ[c] as u32);
            debug_assert_eq!(tgt.count, src.count - 1);
            match (xmask >> s1 & 1) + (xmask >> s2 & 1) {
                0 => out.push((base, 1)),
                1 => out.push((base | 1 << t, 1)),
                _ => {
                    if self.lee {
                        out.push((base, 1));
                    }
                }
            }
        } else {
            // split: one source circle becomes two target circles
            let t1 = tgt.circ[a] as u32;
            let t2 = tgt.circ[c] as u32;
            debug_assert_ne!(t1, t2);
            debug_assert_eq!(tgt.count, src.count + 1);
            if xmask >> s1 & 1 == 0 {
                out.push((base | 1 << t1, 1));
                out.push((base | 1 << t2, 1));
            } else {
                out.push((base | (1 << t1) | (1 << t2), 1));
                if self.lee {
                    out.push((base, 1));
                }
            }
        }
        out
    }
}

/// Edge sign: parity of the set 1-bits below the flipped coordinate.
fn edge_sign(v: u64, at: usize) -> i64 {
    if (v & ((1u64 << at) - 1)).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Build the full (deformed) complex. `marked` names an arc label of the
/// diagram and is required exactly when `reduced` is set on a diagram with
/// crossings; the reduced complex fixes the marked circle's label to x and
/// shifts q by +1.
pub fn khovanov_complex(
    d: &PlanarDiagram,
    reduced: bool,
    marked: Option<usize>,
    deformation: Deformation,
) -> Result<KhovanovComplex> {
    let cube = Cube::new(d, reduced, marked, deformation)?;
    let n = cube.n();
    let nv: u64 = 1 << n;

    let res: Vec<Resolution> = (0..nv).map(|v| cube.resolve(v)).collect();
    // generator layout: per vertex, label sets in increasing xmask order
    let mut offset: Vec<usize> = Vec::with_capacity(nv as usize + 1);
    let mut total = 0usize;
    for r in &res {
        offset.push(total);
        total += if cube.reduced {
            1 << (r.count - 1)
        } else {
            1 << r.count
        };
    }
    offset.push(total);

    // xmask <-> generator rank within a vertex
    let expand = |r: &Resolution, rank: u32| -> u32 {
        if !cube.reduced {
            return rank;
        }
        let m = cube.marked_id(r);
        let low = rank & ((1 << m) - 1);
        let high = (rank >> m) << (m + 1);
        high | low | (1 << m)
    };
    let compress = |r: &Resolution, xmask: u32| -> u32 {
        if !cube.reduced {
            return xmask;
        }
        let m = cube.marked_id(r);
        debug_assert_eq!(xmask >> m & 1, 1);
        let low = xmask & ((1 << m) - 1);
        let high = (xmask >> (m + 1)) << m;
        high | low
    };

    let mut gens = Vec::with_capacity(total);
    let mut diff: Vec<Vec<(usize, i64)>> = Vec::with_capacity(total);
    for v in 0..nv {
        let r = &res[v as usize];
        let u = cube.u_of(v);
        let qb = cube.q_base(v);
        let count = offset[v as usize + 1] - offset[v as usize];
        for rank in 0..count as u32 {
            let xmask = expand(r, rank);
            let q = r.count as i64 - 2 * i64::from(xmask.count_ones()) + qb;
            gens.push(GradedGenerator { u: -u, f: -q });
            let mut col: Vec<(usize, i64)> = Vec::new();
            for i in 0..n {
                if v >> i & 1 == 1 {
                    continue;
                }
                let w = v | (1 << i);
                let tr = &res[w as usize];
                let sign = edge_sign(v, i);
                for (txm, coef) in cube.edge_terms(i, r, tr, xmask) {
                    let trank = compress(tr, txm);
                    col.push((offset[w as usize] + trank as usize, sign * coef));
                }
            }
            diff.push(col);
        }
    }
    let complex = BigradedComplex::new(gens, diff)?;
    Ok(KhovanovComplex {
        complex,
        reduced,
        deformation,
    })
}

/// Khovanov homology per (u, q), computed q-column by q-column (the
/// undeformed differential preserves q). Over Z the torsion divisors come
/// from Smith normal forms of the per-column blocks. The reduced complex
/// marks the lowest arc label.
pub fn khovanov_homology(d: &PlanarDiagram, reduced: bool, coeffs: Coeffs) -> Result<HomologyTable> {
    if let Coeffs::Zp(p) = coeffs {
        if !crate::algebra::is_prime_u64(p) {
            return Err(Error::Invariant(InvariantError::BadCoefficients(format!(
                "{p} is not prime"
            ))));
        }
    }
    let marked = if reduced {
        d.arcs().first().copied()
    } else {
        None
    };
    let cube = Cube::new(d, reduced, marked, Deformation::None)?;
    let n = cube.n();
    let nv: u64 = 1 << n;

    // cache resolutions for moderate cubes; recompute on the fly above that
    let store: Option<Vec<Resolution>> = if n <= 16 {
        Some((0..nv).map(|v| cube.resolve(v)).collect())
    } else {
        None
    };
    let res_of = |v: u64| -> Resolution {
        match &store {
            Some(s) => s[v as usize].clone(),
            None => cube.resolve(v),
        }
    };

    let mut qmin = i64::MAX;
    let mut qmax = i64::MIN;
    for v in 0..nv {
        let c = res_of(v).count as i64;
        let b = cube.q_base(v);
        qmin = qmin.min(b - c);
        qmax = qmax.max(b + c - 2 * i64::from(cube.reduced));
    }

    let columns: Vec<i64> = (qmin..=qmax).step_by(2).collect();
    let per_column: Vec<Result<Vec<(i64, i64, usize, Vec<num_bigint::BigInt>)>>> = columns
        .par_iter()
        .map(|&q| column_homology(&cube, &res_of, nv, q, coeffs))
        .collect();

    let mut table = HomologyTable::default();
    for entries in per_column {
        for (u, q, rank, torsion) in entries? {
            table.insert(u, q, rank, torsion);
        }
    }
    Ok(table)
}

/// Homology of the single q-column: entries (u, q, free rank, torsion).
fn column_homology(
    cube: &Cube,
    res_of: &(dyn Fn(u64) -> Resolution + Sync),
    nv: u64,
    q: i64,
    coeffs: Coeffs,
) -> Result<Vec<(i64, i64, usize, Vec<num_bigint::BigInt>)>> {
    // bucket the column's generators by homological grading
    let mut buckets: BTreeMap<i64, Vec<(u64, u32)>> = BTreeMap::new();
    for v in 0..nv {
        let r = res_of(v);
        let c = r.count as i64;
        let num = c + cube.q_base(v) - q;
        if num % 2 != 0 {
            continue;
        }
        let k = num / 2;
        let klo = i64::from(cube.reduced);
        if k < klo || k > c {
            continue;
        }
        let u = cube.u_of(v);
        let bucket = buckets.entry(u).or_default();
        if cube.reduced {
            let m = cube.marked_id(&r);
            let rest = c as u32 - 1;
            for sub in KSubsets::new(rest, (k - 1) as u32) {
                let low = sub & ((1 << m) - 1);
                let high = (sub >> m) << (m + 1);
                bucket.push((v, high | low | (1 << m)));
            }
        } else {
            for sub in KSubsets::new(c as u32, k as u32) {
                bucket.push((v, sub));
            }
        }
    }

    // position of each generator within its bucket
    let pos: HashMap<(u64, u32), usize> = buckets
        .values()
        .flat_map(|b| b.iter().enumerate().map(|(i, &g)| (g, i)))
        .collect();

    // block d_u from bucket u to bucket u+1
    let block = |u: i64| -> SparseIntMat {
        let src = buckets.get(&u).map_or(&[] as &[(u64, u32)], |b| b);
        let tgt_len = buckets.get(&(u + 1)).map_or(0, |b| b.len());
        let mut m = SparseIntMat::new(tgt_len, src.len());
        if tgt_len == 0 {
            return m;
        }
        for (ci, &(v, xmask)) in src.iter().enumerate() {
            let r = res_of(v);
            for i in 0..cube.n() {
                if v >> i & 1 == 1 {
                    continue;
                }
                let w = v | (1 << i);
                let tr = res_of(w);
                let sign = edge_sign(v, i);
                for (txm, coef) in cube.edge_terms(i, &r, &tr, xmask) {
                    let row = pos[&(w, txm)];
                    m.push(row, ci, sign * coef);
                }
            }
        }
        m
    };

    let mut out = Vec::new();
    for (&u, gens) in &buckets {
        let dim = gens.len();
        let outgoing = block(u);
        let incoming = block(u - 1);
        let (rank_out, rank_in, torsion) = match coeffs {
            Coeffs::Q => (outgoing.rank_q(), incoming.rank_q(), Vec::new()),
            Coeffs::Zp(p) => (outgoing.rank_mod_p(p), incoming.rank_mod_p(p), Vec::new()),
            Coeffs::Z => {
                let (div_in, rank_in) = smith_normal_form(&incoming);
                let torsion: Vec<num_bigint::BigInt> = div_in
                    .into_iter()
                    .filter(|d| *d > num_bigint::BigInt::from(1))
                    .collect();
                (outgoing.rank_q(), rank_in, torsion)
            }
        };
        let free = dim - rank_out - rank_in;
        if free > 0 || !torsion.is_empty() {
            out.push((u, q, free, torsion));
        }
    }
    Ok(out)
}

/// Iterator over c-bit masks with exactly k bits set, ascending (Gosper).
struct KSubsets {
    cur: Option<u32>,
    limit: u32,
}

impl KSubsets {
    fn new(c: u32, k: u32) -> KSubsets {
        debug_assert!(k <= c && c < 31);
        KSubsets {
            cur: Some(if k == 0 { 0 } else { (1 << k) - 1 }),
            limit: 1 << c,
        }
    }
}

impl Iterator for KSubsets {
    type Item = u32;
    fn next(&mut self) -> Option<u32> {
        let v = self.cur?;
        if v >= self.limit {
            self.cur = None;
            return None;
        }
        self.cur = if v == 0 {
            Some(self.limit) // the single empty subset
        } else {
            let c = v & v.wrapping_neg();
            let r = v + c;
            Some(r | (((v ^ r) >> 2) / c))
        };
        Some(v)
    }
}

/// Streamed exact Morse reduction of the Lee complex.
///
/// The cube is processed one homological level at a time: cancelling a
/// +-1-coefficient q-preserving entry only rewires entries inside the same
/// (u, u+1) block, because the differential connects adjacent levels only
/// (sources one level down have no component on the cancelled target, so
/// their entries into the cancelled source drop without correction). Peak
/// memory is therefore a single block; the surviving complex is small and
/// handed to the rational filtered reduction.
fn lee_reduced_complex(cube: &Cube) -> Result<BigradedComplex> {
    debug_assert!(cube.lee && !cube.reduced);
    let n = cube.n();
    let nv: u64 = 1 << n;

    // generators of one homological level, with their q-gradings
    struct Level {
        gens: Vec<(u64, u32, i64)>,
        pos: HashMap<(u64, u32), u32>,
        alive: Vec<bool>,
    }
    let build_level = |u: i64| -> Level {
        let mut gens = Vec::new();
        for v in 0..nv {
            if cube.u_of(v) != u {
                continue;
            }
            let r = cube.resolve(v);
            let qb = cube.q_base(v);
            for xmask in 0..(1u32 << r.count) {
                let q = r.count as i64 - 2 * i64::from(xmask.count_ones()) + qb;
                gens.push((v, xmask, q));
            }
        }
        let pos = gens
            .iter()
            .enumerate()
            .map(|(i, &(v, x, _))| ((v, x), i as u32))
            .collect();
        let alive = vec![true; gens.len()];
        Level { gens, pos, alive }
    };

    let u_lo = -cube.n_minus;
    let u_hi = n as i64 - cube.n_minus;
    // per finished level: q of every raw generator and its final alive flag
    let mut done: BTreeMap<i64, (Vec<i64>, Vec<bool>)> = BTreeMap::new();
    // surviving columns in raw local ids, resolved once every level is final
    let mut kept: Vec<(i64, u32, Vec<(u32, i64)>)> = Vec::new();

    let mut cur = build_level(u_lo);
    for u in u_lo..=u_hi {
        let next = if u < u_hi {
            build_level(u + 1)
        } else {
            Level {
                gens: Vec::new(),
                pos: HashMap::new(),
                alive: Vec::new(),
            }
        };
        // assemble the (u, u+1) block over the still-alive sources
        let mut cols: Vec<HashMap<u32, i64>> = vec![HashMap::new(); cur.gens.len()];
        let mut rows: Vec<Vec<u32>> = vec![Vec::new(); next.gens.len()];
        let mut heap: BinaryHeap<Reverse<(u64, u32, u32)>> = BinaryHeap::new();
        let mut ci = 0usize;
        for v in 0..nv {
            if cube.u_of(v) != u {
                continue;
            }
            let r = cube.resolve(v);
            let edges: Vec<(usize, u64, Resolution, i64)> = (0..n)
                .filter(|&i| v >> i & 1 == 0)
                .map(|i| {
                    let w = v | (1 << i);
                    (i, w, cube.resolve(w), edge_sign(v, i))
                })
                .collect();
            for xmask in 0..(1u32 << r.count) {
                debug_assert_eq!(cur.gens[ci], (v, xmask, cur.gens[ci].2));
                let me = ci;
                ci += 1;
                if !cur.alive[me] {
                    continue;
                }
                let q = cur.gens[me].2;
                for (i, w, tr, sign) in &edges {
                    for (txm, coef) in cube.edge_terms(*i, &r, tr, xmask) {
                        let row = next.pos[&(*w, txm)];
                        let e = cols[me].entry(row).or_insert(0);
                        *e += sign * coef;
                        if *e == 0 {
                            cols[me].remove(&row);
                        }
                    }
                }
                for (&row, &val) in &cols[me] {
                    rows[row as usize].push(me as u32);
                    if val.abs() == 1 && next.gens[row as usize].2 == q {
                        heap.push(Reverse((0, me as u32, row)));
                    }
                }
            }
        }
        debug_assert_eq!(ci, cur.gens.len());
        let score = |cols: &[HashMap<u32, i64>], rows: &[Vec<u32>], i: u32, j: u32| -> u64 {
            let cn = cols[i as usize].len().saturating_sub(1) as u64;
            let rn = rows[j as usize].len().saturating_sub(1) as u64;
            cn * rn
        };
        // cancel unit q-preserving entries until none remain
        let mut next_alive = next.alive.clone();
        let mut cur_alive = cur.alive.clone();
        while let Some(Reverse((sc, i, j))) = heap.pop() {
            let (iu, ju) = (i as usize, j as usize);
            if !cur_alive[iu] || !next_alive[ju] {
                continue;
            }
            let Some(&c) = cols[iu].get(&j) else { continue };
            if c.abs() != 1 || cur.gens[iu].2 != next.gens[ju].2 {
                continue;
            }
            let now = score(&cols, &rows, i, j);
            if now != sc {
                heap.push(Reverse((now, i, j)));
                continue;
            }
            // cancel (i, j): d'(x) = d(x) - (d(x)_j / c) d(i)
            cur_alive[iu] = false;
            next_alive[ju] = false;
            let pivot: Vec<(u32, i64)> = cols[iu].drain().collect();
            let srcs: Vec<u32> = std::mem::take(&mut rows[ju]);
            for x in srcs {
                let xu = x as usize;
                if !cur_alive[xu] {
                    continue;
                }
                let Some(cx) = cols[xu].remove(&j) else {
                    continue;
                };
                let factor = cx.checked_mul(c).ok_or_else(overflow_err)?;
                for &(k, v) in &pivot {
                    if k == j {
                        continue;
                    }
                    let delta = factor.checked_mul(v).ok_or_else(overflow_err)?;
                    let e = cols[xu].entry(k).or_insert(0);
                    let fresh = *e == 0;
                    *e = e.checked_sub(delta).ok_or_else(overflow_err)?;
                    if *e == 0 {
                        cols[xu].remove(&k);
                    } else {
                        if fresh {
                            rows[k as usize].push(x);
                        }
                        if e.abs() == 1 && cur.gens[xu].2 == next.gens[k as usize].2 {
                            heap.push(Reverse((score(&cols, &rows, x, k), x, k)));
                        }
                    }
                }
            }
        }
        // emit the surviving columns of this block; targets cancelled in the
        // next block are dropped at assembly (their sources sit two levels
        // below the cancelling pivot, so no correction is ever owed)
        for (me, col) in cols.iter().enumerate() {
            if !cur_alive[me] || col.is_empty() {
                continue;
            }
            let mut entries: Vec<(u32, i64)> = col.iter().map(|(&j, &v)| (j, v)).collect();
            entries.sort_by_key(|e| e.0);
            kept.push((u, me as u32, entries));
        }
        done.insert(u, (cur.gens.iter().map(|g| g.2).collect(), cur_alive));
        let mut nx = next;
        nx.alive = next_alive;
        cur = nx;
    }

    // assemble the reduced complex over the final alive sets
    let mut offsets: BTreeMap<i64, usize> = BTreeMap::new();
    let mut remap: BTreeMap<i64, Vec<u32>> = BTreeMap::new();
    let mut gens: Vec<GradedGenerator> = Vec::new();
    for (&u, (qs, alive)) in &done {
        offsets.insert(u, gens.len());
        let mut rm = vec![u32::MAX; qs.len()];
        let mut live = 0u32;
        for (i, (&q, &a)) in qs.iter().zip(alive).enumerate() {
            if a {
                rm[i] = live;
                live += 1;
                gens.push(GradedGenerator { u: -u, f: -q });
            }
        }
        remap.insert(u, rm);
    }
    let mut diff: Vec<Vec<(usize, i64)>> = vec![Vec::new(); gens.len()];
    for (u, src, entries) in kept {
        let sc = remap[&u][src as usize];
        debug_assert_ne!(sc, u32::MAX);
        let tbase = offsets[&(u + 1)];
        let rm = &remap[&(u + 1)];
        let col: Vec<(usize, i64)> = entries
            .into_iter()
            .filter_map(|(j, v)| {
                let t = rm[j as usize];
                (t != u32::MAX).then_some((tbase + t as usize, v))
            })
            .collect();
        diff[offsets[&u] + sc as usize] = col;
    }
    BigradedComplex::new(gens, diff)
}

fn overflow_err() -> Error {
    Error::Invariant(InvariantError::Internal(
        "integer overflow during Lee reduction".into(),
    ))
}

/// The s-invariant: average q of the two rational Lee survivors.
pub fn s_invariant(d: &PlanarDiagram) -> Result<i64> {
    if d.components() != 1 {
        return Err(Error::Input(InputError::NotAKnot {
            components: d.components(),
        }));
    }
    let cube = Cube::new(d, false, None, Deformation::Lee)?;
    let reduced = lee_reduced_complex(&cube)?;
    let (_, pages) = filtered_reduce_q(&reduced);
    let survivors = &pages.survivors;
    if survivors.len() != 2 {
        return Err(Error::Invariant(InvariantError::SurvivorCount {
            found: survivors.len(),
            expected: 2,
        }));
    }
    let qs: Vec<i64> = survivors.iter().map(|&(_, f)| -f).collect();
    for &(u, _) in survivors {
        if u != 0 {
            return Err(Error::Invariant(InvariantError::Internal(format!(
                "Lee survivor in homological degree {}",
                -u
            ))));
        }
    }
    if (qs[0] - qs[1]).abs() != 2 {
        return Err(Error::Invariant(InvariantError::Internal(format!(
            "Lee survivor q-gradings {} and {} do not differ by 2",
            qs[0], qs[1]
        ))));
    }
    Ok((qs[0] + qs[1]) / 2)
}

/// Regroup a Khovanov table's free ranks by delta = q - 2u. All deltas of a
/// single table share one parity (odd for unreduced knot homology, even for
/// reduced); mixed parity signals a grading bug.
pub fn delta_view(table: &HomologyTable) -> Result<BTreeMap<i64, usize>> {
    let buckets = table.delta_buckets(2);
    let mut parities = buckets.keys().map(|d| d.rem_euclid(2));
    if let Some(p0) = parities.next() {
        if parities.any(|p| p != p0) {
            return Err(Error::Invariant(InvariantError::ParityViolation(
                "mixed delta parity in Khovanov table".into(),
            )));
        }
    }
    Ok(buckets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::homology;
    use crate::diagram;
    use crate::invariants::{jones, Normalization};
    use num_bigint::BigInt;

    fn poly(t: &HomologyTable) -> String {
        t.poincare_polynomial("q", "u").render(false)
    }

    fn kh(d: &PlanarDiagram, coeffs: Coeffs) -> HomologyTable {
        khovanov_homology(d, false, coeffs).unwrap()
    }

    fn khr(d: &PlanarDiagram, coeffs: Coeffs) -> HomologyTable {
        khovanov_homology(d, true, coeffs).unwrap()
    }

    #[test]
    fn zero_crossing_unknot() {
        let u = diagram::unknot_zero();
        let kc = khovanov_complex(&u, false, None, Deformation::None).unwrap();
        assert_eq!(kc.len(), 2);
        let mut gr: Vec<(i64, i64)> = (0..2).map(|i| kc.kh_grading(i)).collect();
        gr.sort();
        assert_eq!(gr, vec![(0, -1), (0, 1)]);
        assert_eq!(poly(&kh(&u, Coeffs::Q)), "q^-1 + q");
        assert_eq!(poly(&khr(&u, Coeffs::Q)), "1");
    }

    #[test]
    fn trefoil_rational() {
        let t = diagram::right_trefoil();
        assert_eq!(poly(&kh(&t, Coeffs::Q)), "q + q^3 + q^5u^2 + q^9u^3");
    }

    #[test]
    fn trefoil_mod_two() {
        let t = diagram::right_trefoil();
        assert_eq!(
            poly(&kh(&t, Coeffs::Zp(2))),
            "q + q^3 + q^5u^2 + q^7u^2 + q^7u^3 + q^9u^3"
        );
    }

    #[test]
    fn trefoil_integral_torsion() {
        let t = diagram::right_trefoil();
        let h = kh(&t, Coeffs::Z);
        assert_eq!(h.rank(0, 1), 1);
        assert_eq!(h.rank(0, 3), 1);
        assert_eq!(h.rank(2, 5), 1);
        assert_eq!(h.rank(3, 9), 1);
        assert_eq!(h.total_rank(), 4);
        assert_eq!(h.torsion(3, 7), &[BigInt::from(2)]);
        assert_eq!(h.torsion_positions(2), vec![(3, 7)]);
    }

    #[test]
    fn hopf_link_rational() {
        let h = diagram::hopf_positive();
        assert_eq!(poly(&kh(&h, Coeffs::Q)), "1 + q^2 + q^4u^2 + q^6u^2");
    }

    #[test]
    fn reduced_trefoil() {
        let t = diagram::right_trefoil();
        assert_eq!(poly(&khr(&t, Coeffs::Q)), "q^2 + q^6u^2 + q^8u^3");
        let dv = delta_view(&khr(&t, Coeffs::Q)).unwrap();
        assert_eq!(dv, BTreeMap::from([(2, 3)]));
    }

    #[test]
    fn delta_parities() {
        let t = diagram::right_trefoil();
        let dv = delta_view(&kh(&t, Coeffs::Q)).unwrap();
        assert!(dv.keys().all(|d| d.rem_euclid(2) == 1));
        let mut bad = HomologyTable::default();
        bad.insert(0, 0, 1, Vec::new());
        bad.insert(0, 1, 1, Vec::new());
        assert!(delta_view(&bad).is_err());
    }

    #[test]
    fn euler_characteristic_is_jones() {
        for d in [
            diagram::unknot_zero(),
            diagram::unknot_kink(),
            diagram::right_trefoil(),
            diagram::left_trefoil(),
            diagram::figure_eight(),
            diagram::hopf_positive(),
            diagram::trefoil_with_kink(),
        ] {
            let unred = kh(&d, Coeffs::Q).euler_characteristic("q");
            assert_eq!(unred, jones(&d, Normalization::Unreduced), "unreduced");
            let red = khr(&d, Coeffs::Q).euler_characteristic("q");
            assert_eq!(red, jones(&d, Normalization::Reduced), "reduced");
        }
    }

    #[test]
    fn mirror_duality_over_fields() {
        for d in [diagram::right_trefoil(), diagram::figure_eight()] {
            let m = d.mirror();
            for coeffs in [Coeffs::Q, Coeffs::Zp(2), Coeffs::Zp(3)] {
                let h = kh(&d, coeffs);
                let hm = kh(&m, coeffs);
                assert_eq!(h.entries.len(), hm.entries.len());
                for (&(u, q), &(rank, _)) in &h.entries {
                    assert_eq!(hm.rank(-u, -q), rank);
                }
            }
        }
    }

    #[test]
    fn mod_two_rank_doubling() {
        for d in [
            diagram::right_trefoil(),
            diagram::figure_eight(),
            diagram::hopf_positive(),
        ] {
            let unred = kh(&d, Coeffs::Zp(2));
            let red = khr(&d, Coeffs::Zp(2));
            assert_eq!(unred.total_rank(), 2 * red.total_rank());
            for (&(u, q), &(rank, _)) in &unred.entries {
                assert_eq!(rank, red.rank(u, q - 1) + red.rank(u, q + 1), "at ({u},{q})");
            }
        }
    }

    #[test]
    fn invariance_under_kink() {
        let a = diagram::right_trefoil();
        let b = diagram::trefoil_with_kink();
        for coeffs in [Coeffs::Q, Coeffs::Zp(2), Coeffs::Z] {
            assert_eq!(kh(&a, coeffs).entries, kh(&b, coeffs).entries);
        }
    }

    #[test]
    fn column_path_matches_materialized() {
        for d in [diagram::right_trefoil(), diagram::figure_eight()] {
            let kc = khovanov_complex(&d, false, None, Deformation::None).unwrap();
            for coeffs in [Coeffs::Q, Coeffs::Zp(2), Coeffs::Z] {
                let negated = homology(kc.complex(), coeffs).unwrap();
                let column = kh(&d, coeffs);
                let mut from_complex = HomologyTable::default();
                for (&(u, f), (rank, tor)) in &negated.entries {
                    from_complex.insert(-u, -f, *rank, tor.clone());
                }
                assert_eq!(column.entries, from_complex.entries);
            }
        }
    }

    #[test]
    fn lee_trefoil_single_higher_arrow() {
        let t = diagram::right_trefoil();
        let kc = khovanov_complex(&t, false, None, Deformation::Lee).unwrap();
        let (model, pages) = filtered_reduce_q(kc.complex());
        // E2 equals rational Khovanov homology
        let e2 = &pages.pages[1];
        let expect = [(0i64, 1i64), (0, 3), (2, 5), (3, 9)];
        assert_eq!(e2.total_rank(), 4);
        for &(u, q) in &expect {
            assert_eq!(e2.rank(-u, -q), 1, "E2 at ({u},{q})");
        }
        // exactly one arrow beyond the q-preserving layer: (u,q) (2,5) -> (3,9)
        assert_eq!(model.gens.len(), 4);
        let arrows: Vec<((i64, i64), (i64, i64))> = model
            .d
            .iter()
            .enumerate()
            .flat_map(|(i, col)| {
                col.iter().map(move |&(j, _)| (i, j)).collect::<Vec<_>>()
            })
            .map(|(i, j)| {
                let g = model.gens[i];
                let h = model.gens[j];
                ((-g.u, -g.f), (-h.u, -h.f))
            })
            .collect();
        assert_eq!(arrows, vec![((2, 5), (3, 9))]);
        // two survivors at q = s -+ 1
        assert_eq!(pages.last().total_rank(), 2);
    }

    #[test]
    fn lee_rank_two_per_component() {
        for (d, expect) in [
            (diagram::right_trefoil(), 2usize),
            (diagram::figure_eight(), 2),
            (diagram::hopf_positive(), 4),
        ] {
            let kc = khovanov_complex(&d, false, None, Deformation::Lee).unwrap();
            let (_, pages) = filtered_reduce_q(kc.complex());
            assert_eq!(pages.total_surviving_rank(), expect);
        }
    }

    #[test]
    fn s_invariant_small_knots() {
        assert_eq!(s_invariant(&diagram::unknot_zero()).unwrap(), 0);
        assert_eq!(s_invariant(&diagram::unknot_kink()).unwrap(), 0);
        assert_eq!(s_invariant(&diagram::right_trefoil()).unwrap(), 2);
        assert_eq!(s_invariant(&diagram::left_trefoil()).unwrap(), -2);
        assert_eq!(s_invariant(&diagram::figure_eight()).unwrap(), 0);
        assert!(s_invariant(&diagram::hopf_positive()).is_err());
    }

    /// The streamed Morse reduction and the fully materialized Lee complex
    /// must have identical stable survivors.
    #[test]
    fn streamed_lee_matches_materialized() {
        for d in [
            diagram::unknot_zero(),
            diagram::unknot_kink(),
            diagram::trefoil_with_kink(),
            diagram::right_trefoil(),
            diagram::left_trefoil(),
            diagram::figure_eight(),
            diagram::hopf_positive(),
            diagram::torus_diagram(2, 5).unwrap(),
            diagram::torus_diagram(3, 4).unwrap(),
        ] {
            let cube = Cube::new(&d, false, None, Deformation::Lee).unwrap();
            let reduced = lee_reduced_complex(&cube).unwrap();
            let (_, fast) = filtered_reduce_q(&reduced);
            let kc = khovanov_complex(&d, false, None, Deformation::Lee).unwrap();
            let (_, full) = filtered_reduce_q(kc.complex());
            assert_eq!(fast.survivors, full.survivors);
        }
    }

    #[test]
    fn reduced_needs_valid_marked_arc() {
        let t = diagram::right_trefoil();
        assert!(khovanov_complex(&t, true, None, Deformation::None).is_err());
        assert!(khovanov_complex(&t, true, Some(999), Deformation::None).is_err());
        assert!(khovanov_complex(&t, true, Some(1), Deformation::Lee).is_err());
        assert!(khovanov_complex(&t, true, Some(1), Deformation::None).is_ok());
    }

    #[test]
    fn ksubsets_enumeration() {
        let all: Vec<u32> = KSubsets::new(4, 2).collect();
        assert_eq!(all, vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
        assert_eq!(KSubsets::new(3, 0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(KSubsets::new(3, 3).collect::<Vec<_>>(), vec![0b111]);
    }
}
