use crate::algebra::Laurent;
use crate::diagram::PlanarDiagram;
use num_bigint::BigInt;
use std::collections::BTreeMap;

/// Which Jones normalization to emit: the unreduced polynomial carries an
/// extra factor of (q + q^-1) and equals the graded Euler characteristic of
/// unreduced Khovanov homology; the reduced one matches the reduced theory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    Unreduced,
    Reduced,
}

/// Jones polynomial in the variable q via the Kauffman bracket state sum
/// with writhe correction.
pub fn jones(d: &PlanarDiagram, norm: Normalization) -> Laurent {
    let tuples: Vec<[usize; 4]> = d.crossings().iter().map(|c| c.labels()).collect();
    // a crossingless diagram is the unknot: one free circle
    let free = usize::from(tuples.is_empty());
    let sum = bracket_delta_powers(&tuples, free);
    let unreduced = writhe_correct_and_substitute(&sum, d.writhe());
    match norm {
        Normalization::Unreduced => unreduced,
        Normalization::Reduced => {
            let circle = Laurent::from_terms(&["q"], vec![(vec![1], 1), (vec![-1], 1)]);
            unreduced.div_exact(&circle)
        }
    }
}

/// Kauffman state sum in the bracket variable A, weighting each state by
/// delta^(circles) with delta = -A^2 - A^-2. (The classical bracket divides
/// by one circle; keeping the full power makes the unreduced Jones a plain
/// substitution and the unknot come out as q + q^-1.)
///
/// `free_circles` adds crossingless circles, used by the skein recursion.
pub(crate) fn bracket_delta_powers(tuples: &[[usize; 4]], free_circles: usize) -> Laurent {
    let n = tuples.len();
    assert!(n < usize::BITS as usize);
    let mut index: BTreeMap<usize, usize> = BTreeMap::new();
    for t in tuples {
        for &lab in t {
            let next = index.len();
            index.entry(lab).or_insert(next);
        }
    }
    let arcs = index.len();
    // counts[(a_exponent, circles)] = number of states
    let mut counts: BTreeMap<(i64, usize), u64> = BTreeMap::new();
    let mut parent: Vec<usize> = Vec::new();
    for mask in 0u64..(1u64 << n) {
        parent.clear();
        parent.extend(0..arcs);
        let mut circles = free_circles;
        let mut join = |parent: &mut Vec<usize>, a: usize, b: usize| {
            let (mut x, mut y) = (a, b);
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            while parent[y] != y {
                parent[y] = parent[parent[y]];
                y = parent[y];
            }
            if x == y {
                // joining a class to itself closes a circle
                circles += 1;
            } else {
                parent[x.max(y)] = x.min(y);
            }
        };
        for (i, t) in tuples.iter().enumerate() {
            let [a, b, c, dd] = t.map(|lab| index[&lab]);
            if mask >> i & 1 == 0 {
                // A-smoothing: join (a,b) and (c,d)
                join(&mut parent, a, b);
                join(&mut parent, c, dd);
            } else {
                // B-smoothing: join (a,d) and (b,c)
                join(&mut parent, a, dd);
                join(&mut parent, b, c);
            }
        }
        // every arc end is joined exactly once, so self-unions count circles
        let sigma = n as i64 - 2 * mask.count_ones() as i64;
        *counts.entry((sigma, circles)).or_insert(0) += 1;
    }
    let delta = Laurent::from_terms(&["A"], vec![(vec![2], -1), (vec![-2], -1)]);
    let max_c = counts.keys().map(|&(_, c)| c).max().unwrap_or(0);
    let mut delta_pow = vec![Laurent::one(&["A"])];
    for k in 1..=max_c {
        delta_pow.push(&delta_pow[k - 1] * &delta);
    }
    let mut out = Laurent::zero(&["A"]);
    for ((sigma, c), count) in counts {
        let term = delta_pow[c].shift(&[sigma]).scale(&BigInt::from(count));
        out = &out + &term;
    }
    out
}

/// Multiply by (-A^3)^(-w) and substitute q = -A^-2, i.e. map the A-monomial
/// c*A^k (k always even) to c*(-1)^(k/2) q^(-k/2).
fn writhe_correct_and_substitute(sum: &Laurent, writhe: i64) -> Laurent {
    let mut out = Laurent::zero(&["q"]);
    let w_sign = writhe.rem_euclid(2) == 1;
    for ((k, _), c) in sum.iter() {
        let k = k - 3 * writhe;
        assert!(k % 2 == 0, "bracket exponent parity broken");
        let h = k / 2;
        let mut coef = c.clone();
        if (h.rem_euclid(2) == 1) != w_sign {
            coef = -coef;
        }
        out.add_term(&[-h], coef);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram;

    fn j(d: &PlanarDiagram, norm: Normalization) -> String {
        jones(d, norm).render(false)
    }

    #[test]
    fn unknot_is_circle() {
        for u in [diagram::unknot_zero(), diagram::unknot_kink()] {
            assert_eq!(j(&u, Normalization::Unreduced), "q^-1 + q");
            assert_eq!(j(&u, Normalization::Reduced), "1");
        }
    }

    #[test]
    fn trefoils() {
        let r = diagram::right_trefoil();
        assert_eq!(j(&r, Normalization::Unreduced), "q + q^3 + q^5 - q^9");
        assert_eq!(j(&r, Normalization::Reduced), "q^2 + q^6 - q^8");
        let l = diagram::left_trefoil();
        assert_eq!(j(&l, Normalization::Unreduced), "-q^-9 + q^-5 + q^-3 + q^-1");
    }

    #[test]
    fn hopf_link() {
        let h = diagram::hopf_positive();
        assert_eq!(j(&h, Normalization::Unreduced), "1 + q^2 + q^4 + q^6");
        assert_eq!(j(&h, Normalization::Reduced), "q + q^5");
    }

    #[test]
    fn kink_invariance() {
        assert_eq!(
            jones(&diagram::right_trefoil(), Normalization::Unreduced),
            jones(&diagram::trefoil_with_kink(), Normalization::Unreduced)
        );
    }

    #[test]
    fn mirror_reverses_exponents() {
        let r = jones(&diagram::right_trefoil(), Normalization::Reduced);
        let l = jones(&diagram::left_trefoil(), Normalization::Reduced);
        for ((e, _), c) in r.iter() {
            assert_eq!(l.coeff(&[-e]), c.clone());
        }
    }

    #[test]
    fn skein_recursion_at_every_crossing() {
        // <D> = A <D_A> + A^-1 <D_B> at each crossing, on the delta^circles sum
        for d in [
            diagram::right_trefoil(),
            diagram::figure_eight(),
            diagram::hopf_positive(),
            diagram::trefoil_with_kink(),
        ] {
            let tuples: Vec<[usize; 4]> = d.crossings().iter().map(|c| c.labels()).collect();
            let whole = bracket_delta_powers(&tuples, 0);
            for i in 0..tuples.len() {
                let a_side = smooth(&tuples, i, false);
                let b_side = smooth(&tuples, i, true);
                let lhs = &a_side.shift(&[1]) + &b_side.shift(&[-1]);
                assert_eq!(whole, lhs, "skein fails at crossing {i}");
            }
        }
    }

    /// Bracket of the diagram with crossing `at` replaced by its A- or
    /// B-smoothing; merged arcs are renamed and closed circles counted.
    fn smooth(tuples: &[[usize; 4]], at: usize, b_side: bool) -> Laurent {
        let [a, b, c, d] = tuples[at];
        let pairs = if b_side { [(a, d), (b, c)] } else { [(a, b), (c, d)] };
        let mut free = 0;
        let mut rename: Vec<(usize, usize)> = Vec::new();
        let canon = |rename: &[(usize, usize)], mut x: usize| {
            loop {
                match rename.iter().find(|&&(from, _)| from == x) {
                    Some(&(_, to)) if to != x => x = to,
                    _ => return x,
                }
            }
        };
        for (u, v) in pairs {
            let (cu, cv) = (canon(&rename, u), canon(&rename, v));
            if cu == cv {
                free += 1;
            } else {
                rename.push((cu.max(cv), cu.min(cv)));
            }
        }
        let rest: Vec<[usize; 4]> = tuples
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != at)
            .map(|(_, t)| t.map(|x| canon(&rename, x)))
            .collect();
        bracket_delta_powers(&rest, free)
    }
}
