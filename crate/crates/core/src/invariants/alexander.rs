use crate::algebra::Laurent;
use crate::diagram::PlanarDiagram;
use crate::error::{Error, InputError, InvariantError, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use std::collections::BTreeMap;

/// Alexander polynomial of a knot via Fox calculus on the Wirtinger
/// presentation, symmetrized and normalized so Delta(1) = 1.
pub fn alexander_fox(d: &PlanarDiagram) -> Result<Laurent> {
    if d.components() != 1 {
        return Err(Error::Input(InputError::NotAKnot {
            components: d.components(),
        }));
    }
    let n = d.len();
    if n == 0 {
        return Ok(Laurent::one(&["t"]));
    }

    // Wirtinger generators: arcs merged where they pass over a crossing
    let mut arc_idx: BTreeMap<usize, usize> = BTreeMap::new();
    for t in d.crossings() {
        for &lab in &t.labels() {
            let next = arc_idx.len();
            arc_idx.entry(lab).or_insert(next);
        }
    }
    let mut parent: Vec<usize> = (0..arc_idx.len()).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for t in d.crossings() {
        let [_, b, _, dd] = t.labels();
        let (rb, rd) = (
            root(&mut parent, arc_idx[&b]),
            root(&mut parent, arc_idx[&dd]),
        );
        if rb != rd {
            parent[rb.max(rd)] = rb.min(rd);
        }
    }
    let mut gen_index: BTreeMap<usize, usize> = BTreeMap::new();
    for i in 0..parent.len() {
        let r = root(&mut parent, i);
        let next = gen_index.len();
        gen_index.entry(r).or_insert(next);
    }
    if gen_index.len() != n {
        return Err(Error::Invariant(InvariantError::Internal(format!(
            "Wirtinger presentation has {} generators for {n} crossings",
            gen_index.len()
        ))));
    }

    // Fox derivative matrix; negative-crossing rows are multiplied through
    // by t to stay in Z[t] (changes the determinant by a unit only).
    let mono = |e: i64, c: i64| Laurent::monomial(&["t"], &[e], c);
    let mut rows: Vec<Vec<Laurent>> = vec![vec![Laurent::zero(&["t"]); n]; n];
    for (i, t) in d.crossings().iter().enumerate() {
        let [a, b, c, _] = t.labels();
        let mut gen_of = |lab: usize| gen_index[&root(&mut parent, arc_idx[&lab])];
        let (ga, gc, go) = (gen_of(a), gen_of(c), gen_of(b));
        let row = &mut rows[i];
        if d.sign(i) > 0 {
            // x_c = x_o x_a x_o^-1: d/do = 1 - t, d/da = t, d/dc = -1
            row[go] = &row[go] + &(&mono(0, 1) - &mono(1, 1));
            row[ga] = &row[ga] + &mono(1, 1);
            row[gc] = &row[gc] + &mono(0, -1);
        } else {
            // x_c = x_o^-1 x_a x_o, times t: d/do = t - 1, d/da = 1, d/dc = -t
            row[go] = &row[go] + &(&mono(1, 1) - &mono(0, 1));
            row[ga] = &row[ga] + &mono(0, 1);
            row[gc] = &row[gc] + &mono(1, -1);
        }
    }

    // drop one relation (they are dependent) and one generator column
    let minor: Vec<Vec<Laurent>> = rows[..n - 1]
        .iter()
        .map(|r| r[..n - 1].to_vec())
        .collect();
    normalize_symmetric(bareiss_det(minor))
}

/// Fraction-free determinant over Z[t] (Bareiss), with row pivoting.
fn bareiss_det(mut m: Vec<Vec<Laurent>>) -> Laurent {
    let k = m.len();
    if k == 0 {
        return Laurent::one(&["t"]);
    }
    let mut prev = Laurent::one(&["t"]);
    let mut sign = false;
    for p in 0..k {
        let Some(piv) = (p..k).find(|&r| !m[r][p].is_zero()) else {
            return Laurent::zero(&["t"]);
        };
        if piv != p {
            m.swap(p, piv);
            sign = !sign;
        }
        for r in p + 1..k {
            for c in p + 1..k {
                let num = &(&m[p][p] * &m[r][c]) - &(&m[r][p] * &m[p][c]);
                m[r][c] = num.div_exact(&prev);
            }
            m[r][p] = Laurent::zero(&["t"]);
        }
        prev = m[p][p].clone();
    }
    let det = m[k - 1][k - 1].clone();
    if sign {
        det.neg()
    } else {
        det
    }
}

/// Scale by the unit +-t^k making the polynomial symmetric with value 1 at 1.
fn normalize_symmetric(det: Laurent) -> Result<Laurent> {
    if det.is_zero() {
        return Err(Error::Invariant(InvariantError::Normalization(
            "Alexander determinant vanished".into(),
        )));
    }
    let (lo, hi) = det.exp_range(0).unwrap();
    if (hi - lo) % 2 != 0 {
        return Err(Error::Invariant(InvariantError::Normalization(format!(
            "odd exponent span {lo}..{hi}"
        ))));
    }
    let centered = det.shift(&[-(lo + hi) / 2]);
    let terms: Vec<(i64, BigInt)> = centered.iter().map(|((e, _), c)| (e, c.clone())).collect();
    for (e, c) in &terms {
        if centered.coeff(&[-e]) != *c {
            return Err(Error::Invariant(InvariantError::Normalization(
                "determinant is not palindromic".into(),
            )));
        }
    }
    let v = centered.eval_sign(false);
    if v == BigInt::one() {
        Ok(centered)
    } else if v == -BigInt::one() {
        Ok(centered.neg())
    } else {
        Err(Error::Invariant(InvariantError::Normalization(format!(
            "value at 1 is {v}, expected a unit"
        ))))
    }
}

/// Closed-form Alexander polynomial of the (p, q) torus knot:
/// (t^{pq} - 1)(t - 1) / ((t^p - 1)(t^q - 1)), symmetrized.
pub fn torus_alexander(p: u64, q: u64) -> Result<Laurent> {
    if p < 2 || q < 2 {
        return Err(Error::Input(InputError::InvalidParameter(format!(
            "torus knot needs p, q >= 2, got ({p}, {q})"
        ))));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::Input(InputError::InvalidParameter(format!(
            "torus knot needs coprime parameters, got ({p}, {q})"
        ))));
    }
    let cyc = |k: u64| Laurent::from_terms(&["t"], vec![(vec![k as i64], 1), (vec![0], -1)]);
    let num = &cyc(p * q).div_exact(&cyc(p)) * &cyc(1);
    let shift = -((p as i64 - 1) * (q as i64 - 1) / 2);
    let out = num.div_exact(&cyc(q)).shift(&[shift]);
    debug_assert_eq!(out.eval_sign(false), BigInt::one());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram;

    #[test]
    fn unknot_trivial() {
        for u in [diagram::unknot_zero(), diagram::unknot_kink()] {
            assert_eq!(alexander_fox(&u).unwrap().render(false), "1");
        }
    }

    #[test]
    fn trefoil_both_hands() {
        let r = alexander_fox(&diagram::right_trefoil()).unwrap();
        assert_eq!(r.render(true), "t - 1 + t^-1");
        let l = alexander_fox(&diagram::left_trefoil()).unwrap();
        assert_eq!(l, r);
    }

    #[test]
    fn figure_eight() {
        let p = alexander_fox(&diagram::figure_eight()).unwrap();
        assert_eq!(p.render(true), "-t + 3 - t^-1");
    }

    #[test]
    fn kinked_diagram_agrees() {
        assert_eq!(
            alexander_fox(&diagram::trefoil_with_kink()).unwrap(),
            alexander_fox(&diagram::right_trefoil()).unwrap()
        );
    }

    #[test]
    fn links_rejected() {
        assert!(alexander_fox(&diagram::hopf_positive()).is_err());
    }

    #[test]
    fn torus_closed_form() {
        assert_eq!(torus_alexander(2, 3).unwrap().render(true), "t - 1 + t^-1");
        assert_eq!(
            torus_alexander(3, 4).unwrap().render(true),
            "t^3 - t^2 + 1 - t^-2 + t^-3"
        );
        assert_eq!(
            torus_alexander(4, 5).unwrap().render(true),
            "t^6 - t^5 + t^2 - 1 + t^-2 - t^-5 + t^-6"
        );
        assert!(torus_alexander(2, 4).is_err());
        assert!(torus_alexander(1, 3).is_err());
    }

    #[test]
    fn fox_matches_closed_form() {
        for (p, q) in [(2, 3), (3, 4), (2, 5)] {
            let d = diagram::torus_diagram(p as usize, q as usize).unwrap();
            assert_eq!(
                alexander_fox(&d).unwrap(),
                torus_alexander(p, q).unwrap(),
                "T({p},{q})"
            );
        }
    }

    #[test]
    fn pretzel_357_trivial_alexander() {
        let d = diagram::pretzel_diagram(-3, 5, 7).unwrap();
        let p = alexander_fox(&d).unwrap();
        assert_eq!(p.render(false), "1");
    }
}
