use crate::diagram::PlanarDiagram;
use crate::error::{Error, InputError, InvariantError, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, HashMap};

// Goeritz/Gordon-Litherland convention bits, calibrated once against the
// positive-trefoil anchor (sigma = +2) plus T(2,5), T(3,4) and the figure
// eight, then frozen. See `calibration_anchors` below.
const ETA_WHITE_ON_EVEN: i64 = -1;
const TYPE_II_ON_WHITE: bool = false;
const GLOBAL_SIGN: i64 = 1;

/// Knot signature via the Goeritz matrix of a checkerboard surface with the
/// Gordon-Litherland correction term. Computed from both checkerboard
/// colorings and cross-checked; positive knots come out positive.
pub fn signature(d: &PlanarDiagram) -> Result<i64> {
    if d.components() != 1 {
        return Err(Error::Input(InputError::NotAKnot {
            components: d.components(),
        }));
    }
    if d.is_empty() {
        return Ok(0);
    }
    let f = Faces::build(d)?;
    let s0 = goeritz_signature(d, &f, 0, ETA_WHITE_ON_EVEN, TYPE_II_ON_WHITE);
    let s1 = goeritz_signature(d, &f, 1, ETA_WHITE_ON_EVEN, TYPE_II_ON_WHITE);
    if s0 != s1 {
        return Err(Error::Invariant(InvariantError::Internal(format!(
            "checkerboard surfaces disagree: {s0} vs {s1}"
        ))));
    }
    Ok(GLOBAL_SIGN * s0)
}

/// Face structure of the diagram's 4-valent shadow. Corner j of a crossing
/// is the quadrant between slots j and j+1 (mod 4).
struct Faces {
    /// face id for each (crossing, corner)
    corner_face: Vec<[usize; 4]>,
    /// checkerboard color (0/1) per face
    color: Vec<u8>,
}

impl Faces {
    fn build(d: &PlanarDiagram) -> Result<Faces> {
        let n = d.len();
        let mut ends: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for (x, t) in d.crossings().iter().enumerate() {
            for (s, &lab) in t.labels().iter().enumerate() {
                ends.entry(lab).or_default().push((x, s));
            }
        }
        // trace face orbits: from (x, s) travel the arc, then turn left
        let mut face_of_dart: HashMap<(usize, usize), usize> = HashMap::new();
        let mut nfaces = 0;
        for x in 0..n {
            for s in 0..4 {
                if face_of_dart.contains_key(&(x, s)) {
                    continue;
                }
                let id = nfaces;
                nfaces += 1;
                let (mut cx, mut cs) = (x, s);
                while face_of_dart.insert((cx, cs), id).is_none() {
                    let pair = &ends[&d.crossings()[cx].labels()[cs]];
                    let (y, u) = if pair[0] == (cx, cs) { pair[1] } else { pair[0] };
                    (cx, cs) = (y, (u + 1) % 4);
                }
            }
        }
        if nfaces != n + 2 {
            return Err(Error::Invariant(InvariantError::Internal(format!(
                "shadow has {nfaces} faces, expected {}",
                n + 2
            ))));
        }
        // corner j lies in the face of the dart leaving at slot j+1
        let corner_face: Vec<[usize; 4]> = (0..n)
            .map(|x| [0, 1, 2, 3].map(|j| face_of_dart[&(x, (j + 1) % 4)]))
            .collect();
        // two-color: adjacent corners around a crossing alternate
        let mut color: Vec<Option<u8>> = vec![None; nfaces];
        let mut queue = vec![(corner_face[0][0], 0u8)];
        while let Some((f, c)) = queue.pop() {
            match color[f] {
                Some(existing) if existing != c => {
                    return Err(Error::Invariant(InvariantError::Internal(
                        "shadow is not checkerboard colorable".into(),
                    )));
                }
                Some(_) => continue,
                None => color[f] = Some(c),
            }
            for x in 0..n {
                for j in 0..4 {
                    if corner_face[x][j] == f {
                        queue.push((corner_face[x][(j + 1) % 4], 1 - c));
                        queue.push((corner_face[x][(j + 3) % 4], 1 - c));
                    }
                }
            }
        }
        let color: Vec<u8> = color
            .into_iter()
            .map(|c| c.ok_or_else(|| {
                Error::Invariant(InvariantError::Internal("disconnected shadow".into()))
            }))
            .collect::<Result<_>>()?;
        Ok(Faces { corner_face, color })
    }
}

fn goeritz_signature(
    d: &PlanarDiagram,
    f: &Faces,
    white: u8,
    eta_on_even: i64,
    type_ii_on_white: bool,
) -> i64 {
    let nfaces = f.color.len();
    let whites: Vec<usize> = (0..nfaces).filter(|&i| f.color[i] == white).collect();
    let widx: HashMap<usize, usize> = whites.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let m = whites.len();
    let mut g = vec![vec![BigInt::zero(); m]; m];
    let mut mu = 0i64;
    for (x, corners) in f.corner_face.iter().enumerate() {
        // corners alternate colors; the white pair is {0,2} or {1,3}
        let white_on_even = f.color[corners[0]] == white;
        let eta = if white_on_even { eta_on_even } else { -eta_on_even };
        let base = if white_on_even { 0 } else { 1 };
        let (wf, wg) = (widx[&corners[base]], widx[&corners[base + 2]]);
        if wf != wg {
            g[wf][wg] -= eta;
            g[wg][wf] -= eta;
            g[wf][wf] += eta;
            g[wg][wg] += eta;
        }
        // the two incoming strands straddle corner 3 (over in at d) or 0
        let straddled = if d.over_in_at_d(x) { 3 } else { 0 };
        let straddled_white = f.color[corners[straddled]] == white;
        if straddled_white == type_ii_on_white {
            mu += eta;
        }
    }
    // delete the first white region and take the signature of the rest
    let reduced: Vec<Vec<BigRational>> = (1..m)
        .map(|i| {
            (1..m)
                .map(|j| BigRational::from_integer(g[i][j].clone()))
                .collect()
        })
        .collect();
    symmetric_signature(reduced) - mu
}

/// Signature of a symmetric rational matrix by congruence diagonalization.
fn symmetric_signature(mut m: Vec<Vec<BigRational>>) -> i64 {
    let n = m.len();
    let mut active: Vec<usize> = (0..n).collect();
    let mut sig = 0i64;
    'outer: while !active.is_empty() {
        // diagonal pivot if available
        if let Some(pos) = active.iter().position(|&i| !m[i][i].is_zero()) {
            let i = active.remove(pos);
            let piv = m[i][i].clone();
            sig += if piv.is_positive() { 1 } else { -1 };
            for &j in &active {
                let fj = &m[j][i] / &piv;
                if fj.is_zero() {
                    continue;
                }
                for &k in &active {
                    let sub = &fj * &m[i][k];
                    m[j][k] = &m[j][k] - &sub;
                }
            }
            for &j in &active {
                m[j][i] = BigRational::zero();
                m[i][j] = BigRational::zero();
            }
            continue;
        }
        // zero diagonal: make one nonzero by a row+column addition
        for ai in 0..active.len() {
            for aj in ai + 1..active.len() {
                let (i, j) = (active[ai], active[aj]);
                if !m[i][j].is_zero() {
                    for k in 0..n {
                        let add = m[j][k].clone();
                        m[i][k] = &m[i][k] + &add;
                    }
                    for k in 0..n {
                        let add = m[k][j].clone();
                        m[k][i] = &m[k][i] + &add;
                    }
                    continue 'outer;
                }
            }
        }
        break; // all remaining entries vanish
    }
    sig
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram;

    #[test]
    fn calibration_anchors() {
        assert_eq!(signature(&diagram::right_trefoil()).unwrap(), 2);
        assert_eq!(signature(&diagram::left_trefoil()).unwrap(), -2);
        assert_eq!(signature(&diagram::figure_eight()).unwrap(), 0);
        let t25 = diagram::torus_diagram(2, 5).unwrap();
        assert_eq!(signature(&t25).unwrap(), 4);
        let t34 = diagram::torus_diagram(3, 4).unwrap();
        assert_eq!(signature(&t34).unwrap(), 6);
    }

    #[test]
    fn unknot_and_kinks() {
        assert_eq!(signature(&diagram::unknot_zero()).unwrap(), 0);
        assert_eq!(signature(&diagram::unknot_kink()).unwrap(), 0);
        assert_eq!(signature(&diagram::trefoil_with_kink()).unwrap(), 2);
    }

    #[test]
    fn links_rejected() {
        assert!(signature(&diagram::hopf_positive()).is_err());
    }

    #[test]
    fn symmetric_signature_basics() {
        let q = |v: i64| BigRational::from_integer(BigInt::from(v));
        assert_eq!(symmetric_signature(vec![]), 0);
        assert_eq!(symmetric_signature(vec![vec![q(3)]]), 1);
        assert_eq!(
            symmetric_signature(vec![vec![q(0), q(2)], vec![q(2), q(0)]]),
            0
        );
        assert_eq!(
            symmetric_signature(vec![vec![q(-1), q(0)], vec![q(0), q(-2)]]),
            -2
        );
    }
}
