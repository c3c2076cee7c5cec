use crate::error::{Error, InputError, Result};

/// Parameters of the doubly pointed genus-1 diagram K(p, q, r, s):
/// p intersection points of alpha with beta, q rainbow strands nested on each
/// side, r middle-band strands, twist s. Constraints: 2q + r <= p, s < p.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OneOneParams {
    pub p: usize,
    pub q: usize,
    pub r: usize,
    pub s: usize,
}

impl OneOneParams {
    pub fn new(p: usize, q: usize, r: usize, s: usize) -> Result<Self> {
        if p == 0 {
            return Err(Error::Input(InputError::InvalidParameter(
                "p must be at least 1".into(),
            )));
        }
        if 2 * q + r > p {
            return Err(Error::Input(InputError::InvalidParameter(format!(
                "2q + r = {} exceeds p = {}",
                2 * q + r,
                p
            ))));
        }
        if s >= p {
            return Err(Error::Input(InputError::InvalidParameter(format!(
                "twist s = {s} must be smaller than p = {p}"
            ))));
        }
        Ok(OneOneParams { p, q, r, s })
    }
}

/// The arc leaving a point eastwards (into the square on its right).
/// Positions are 1-based left-edge roles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EastArc {
    /// nested rainbow returning to the same edge at the partner position
    Rainbow(usize),
    /// strand crossing the square to right-edge role c
    Cross(usize),
}

/// A validated K(p,q,r,s) diagram. Alpha is a single closed curve meeting
/// beta in p points with algebraic intersection number +-1.
///
/// Normal form: on each vertical line (a lift of beta) the p points are
/// numbered 1..p top-down. In the square east of a line, point a carries:
/// a left rainbow joining a <-> 2q+1-a for a <= 2q; a middle strand to
/// right-edge role a-2q for 2q < a <= 2q+r; a lower strand to right-edge
/// role a for a > 2q+r. Right-edge roles r+1..r+2q pair into the right
/// rainbow (r+j <-> 2q+r+1-j+r). The gluing twist identifies right-edge
/// role c with left-edge position c+s mod p of the next square.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneOneDiagram {
    params: OneOneParams,
    mirror: bool,
    east: Vec<EastArc>,
    /// points in the order alpha traverses them (left-edge positions 1..p)
    traversal: Vec<usize>,
    /// net beta-crossing sign of the traversal: +1 or -1
    intersection: i8,
}

impl OneOneDiagram {
    pub fn params(&self) -> OneOneParams {
        self.params
    }

    pub fn p(&self) -> usize {
        self.params.p
    }

    pub fn mirrored(&self) -> bool {
        self.mirror
    }

    /// Same diagram with the mirror flag toggled (swaps the basepoint roles).
    pub fn mirror(&self) -> Self {
        let mut d = self.clone();
        d.mirror = !d.mirror;
        d
    }

    /// East arc at left-edge position a (1-based).
    pub fn east_arc(&self, a: usize) -> EastArc {
        self.east[a - 1]
    }

    /// Points in alpha-traversal order, as left-edge positions.
    pub fn traversal(&self) -> &[usize] {
        &self.traversal
    }

    pub fn intersection_number(&self) -> i8 {
        self.intersection
    }
}

/// Build and validate the K(p,q,r,s) diagram: checks the parameter
/// constraints, that alpha closes into a single curve through all p points,
/// and that the algebraic intersection number with beta is +-1.
pub fn build_one_one(params: OneOneParams) -> Result<OneOneDiagram> {
    let OneOneParams { p, q, r, s } = params;
    let east: Vec<EastArc> = (1..=p)
        .map(|a| {
            if a <= 2 * q {
                EastArc::Rainbow(2 * q + 1 - a)
            } else if a <= 2 * q + r {
                EastArc::Cross(a - 2 * q)
            } else {
                EastArc::Cross(a)
            }
        })
        .collect();

    // walk alpha: state is (left-edge position 1..p, leaving east?).
    // crossing beta west->east counts +1, east->west counts -1.
    let west_partner = |c: usize| -> Option<usize> {
        // right rainbow pairs right-edge roles r+j and 2q+r+1-j+r
        if c > r && c <= r + 2 * q {
            Some(2 * q + 2 * r + 1 - c)
        } else {
            None
        }
    };
    let mut visited = vec![false; p + 1];
    let mut traversal = Vec::with_capacity(p);
    let mut net: i64 = 0;
    let mut pos: usize = 1;
    let mut leaving_east = true;
    let mut arcs = 0usize;
    loop {
        if leaving_east {
            // passing through the point west -> east
            if visited[pos] {
                break;
            }
            visited[pos] = true;
            traversal.push(pos);
            net += 1;
            match east[pos - 1] {
                EastArc::Rainbow(partner) => {
                    pos = partner;
                    leaving_east = false; // arrived from the east side
                }
                EastArc::Cross(c) => {
                    // lands on the next line as right-edge role c, i.e. at
                    // left-edge position c + s mod p; continue eastwards
                    pos = (c + s - 1) % p + 1;
                    leaving_east = true;
                    // the next step passes through that point west->east again
                }
            }
        } else {
            // we are at a point about to leave westwards: pass east -> west
            if visited[pos] {
                break;
            }
            visited[pos] = true;
            traversal.push(pos);
            net -= 1;
            // as a right-edge role of the square on the west side
            let c = (pos + p - 1 - s) % p + 1;
            if let Some(partner) = west_partner(c) {
                // right rainbow: both ends are right-edge roles of that square
                pos = (partner + s - 1) % p + 1;
                leaving_east = true;
            } else if c <= r {
                // middle strand westwards to left-edge position 2q + c
                pos = 2 * q + c;
                leaving_east = false;
            } else {
                // lower strand westwards to left-edge position c
                pos = c;
                leaving_east = false;
            }
        }
        arcs += 1;
        if arcs > 4 * p + 4 {
            break;
        }
    }

    let visited_count = visited.iter().filter(|&&v| v).count();
    if visited_count != p {
        return Err(Error::Input(InputError::NotAKnotDiagram(format!(
            "alpha closes after {visited_count} of {p} points (multiple curves)"
        ))));
    }
    if net.abs() != 1 {
        return Err(Error::Input(InputError::NotAKnotDiagram(format!(
            "algebraic intersection number is {net}, need +-1"
        ))));
    }

    Ok(OneOneDiagram {
        params,
        mirror: false,
        east,
        traversal,
        intersection: net as i8,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(p: usize, q: usize, r: usize, s: usize) -> Result<OneOneDiagram> {
        build_one_one(OneOneParams::new(p, q, r, s)?)
    }

    #[test]
    fn unknot_p1() {
        let d = build(1, 0, 1, 0).unwrap();
        assert_eq!(d.p(), 1);
        assert_eq!(d.intersection_number().abs(), 1);
    }

    #[test]
    fn table_parameters_validate() {
        let rows: [(usize, usize, usize, usize); 13] = [
            (11, 3, 3, 2),
            (13, 5, 1, 2),
            (13, 4, 3, 3),
            (13, 4, 4, 1),
            (15, 6, 2, 2),
            (15, 3, 4, 2),
            (15, 5, 4, 2),
            (15, 3, 8, 1),
            (15, 4, 5, 2),
            (15, 5, 3, 4),
            (17, 6, 2, 2),
            (17, 7, 2, 1),
            (17, 3, 4, 2),
        ];
        for (p, q, r, s) in rows {
            let d = build(p, q, r, s).unwrap_or_else(|e| panic!("K({p},{q},{r},{s}): {e:?}"));
            assert_eq!(d.traversal().len(), p);
        }
    }

    #[test]
    fn non_knot_parameters_rejected() {
        // alpha splits into several curves
        match build(17, 7, 1, 2) {
            Err(Error::Input(InputError::NotAKnotDiagram(_))) => {}
            other => panic!("unexpected {other:?}"),
        }
        // alpha is a single curve but winds 5 times around beta's dual
        match build(15, 5, 3, 2) {
            Err(Error::Input(InputError::NotAKnotDiagram(_))) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn constraint_violations() {
        assert!(OneOneParams::new(5, 2, 2, 1).is_err());
        assert!(OneOneParams::new(7, 2, 1, 7).is_err());
        assert!(OneOneParams::new(0, 0, 0, 0).is_err());
    }

    #[test]
    fn multi_curve_rejected() {
        // p = 2 can never give a knot: alpha . beta would be even
        match build(2, 0, 2, 0) {
            Err(Error::Input(InputError::NotAKnotDiagram(_))) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn mirror_toggles() {
        let d = build(11, 3, 3, 2).unwrap();
        assert!(!d.mirrored());
        assert!(d.mirror().mirrored());
        assert_eq!(d.mirror().mirror(), d);
    }
}
