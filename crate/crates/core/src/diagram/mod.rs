//! Knot and link diagrams: planar diagrams in PD notation, braid-closure
//! generators for torus and pretzel families, and doubly pointed genus-1
//! diagrams for (1,1) knots.

mod gen;
mod one_one;
mod pd;

pub use gen::{pretzel_diagram, torus_braid_diagram};
pub use one_one::{build_one_one, EastArc, OneOneDiagram, OneOneParams};
pub use pd::{parse_pd, Crossing, PlanarDiagram};

use crate::error::Result;

fn from_tuples(tuples: &[[usize; 4]]) -> PlanarDiagram {
    PlanarDiagram::from_crossings(tuples).expect("bundled diagram is valid")
}

/// The 0-crossing unknot: a crossingless circle.
pub fn unknot_zero() -> PlanarDiagram {
    from_tuples(&[])
}

/// One-crossing diagram of the unknot (a single negative kink).
pub fn unknot_kink() -> PlanarDiagram {
    from_tuples(&[[1, 2, 2, 1]])
}

/// Right-handed trefoil, three positive crossings.
pub fn right_trefoil() -> PlanarDiagram {
    from_tuples(&[[1, 5, 2, 4], [3, 1, 4, 6], [5, 3, 6, 2]])
}

/// Left-handed trefoil, three negative crossings.
pub fn left_trefoil() -> PlanarDiagram {
    from_tuples(&[[1, 4, 2, 5], [3, 6, 4, 1], [5, 2, 6, 3]])
}

/// Figure-eight knot, writhe zero.
pub fn figure_eight() -> PlanarDiagram {
    from_tuples(&[[4, 2, 5, 1], [8, 6, 1, 5], [6, 3, 7, 4], [2, 7, 3, 8]])
}

/// Positively linked Hopf link, writhe +2.
pub fn hopf_positive() -> PlanarDiagram {
    from_tuples(&[[3, 1, 4, 2], [1, 3, 2, 4]])
}

/// Right trefoil with an extra negative kink: four crossings, writhe +2.
/// Isotopic to the trefoil, used to exercise invariance under stabilisation.
pub fn trefoil_with_kink() -> PlanarDiagram {
    from_tuples(&[[1, 5, 2, 4], [3, 1, 4, 6], [7, 3, 6, 2], [5, 8, 8, 7]])
}

/// Torus knot or link T(p, q) as the closure of (sigma_1 ... sigma_{p-1})^q.
pub fn torus_diagram(p: usize, q: usize) -> Result<PlanarDiagram> {
    torus_braid_diagram(p, q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_diagrams_validate() {
        assert_eq!(unknot_zero().len(), 0);
        assert_eq!(unknot_zero().components(), 1);
        assert_eq!(unknot_zero().writhe(), 0);
        assert_eq!(unknot_kink().len(), 1);
        assert_eq!(unknot_kink().writhe(), -1);
        assert_eq!(right_trefoil().writhe(), 3);
        assert_eq!(left_trefoil().writhe(), -3);
        assert_eq!(figure_eight().writhe(), 0);
        assert_eq!(hopf_positive().writhe(), 2);
        assert_eq!(hopf_positive().components(), 2);
        assert_eq!(trefoil_with_kink().writhe(), 2);
        assert_eq!(trefoil_with_kink().components(), 1);
    }

    #[test]
    fn torus_trefoil_matches() {
        let t23 = torus_diagram(2, 3).unwrap();
        assert_eq!(t23.writhe(), right_trefoil().writhe());
        assert_eq!(t23.components(), 1);
    }
}
