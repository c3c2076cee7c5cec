//! Classical knot invariants computed by routes independent of the homology
//! engines: Jones polynomial by the Kauffman bracket state sum, Alexander
//! polynomial by Fox calculus on the Wirtinger presentation, signature by
//! Goeritz matrices with the Gordon-Litherland correction, and determinant
//! by two of those routes cross-checked against each other. These serve as
//! oracles for Euler-characteristic identities of the homology theories.

mod alexander;
mod jones;
mod signature;

pub use alexander::{alexander_fox, torus_alexander};
pub use jones::{jones, Normalization};
pub use signature::signature;

use crate::diagram::PlanarDiagram;
use crate::error::{Error, InvariantError, Result};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Knot determinant `|Delta(-1)|`, cross-checked against `|V(-1)|` from the
/// reduced Jones polynomial (the two agree for knots).
pub fn determinant(d: &PlanarDiagram) -> Result<BigInt> {
    let alex = alexander_fox(d)?;
    let from_alex = alex.eval_sign(true).abs();

    let vr = jones(d, Normalization::Reduced);
    let mut from_jones = BigInt::zero();
    for ((e, _), c) in vr.iter() {
        if e.rem_euclid(2) != 0 {
            return Err(Error::Invariant(InvariantError::Internal(format!(
                "reduced Jones polynomial of a knot has odd exponent {e}"
            ))));
        }
        if (e / 2).rem_euclid(2) == 0 {
            from_jones += c;
        } else {
            from_jones -= c;
        }
    }
    let from_jones = from_jones.abs();

    if from_alex != from_jones {
        return Err(Error::Invariant(InvariantError::Internal(format!(
            "determinant mismatch: |Delta(-1)| = {from_alex}, |V(-1)| = {from_jones}"
        ))));
    }
    Ok(from_alex)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram;

    #[test]
    fn determinant_small_knots() {
        assert_eq!(determinant(&diagram::right_trefoil()).unwrap(), 3.into());
        assert_eq!(determinant(&diagram::left_trefoil()).unwrap(), 3.into());
        assert_eq!(determinant(&diagram::figure_eight()).unwrap(), 5.into());
        assert_eq!(determinant(&diagram::unknot_zero()).unwrap(), 1.into());
        assert_eq!(determinant(&diagram::unknot_kink()).unwrap(), 1.into());
        let t25 = diagram::torus_diagram(2, 5).unwrap();
        assert_eq!(determinant(&t25).unwrap(), 5.into());
    }

    #[test]
    fn determinant_rejects_links() {
        assert!(determinant(&diagram::hopf_positive()).is_err());
    }
}
