//! Exact-arithmetic p-adic lattices: ultrametric norms presented by
//! orthogonal frames, orthogonalization of lattice bases, norm invariants
//! (successive maxima, escape distance, the ladder of largest norms), and
//! solvers for the closest-vector and largest-vector problems, together
//! with brute-force oracles used for independent verification.
//!
//! All arithmetic is exact: scalars are arbitrary-precision rationals and
//! every norm value is an exact power p^e with rational exponent. Nothing
//! here rounds.

mod brute;
mod error;
mod gen;
mod lattice;
mod linalg;
mod norm;
mod rat;
mod solver;

pub use brute::{brute_cvp, brute_cvp_with_budget, brute_lambda2, DEFAULT_ORACLE_BUDGET};
pub use error::{Error, Result};
pub use gen::{gen_instance, mix_basis, scramble_ops, GeneratedInstance, WeightSpec};
pub use lattice::{
    ElementaryOp, FrameOrthogonalization, InvariantReport, LatticeBasis, DEFAULT_LADDER_LEN,
};
pub use linalg::{Matrix, Vector};
pub use norm::{norm_max, NormValue, NormedSpace};
pub use rat::{
    format_rat, in_zp, is_prime, p_power, parse_rat, rat, rat_frac, valuation, Rat, Valuation,
};
pub use solver::{cvp_with_frame, lvp_with_frame, orthogonalize_via_cvp, CvpSolution, LvpSolution};

#[cfg(test)]
pub(crate) mod testutil {
    use std::sync::Arc;

    use crate::lattice::LatticeBasis;
    use crate::linalg::Vector;
    use crate::norm::NormedSpace;

    /// The running example space: p = 2, identity frame on 4 coordinates,
    /// zero weights.
    pub fn standard4() -> Arc<NormedSpace> {
        Arc::new(NormedSpace::standard(2, 4).unwrap())
    }

    /// The running example lattice basis (1,0,0,0), (1,2,0,0), (2,8,16,16).
    pub fn example_basis(space: &Arc<NormedSpace>) -> LatticeBasis {
        LatticeBasis::new(
            space.clone(),
            vec![
                Vector::from_ints(&[1, 0, 0, 0]),
                Vector::from_ints(&[1, 2, 0, 0]),
                Vector::from_ints(&[2, 8, 16, 16]),
            ],
        )
        .unwrap()
    }
}
