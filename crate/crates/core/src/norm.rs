//! Ultrametric norms presented by an orthogonal frame with weight exponents.
//!
//! A space is a prime `p`, a dimension `n`, an invertible frame matrix whose
//! rows e₁..eₙ are declared orthogonal, and rational weights w₁..wₙ with
//! N(eᵢ) = p^wᵢ. The norm of v = Σ aᵢeᵢ is maxᵢ |aᵢ|_p · p^wᵢ, which makes
//! every norm value either zero or an exact power p^e with rational e.

use num_traits::Zero;
use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::rat::{format_rat, is_prime, rat, valuation, Rat, Valuation};

/// A norm value: `Zero`, or `Exp(e)` denoting p^e. The exponent may be a
/// non-integer rational (ramified-type norms).
///
/// The derived order is the numeric one: `Zero` below everything, larger
/// exponents larger.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NormValue {
    Zero,
    Exp(Rat),
}

impl NormValue {
    pub fn exp(e: Rat) -> Self {
        NormValue::Exp(e)
    }

    /// p^k for integer k.
    pub fn exp_int(k: i64) -> Self {
        NormValue::Exp(rat(k))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, NormValue::Zero)
    }

    pub fn exponent(&self) -> Option<&Rat> {
        match self {
            NormValue::Zero => None,
            NormValue::Exp(e) => Some(e),
        }
    }

    /// The value of N(p^k · v) given N(v): multiplying by p^k scales a norm
    /// by |p^k|_p = p^(−k). Zero stays zero.
    pub fn scaled_by_p_power(&self, k: i64) -> NormValue {
        match self {
            NormValue::Zero => NormValue::Zero,
            NormValue::Exp(e) => NormValue::Exp(e - rat(k)),
        }
    }

    /// The value of N(x · v) given N(v), for rational x: scales by
    /// |x|_p = p^(−v_p(x)). Zero absorbs everything.
    pub fn scaled_by_abs(&self, v_of_x: Valuation) -> NormValue {
        match (self, v_of_x) {
            (NormValue::Zero, _) | (_, Valuation::Infinite) => NormValue::Zero,
            (NormValue::Exp(e), Valuation::Finite(v)) => NormValue::Exp(e - rat(v)),
        }
    }

    /// Canonical rendering: `0` or `p^e` with `e` in canonical rational form.
    pub fn display(&self, p: u64) -> String {
        match self {
            NormValue::Zero => "0".to_string(),
            NormValue::Exp(e) => format!("{p}^{}", format_rat(e)),
        }
    }
}

/// Max of two norm values (total order, so this is just `Ord::max`).
pub fn norm_max(a: NormValue, b: NormValue) -> NormValue {
    match a.cmp(&b) {
        Ordering::Less => b,
        _ => a,
    }
}

/// An n-dimensional Q_p vector space with a frame-presented ultrametric norm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormedSpace {
    p: u64,
    dim: usize,
    frame: Matrix,
    frame_inv: Matrix,
    weights: Vec<Rat>,
}

impl NormedSpace {
    /// Builds a space from a prime, an invertible frame (rows are the frame
    /// vectors), and one weight exponent per frame vector.
    pub fn new(p: u64, frame: Matrix, weights: Vec<Rat>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if !frame.is_square() {
            return Err(Error::InvalidParameter(format!(
                "frame must be square, got {}x{}",
                frame.num_rows(),
                frame.num_cols()
            )));
        }
        let dim = frame.num_cols();
        if weights.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: weights.len(),
            });
        }
        let frame_inv = frame.inverse().map_err(|e| match e {
            Error::SingularMatrix => Error::SingularFrame,
            other => other,
        })?;
        Ok(NormedSpace {
            p,
            dim,
            frame,
            frame_inv,
            weights,
        })
    }

    /// The standard space: identity frame, all weights zero, i.e. the
    /// max-of-|coordinates| norm on Q_pⁿ.
    pub fn standard(p: u64, dim: usize) -> Result<Self> {
        NormedSpace::new(p, Matrix::identity(dim), vec![Rat::zero(); dim])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn frame(&self) -> &Matrix {
        &self.frame
    }

    pub fn weights(&self) -> &[Rat] {
        &self.weights
    }

    /// Weight exponent of frame vector `j`.
    pub fn weight(&self, j: usize) -> &Rat {
        &self.weights[j]
    }

    fn check_dim(&self, v: &Vector) -> Result<()> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.dim(),
            });
        }
        Ok(())
    }

    /// Coordinates of `v` in the frame: the unique `a` with `a · frame = v`.
    pub fn frame_coordinates(&self, v: &Vector) -> Result<Vector> {
        self.check_dim(v)?;
        Ok(v.mul_matrix(&self.frame_inv))
    }

    /// Standard coordinates of a frame-coordinate row.
    pub fn from_frame_coordinates(&self, a: &Vector) -> Result<Vector> {
        self.check_dim(a)?;
        Ok(a.mul_matrix(&self.frame))
    }

    /// N(a·eⱼ) for a single frame coefficient: p^(wⱼ − v_p(a)).
    pub fn coefficient_norm(&self, j: usize, a: &Rat) -> NormValue {
        if a.is_zero() {
            return NormValue::Zero;
        }
        let v = valuation(self.p, a)
            .expect("p was validated at construction")
            .finite();
        NormValue::Exp(&self.weights[j] - rat(v))
    }

    /// Norm of a vector already expressed in frame coordinates.
    pub fn norm_of_frame_coordinates(&self, a: &Vector) -> Result<NormValue> {
        self.check_dim(a)?;
        let mut best = NormValue::Zero;
        for (j, aj) in a.entries().iter().enumerate() {
            best = norm_max(best, self.coefficient_norm(j, aj));
        }
        Ok(best)
    }

    /// Evaluates the norm of `v` (standard coordinates) exactly.
    pub fn norm(&self, v: &Vector) -> Result<NormValue> {
        let a = self.frame_coordinates(v)?;
        self.norm_of_frame_coordinates(&a)
    }

    /// Norm of a vector given by frame coefficients listed in permuted
    /// column order: the entry at position `pos` multiplies frame vector
    /// `col_at[pos]`. Shared by the pivoting algorithms, which physically
    /// permute their working columns.
    pub(crate) fn norm_of_permuted_coordinates(
        &self,
        entries: &[Rat],
        col_at: &[usize],
    ) -> NormValue {
        let mut best = NormValue::Zero;
        for (pos, x) in entries.iter().enumerate() {
            best = norm_max(best, self.coefficient_norm(col_at[pos], x));
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{p_power, rat_frac};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    /// The 4-dimensional space used throughout the examples: p = 2, identity
    /// frame, zero weights (the unramified max-coordinate norm).
    fn standard4() -> NormedSpace {
        NormedSpace::standard(2, 4).unwrap()
    }

    fn ramified2() -> NormedSpace {
        NormedSpace::new(
            2,
            Matrix::from_rows(vec![Vector::from_ints(&[1, 1]), Vector::from_ints(&[0, 1])])
                .unwrap(),
            vec![rat(0), rat_frac(1, 2)],
        )
        .unwrap()
    }

    #[test]
    fn construction_validates_inputs() {
        assert!(matches!(
            NormedSpace::standard(4, 2),
            Err(Error::NotPrime(4))
        ));
        let singular =
            Matrix::from_rows(vec![Vector::from_ints(&[1, 2]), Vector::from_ints(&[2, 4])])
                .unwrap();
        assert!(matches!(
            NormedSpace::new(3, singular, vec![rat(0), rat(0)]),
            Err(Error::SingularFrame)
        ));
        assert!(matches!(
            NormedSpace::new(3, Matrix::identity(2), vec![rat(0)]),
            Err(Error::DimensionMismatch {
                expected: 2,
                got: 1
            })
        ));
        // One-dimensional space over Q_3 and a ramified-type space both pass.
        NormedSpace::standard(3, 1).unwrap();
        ramified2();
    }

    #[test]
    fn norm_of_example_vectors() {
        let s = standard4();
        assert_eq!(
            s.norm(&Vector::from_ints(&[2, 8, 16, 16])).unwrap(),
            NormValue::exp_int(-1)
        );
        assert_eq!(
            s.norm(&Vector::from_ints(&[0, 8, 16, 16])).unwrap(),
            NormValue::exp_int(-3)
        );
        assert_eq!(s.norm(&Vector::zeros(4)).unwrap(), NormValue::Zero);
        assert_eq!(
            s.norm(&Vector::from_ints(&[1, 0, 0, 0])).unwrap(),
            NormValue::exp_int(0)
        );
    }

    #[test]
    fn norm_respects_dimension() {
        let s = standard4();
        assert!(matches!(
            s.norm(&Vector::from_ints(&[1, 2])),
            Err(Error::DimensionMismatch {
                expected: 4,
                got: 2
            })
        ));
    }

    #[test]
    fn ramified_norms_take_fractional_exponents() {
        let s = ramified2();
        // Second frame vector alone: norm 2^(1/2).
        let e2 = Vector::from_ints(&[0, 1]);
        assert_eq!(s.norm(&e2).unwrap(), NormValue::exp(rat_frac(1, 2)));
        // (1, 1) is the first frame vector: norm 2^0 = 1.
        assert_eq!(
            s.norm(&Vector::from_ints(&[1, 1])).unwrap(),
            NormValue::exp_int(0)
        );
    }

    #[test]
    fn norm_value_order_and_display() {
        assert!(NormValue::Zero < NormValue::exp_int(-10));
        assert!(NormValue::exp_int(-1) < NormValue::exp_int(0));
        assert!(NormValue::exp(rat_frac(-1, 2)) < NormValue::exp_int(0));
        assert_eq!(NormValue::exp_int(-1).display(2), "2^-1");
        assert_eq!(NormValue::exp(rat_frac(-3, 2)).display(2), "2^-3/2");
        assert_eq!(NormValue::Zero.display(5), "0");
    }

    #[test]
    fn scaling_shifts_exponents() {
        assert_eq!(
            NormValue::exp_int(0).scaled_by_p_power(1),
            NormValue::exp_int(-1)
        );
        assert_eq!(NormValue::Zero.scaled_by_p_power(-5), NormValue::Zero);
        assert_eq!(
            NormValue::exp(rat_frac(1, 2)).scaled_by_p_power(2),
            NormValue::exp(rat_frac(-3, 2))
        );
    }

    fn random_rat(rng: &mut StdRng) -> Rat {
        rat_frac(rng.random_range(-40..40), rng.random_range(1..30))
    }

    fn random_vec(rng: &mut StdRng, n: usize) -> Vector {
        Vector::new((0..n).map(|_| random_rat(rng)).collect())
    }

    fn sample_spaces() -> Vec<NormedSpace> {
        vec![
            standard4(),
            ramified2(),
            NormedSpace::standard(3, 2).unwrap(),
            NormedSpace::new(
                5,
                Matrix::from_rows(vec![Vector::from_ints(&[1, 2]), Vector::from_ints(&[3, 1])])
                    .unwrap(),
                vec![rat(-1), rat(2)],
            )
            .unwrap(),
        ]
    }

    #[test]
    fn scaled_by_p_power_matches_direct_evaluation() {
        let mut rng = StdRng::seed_from_u64(11);
        for s in sample_spaces() {
            for _ in 0..50 {
                let v = random_vec(&mut rng, s.dim());
                let k = rng.random_range(-3i64..4);
                let direct = s.norm(&v.scaled(&p_power(s.p(), k))).unwrap();
                let shifted = s.norm(&v).unwrap().scaled_by_p_power(k);
                assert_eq!(direct, shifted);
            }
        }
    }

    #[test]
    fn norm_axioms_hold_on_samples() {
        let mut rng = StdRng::seed_from_u64(7);
        for s in sample_spaces() {
            for _ in 0..200 {
                let v = random_vec(&mut rng, s.dim());
                let w = random_vec(&mut rng, s.dim());
                let nv = s.norm(&v).unwrap();
                let nw = s.norm(&w).unwrap();
                let nsum = s.norm(&v.add(&w)).unwrap();

                // Definiteness.
                assert_eq!(nv == NormValue::Zero, v.is_zero());
                // Homogeneity over random rational scalars.
                let x = random_rat(&mut rng);
                let nxv = s.norm(&v.scaled(&x)).unwrap();
                let expected = nv.scaled_by_abs(valuation(s.p(), &x).unwrap());
                assert_eq!(nxv, expected);
                // Ultrametric inequality, with equality when norms differ.
                let mx = norm_max(nv.clone(), nw.clone());
                assert!(nsum <= mx);
                if nv != nw {
                    assert_eq!(nsum, mx);
                }
            }
        }
    }
}
