//! Solvers for the two norm-minimization problems on a lattice basis:
//! closest lattice vector to a target, and the largest lattice norm strictly
//! below the maximum. Both run the frame-pivoting reduction exactly, and the
//! orthogonalizer that consumes a closest-vector oracle lives here too.

use crate::error::Result;
use crate::lattice::{scale_vector_by_p_power, LatticeBasis};
use crate::linalg::Vector;
use crate::norm::NormValue;
use crate::rat::Rat;
use num_traits::{One, Zero};

/// A closest-vector answer: the lattice point, its Z_p coefficients over the
/// input basis rows, and the attained distance N(target − vector).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CvpSolution {
    pub vector: Vector,
    pub coefficients: Vector,
    pub distance: NormValue,
}

/// A short-vector answer: a lattice vector whose norm is the largest one
/// strictly below the lattice's maximal norm λ₁, together with that norm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LvpSolution {
    pub vector: Vector,
    pub norm: NormValue,
}

/// Finds a lattice vector minimizing N(target − v), exactly.
///
/// The reduction interleaves frame orthogonalization with target reduction:
/// in round i the maximal-norm remaining row is selected (ties toward the
/// lowest index), the frame is pivoted so that row's norm sits on the pivot
/// coordinate, and the target's residual loses its pivot coordinate by
/// subtracting the right Z_p multiple. The loop stops early when the
/// residual's norm exceeds every remaining row (no further improvement is
/// possible) or the residual hits zero.
pub fn cvp_with_frame(basis: &LatticeBasis, target: &Vector) -> Result<CvpSolution> {
    let space = basis.space().clone();
    let m = basis.rank();
    let n = space.dim();

    // Frame coordinates with physically permuted columns, plus the running
    // expression of every working row over the input basis rows.
    let mut a: Vec<Vec<Rat>> = basis
        .vectors()
        .iter()
        .map(|v| space.frame_coordinates(v).map(|w| w.entries().to_vec()))
        .collect::<Result<_>>()?;
    let mut s: Vec<Rat> = space.frame_coordinates(target)?.entries().to_vec();
    let mut u: Vec<Vec<Rat>> = (0..m)
        .map(|i| {
            let mut row = vec![Rat::zero(); m];
            row[i] = Rat::one();
            row
        })
        .collect();
    let mut col_at: Vec<usize> = (0..n).collect();
    let mut coefficients = vec![Rat::zero(); m];

    for i in 0..m {
        // Maximal-norm remaining row, lowest index on ties.
        let mut best_row = i;
        let mut best = space.norm_of_permuted_coordinates(&a[i], &col_at);
        for r in i + 1..m {
            let nr = space.norm_of_permuted_coordinates(&a[r], &col_at);
            if nr > best {
                best = nr;
                best_row = r;
            }
        }
        a.swap(i, best_row);
        u.swap(i, best_row);

        // The residual is already closer than anything the remaining
        // (smaller) rows could correct.
        if space.norm_of_permuted_coordinates(&s, &col_at) > best {
            break;
        }

        // Pivot the frame so position i realizes the row norm.
        let mut best_pos = i;
        let mut best_val = space.coefficient_norm(col_at[i], &a[i][i]);
        for pos in i + 1..n {
            let nv = space.coefficient_norm(col_at[pos], &a[i][pos]);
            if nv > best_val {
                best_val = nv;
                best_pos = pos;
            }
        }
        if best_pos != i {
            for row in &mut a {
                row.swap(i, best_pos);
            }
            s.swap(i, best_pos);
            col_at.swap(i, best_pos);
        }

        // Cancel the residual's pivot coordinate. The multiplier is in Z_p
        // because the pivot realizes the maximal row norm and the residual's
        // norm does not exceed it.
        if !s[i].is_zero() {
            let c = &s[i] / &a[i][i];
            for pos in i..n {
                let delta = &c * &a[i][pos];
                s[pos] = &s[pos] - &delta;
            }
            for (acc, ui) in coefficients.iter_mut().zip(&u[i]) {
                *acc = &*acc + &(&c * ui);
            }
        }
        if s.iter().all(|x| x.is_zero()) {
            break;
        }

        // Eliminate the pivot coordinate below, as in plain orthogonalization.
        for l in i + 1..m {
            if a[l][i].is_zero() {
                continue;
            }
            let f = &a[l][i] / &a[i][i];
            for pos in i..n {
                let delta = &f * &a[i][pos];
                a[l][pos] = &a[l][pos] - &delta;
            }
            let ui = u[i].clone();
            for (x, y) in u[l].iter_mut().zip(&ui) {
                *x = &*x - &(&f * y);
            }
        }
    }

    let distance = space.norm_of_permuted_coordinates(&s, &col_at);
    let coefficients = Vector::new(coefficients);
    let vector = coefficients.mul_matrix(&basis.matrix());
    debug_assert_eq!(
        space.norm(&target.sub(&vector))?,
        distance,
        "reported distance must match the reported vector"
    );
    Ok(CvpSolution {
        vector,
        coefficients,
        distance,
    })
}

/// Finds a lattice vector whose norm is the largest value strictly below the
/// lattice maximum λ₁ (the second rung of the norm ladder).
///
/// Candidates: p·α₁ for a maximal-norm orthogonal vector α₁ (norm p⁻¹·λ₁),
/// and the first orthogonalized vector whose norm drops below λ₁. The larger
/// wins; ties prefer the unscaled basis vector.
pub fn lvp_with_frame(basis: &LatticeBasis) -> Result<LvpSolution> {
    let ortho = basis.orthogonalize_with_frame().basis;
    let norms = ortho.norms();
    let top = norms[0].clone();

    let scaled = scale_vector_by_p_power(basis.space(), &ortho.vectors()[0], 1);
    let scaled_norm = top.scaled_by_p_power(1);

    match norms.iter().position(|nv| *nv < top) {
        Some(i) if norms[i] >= scaled_norm => Ok(LvpSolution {
            vector: ortho.vectors()[i].clone(),
            norm: norms[i].clone(),
        }),
        _ => Ok(LvpSolution {
            vector: scaled,
            norm: scaled_norm,
        }),
    }
}

/// Orthogonalizes a basis using only a closest-vector oracle: each round
/// moves a maximal-norm remaining vector into the output and reduces every
/// other remaining vector by its closest point in the Z_p-span of the chosen
/// one. Makes exactly m(m−1)/2 oracle calls for rank m.
pub fn orthogonalize_via_cvp<F>(basis: &LatticeBasis, mut oracle: F) -> Result<LatticeBasis>
where
    F: FnMut(&LatticeBasis, &Vector) -> Result<CvpSolution>,
{
    let space = basis.space().clone();
    let mut remaining: Vec<Vector> = basis.vectors().to_vec();
    let mut out = Vec::with_capacity(remaining.len());

    while !remaining.is_empty() {
        let mut best_idx = 0;
        let mut best = space.norm(&remaining[0])?;
        for (idx, v) in remaining.iter().enumerate().skip(1) {
            let nv = space.norm(v)?;
            if nv > best {
                best = nv;
                best_idx = idx;
            }
        }
        let chosen = remaining.remove(best_idx);
        let line = LatticeBasis::new(space.clone(), vec![chosen.clone()])?;
        for v in &mut remaining {
            let sol = oracle(&line, v)?;
            *v = v.sub(&sol.vector);
        }
        out.push(chosen);
    }

    LatticeBasis::new(space, out)
}
