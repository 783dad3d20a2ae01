//! Lattice bases over Z_p inside a normed space, their orthogonalization,
//! norm invariants, and elementary basis operations.

use num_traits::Zero;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::norm::{NormValue, NormedSpace};
use crate::rat::{format_rat, p_power, rat, valuation, Rat, Valuation};

/// Number of ladder entries reported by default.
pub const DEFAULT_LADDER_LEN: usize = 5;

/// An ordered basis α₁..αₘ of the Z_p-lattice L(α₁..αₘ) inside a normed
/// space. The vectors are rows in standard coordinates, linearly independent,
/// with 1 ≤ m ≤ dim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    space: Arc<NormedSpace>,
    vectors: Vec<Vector>,
}

/// Result of frame orthogonalization: the new basis plus the frame
/// permutation the pivoting settled on (position → original frame index).
#[derive(Clone, Debug)]
pub struct FrameOrthogonalization {
    pub basis: LatticeBasis,
    pub frame_permutation: Vec<usize>,
}

/// Invariants of a lattice: successive maxima, escape distance (full rank
/// only), and the ladder of largest norm values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantReport {
    pub maxima: Vec<NormValue>,
    pub escape: Option<NormValue>,
    pub ladder: Vec<NormValue>,
}

/// Elementary basis operations over Z_p. Indices are 0-based row positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ElementaryOp {
    /// αᵢ ← k·αᵢ with k a p-adic unit (v_p(k) = 0).
    ScaleUnit { index: usize, factor: Rat },
    /// Exchange rows i and j.
    Swap { i: usize, j: usize },
    /// α_target ← α_target + k·α_source with k ∈ Z_p and, at application
    /// time, N(k·α_source) ≤ N(α_target).
    AddMultiple {
        target: usize,
        source: usize,
        factor: Rat,
    },
}

impl ElementaryOp {
    /// The operation undoing this one; same kind, so transcripts invert to
    /// transcripts.
    pub fn inverse(&self) -> ElementaryOp {
        match self {
            ElementaryOp::ScaleUnit { index, factor } => ElementaryOp::ScaleUnit {
                index: *index,
                factor: rat(1) / factor,
            },
            ElementaryOp::Swap { i, j } => ElementaryOp::Swap { i: *i, j: *j },
            ElementaryOp::AddMultiple {
                target,
                source,
                factor,
            } => ElementaryOp::AddMultiple {
                target: *target,
                source: *source,
                factor: -factor,
            },
        }
    }
}

impl LatticeBasis {
    /// Validates dimensions, 1 ≤ m ≤ dim, and linear independence.
    pub fn new(space: Arc<NormedSpace>, vectors: Vec<Vector>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::InvalidParameter(
                "a lattice basis needs at least one vector".into(),
            ));
        }
        for v in &vectors {
            if v.dim() != space.dim() {
                return Err(Error::DimensionMismatch {
                    expected: space.dim(),
                    got: v.dim(),
                });
            }
        }
        if vectors.len() > space.dim() {
            return Err(Error::DependentBasis);
        }
        let rank = Matrix::from_rows(vectors.clone())?.rank();
        if rank != vectors.len() {
            return Err(Error::DependentBasis);
        }
        Ok(LatticeBasis { space, vectors })
    }

    pub fn space(&self) -> &Arc<NormedSpace> {
        &self.space
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    /// Number of basis vectors m (they are independent, so this is the rank).
    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn matrix(&self) -> Matrix {
        Matrix::from_rows(self.vectors.clone()).expect("basis rows are rectangular")
    }

    /// Norm of each basis vector, in basis order.
    pub fn norms(&self) -> Vec<NormValue> {
        self.vectors
            .iter()
            .map(|v| self.space.norm(v).expect("dimensions validated"))
            .collect()
    }

    /// Orthogonalizes by frame pivoting: repeatedly move a maximal-norm
    /// vector up, pivot the frame so that vector's norm is realized on the
    /// pivot coordinate, and eliminate that coordinate from the rows below.
    /// The output spans the same lattice, is orthogonal, and its norms are
    /// non-increasing. Ties break toward the lowest index, which makes the
    /// output deterministic.
    pub fn orthogonalize_with_frame(&self) -> FrameOrthogonalization {
        let space = &self.space;
        let m = self.rank();
        let n = space.dim();

        // Work on frame coordinates with physically permuted columns;
        // col_at[pos] remembers which original frame axis sits at pos.
        let mut a: Vec<Vec<Rat>> = self
            .vectors
            .iter()
            .map(|v| {
                space
                    .frame_coordinates(v)
                    .expect("dimensions validated")
                    .entries()
                    .to_vec()
            })
            .collect();
        let mut col_at: Vec<usize> = (0..n).collect();

        let coeff_norm = |pos: usize, x: &Rat, col_at: &[usize]| -> NormValue {
            space.coefficient_norm(col_at[pos], x)
        };
        let row_norm = |row: &[Rat], col_at: &[usize]| -> NormValue {
            space.norm_of_permuted_coordinates(row, col_at)
        };

        for i in 0..m {
            // Maximal-norm row among the remaining ones; lowest index wins ties.
            let mut best_row = i;
            let mut best = row_norm(&a[i], &col_at);
            for r in i + 1..m {
                let nr = row_norm(&a[r], &col_at);
                if nr > best {
                    best = nr;
                    best_row = r;
                }
            }
            a.swap(i, best_row);

            // Pivot the frame so position i realizes the row's norm. The row
            // is zero on positions < i (eliminated in earlier iterations), so
            // scanning positions i..n scans all nonzero coefficients.
            let mut best_pos = i;
            let mut best_val = coeff_norm(i, &a[i][i], &col_at);
            for pos in i + 1..n {
                let nv = coeff_norm(pos, &a[i][pos], &col_at);
                if nv > best_val {
                    best_val = nv;
                    best_pos = pos;
                }
            }
            debug_assert_eq!(
                best_val, best,
                "pivot coefficient must realize the row norm"
            );
            if best_pos != i {
                for row in &mut a {
                    row.swap(i, best_pos);
                }
                col_at.swap(i, best_pos);
            }

            // Eliminate the pivot coordinate from every row below. The ratio
            // is in Z_p because the pivot realizes the maximal row norm.
            for l in i + 1..m {
                if a[l][i].is_zero() {
                    continue;
                }
                let f = &a[l][i] / &a[i][i];
                for c in i..n {
                    let delta = &f * &a[i][c];
                    a[l][c] = &a[l][c] - &delta;
                }
            }
        }

        // Back to standard coordinates through the permuted frame.
        let permuted_frame = Matrix::from_rows(
            col_at
                .iter()
                .map(|&j| space.frame().row(j).clone())
                .collect(),
        )
        .expect("frame rows are rectangular");
        let vectors: Vec<Vector> = a
            .iter()
            .map(|row| Vector::new(row.clone()).mul_matrix(&permuted_frame))
            .collect();
        let basis = LatticeBasis::new(space.clone(), vectors)
            .expect("row operations preserve independence");
        FrameOrthogonalization {
            basis,
            frame_permutation: col_at,
        }
    }

    /// Successive maxima λ̃₁ ≥ … ≥ λ̃ₘ: the norm sequence of any orthogonal
    /// basis of the lattice, independent of which one (they are invariants).
    pub fn successive_maxima(&self) -> Vec<NormValue> {
        self.orthogonalize_with_frame().basis.norms()
    }

    /// Escape distance μ = p·λ̃ₙ, the smallest norm that every point of the
    /// ambient space can reach within distance… defined for full rank only.
    pub fn escape_distance(&self) -> Result<NormValue> {
        if self.rank() != self.space.dim() {
            return Err(Error::NotFullRank {
                rank: self.rank(),
                dim: self.space.dim(),
            });
        }
        let maxima = self.successive_maxima();
        let last = maxima.last().expect("rank ≥ 1");
        // μ = p · λ̃ₙ, i.e. exponent + 1.
        Ok(last.scaled_by_p_power(-1))
    }

    /// The k largest values of the lattice's norm set
    /// {p^(−i)·λ̃ⱼ : i ≥ 0, 1 ≤ j ≤ m}, strictly decreasing, λ₁ first.
    pub fn lambda_ladder(&self, k: usize) -> Vec<NormValue> {
        ladder_from_maxima(&self.successive_maxima(), k)
    }

    /// True iff the basis itself is orthogonal: its norm multiset equals the
    /// successive maxima.
    pub fn is_orthogonal_basis(&self) -> bool {
        let mut norms = self.norms();
        norms.sort_by(|x, y| y.cmp(x));
        norms == self.successive_maxima()
    }

    /// True iff `other` spans the same Z_p-lattice: other = C·self with C
    /// over Z_p and det(C) a unit. Requires the same space and rank.
    pub fn same_lattice(&self, other: &LatticeBasis) -> Result<bool> {
        if *self.space != *other.space {
            return Err(Error::InvalidParameter(
                "bases live in different normed spaces".into(),
            ));
        }
        if self.rank() != other.rank() {
            return Err(Error::InvalidParameter(format!(
                "rank mismatch: {} vs {}",
                self.rank(),
                other.rank()
            )));
        }
        let Some(c) = self.change_of_basis_to(other)? else {
            return Ok(false);
        };
        let p = self.space.p();
        for row in c.rows() {
            for x in row.entries() {
                if !x.is_zero() && valuation(p, x).expect("p validated").finite() < 0 {
                    return Ok(false);
                }
            }
        }
        let det = c.det();
        debug_assert!(
            !det.is_zero(),
            "change of basis between bases is invertible"
        );
        Ok(valuation(p, &det).expect("p validated") == Valuation::Finite(0))
    }

    /// The matrix C with other = C·self, if other's rows lie in self's row
    /// span at all.
    fn change_of_basis_to(&self, other: &LatticeBasis) -> Result<Option<Matrix>> {
        let mine = self.matrix();
        let mut rows = Vec::with_capacity(other.rank());
        for v in &other.vectors {
            match mine.express_in_rowspace(v)? {
                Some(coeffs) => rows.push(coeffs),
                None => return Ok(None),
            }
        }
        Ok(Some(Matrix::from_rows(rows)?))
    }

    /// Applies elementary operations left to right, validating each at its
    /// application time. Errors carry the index of the offending operation.
    pub fn apply_ops(&self, ops: &[ElementaryOp]) -> Result<LatticeBasis> {
        let p = self.space.p();
        let m = self.rank();
        let mut vs = self.vectors.clone();

        let check_index = |index: usize, at: usize| -> Result<()> {
            if index >= m {
                return Err(Error::InvalidOperation {
                    index: at,
                    reason: format!("row index {index} out of range for rank {m}"),
                });
            }
            Ok(())
        };

        for (at, op) in ops.iter().enumerate() {
            match op {
                ElementaryOp::ScaleUnit { index, factor } => {
                    check_index(*index, at)?;
                    if valuation(p, factor).expect("p validated") != Valuation::Finite(0) {
                        return Err(Error::InvalidOperation {
                            index: at,
                            reason: format!(
                                "scale factor {} is not a p-adic unit",
                                format_rat(factor)
                            ),
                        });
                    }
                    vs[*index] = vs[*index].scaled(factor);
                }
                ElementaryOp::Swap { i, j } => {
                    check_index(*i, at)?;
                    check_index(*j, at)?;
                    vs.swap(*i, *j);
                }
                ElementaryOp::AddMultiple {
                    target,
                    source,
                    factor,
                } => {
                    check_index(*target, at)?;
                    check_index(*source, at)?;
                    if target == source {
                        return Err(Error::InvalidOperation {
                            index: at,
                            reason: "target and source rows must differ".into(),
                        });
                    }
                    let v_factor = valuation(p, factor).expect("p validated");
                    if v_factor < Valuation::Finite(0) {
                        return Err(Error::InvalidOperation {
                            index: at,
                            reason: format!("multiplier {} is not in Z_p", format_rat(factor)),
                        });
                    }
                    let n_target = self.space.norm(&vs[*target]).expect("dims validated");
                    let n_scaled = self
                        .space
                        .norm(&vs[*source])
                        .expect("dims validated")
                        .scaled_by_abs(v_factor);
                    if n_scaled > n_target {
                        return Err(Error::InvalidOperation {
                            index: at,
                            reason: format!(
                                "norm constraint violated: N(k·α_{source}) = {} > N(α_{target}) = {}",
                                n_scaled.display(p),
                                n_target.display(p)
                            ),
                        });
                    }
                    vs[*target] = vs[*target].add_scaled(factor, &vs[*source]);
                }
            }
        }
        LatticeBasis::new(self.space.clone(), vs)
            .map_err(|_| unreachable!("elementary operations preserve independence"))
    }

    /// Produces an elementary-operation transcript carrying this basis to
    /// `target`. Both bases must be orthogonal and span the same lattice.
    /// Every emitted operation is valid at its application time, and the
    /// transcript replays exactly to `target`.
    pub fn elementary_transform(&self, target: &LatticeBasis) -> Result<Vec<ElementaryOp>> {
        if !self.is_orthogonal_basis() {
            return Err(Error::Precondition(
                "the starting basis is not orthogonal".into(),
            ));
        }
        if !target.is_orthogonal_basis() {
            return Err(Error::Precondition(
                "the target basis is not orthogonal".into(),
            ));
        }
        if !self.same_lattice(target)? {
            return Err(Error::Precondition(
                "the bases do not span the same lattice".into(),
            ));
        }

        let p = self.space.p();
        // Sort both bases by norm (descending, stable) with recorded swaps.
        let (s1, sorted_self) = sort_by_norm_swaps(self);
        let (s2, sorted_target) = sort_by_norm_swaps(target);

        let norms = sorted_self.norms();
        debug_assert_eq!(
            norms,
            sorted_target.norms(),
            "orthogonal bases of one lattice share their sorted norm sequence"
        );

        // C with sorted_target = C · sorted_self; entries are in Z_p and the
        // diagonal blocks (per equal-norm run) are invertible mod p.
        let c = sorted_self
            .change_of_basis_to(&sorted_target)?
            .expect("same lattice implies expressibility");
        let reduction = reduce_change_of_basis(c, &norms, p);

        let mut ops = s1;
        ops.extend(reduction.into_iter().rev().map(|op| op.inverse()));
        ops.extend(s2.into_iter().rev().map(|op| op.inverse()));

        let replayed = self.apply_ops(&ops)?;
        assert_eq!(
            replayed.vectors, target.vectors,
            "transcript must replay exactly to the target basis"
        );
        Ok(ops)
    }
}

/// Swaps sorting the basis rows by norm descending (ties toward the original
/// order), returned together with the sorted basis.
fn sort_by_norm_swaps(basis: &LatticeBasis) -> (Vec<ElementaryOp>, LatticeBasis) {
    let norms = basis.norms();
    let m = norms.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&x, &y| norms[y].cmp(&norms[x]).then(x.cmp(&y)));

    let mut at: Vec<usize> = (0..m).collect(); // position -> original index
    let mut pos_of: Vec<usize> = (0..m).collect(); // original index -> position
    let mut swaps = Vec::new();
    for pos in 0..m {
        let want = order[pos];
        if at[pos] != want {
            let from = pos_of[want];
            swaps.push(ElementaryOp::Swap { i: pos, j: from });
            at.swap(pos, from);
            pos_of[at[pos]] = pos;
            pos_of[at[from]] = from;
        }
    }
    let sorted = LatticeBasis::new(
        basis.space.clone(),
        order.iter().map(|&i| basis.vectors[i].clone()).collect(),
    )
    .expect("permutation preserves independence");
    (swaps, sorted)
}

/// Reduces a Z_p change-of-basis matrix with unit determinant to the
/// identity, recording row operations. `norms` are the (equal within each
/// block, decreasing across blocks) norms of the underlying basis rows; the
/// recorded operations are exactly the valid elementary operations on the
/// evolving basis X = C·B.
///
/// Order of attack: per equal-norm block, first clear the columns to the
/// left (their multipliers sit in pZ_p deep enough for the norm constraint),
/// then Gauss-Jordan the diagonal block to the identity with unit pivots;
/// finally clear the strictly-upper remainder bottom-up, where multipliers
/// only ever scale smaller-norm rows.
fn reduce_change_of_basis(c: Matrix, norms: &[NormValue], p: u64) -> Vec<ElementaryOp> {
    let m = norms.len();
    let mut c: Vec<Vec<Rat>> = c.rows().iter().map(|r| r.entries().to_vec()).collect();
    let mut ops = Vec::new();

    // Equal-norm blocks [start, end).
    let mut blocks = Vec::new();
    let mut start = 0;
    for i in 1..=m {
        if i == m || norms[i] != norms[start] {
            blocks.push((start, i));
            start = i;
        }
    }

    macro_rules! do_swap {
        ($i:expr, $j:expr) => {{
            let (i, j) = ($i, $j);
            if i != j {
                c.swap(i, j);
                ops.push(ElementaryOp::Swap { i, j });
            }
        }};
    }
    macro_rules! do_scale {
        ($i:expr, $k:expr) => {{
            let (i, k): (usize, Rat) = ($i, $k);
            if k != rat(1) {
                c[i] = c[i].iter().map(|x| x * &k).collect();
                ops.push(ElementaryOp::ScaleUnit {
                    index: i,
                    factor: k,
                });
            }
        }};
    }
    macro_rules! do_addmul {
        ($tgt:expr, $src:expr, $k:expr) => {{
            let (tgt, src, k): (usize, usize, Rat) = ($tgt, $src, $k);
            if !k.is_zero() {
                let src_row = c[src].clone();
                for (x, s) in c[tgt].iter_mut().zip(&src_row) {
                    *x = &*x + &(&k * s);
                }
                ops.push(ElementaryOp::AddMultiple {
                    target: tgt,
                    source: src,
                    factor: k,
                });
            }
        }};
    }

    for &(bs, be) in &blocks {
        // Clear columns of earlier (larger-norm) blocks, ascending so that
        // the fill-in a subtraction creates at later columns is cleared by
        // the later steps of this same pass.
        for r in bs..be {
            for j in 0..bs {
                let k = -c[r][j].clone();
                do_addmul!(r, j, k);
            }
        }
        // Gauss-Jordan the diagonal block; it is invertible mod p, so a unit
        // pivot always exists in the remaining rows.
        for col in bs..be {
            let pivot = (col..be)
                .find(|&r| {
                    !c[r][col].is_zero()
                        && valuation(p, &c[r][col]).expect("p validated") == Valuation::Finite(0)
                })
                .expect("diagonal block is invertible mod p");
            do_swap!(col, pivot);
            let inv = rat(1) / c[col][col].clone();
            do_scale!(col, inv);
            for r in bs..be {
                if r != col {
                    let k = -c[r][col].clone();
                    do_addmul!(r, col, k);
                }
            }
        }
    }

    // Clear the remaining strictly-upper entries bottom-up; below and to the
    // left everything is already the identity pattern.
    for r in (0..m).rev() {
        for j in r + 1..m {
            let k = -c[r][j].clone();
            do_addmul!(r, j, k);
        }
    }

    debug_assert!(
        (0..m).all(|i| (0..m).all(|j| c[i][j] == if i == j { rat(1) } else { Rat::zero() })),
        "reduction must end at the identity"
    );
    ops
}

/// The k largest distinct values of {p^(−i)·λ̃ⱼ}, strictly decreasing.
/// Any top-k value uses i < k (its own stream contributes i larger values),
/// so the k·m candidate grid below is exhaustive.
pub(crate) fn ladder_from_maxima(maxima: &[NormValue], k: usize) -> Vec<NormValue> {
    let mut exps: Vec<Rat> = Vec::with_capacity(maxima.len() * k);
    for nv in maxima {
        let e = nv
            .exponent()
            .expect("basis vectors are nonzero, so maxima are nonzero");
        for i in 0..k as i64 {
            exps.push(e - rat(i));
        }
    }
    exps.sort_by(|x, y| y.cmp(x));
    exps.dedup();
    exps.truncate(k);
    exps.into_iter().map(NormValue::Exp).collect()
}

impl InvariantReport {
    /// Computes all invariants in one orthogonalization pass.
    pub fn compute(basis: &LatticeBasis, ladder_len: usize) -> InvariantReport {
        let maxima = basis.successive_maxima();
        let escape = if basis.rank() == basis.space().dim() {
            Some(maxima.last().expect("rank ≥ 1").scaled_by_p_power(-1))
        } else {
            None
        };
        let ladder = ladder_from_maxima(&maxima, ladder_len);
        InvariantReport {
            maxima,
            escape,
            ladder,
        }
    }

    /// Canonical text block: one line per field, norm values in p^e notation.
    pub fn canonical_text(&self, p: u64) -> String {
        let seq = |vals: &[NormValue]| {
            vals.iter()
                .map(|nv| nv.display(p))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let mu = match &self.escape {
            Some(nv) => nv.display(p),
            None => "undefined: not full rank".to_string(),
        };
        format!(
            "lambda~: {}\nmu: {}\nladder: {}\n",
            seq(&self.maxima),
            mu,
            seq(&self.ladder)
        )
    }
}

/// Builds the exact p^k scaling of a vector; tiny helper shared by tests and
/// the solvers.
pub(crate) fn scale_vector_by_p_power(space: &NormedSpace, v: &Vector, k: i64) -> Vector {
    v.scaled(&p_power(space.p(), k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_frac;
    use crate::testutil::{example_basis, standard4};

    fn vec4(a: i64, b: i64, c: i64, d: i64) -> Vector {
        Vector::from_ints(&[a, b, c, d])
    }

    #[test]
    fn basis_validation() {
        let s = standard4();
        assert!(matches!(
            LatticeBasis::new(s.clone(), vec![]),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            LatticeBasis::new(s.clone(), vec![Vector::from_ints(&[1, 2])]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            LatticeBasis::new(s.clone(), vec![vec4(1, 0, 0, 0), vec4(2, 0, 0, 0)]),
            Err(Error::DependentBasis)
        ));
        assert!(matches!(
            LatticeBasis::new(
                s.clone(),
                vec![
                    vec4(1, 0, 0, 0),
                    vec4(0, 1, 0, 0),
                    vec4(0, 0, 1, 0),
                    vec4(0, 0, 0, 1),
                    vec4(1, 1, 1, 1)
                ]
            ),
            Err(Error::DependentBasis)
        ));
    }

    #[test]
    fn orthogonalize_reproduces_the_worked_reduction() {
        let s = standard4();
        let b = example_basis(&s);
        let result = b.orthogonalize_with_frame();
        assert_eq!(
            result.basis.vectors(),
            &[vec4(1, 0, 0, 0), vec4(0, 2, 0, 0), vec4(0, 0, 16, 16)]
        );
        assert_eq!(
            result.basis.norms(),
            vec![
                NormValue::exp_int(0),
                NormValue::exp_int(-1),
                NormValue::exp_int(-4)
            ]
        );
        assert_eq!(result.frame_permutation, vec![0, 1, 2, 3]);
        assert!(result.basis.is_orthogonal_basis());
        assert!(b.same_lattice(&result.basis).unwrap());
    }

    #[test]
    fn orthogonalize_alternative_order_matches_the_second_walkthrough() {
        // Feeding the middle vector first reproduces the other reduction
        // path: 1+2ζ, then −2ζ, then 16ζ²+16ζ³, with the same norm sequence.
        let s = standard4();
        let b = LatticeBasis::new(
            s.clone(),
            vec![vec4(1, 2, 0, 0), vec4(1, 0, 0, 0), vec4(2, 8, 16, 16)],
        )
        .unwrap();
        let result = b.orthogonalize_with_frame();
        assert_eq!(
            result.basis.vectors(),
            &[vec4(1, 2, 0, 0), vec4(0, -2, 0, 0), vec4(0, 0, 16, 16)]
        );
        assert_eq!(
            result.basis.norms(),
            vec![
                NormValue::exp_int(0),
                NormValue::exp_int(-1),
                NormValue::exp_int(-4)
            ]
        );
        assert!(result.basis.is_orthogonal_basis());
        assert!(b.same_lattice(&result.basis).unwrap());
    }

    #[test]
    fn orthogonalize_single_vector_is_identity() {
        let s = standard4();
        let b = LatticeBasis::new(s, vec![vec4(3, 6, 0, 12)]).unwrap();
        let result = b.orthogonalize_with_frame();
        assert_eq!(result.basis.vectors(), b.vectors());
    }

    #[test]
    fn orthogonalize_pivots_past_the_rank_range() {
        // Rank 1 in dimension 4 with the norm realized on the last frame
        // axis: the pivot search must scan all columns, not just the first
        // `rank` of them.
        let s = standard4();
        let b = LatticeBasis::new(s, vec![Vector::from_ints(&[4, 8, 16, 1])]).unwrap();
        let result = b.orthogonalize_with_frame();
        assert_eq!(result.frame_permutation[0], 3);
        assert_eq!(result.basis.norms(), vec![NormValue::exp_int(0)]);
    }

    #[test]
    fn successive_maxima_of_the_example() {
        let s = standard4();
        let b = example_basis(&s);
        assert_eq!(
            b.successive_maxima(),
            vec![
                NormValue::exp_int(0),
                NormValue::exp_int(-1),
                NormValue::exp_int(-4)
            ]
        );
    }

    #[test]
    fn maxima_invariant_under_rebasing() {
        let s = standard4();
        let b = example_basis(&s);
        // A hand-built same-lattice basis: reordered and mixed by Z_p ops.
        let other = LatticeBasis::new(
            s.clone(),
            vec![
                vec4(1, 2, 0, 0),
                vec4(2, 8, 16, 16).add(&vec4(1, 0, 0, 0)),
                vec4(1, 0, 0, 0),
            ],
        )
        .unwrap();
        assert!(b.same_lattice(&other).unwrap());
        assert_eq!(b.successive_maxima(), other.successive_maxima());
    }

    #[test]
    fn escape_distance_examples() {
        // Z_2 inside Q_2: μ = 2·λ̃₁ = 2.
        let line = Arc::new(NormedSpace::standard(2, 1).unwrap());
        let z2 = LatticeBasis::new(line, vec![Vector::from_ints(&[1])]).unwrap();
        assert_eq!(z2.escape_distance().unwrap(), NormValue::exp_int(1));

        // Full-rank extension of the running example.
        let s = standard4();
        let b = LatticeBasis::new(
            s.clone(),
            vec![
                vec4(1, 0, 0, 0),
                vec4(1, 2, 0, 0),
                vec4(2, 8, 16, 16),
                vec4(0, 0, 0, 16),
            ],
        )
        .unwrap();
        assert_eq!(
            b.successive_maxima(),
            vec![
                NormValue::exp_int(0),
                NormValue::exp_int(-1),
                NormValue::exp_int(-4),
                NormValue::exp_int(-4)
            ]
        );
        assert_eq!(b.escape_distance().unwrap(), NormValue::exp_int(-3));

        // Not full rank: an error that names the ranks.
        let b3 = example_basis(&s);
        assert!(matches!(
            b3.escape_distance(),
            Err(Error::NotFullRank { rank: 3, dim: 4 })
        ));
    }

    #[test]
    fn ladder_of_the_example() {
        let s = standard4();
        let b = example_basis(&s);
        assert_eq!(
            b.lambda_ladder(3),
            vec![
                NormValue::exp_int(0),
                NormValue::exp_int(-1),
                NormValue::exp_int(-2)
            ]
        );
        // Rank-1: the ladder is the geometric sequence below the single norm.
        let line = Arc::new(NormedSpace::standard(3, 1).unwrap());
        let z3 = LatticeBasis::new(line, vec![Vector::from_ints(&[3])]).unwrap();
        assert_eq!(
            z3.lambda_ladder(3),
            vec![
                NormValue::exp_int(-1),
                NormValue::exp_int(-2),
                NormValue::exp_int(-3)
            ]
        );
        assert_eq!(b.lambda_ladder(0), vec![]);
        assert_eq!(b.lambda_ladder(1), vec![NormValue::exp_int(0)]);
    }

    #[test]
    fn ladder_merges_fractional_and_integer_exponents() {
        let maxima = vec![NormValue::exp_int(0), NormValue::exp(rat_frac(-1, 2))];
        assert_eq!(
            ladder_from_maxima(&maxima, 4),
            vec![
                NormValue::exp_int(0),
                NormValue::exp(rat_frac(-1, 2)),
                NormValue::exp_int(-1),
                NormValue::exp(rat_frac(-3, 2)),
            ]
        );
    }

    #[test]
    fn orthogonality_detection() {
        let s = standard4();
        assert!(!example_basis(&s).is_orthogonal_basis());
        let ortho = LatticeBasis::new(
            s.clone(),
            vec![vec4(1, 0, 0, 0), vec4(0, 2, 0, 0), vec4(0, 0, 16, 16)],
        )
        .unwrap();
        assert!(ortho.is_orthogonal_basis());
        let line = Arc::new(NormedSpace::standard(2, 1).unwrap());
        let rank1 = LatticeBasis::new(line, vec![Vector::from_ints(&[6])]).unwrap();
        assert!(rank1.is_orthogonal_basis());
    }

    #[test]
    fn same_lattice_examples() {
        let s = standard4();
        let b = example_basis(&s);
        let swapped = LatticeBasis::new(
            s.clone(),
            vec![vec4(1, 2, 0, 0), vec4(1, 0, 0, 0), vec4(2, 8, 16, 16)],
        )
        .unwrap();
        assert!(b.same_lattice(&swapped).unwrap());

        // L(1) vs L(2) in Q_2: index p sublattice, not the same.
        let line = Arc::new(NormedSpace::standard(2, 1).unwrap());
        let one = LatticeBasis::new(line.clone(), vec![Vector::from_ints(&[1])]).unwrap();
        let two = LatticeBasis::new(line, vec![Vector::from_ints(&[2])]).unwrap();
        assert!(!one.same_lattice(&two).unwrap());
        assert!(!two.same_lattice(&one).unwrap());

        // Disjoint spans are simply `false`.
        let e1 = LatticeBasis::new(s.clone(), vec![vec4(1, 0, 0, 0)]).unwrap();
        let e2 = LatticeBasis::new(s.clone(), vec![vec4(0, 1, 0, 0)]).unwrap();
        assert!(!e1.same_lattice(&e2).unwrap());

        // Rank mismatch is a parameter error, not `false`.
        assert!(b.same_lattice(&e1).is_err());
    }

    #[test]
    fn apply_ops_validates_and_applies() {
        let s = standard4();
        let b = example_basis(&s);

        assert_eq!(b.apply_ops(&[]).unwrap().vectors(), b.vectors());

        let swapped = b.apply_ops(&[ElementaryOp::Swap { i: 0, j: 1 }]).unwrap();
        assert_eq!(swapped.vectors()[0], vec4(1, 2, 0, 0));

        // Scaling by p is not a unit.
        let err = b
            .apply_ops(&[ElementaryOp::ScaleUnit {
                index: 0,
                factor: rat(2),
            }])
            .unwrap_err();
        assert!(matches!(err, Error::InvalidOperation { index: 0, .. }));

        // Adding a bigger-norm vector onto a smaller-norm one is rejected;
        // the opposite direction is fine.
        let ortho = b.orthogonalize_with_frame().basis;
        let err = ortho
            .apply_ops(&[ElementaryOp::AddMultiple {
                target: 2,
                source: 0,
                factor: rat(1),
            }])
            .unwrap_err();
        assert!(matches!(err, Error::InvalidOperation { index: 0, .. }));
        ortho
            .apply_ops(&[ElementaryOp::AddMultiple {
                target: 0,
                source: 2,
                factor: rat(7),
            }])
            .unwrap();

        // A multiplier outside Z_p is rejected even when norms would allow it.
        let err = ortho
            .apply_ops(&[ElementaryOp::AddMultiple {
                target: 0,
                source: 2,
                factor: rat_frac(1, 2),
            }])
            .unwrap_err();
        assert!(matches!(err, Error::InvalidOperation { index: 0, .. }));
    }

    #[test]
    fn apply_ops_checks_norms_at_application_time() {
        // After the first operation rewrites row 0, the legality of the
        // second depends on the new row, not the original.
        let s = standard4();
        let ortho = LatticeBasis::new(s, vec![vec4(1, 0, 0, 0), vec4(0, 2, 0, 0)]).unwrap();
        // Row 0 has norm 1, row 1 norm 1/2: adding 1·row0 onto row 1 is
        // illegal now (norm 1 > 1/2)…
        let op = ElementaryOp::AddMultiple {
            target: 1,
            source: 0,
            factor: rat(1),
        };
        assert!(ortho.apply_ops(&[op.clone()]).is_err());
        // …but the very same operation is legal once a swap has put the
        // smaller vector at the source position.
        let ops = [ElementaryOp::Swap { i: 0, j: 1 }, op];
        let out = ortho.apply_ops(&ops).unwrap();
        assert_eq!(out.vectors()[1], vec4(1, 2, 0, 0));
    }

    #[test]
    fn ops_preserve_lattice_and_maxima() {
        let s = standard4();
        let b = example_basis(&s);
        let ops = [
            ElementaryOp::Swap { i: 0, j: 2 },
            ElementaryOp::ScaleUnit {
                index: 1,
                factor: rat_frac(3, 5),
            },
            ElementaryOp::AddMultiple {
                target: 0,
                source: 1,
                factor: rat(6),
            },
        ];
        let after = b.apply_ops(&ops).unwrap();
        assert!(b.same_lattice(&after).unwrap());
        assert_eq!(b.successive_maxima(), after.successive_maxima());
    }

    #[test]
    fn transform_identity_and_permutation() {
        let s = standard4();
        let ortho = LatticeBasis::new(
            s.clone(),
            vec![vec4(1, 0, 0, 0), vec4(0, 2, 0, 0), vec4(0, 0, 16, 16)],
        )
        .unwrap();
        // Same basis: replay must reproduce it (transcript may be empty).
        let ops = ortho.elementary_transform(&ortho).unwrap();
        assert_eq!(ortho.apply_ops(&ops).unwrap().vectors(), ortho.vectors());

        // A row permutation comes back as swaps.
        let permuted = LatticeBasis::new(
            s.clone(),
            vec![vec4(0, 2, 0, 0), vec4(0, 0, 16, 16), vec4(1, 0, 0, 0)],
        )
        .unwrap();
        let ops = ortho.elementary_transform(&permuted).unwrap();
        assert_eq!(ortho.apply_ops(&ops).unwrap().vectors(), permuted.vectors());
    }

    #[test]
    fn transform_handles_unit_mixing_within_equal_norms() {
        let s = standard4();
        let b1 = LatticeBasis::new(s.clone(), vec![vec4(1, 0, 0, 0), vec4(0, 1, 0, 0)]).unwrap();
        // (1,1) and (0,1) span Z_p² too and stay orthogonal under this norm.
        let b2 = LatticeBasis::new(s.clone(), vec![vec4(1, 1, 0, 0), vec4(0, 1, 0, 0)]).unwrap();
        let ops = b1.elementary_transform(&b2).unwrap();
        assert_eq!(b1.apply_ops(&ops).unwrap().vectors(), b2.vectors());
    }

    #[test]
    fn transform_rejects_non_orthogonal_and_different_lattices() {
        let s = standard4();
        let b = example_basis(&s);
        let ortho = b.orthogonalize_with_frame().basis;
        assert!(matches!(
            b.elementary_transform(&ortho),
            Err(Error::Precondition(_))
        ));
        let other = LatticeBasis::new(
            s.clone(),
            vec![vec4(1, 0, 0, 0), vec4(0, 2, 0, 0), vec4(0, 0, 32, 0)],
        )
        .unwrap();
        assert!(matches!(
            ortho.elementary_transform(&other),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn invariant_report_text_block() {
        let s = standard4();
        let b = example_basis(&s);
        let report = InvariantReport::compute(&b, DEFAULT_LADDER_LEN);
        assert_eq!(
            report.canonical_text(2),
            "lambda~: 2^0 2^-1 2^-4\nmu: undefined: not full rank\nladder: 2^0 2^-1 2^-2 2^-3 2^-4\n"
        );
    }

    #[test]
    fn maxima_are_bounded_by_the_sorted_input_norms() {
        // For any basis: the top maximum equals the largest basis-vector
        // norm, and the i-th maximum never exceeds the i-th largest one.
        use crate::gen::{gen_instance, mix_basis, WeightSpec};
        for seed in 0..30u64 {
            let p = [2u64, 3, 5][(seed % 3) as usize];
            let dim = 2 + (seed % 3) as usize;
            let rank = 1 + (seed % dim as u64) as usize;
            let inst = gen_instance(p, dim, rank, WeightSpec::Zeros, (-2, 2), seed).unwrap();
            let basis = mix_basis(&inst.basis, 2 * rank + 2, seed);

            let maxima = basis.successive_maxima();
            let mut inputs = basis.norms();
            inputs.sort_by(|a, b| b.cmp(a));
            assert_eq!(maxima[0], inputs[0], "seed {seed}");
            for (m, n) in maxima.iter().zip(&inputs) {
                assert!(m <= n, "seed {seed}");
            }
        }
    }

    #[test]
    fn orthogonal_outputs_split_unit_coordinate_combinations() {
        // β from the orthogonalizer, coefficients aᵢ ∈ Z_p with one fixed
        // coordinate equal to 1: the combination's norm is the largest of
        // the scaled part norms.
        use crate::gen::{gen_instance, mix_basis, WeightSpec};
        use rand::{Rng, SeedableRng};
        use rand_chacha::ChaCha8Rng;

        let mut rng = ChaCha8Rng::seed_from_u64(1313);
        let mut checked = 0u64;
        let mut seed = 0u64;
        while checked < 200 {
            let p = [2u64, 3, 5][(seed % 3) as usize];
            let dim = 2 + (seed % 3) as usize;
            let rank = 2 + (seed % (dim as u64 - 1)) as usize;
            let inst = gen_instance(p, dim, rank, WeightSpec::Zeros, (-2, 2), seed).unwrap();
            let beta = mix_basis(&inst.basis, 2 * rank + 2, seed)
                .orthogonalize_with_frame()
                .basis;
            let space = beta.space().clone();

            for pos in 0..rank {
                // Random p-adic integers: integer numerator, unit denominator.
                let mut coeffs: Vec<Rat> = (0..rank)
                    .map(|_| {
                        let num = rng.random_range(-(p as i64).pow(3)..=(p as i64).pow(3));
                        let mut den = rng.random_range(1..50i64);
                        if den % p as i64 == 0 {
                            den += 1;
                        }
                        rat_frac(num, den)
                    })
                    .collect();
                coeffs[pos] = crate::rat::rat(1);

                let mut sum = Vector::zeros(space.dim());
                let mut biggest = NormValue::Zero;
                for (a, b) in coeffs.iter().zip(beta.vectors()) {
                    sum = sum.add(&b.scaled(a));
                    biggest = crate::norm::norm_max(biggest, space.norm(&b.scaled(a)).unwrap());
                }
                assert_eq!(space.norm(&sum).unwrap(), biggest, "seed {seed} pos {pos}");
                checked += 1;
            }
            seed += 1;
        }
    }
}
