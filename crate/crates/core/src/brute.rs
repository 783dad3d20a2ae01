//! Independent brute-force references for the solvers. These share no code
//! with the reduction algorithms: they enumerate coefficient tuples directly
//! over integer representatives, so the two sides can check each other.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::LatticeBasis;
use crate::linalg::Vector;
use crate::norm::NormValue;
use crate::rat::{in_zp, int_valuation, rat, Rat};
use crate::solver::{CvpSolution, LvpSolution};

/// Default cap on enumeration nodes before giving up with an error.
pub const DEFAULT_ORACLE_BUDGET: u64 = 10_000_000;

/// Basis (and companions) on integer-scaled frame coordinates, with norms
/// mapped to i64 scores: score = W·(wⱼ − v_p(entry)) maximized over entries,
/// W clearing the weight denominators. Scaling every vector by the common
/// denominator shifts all scores by the same constant, so score comparisons
/// agree with norm comparisons.
struct ScaledView {
    rows: Vec<Vec<BigInt>>,
    extras: Vec<Vec<BigInt>>,
    row_scores: Vec<i64>,
    weight_scores: Vec<i64>,
    w_scale: i64,
    big_p: BigInt,
}

fn scaled_view(basis: &LatticeBasis, extra: &[&Vector]) -> Result<ScaledView> {
    let space = basis.space();
    let rows_q: Vec<Vector> = basis
        .vectors()
        .iter()
        .map(|v| space.frame_coordinates(v))
        .collect::<Result<_>>()?;
    let extras_q: Vec<Vector> = extra
        .iter()
        .map(|v| space.frame_coordinates(v))
        .collect::<Result<_>>()?;

    let mut scale = BigInt::one();
    for x in rows_q
        .iter()
        .chain(extras_q.iter())
        .flat_map(|r| r.entries())
    {
        scale = scale.lcm(x.denom());
    }
    let to_int = |v: &Vector| -> Vec<BigInt> {
        v.entries()
            .iter()
            .map(|x| (x * Rat::from(scale.clone())).to_integer())
            .collect()
    };

    let w_scale: i64 = {
        let mut w = BigInt::one();
        for wj in space.weights() {
            w = w.lcm(wj.denom());
        }
        w.to_i64().expect("weight denominators are small")
    };
    let weight_scores: Vec<i64> = space
        .weights()
        .iter()
        .map(|wj| {
            (wj * rat(w_scale))
                .to_integer()
                .to_i64()
                .expect("scaled weights are small")
        })
        .collect();

    let mut view = ScaledView {
        rows: rows_q.iter().map(|r| to_int(r)).collect(),
        extras: extras_q.iter().map(|r| to_int(r)).collect(),
        row_scores: Vec::new(),
        weight_scores,
        w_scale,
        big_p: BigInt::from(space.p()),
    };
    view.row_scores = view
        .rows
        .iter()
        .map(|r| view.score(r).expect("basis vectors are nonzero"))
        .collect();
    Ok(view)
}

impl ScaledView {
    /// Norm score of a scaled coordinate vector; `None` for the zero vector.
    fn score(&self, v: &[BigInt]) -> Option<i64> {
        let mut best: Option<i64> = None;
        for (j, x) in v.iter().enumerate() {
            if !x.is_zero() {
                let s = self.weight_scores[j] - self.w_scale * int_valuation(&self.big_p, x);
                best = Some(best.map_or(s, |b| b.max(s)));
            }
        }
        best
    }
}

/// Brute-force closest vector with the default node budget.
pub fn brute_cvp(basis: &LatticeBasis, target: &Vector) -> Result<CvpSolution> {
    brute_cvp_with_budget(basis, target, DEFAULT_ORACLE_BUDGET)
}

/// Exhaustive closest-vector search by digit-wise enumeration of integer
/// coefficient representatives.
///
/// A coefficient on basis vector αᵢ only matters modulo p^(Kᵢ) once changes
/// below that precision move the residual by strictly less than the best
/// distance found so far, so a pass enumerates the base-p digits of each
/// coefficient up to its cap, and re-runs with wider caps until they
/// stabilize; that fixpoint makes the final minimum exact. Digits are chosen
/// level by level (all axes' units digits, then all p¹ digits, …), which
/// prunes hard: once the residual norm exceeds what all remaining digit
/// choices can move, the ultrametric law freezes it, and only digit
/// combinations that keep cancelling the residual's leading part survive.
/// Ties pick the tuple found first — digits ascending from zero, axes in
/// input order — so the answer is deterministic.
///
/// `budget` bounds the number of enumeration nodes; exceeding it is an
/// error rather than a wrong answer.
pub fn brute_cvp_with_budget(
    basis: &LatticeBasis,
    target: &Vector,
    budget: u64,
) -> Result<CvpSolution> {
    let space = basis.space().clone();
    let p = space.p();
    let m = basis.rank();

    // Exact fast path: a target inside the lattice is its own answer.
    if let Some(c) = basis.matrix().express_in_rowspace(target)? {
        let mut inside = true;
        for x in c.entries() {
            if !in_zp(p, x)? {
                inside = false;
                break;
            }
        }
        if inside {
            return Ok(CvpSolution {
                vector: target.clone(),
                coefficients: c,
                distance: NormValue::Zero,
            });
        }
    }

    let view = scaled_view(basis, &[target])?;
    let t = view.extras[0].clone();

    // The target is not in the lattice (fast path above), so every residual
    // is nonzero; the zero tuple seeds the bound.
    let mut best_score = view
        .score(&t)
        .expect("nonzero residual for a target outside the lattice");
    let mut best_coeffs: Vec<BigInt> = vec![BigInt::zero(); m];
    let mut nodes: u64 = 0;

    let caps_for = |bound: i64| -> Vec<i64> {
        view.row_scores
            .iter()
            .map(|&e| ((e - bound).div_euclid(view.w_scale) + 1).max(0))
            .collect()
    };

    // A pass with caps Kᵢ is exhaustive for its own best value b whenever
    // Kᵢ ≥ caps_for(b) pointwise: any coefficient tuple outside the
    // enumerated representatives differs from one of them only by changes
    // that move the residual strictly below b, which by the ultrametric law
    // cannot disturb a distance that is still ≥ b.
    loop {
        let caps = caps_for(best_score);
        if caps.iter().any(|&k| k > 63) {
            // A distance this small needs more precision than any sane
            // budget covers.
            return Err(Error::BudgetExceeded {
                searched: nodes,
                budget,
            });
        }

        // p^level · row, for every level under the axis cap.
        let max_cap = *caps.iter().max().expect("rank ≥ 1");
        let mut scaled_rows: Vec<Vec<Vec<BigInt>>> = Vec::with_capacity(max_cap as usize);
        let mut powers: Vec<BigInt> = Vec::with_capacity(max_cap as usize);
        let mut power = BigInt::one();
        for _ in 0..max_cap {
            scaled_rows.push(
                view.rows
                    .iter()
                    .map(|row| row.iter().map(|x| x * &power).collect())
                    .collect(),
            );
            powers.push(power.clone());
            power *= &view.big_p;
        }

        let mut pass = CvpDigitPass {
            view: &view,
            caps: &caps,
            scaled_rows: &scaled_rows,
            powers: &powers,
            best: None,
            nodes: &mut nodes,
            budget,
        };
        let mut residual = t.clone();
        let mut coeffs = vec![BigInt::zero(); m];
        pass.level(0, &mut residual, &mut coeffs)?;
        let (pass_score, pass_coeffs) = pass.best.expect("the zero tuple is always enumerated");

        debug_assert!(pass_score <= best_score, "widening passes never regress");
        let done = caps_for(pass_score)
            .iter()
            .zip(&caps)
            .all(|(want, used)| want <= used);
        best_score = pass_score;
        best_coeffs = pass_coeffs;
        if done {
            break;
        }
    }

    let coefficients = Vector::new(best_coeffs.into_iter().map(Rat::from).collect());
    let vector = coefficients.mul_matrix(&basis.matrix());
    let distance = space.norm(&target.sub(&vector))?;
    Ok(CvpSolution {
        vector,
        coefficients,
        distance,
    })
}

/// One minimization pass under fixed per-axis digit caps.
struct CvpDigitPass<'a> {
    view: &'a ScaledView,
    caps: &'a [i64],
    /// scaled_rows[level][axis] = p^level · rows[axis].
    scaled_rows: &'a [Vec<Vec<BigInt>>],
    /// powers[level] = p^level.
    powers: &'a [BigInt],
    /// Best (score, coefficient tuple) of this pass; first found wins ties.
    best: Option<(i64, Vec<BigInt>)>,
    nodes: &'a mut u64,
    budget: u64,
}

impl CvpDigitPass<'_> {
    fn offer(&mut self, score: i64, coeffs: &[BigInt]) {
        match &self.best {
            Some((s, _)) if *s <= score => {}
            _ => self.best = Some((score, coeffs.to_vec())),
        }
    }

    /// Entry to a digit level: freeze or descend into this level's digits.
    fn level(&mut self, level: i64, residual: &mut [BigInt], coeffs: &mut [BigInt]) -> Result<()> {
        let score = self
            .view
            .score(residual)
            .expect("residuals stay nonzero for a target outside the lattice");
        // Everything the remaining digits can add is bounded by the largest
        // still-active row at this precision.
        let reach = self
            .view
            .row_scores
            .iter()
            .zip(self.caps)
            .filter(|(_, &cap)| cap > level)
            .map(|(&e, _)| e - self.view.w_scale * level)
            .max();
        match reach {
            // Ultrametric freeze: no remaining digit choice can change the
            // residual norm, so this node stands for all its completions.
            Some(r) if score > r => {
                self.offer(score, coeffs);
                Ok(())
            }
            Some(_) => self.digits(level, 0, residual, coeffs),
            // All axes are capped out: this is a full representative.
            None => {
                self.offer(score, coeffs);
                Ok(())
            }
        }
    }

    /// Chooses the level's digit for one axis and recurses to the next.
    fn digits(
        &mut self,
        level: i64,
        axis: usize,
        residual: &mut [BigInt],
        coeffs: &mut [BigInt],
    ) -> Result<()> {
        if axis == self.caps.len() {
            return self.level(level + 1, residual, coeffs);
        }
        if self.caps[axis] <= level {
            return self.digits(level, axis + 1, residual, coeffs);
        }

        let view = self.view;
        let step = &self.scaled_rows[level as usize][axis];
        let place = &self.powers[level as usize];
        let p = view.big_p.to_u64().expect("p fits in a machine word");
        for digit in 0..p {
            *self.nodes += 1;
            if *self.nodes > self.budget {
                return Err(Error::BudgetExceeded {
                    searched: *self.nodes,
                    budget: self.budget,
                });
            }
            if digit > 0 {
                for (r, x) in residual.iter_mut().zip(step) {
                    *r -= x;
                }
                coeffs[axis] += place;
            }
            self.digits(level, axis + 1, residual, coeffs)?;
        }
        // Undo the (p − 1) increments of this axis's digit.
        let taken = BigInt::from(p - 1);
        for (r, x) in residual.iter_mut().zip(step) {
            *r += x * &taken;
        }
        coeffs[axis] -= place * &taken;
        Ok(())
    }
}

/// Brute-force witness for the second ladder value: the largest lattice norm
/// strictly below λ₁, with a vector attaining it.
///
/// Enumerates nonzero coefficient tuples modulo p²; that is exhaustive
/// because the answer is at least p⁻¹·λ₁ (p times a maximal basis vector)
/// while truncating coefficients mod p² perturbs any lattice vector by at
/// most p⁻²·λ₁, strictly less. Subtrees whose partial sum already exceeds
/// every remaining row collapse to a single value by the ultrametric law,
/// which keeps the search fast when the basis norms are distinct.
pub fn brute_lambda2(basis: &LatticeBasis) -> Result<LvpSolution> {
    let space = basis.space().clone();
    let p = space.p();
    let m = basis.rank();

    let view = scaled_view(basis, &[])?;
    let lambda1_score = *view.row_scores.iter().max().expect("rank ≥ 1");

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| view.row_scores[b].cmp(&view.row_scores[a]).then(a.cmp(&b)));
    let mut suffix_max = vec![i64::MIN; m + 1];
    for d in (0..m).rev() {
        suffix_max[d] = suffix_max[d + 1].max(view.row_scores[order[d]]);
    }

    let mut pass = Lambda2Pass {
        view: &view,
        order: &order,
        modulus: BigInt::from(p * p),
        lambda1_score,
        suffix_max: &suffix_max,
        best: None,
    };
    let mut partial = vec![BigInt::zero(); space.dim()];
    let mut coeffs = vec![BigInt::zero(); m];
    pass.dfs(0, &mut partial, &mut coeffs);
    let (_, best_coeffs) = pass
        .best
        .expect("p·(maximal basis vector) is always a candidate");

    let coefficients = Vector::new(best_coeffs.into_iter().map(Rat::from).collect());
    let vector = coefficients.mul_matrix(&basis.matrix());
    let norm = space.norm(&vector)?;
    Ok(LvpSolution { vector, norm })
}

/// Maximization pass for the second ladder value.
struct Lambda2Pass<'a> {
    view: &'a ScaledView,
    order: &'a [usize],
    modulus: BigInt,
    lambda1_score: i64,
    suffix_max: &'a [i64],
    /// Best (score, coefficient tuple) so far; first found wins ties.
    best: Option<(i64, Vec<BigInt>)>,
}

impl Lambda2Pass<'_> {
    fn offer(&mut self, score: i64, coeffs: &[BigInt]) {
        if score >= self.lambda1_score {
            return;
        }
        match &self.best {
            Some((s, _)) if *s >= score => {}
            _ => self.best = Some((score, coeffs.to_vec())),
        }
    }

    fn dfs(&mut self, depth: usize, partial: &mut [BigInt], coeffs: &mut [BigInt]) {
        let m = self.order.len();
        let score = self.view.score(partial);
        if depth == m {
            if let Some(s) = score {
                self.offer(s, coeffs);
            }
            return;
        }
        if let Some(s) = score {
            // Ultrametric collapse: every completion keeps this exact norm.
            if s > self.suffix_max[depth] {
                self.offer(s, coeffs);
                return;
            }
        }
        // Nothing below can beat the current best: the subtree's values are
        // bounded by max(partial, the remaining rows).
        let bound = score.unwrap_or(i64::MIN).max(self.suffix_max[depth]);
        if let Some((b, _)) = &self.best {
            if bound <= *b {
                return;
            }
        }

        let axis = self.order[depth];
        let row = self.view.rows[axis].clone();
        let mut c = BigInt::zero();
        loop {
            coeffs[axis] = c.clone();
            self.dfs(depth + 1, partial, coeffs);
            c += BigInt::one();
            if c >= self.modulus {
                break;
            }
            for (r, x) in partial.iter_mut().zip(&row) {
                *r += x;
            }
        }
        let taken = self.modulus.clone() - BigInt::one();
        for (r, x) in partial.iter_mut().zip(&row) {
            *r -= x * &taken;
        }
        coeffs[axis] = BigInt::zero();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{gen_instance, mix_basis, WeightSpec};
    use crate::solver::{cvp_with_frame, lvp_with_frame};
    use crate::testutil::{example_basis, standard4};

    fn vec4(a: i64, b: i64, c: i64, d: i64) -> Vector {
        Vector::from_ints(&[a, b, c, d])
    }

    #[test]
    fn brute_cvp_matches_the_worked_distances() {
        let s = standard4();
        let b = example_basis(&s);
        let cases = [
            (vec4(1, 2, 8, 0), NormValue::exp_int(-3)),
            (vec4(1, 2, 8, 2), NormValue::exp_int(-1)),
            (vec4(0, 0, 16, 0), NormValue::exp_int(-4)),
        ];
        for (t, expected) in cases {
            let sol = brute_cvp(&b, &t).unwrap();
            assert_eq!(sol.distance, expected);
            assert_eq!(sol.vector, sol.coefficients.mul_matrix(&b.matrix()));
            assert_eq!(s.norm(&t.sub(&sol.vector)).unwrap(), sol.distance);
        }
    }

    #[test]
    fn brute_cvp_membership_fast_path() {
        let s = standard4();
        let b = example_basis(&s);
        let t = b.vectors()[2].scaled(&crate::rat::rat_frac(3, 5));
        // 3/5 is a 2-adic integer, so t is in the lattice.
        let sol = brute_cvp(&b, &t).unwrap();
        assert_eq!(sol.distance, NormValue::Zero);
        assert_eq!(sol.vector, t);
    }

    #[test]
    fn brute_cvp_agrees_with_the_solver_on_generated_instances() {
        for seed in 0..10 {
            let inst = gen_instance(2, 3, 2, WeightSpec::Zeros, (-2, 2), seed).unwrap();
            let basis = mix_basis(&inst.basis, 8, seed);
            let t = Vector::from_ints(&[seed as i64 + 1, 3, 5 - seed as i64]);
            let fast = cvp_with_frame(&basis, &t).unwrap();
            let slow = brute_cvp(&basis, &t).unwrap();
            assert_eq!(fast.distance, slow.distance, "seed {seed}");
        }
    }

    #[test]
    fn brute_cvp_respects_its_budget() {
        let s = standard4();
        let b = example_basis(&s);
        let err = brute_cvp_with_budget(&b, &vec4(1, 2, 8, 0), 3).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn brute_lambda2_on_the_example() {
        let s = standard4();
        let b = example_basis(&s);
        let sol = brute_lambda2(&b).unwrap();
        assert_eq!(sol.norm, NormValue::exp_int(-1));
        assert_eq!(s.norm(&sol.vector).unwrap(), sol.norm);
    }

    #[test]
    fn brute_lambda2_equal_norm_case() {
        // All basis norms equal: the answer must be p⁻¹·λ₁ and the collapse
        // pruning must not skip it.
        let s = std::sync::Arc::new(crate::norm::NormedSpace::standard(3, 3).unwrap());
        let b = LatticeBasis::new(
            s,
            vec![
                Vector::from_ints(&[1, 0, 0]),
                Vector::from_ints(&[0, 1, 0]),
                Vector::from_ints(&[0, 0, 1]),
            ],
        )
        .unwrap();
        let sol = brute_lambda2(&b).unwrap();
        assert_eq!(sol.norm, NormValue::exp_int(-1));
    }

    #[test]
    fn brute_lambda2_agrees_with_lvp_on_generated_instances() {
        for seed in 20..30 {
            let inst = gen_instance(
                3,
                3,
                2,
                WeightSpec::Uniform { lo: -1, hi: 1 },
                (-1, 2),
                seed,
            )
            .unwrap();
            let basis = mix_basis(&inst.basis, 8, seed);
            let fast = lvp_with_frame(&basis).unwrap();
            let slow = brute_lambda2(&basis).unwrap();
            assert_eq!(fast.norm, slow.norm, "seed {seed}");
        }
    }

    #[test]
    fn brute_lambda2_handles_the_wide_case_quickly() {
        // p = 5, rank 4: 5⁸ raw tuples; the pruned search must finish fast.
        let inst = gen_instance(5, 4, 4, WeightSpec::Zeros, (-3, 4), 123).unwrap();
        let basis = mix_basis(&inst.basis, 10, 9);
        let started = std::time::Instant::now();
        let sol = brute_lambda2(&basis).unwrap();
        assert!(
            started.elapsed().as_secs() < 20,
            "took {:?}",
            started.elapsed()
        );
        assert_eq!(sol.norm, lvp_with_frame(&basis).unwrap().norm);
    }
}
