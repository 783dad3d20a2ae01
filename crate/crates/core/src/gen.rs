//! Seeded random instance generator: lattices with a known orthogonal basis,
//! scrambled by valid elementary operations so solvers can be tested against
//! ground truth.

use num_traits::{Signed, ToPrimitive};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice::{ElementaryOp, LatticeBasis};
use crate::linalg::{Matrix, Vector};
use crate::norm::{NormValue, NormedSpace};
use crate::rat::{is_prime, p_power, rat, rat_frac, valuation, Rat};

/// How the generator chooses the space's frame weights.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightSpec {
    /// All weights zero (the plain maximum norm).
    Zeros,
    /// Independent uniform integers in [lo, hi].
    Uniform { lo: i64, hi: i64 },
}

/// A generated problem instance with its ground truth attached.
#[derive(Clone, Debug)]
pub struct GeneratedInstance {
    pub space: Arc<NormedSpace>,
    /// The scrambled basis handed to algorithms under test.
    pub basis: LatticeBasis,
    /// A known orthogonal basis of the same lattice (diagonal by design).
    pub orthogonal: LatticeBasis,
    /// Its norms sorted non-increasingly: the successive maxima.
    pub maxima: Vec<NormValue>,
    /// The valid operations that carried `orthogonal` to `basis`.
    pub scramble: Vec<ElementaryOp>,
}

/// Generates a reproducible instance: identity frame with chosen weights,
/// a diagonal basis p^(dᵢ)·e_(σ(i)) with valuations dᵢ drawn from
/// `val_range` (inclusive), then a scramble by elementary operations that
/// are valid at their application time. Equal seeds give equal instances.
pub fn gen_instance(
    p: u64,
    dim: usize,
    rank: usize,
    weights: WeightSpec,
    val_range: (i64, i64),
    seed: u64,
) -> Result<GeneratedInstance> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if dim == 0 {
        return Err(Error::InvalidParameter("dimension must be positive".into()));
    }
    if rank == 0 || rank > dim {
        return Err(Error::InvalidParameter(format!(
            "rank must lie in 1..={dim}, got {rank}"
        )));
    }
    let (lo, hi) = val_range;
    if lo > hi {
        return Err(Error::InvalidParameter(format!(
            "empty valuation range [{lo}, {hi}]"
        )));
    }
    if let WeightSpec::Uniform { lo, hi } = weights {
        if lo > hi {
            return Err(Error::InvalidParameter(format!(
                "empty weight range [{lo}, {hi}]"
            )));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let weight_vals: Vec<Rat> = match weights {
        WeightSpec::Zeros => vec![rat(0); dim],
        WeightSpec::Uniform { lo, hi } => {
            (0..dim).map(|_| rat(rng.random_range(lo..=hi))).collect()
        }
    };
    let space = Arc::new(NormedSpace::new(p, Matrix::identity(dim), weight_vals)?);

    // Diagonal rows on a random choice of σ(1..rank) distinct axes.
    let mut axes: Vec<usize> = (0..dim).collect();
    axes.shuffle(&mut rng);
    axes.truncate(rank);
    let mut rows = Vec::with_capacity(rank);
    for &axis in &axes {
        let d: i64 = rng.random_range(lo..=hi);
        let mut entries = vec![rat(0); dim];
        entries[axis] = p_power(p, d);
        rows.push(Vector::new(entries));
    }
    let orthogonal = LatticeBasis::new(space.clone(), rows)?;
    let mut maxima = orthogonal.norms();
    maxima.sort_by(|x, y| y.cmp(x));

    // Scramble with operations kept valid at their application time.
    let mut basis = orthogonal.clone();
    let mut scramble = Vec::new();
    let steps = 6 * rank * rank + 4;
    for _ in 0..steps {
        let op = random_valid_op(&mut rng, &basis, p, rank);
        basis = basis
            .apply_ops(std::slice::from_ref(&op))
            .expect("generated operations are valid by construction");
        scramble.push(op);
    }

    Ok(GeneratedInstance {
        space,
        basis,
        orthogonal,
        maxima,
        scramble,
    })
}

/// Random elementary operations, each valid on the evolving basis at its
/// application time; deterministic in `seed`. Replaying them through
/// `apply_ops` succeeds by construction.
pub fn scramble_ops(basis: &LatticeBasis, count: usize, seed: u64) -> Vec<ElementaryOp> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = basis.space().p();
    let rank = basis.rank();
    let mut cur = basis.clone();
    let mut ops = Vec::with_capacity(count);
    for _ in 0..count {
        let op = random_valid_op(&mut rng, &cur, p, rank);
        cur = cur
            .apply_ops(std::slice::from_ref(&op))
            .expect("generated operations are valid by construction");
        ops.push(op);
    }
    ops
}

/// A deterministic same-lattice remix of `basis` by unimodular row moves
/// *without* the norm constraint of the elementary operations — so the
/// result is generally not orthogonal, while every lattice invariant
/// (ground truth included) carries over unchanged.
pub fn mix_basis(basis: &LatticeBasis, rounds: usize, seed: u64) -> LatticeBasis {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = basis.space().p();
    let m = basis.rank();
    let mut vs: Vec<Vector> = basis.vectors().to_vec();
    for _ in 0..rounds {
        match if m == 1 { 1 } else { rng.random_range(0..4) } {
            0 => {
                let i = rng.random_range(0..m);
                let mut j = rng.random_range(0..m);
                while j == i {
                    j = rng.random_range(0..m);
                }
                vs.swap(i, j);
            }
            1 => {
                let i = rng.random_range(0..m);
                let u = random_unit(&mut rng, p);
                vs[i] = vs[i].scaled(&u);
            }
            _ => {
                let target = rng.random_range(0..m);
                let mut source = rng.random_range(0..m);
                while source == target {
                    source = rng.random_range(0..m);
                }
                // Any p-adic integer multiplier keeps the lattice; small
                // nonzero integers give vigorous mixing.
                let span = 2 * p as i64;
                let mut k = rng.random_range(-span..=span);
                if k == 0 {
                    k = 1;
                }
                vs[target] = vs[target].add_scaled(&rat(k), &vs[source]);
            }
        }
    }
    LatticeBasis::new(basis.space().clone(), vs).expect("unimodular mixing preserves independence")
}

/// A nonzero rational of valuation 0 with small numerator and denominator.
fn random_unit(rng: &mut ChaCha8Rng, p: u64) -> Rat {
    loop {
        let a = rng.random_range(-(2 * p as i64 + 3)..=2 * p as i64 + 3);
        let b = rng.random_range(1..=p as i64 + 2);
        if a == 0 {
            continue;
        }
        let u = rat_frac(a, b);
        if valuation(p, &u).expect("p validated") == crate::rat::Valuation::Finite(0) {
            return u;
        }
    }
}

/// A random elementary operation valid on the current basis.
fn random_valid_op(
    rng: &mut ChaCha8Rng,
    basis: &LatticeBasis,
    p: u64,
    rank: usize,
) -> ElementaryOp {
    match if rank == 1 { 1 } else { rng.random_range(0..4) } {
        0 => {
            let i = rng.random_range(0..rank);
            let mut j = rng.random_range(0..rank);
            while j == i {
                j = rng.random_range(0..rank);
            }
            ElementaryOp::Swap { i, j }
        }
        1 => ElementaryOp::ScaleUnit {
            index: rng.random_range(0..rank),
            factor: random_unit(rng, p),
        },
        _ => {
            let target = rng.random_range(0..rank);
            let mut source = rng.random_range(0..rank);
            while source == target {
                source = rng.random_range(0..rank);
            }
            // Smallest valuation that satisfies N(k·α_source) ≤ N(α_target),
            // plus a small random surplus.
            let norms = basis.norms();
            let (e_t, e_s) = match (&norms[target], &norms[source]) {
                (NormValue::Exp(a), NormValue::Exp(b)) => (a.clone(), b.clone()),
                _ => unreachable!("basis vectors are nonzero"),
            };
            let gap = &e_s - &e_t;
            let min_v = if gap.is_positive() {
                gap.ceil()
                    .to_integer()
                    .to_i64()
                    .expect("generator exponents are small")
            } else {
                0
            };
            let extra = rng.random_range(0..=2);
            let factor = p_power(p, min_v + extra) * random_unit(rng, p);
            ElementaryOp::AddMultiple {
                target,
                source,
                factor,
            }
        }
    }
}
