//! Exact rational scalars and p-adic valuations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator (the representation guarantees this).
pub type Rat = BigRational;

/// Shorthand for an integer-valued `Rat`.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Shorthand for `a/b`. Panics if `b == 0`.
pub fn rat_frac(a: i64, b: i64) -> Rat {
    Rat::new(BigInt::from(a), BigInt::from(b))
}

/// p-adic valuation: the exponent of `p` in a rational, with `+∞` for zero.
///
/// The derived order puts `Infinite` above every `Finite` value, matching
/// v_p(0) = +∞.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn is_finite(&self) -> bool {
        matches!(self, Valuation::Finite(_))
    }

    /// Finite value, panicking on `Infinite`. For call sites that already
    /// know the argument was nonzero.
    pub fn finite(&self) -> i64 {
        match self {
            Valuation::Finite(v) => *v,
            Valuation::Infinite => panic!("valuation of zero has no finite value"),
        }
    }
}

/// Checks primality by trial division; `p` fits in u64 so this is plenty.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d.checked_mul(d).map(|sq| sq <= p).unwrap_or(false) {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn ensure_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Exponent of `p` in a nonzero integer. Uses repeated squaring of the
/// divisor so deeply divisible inputs cost O(log v) big divisions.
pub(crate) fn int_valuation(p: &BigInt, n: &BigInt) -> i64 {
    debug_assert!(!n.is_zero());
    let mut n = n.abs();
    let mut v: i64 = 0;

    // Powers p, p^2, p^4, ... that still divide the remaining value.
    let mut ladder: Vec<(BigInt, i64)> = Vec::new();
    let mut q = p.clone();
    let mut step: i64 = 1;
    loop {
        let (quot, rem) = num_integer::div_rem(n.clone(), q.clone());
        if !rem.is_zero() {
            break;
        }
        n = quot;
        v += step;
        ladder.push((q.clone(), step));
        q = &q * &q;
        step *= 2;
    }
    // Come back down the ladder to pick up remaining factors.
    for (q, step) in ladder.into_iter().rev() {
        let (quot, rem) = num_integer::div_rem(n.clone(), q.clone());
        if rem.is_zero() {
            n = quot;
            v += step;
        }
    }
    v
}

/// p-adic valuation v_p(x) of a rational. Errors if `p` is not prime.
pub fn valuation(p: u64, x: &Rat) -> Result<Valuation> {
    ensure_prime(p)?;
    if x.is_zero() {
        return Ok(Valuation::Infinite);
    }
    let pb = BigInt::from(p);
    Ok(Valuation::Finite(
        int_valuation(&pb, x.numer()) - int_valuation(&pb, x.denom()),
    ))
}

/// Membership in Z_p: true iff v_p(x) ≥ 0, i.e. `p` does not divide the
/// denominator of `x` in lowest terms.
pub fn in_zp(p: u64, x: &Rat) -> Result<bool> {
    ensure_prime(p)?;
    if x.is_zero() {
        return Ok(true);
    }
    let pb = BigInt::from(p);
    Ok(!(x.denom() % &pb).is_zero())
}

/// p^k as a `Rat`, for possibly negative `k`.
pub fn p_power(p: u64, k: i64) -> Rat {
    let base = BigInt::from(p);
    if k >= 0 {
        Rat::from_integer(base.pow(k as u32))
    } else {
        Rat::new(BigInt::one(), base.pow((-k) as u32))
    }
}

/// Canonical string form: `a` for integers, `a/b` otherwise (lowest terms,
/// positive denominator).
pub fn format_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Strict inverse of [`format_rat`]: accepts exactly the canonical form and
/// nothing else (no whitespace, no `+`, no leading zeros, no `a/1`, no
/// non-lowest terms), so parse → format round-trips byte-identically.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = |why: &str| Error::InvalidParameter(format!("invalid rational {s:?}: {why}"));

    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };

    fn check_int(digits: &str, allow_sign: bool) -> Option<()> {
        let body = if allow_sign {
            digits.strip_prefix('-').unwrap_or(digits)
        } else {
            digits
        };
        if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        if body.len() > 1 && body.starts_with('0') {
            return None; // leading zero
        }
        if digits == "-0" {
            return None;
        }
        Some(())
    }

    check_int(num_str, true).ok_or_else(|| bad("numerator is not a canonical integer"))?;
    let numer: BigInt = num_str.parse().map_err(|_| bad("unparsable numerator"))?;

    let denom: BigInt = match den_str {
        None => BigInt::one(),
        Some(d) => {
            check_int(d, false).ok_or_else(|| bad("denominator is not a canonical integer"))?;
            let den: BigInt = d.parse().map_err(|_| bad("unparsable denominator"))?;
            if den.is_zero() {
                return Err(bad("zero denominator"));
            }
            if den.is_one() {
                return Err(bad("integers are written without a denominator"));
            }
            den
        }
    };

    if !denom.is_one() {
        let g = num_integer::gcd(numer.clone(), denom.clone());
        if !g.is_one() {
            return Err(bad("not in lowest terms"));
        }
    }
    Ok(Rat::new(numer, denom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn valuation_of_integers_and_rationals() {
        assert_eq!(valuation(2, &rat(8)).unwrap(), Valuation::Finite(3));
        assert_eq!(
            valuation(3, &rat_frac(2, 9)).unwrap(),
            Valuation::Finite(-2)
        );
        assert_eq!(valuation(5, &rat(0)).unwrap(), Valuation::Infinite);
        assert_eq!(valuation(2, &rat(1)).unwrap(), Valuation::Finite(0));
        assert_eq!(
            valuation(7, &rat_frac(-49, 3)).unwrap(),
            Valuation::Finite(2)
        );
    }

    #[test]
    fn valuation_rejects_composite_p() {
        assert!(matches!(valuation(4, &rat(1)), Err(Error::NotPrime(4))));
        assert!(matches!(valuation(1, &rat(1)), Err(Error::NotPrime(1))));
        assert!(matches!(in_zp(6, &rat(1)), Err(Error::NotPrime(6))));
    }

    #[test]
    fn valuation_handles_deep_powers() {
        let big = Rat::from_integer(BigInt::from(2).pow(100) * 3);
        assert_eq!(valuation(2, &big).unwrap(), Valuation::Finite(100));
    }

    #[test]
    fn valuation_order_puts_infinity_on_top() {
        assert!(Valuation::Finite(100) < Valuation::Infinite);
        assert!(Valuation::Finite(-3) < Valuation::Finite(0));
    }

    #[test]
    fn zp_membership() {
        assert!(in_zp(2, &rat_frac(3, 5)).unwrap());
        assert!(!in_zp(2, &rat_frac(1, 2)).unwrap());
        assert!(in_zp(7, &rat(0)).unwrap());
        assert!(in_zp(3, &rat(42)).unwrap());
    }

    #[test]
    fn prime_check() {
        let primes = [2u64, 3, 5, 7, 11, 13, 97, 7919];
        for p in primes {
            assert!(is_prime(p), "{p} should be prime");
        }
        for c in [0u64, 1, 4, 6, 9, 15, 91, 7917] {
            assert!(!is_prime(c), "{c} should not be prime");
        }
    }

    #[test]
    fn canonical_parse_accepts_canonical_forms() {
        for s in [
            "0",
            "5",
            "-3/7",
            "1/2",
            "-12",
            "16",
            "123456789012345678901/2",
        ] {
            let x = parse_rat(s).unwrap();
            assert_eq!(format_rat(&x), s, "round-trip of {s}");
        }
    }

    #[test]
    fn canonical_parse_rejects_everything_else() {
        for s in [
            "", " 1", "1 ", "+5", "2/4", "3/1", "1/-2", "007", "-0", "0/5", "1/0", "1.5", "--3",
            "3//4", "/2", "2/",
        ] {
            assert!(parse_rat(s).is_err(), "{s:?} should be rejected");
        }
    }

    #[test]
    fn p_power_examples() {
        assert_eq!(p_power(2, 3), rat(8));
        assert_eq!(p_power(2, -1), rat_frac(1, 2));
        assert_eq!(p_power(5, 0), rat(1));
    }

    fn rat_strategy() -> impl Strategy<Value = Rat> {
        (-2000i64..2000, 1i64..2000).prop_map(|(n, d)| rat_frac(n, d))
    }

    fn prime_strategy() -> impl Strategy<Value = u64> {
        prop::sample::select(vec![2u64, 3, 5])
    }

    proptest! {
        #[test]
        fn valuation_is_additive_under_multiplication(
            p in prime_strategy(), x in rat_strategy(), y in rat_strategy()
        ) {
            prop_assume!(!x.is_zero() && !y.is_zero());
            let vx = valuation(p, &x).unwrap().finite();
            let vy = valuation(p, &y).unwrap().finite();
            let vxy = valuation(p, &(&x * &y)).unwrap().finite();
            prop_assert_eq!(vxy, vx + vy);
        }

        #[test]
        fn valuation_of_sum_is_at_least_min(
            p in prime_strategy(), x in rat_strategy(), y in rat_strategy()
        ) {
            let vx = valuation(p, &x).unwrap();
            let vy = valuation(p, &y).unwrap();
            let vsum = valuation(p, &(&x + &y)).unwrap();
            prop_assert!(vsum >= vx.min(vy));
            if vx != vy {
                prop_assert_eq!(vsum, vx.min(vy));
            }
        }

        #[test]
        fn zp_is_closed_under_ring_ops(
            p in prime_strategy(), x in rat_strategy(), y in rat_strategy()
        ) {
            prop_assume!(in_zp(p, &x).unwrap() && in_zp(p, &y).unwrap());
            prop_assert!(in_zp(p, &(&x + &y)).unwrap());
            prop_assert!(in_zp(p, &(&x * &y)).unwrap());
        }

        #[test]
        fn parse_format_round_trip(x in rat_strategy()) {
            let s = format_rat(&x);
            prop_assert_eq!(parse_rat(&s).unwrap(), x);
        }
    }
}
