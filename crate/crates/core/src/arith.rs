//! Integer and rational helpers shared by every module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rational = BigRational;

#[inline]
pub fn int(v: i64) -> Int {
    Int::from(v)
}

#[inline]
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(int(n), int(d))
}

#[inline]
pub fn ratio(n: Int, d: Int) -> Rational {
    Rational::new(n, d)
}

#[inline]
pub fn to_rat(n: &Int) -> Rational {
    Rational::from_integer(n.clone())
}

/// Binomial coefficient with the combinatorial convention: zero whenever
/// `k < 0` or `n < k` (in particular for every negative `n`).
pub fn binom(n: &Int, k: &Int) -> Int {
    if k.is_negative() || n.is_negative() || n < k {
        return Int::zero();
    }
    let k = core::cmp::min(k.clone(), n - k);
    let mut acc = Int::one();
    let mut i = Int::zero();
    while i < k {
        // acc = C(n, i) at loop entry; the division is exact.
        acc *= n - &i;
        i += 1;
        acc /= &i;
    }
    acc
}

/// Gcd of a list of integers (zero for an empty or all-zero list).
pub fn gcd_all<'a, I: IntoIterator<Item = &'a Int>>(xs: I) -> Int {
    xs.into_iter().fold(Int::zero(), |g, x| g.gcd(x))
}

pub fn rat_ceil(q: &Rational) -> Int {
    q.ceil().to_integer()
}

pub fn rat_floor(q: &Rational) -> Int {
    q.floor().to_integer()
}

/// Exact conversion of a rational known to be integral.
pub fn as_integer(q: &Rational) -> Option<Int> {
    q.is_integer().then(|| q.to_integer())
}

/// Iterator over the inclusive integer range `lo..=hi`.
pub fn int_range(lo: Int, hi: Int) -> impl Iterator<Item = Int> {
    let mut cur = lo;
    core::iter::from_fn(move || {
        if cur > hi {
            None
        } else {
            let out = cur.clone();
            cur += 1;
            Some(out)
        }
    })
}

/// Integer square root (floor) of a non-negative integer.
pub fn isqrt(n: &Int) -> Int {
    if n.is_negative() {
        return Int::zero();
    }
    n.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: i64) -> Int {
        (1..=n).fold(Int::one(), |acc, i| acc * int(i))
    }

    #[test]
    fn binom_matches_factorials() {
        for n in 0..25 {
            for k in 0..=n {
                let expected = factorial(n) / (factorial(k) * factorial(n - k));
                assert_eq!(binom(&int(n), &int(k)), expected, "C({n},{k})");
            }
        }
    }

    #[test]
    fn binom_out_of_range_is_zero() {
        assert_eq!(binom(&int(17), &int(18)), Int::zero());
        assert_eq!(binom(&int(5), &int(-1)), Int::zero());
        assert_eq!(binom(&int(-1), &int(0)), Int::zero());
        assert_eq!(binom(&int(0), &int(0)), Int::one());
    }

    #[test]
    fn binom_large() {
        assert_eq!(binom(&int(18), &int(9)), int(48620));
    }

    #[test]
    fn gcd_and_rounding() {
        assert_eq!(gcd_all([int(4), int(-6), int(10)].iter()), int(2));
        assert_eq!(gcd_all([].iter()), int(0));
        assert_eq!(rat_ceil(&rat(1, 2)), int(1));
        assert_eq!(rat_floor(&rat(-1, 2)), int(-1));
        assert_eq!(isqrt(&int(26)), int(5));
        assert_eq!(int_range(int(-1), int(1)).count(), 3);
    }
}
