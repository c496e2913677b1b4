//! Fibonacci counts of word classes and the identity length bounds they give.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::words::{enumerate_class, WordClassSpec};

/// Largest index `fib_binet` evaluates; beyond it `f64` loses integer precision.
pub const BINET_MAX_N: u32 = 70;

/// `F_n` with `F_0 = 0`, `F_1 = 1`.
pub fn fib(n: u32) -> BigUint {
    let (mut a, mut b) = (BigUint::zero(), BigUint::one());
    for _ in 0..n {
        let c = &a + &b;
        a = std::mem::replace(&mut b, c);
    }
    a
}

/// `F_n` from the closed form `((1+√5)ⁿ − (1−√5)ⁿ) / (2ⁿ√5)` in `f64`, rounded.
pub fn fib_binet(n: u32) -> Result<u64> {
    if n > BINET_MAX_N {
        return Err(Error::precondition(format!(
            "closed form evaluated only for n <= {BINET_MAX_N}"
        )));
    }
    let s5 = 5f64.sqrt();
    let n = n as i32;
    let v = ((1.0 + s5).powi(n) - (1.0 - s5).powi(n)) / (2f64.powi(n) * s5);
    Ok(v.round() as u64)
}

/// `|W_n[{x, y}, {1, 2}]|` by enumeration, with `2F_n` and `2F_{n+1}` for comparison.
pub fn class_count(n: usize) -> Result<(usize, BigUint, BigUint)> {
    let spec = WordClassSpec::xy(n)?;
    let count = enumerate_class(&spec).len();
    let n = n as u32;
    Ok((count, fib(n) * 2u32, fib(n + 1) * 2u32))
}

/// The two closed-form length bounds for identities of `n × n` triangular
/// matrices: `8(n+1)F_n + 2` and `8nF_{n−1} + 2`.
pub fn closed_form_bounds(n: u32) -> Result<(BigUint, BigUint)> {
    if n < 1 {
        return Err(Error::precondition("dimension must be at least 1"));
    }
    let a = fib(n) * (8 * (n + 1)) + 2u32;
    let b = fib(n - 1) * (8 * n) + 2u32;
    Ok((a, b))
}

/// `8·dim·(|W_{dim−1}| / 2) + 2`, the length bound with the class size taken
/// from enumeration rather than a closed form.
pub fn enumerated_bound(dim: usize) -> Result<usize> {
    if dim < 3 {
        return Err(Error::precondition("dimension must be at least 3"));
    }
    let (count, _, _) = class_count(dim - 1)?;
    Ok(8 * dim * (count / 2) + 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_values() {
        let expect = [0u32, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55];
        for (n, f) in expect.iter().enumerate() {
            assert_eq!(fib(n as u32), BigUint::from(*f));
        }
        assert_eq!(fib(70), BigUint::from(190_392_490_709_135u64));
    }

    #[test]
    fn closed_form_agrees_up_to_limit() {
        for n in 0..=BINET_MAX_N {
            assert_eq!(BigUint::from(fib_binet(n).unwrap()), fib(n), "n = {n}");
        }
        assert!(fib_binet(BINET_MAX_N + 1).is_err());
    }

    #[test]
    fn class_count_for_four() {
        let (count, two_fn, two_fn1) = class_count(4).unwrap();
        assert_eq!(count, 10);
        assert_eq!(two_fn, BigUint::from(6u32));
        assert_eq!(two_fn1, BigUint::from(10u32));
    }

    #[test]
    fn bounds_for_three() {
        let (a, b) = closed_form_bounds(3).unwrap();
        assert_eq!(a, BigUint::from(66u32));
        assert_eq!(b, BigUint::from(26u32));
        // |W_2| = 4, so 8·3·2 + 2
        assert_eq!(enumerated_bound(3).unwrap(), 50);
        assert_eq!(closed_form_bounds(2).unwrap().0, BigUint::from(26u32));
        assert_eq!(closed_form_bounds(5).unwrap().0, BigUint::from(242u32));
    }

    #[test]
    fn class_counts_follow_the_recurrence() {
        let c: Vec<usize> = (2..=15).map(|n| class_count(n).unwrap().0).collect();
        assert_eq!((c[0], c[1]), (4, 6));
        for i in 2..c.len() {
            assert_eq!(c[i], c[i - 1] + c[i - 2]);
        }
    }
}
