use std::ops::{Mul, MulAssign, Neg};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graded::Rational;

/// A sign in {+1, -1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `(-1)^exponent`.
    pub fn parity(exponent: i64) -> Sign {
        if exponent.rem_euclid(2) == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn is_plus(self) -> bool {
        self == Sign::Plus
    }

    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn to_rational(self) -> Rational {
        match self {
            Sign::Plus => Rational::one(),
            Sign::Minus => -Rational::one(),
        }
    }

    /// Applies the sign to a coefficient.
    pub fn apply(self, c: Rational) -> Rational {
        match self {
            Sign::Plus => c,
            Sign::Minus => -c,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl MulAssign for Sign {
    fn mul_assign(&mut self, rhs: Sign) {
        *self = *self * rhs;
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

/// Sign for exchanging two adjacent entries of degrees `p` and `q` under the
/// graded-antisymmetric convention `f(.., a, b, ..) = -(-1)^{|a||b|} f(.., b, a, ..)`.
pub fn transposition_sign(p: i64, q: i64) -> Sign {
    -Sign::parity(p * q)
}

/// Sign for exchanging adjacent entries in the symmetric (desuspended)
/// picture, where entries carry the shifted degrees `p - 1` and `q - 1`.
pub fn symmetric_transposition_sign(p_shifted: i64, q_shifted: i64) -> Sign {
    Sign::parity(p_shifted * q_shifted)
}

/// Koszul sign of reordering a tuple under the antisymmetric convention.
///
/// `permutation[k]` is the original position of the entry that ends up in
/// slot `k` (positions are 0-based); `degrees[i]` is the degree of the entry
/// originally at position `i`. Each pair of entries whose relative order is
/// reversed contributes `-(-1)^{pq}`.
pub fn koszul_sign(permutation: &[usize], degrees: &[i64]) -> Result<Sign> {
    let n = degrees.len();
    if permutation.len() != n {
        return Err(Error::LengthMismatch {
            what: "permutation",
            got: permutation.len(),
            expected: n,
        });
    }
    let mut seen = vec![false; n];
    for &p in permutation {
        if p >= n || seen[p] {
            return Err(Error::NotAPermutation(permutation.to_vec()));
        }
        seen[p] = true;
    }
    Ok(inversion_sign(permutation, |a, b| {
        transposition_sign(degrees[a], degrees[b])
    }))
}

/// Product of `pair_sign(a, b)` over all inverted pairs of a permutation
/// given in "original position per slot" form.
pub(crate) fn inversion_sign(
    permutation: &[usize],
    pair_sign: impl Fn(usize, usize) -> Sign,
) -> Sign {
    let mut sign = Sign::Plus;
    for i in 0..permutation.len() {
        for j in (i + 1)..permutation.len() {
            if permutation[i] > permutation[j] {
                sign *= pair_sign(permutation[i], permutation[j]);
            }
        }
    }
    sign
}

/// `1/n!` as an exact rational.
pub fn inverse_factorial(n: usize) -> Rational {
    let mut f = Rational::one();
    for k in 2..=n {
        f *= Rational::from_integer(k.into());
    }
    if f.is_zero() {
        unreachable!()
    }
    f.recip()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_plus() {
        assert_eq!(koszul_sign(&[0, 1], &[1, 2]).unwrap(), Sign::Plus);
    }

    #[test]
    fn swap_of_odd_entries_is_plus() {
        assert_eq!(koszul_sign(&[1, 0], &[1, 1]).unwrap(), Sign::Plus);
    }

    #[test]
    fn swap_of_mixed_entries_is_minus() {
        assert_eq!(koszul_sign(&[1, 0], &[1, 2]).unwrap(), Sign::Minus);
    }

    #[test]
    fn length_mismatch_is_an_input_error() {
        assert!(matches!(
            koszul_sign(&[0, 1, 2], &[1, 2]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            koszul_sign(&[0, 0], &[1, 2]),
            Err(Error::NotAPermutation(_))
        ));
    }

    #[test]
    fn factorials() {
        assert_eq!(inverse_factorial(0), Rational::one());
        assert_eq!(inverse_factorial(4), Rational::new(1.into(), 24.into()));
    }
}
