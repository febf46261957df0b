//! Exact graded linear algebra: named bases, homogeneous elements, Koszul
//! signs and graded-antisymmetric multilinear maps stored on canonical words.
//!
//! Sign convention: exchanging neighbouring arguments of degrees `p` and `q`
//! costs `-(-1)^{pq}`. Every other sign in the crate is derived from this one
//! through the décalage isomorphism (see [`word::decalage_sign`]).

mod element;
mod multimap;
pub mod sign;
mod space;
pub mod word;

use std::fmt;

pub use element::{format_rational, parse_rational, Element};
pub use multimap::MultiMap;
pub use sign::{koszul_sign, Sign};
pub use space::GradedSpace;
pub use word::{canonicalize_word, wedge_basis, Word};

pub type Rational = num_rational::BigRational;

/// Homogeneous vectors that the generic algorithms can add and scale.
pub trait GradedVector: Clone + fmt::Debug + PartialEq {
    fn degree(&self) -> i64;

    fn is_zero(&self) -> bool;

    /// `self += c * other`. Both sides must have the same degree.
    fn add_scaled(&mut self, c: &Rational, other: &Self);

    /// The zero vector of the same degree and ambient space.
    fn zero_like(&self) -> Self;

    fn scaled(&self, c: &Rational) -> Self {
        let mut out = self.zero_like();
        out.add_scaled(c, self);
        out
    }
}
