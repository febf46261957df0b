use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graded::{GradedSpace, GradedVector, Rational};

/// A homogeneous element of a graded space with exact coefficients.
#[derive(Clone, PartialEq)]
pub struct Element {
    space: Arc<GradedSpace>,
    degree: i64,
    coeffs: BTreeMap<usize, Rational>,
}

impl Element {
    pub fn zero(space: &Arc<GradedSpace>, degree: i64) -> Element {
        Element {
            space: space.clone(),
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// The basis vector with index `i`.
    pub fn basis(space: &Arc<GradedSpace>, i: usize) -> Element {
        Element {
            space: space.clone(),
            degree: space.degree(i),
            coeffs: BTreeMap::from([(i, Rational::one())]),
        }
    }

    pub fn basis_named(space: &Arc<GradedSpace>, name: &str) -> Result<Element> {
        Ok(Element::basis(space, space.index_of(name)?))
    }

    /// Builds an element from (index, coefficient) pairs, all of which must
    /// sit in `degree`. Repeated indices are summed.
    pub fn from_terms(
        space: &Arc<GradedSpace>,
        degree: i64,
        terms: impl IntoIterator<Item = (usize, Rational)>,
    ) -> Result<Element> {
        let mut e = Element::zero(space, degree);
        for (i, c) in terms {
            if c.is_zero() {
                continue;
            }
            if space.degree(i) != degree {
                return Err(Error::DegreeMismatch {
                    context: format!("basis element `{}`", space.name(i)),
                    expected: degree,
                    got: space.degree(i),
                });
            }
            e.add_term(i, &c);
        }
        Ok(e)
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn coefficient(&self, i: usize) -> Rational {
        self.coeffs.get(&i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coefficient_of(&self, name: &str) -> Result<Rational> {
        Ok(self.coefficient(self.space.index_of(name)?))
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> + '_ {
        self.coeffs.iter().map(|(&i, c)| (i, c))
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub(crate) fn add_term(&mut self, i: usize, c: &Rational) {
        let entry = self.coeffs.entry(i).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&i);
        }
    }

    fn check_compatible(&self, other: &Element) -> Result<()> {
        if !Arc::ptr_eq(&self.space, &other.space) && self.space != other.space {
            return Err(Error::SpaceMismatch(
                "elements live in different spaces".into(),
            ));
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                context: "element addition".into(),
                expected: self.degree,
                got: other.degree,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Element) -> Result<Element> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.add_scaled(&Rational::one(), other);
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Element) -> Result<Element> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.add_scaled(&-Rational::one(), other);
        Ok(out)
    }

    /// Parses a linear combination such as `1*x - 1/2*y` or `x + 2*z`.
    /// `degree` is required when the combination is zero.
    pub fn parse(text: &str, space: &Arc<GradedSpace>, degree: Option<i64>) -> Result<Element> {
        let mut terms = Vec::new();
        for (sign, body) in split_terms(text)? {
            let (coeff, name) = match body.split_once('*') {
                Some((c, n)) => (parse_rational(c.trim())?, n.trim()),
                None if body == "0" => continue,
                None => (Rational::one(), body.as_str()),
            };
            let i = space.index_of(name)?;
            terms.push((i, if sign { -coeff } else { coeff }));
        }
        let degree = match (degree, terms.iter().find(|(_, c)| !c.is_zero())) {
            (Some(d), _) => d,
            (None, Some(&(i, _))) => space.degree(i),
            (None, None) => {
                return Err(Error::Parse(format!(
                    "cannot infer the degree of the zero combination `{text}`"
                )))
            }
        };
        Element::from_terms(space, degree, terms)
    }
}

/// Splits `a*x + b*y - c*z` into (negated, body) pairs.
fn split_terms(text: &str) -> Result<Vec<(bool, String)>> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::Parse("empty linear combination".into()));
    }
    let mut out = Vec::new();
    let mut negated = false;
    let mut current = String::new();
    let mut expect_term = true;
    for ch in text.chars() {
        match ch {
            '+' | '-' if expect_term => {
                if ch == '-' {
                    negated = !negated;
                }
            }
            '+' | '-' if !current.trim().ends_with(['*', '/']) => {
                out.push((negated, current.trim().to_string()));
                current.clear();
                negated = ch == '-';
                expect_term = true;
            }
            c if c.is_whitespace() => current.push(c),
            c => {
                current.push(c);
                expect_term = false;
            }
        }
    }
    if expect_term {
        return Err(Error::Parse(format!("dangling operator in `{text}`")));
    }
    out.push((negated, current.trim().to_string()));
    Ok(out)
}

pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("invalid rational `{text}`"));
    match text.split_once('/') {
        Some((p, q)) => {
            let p = p.trim().parse::<num_bigint::BigInt>().map_err(|_| bad())?;
            let q = q.trim().parse::<num_bigint::BigInt>().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(
            text.trim().parse().map_err(|_| bad())?,
        )),
    }
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Formats `Σ c_k * label_k` canonically: `1*x - 1/2*y`, or `0`.
pub(crate) fn format_combination<'a>(
    terms: impl IntoIterator<Item = (&'a Rational, String)>,
) -> String {
    let mut out = String::new();
    for (c, label) in terms {
        if out.is_empty() {
            out.push_str(&format!("{}*{}", format_rational(c), label));
        } else if c.is_negative() {
            out.push_str(&format!(" - {}*{}", format_rational(&-c), label));
        } else {
            out.push_str(&format!(" + {}*{}", format_rational(c), label));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = format_combination(
            self.coeffs
                .iter()
                .map(|(&i, c)| (c, self.space.name(i).to_string())),
        );
        f.write_str(&s)
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element[deg {}]({})", self.degree, self)
    }
}

impl GradedVector for Element {
    fn degree(&self) -> i64 {
        self.degree
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_scaled(&mut self, c: &Rational, other: &Self) {
        assert_eq!(
            self.degree, other.degree,
            "adding elements of different degrees"
        );
        if c.is_zero() {
            return;
        }
        for (&i, x) in &other.coeffs {
            self.add_term(i, &(c * x));
        }
    }

    fn zero_like(&self) -> Self {
        Element::zero(&self.space, self.degree)
    }
}
