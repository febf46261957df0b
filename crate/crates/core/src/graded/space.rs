use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};

/// A finite graded vector space given by an ordered, named basis.
///
/// Declaration order is the canonical total order used for words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSpace {
    names: Vec<String>,
    degrees: Vec<i64>,
    index: HashMap<String, usize>,
}

impl GradedSpace {
    pub fn new<S: Into<String>>(basis: impl IntoIterator<Item = (S, i64)>) -> Result<Arc<Self>> {
        let mut names = Vec::new();
        let mut degrees = Vec::new();
        let mut index = HashMap::new();
        for (name, degree) in basis {
            let name = name.into();
            if name.is_empty() || name.chars().any(char::is_whitespace) {
                return Err(Error::Parse(format!("invalid basis name `{name}`")));
            }
            if index.insert(name.clone(), names.len()).is_some() {
                return Err(Error::DuplicateBasis(name));
            }
            names.push(name);
            degrees.push(degree);
        }
        Ok(Arc::new(GradedSpace {
            names,
            degrees,
            index,
        }))
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    /// Degree in the desuspended picture, `|x| - 1`.
    pub fn shifted_degree(&self, i: usize) -> i64 {
        self.degrees[i] - 1
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownBasis(name.to_string()))
    }

    pub fn basis(&self) -> impl Iterator<Item = (&str, i64)> + '_ {
        self.names
            .iter()
            .map(String::as_str)
            .zip(self.degrees.iter().copied())
    }

    pub fn basis_in_degree(&self, degree: i64) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.degrees[i] == degree)
            .collect()
    }

    pub fn dims_by_degree(&self) -> BTreeMap<i64, usize> {
        let mut dims = BTreeMap::new();
        for &d in &self.degrees {
            *dims.entry(d).or_insert(0) += 1;
        }
        dims
    }

    pub fn degrees_present(&self) -> Vec<i64> {
        self.dims_by_degree().into_keys().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates() {
        assert_eq!(
            GradedSpace::new([("a", 0), ("a", 1)]).unwrap_err(),
            Error::DuplicateBasis("a".into())
        );
    }

    #[test]
    fn dimensions_per_degree() {
        let v = GradedSpace::new([("a", 0), ("b", 1), ("c", 1), ("d", -2)]).unwrap();
        assert_eq!(
            v.dims_by_degree(),
            BTreeMap::from([(-2, 1), (0, 1), (1, 2)])
        );
        assert_eq!(v.basis_in_degree(1), vec![1, 2]);
        assert_eq!(v.index_of("d").unwrap(), 3);
        assert!(v.index_of("e").is_err());
    }
}
