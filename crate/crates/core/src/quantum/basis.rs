use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Separator between per-atom labels in a product basis ("r,1").
pub const PRODUCT_SEPARATOR: char = ',';

/// Ordered, labeled set of atomic levels.
///
/// A product basis over several atoms keeps the per-atom dimensions in
/// `factors`; its labels are the per-atom labels joined by
/// [`PRODUCT_SEPARATOR`], first atom slowest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelBasis {
    labels: Vec<String>,
    factors: Vec<usize>,
}

impl LevelBasis {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyBasis);
        }
        let mut seen = HashSet::with_capacity(labels.len());
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLevel(l.clone()));
            }
        }
        let factors = vec![labels.len()];
        Ok(Self { labels, factors })
    }

    /// Tensor product of single-atom bases.
    pub fn product(parts: &[LevelBasis]) -> Result<Self> {
        let Some((first, rest)) = parts.split_first() else {
            return Err(Error::EmptyBasis);
        };
        let mut labels = first.labels.clone();
        let mut factors = first.factors.clone();
        for part in rest {
            labels = labels
                .iter()
                .flat_map(|a| {
                    part.labels
                        .iter()
                        .map(move |b| format!("{a}{PRODUCT_SEPARATOR}{b}"))
                })
                .collect();
            factors.extend_from_slice(&part.factors);
        }
        let mut basis = Self::new(labels)?;
        basis.factors = factors;
        Ok(basis)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    /// Per-atom dimensions; a single entry for an unfactored basis.
    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLevel {
                label: label.to_string(),
                available: self.labels.join(" "),
            })
    }

    pub fn contains(&self, label: &str) -> bool {
        self.labels.iter().any(|l| l == label)
    }
}

impl fmt::Display for LevelBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_empty() {
        assert_eq!(
            LevelBasis::new(["1", "r", "1"]),
            Err(Error::DuplicateLevel("1".into()))
        );
        assert_eq!(LevelBasis::new(Vec::<String>::new()), Err(Error::EmptyBasis));
    }

    #[test]
    fn product_labels_and_dimension() {
        let atom = LevelBasis::new(["1", "r", "r'"]).unwrap();
        let pair = LevelBasis::product(&[atom.clone(), atom]).unwrap();
        assert_eq!(pair.dim(), 9);
        assert_eq!(pair.factors(), &[3, 3]);
        assert_eq!(pair.label(0), "1,1");
        assert_eq!(pair.index_of("r,r'").unwrap(), 5);
        assert!(matches!(
            pair.index_of("x"),
            Err(Error::UnknownLevel { .. })
        ));
    }
}
