use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::genome::Genome;

/// A contextual dimension (sensor) and the feature columns derived from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dimension {
    pub name: String,
    pub columns: Vec<usize>,
}

impl Dimension {
    pub fn new(name: impl Into<String>, columns: Vec<usize>) -> Self {
        Dimension { name: name.into(), columns }
    }
}

/// Partition of the `L` feature columns into named dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureCatalog {
    dimensions: Vec<Dimension>,
    total_features: usize,
    column_dim: Vec<usize>,
}

impl FeatureCatalog {
    pub fn new(dimensions: Vec<Dimension>, total_features: usize) -> Result<Self> {
        let mut names = HashSet::new();
        let mut column_dim = vec![usize::MAX; total_features];
        for (d, dim) in dimensions.iter().enumerate() {
            if !names.insert(dim.name.as_str()) {
                return Err(Error::Dataset(format!("duplicate dimension name {:?}", dim.name)));
            }
            for &c in &dim.columns {
                if c >= total_features {
                    return Err(Error::Dataset(format!(
                        "dimension {:?} lists column {c}, but there are only {total_features} feature columns",
                        dim.name
                    )));
                }
                if column_dim[c] != usize::MAX {
                    return Err(Error::Dataset(format!(
                        "column {c} assigned to both {:?} and {:?}",
                        dimensions[column_dim[c]].name, dim.name
                    )));
                }
                column_dim[c] = d;
            }
        }
        if let Some(c) = column_dim.iter().position(|&d| d == usize::MAX) {
            return Err(Error::Dataset(format!("column {c} unassigned")));
        }
        Ok(FeatureCatalog { dimensions, total_features, column_dim })
    }

    /// `sizes[d]` consecutive columns per dimension, named `dim00`, `dim01`, ...
    pub fn contiguous(sizes: &[usize]) -> Result<Self> {
        let mut start = 0;
        let dims = sizes
            .iter()
            .enumerate()
            .map(|(d, &n)| {
                let dim = Dimension::new(format!("dim{d:02}"), (start..start + n).collect());
                start += n;
                dim
            })
            .collect();
        FeatureCatalog::new(dims, start)
    }

    /// Parses `name: a,b,c` lines. Columns are given as 0-based feature
    /// indices or as feature column names from `feature_names`.
    pub fn parse(text: &str, feature_names: &[String]) -> Result<Self> {
        let mut dims = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (name, cols) = line
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("catalog line {}: expected `name: columns`", ln + 1)))?;
            let columns = cols
                .split(',')
                .map(str::trim)
                .filter(|c| !c.is_empty())
                .map(|c| {
                    if let Ok(idx) = c.parse::<usize>() {
                        return Ok(idx);
                    }
                    feature_names
                        .iter()
                        .position(|f| f == c)
                        .ok_or_else(|| Error::Dataset(format!("catalog line {}: unknown column {c:?}", ln + 1)))
                })
                .collect::<Result<Vec<_>>>()?;
            dims.push(Dimension::new(name.trim(), columns));
        }
        FeatureCatalog::new(dims, feature_names.len())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for dim in &self.dimensions {
            let cols: Vec<String> = dim.columns.iter().map(|c| c.to_string()).collect();
            out.push_str(&format!("{}: {}\n", dim.name, cols.join(",")));
        }
        out
    }

    pub fn dimensions(&self) -> &[Dimension] {
        &self.dimensions
    }

    pub fn n_dimensions(&self) -> usize {
        self.dimensions.len()
    }

    pub fn total_features(&self) -> usize {
        self.total_features
    }

    pub fn dimension_of(&self, column: usize) -> usize {
        self.column_dim[column]
    }

    /// Selected-feature count per dimension.
    pub fn per_dimension_counts(&self, genome: &Genome) -> Vec<usize> {
        let mut counts = vec![0; self.dimensions.len()];
        for j in genome.ones_indices() {
            counts[self.column_dim[j]] += 1;
        }
        counts
    }

    /// Number of dimensions with at least one selected feature.
    pub fn dimension_count(&self, genome: &Genome) -> usize {
        self.per_dimension_counts(genome).iter().filter(|&&c| c > 0).count()
    }

    /// Names of the dimensions touched by `genome`.
    pub fn dimension_names(&self, genome: &Genome) -> Vec<&str> {
        self.per_dimension_counts(genome)
            .iter()
            .zip(&self.dimensions)
            .filter(|(&c, _)| c > 0)
            .map(|(_, d)| d.name.as_str())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|j| format!("f{j}")).collect()
    }

    #[test]
    fn parses_indices_and_names() {
        let c = FeatureCatalog::parse("A: 0\nB: f1, 2\n", &names(3)).unwrap();
        assert_eq!(c.n_dimensions(), 2);
        assert_eq!(c.dimension_of(2), 1);
    }

    #[test]
    fn unassigned_column_is_named() {
        let err = FeatureCatalog::parse("A: 0\n", &names(2)).unwrap_err();
        assert!(err.to_string().contains("column 1 unassigned"), "{err}");
    }

    #[test]
    fn overlap_and_duplicates_rejected() {
        assert!(FeatureCatalog::parse("A: 0,1\nB: 1\n", &names(2)).is_err());
        assert!(FeatureCatalog::parse("A: 0\nA: 1\n", &names(2)).is_err());
        assert!(FeatureCatalog::parse("A: 0,5\n", &names(2)).is_err());
    }

    #[test]
    fn dimension_counting() {
        let c = FeatureCatalog::contiguous(&[2, 3, 1]).unwrap();
        let g = Genome::from_indices(6, [0, 1, 5]);
        assert_eq!(c.per_dimension_counts(&g), vec![2, 0, 1]);
        assert_eq!(c.dimension_count(&g), 2);
        assert_eq!(c.dimension_names(&g), vec!["dim00", "dim02"]);
        let text = c.to_text();
        assert_eq!(FeatureCatalog::parse(&text, &names(6)).unwrap(), c);
    }
}
