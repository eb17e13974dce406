use crate::error::{Error, Result};
use crate::genome::Genome;

/// `|a ∧ b| / |a ∨ b|`.
pub fn jaccard_similarity(a: &Genome, b: &Genome) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Shape(format!("genome lengths {} and {} differ", a.len(), b.len())));
    }
    let union = a.union_count(b);
    if union == 0 {
        return Err(Error::Invalid("Jaccard similarity of two empty genomes".into()));
    }
    Ok(a.intersection_count(b) as f64 / union as f64)
}

/// `1 - similarity`; callers guarantee equal lengths and non-empty unions.
#[inline]
pub(crate) fn distance(a: &Genome, b: &Genome) -> f64 {
    let union = a.union_count(b);
    if union == 0 {
        return 0.0;
    }
    1.0 - a.intersection_count(b) as f64 / union as f64
}
