use std::fmt::Write as _;

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::genome::Genome;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArchiveEntry {
    pub estimated_auc: f64,
    pub first_seen_generation: usize,
}

/// Every genome ever evaluated, in first-evaluation order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvaluationArchive {
    entries: IndexMap<Genome, ArchiveEntry>,
}

pub const ARCHIVE_HEADER: &str = "genome,auc,generation";

impl EvaluationArchive {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records `genome` unless already present; returns whether it was new.
    pub fn insert(&mut self, genome: Genome, estimated_auc: f64, generation: usize) -> bool {
        if self.entries.contains_key(&genome) {
            return false;
        }
        self.entries.insert(genome, ArchiveEntry { estimated_auc, first_seen_generation: generation });
        true
    }

    pub fn get(&self, genome: &Genome) -> Option<&ArchiveEntry> {
        self.entries.get(genome)
    }

    pub fn contains(&self, genome: &Genome) -> bool {
        self.entries.contains_key(genome)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Genome, &ArchiveEntry)> {
        self.entries.iter()
    }

    pub fn best_auc(&self) -> Option<f64> {
        self.entries.values().map(|e| e.estimated_auc).reduce(f64::max)
    }

    /// One `hex,auc,generation` line per genome after a header.
    pub fn to_text(&self) -> String {
        let mut out = String::from(ARCHIVE_HEADER);
        out.push('\n');
        for (g, e) in &self.entries {
            let _ = writeln!(out, "{},{},{}", g.to_hex(), e.estimated_auc, e.first_seen_generation);
        }
        out
    }

    pub fn from_text(text: &str, n_features: usize) -> Result<Self> {
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim() == ARCHIVE_HEADER => {}
            _ => return Err(Error::Parse(format!("archive must start with {ARCHIVE_HEADER:?}"))),
        }
        let mut archive = EvaluationArchive::new();
        for (k, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let bad = || Error::Parse(format!("archive line {}: {line:?}", k + 2));
            let mut fields = line.split(',');
            let (Some(hex), Some(auc), Some(gen), None) = (fields.next(), fields.next(), fields.next(), fields.next())
            else {
                return Err(bad());
            };
            let genome = Genome::from_hex(hex, n_features)?;
            let auc: f64 = auc.trim().parse().map_err(|_| bad())?;
            let gen: usize = gen.trim().parse().map_err(|_| bad())?;
            if !archive.insert(genome, auc, gen) {
                return Err(Error::Parse(format!("archive line {}: duplicate genome", k + 2)));
            }
        }
        Ok(archive)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dedups_and_round_trips() {
        let mut a = EvaluationArchive::new();
        let g = Genome::parse_bits("0110000001").unwrap();
        assert!(a.insert(g.clone(), 0.7312345678901234, 0));
        assert!(!a.insert(g.clone(), 0.1, 3));
        assert!(a.insert(Genome::parse_bits("1000000000").unwrap(), 0.6, 2));
        assert_eq!(a.len(), 2);
        assert_eq!(a.get(&g).unwrap().estimated_auc, 0.7312345678901234);
        let back = EvaluationArchive::from_text(&a.to_text(), 10).unwrap();
        assert_eq!(back, a);
        assert_eq!(back.to_text(), a.to_text());
        assert_eq!(a.best_auc(), Some(0.7312345678901234));
    }

    #[test]
    fn rejects_malformed_dumps() {
        assert!(EvaluationArchive::from_text("nope\n", 4).is_err());
        assert!(EvaluationArchive::from_text("genome,auc,generation\nf0,0.5\n", 4).is_err());
        assert!(EvaluationArchive::from_text("genome,auc,generation\nf0,0.5,0\nf0,0.6,1\n", 4).is_err());
        assert!(EvaluationArchive::from_text("genome,auc,generation\nf0f0,0.5,0\n", 4).is_err());
    }
}
