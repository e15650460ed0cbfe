//! Pareto-front tables.

use super::sha256_hex;
use crate::error::DocumentError;
use crate::evolution::{dominates, ArchiveMember, RunArchive};
use crate::layout::Genome;
use crate::spec::Objective;

/// First 16 hex digits of the SHA-256 of the genome's little-endian bytes.
pub fn genome_hash(genome: &Genome) -> String {
    let bytes: Vec<u8> = genome.0.iter().flat_map(|g| g.to_le_bytes()).collect();
    sha256_hex(&bytes)[..16].to_string()
}

/// CSV with header `generation,<objectives...>,genome_hash`.
pub fn pareto_table(objectives: &[Objective], members: &[ArchiveMember]) -> Result<Vec<u8>, DocumentError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let mut header = vec!["generation".to_string()];
    header.extend(objectives.iter().map(|o| o.name().to_string()));
    header.push("genome_hash".to_string());
    w.write_record(&header)?;
    for m in members {
        let mut row = vec![m.generation.to_string()];
        row.extend(m.objectives.iter().map(|v| v.to_string()));
        row.push(genome_hash(&m.genome));
        w.write_record(&row)?;
    }
    w.into_inner()
        .map_err(|e| DocumentError::Io(e.into_error()))
}

pub fn write_pareto_csv(archive: &RunArchive) -> Result<Vec<u8>, DocumentError> {
    pareto_table(&archive.objectives, &archive.pareto)
}

/// Non-dominated union of several archives' fronts, exact duplicates dropped.
pub fn merge_fronts(archives: &[RunArchive]) -> Result<(Vec<Objective>, Vec<ArchiveMember>), DocumentError> {
    let Some(first) = archives.first() else {
        return Ok((Vec::new(), Vec::new()));
    };
    if archives.iter().any(|a| a.objectives != first.objectives) {
        return Err(DocumentError::Inconsistent(
            "archives were run with different objectives".to_string(),
        ));
    }
    let pool: Vec<&ArchiveMember> = archives.iter().flat_map(|a| &a.pareto).collect();
    let mut merged: Vec<ArchiveMember> = Vec::new();
    for m in &pool {
        let dominated = pool.iter().any(|o| dominates(&o.objectives, &m.objectives));
        if !dominated && !merged.iter().any(|k| k.objectives == m.objectives) {
            merged.push((*m).clone());
        }
    }
    Ok((first.objectives.clone(), merged))
}
