//! Residue sequences as ingested from FASTA or synthesized by the harness.

use crate::error::{Error, Result};

/// The gap character used in gapped alignment rows.
pub const GAP: u8 = b'-';

/// A named residue sequence.
///
/// Residues are normalized to uppercase ASCII letters at construction;
/// anything outside `A..=Z` (after uppercasing) is rejected.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sequence {
    id: String,
    residues: Vec<u8>,
}

impl Sequence {
    /// Build a sequence, uppercasing letters and rejecting non-alphabetic
    /// residue bytes.
    pub fn new(id: impl Into<String>, residues: impl AsRef<[u8]>) -> Result<Self> {
        let id = id.into();
        let raw = residues.as_ref();
        let mut out = Vec::with_capacity(raw.len());
        for (pos, &byte) in raw.iter().enumerate() {
            if byte.is_ascii_alphabetic() {
                out.push(byte.to_ascii_uppercase());
            } else {
                return Err(Error::InvalidSequence {
                    id,
                    msg: format!(
                        "non-alphabetic residue byte 0x{byte:02x} at position {}",
                        pos + 1
                    ),
                });
            }
        }
        Ok(Sequence { id, residues: out })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn residues(&self) -> &[u8] {
        &self.residues
    }

    /// Residue count (the `m` or `n` of an alignment grid).
    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }
}

impl std::fmt::Display for Sequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        // residues are ASCII by construction
        write!(f, "{}", std::str::from_utf8(&self.residues).unwrap())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_to_uppercase() {
        let s = Sequence::new("s1", b"acgTn").unwrap();
        assert_eq!(s.residues(), b"ACGTN");
        assert_eq!(s.len(), 5);
    }

    #[test]
    fn rejects_non_alphabetic() {
        let err = Sequence::new("x", b"AC1T").unwrap_err();
        match err {
            Error::InvalidSequence { id, msg } => {
                assert_eq!(id, "x");
                assert!(msg.contains("position 3"), "{msg}");
            }
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn rejects_gap_character() {
        assert!(Sequence::new("x", b"AC-T").is_err());
    }

    #[test]
    fn empty_sequence_is_allowed() {
        let s = Sequence::new("empty", b"").unwrap();
        assert!(s.is_empty());
        assert_eq!(s.len(), 0);
    }
}
