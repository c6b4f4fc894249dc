//! Canonical JSON design files.
//!
//! One object per file with sorted keys and blocks in canonical form, so a
//! fixed design always serializes to the same bytes. Classical objects
//! (GDDs, candelabra systems) store each block as `k` one-point rows.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::block::{Point, SplitBlock};
use super::types::{CandelabraSystem, Gdd, SplittingCandelabra, SplittingDesign, SplittingGdd};
use super::verify::{self, VerifyReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DesignKind {
    SplittingDesign,
    Gdd,
    SplittingGdd,
    Candelabra,
    SplittingCandelabra,
}

impl DesignKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DesignKind::SplittingDesign => "splitting_design",
            DesignKind::Gdd => "gdd",
            DesignKind::SplittingGdd => "splitting_gdd",
            DesignKind::Candelabra => "candelabra",
            DesignKind::SplittingCandelabra => "splitting_candelabra",
        }
    }
}

/// On-disk shape. Field names are the wire format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignFile {
    pub kind: DesignKind,
    pub t: usize,
    pub v: usize,
    pub k: usize,
    pub c: usize,
    pub lambda: u32,
    #[serde(default)]
    pub stem: Vec<Point>,
    #[serde(default)]
    pub groups: Vec<Vec<Point>>,
    pub blocks: Vec<Vec<Vec<Point>>>,
    #[serde(default)]
    pub provenance: Value,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyDesign {
    SplittingDesign(SplittingDesign),
    Gdd(Gdd),
    SplittingGdd(SplittingGdd),
    Candelabra(CandelabraSystem),
    SplittingCandelabra(SplittingCandelabra),
}

#[derive(Debug, thiserror::Error)]
pub enum DesignFileError {
    #[error("cannot parse design file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("inconsistent design file: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn classical(blocks: Vec<Vec<Vec<Point>>>) -> Result<Vec<Vec<Point>>, DesignFileError> {
    blocks
        .into_iter()
        .map(|rows| {
            if rows.iter().any(|r| r.len() != 1) {
                return Err(DesignFileError::Inconsistent("classical block rows must hold one point".into()));
            }
            Ok(rows.into_iter().map(|r| r[0]).collect())
        })
        .collect()
}

fn split(blocks: Vec<Vec<Vec<Point>>>) -> Vec<SplitBlock> {
    blocks.into_iter().map(SplitBlock::from_rows_unchecked).collect()
}

fn rows_of(blocks: &[SplitBlock]) -> Vec<Vec<Vec<Point>>> {
    blocks.iter().map(|b| b.rows().to_vec()).collect()
}

fn singletons(blocks: &[Vec<Point>]) -> Vec<Vec<Vec<Point>>> {
    blocks.iter().map(|b| b.iter().map(|&p| vec![p]).collect()).collect()
}

impl AnyDesign {
    pub fn kind(&self) -> DesignKind {
        match self {
            AnyDesign::SplittingDesign(_) => DesignKind::SplittingDesign,
            AnyDesign::Gdd(_) => DesignKind::Gdd,
            AnyDesign::SplittingGdd(_) => DesignKind::SplittingGdd,
            AnyDesign::Candelabra(_) => DesignKind::Candelabra,
            AnyDesign::SplittingCandelabra(_) => DesignKind::SplittingCandelabra,
        }
    }

    pub fn verify(&self) -> VerifyReport {
        match self {
            AnyDesign::SplittingDesign(d) => verify::verify_splitting_design(d),
            AnyDesign::Gdd(g) => verify::verify_gdd(g),
            AnyDesign::SplittingGdd(g) => verify::verify_splitting_gdd(g),
            AnyDesign::Candelabra(c) => verify::verify_candelabra(c),
            AnyDesign::SplittingCandelabra(c) => verify::verify_splitting_candelabra(c),
        }
    }

    pub fn block_count(&self) -> usize {
        match self {
            AnyDesign::SplittingDesign(d) => d.blocks.len(),
            AnyDesign::Gdd(g) => g.blocks.len(),
            AnyDesign::SplittingGdd(g) => g.blocks.len(),
            AnyDesign::Candelabra(c) => c.blocks.len(),
            AnyDesign::SplittingCandelabra(c) => c.blocks.len(),
        }
    }

    pub fn to_file(&self, provenance: Value) -> DesignFile {
        let kind = self.kind();
        match self {
            AnyDesign::SplittingDesign(d) => DesignFile {
                kind, t: d.t, v: d.v, k: d.k, c: d.c, lambda: d.lambda,
                stem: vec![], groups: vec![], blocks: rows_of(&d.blocks), provenance,
            },
            AnyDesign::Gdd(g) => DesignFile {
                kind, t: g.t, v: g.v, k: g.k, c: 1, lambda: 1,
                stem: vec![], groups: g.groups.clone(), blocks: singletons(&g.blocks), provenance,
            },
            AnyDesign::SplittingGdd(g) => DesignFile {
                kind, t: g.t, v: g.v, k: g.k, c: g.c, lambda: 1,
                stem: vec![], groups: g.groups.clone(), blocks: rows_of(&g.blocks), provenance,
            },
            AnyDesign::Candelabra(cs) => DesignFile {
                kind, t: cs.t, v: cs.v, k: cs.k, c: 1, lambda: 1,
                stem: cs.stem.clone(), groups: cs.groups.clone(), blocks: singletons(&cs.blocks), provenance,
            },
            AnyDesign::SplittingCandelabra(cs) => DesignFile {
                kind, t: cs.t, v: cs.v, k: cs.k, c: cs.c, lambda: 1,
                stem: cs.stem.clone(), groups: cs.groups.clone(), blocks: rows_of(&cs.blocks), provenance,
            },
        }
    }

    /// Canonical bytes: sorted keys, one trailing newline.
    pub fn to_canonical_json(&self, provenance: Value) -> String {
        let value = serde_json::to_value(self.to_file(provenance)).expect("design files serialize");
        let mut s = serde_json::to_string(&value).expect("values serialize");
        s.push('\n');
        s
    }
}

impl DesignFile {
    pub fn parse(text: &str) -> Result<Self, DesignFileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self, DesignFileError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Rebuilds the typed object. Shape problems inside blocks are left for
    /// the verifier to report; only the header must be consistent.
    pub fn into_design(self) -> Result<AnyDesign, DesignFileError> {
        let declared_v = self.v;
        let design = match self.kind {
            DesignKind::SplittingDesign => {
                let mut d = SplittingDesign::new(self.t, self.v, self.k, self.c, split(self.blocks));
                d.lambda = self.lambda;
                AnyDesign::SplittingDesign(d)
            }
            DesignKind::Gdd => AnyDesign::Gdd(Gdd::new(self.t, self.k, self.groups, classical(self.blocks)?)),
            DesignKind::SplittingGdd => {
                AnyDesign::SplittingGdd(SplittingGdd::new(self.t, self.k, self.c, self.groups, split(self.blocks)))
            }
            DesignKind::Candelabra => AnyDesign::Candelabra(CandelabraSystem::new(
                self.t, self.k, self.stem, self.groups, classical(self.blocks)?,
            )),
            DesignKind::SplittingCandelabra => AnyDesign::SplittingCandelabra(SplittingCandelabra::new(
                self.t, self.k, self.c, self.stem, self.groups, split(self.blocks),
            )),
        };
        let derived_v = match &design {
            AnyDesign::SplittingDesign(d) => d.v,
            AnyDesign::Gdd(g) => g.v,
            AnyDesign::SplittingGdd(g) => g.v,
            AnyDesign::Candelabra(c) => c.v,
            AnyDesign::SplittingCandelabra(c) => c.v,
        };
        if derived_v != declared_v {
            return Err(DesignFileError::Inconsistent(format!(
                "header says v = {declared_v} but groups and stem cover {derived_v} points"
            )));
        }
        Ok(design)
    }
}
