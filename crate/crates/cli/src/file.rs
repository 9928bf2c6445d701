//! The `fanifold/1` JSON file format.

use fanifold_core::fan::Fan;
use fanifold_core::fanifold::{Arrow, Fanifold, Stratum};
use fanifold_core::lattice::{IntMatrix, LatticeMap, Vector};
use serde::{Deserialize, Serialize};

pub const FORMAT: &str = "fanifold/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanifoldFile {
    pub format: String,
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compact: Option<bool>,
    pub strata: Vec<StratumRecord>,
    pub arrows: Vec<ArrowRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumRecord {
    pub id: String,
    pub dim: usize,
    pub interior: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi_c: Option<i64>,
    pub lattice_rank: usize,
    pub fan: FanRecord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanRecord {
    pub rays: Vec<Vector>,
    pub cones: Vec<Vec<usize>>,
    /// Images of the standard basis under `β`, one per ray.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stacky_beta: Option<Vec<Vector>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowRecord {
    pub from: String,
    pub to: String,
    pub cone: Vec<usize>,
    pub quotient_matrix: Vec<Vector>,
}

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("cannot parse fanifold file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unsupported format {0:?}, expected {FORMAT:?}")]
    Format(String),
    #[error("{0}")]
    Content(String),
}

impl FanifoldFile {
    pub fn parse(text: &str) -> Result<FanifoldFile, FileError> {
        let file: FanifoldFile = serde_json::from_str(text)?;
        if file.format != FORMAT {
            return Err(FileError::Format(file.format));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("file records serialize");
        s.push('\n');
        s
    }

    pub fn to_fanifold(&self) -> Result<Fanifold, FileError> {
        let content = |m: String| FileError::Content(m);
        let mut strata = vec![];
        for s in &self.strata {
            let fan = match &s.fan.stacky_beta {
                Some(beta) => {
                    if beta.len() != s.fan.rays.len() {
                        return Err(content(format!("stratum {}: stacky_beta needs one column per ray", s.id)));
                    }
                    let fan = Fan::with_stacky(s.lattice_rank, beta.clone(), s.fan.cones.clone()).map_err(|e| content(format!("stratum {}: {e}", s.id)))?;
                    if fan.rays() != s.fan.rays.as_slice() {
                        return Err(content(format!("stratum {}: stacky_beta is not a positive multiple of the rays", s.id)));
                    }
                    fan
                }
                None => Fan::new(s.lattice_rank, s.fan.rays.clone(), s.fan.cones.clone()).map_err(|e| content(format!("stratum {}: {e}", s.id)))?,
            };
            let mut stratum = Stratum::new(s.id.clone(), s.dim, fan);
            stratum.interior = s.interior;
            if let Some(c) = s.chi_c {
                stratum.chi_c = c;
            }
            strata.push(stratum);
        }
        let index = |id: &str| strata.iter().position(|s| s.id == id).ok_or_else(|| content(format!("unknown stratum {id:?}")));
        let mut arrows = vec![];
        for a in &self.arrows {
            let (from, to) = (index(&a.from)?, index(&a.to)?);
            let (g, f) = (&strata[from], &strata[to]);
            let mut idx = a.cone.clone();
            idx.sort_unstable();
            let cone = g.fan.find_by_rays(&idx).ok_or_else(|| content(format!("arrow {} -> {}: cone {:?} is not in the source fan", a.from, a.to, a.cone)))?;
            if a.quotient_matrix.len() != f.codim() {
                return Err(content(format!("arrow {} -> {}: quotient matrix needs {} rows", a.from, a.to, f.codim())));
            }
            let matrix = IntMatrix::from_rows(&a.quotient_matrix, g.codim()).map_err(|e| content(format!("arrow {} -> {}: {e}", a.from, a.to)))?;
            let quotient = LatticeMap::new(g.lattice(), f.lattice(), matrix).map_err(|e| content(e.to_string()))?;
            arrows.push(Arrow { from, to, cone, quotient });
        }
        let phi = Fanifold::new(self.dimension, strata, arrows).map_err(|e| content(e.to_string()))?;
        Ok(phi.with_compact(self.compact.unwrap_or(false)))
    }

    pub fn from_fanifold(phi: &Fanifold) -> FanifoldFile {
        let strata = phi
            .strata()
            .iter()
            .map(|s| StratumRecord {
                id: s.id.clone(),
                dim: s.dim,
                interior: s.interior,
                chi_c: (s.chi_c != if s.dim % 2 == 0 { 1 } else { -1 }).then_some(s.chi_c),
                lattice_rank: s.fan.rank(),
                fan: FanRecord {
                    rays: s.fan.rays().to_vec(),
                    cones: (0..s.fan.len()).map(|c| s.fan.cone_rays(c).to_vec()).collect(),
                    stacky_beta: s.fan.stacky_generators().map(|g| g.to_vec()),
                },
            })
            .collect();
        let arrows = phi
            .arrows()
            .iter()
            .map(|a| ArrowRecord {
                from: phi.stratum(a.from).id.clone(),
                to: phi.stratum(a.to).id.clone(),
                cone: phi.stratum(a.from).fan.cone_rays(a.cone).to_vec(),
                quotient_matrix: a.quotient.matrix.to_rows(),
            })
            .collect();
        FanifoldFile {
            format: FORMAT.into(),
            dimension: phi.dimension(),
            compact: phi.is_compact_flagged().then_some(true),
            strata,
            arrows,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_other_formats_and_unknown_keys() {
        assert!(matches!(FanifoldFile::parse(r#"{"format":"fanifold/0","dimension":0,"strata":[],"arrows":[]}"#), Err(FileError::Format(_))));
        assert!(matches!(FanifoldFile::parse(r#"{"format":"fanifold/1","dimension":0,"strata":[],"arrows":[],"x":1}"#), Err(FileError::Parse(_))));
        let empty = FanifoldFile::parse(r#"{"format":"fanifold/1","dimension":0,"strata":[],"arrows":[]}"#).unwrap();
        assert!(empty.to_fanifold().unwrap().strata().is_empty());
    }

    #[test]
    fn stacky_beta_must_match_rays() {
        let text = r#"{"format":"fanifold/1","dimension":0,"strata":[{"id":"o","dim":0,"interior":true,"lattice_rank":1,
            "fan":{"rays":[[1]],"cones":[[],[0]],"stacky_beta":[[-2]]}}],"arrows":[]}"#;
        assert!(matches!(FanifoldFile::parse(text).unwrap().to_fanifold(), Err(FileError::Content(_))));
    }
}
