//! JSON poset files:
//! `{"n": 3, "mode": "cover", "pairs": [[0, 1], [1, 2]], "colors": {"0": "red"}}`.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use super::{Poset, PosetError};
use crate::formula::DEFAULT_COLOR;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationMode {
    /// Pairs generate the order by reflexive-transitive closure.
    Cover,
    /// Pairs are the whole order (the diagonal may be omitted).
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetFile {
    pub n: usize,
    pub mode: RelationMode,
    #[serde(default)]
    pub pairs: Vec<[usize; 2]>,
    #[serde(default)]
    pub colors: BTreeMap<String, String>,
}

impl PosetFile {
    pub fn from_json(text: &str) -> Result<PosetFile, PosetError> {
        serde_json::from_str(text).map_err(|e| PosetError::Format(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("poset file serializes")
    }

    pub fn build(&self) -> Result<Poset, PosetError> {
        let pairs: Vec<(usize, usize)> = self.pairs.iter().map(|&[a, b]| (a, b)).collect();
        let mut colors = Vec::with_capacity(self.colors.len());
        for (key, color) in &self.colors {
            let e: usize = key
                .trim()
                .parse()
                .map_err(|_| PosetError::Format(format!("color key `{key}` is not an element index")))?;
            colors.push((e, color.clone()));
        }
        Poset::from_relation(self.n, &pairs, &colors, self.mode)
    }

    /// Cover-mode description of `p`; default-colored elements are omitted.
    pub fn from_poset(p: &Poset) -> PosetFile {
        PosetFile {
            n: p.len(),
            mode: RelationMode::Cover,
            pairs: p.cover_pairs().into_iter().map(|(a, b)| [a, b]).collect(),
            colors: (0..p.len())
                .filter(|&e| p.color(e) != DEFAULT_COLOR)
                .map(|e| (e.to_string(), p.color(e).to_string()))
                .collect(),
        }
    }
}

impl Poset {
    pub fn from_json(text: &str) -> Result<Poset, PosetError> {
        PosetFile::from_json(text)?.build()
    }
}
