use std::fmt;
use std::str::FromStr;

use anyhow::{bail, Context as _};
use serde::Deserialize;

/// An inclusive distance range written `3`, `1-4` or `1..=4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KRange {
    pub lo: usize,
    pub hi: usize,
}

impl KRange {
    pub fn iter(&self) -> impl Iterator<Item = usize> {
        self.lo..=self.hi
    }
}

impl FromStr for KRange {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let s = s.trim();
        let (lo, hi) = match s.split_once("..=").or_else(|| s.split_once('-')) {
            Some((a, b)) => (a.trim().parse()?, b.trim().parse()?),
            None => {
                let k = s.parse().with_context(|| format!("bad distance {s:?}"))?;
                (k, k)
            }
        };
        if lo > hi {
            bail!("empty distance range {s:?}");
        }
        Ok(Self { lo, hi })
    }
}

impl fmt::Display for KRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}..={}", self.lo, self.hi)
        }
    }
}

impl<'de> Deserialize<'de> for KRange {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            One(usize),
            Text(String),
        }
        match Raw::deserialize(de)? {
            Raw::One(k) => Ok(KRange { lo: k, hi: k }),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// One measurement request, from flags or from a `[[measure]]` table.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureEntry {
    pub process: String,
    pub d: u32,
    pub k: KRange,
    #[serde(default = "one", rename = "R")]
    pub radius: usize,
    pub samples: Option<u64>,
    pub labels: Option<u64>,
    pub eps: Option<f64>,
    #[serde(rename = "D")]
    pub truncation: Option<usize>,
    pub seed: Option<u64>,
}

fn one() -> usize {
    1
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    pub measure: Vec<MeasureEntry>,
}

impl SweepFile {
    pub fn load(path: &std::path::Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let sweep: SweepFile = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        if sweep.measure.is_empty() {
            bail!("{} has no [[measure]] entries", path.display());
        }
        Ok(sweep)
    }
}
