//! Machine-readable command output. Integers that can exceed a double
//! (torsion coefficients, rationals) are strings; counts are numbers.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::SCHEMA;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub tool: String,
    pub command: String,
    pub model: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub weights: Vec<WeightTable>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pages: Vec<PageDump>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckOutcome>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightTable {
    pub pair: String,
    /// `simplicial`, `plumbing` or `double`.
    pub source: String,
    pub degrees: Vec<DegreeWeights>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeWeights {
    pub k: isize,
    pub rank: usize,
    /// Invariant factors of the torsion of the integral group.
    pub torsion: Vec<String>,
    pub graded: Vec<GradedPiece>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedPiece {
    pub weight: isize,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageDump {
    pub pair: String,
    /// `null` for `E^∞`.
    pub r: Option<usize>,
    pub entries: Vec<PageEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageEntry {
    pub s: isize,
    pub t: isize,
    pub rank: usize,
    /// Rank of `d^r` out of `(s, t)`.
    pub d_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub s: isize,
    pub t: isize,
    pub cell: String,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailBlock {
    pub s: isize,
    pub t: isize,
    /// Nonzero coefficients of the completion in this block.
    pub size: usize,
}

/// A completed cycle with the data to re-check it: the seed, where the
/// correction terms live, and the class it represents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub pair: String,
    pub s: isize,
    pub t: isize,
    pub index: usize,
    pub degree: isize,
    pub seed: Vec<Term>,
    pub tail: Vec<TailBlock>,
    pub cycle: Vec<Term>,
    /// Coordinates on the essential basis of `H_k` over ℚ.
    pub class: Vec<String>,
    pub weight: Option<isize>,
    pub routes_agree: bool,
    pub restricted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl CheckOutcome {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        CheckOutcome { name: name.into(), passed, detail: detail.into() }
    }
}

impl Report {
    pub fn new(command: &str, model: &str) -> Self {
        Report {
            schema: SCHEMA,
            tool: format!("weightlab {}", env!("CARGO_PKG_VERSION")),
            command: command.to_string(),
            model: model.to_string(),
            weights: Vec::new(),
            pages: Vec::new(),
            certificate: None,
            checks: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.command, self.model);
        for w in &self.weights {
            let _ = writeln!(out, "pair {} ({})", w.pair, w.source);
            if w.degrees.is_empty() {
                let _ = writeln!(out, "  (zero)");
            }
            for d in &w.degrees {
                let graded: Vec<String> = d.graded.iter().map(|g| format!("Gr_{}={}", g.weight, g.rank)).collect();
                let tors = if d.torsion.is_empty() { String::new() } else { format!("  torsion {}", d.torsion.join(",")) };
                let _ = writeln!(out, "  H_{}  rank {}  {}{tors}", d.k, d.rank, graded.join(" "));
            }
        }
        for p in &self.pages {
            let r = p.r.map_or("inf".to_string(), |r| r.to_string());
            let _ = writeln!(out, "pair {} E^{r}", p.pair);
            for e in &p.entries {
                let _ = writeln!(out, "  ({},{})  rank {}  d rank {}", e.s, e.t, e.rank, e.d_rank);
            }
        }
        if let Some(c) = &self.certificate {
            let _ = writeln!(out, "pair {} seed ({},{}) #{} in degree {}", c.pair, c.s, c.t, c.index, c.degree);
            for b in &c.tail {
                let _ = writeln!(out, "  block ({},{})  {} terms", b.s, b.t, b.size);
            }
            let w = c.weight.map_or("none (zero class)".to_string(), |w| w.to_string());
            let _ = writeln!(out, "  class [{}]  weight {w}  routes agree {}", c.class.join(", "), c.routes_agree);
        }
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            if c.detail.is_empty() {
                let _ = writeln!(out, "{mark} {}", c.name);
            } else {
                let _ = writeln!(out, "{mark} {}  {}", c.name, c.detail);
            }
        }
        out
    }
}
