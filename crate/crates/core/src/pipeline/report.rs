//! Rendering of optimal sets as JSON, CSV or a plain-text table.
//!
//! All three formats are deterministic: fields come in a fixed order and
//! members are listed by canonical form. JSON is written on a single line.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::{OptimalSet, Score};
use crate::graph::format_ratio4;
use crate::graph6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Format, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(format!("unknown format {other:?} (expected json, csv or text)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsDoc {
    pub moore: u64,
    pub d_min: u32,
    pub mpl_min: String,
    pub mpl_min_exact: [u64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberDoc {
    pub graph6: String,
    pub diameter: u32,
    pub mpl: String,
    pub mpl_exact: [u64; 2],
    pub distance_sum: u64,
    pub bisection: usize,
    /// Decimal string, since group orders can exceed any JSON number type.
    pub aut_order: String,
    pub orbits: Vec<Vec<usize>>,
    pub generators: Vec<Vec<usize>>,
    pub vertex_transitive: bool,
    pub edge_transitive: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlagsDoc {
    pub diameter_meets_bound: bool,
    pub mpl_meets_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsDoc {
    pub visited: u64,
    pub generated: u64,
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub n: usize,
    pub k: usize,
    pub bounds: BoundsDoc,
    pub optimal: Vec<MemberDoc>,
    pub tie_count: usize,
    pub flags: FlagsDoc,
    pub stats: StatsDoc,
}

fn exact(r: &Ratio<u64>) -> [u64; 2] {
    [*r.numer(), *r.denom()]
}

impl ReportDoc {
    pub fn new(set: &OptimalSet) -> ReportDoc {
        let optimal = set
            .graphs
            .iter()
            .map(|m| MemberDoc {
                graph6: graph6::encode(&m.graph).expect("optimal graphs fit graph6"),
                diameter: m.score.diameter,
                mpl: format_ratio4(&m.score.mpl()),
                mpl_exact: exact(&m.score.mpl()),
                distance_sum: m.score.distance_sum,
                bisection: m.score.bisection,
                aut_order: m.score.aut_order.to_string(),
                orbits: m.symmetry.orbits.clone(),
                generators: m.symmetry.generators.clone(),
                vertex_transitive: m.symmetry.vertex_transitive,
                edge_transitive: m.symmetry.edge_transitive,
            })
            .collect();
        ReportDoc {
            n: set.n,
            k: set.k,
            bounds: BoundsDoc {
                moore: set.bounds.moore_at_dmin,
                d_min: set.bounds.d_min,
                mpl_min: format_ratio4(&set.bounds.mpl_min),
                mpl_min_exact: exact(&set.bounds.mpl_min),
            },
            optimal,
            tie_count: set.tie_count,
            flags: FlagsDoc { diameter_meets_bound: set.diameter_meets_bound, mpl_meets_bound: set.mpl_meets_bound },
            stats: StatsDoc {
                visited: set.stats.visited,
                generated: set.stats.generated,
                wall_seconds: set.stats.wall_seconds,
            },
        }
    }

    pub fn from_json(text: &str) -> serde_json::Result<ReportDoc> {
        serde_json::from_str(text)
    }

    /// Scores of the listed members, reconstructed from the report fields.
    pub fn scores(&self) -> Vec<Score> {
        self.optimal
            .iter()
            .map(|m| Score {
                n: self.n,
                diameter: m.diameter,
                distance_sum: m.distance_sum,
                bisection: m.bisection,
                aut_order: m.aut_order.parse::<BigUint>().unwrap_or_default(),
            })
            .collect()
    }
}

pub const CSV_HEADER: &str =
    "n,k,diameter,mpl,bisection,aut_order,tie_count,diameter_meets_bound,mpl_meets_bound,mpl_exact,graph6";

pub fn render(set: &OptimalSet, format: Format) -> String {
    let doc = ReportDoc::new(set);
    match format {
        Format::Json => serde_json::to_string(&doc).expect("report serializes") + "\n",
        Format::Csv => render_csv(&doc),
        Format::Text => render_text(&doc),
    }
}

fn render_csv(doc: &ReportDoc) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for m in &doc.optimal {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}/{},{}",
            doc.n,
            doc.k,
            m.diameter,
            m.mpl,
            m.bisection,
            m.aut_order,
            doc.tie_count,
            doc.flags.diameter_meets_bound,
            doc.flags.mpl_meets_bound,
            m.mpl_exact[0],
            m.mpl_exact[1],
            m.graph6
        );
    }
    out
}

/// Values that miss their lower bound carry an asterisk.
fn render_text(doc: &ReportDoc) -> String {
    let star = |met: bool| if met { "" } else { "*" };
    let mut out = String::new();
    let _ = writeln!(out, "(n, k) = ({}, {})", doc.n, doc.k);
    let _ = writeln!(
        out,
        "bounds: diameter >= {}, mpl >= {} ({}/{}), moore {}",
        doc.bounds.d_min,
        doc.bounds.mpl_min,
        doc.bounds.mpl_min_exact[0],
        doc.bounds.mpl_min_exact[1],
        doc.bounds.moore
    );
    let _ = writeln!(out, "optimal graphs: {}", doc.tie_count);
    for (i, m) in doc.optimal.iter().enumerate() {
        let _ = writeln!(
            out,
            "  #{}  diameter {}{}  mpl {}{} ({}/{})  bisection {}  |Aut| {}  {}",
            i + 1,
            m.diameter,
            star(doc.flags.diameter_meets_bound),
            m.mpl,
            star(doc.flags.mpl_meets_bound),
            m.mpl_exact[0],
            m.mpl_exact[1],
            m.bisection,
            m.aut_order,
            m.graph6
        );
    }
    if !(doc.flags.diameter_meets_bound && doc.flags.mpl_meets_bound) {
        let _ = writeln!(out, "  * above the lower bound, but minimum over all graphs");
    }
    let _ = writeln!(
        out,
        "search: {} nodes, {} graphs, {:.3} s",
        doc.stats.visited, doc.stats.generated, doc.stats.wall_seconds
    );
    out
}
