//! Text checkpoints of an interrupted `optimize` run.
//!
//! ```text
//! regnet-checkpoint 1
//! params 16 3
//! stats <generated> <visited> <rejected_iso>
//! best <diameter> <distance_sum>      (or `best none`)
//! task <task record>                  (one per unfinished task)
//! survivor <graph6>                   (one per retained graph)
//! ```

use std::fs;
use std::path::Path;

use super::PipelineError;
use crate::enumerate::{GenStats, GenTask};
use crate::graph::Graph;
use crate::graph6;

const MAGIC: &str = "regnet-checkpoint 1";

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub n: usize,
    pub k: usize,
    pub stats: GenStats,
    pub best: Option<(u32, u64)>,
    pub pending: Vec<GenTask>,
    pub survivors: Vec<Graph>,
}

fn bad(msg: impl Into<String>) -> PipelineError {
    PipelineError::Checkpoint(msg.into())
}

fn numbers<T: std::str::FromStr>(rest: &str, count: usize, what: &str) -> Result<Vec<T>, PipelineError> {
    let values: Vec<T> = rest
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| bad(format!("bad number in {what} line"))))
        .collect::<Result<_, _>>()?;
    if values.len() != count {
        return Err(bad(format!("{what} line needs {count} values")));
    }
    Ok(values)
}

impl Checkpoint {
    pub fn to_text(&self) -> Result<String, PipelineError> {
        let mut out = format!("{MAGIC}\nparams {} {}\n", self.n, self.k);
        let s = &self.stats;
        out += &format!("stats {} {} {}\n", s.generated, s.visited, s.rejected_iso);
        match self.best {
            Some((d, sum)) => out += &format!("best {d} {sum}\n"),
            None => out += "best none\n",
        }
        for task in &self.pending {
            out += &format!("task {task}\n");
        }
        for g in &self.survivors {
            let record = graph6::encode(g).map_err(|e| bad(e.to_string()))?;
            out += &format!("survivor {record}\n");
        }
        Ok(out)
    }

    pub fn parse(text: &str) -> Result<Checkpoint, PipelineError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        if lines.next().map(str::trim) != Some(MAGIC) {
            return Err(bad("missing header"));
        }
        let mut params = None;
        let mut stats = None;
        let mut best = None;
        let mut pending = Vec::new();
        let mut survivors = Vec::new();
        for line in lines {
            let (key, rest) = line.trim().split_once(' ').unwrap_or((line.trim(), ""));
            match key {
                "params" => {
                    let v: Vec<usize> = numbers(rest, 2, "params")?;
                    params = Some((v[0], v[1]));
                }
                "stats" => {
                    let v: Vec<u64> = numbers(rest, 3, "stats")?;
                    stats = Some(GenStats { generated: v[0], visited: v[1], rejected_iso: v[2] });
                }
                "best" if rest.trim() == "none" => best = Some(None),
                "best" => {
                    let v: Vec<u64> = numbers(rest, 2, "best")?;
                    let d = u32::try_from(v[0]).map_err(|_| bad("diameter out of range"))?;
                    best = Some(Some((d, v[1])));
                }
                "task" => pending.push(rest.parse().map_err(|e: crate::enumerate::EnumerateError| bad(e.to_string()))?),
                "survivor" => survivors.push(graph6::decode(rest.trim()).map_err(|e| bad(e.to_string()))?),
                other => return Err(bad(format!("unknown line kind {other:?}"))),
            }
        }
        let (n, k) = params.ok_or_else(|| bad("missing params line"))?;
        if pending.iter().any(|t: &GenTask| (t.n, t.k) != (n, k)) {
            return Err(bad("task parameters differ from the checkpoint's"));
        }
        Ok(Checkpoint {
            n,
            k,
            stats: stats.ok_or_else(|| bad("missing stats line"))?,
            best: best.ok_or_else(|| bad("missing best line"))?,
            pending,
            survivors,
        })
    }

    pub fn save(&self, path: &Path) -> Result<(), PipelineError> {
        fs::write(path, self.to_text()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Checkpoint, PipelineError> {
        Checkpoint::parse(&fs::read_to_string(path)?)
    }
}
