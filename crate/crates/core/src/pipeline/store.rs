//! Streaming retention of the graphs that minimize (diameter, total distance).

use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::graph::Graph;
use crate::graph6;

pub const DEFAULT_MEMORY_CAP: usize = 1_000_000;

/// Keeps every graph tied for the best `(diameter, distance_sum)` seen so far.
/// A strict improvement discards everything retained; ties are appended.
/// Beyond `memory_cap` graphs, further ties go to a graph6 spill file.
pub struct SurvivorStore {
    best: Option<(u32, u64)>,
    memory: Vec<Graph>,
    memory_cap: usize,
    spill_path: Option<PathBuf>,
    spill: Option<BufWriter<File>>,
    spilled: usize,
}

impl SurvivorStore {
    /// Without a spill directory every survivor is kept in memory.
    pub fn new(memory_cap: usize, spill_dir: Option<&Path>) -> io::Result<SurvivorStore> {
        let spill_path = match spill_dir {
            Some(dir) => {
                fs::create_dir_all(dir)?;
                Some(dir.join("survivors.g6"))
            }
            None => None,
        };
        Ok(SurvivorStore { best: None, memory: Vec::new(), memory_cap, spill_path, spill: None, spilled: 0 })
    }

    pub fn best(&self) -> Option<(u32, u64)> {
        self.best
    }

    pub fn len(&self) -> usize {
        self.memory.len() + self.spilled
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spilled(&self) -> usize {
        self.spilled
    }

    /// Offers a graph with its diameter and total distance.
    pub fn offer(&mut self, g: Graph, diameter: u32, distance_sum: u64) -> io::Result<()> {
        let key = (diameter, distance_sum);
        match self.best {
            Some(best) if key > best => return Ok(()),
            Some(best) if key == best => {}
            _ => {
                self.best = Some(key);
                self.memory.clear();
                self.spill = None;
                self.spilled = 0;
                if let Some(path) = &self.spill_path {
                    if path.exists() {
                        fs::remove_file(path)?;
                    }
                }
            }
        }
        if self.memory.len() < self.memory_cap || self.spill_path.is_none() {
            self.memory.push(g);
            return Ok(());
        }
        if self.spill.is_none() {
            let path = self.spill_path.as_ref().expect("checked above");
            self.spill = Some(BufWriter::new(File::create(path)?));
        }
        let line = graph6::encode(&g).map_err(|e| io::Error::new(io::ErrorKind::InvalidInput, e))?;
        writeln!(self.spill.as_mut().expect("opened above"), "{line}")?;
        self.spilled += 1;
        Ok(())
    }

    /// Returns all retained graphs, in-memory ones first, then spilled ones in
    /// file order.
    pub fn into_graphs(mut self) -> io::Result<Vec<Graph>> {
        let mut graphs = std::mem::take(&mut self.memory);
        if let Some(mut w) = self.spill.take() {
            w.flush()?;
            drop(w);
            let path = self.spill_path.as_ref().expect("spill implies a path");
            for line in BufReader::new(File::open(path)?).lines() {
                let line = line?;
                let g = graph6::decode(&line).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
                graphs.push(g);
            }
            fs::remove_file(path)?;
        }
        Ok(graphs)
    }
}
