//! graph6 encoding: a size prefix followed by the upper triangle of the
//! adjacency matrix, column by column, packed six bits per printable byte.

use thiserror::Error;

use crate::graph::Graph;

pub const HEADER: &str = ">>graph6<<";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Graph6Error {
    #[error("empty graph6 record")]
    Empty,
    #[error("byte {0:#04x} is outside the graph6 range 63..=126")]
    InvalidByte(u8),
    #[error("record length {got} does not match the {expected} bytes required for {n} vertices")]
    Length { n: usize, expected: usize, got: usize },
    #[error("graph6 cannot encode {0} vertices")]
    TooLarge(usize),
    #[error("line {line}: {error}")]
    Line { line: usize, error: Box<Graph6Error> },
}

fn encode_size(n: usize, out: &mut Vec<u8>) -> Result<(), Graph6Error> {
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        return Err(Graph6Error::TooLarge(n));
    }
    Ok(())
}

pub fn encode(g: &Graph) -> Result<String, Graph6Error> {
    let n = g.order();
    let mut out = Vec::new();
    encode_size(n, &mut out)?;
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | u8::from(g.has_edge(i, j));
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    Ok(String::from_utf8(out).expect("graph6 output is ASCII"))
}

pub fn decode(record: &str) -> Result<Graph, Graph6Error> {
    let record = record.trim_end_matches(['\n', '\r']);
    let record = record.strip_prefix(HEADER).unwrap_or(record);
    let bytes = record.as_bytes();
    if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(Graph6Error::InvalidByte(b));
    }
    let (n, body) = match bytes {
        [] => return Err(Graph6Error::Empty),
        [126, 126, ..] => return Err(Graph6Error::TooLarge(usize::MAX)),
        [126, rest @ ..] if rest.len() >= 3 => {
            let n = rest[..3].iter().fold(0usize, |acc, &b| acc << 6 | usize::from(b - 63));
            (n, &rest[3..])
        }
        [126, ..] => return Err(Graph6Error::Empty),
        [first, rest @ ..] => (usize::from(first - 63), rest),
    };
    let bits = n * n.saturating_sub(1) / 2;
    let expected = bits.div_ceil(6);
    if body.len() != expected {
        return Err(Graph6Error::Length { n, expected, got: body.len() });
    }
    let mut pairs = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = body[k / 6] - 63;
            if byte >> (5 - k % 6) & 1 == 1 {
                pairs.push((i, j));
            }
            k += 1;
        }
    }
    Graph::from_edges(n.max(1), pairs).map_err(|_| Graph6Error::Empty)
}

/// Parses one graph per non-empty line; an optional `>>graph6<<` header is accepted.
pub fn decode_lines(text: &str) -> Result<Vec<Graph>, Graph6Error> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| decode(l.trim()).map_err(|e| Graph6Error::Line { line: i + 1, error: Box::new(e) }))
        .collect()
}
