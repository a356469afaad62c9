//! Text interchange formats for graphs and signings.
//!
//! Graph file: a header line `d n`, then one `NAME1 NAME2 W` line per edge in
//! canonical order. Signing file: one `NAME1 NAME2 BIT` line per base edge.
//! Both use LF line endings and a trailing newline.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{GraphError, ParseError};
use crate::graph::{Degree, WeightedMultigraph};
use crate::lift::Signing;
use crate::name::VertexName;

pub fn write_graph(g: &WeightedMultigraph) -> Result<String, GraphError> {
    if let Some(v) = g.vertices().find(|v| g.simple_degree(v) == 0) {
        return Err(GraphError::IsolatedVertex(*v));
    }
    let mut out = format!("{} {}\n", g.d(), g.vertex_count());
    for (a, b, w) in g.edges() {
        writeln!(out, "{a} {b} {w}").expect("writing to a String");
    }
    Ok(out)
}

fn line_err(line: usize, reason: impl Into<String>) -> ParseError {
    ParseError::Line {
        line,
        reason: reason.into(),
    }
}

pub fn parse_graph(text: &str) -> Result<WeightedMultigraph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (_, header) = lines.next().ok_or(ParseError::Empty)?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [d, n] = fields[..] else {
        return Err(line_err(1, "header must be `d n`").into());
    };
    let d: u32 = d.parse().map_err(|_| line_err(1, "bad degree"))?;
    let n: usize = n.parse().map_err(|_| line_err(1, "bad vertex count"))?;
    let mut g = WeightedMultigraph::new(Degree::new(d)?);
    let mut seen = BTreeSet::new();
    for (no, line) in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [a, b, w] = fields[..] else {
            return Err(line_err(no, "expected `NAME1 NAME2 W`").into());
        };
        let a: VertexName = a.parse()?;
        let b: VertexName = b.parse()?;
        let w: u32 = w.parse().map_err(|_| line_err(no, "bad weight"))?;
        if w == 0 {
            return Err(line_err(no, "weight must be positive").into());
        }
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        if !seen.insert(crate::graph::edge_key(a, b)) {
            return Err(line_err(no, format!("duplicate edge {a}-{b}")).into());
        }
        g.set_weight(a, b, w)?;
    }
    if g.vertex_count() != n {
        return Err(line_err(
            1,
            format!("header says {n} vertices, edges mention {}", g.vertex_count()),
        )
        .into());
    }
    Ok(g)
}

pub fn write_signing(s: &Signing) -> String {
    let mut out = String::new();
    for ((a, b), bit) in s.iter() {
        writeln!(out, "{a} {b} {}", bit as u8).expect("writing to a String");
    }
    out
}

pub fn parse_signing(text: &str) -> Result<Signing, ParseError> {
    let mut s = Signing::default();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [a, b, bit] = fields[..] else {
            return Err(line_err(no + 1, "expected `NAME1 NAME2 BIT`"));
        };
        let bit = match bit {
            "0" => false,
            "1" => true,
            _ => return Err(line_err(no + 1, "bit must be 0 or 1")),
        };
        s.set(a.parse()?, b.parse()?, bit);
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> WeightedMultigraph {
        let mut g = WeightedMultigraph::new(Degree::new(6).unwrap());
        let n = |s: &str| s.parse::<VertexName>().unwrap();
        g.set_weight(n("0:0"), n("1:"), 1).unwrap();
        g.set_weight(n("0:1"), n("1:"), 1).unwrap();
        g.set_weight(n("0:0"), n("0:1"), 3).unwrap();
        g
    }

    #[test]
    fn graph_text_is_canonical() {
        let text = write_graph(&sample()).unwrap();
        assert_eq!(text, "6 3\n1: 0:0 1\n1: 0:1 1\n0:0 0:1 3\n");
    }

    #[test]
    fn graph_round_trip() {
        let g = sample();
        let back = parse_graph(&write_graph(&g).unwrap()).unwrap();
        assert!(crate::graph::graphs_equal(&g, &back));
    }

    #[test]
    fn malformed_files_are_rejected() {
        assert!(parse_graph("").is_err());
        assert!(parse_graph("5 2\n0: 1: 1\n").is_err());
        assert!(parse_graph("6 3\n0: 1: 1\n").is_err());
        assert!(parse_graph("6 2\n0: 1: 0\n").is_err());
        assert!(parse_graph("6 2\n0: 0: 1\n").is_err());
        assert!(parse_graph("6 2\n0: 1: 1\n1: 0: 2\n").is_err());
    }

    #[test]
    fn isolated_vertices_cannot_be_written() {
        let mut g = sample();
        g.add_vertex(VertexName::root(5));
        assert!(matches!(write_graph(&g), Err(GraphError::IsolatedVertex(_))));
    }

    #[test]
    fn signing_round_trip() {
        let mut s = Signing::default();
        s.set(VertexName::root(1), VertexName::root(0), true);
        s.set(VertexName::root(0), VertexName::root(2), false);
        let text = write_signing(&s);
        assert_eq!(text, "0: 1: 1\n0: 2: 0\n");
        assert_eq!(parse_signing(&text).unwrap(), s);
    }
}
