//! Plain-text graph format: `n m`, then `m` lines `u v`, then optional
//! `c v color` lines.

use std::fmt::Write as _;

use super::Graph;
use crate::error::{Error, Result};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| parse_err(line, format!("bad {what} `{tok}`")))
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (ln, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let mut toks = header.split_whitespace();
    let n: usize = parse_num(toks.next(), ln, "vertex count")?;
    let m: usize = parse_num(toks.next(), ln, "edge count")?;
    if toks.next().is_some() {
        return Err(parse_err(ln, "trailing tokens in header"));
    }
    let mut g = Graph::empty(n);
    let mut colors: Option<Vec<u32>> = None;
    let mut seen_edges = 0;
    for (ln, line) in lines {
        let mut toks = line.split_whitespace();
        let first = toks.clone().next().unwrap();
        if first == "c" {
            toks.next();
            let v: usize = parse_num(toks.next(), ln, "vertex")?;
            let c: u32 = parse_num(toks.next(), ln, "color")?;
            if v >= n {
                return Err(parse_err(ln, format!("vertex {v} out of range")));
            }
            colors.get_or_insert_with(|| vec![0; n])[v] = c;
        } else {
            if colors.is_some() {
                return Err(parse_err(ln, "edge after color lines"));
            }
            let u: usize = parse_num(toks.next(), ln, "endpoint")?;
            let v: usize = parse_num(toks.next(), ln, "endpoint")?;
            g.add_edge(u, v).map_err(|e| parse_err(ln, e.to_string()))?;
            seen_edges += 1;
        }
        if toks.next().is_some() {
            return Err(parse_err(ln, "trailing tokens"));
        }
    }
    if seen_edges != m {
        return Err(parse_err(ln, format!("header announces {m} edges, found {seen_edges}")));
    }
    match colors {
        Some(c) => g.with_colors(c),
        None => Ok(g),
    }
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    if let Some(colors) = g.colors() {
        for (v, c) in colors.iter().enumerate() {
            writeln!(out, "c {v} {c}").unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let g = Graph::petersen();
        assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
        let c = Graph::path(3).with_colors(vec![1, 0, 1]).unwrap();
        let text = write_graph(&c);
        assert_eq!(text, "3 2\n0 1\n1 2\nc 0 1\nc 1 0\nc 2 1\n");
        assert_eq!(parse_graph(&text).unwrap(), c);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_graph("2 1\n0 0\n").is_err());
        assert!(parse_graph("2 2\n0 1\n1 0\n").is_err());
        assert!(parse_graph("2 2\n0 1\n").is_err());
        assert!(parse_graph("2 1\n0 2\n").is_err());
        assert!(parse_graph("x 1\n").is_err());
        assert!(parse_graph("").is_err());
    }
}
