//! PACE 2019 vertex cover instance and solution files.
//!
//! Instances: `c` comment lines, one `p <descriptor> <n> <m>` line, then one
//! `<u> <v>` line per edge with 1-based ids. Solutions: `s vc <n> <k>` followed
//! by the `k` cover vertices, 1-based, one per line. Ids are shifted to 0-based
//! here and nowhere else.

use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use flate2::read::GzDecoder;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceHeader {
    pub descriptor: String,
    pub n: usize,
    pub m: usize,
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub header: InstanceHeader,
    pub graph: Graph,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_num(tok: &str, line: usize) -> Result<usize> {
    tok.parse::<usize>().map_err(|_| parse_err(line, format!("expected a non-negative integer, found `{tok}`")))
}

/// Parses an instance. Duplicate edges are collapsed; a declared edge count
/// that disagrees with the edge list is logged, and the edge list wins.
pub fn parse_instance<R: BufRead>(reader: R) -> Result<Instance> {
    let mut header: Option<InstanceHeader> = None;
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        let mut toks = trimmed.split_whitespace();
        let first = toks.next().unwrap();
        if first == "p" {
            if header.is_some() {
                return Err(parse_err(lineno, "second problem line"));
            }
            let descriptor = toks.next().ok_or_else(|| parse_err(lineno, "problem line lacks a descriptor"))?;
            let n = parse_num(toks.next().ok_or_else(|| parse_err(lineno, "problem line lacks n"))?, lineno)?;
            let m = parse_num(toks.next().ok_or_else(|| parse_err(lineno, "problem line lacks m"))?, lineno)?;
            if toks.next().is_some() {
                return Err(parse_err(lineno, "trailing tokens on problem line"));
            }
            if n > u32::MAX as usize / 2 {
                return Err(parse_err(lineno, "vertex count too large"));
            }
            edges.reserve(m);
            header = Some(InstanceHeader { descriptor: descriptor.to_string(), n, m });
            continue;
        }
        let h = header.as_ref().ok_or_else(|| parse_err(lineno, "edge line before the problem line"))?;
        let u = parse_num(first, lineno)?;
        let v = parse_num(toks.next().ok_or_else(|| parse_err(lineno, "edge line needs two ids"))?, lineno)?;
        if toks.next().is_some() {
            return Err(parse_err(lineno, "trailing tokens on edge line"));
        }
        for id in [u, v] {
            if id == 0 || id > h.n {
                return Err(parse_err(lineno, format!("vertex id {id} outside [1, {}]", h.n)));
            }
        }
        if u == v {
            return Err(parse_err(lineno, format!("self-loop on vertex {u}")));
        }
        edges.push(((u - 1) as Vertex, (v - 1) as Vertex));
    }
    let header = header.ok_or_else(|| parse_err(0, "missing problem line"))?;
    let graph = Graph::from_edges(header.n, &edges)?;
    if graph.edge_count() != header.m {
        log::warn!(
            "declared edge count {} differs from the {} distinct edges listed; using the edge list",
            header.m,
            graph.edge_count()
        );
    }
    Ok(Instance { header, graph })
}

/// Reads an instance file; a `.gz` suffix selects gzip decompression.
pub fn read_instance_file(path: &Path) -> Result<Instance> {
    let file = File::open(path)?;
    let reader: Box<dyn Read> =
        if path.extension().is_some_and(|e| e == "gz") { Box::new(GzDecoder::new(file)) } else { Box::new(file) };
    parse_instance(BufReader::new(reader))
}

/// Serializes a graph in instance format (alive vertices renumbered densely
/// in ascending id order).
pub fn write_instance(g: &Graph, descriptor: &str) -> String {
    use std::fmt::Write;
    let (compact, _) = g.compact();
    let mut out = String::new();
    writeln!(out, "p {descriptor} {} {}", compact.alive_count(), compact.edge_count()).unwrap();
    for (u, v) in compact.edges() {
        writeln!(out, "{} {}", u + 1, v + 1).unwrap();
    }
    out
}

/// Emits a solution file; vertex ids are written 1-based in ascending order.
pub fn write_solution(cover: &[Vertex], n: usize) -> String {
    use std::fmt::Write;
    let mut sorted = cover.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut out = String::with_capacity(16 + sorted.len() * 7);
    writeln!(out, "s vc {} {}", n, sorted.len()).unwrap();
    for v in sorted {
        debug_assert!((v as usize) < n);
        writeln!(out, "{}", v + 1).unwrap();
    }
    out
}

/// Parses a solution file into `(n, cover)` with 0-based ids.
pub fn parse_solution(text: &str) -> Result<(usize, Vec<Vertex>)> {
    let mut header: Option<(usize, usize)> = None;
    let mut cover = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('c') {
            continue;
        }
        if t.starts_with('s') {
            let toks: Vec<_> = t.split_whitespace().collect();
            if toks.len() != 4 || toks[1] != "vc" {
                return Err(parse_err(lineno, "expected `s vc <n> <k>`"));
            }
            if header.is_some() {
                return Err(parse_err(lineno, "second solution line"));
            }
            header = Some((parse_num(toks[2], lineno)?, parse_num(toks[3], lineno)?));
            continue;
        }
        let (n, _) = header.ok_or_else(|| parse_err(lineno, "vertex line before the solution line"))?;
        let v = parse_num(t, lineno)?;
        if v == 0 || v > n {
            return Err(parse_err(lineno, format!("vertex id {v} outside [1, {n}]")));
        }
        cover.push((v - 1) as Vertex);
    }
    let (n, k) = header.ok_or_else(|| parse_err(0, "missing solution line"))?;
    if k != cover.len() {
        return Err(Error::Format(format!("solution line declares {k} vertices but {} are listed", cover.len())));
    }
    Ok((n, cover))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn parse(s: &str) -> Result<Instance> {
        parse_instance(s.as_bytes())
    }

    #[test]
    fn parses_p3() {
        let inst = parse("p td 3 2\n1 2\n2 3\n").unwrap();
        assert_eq!(inst.graph.edges(), vec![(0, 1), (1, 2)]);
        assert_eq!(inst.header, InstanceHeader { descriptor: "td".into(), n: 3, m: 2 });
        let with_comments = parse("c comment\nc another\np td 3 2\n1 2\nc mid\n2 3\n").unwrap();
        assert_eq!(with_comments.graph.canonical(), inst.graph.canonical());
    }

    #[test]
    fn tolerates_duplicates_and_wrong_m() {
        let inst = parse("p td 3 5\n1 2\n2 1\n2 3\n").unwrap();
        assert_eq!(inst.graph.edge_count(), 2);
    }

    #[test]
    fn rejects_malformed() {
        let e = parse("p td 2 1\n1 3\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e}");
        assert!(matches!(parse("1 2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("c only\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse("p td 3 1\n1 x\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse("p td 3 1\n2 2\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse("p td 3 1\n0 1\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn solution_examples() {
        assert_eq!(write_solution(&[1], 3), "s vc 3 1\n2\n");
        assert_eq!(write_solution(&[], 5), "s vc 5 0\n");
        assert_eq!(parse_solution("s vc 3 1\n2\n").unwrap(), (3, vec![1]));
        assert!(parse_solution("s vc 3 2\n2\n").is_err());
        assert!(parse_solution("s vc 3 1\n4\n").is_err());
    }

    #[test]
    fn gzip_instances() {
        use flate2::write::GzEncoder;
        use std::io::Write;
        let dir = std::env::temp_dir().join(format!("vcover-io-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("p3.gr.gz");
        let mut enc = GzEncoder::new(File::create(&path).unwrap(), flate2::Compression::default());
        enc.write_all(b"p td 3 2\n1 2\n2 3\n").unwrap();
        enc.finish().unwrap();
        let inst = read_instance_file(&path).unwrap();
        assert_eq!(inst.graph.edge_count(), 2);
        std::fs::remove_dir_all(&dir).ok();
    }

    proptest! {
        #[test]
        fn solution_round_trip(n in 1usize..200, picks in proptest::collection::vec(any::<u32>(), 0..100)) {
            let mut cover: Vec<Vertex> = picks.iter().map(|p| p % n as u32).collect();
            cover.sort_unstable();
            cover.dedup();
            let text = write_solution(&cover, n);
            prop_assert_eq!(parse_solution(&text).unwrap(), (n, cover.clone()));
            prop_assert_eq!(write_solution(&cover, n), text);
        }
    }
}
