//! Shape graphs: finite graphs with rational arc lengths.
//!
//! Text format, one declaration per line, `#` starts a comment:
//!
//! ```text
//! node v
//! arc c v v len 1
//! arc t v - len inf
//! ```
//!
//! An arc runs from its source to its target; `-` marks an open end with no
//! node attached. Each arc carries the coordinate chart `(0, len]`: the
//! source sits at coordinate `0` (excluded from the arc's points), the
//! target at coordinate `len`. Infinite arcs have no endpoint coordinate,
//! so `len inf` forces an open target; an infinite arc that is also open at
//! the source is a copy of the real line and admits negative coordinates.

use crate::rat::{parse_rat, ArcLen, Rat};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arc {
    pub name: String,
    pub src: Option<usize>,
    pub tgt: Option<usize>,
    pub len: ArcLen,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeGraph {
    pub nodes: Vec<String>,
    pub arcs: Vec<Arc>,
    node_index: HashMap<String, usize>,
    arc_index: HashMap<String, usize>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {0}: {1}")]
    Parse(usize, String),
    #[error("duplicate node `{0}`")]
    DuplicateNode(String),
    #[error("duplicate arc `{0}`")]
    DuplicateArc(String),
    #[error("arc `{0}` references unknown node `{1}`")]
    UnknownNode(String, String),
    #[error("arc `{0}` has non-positive length")]
    BadLength(String),
    #[error("arc `{0}` is infinite but has a target node; infinite arcs must end open")]
    InfiniteClosed(String),
}

impl ShapeGraph {
    pub fn new() -> Self {
        ShapeGraph {
            nodes: Vec::new(),
            arcs: Vec::new(),
            node_index: HashMap::new(),
            arc_index: HashMap::new(),
        }
    }

    pub fn add_node(&mut self, name: &str) -> Result<usize, GraphError> {
        if self.node_index.contains_key(name) {
            return Err(GraphError::DuplicateNode(name.to_string()));
        }
        let id = self.nodes.len();
        self.nodes.push(name.to_string());
        self.node_index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn add_arc(
        &mut self,
        name: &str,
        src: Option<&str>,
        tgt: Option<&str>,
        len: ArcLen,
    ) -> Result<usize, GraphError> {
        if self.arc_index.contains_key(name) {
            return Err(GraphError::DuplicateArc(name.to_string()));
        }
        if let ArcLen::Finite(l) = len {
            if l <= Rat::from_integer(0) {
                return Err(GraphError::BadLength(name.to_string()));
            }
        }
        let resolve = |n: Option<&str>| -> Result<Option<usize>, GraphError> {
            match n {
                None => Ok(None),
                Some(s) => self
                    .node_index
                    .get(s)
                    .copied()
                    .map(Some)
                    .ok_or_else(|| GraphError::UnknownNode(name.to_string(), s.to_string())),
            }
        };
        let src = resolve(src)?;
        let tgt = resolve(tgt)?;
        if len == ArcLen::Infinite && tgt.is_some() {
            return Err(GraphError::InfiniteClosed(name.to_string()));
        }
        let id = self.arcs.len();
        self.arcs.push(Arc {
            name: name.to_string(),
            src,
            tgt,
            len,
        });
        self.arc_index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn node_id(&self, name: &str) -> Option<usize> {
        self.node_index.get(name).copied()
    }

    pub fn arc_id(&self, name: &str) -> Option<usize> {
        self.arc_index.get(name).copied()
    }

    pub fn arc(&self, id: usize) -> &Arc {
        &self.arcs[id]
    }

    /// Arcs whose source is `v`; a loop at `v` appears once.
    pub fn arcs_from(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.arcs
            .iter()
            .enumerate()
            .filter(move |(_, a)| a.src == Some(v))
            .map(|(i, _)| i)
    }

    /// Arcs whose target is `v`; a loop at `v` appears once.
    pub fn arcs_into(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.arcs
            .iter()
            .enumerate()
            .filter(move |(_, a)| a.tgt == Some(v))
            .map(|(i, _)| i)
    }
}

impl Default for ShapeGraph {
    fn default() -> Self {
        Self::new()
    }
}

/// Parses the line-oriented graph format.
pub fn parse_graph(input: &str) -> Result<ShapeGraph, GraphError> {
    let mut g = ShapeGraph::new();
    for (lineno, raw) in input.lines().enumerate() {
        let line = match raw.split_once('#') {
            Some((before, _)) => before,
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let err = |msg: String| GraphError::Parse(lineno + 1, msg);
        match toks[0] {
            "node" => {
                if toks.len() != 2 {
                    return Err(err(format!("expected `node <id>`, got `{line}`")));
                }
                g.add_node(toks[1])?;
            }
            "arc" => {
                if toks.len() != 6 || toks[4] != "len" {
                    return Err(err(format!(
                        "expected `arc <id> <src|-> <tgt|-> len <length>`, got `{line}`"
                    )));
                }
                let src = if toks[2] == "-" { None } else { Some(toks[2]) };
                let tgt = if toks[3] == "-" { None } else { Some(toks[3]) };
                let len = if toks[5] == "inf" {
                    ArcLen::Infinite
                } else {
                    ArcLen::Finite(parse_rat(toks[5]).map_err(err)?)
                };
                g.add_arc(toks[1], src, tgt, len)?;
            }
            other => {
                return Err(err(format!("unknown declaration `{other}`")));
            }
        }
    }
    Ok(g)
}

/// The real line: one doubly open infinite arc named `r`.
pub fn line_graph() -> ShapeGraph {
    parse_graph("arc r - - len inf").unwrap()
}

/// A circle of circumference `k` built from `k` unit arcs `c1..ck` through
/// nodes `v1..vk`; `ci` runs from `vi` to `v(i+1)`, cyclically.
pub fn circle_graph(k: usize) -> ShapeGraph {
    assert!(k >= 1);
    let mut s = String::new();
    for i in 1..=k {
        s.push_str(&format!("node v{i}\n"));
    }
    for i in 1..=k {
        let j = if i == k { 1 } else { i + 1 };
        s.push_str(&format!("arc c{i} v{i} v{j} len 1\n"));
    }
    parse_graph(&s).unwrap()
}

/// A unit circle `c` with an outgoing infinite tail `t`, joined at `v`.
pub fn wedge_graph() -> ShapeGraph {
    parse_graph("node v\narc c v v len 1\narc t v - len inf").unwrap()
}

/// Three arcs joined at `v`: one incoming unit arc `i` and two outgoing
/// infinite arcs `p`, `q`.
pub fn y_graph() -> ShapeGraph {
    parse_graph("node v\narc i - v len 1\narc p v - len inf\narc q v - len inf").unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_int;

    #[test]
    fn parses_wedge_with_comments() {
        let g = parse_graph(
            "# circle with a tail\nnode v\narc c v v len 1\n\narc t v - len inf # tail\n",
        )
        .unwrap();
        assert_eq!(g.nodes, vec!["v"]);
        assert_eq!(g.arcs.len(), 2);
        let c = g.arc(g.arc_id("c").unwrap());
        assert_eq!(c.src, Some(0));
        assert_eq!(c.tgt, Some(0));
        assert_eq!(c.len, ArcLen::Finite(rat_int(1)));
        let t = g.arc(g.arc_id("t").unwrap());
        assert_eq!(t.src, Some(0));
        assert_eq!(t.tgt, None);
        assert_eq!(t.len, ArcLen::Infinite);
    }

    #[test]
    fn parses_open_source_arc() {
        let g = parse_graph("node v\narc c v v len 1\narc t - v len 1").unwrap();
        let t = g.arc(g.arc_id("t").unwrap());
        assert_eq!(t.src, None);
        assert_eq!(t.tgt, Some(0));
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(
            parse_graph("node v\nnode v"),
            Err(GraphError::DuplicateNode(_))
        ));
        assert!(matches!(
            parse_graph("arc a - w len 1"),
            Err(GraphError::UnknownNode(_, _))
        ));
        assert!(matches!(
            parse_graph("arc a - - len 0"),
            Err(GraphError::BadLength(_))
        ));
        assert!(matches!(
            parse_graph("node v\narc a - v len inf"),
            Err(GraphError::InfiniteClosed(_))
        ));
        assert!(matches!(
            parse_graph("arc a - -"),
            Err(GraphError::Parse(1, _))
        ));
    }

    #[test]
    fn circle_graph_wiring() {
        let g = circle_graph(3);
        assert_eq!(g.nodes.len(), 3);
        let c3 = g.arc(g.arc_id("c3").unwrap());
        assert_eq!(c3.src, g.node_id("v3").map(Some).unwrap());
        assert_eq!(c3.tgt, g.node_id("v1").map(Some).unwrap());
    }
}
