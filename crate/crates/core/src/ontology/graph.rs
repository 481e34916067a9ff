use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::path::Path;

use serde::Deserialize;

use super::{jsonl_lines, read_file, KnowledgeError};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEdge {
    a: String,
    b: String,
    #[serde(default)]
    isa: bool,
}

/// Concept graph with an undirected view for hop distance and directed
/// child-to-parent `isa` edges for ancestry.
///
/// Every `isa` edge is also present in the undirected view. Edge weights are
/// all 1.
#[derive(Debug, Clone, Default)]
pub struct OntologyGraph {
    index: HashMap<String, usize>,
    codes: Vec<String>,
    neighbors: Vec<Vec<usize>>,
    parents: Vec<Vec<usize>>,
}

impl OntologyGraph {
    pub fn parse_jsonl(text: &str, file: &str) -> Result<Self, KnowledgeError> {
        let mut graph = OntologyGraph::default();
        for (line, raw) in jsonl_lines(text) {
            let malformed = |reason: String| KnowledgeError::Malformed {
                file: file.to_string(),
                line,
                reason,
            };
            let edge: RawEdge = serde_json::from_str(raw).map_err(|e| malformed(e.to_string()))?;
            let (a, b) = (edge.a.trim(), edge.b.trim());
            if a.is_empty() || b.is_empty() {
                return Err(malformed("empty concept code".into()));
            }
            if a == b {
                return Err(malformed(format!("self loop on {a}")));
            }
            graph.add_edge(a, b, edge.isa);
        }
        for list in graph.neighbors.iter_mut().chain(graph.parents.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
        Ok(graph)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, KnowledgeError> {
        let path = path.as_ref();
        Self::parse_jsonl(&read_file(path)?, &path.display().to_string())
    }

    /// Builds a graph from `(a, b, isa)` triples without going through JSON.
    pub fn from_edges<'a>(edges: impl IntoIterator<Item = (&'a str, &'a str, bool)>) -> Self {
        let mut graph = OntologyGraph::default();
        for (a, b, isa) in edges {
            if a != b {
                graph.add_edge(a, b, isa);
            }
        }
        for list in graph.neighbors.iter_mut().chain(graph.parents.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
        graph
    }

    fn intern(&mut self, code: &str) -> usize {
        if let Some(&i) = self.index.get(code) {
            return i;
        }
        let i = self.codes.len();
        self.codes.push(code.to_string());
        self.index.insert(code.to_string(), i);
        self.neighbors.push(Vec::new());
        self.parents.push(Vec::new());
        i
    }

    fn add_edge(&mut self, a: &str, b: &str, isa: bool) {
        let (ia, ib) = (self.intern(a), self.intern(b));
        self.neighbors[ia].push(ib);
        self.neighbors[ib].push(ia);
        if isa {
            self.parents[ia].push(ib);
        }
    }

    pub fn contains(&self, code: &str) -> bool {
        self.index.contains_key(code)
    }

    pub fn node_count(&self) -> usize {
        self.codes.len()
    }

    pub fn undirected_edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn isa_edge_count(&self) -> usize {
        self.parents.iter().map(Vec::len).sum()
    }

    pub fn codes(&self) -> impl Iterator<Item = &str> {
        self.codes.iter().map(String::as_str)
    }

    /// Shortest path length on the undirected view, by Dijkstra over unit
    /// weights. `None` when either code is unknown or no path exists.
    pub fn hop_distance(&self, a: &str, b: &str) -> Option<u32> {
        let (&src, &dst) = (self.index.get(a)?, self.index.get(b)?);
        if src == dst {
            return Some(0);
        }
        let mut dist = vec![u32::MAX; self.codes.len()];
        let mut heap = BinaryHeap::new();
        dist[src] = 0;
        heap.push(Reverse((0u32, src)));
        while let Some(Reverse((d, node))) = heap.pop() {
            if node == dst {
                return Some(d);
            }
            if d > dist[node] {
                continue;
            }
            for &next in &self.neighbors[node] {
                let nd = d + 1;
                if nd < dist[next] {
                    dist[next] = nd;
                    heap.push(Reverse((nd, next)));
                }
            }
        }
        None
    }

    /// True when a directed `isa` path of length at least 1 leads from
    /// `descendant` up to `ancestor`. A code is never its own ancestor.
    pub fn is_ancestor(&self, ancestor: &str, descendant: &str) -> bool {
        let (Some(&target), Some(&start)) = (self.index.get(ancestor), self.index.get(descendant)) else {
            return false;
        };
        if target == start {
            return false;
        }
        let mut seen = vec![false; self.codes.len()];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(node) = stack.pop() {
            for &parent in &self.parents[node] {
                if parent == target {
                    return true;
                }
                if !seen[parent] {
                    seen[parent] = true;
                    stack.push(parent);
                }
            }
        }
        false
    }
}
