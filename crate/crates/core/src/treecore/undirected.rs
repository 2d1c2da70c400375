use std::collections::HashMap;
use std::fmt;

use super::{GraphError, RootedTree};

/// An undirected tree. Edges are stored as `(a, b)` with `a < b`, sorted,
/// so an edge's position in [`UndirectedTree::edges`] is its canonical id.
#[derive(Clone, PartialEq, Eq)]
pub struct UndirectedTree {
    names: Vec<String>,
    lookup: HashMap<String, usize>,
    adj: Vec<Vec<(usize, usize)>>,
    edges: Vec<(usize, usize)>,
}

impl UndirectedTree {
    pub fn from_named<N, E, S>(nodes: N, edges: E) -> Result<UndirectedTree, GraphError>
    where
        N: IntoIterator<Item = S>,
        E: IntoIterator<Item = (S, S)>,
        S: Into<String>,
    {
        let mut names: Vec<String> = nodes.into_iter().map(Into::into).collect();
        let edges: Vec<(String, String)> =
            edges.into_iter().map(|(u, v)| (u.into(), v.into())).collect();
        for (u, v) in &edges {
            names.push(u.clone());
            names.push(v.clone());
        }
        names.sort_unstable();
        names.dedup();
        let lookup: HashMap<String, usize> =
            names.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let indexed = edges.iter().map(|(u, v)| (lookup[u], lookup[v])).collect();
        Self::assemble(names, lookup, indexed)
    }

    /// `names` must already be sorted and unique.
    pub(crate) fn from_sorted(
        names: Vec<String>,
        edges: Vec<(usize, usize)>,
    ) -> Result<UndirectedTree, GraphError> {
        let lookup = names.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Self::assemble(names, lookup, edges)
    }

    fn assemble(
        names: Vec<String>,
        lookup: HashMap<String, usize>,
        raw: Vec<(usize, usize)>,
    ) -> Result<UndirectedTree, GraphError> {
        let n = names.len();
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut edges: Vec<(usize, usize)> = Vec::with_capacity(raw.len());
        for (u, v) in raw {
            if u == v {
                return Err(GraphError::Cycle(names[u].clone()));
            }
            edges.push((u.min(v), u.max(v)));
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(
                names[w[0].0].clone(),
                names[w[0].1].clone(),
            ));
        }
        let mut adj = vec![Vec::new(); n];
        for (id, &(a, b)) in edges.iter().enumerate() {
            adj[a].push((b, id));
            adj[b].push((a, id));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        // Connected check; with |E| = n - 1 connectivity implies acyclicity.
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &(w, _) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        if count != n {
            return Err(GraphError::Disconnected);
        }
        if edges.len() != n - 1 {
            return Err(GraphError::Cycle(names[edges[0].0].clone()));
        }
        Ok(UndirectedTree { names, lookup, adj, edges })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.lookup.get(name).copied()
    }

    pub fn node(&self, name: &str) -> Result<usize, GraphError> {
        self.index_of(name).ok_or_else(|| GraphError::UnknownNode(name.to_string()))
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Neighbours of `v` as `(neighbour, edge id)`, ascending by neighbour.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Canonical id of the edge `{u, v}`.
    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    pub fn edge_id_named(&self, u: &str, v: &str) -> Result<usize, GraphError> {
        let (a, b) = (self.node(u)?, self.node(v)?);
        self.edge_id(a, b)
            .ok_or_else(|| GraphError::UnknownEdge(u.to_string(), v.to_string()))
    }

    /// Nodes on the unique path from `from` to `to`, both included.
    pub fn path(&self, from: usize, to: usize) -> Vec<usize> {
        let mut prev = vec![usize::MAX; self.len()];
        prev[from] = from;
        let mut stack = vec![from];
        while let Some(v) = stack.pop() {
            if v == to {
                break;
            }
            for &(w, _) in &self.adj[v] {
                if prev[w] == usize::MAX {
                    prev[w] = v;
                    stack.push(w);
                }
            }
        }
        let mut out = vec![to];
        let mut cur = to;
        while cur != from {
            cur = prev[cur];
            out.push(cur);
        }
        out.reverse();
        out
    }

    /// Same edge-list text format as directed graphs, edges written as
    /// `a b` with `a < b` lexicographically.
    pub fn serialize(&self) -> String {
        if self.len() == 1 {
            return format!("{}\n", self.names[0]);
        }
        let mut out = String::new();
        for &(a, b) in &self.edges {
            out.push_str(&self.names[a]);
            out.push(' ');
            out.push_str(&self.names[b]);
            out.push('\n');
        }
        out
    }
}

impl fmt::Debug for UndirectedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UndirectedTree").field("edges", &self.serialize()).finish()
    }
}

/// Reads an edge list ignoring orientation.
pub fn parse_undirected(text: &str) -> Result<UndirectedTree, GraphError> {
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            [v] => nodes.push(v.to_string()),
            [u, v] => edges.push((u.to_string(), v.to_string())),
            _ => return Err(GraphError::Syntax { line: lineno + 1, text: raw.to_string() }),
        }
    }
    UndirectedTree::from_named(nodes, edges)
}

/// The underlying undirected tree: same nodes (and indices), each directed
/// edge turned into an unordered pair.
pub fn underlying(tree: &RootedTree) -> UndirectedTree {
    let edges = (0..tree.len())
        .filter_map(|v| tree.parent(v).map(|p| (v, p)))
        .collect();
    UndirectedTree::from_sorted(tree.names().to_vec(), edges)
        .expect("a rooted tree is an undirected tree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treecore::{chain, complete_binary_tree};

    #[test]
    fn single_node() {
        let t = chain(1).unwrap();
        let u = underlying(&t);
        assert_eq!(u.len(), 1);
        assert_eq!(u.edge_count(), 0);
    }

    #[test]
    fn bt3_underlying() {
        let u = underlying(&complete_binary_tree(3).unwrap());
        assert_eq!(u.len(), 7);
        assert_eq!(u.edge_count(), 6);
        let degrees: Vec<usize> = (0..7).map(|v| u.degree(v)).collect();
        // names sorted "1".."7": root has 2 neighbours, 2 and 3 have 3, leaves 1
        assert_eq!(degrees, [2, 3, 3, 1, 1, 1, 1]);
    }

    #[test]
    fn chain_is_a_path() {
        let u = underlying(&chain(3).unwrap());
        assert_eq!(u.max_degree(), 2);
        let a = u.node("1").unwrap();
        let c = u.node("3").unwrap();
        let p: Vec<&str> = u.path(a, c).into_iter().map(|v| u.name(v)).collect();
        assert_eq!(p, ["1", "2", "3"]);
    }

    #[test]
    fn rejects_cycles_and_forests() {
        assert!(parse_undirected("a b\nb c\nc a\n").is_err());
        assert!(matches!(parse_undirected("a b\nc d\n"), Err(GraphError::Disconnected)));
        assert!(matches!(parse_undirected("a b\nb a\n"), Err(GraphError::DuplicateEdge(..))));
    }
}
