use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use super::GraphError;

/// A directed acyclic graph with a unique sink (the root).
///
/// Nodes are addressed by dense indices `0..n`. Index order equals the
/// lexicographic order of the node tokens, so every traversal that walks
/// indices in ascending order is deterministic with respect to the input.
#[derive(Clone, PartialEq, Eq)]
pub struct Dag {
    names: Vec<String>,
    lookup: HashMap<String, usize>,
    preds: Vec<Vec<usize>>,
    succs: Vec<Vec<usize>>,
    root: usize,
}

/// A rooted directed tree: every non-root node has exactly one out-edge
/// (towards its parent) and the root is the unique sink.
#[derive(Clone, PartialEq, Eq)]
pub struct RootedTree(Dag);

/// Result of [`parse_graph`]: trees are recognised automatically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Graph {
    Tree(RootedTree),
    Dag(Dag),
}

impl Graph {
    pub fn as_dag(&self) -> &Dag {
        match self {
            Graph::Tree(t) => t.as_dag(),
            Graph::Dag(d) => d,
        }
    }

    pub fn into_dag(self) -> Dag {
        match self {
            Graph::Tree(t) => t.0,
            Graph::Dag(d) => d,
        }
    }

    pub fn into_tree(self) -> Result<RootedTree, GraphError> {
        match self {
            Graph::Tree(t) => Ok(t),
            Graph::Dag(_) => Err(GraphError::NotATree),
        }
    }
}

impl Dag {
    /// Builds a graph from node tokens and `(from, to)` edges given as
    /// tokens. Nodes mentioned only in edges are added implicitly.
    pub fn from_named<N, E, S>(nodes: N, edges: E) -> Result<Dag, GraphError>
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
        let indexed = edges
            .iter()
            .map(|(u, v)| (lookup[u], lookup[v]))
            .collect::<Vec<_>>();
        Self::assemble(names, lookup, indexed)
    }

    /// Builds a graph from arbitrary (not necessarily sorted, but unique)
    /// names and index-based edges referring to positions in `names`.
    pub(crate) fn from_indexed(
        names: Vec<String>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Dag, GraphError> {
        let mut order: Vec<usize> = (0..names.len()).collect();
        order.sort_unstable_by(|&a, &b| names[a].cmp(&names[b]));
        let mut remap = vec![0usize; names.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old] = new;
        }
        let mut slots: Vec<Option<String>> = names.into_iter().map(Some).collect();
        let sorted: Vec<String> = order
            .iter()
            .map(|&old| slots[old].take().expect("unique positions"))
            .collect();
        let lookup: HashMap<String, usize> =
            sorted.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        if lookup.len() != sorted.len() {
            return Err(GraphError::DuplicateNode);
        }
        let edges = edges.into_iter().map(|(u, v)| (remap[u], remap[v])).collect();
        Self::assemble(sorted, lookup, edges)
    }

    fn assemble(
        names: Vec<String>,
        lookup: HashMap<String, usize>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Dag, GraphError> {
        let n = names.len();
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut preds = vec![Vec::new(); n];
        let mut succs = vec![Vec::new(); n];
        let mut seen = HashSet::with_capacity(edges.len());
        for &(u, v) in &edges {
            if u == v {
                return Err(GraphError::Cycle(names[u].clone()));
            }
            if !seen.insert((u, v)) {
                return Err(GraphError::DuplicateEdge(names[u].clone(), names[v].clone()));
            }
            succs[u].push(v);
            preds[v].push(u);
        }
        for list in preds.iter_mut().chain(succs.iter_mut()) {
            list.sort_unstable();
        }

        // Kahn's algorithm; leftovers lie on or behind a cycle.
        let mut indeg: Vec<usize> = preds.iter().map(Vec::len).collect();
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut visited = 0;
        while let Some(v) = queue.pop_front() {
            visited += 1;
            for &w in &succs[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
        if visited != n {
            let culprit = (0..n).find(|&v| indeg[v] > 0).expect("cycle member");
            return Err(GraphError::Cycle(names[culprit].clone()));
        }

        let sinks: Vec<usize> = (0..n).filter(|&v| succs[v].is_empty()).collect();
        if sinks.len() > 1 {
            if !weakly_connected(&preds, &succs) {
                return Err(GraphError::Disconnected);
            }
            return Err(GraphError::MultipleSinks(
                sinks.iter().map(|&s| names[s].clone()).collect(),
            ));
        }
        // Acyclic with a single sink: every node has a path to it.
        let root = sinks[0];
        Ok(Dag { names, lookup, preds, succs, root })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
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

    /// In-neighbours of `v`, ascending.
    pub fn preds(&self, v: usize) -> &[usize] {
        &self.preds[v]
    }

    /// Out-neighbours of `v`, ascending.
    pub fn succs(&self, v: usize) -> &[usize] {
        &self.succs[v]
    }

    pub fn edge_count(&self) -> usize {
        self.succs.iter().map(Vec::len).sum()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.succs[u].binary_search(&v).is_ok()
    }

    /// All edges `(u, v)` sorted by `(u, v)`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|u| self.succs[u].iter().map(move |&v| (u, v)))
            .collect()
    }

    pub fn is_tree(&self) -> bool {
        self.succs
            .iter()
            .enumerate()
            .all(|(v, s)| if v == self.root { s.is_empty() } else { s.len() == 1 })
    }

    /// Canonical edge-list text: one `u v` line per edge ordered by the
    /// child token, LF endings. A lone node is written on its own line.
    pub fn serialize(&self) -> String {
        if self.len() == 1 {
            return format!("{}\n", self.names[0]);
        }
        let mut out = String::new();
        for (u, v) in self.edges() {
            out.push_str(&self.names[u]);
            out.push(' ');
            out.push_str(&self.names[v]);
            out.push('\n');
        }
        out
    }

    /// Nodes with no in-neighbours, ascending.
    pub fn sources(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.preds[v].is_empty()).collect()
    }
}

fn weakly_connected(preds: &[Vec<usize>], succs: &[Vec<usize>]) -> bool {
    let n = preds.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &w in preds[v].iter().chain(&succs[v]) {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == n
}

impl fmt::Debug for Dag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Dag")
            .field("root", &self.names[self.root])
            .field("edges", &self.serialize())
            .finish()
    }
}

impl fmt::Debug for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RootedTree")
            .field("root", &self.0.names[self.0.root])
            .field("edges", &self.0.serialize())
            .finish()
    }
}

impl std::ops::Deref for RootedTree {
    type Target = Dag;

    fn deref(&self) -> &Dag {
        &self.0
    }
}

impl AsRef<Dag> for RootedTree {
    fn as_ref(&self) -> &Dag {
        &self.0
    }
}

impl TryFrom<Dag> for RootedTree {
    type Error = GraphError;

    fn try_from(dag: Dag) -> Result<Self, GraphError> {
        if dag.is_tree() {
            Ok(RootedTree(dag))
        } else {
            Err(GraphError::NotATree)
        }
    }
}

impl RootedTree {
    pub fn from_named<N, E, S>(nodes: N, edges: E) -> Result<RootedTree, GraphError>
    where
        N: IntoIterator<Item = S>,
        E: IntoIterator<Item = (S, S)>,
        S: Into<String>,
    {
        RootedTree::try_from(Dag::from_named(nodes, edges)?)
    }

    /// `parent[i]` is the parent index of node `i`, `None` for the root.
    pub(crate) fn from_parents(
        names: Vec<String>,
        parent: &[Option<usize>],
    ) -> Result<RootedTree, GraphError> {
        let edges = parent
            .iter()
            .enumerate()
            .filter_map(|(v, p)| p.map(|p| (v, p)))
            .collect::<Vec<_>>();
        RootedTree::try_from(Dag::from_indexed(names, edges)?)
    }

    pub fn as_dag(&self) -> &Dag {
        &self.0
    }

    pub fn into_dag(self) -> Dag {
        self.0
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.0.succs[v].first().copied()
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.0.preds[v]
    }

    /// Leaves are nodes with in-degree 0. A single-node tree's root is a leaf.
    pub fn leaves(&self) -> Vec<usize> {
        self.sources()
    }

    /// Nodes of the subtree hanging from `u` (including `u`), in BFS order.
    pub fn descendants(&self, u: usize) -> Vec<usize> {
        let mut out = vec![u];
        let mut i = 0;
        while i < out.len() {
            out.extend_from_slice(self.children(out[i]));
            i += 1;
        }
        out
    }

    /// Nodes in post-order (children before parents, children ascending).
    pub fn post_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![(self.root(), 0usize)];
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            let kids = self.children(v);
            if *next < kids.len() {
                let c = kids[*next];
                *next += 1;
                stack.push((c, 0));
            } else {
                out.push(v);
                stack.pop();
            }
        }
        out
    }

    /// Number of nodes on the longest root-to-leaf path.
    pub fn height(&self) -> usize {
        let mut best = 0;
        let mut stack = vec![(self.root(), 1usize)];
        while let Some((v, d)) = stack.pop() {
            best = best.max(d);
            for &c in self.children(v) {
                stack.push((c, d + 1));
            }
        }
        best
    }

    /// Largest undirected degree (in-degree plus out-degree).
    pub fn max_degree(&self) -> usize {
        (0..self.len())
            .map(|v| self.children(v).len() + usize::from(self.parent(v).is_some()))
            .max()
            .unwrap_or(0)
    }

    /// Builds a tree on a subset of nodes (given by index) with the parent
    /// relation restricted to the subset. The subset must be connected.
    pub(crate) fn induced(&self, nodes: &[usize]) -> Result<RootedTree, GraphError> {
        let mut pos = HashMap::with_capacity(nodes.len());
        for (i, &v) in nodes.iter().enumerate() {
            pos.insert(v, i);
        }
        let names = nodes.iter().map(|&v| self.name(v).to_string()).collect();
        let parent: Vec<Option<usize>> = nodes
            .iter()
            .map(|&v| self.parent(v).and_then(|p| pos.get(&p).copied()))
            .collect();
        RootedTree::from_parents(names, &parent)
    }
}

/// Parses the plain edge-list format: one `u v` line per edge `u -> v`,
/// a bare `v` line for an isolated node, `#` comments and blank lines
/// ignored. The root is the unique sink.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.iter().any(|t| t.chars().any(char::is_control)) {
            return Err(GraphError::Syntax { line: lineno + 1, text: raw.to_string() });
        }
        match tokens.as_slice() {
            [v] => nodes.push(v.to_string()),
            [u, v] => edges.push((u.to_string(), v.to_string())),
            _ => return Err(GraphError::Syntax { line: lineno + 1, text: raw.to_string() }),
        }
    }
    let dag = Dag::from_named(nodes, edges)?;
    Ok(if dag.is_tree() { Graph::Tree(RootedTree(dag)) } else { Graph::Dag(dag) })
}

/// Convenience wrapper around [`parse_graph`] that insists on a tree.
pub fn parse_tree(text: &str) -> Result<RootedTree, GraphError> {
    parse_graph(text)?.into_tree()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_branching_tree() {
        let g = parse_graph("2 1\n3 1").unwrap();
        let Graph::Tree(t) = g else { panic!("expected tree") };
        assert_eq!(t.name(t.root()), "1");
        let leaves: Vec<&str> = t.leaves().into_iter().map(|v| t.name(v)).collect();
        assert_eq!(leaves, ["2", "3"]);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_graph("1 2\n2 1"), Err(GraphError::Cycle(_))));
        assert!(matches!(parse_graph("1 1"), Err(GraphError::Cycle(_))));
        assert!(matches!(parse_graph("1 2\n1 2"), Err(GraphError::DuplicateEdge(..))));
        assert!(matches!(parse_graph("1 2\n3 4"), Err(GraphError::Disconnected)));
        assert!(matches!(parse_graph("1 2\n1 3"), Err(GraphError::MultipleSinks(_))));
        assert!(matches!(parse_graph("# nothing\n\n"), Err(GraphError::Empty)));
        assert!(matches!(parse_graph("1 2 3"), Err(GraphError::Syntax { line: 1, .. })));
    }

    #[test]
    fn comments_and_isolated_node() {
        let g = parse_graph("# single\n\nv\n").unwrap();
        assert_eq!(g.as_dag().len(), 1);
        assert_eq!(g.as_dag().serialize(), "v\n");
    }

    #[test]
    fn dag_classification() {
        // G1 from the two-DAG example: node 4 feeds both 1 and 3.
        let g = parse_graph("2 1\n3 1\n4 1\n4 3\n5 4\n6 4\n7 4\n").unwrap();
        assert!(matches!(g, Graph::Dag(_)));
        assert_eq!(g.as_dag().name(g.as_dag().root()), "1");
    }

    #[test]
    fn serialization_is_sorted_by_child() {
        let t = parse_tree("3 1\n10 2\n2 1\n").unwrap();
        assert_eq!(t.serialize(), "10 2\n2 1\n3 1\n");
    }
}
