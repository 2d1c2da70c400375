use super::{GraphError, RootedTree};

/// The subtree hanging from `u`, rooted at `u`.
pub fn subtree(tree: &RootedTree, u: usize) -> Result<RootedTree, GraphError> {
    if u >= tree.len() {
        return Err(GraphError::UnknownNode(format!("#{u}")));
    }
    let mut nodes = tree.descendants(u);
    nodes.sort_unstable();
    tree.induced(&nodes)
}

/// Cuts the edge `u -> v`, returning `(T_u, T \ T_u)`. The second part
/// keeps the original root.
pub fn split(
    tree: &RootedTree,
    u: usize,
    v: usize,
) -> Result<(RootedTree, RootedTree), GraphError> {
    if u >= tree.len() || v >= tree.len() || tree.parent(u) != Some(v) {
        let name = |x: usize| tree.names().get(x).cloned().unwrap_or_else(|| format!("#{x}"));
        return Err(GraphError::UnknownEdge(name(u), name(v)));
    }
    let mut inside = vec![false; tree.len()];
    let mut lower = tree.descendants(u);
    for &x in &lower {
        inside[x] = true;
    }
    lower.sort_unstable();
    let upper: Vec<usize> = (0..tree.len()).filter(|&x| !inside[x]).collect();
    Ok((tree.induced(&lower)?, tree.induced(&upper)?))
}

/// Re-orients every edge towards the leaf `v` (a node of in-degree 0).
pub fn reroot_at_leaf(tree: &RootedTree, v: usize) -> Result<RootedTree, GraphError> {
    if v >= tree.len() {
        return Err(GraphError::UnknownNode(format!("#{v}")));
    }
    if !tree.children(v).is_empty() {
        return Err(GraphError::NotALeaf(tree.name(v).to_string()));
    }
    let n = tree.len();
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    seen[v] = true;
    let mut stack = vec![v];
    while let Some(x) = stack.pop() {
        let neighbours = tree.children(x).iter().copied().chain(tree.parent(x));
        for y in neighbours {
            if !seen[y] {
                seen[y] = true;
                parent[y] = Some(x);
                stack.push(y);
            }
        }
    }
    RootedTree::from_parents(tree.names().to_vec(), &parent)
}

/// Complete binary tree with `2^h - 1` nodes named `1..` in heap order
/// (children of `i` are `2i` and `2i + 1`), rooted at `1`.
pub fn complete_binary_tree(h: usize) -> Result<RootedTree, GraphError> {
    chain_plus_bt(0, h)
}

/// Directed path on `n` nodes named `1..=n`; node `i + 1` points to `i`
/// so `1` is the root and `n` the only leaf.
pub fn chain(n: usize) -> Result<RootedTree, GraphError> {
    if n == 0 {
        return Err(GraphError::InvalidSize("chain needs at least one node".into()));
    }
    let names = (1..=n).map(|i| i.to_string()).collect();
    let parent: Vec<Option<usize>> = (0..n).map(|i| i.checked_sub(1)).collect();
    RootedTree::from_parents(names, &parent)
}

/// A chain of `i` nodes (`1..=i`, root `1`) whose source is fed by the
/// root of a complete binary tree of height `h`. Tree nodes are named
/// `i + j` for heap position `j`.
pub fn chain_plus_bt(i: usize, h: usize) -> Result<RootedTree, GraphError> {
    if h == 0 {
        return Err(GraphError::InvalidSize("tree height must be positive".into()));
    }
    if h >= usize::BITS as usize - 1 {
        return Err(GraphError::InvalidSize(format!("height {h} is too large")));
    }
    let tree_nodes = (1usize << h) - 1;
    let n = i + tree_nodes;
    let names = (1..=n).map(|x| x.to_string()).collect();
    let mut parent = vec![None; n];
    for c in 2..=i {
        parent[c - 1] = Some(c - 2);
    }
    for j in 1..=tree_nodes {
        let me = i + j - 1;
        parent[me] = if j > 1 {
            Some(i + j / 2 - 1)
        } else if i > 0 {
            Some(i - 1)
        } else {
            None
        };
    }
    RootedTree::from_parents(names, &parent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treecore::{parse_tree, underlying};

    fn bt3() -> RootedTree {
        complete_binary_tree(3).unwrap()
    }

    fn names(t: &RootedTree) -> Vec<&str> {
        t.names().iter().map(String::as_str).collect()
    }

    #[test]
    fn bt3_heap_layout() {
        let expected = parse_tree("2 1\n3 1\n4 2\n5 2\n6 3\n7 3\n").unwrap();
        let t = bt3();
        assert_eq!(t, expected);
        assert_eq!(t.len(), 7);
        assert_eq!(t.leaves().len(), 4);
        assert_eq!(t.height(), 3);
    }

    #[test]
    fn small_families() {
        assert_eq!(chain(1).unwrap(), complete_binary_tree(1).unwrap());
        let t = chain_plus_bt(2, 2).unwrap();
        assert_eq!(t.len(), 5);
        assert_eq!(t.height(), 4);
        assert_eq!(t.serialize(), "2 1\n3 2\n4 3\n5 3\n");
        assert!(chain(0).is_err());
        assert!(complete_binary_tree(0).is_err());
    }

    #[test]
    fn subtree_cases() {
        let t = bt3();
        let root = t.root();
        assert_eq!(subtree(&t, root).unwrap(), t);
        let s = subtree(&t, t.node("2").unwrap()).unwrap();
        assert_eq!(names(&s), ["2", "4", "5"]);
        assert_eq!(s.name(s.root()), "2");
        let c = chain(5).unwrap();
        let leaf = subtree(&c, c.node("5").unwrap()).unwrap();
        assert_eq!(leaf.len(), 1);
    }

    #[test]
    fn split_cases() {
        let c = chain(2).unwrap();
        let (lo, hi) = split(&c, c.node("2").unwrap(), c.node("1").unwrap()).unwrap();
        assert_eq!(names(&lo), ["2"]);
        assert_eq!(names(&hi), ["1"]);

        let t = bt3();
        let n = |s: &str| t.node(s).unwrap();
        let (lo, hi) = split(&t, n("2"), n("1")).unwrap();
        assert_eq!(names(&lo), ["2", "4", "5"]);
        assert_eq!(lo.name(lo.root()), "2");
        assert_eq!(names(&hi), ["1", "3", "6", "7"]);
        assert_eq!(hi.name(hi.root()), "1");

        let (lo, hi) = split(&t, n("4"), n("2")).unwrap();
        assert_eq!(names(&lo), ["4"]);
        assert_eq!(hi.len(), 6);

        assert!(split(&t, n("4"), n("1")).is_err());
    }

    #[test]
    fn reroot_cases() {
        let c = chain(2).unwrap();
        let r = reroot_at_leaf(&c, c.node("2").unwrap()).unwrap();
        assert_eq!(r.serialize(), "1 2\n");

        // Rerooted at 4 the longest path is 4-2-1-3-6: five nodes.
        let t = bt3();
        let r = reroot_at_leaf(&t, t.node("4").unwrap()).unwrap();
        assert_eq!(r.name(r.root()), "4");
        assert_eq!(r.height(), 5);
        assert_eq!(underlying(&r), underlying(&t));

        assert!(matches!(
            reroot_at_leaf(&t, t.node("2").unwrap()),
            Err(GraphError::NotALeaf(_))
        ));
    }
}
