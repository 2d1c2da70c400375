//! Shared fixtures: exhaustive small trees, seeded random trees and DAGs.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use revpeb::treecore::{Dag, RootedTree, UndirectedTree};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn label(i: usize) -> String {
    format!("v{i:02}")
}

/// Rooted tree from a parent array (`None` marks the root).
pub fn tree_from_parents(parent: &[Option<usize>]) -> RootedTree {
    let nodes: Vec<String> = (0..parent.len()).map(label).collect();
    let edges: Vec<(String, String)> = parent
        .iter()
        .enumerate()
        .filter_map(|(c, p)| p.map(|p| (label(c), label(p))))
        .collect();
    RootedTree::from_named(nodes, edges).expect("parent array describes a tree")
}

pub fn undirected_from_edges(n: usize, edges: &[(usize, usize)]) -> UndirectedTree {
    UndirectedTree::from_named(
        (0..n).map(label),
        edges.iter().map(|&(a, b)| (label(a), label(b))),
    )
    .expect("edge list describes a tree")
}

fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    adj
}

/// Parent array orienting `edges` towards `root`.
pub fn orient(n: usize, edges: &[(usize, usize)], root: usize) -> Vec<Option<usize>> {
    let adj = adjacency(n, edges);
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some(v);
                stack.push(w);
            }
        }
    }
    parent
}

/// Canonical nested-parenthesis encodings of every unlabeled rooted tree
/// with exactly `n` nodes, for each `n` up to `max`.
fn rooted_shapes(max: usize) -> Vec<Vec<String>> {
    let mut by_size: Vec<Vec<String>> = vec![Vec::new(), vec!["()".to_string()]];
    for n in 2..=max {
        let pool: Vec<(usize, &String)> = (1..n)
            .flat_map(|s| by_size[s].iter().map(move |t| (s, t)))
            .collect();
        let mut out = BTreeSet::new();
        let mut picked = Vec::new();
        multisets(&pool, 0, n - 1, &mut picked, &mut out);
        by_size.push(out.into_iter().collect());
    }
    by_size
}

fn multisets(
    pool: &[(usize, &String)],
    from: usize,
    remaining: usize,
    picked: &mut Vec<String>,
    out: &mut BTreeSet<String>,
) {
    if remaining == 0 {
        let mut kids = picked.clone();
        kids.sort();
        out.insert(format!("({})", kids.concat()));
        return;
    }
    for i in from..pool.len() {
        let (size, t) = pool[i];
        if size <= remaining {
            picked.push(t.clone());
            multisets(pool, i, remaining - size, picked, out);
            picked.pop();
        }
    }
}

fn edges_of_shape(shape: &str) -> (usize, Vec<(usize, usize)>) {
    let mut edges = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut n = 0;
    for ch in shape.chars() {
        if ch == '(' {
            if let Some(&p) = stack.last() {
                edges.push((n, p));
            }
            stack.push(n);
            n += 1;
        } else {
            stack.pop();
        }
    }
    (n, edges)
}

fn ahu(adj: &[Vec<usize>], v: usize, from: usize) -> String {
    let mut kids: Vec<String> = adj[v].iter().filter(|&&w| w != from).map(|&w| ahu(adj, w, v)).collect();
    kids.sort();
    format!("({})", kids.concat())
}

fn centers(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    if n <= 2 {
        return (0..n).collect();
    }
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut left = n;
    while left > 2 {
        left -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &w in &adj[v] {
                degree[w] -= 1;
                if degree[w] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    layer
}

/// Every unlabeled free tree with exactly `n` nodes, as edge lists over
/// `0..n`.
pub fn free_trees(n: usize) -> Vec<Vec<(usize, usize)>> {
    if n == 0 {
        return Vec::new();
    }
    let shapes = rooted_shapes(n);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for shape in &shapes[n] {
        let (count, edges) = edges_of_shape(shape);
        let adj = adjacency(count, &edges);
        let key = centers(&adj).into_iter().map(|c| ahu(&adj, c, usize::MAX)).min().unwrap();
        if seen.insert(key) {
            out.push(edges);
        }
    }
    out
}

/// Every rooting of every unlabeled tree with `1..=max` nodes.
pub fn all_rooted_trees(max: usize) -> Vec<RootedTree> {
    let mut out = Vec::new();
    for n in 1..=max {
        for edges in free_trees(n) {
            for root in 0..n {
                out.push(tree_from_parents(&orient(n, &edges, root)));
            }
        }
    }
    out
}

/// Uniform random labeled tree on `n` nodes via a Prüfer sequence.
pub fn random_tree_edges(rng: &mut impl Rng, n: usize) -> Vec<(usize, usize)> {
    if n < 2 {
        return Vec::new();
    }
    if n == 2 {
        return vec![(0, 1)];
    }
    let code: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &c in &code {
        degree[c] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut leaves: BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    for &c in &code {
        let leaf = *leaves.iter().next().unwrap();
        leaves.remove(&leaf);
        edges.push((leaf, c));
        degree[c] -= 1;
        if degree[c] == 1 {
            leaves.insert(c);
        }
    }
    let rest: Vec<usize> = leaves.into_iter().collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Random tree where every node has undirected degree at most `cap`.
pub fn random_bounded_degree_edges(rng: &mut impl Rng, n: usize, cap: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![0usize; n];
    let mut open: Vec<usize> = if n > 0 { vec![0] } else { Vec::new() };
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for v in 1..n {
        let slot = rng.gen_range(0..open.len());
        let p = open[slot];
        edges.push((v, p));
        degree[p] += 1;
        degree[v] += 1;
        if degree[p] == cap {
            open.swap_remove(slot);
        }
        if degree[v] < cap {
            open.push(v);
        }
    }
    edges
}

/// Random rooted tree with a random root.
pub fn random_rooted_tree(rng: &mut impl Rng, n: usize) -> RootedTree {
    let edges = random_tree_edges(rng, n);
    let root = rng.gen_range(0..n);
    tree_from_parents(&orient(n, &edges, root))
}

/// Random DAG on `n` nodes with the single sink `v{n-1}`: every other
/// node gets at least one edge to a later node.
pub fn random_dag(rng: &mut impl Rng, n: usize, extra: f64) -> Dag {
    let mut edges = BTreeSet::new();
    for i in 0..n.saturating_sub(1) {
        edges.insert((i, rng.gen_range(i + 1..n)));
        for j in i + 1..n {
            if rng.gen_bool(extra) {
                edges.insert((i, j));
            }
        }
    }
    Dag::from_named(
        (0..n).map(label),
        edges.into_iter().map(|(a, b)| (label(a), label(b))),
    )
    .expect("forward edges with a unique sink")
}

/// Two seven-node DAGs that differ only in the direction of the edge
/// between `3` and `4`.
pub fn g1() -> Dag {
    revpeb::treecore::parse_graph("2 1\n3 1\n4 1\n4 3\n5 4\n6 4\n7 4\n").unwrap().into_dag()
}

pub fn g2() -> Dag {
    revpeb::treecore::parse_graph("2 1\n3 1\n4 1\n3 4\n5 4\n6 4\n7 4\n").unwrap().into_dag()
}
