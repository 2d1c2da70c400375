//! Edge rank colorings of undirected trees and the matching (contraction)
//! game.
//!
//! A coloring is valid when any two edges of equal color `i` are separated
//! by an edge of color greater than `i` on the path between them. The
//! optimum number of colors equals the number of rounds needed to contract
//! the tree to a single node when each round contracts a matching.

use std::collections::HashSet;
use std::fmt;

use smallvec::SmallVec;
use thiserror::Error;

use crate::text::{content_lines, split_pair, FormatError};
use crate::treecore::UndirectedTree;

/// Largest tree (in edges) accepted by [`erank_bruteforce`].
pub const BRUTEFORCE_EDGE_CAP: usize = 14;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RankingError {
    #[error("coloring has {found} entries but the tree has {expected} edges")]
    WrongEdgeCount { expected: usize, found: usize },
    #[error("edge {}-{} has color 0; colors start at 1", .0.0, .0.1)]
    ZeroColor((String, String)),
    #[error("edges {}-{} and {}-{} both have color {color} with no larger color between them (path {})",
        .first.0, .first.1, .second.0, .second.1, .path.join(" "))]
    Conflict {
        first: (String, String),
        second: (String, String),
        color: u32,
        path: Vec<String>,
    },
    #[error("edge id {0} is out of range")]
    EdgeOutOfRange(usize),
    #[error("step {step}: edge {}-{} is already contracted", .edge.0, .edge.1)]
    NotLive { step: usize, edge: (String, String) },
    #[error("step {step}: edges {}-{} and {}-{} touch the same contracted node",
        .first.0, .first.1, .second.0, .second.1)]
    SharedClass {
        step: usize,
        first: (String, String),
        second: (String, String),
    },
    #[error("contraction ended with {classes} nodes instead of one")]
    Unfinished { classes: usize },
    #[error("tree has {edges} edges; exhaustive search is capped at {cap}")]
    TooLarge { edges: usize, cap: usize },
}

fn edge_names(u: &UndirectedTree, e: usize) -> (String, String) {
    let (a, b) = u.edges()[e];
    (u.name(a).to_string(), u.name(b).to_string())
}

/// Colors indexed by edge id of the underlying [`UndirectedTree`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct EdgeColoring {
    pub colors: Vec<u32>,
}

impl EdgeColoring {
    pub fn new(colors: Vec<u32>) -> EdgeColoring {
        EdgeColoring { colors }
    }

    /// Largest color used; 0 for a tree without edges.
    pub fn rank(&self) -> u32 {
        self.colors.iter().copied().max().unwrap_or(0)
    }

    pub fn color(&self, edge: usize) -> u32 {
        self.colors[edge]
    }

    /// One `u v c` line per edge, in edge-id order.
    pub fn to_text(&self, u: &UndirectedTree) -> String {
        let mut out = String::new();
        for (e, &(a, b)) in u.edges().iter().enumerate() {
            out.push_str(&format!("{} {} {}\n", u.name(a), u.name(b), self.colors[e]));
        }
        out
    }

    pub fn parse(u: &UndirectedTree, text: &str) -> Result<EdgeColoring, FormatError> {
        let mut colors = vec![None; u.edge_count()];
        for (line, content) in content_lines(text) {
            let tokens: Vec<&str> = content.split_whitespace().collect();
            let [a, b, c] = tokens[..] else {
                return Err(FormatError::new(line, "expected `u v color`"));
            };
            let e = u
                .edge_id_named(a, b)
                .ok()
                .ok_or_else(|| FormatError::new(line, format!("{a}-{b} is not an edge")))?;
            let c: u32 = c
                .parse()
                .map_err(|_| FormatError::new(line, format!("bad color {c:?}")))?;
            if colors[e].replace(c).is_some() {
                return Err(FormatError::new(line, format!("edge {a}-{b} colored twice")));
            }
        }
        let colors = colors
            .into_iter()
            .enumerate()
            .map(|(e, c)| {
                c.ok_or_else(|| {
                    let (a, b) = edge_names(u, e);
                    FormatError::new(0, format!("edge {a}-{b} has no color"))
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(EdgeColoring { colors })
    }
}

/// A sequence of matchings; edges are ids of the original tree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MatchingSequence {
    pub steps: Vec<Vec<usize>>,
}

impl MatchingSequence {
    pub fn new(steps: Vec<Vec<usize>>) -> MatchingSequence {
        MatchingSequence { steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// One line per step with `u-v` tokens; an empty step is written `-`.
    pub fn to_text(&self, u: &UndirectedTree) -> String {
        let mut out = String::new();
        for step in &self.steps {
            let mut ids = step.clone();
            ids.sort_unstable();
            let tokens: Vec<String> = ids
                .iter()
                .map(|&e| {
                    let (a, b) = u.edges()[e];
                    format!("{}-{}", u.name(a), u.name(b))
                })
                .collect();
            if tokens.is_empty() {
                out.push('-');
            } else {
                out.push_str(&tokens.join(" "));
            }
            out.push('\n');
        }
        out
    }

    pub fn parse(u: &UndirectedTree, text: &str) -> Result<MatchingSequence, FormatError> {
        let mut steps = Vec::new();
        for (line, content) in content_lines(text) {
            if content == "-" {
                steps.push(Vec::new());
                continue;
            }
            let step = content
                .split_whitespace()
                .map(|tok| split_pair(tok, '-', |a, b| u.edge_id_named(a, b).ok()))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|msg| FormatError::new(line, msg))?;
            steps.push(step);
        }
        Ok(MatchingSequence { steps })
    }
}

/// Partition of the original nodes after some contractions. An original
/// edge is live while its endpoints sit in different classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionState {
    parent: Vec<usize>,
    classes: usize,
}

impl ContractionState {
    pub fn new(n: usize) -> ContractionState {
        ContractionState { parent: (0..n).collect(), classes: n }
    }

    pub fn class_of(&self, mut v: usize) -> usize {
        while self.parent[v] != v {
            v = self.parent[v];
        }
        v
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn is_live(&self, u: &UndirectedTree, edge: usize) -> bool {
        let (a, b) = u.edges()[edge];
        self.class_of(a) != self.class_of(b)
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.class_of(a), self.class_of(b));
        let (keep, drop) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[drop] = keep;
        // Flatten both endpoints so later lookups stay short.
        self.parent[a] = keep;
        self.parent[b] = keep;
        self.classes -= 1;
    }

    /// Contracts the matching `m`. `step` only labels errors.
    pub fn contract_step(
        &self,
        u: &UndirectedTree,
        m: &[usize],
        step: usize,
    ) -> Result<ContractionState, RankingError> {
        let mut owner: std::collections::HashMap<usize, usize> = Default::default();
        for &e in m {
            if e >= u.edge_count() {
                return Err(RankingError::EdgeOutOfRange(e));
            }
            let (a, b) = u.edges()[e];
            let (ca, cb) = (self.class_of(a), self.class_of(b));
            if ca == cb {
                return Err(RankingError::NotLive { step, edge: edge_names(u, e) });
            }
            for c in [ca, cb] {
                if let Some(&other) = owner.get(&c) {
                    return Err(RankingError::SharedClass {
                        step,
                        first: edge_names(u, other),
                        second: edge_names(u, e),
                    });
                }
                owner.insert(c, e);
            }
        }
        let mut next = self.clone();
        for &e in m {
            let (a, b) = u.edges()[e];
            next.union(a, b);
        }
        Ok(next)
    }
}

/// Contracts every edge of the matching `m` in one round.
pub fn contract(
    state: &ContractionState,
    u: &UndirectedTree,
    m: &[usize],
) -> Result<ContractionState, RankingError> {
    state.contract_step(u, m, 1)
}

/// Replays the contraction game; returns the number of rounds.
pub fn validate_matchings(u: &UndirectedTree, seq: &MatchingSequence) -> Result<usize, RankingError> {
    let mut state = ContractionState::new(u.len());
    for (i, step) in seq.steps.iter().enumerate() {
        state = state.contract_step(u, step, i + 1)?;
    }
    if state.classes() != 1 {
        return Err(RankingError::Unfinished { classes: state.classes() });
    }
    Ok(seq.len())
}

/// Checks the coloring and returns its rank.
///
/// Colors are processed in increasing order over a union-find of the
/// edges with smaller colors: two edges of color `i` conflict exactly when
/// they land in one component of the forest of edges colored at most `i`.
pub fn validate_coloring(u: &UndirectedTree, c: &EdgeColoring) -> Result<u32, RankingError> {
    if c.colors.len() != u.edge_count() {
        return Err(RankingError::WrongEdgeCount { expected: u.edge_count(), found: c.colors.len() });
    }
    if let Some(e) = c.colors.iter().position(|&x| x == 0) {
        return Err(RankingError::ZeroColor(edge_names(u, e)));
    }
    let mut by_color: Vec<usize> = (0..u.edge_count()).collect();
    by_color.sort_by_key(|&e| (c.colors[e], e));
    let mut dsu = ContractionState::new(u.len());
    // Per component root: the edge of the current color it already holds.
    let mut holder: Vec<Option<(u32, usize)>> = vec![None; u.len()];
    for &e in &by_color {
        let color = c.colors[e];
        let (a, b) = u.edges()[e];
        for end in [a, b] {
            if let Some((hc, other)) = holder[dsu.class_of(end)] {
                if hc == color {
                    return Err(conflict(u, e, other, color));
                }
            }
        }
        dsu.union(a, b);
        holder[dsu.class_of(a)] = Some((color, e));
    }
    Ok(c.rank())
}

fn conflict(u: &UndirectedTree, e: usize, f: usize, color: u32) -> RankingError {
    let (a, b) = u.edges()[f];
    let (x, y) = u.edges()[e];
    let path = [(a, x), (a, y), (b, x), (b, y)]
        .into_iter()
        .map(|(p, q)| u.path(p, q))
        .max_by_key(|p| p.len())
        .expect("four candidates");
    RankingError::Conflict {
        first: edge_names(u, f),
        second: edge_names(u, e),
        color,
        path: path.into_iter().map(|v| u.name(v).to_string()).collect(),
    }
}

/// Step `i` contracts every edge colored `i`.
pub fn coloring_to_matchings(u: &UndirectedTree, c: &EdgeColoring) -> Result<MatchingSequence, RankingError> {
    let rank = validate_coloring(u, c)?;
    let mut steps = vec![Vec::new(); rank as usize];
    for (e, &color) in c.colors.iter().enumerate() {
        steps[color as usize - 1].push(e);
    }
    Ok(MatchingSequence { steps })
}

/// An edge contracted in round `i` gets color `i`.
pub fn matchings_to_coloring(u: &UndirectedTree, seq: &MatchingSequence) -> Result<EdgeColoring, RankingError> {
    validate_matchings(u, seq)?;
    let mut colors = vec![0; u.edge_count()];
    for (i, step) in seq.steps.iter().enumerate() {
        for &e in step {
            colors[e] = i as u32 + 1;
        }
    }
    Ok(EdgeColoring { colors })
}

/// Bit set of colors, compared as the integer `sum 2^c`.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
struct ColorSet(SmallVec<[u64; 2]>);

impl ColorSet {
    fn upto(k: u32) -> ColorSet {
        let mut s = ColorSet::default();
        for c in 1..=k {
            s.insert(c);
        }
        s
    }

    fn contains(&self, c: u32) -> bool {
        let w = (c / 64) as usize;
        w < self.0.len() && self.0[w] >> (c % 64) & 1 == 1
    }

    fn insert(&mut self, c: u32) {
        let w = (c / 64) as usize;
        if self.0.len() <= w {
            self.0.resize(w + 1, 0);
        }
        self.0[w] |= 1 << (c % 64);
    }

    fn remove(&mut self, c: u32) {
        let w = (c / 64) as usize;
        if w < self.0.len() {
            self.0[w] &= !(1 << (c % 64));
            while self.0.last() == Some(&0) {
                self.0.pop();
            }
        }
    }

    fn max(&self) -> u32 {
        match self.0.last() {
            Some(&w) => (self.0.len() as u32 - 1) * 64 + 63 - w.leading_zeros(),
            None => 0,
        }
    }

    /// Largest element strictly below `x`, or 0.
    fn max_below(&self, x: u32) -> u32 {
        (1..x).rev().find(|&c| self.contains(c)).unwrap_or(0)
    }

    fn has_below(&self, x: u32) -> bool {
        self.max_below(x) > 0
    }
}

impl fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries((1..=self.max()).filter(|&c| self.contains(c))).finish()
    }
}

/// Children with identical visible sets are interchangeable.
struct Group {
    visible: ColorSet,
    members: Vec<usize>,
}

/// Top-down search over colors for child edge colors whose visible lists
/// fit inside `allowed` and are pairwise disjoint.
struct Assigner<'a> {
    groups: &'a [Group],
    allowed: &'a ColorSet,
    failed: HashSet<(u32, Vec<u32>)>,
    chosen: Vec<Vec<u32>>,
}

impl Assigner<'_> {
    fn run(groups: &[Group], allowed: &ColorSet, top: u32) -> Option<Vec<Vec<u32>>> {
        let mut a = Assigner {
            groups,
            allowed,
            failed: HashSet::new(),
            chosen: vec![Vec::new(); groups.len()],
        };
        let mut left: Vec<u32> = groups.iter().map(|g| g.members.len() as u32).collect();
        a.search(top, &mut left).then_some(a.chosen)
    }

    fn search(&mut self, mut x: u32, left: &mut Vec<u32>) -> bool {
        loop {
            if left.iter().all(|&l| l == 0) {
                return true;
            }
            if x == 0 {
                return false;
            }
            let inert = (0..self.groups.len())
                .all(|g| left[g] == 0 || !self.groups[g].visible.has_below(x + 1));
            if inert {
                return self.finish_inert(x, left);
            }
            let owners: u32 = (0..self.groups.len())
                .filter(|&g| self.groups[g].visible.contains(x))
                .map(|g| left[g])
                .sum();
            if !self.allowed.contains(x) {
                if owners > 0 {
                    return false;
                }
            } else if owners > 1 {
                return false;
            } else if owners == 0 {
                break;
            }
            x -= 1;
        }
        // `x` is a free slot: some pending child takes it as its edge color.
        let key = (x, left.clone());
        if self.failed.contains(&key) {
            return false;
        }
        let mut order: Vec<usize> = (0..self.groups.len()).filter(|&g| left[g] > 0).collect();
        order.sort_by_key(|&g| (std::cmp::Reverse(self.groups[g].visible.max_below(x)), g));
        for g in order {
            left[g] -= 1;
            self.chosen[g].push(x);
            if self.search(x - 1, left) {
                return true;
            }
            self.chosen[g].pop();
            left[g] += 1;
        }
        self.failed.insert(key);
        false
    }

    /// Pending children own nothing at or below `x`; hand out the highest
    /// allowed colors.
    fn finish_inert(&mut self, x: u32, left: &mut [u32]) -> bool {
        let need: u32 = left.iter().sum();
        let free: Vec<u32> = (1..=x).rev().filter(|&c| self.allowed.contains(c)).take(need as usize).collect();
        if (free.len() as u32) < need {
            return false;
        }
        let mut slots = free.into_iter();
        for (g, l) in left.iter_mut().enumerate() {
            for _ in 0..*l {
                self.chosen[g].push(slots.next().expect("counted"));
            }
            *l = 0;
        }
        true
    }
}

/// Colors the edges to `children` (given their visible sets) so the
/// visible set seen from the parent is as small as possible.
fn combine(children: Vec<ColorSet>) -> (Vec<u32>, ColorSet) {
    let d = children.len() as u32;
    let top = children.iter().map(ColorSet::max).max().unwrap_or(0) + d;
    let mut groups: Vec<Group> = Vec::new();
    for (i, set) in children.into_iter().enumerate() {
        match groups.iter_mut().find(|g| g.visible == set) {
            Some(g) => g.members.push(i),
            None => groups.push(Group { visible: set, members: vec![i] }),
        }
    }
    let mut allowed = ColorSet::upto(top);
    for b in (1..=top).rev() {
        allowed.remove(b);
        if Assigner::run(&groups, &allowed, top).is_none() {
            allowed.insert(b);
        }
    }
    let chosen = Assigner::run(&groups, &allowed, top).expect("the final allowed set is feasible");
    let mut colors = vec![0; d as usize];
    let mut visible = ColorSet::default();
    for (g, picks) in groups.iter().zip(chosen) {
        for (&child, c) in g.members.iter().zip(picks) {
            colors[child] = c;
            visible.insert(c);
            for x in c + 1..=g.visible.max() {
                if g.visible.contains(x) {
                    visible.insert(x);
                }
            }
        }
    }
    (colors, visible)
}

/// An optimal edge rank coloring.
///
/// The tree is rooted at node 0 and processed bottom-up. For each node the
/// set of colors visible from it (colors whose edge has no larger color on
/// the way up) is kept as small as possible when read as a binary number;
/// a smaller set never rules out a coloring further up, and the largest
/// visible color at the root is the rank.
pub fn erank_opt(u: &UndirectedTree) -> EdgeColoring {
    let n = u.len();
    let mut colors = vec![0u32; u.edge_count()];
    if n <= 1 {
        return EdgeColoring { colors };
    }
    let mut up_edge = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![0usize];
    parent[0] = 0;
    while let Some(v) = stack.pop() {
        order.push(v);
        for &(w, e) in u.neighbors(v) {
            if parent[w] == usize::MAX {
                parent[w] = v;
                up_edge[w] = e;
                stack.push(w);
            }
        }
    }
    let mut visible: Vec<ColorSet> = vec![ColorSet::default(); n];
    for &v in order.iter().rev() {
        let kids: Vec<usize> = u
            .neighbors(v)
            .iter()
            .map(|&(w, _)| w)
            .filter(|&w| w != 0 && parent[w] == v)
            .collect();
        if kids.is_empty() {
            continue;
        }
        let sets = kids.iter().map(|&w| std::mem::take(&mut visible[w])).collect();
        let (picked, vis) = combine(sets);
        for (&w, c) in kids.iter().zip(picked) {
            colors[up_edge[w]] = c;
        }
        visible[v] = vis;
    }
    let coloring = EdgeColoring { colors };
    debug_assert!(validate_coloring(u, &coloring).is_ok());
    coloring
}

/// `erank(U)`, the minimum number of colors.
pub fn erank(u: &UndirectedTree) -> u32 {
    erank_opt(u).rank()
}

/// Whether a valid coloring with colors `1..=k` exists, by exhaustive
/// backtracking. Edges are colored in breadth-first order; a pair of edges
/// is checked as soon as every edge on the path between them has a color.
pub fn erank_bruteforce(u: &UndirectedTree, k: u32) -> Result<bool, RankingError> {
    let m = u.edge_count();
    if m > BRUTEFORCE_EDGE_CAP {
        return Err(RankingError::TooLarge { edges: m, cap: BRUTEFORCE_EDGE_CAP });
    }
    if m == 0 {
        return Ok(true);
    }
    if u.max_degree() as u32 > k {
        return Ok(false);
    }
    // Breadth-first edge order from the highest-degree node.
    let start = (0..u.len()).max_by_key(|&v| (u.degree(v), std::cmp::Reverse(v))).unwrap();
    let mut order = Vec::with_capacity(m);
    let mut seen = vec![false; u.len()];
    let mut queue = std::collections::VecDeque::from([start]);
    seen[start] = true;
    while let Some(v) = queue.pop_front() {
        for &(w, e) in u.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                order.push(e);
                queue.push_back(w);
            }
        }
    }
    let mut pos = vec![0; m];
    for (i, &e) in order.iter().enumerate() {
        pos[e] = i;
    }
    // checks[i]: pairs (f, g, edges strictly between) decidable once the
    // first i + 1 edges of `order` are colored.
    let mut checks: Vec<Vec<(usize, usize, Vec<usize>)>> = vec![Vec::new(); m];
    for f in 0..m {
        for g in f + 1..m {
            let between = edges_between(u, f, g);
            let last = between.iter().chain([&f, &g]).map(|&e| pos[e]).max().unwrap();
            checks[last].push((f, g, between));
        }
    }
    let mut colors = vec![0u32; m];
    Ok(backtrack(0, k, &order, &checks, &mut colors))
}

fn edges_between(u: &UndirectedTree, f: usize, g: usize) -> Vec<usize> {
    let (a, b) = u.edges()[f];
    let (x, y) = u.edges()[g];
    let path = [(a, x), (a, y), (b, x), (b, y)]
        .into_iter()
        .map(|(p, q)| u.path(p, q))
        .max_by_key(|p| p.len())
        .unwrap();
    path.windows(2)
        .map(|w| u.edge_id(w[0], w[1]).expect("consecutive path nodes"))
        .filter(|&e| e != f && e != g)
        .collect()
}

fn backtrack(
    i: usize,
    k: u32,
    order: &[usize],
    checks: &[Vec<(usize, usize, Vec<usize>)>],
    colors: &mut [u32],
) -> bool {
    if i == order.len() {
        return true;
    }
    for c in 1..=k {
        colors[order[i]] = c;
        let ok = checks[i].iter().all(|(f, g, between)| {
            colors[*f] != colors[*g] || between.iter().any(|&e| colors[e] > colors[*f])
        });
        if ok && backtrack(i + 1, k, order, checks, colors) {
            return true;
        }
    }
    colors[order[i]] = 0;
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treecore::{complete_binary_tree, parse_undirected, underlying};

    fn path(n: usize) -> UndirectedTree {
        let names: Vec<String> = (1..=n).map(|i| format!("p{i:02}")).collect();
        let edges = names.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect::<Vec<_>>();
        UndirectedTree::from_named(names, edges).unwrap()
    }

    fn bt3() -> UndirectedTree {
        underlying(&complete_binary_tree(3).unwrap())
    }

    fn sample_coloring(u: &UndirectedTree) -> EdgeColoring {
        EdgeColoring::parse(u, "2 4 2\n2 5 1\n3 6 1\n3 7 2\n1 2 3\n1 3 4\n").unwrap()
    }

    fn sample_matchings(u: &UndirectedTree) -> MatchingSequence {
        MatchingSequence::parse(u, "5-2 6-3\n4-2 7-3\n2-1\n3-1\n").unwrap()
    }

    #[test]
    fn validate_examples() {
        let p3 = path(3);
        assert_eq!(validate_coloring(&p3, &EdgeColoring::new(vec![1, 2])), Ok(2));
        let err = validate_coloring(&p3, &EdgeColoring::new(vec![1, 1])).unwrap_err();
        match err {
            RankingError::Conflict { color, path, .. } => {
                assert_eq!(color, 1);
                assert_eq!(path, ["p01", "p02", "p03"]);
            }
            other => panic!("unexpected {other:?}"),
        }
        let u = bt3();
        assert_eq!(validate_coloring(&u, &sample_coloring(&u)), Ok(4));
        assert!(matches!(
            validate_coloring(&p3, &EdgeColoring::new(vec![0, 1])),
            Err(RankingError::ZeroColor(_))
        ));
    }

    #[test]
    fn optimal_examples() {
        let single = parse_undirected("x\n").unwrap();
        assert_eq!(erank_opt(&single).rank(), 0);
        assert_eq!(erank(&bt3()), 4);
        for n in 1..=10 {
            let expect = (n as f64).log2().ceil() as u32;
            assert_eq!(erank(&path(n)), expect, "path {n}");
        }
    }

    #[test]
    fn optimal_is_valid_and_gapless() {
        for n in 2..=40 {
            let u = path(n);
            let c = erank_opt(&u);
            let rank = validate_coloring(&u, &c).unwrap();
            for color in 1..=rank {
                assert!(c.colors.contains(&color));
            }
        }
    }

    #[test]
    fn star_needs_one_color_per_edge() {
        let star = parse_undirected("c a\nc b\nc d\n").unwrap();
        assert_eq!(erank(&star), 3);
        assert_eq!(erank_bruteforce(&star, 2), Ok(false));
        assert_eq!(erank_bruteforce(&star, 3), Ok(true));
        let big = UndirectedTree::from_named(
            Vec::<String>::new(),
            (0..500).map(|i| ("hub".to_string(), format!("s{i}"))),
        )
        .unwrap();
        assert_eq!(erank(&big), 500);
    }

    #[test]
    fn bruteforce_examples() {
        assert_eq!(erank_bruteforce(&path(2), 1), Ok(true));
        assert_eq!(erank_bruteforce(&bt3(), 3), Ok(false));
        assert_eq!(erank_bruteforce(&bt3(), 4), Ok(true));
        assert!(matches!(erank_bruteforce(&path(16), 5), Err(RankingError::TooLarge { .. })));
    }

    #[test]
    fn contraction_examples() {
        let p2 = path(2);
        let s = contract(&ContractionState::new(2), &p2, &[0]).unwrap();
        assert_eq!(s.classes(), 1);

        let u = bt3();
        let e = |a: &str, b: &str| u.edge_id_named(a, b).unwrap();
        let s = contract(&ContractionState::new(7), &u, &[e("5", "2"), e("6", "3")]).unwrap();
        assert_eq!(s.classes(), 5);
        assert!(matches!(
            contract(&ContractionState::new(7), &u, &[e("4", "2"), e("5", "2")]),
            Err(RankingError::SharedClass { .. })
        ));
        assert!(matches!(
            contract(&s, &u, &[e("5", "2")]),
            Err(RankingError::NotLive { .. })
        ));
    }

    #[test]
    fn matching_examples() {
        let p2 = path(2);
        assert_eq!(validate_matchings(&p2, &MatchingSequence::new(vec![vec![0]])), Ok(1));
        let u = bt3();
        let m = sample_matchings(&u);
        assert_eq!(validate_matchings(&u, &m), Ok(4));
        let short = MatchingSequence::new(m.steps[..3].to_vec());
        assert!(matches!(validate_matchings(&u, &short), Err(RankingError::Unfinished { .. })));
    }

    #[test]
    fn conversions() {
        let p3 = path(3);
        let m = coloring_to_matchings(&p3, &EdgeColoring::new(vec![1, 2])).unwrap();
        assert_eq!(m.steps, vec![vec![0], vec![1]]);

        let u = bt3();
        let mut from_sample = coloring_to_matchings(&u, &sample_coloring(&u)).unwrap();
        let mut expected = sample_matchings(&u);
        for s in from_sample.steps.iter_mut().chain(expected.steps.iter_mut()) {
            s.sort_unstable();
        }
        assert_eq!(from_sample, expected);

        let back = matchings_to_coloring(&u, &sample_matchings(&u)).unwrap();
        assert_eq!(back, sample_coloring(&u));
        assert_eq!(validate_coloring(&u, &back), Ok(4));

        let p2 = path(2);
        let c = matchings_to_coloring(&p2, &MatchingSequence::new(vec![vec![0]])).unwrap();
        assert_eq!(c.colors, [1]);
    }

    #[test]
    fn text_formats_round_trip() {
        let u = bt3();
        let c = sample_coloring(&u);
        assert_eq!(EdgeColoring::parse(&u, &c.to_text(&u)).unwrap(), c);
        let m = sample_matchings(&u);
        let again = MatchingSequence::parse(&u, &m.to_text(&u)).unwrap();
        assert_eq!(validate_matchings(&u, &again), Ok(4));
        let gap = MatchingSequence::new(vec![vec![], vec![0]]);
        let p2 = path(2);
        assert_eq!(MatchingSequence::parse(&p2, &gap.to_text(&p2)).unwrap(), gap);
        assert!(EdgeColoring::parse(&u, "1 2 3\n").is_err());
        assert!(MatchingSequence::parse(&u, "4-5\n").is_err());
    }

    #[test]
    fn hyphenated_names() {
        let u = parse_undirected("a-b c\nc d-e\n").unwrap();
        let m = MatchingSequence::parse(&u, "a-b-c\nc-d-e\n").unwrap();
        assert_eq!(validate_matchings(&u, &m), Ok(2));
    }
}
