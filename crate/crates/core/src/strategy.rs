//! Strategy trees: recursive certificates that split a rooted tree at an
//! edge `u -> v` into the subtree `T_u` (left) and the rest (right).
//!
//! A strategy of depth `d` compiles into a persistent pebbling that never
//! holds more than `d` pebbles, and an optimal strategy comes out of an
//! optimal edge rank coloring of the underlying undirected tree.

use thiserror::Error;

use crate::pebbling::{Move, MoveCounter, MoveSink, PebbleSequence};
use crate::ranking::{
    coloring_to_matchings, erank_opt, validate_matchings, EdgeColoring, MatchingSequence,
    RankingError,
};
use crate::text::FormatError;
use crate::treecore::{underlying, RootedTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StrategyNode {
    Leaf(usize),
    /// Cut the edge `child -> parent`; `left` and `right` index the arena.
    Split {
        child: usize,
        parent: usize,
        left: usize,
        right: usize,
    },
}

/// A strategy tree stored as an arena; node indices in the labels refer
/// to the [`RootedTree`] it was built for.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StrategyTree {
    nodes: Vec<StrategyNode>,
    root: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrategyError {
    #[error("strategy node {0} does not exist")]
    BadIndex(usize),
    #[error("tree node index {0} is out of range")]
    UnknownNode(usize),
    #[error("{child} -> {parent} is not an edge of the current piece")]
    NotAnEdge { child: String, parent: String },
    #[error("leaf {leaf} does not match the piece {{{}}}", .piece.join(", "))]
    LeafMismatch { leaf: String, piece: Vec<String> },
    #[error("step {step} contracts several edges of one piece last")]
    LastStepNotSingle { step: usize },
    #[error(transparent)]
    Ranking(#[from] RankingError),
}

impl StrategyTree {
    pub fn leaf(v: usize) -> StrategyTree {
        StrategyTree { nodes: vec![StrategyNode::Leaf(v)], root: 0 }
    }

    /// Joins two strategies under a split of `child -> parent`.
    pub fn split(child: usize, parent: usize, left: StrategyTree, right: StrategyTree) -> StrategyTree {
        let mut nodes = Vec::with_capacity(left.nodes.len() + right.nodes.len() + 1);
        let shift = |n: StrategyNode, by: usize| match n {
            StrategyNode::Leaf(v) => StrategyNode::Leaf(v),
            StrategyNode::Split { child, parent, left, right } => {
                StrategyNode::Split { child, parent, left: left + by, right: right + by }
            }
        };
        nodes.extend(left.nodes.iter().map(|&n| shift(n, 0)));
        let right_base = nodes.len();
        nodes.extend(right.nodes.iter().map(|&n| shift(n, right_base)));
        nodes.push(StrategyNode::Split {
            child,
            parent,
            left: left.root,
            right: right.root + right_base,
        });
        let root = nodes.len() - 1;
        StrategyTree { nodes, root }
    }

    pub fn from_arena(nodes: Vec<StrategyNode>, root: usize) -> Result<StrategyTree, StrategyError> {
        if root >= nodes.len() {
            return Err(StrategyError::BadIndex(root));
        }
        for n in &nodes {
            if let StrategyNode::Split { left, right, .. } = *n {
                for i in [left, right] {
                    if i >= nodes.len() {
                        return Err(StrategyError::BadIndex(i));
                    }
                }
            }
        }
        Ok(StrategyTree { nodes, root })
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn node(&self, i: usize) -> StrategyNode {
        self.nodes[i]
    }

    pub fn nodes(&self) -> &[StrategyNode] {
        &self.nodes
    }

    /// Number of nodes on the longest root-to-leaf path (a leaf alone is 1).
    pub fn depth(&self) -> usize {
        let mut best = 0;
        let mut stack = vec![(self.root, 1)];
        while let Some((i, d)) = stack.pop() {
            match self.nodes[i] {
                StrategyNode::Leaf(_) => best = best.max(d),
                StrategyNode::Split { left, right, .. } => {
                    stack.push((left, d + 1));
                    stack.push((right, d + 1));
                }
            }
        }
        best
    }

    /// Moves produced by [`compile`]: `t(leaf) = 1`,
    /// `t(split) = 2 t(left) + t(right)`.
    pub fn move_count(&self) -> u128 {
        self.post_order()
            .into_iter()
            .fold(vec![0u128; self.nodes.len()], |mut t, i| {
                t[i] = match self.nodes[i] {
                    StrategyNode::Leaf(_) => 1,
                    StrategyNode::Split { left, right, .. } => {
                        t[left].saturating_mul(2).saturating_add(t[right])
                    }
                };
                t
            })[self.root]
    }

    fn post_order(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![(self.root, false)];
        while let Some((i, expanded)) = stack.pop() {
            match self.nodes[i] {
                StrategyNode::Split { left, right, .. } if !expanded => {
                    stack.push((i, true));
                    stack.push((right, false));
                    stack.push((left, false));
                }
                _ => out.push(i),
            }
        }
        out
    }

    /// Nested form: `(u>v LEFT RIGHT)` for a split, a bare node token for
    /// a leaf.
    pub fn to_text(&self, tree: &RootedTree) -> String {
        enum Item {
            Node(usize),
            Text(&'static str),
        }
        let mut out = String::new();
        let mut stack = vec![Item::Node(self.root)];
        while let Some(item) = stack.pop() {
            match item {
                Item::Text(s) => out.push_str(s),
                Item::Node(i) => match self.nodes[i] {
                    StrategyNode::Leaf(v) => out.push_str(tree.name(v)),
                    StrategyNode::Split { child, parent, left, right } => {
                        out.push('(');
                        out.push_str(tree.name(child));
                        out.push('>');
                        out.push_str(tree.name(parent));
                        stack.push(Item::Text(")"));
                        stack.push(Item::Node(right));
                        stack.push(Item::Text(" "));
                        stack.push(Item::Node(left));
                        stack.push(Item::Text(" "));
                    }
                },
            }
        }
        out
    }

    /// Parses the nested form. Parentheses and whitespace delimit tokens,
    /// so node names containing them cannot be written this way.
    pub fn parse(tree: &RootedTree, text: &str) -> Result<StrategyTree, FormatError> {
        let mut tokens = Vec::new();
        for (line_no, line) in text.lines().enumerate() {
            let line_no = line_no + 1;
            if line.trim_start().starts_with('#') {
                continue;
            }
            let mut word = String::new();
            for ch in line.chars().chain(std::iter::once(' ')) {
                if ch == '(' || ch == ')' || ch.is_whitespace() {
                    if !word.is_empty() {
                        tokens.push((line_no, std::mem::take(&mut word)));
                    }
                    if !ch.is_whitespace() {
                        tokens.push((line_no, ch.to_string()));
                    }
                } else {
                    word.push(ch);
                }
            }
        }
        // Frames: arena slot of an open split and how many children it has.
        let mut nodes: Vec<StrategyNode> = Vec::new();
        let mut open: Vec<(usize, Vec<usize>)> = Vec::new();
        let mut root = None;
        let mut iter = tokens.into_iter().peekable();
        let mut last_line = 0;
        while let Some((line, tok)) = iter.next() {
            last_line = line;
            let finished = match tok.as_str() {
                "(" => {
                    let (_, label) = iter
                        .next()
                        .ok_or_else(|| FormatError::new(line, "expected `u>v` after `(`"))?;
                    let (child, parent) = crate::text::split_pair(&label, '>', |a, b| {
                        let (c, p) = (tree.index_of(a)?, tree.index_of(b)?);
                        (tree.parent(c) == Some(p)).then_some((c, p))
                    })
                    .map_err(|msg| FormatError::new(line, msg))?;
                    nodes.push(StrategyNode::Split { child, parent, left: 0, right: 0 });
                    open.push((nodes.len() - 1, Vec::new()));
                    None
                }
                ")" => {
                    let (slot, kids) = open
                        .pop()
                        .ok_or_else(|| FormatError::new(line, "unbalanced `)`"))?;
                    let [l, r] = kids[..] else {
                        return Err(FormatError::new(line, "a split needs exactly two parts"));
                    };
                    if let StrategyNode::Split { left, right, .. } = &mut nodes[slot] {
                        *left = l;
                        *right = r;
                    }
                    Some(slot)
                }
                name => {
                    let v = tree
                        .index_of(name)
                        .ok_or_else(|| FormatError::new(line, format!("unknown node {name:?}")))?;
                    nodes.push(StrategyNode::Leaf(v));
                    Some(nodes.len() - 1)
                }
            };
            if let Some(done) = finished {
                match open.last_mut() {
                    Some((_, kids)) => kids.push(done),
                    None if root.is_none() => root = Some(done),
                    None => return Err(FormatError::new(line, "text after the strategy")),
                }
            }
        }
        if !open.is_empty() {
            return Err(FormatError::new(last_line, "unclosed `(`"));
        }
        let root = root.ok_or_else(|| FormatError::new(0, "empty strategy"))?;
        Ok(StrategyTree { nodes, root })
    }
}

/// Checks that `s` splits `tree` consistently and returns its depth.
pub fn validate_strategy(tree: &RootedTree, s: &StrategyTree) -> Result<usize, StrategyError> {
    let n = tree.len();
    let mut next_tag = 1;
    let mut tag = vec![next_tag; n];
    // Work items: (strategy node, piece tag, piece nodes).
    let mut work = vec![(s.root, next_tag, (0..n).collect::<Vec<_>>())];
    while let Some((i, piece_tag, piece)) = work.pop() {
        match *s.nodes.get(i).ok_or(StrategyError::BadIndex(i))? {
            StrategyNode::Leaf(v) => {
                if v >= n {
                    return Err(StrategyError::UnknownNode(v));
                }
                if piece != [v] {
                    return Err(StrategyError::LeafMismatch {
                        leaf: tree.name(v).to_string(),
                        piece: piece.iter().map(|&x| tree.name(x).to_string()).collect(),
                    });
                }
            }
            StrategyNode::Split { child, parent, left, right } => {
                if child >= n || parent >= n {
                    return Err(StrategyError::UnknownNode(child.max(parent)));
                }
                if tree.parent(child) != Some(parent)
                    || tag[child] != piece_tag
                    || tag[parent] != piece_tag
                {
                    return Err(StrategyError::NotAnEdge {
                        child: tree.name(child).to_string(),
                        parent: tree.name(parent).to_string(),
                    });
                }
                next_tag += 1;
                let lower_tag = next_tag;
                let mut lower = vec![child];
                tag[child] = lower_tag;
                let mut k = 0;
                while k < lower.len() {
                    for &c in tree.children(lower[k]) {
                        if tag[c] == piece_tag {
                            tag[c] = lower_tag;
                            lower.push(c);
                        }
                    }
                    k += 1;
                }
                next_tag += 1;
                let upper_tag = next_tag;
                let upper: Vec<usize> = piece.into_iter().filter(|&x| tag[x] == piece_tag).collect();
                for &x in &upper {
                    tag[x] = upper_tag;
                }
                lower.sort_unstable();
                work.push((right, upper_tag, upper));
                work.push((left, lower_tag, lower));
            }
        }
    }
    Ok(s.depth())
}

/// Edges of level-`i` splits form matching `i`, where a leaf has level 0
/// and a split sits one above its higher child.
pub fn strategy_to_matchings(tree: &RootedTree, s: &StrategyTree) -> Result<MatchingSequence, StrategyError> {
    let depth = validate_strategy(tree, s)?;
    let u = underlying(tree);
    let mut level = vec![0usize; s.nodes.len()];
    let mut steps = vec![Vec::new(); depth - 1];
    for i in s.post_order() {
        if let StrategyNode::Split { child, parent, left, right } = s.nodes[i] {
            level[i] = 1 + level[left].max(level[right]);
            let e = u.edge_id(child, parent).expect("validated edge");
            steps[level[i] - 1].push(e);
        }
    }
    Ok(MatchingSequence { steps })
}

/// Rebuilds a strategy from a contraction sequence: the edge contracted
/// last within a piece becomes that piece's split.
pub fn matchings_to_strategy(tree: &RootedTree, seq: &MatchingSequence) -> Result<StrategyTree, StrategyError> {
    let u = underlying(tree);
    validate_matchings(&u, seq)?;
    let n = tree.len();
    let mut step_of = vec![0usize; u.edge_count()];
    for (i, step) in seq.steps.iter().enumerate() {
        for &e in step {
            step_of[e] = i + 1;
        }
    }
    let mut stamp = 1;
    let mut in_piece = vec![stamp; n];
    let mut nodes = vec![StrategyNode::Leaf(0)];
    let mut work = vec![(0usize, stamp, (0..n).collect::<Vec<_>>())];
    while let Some((slot, piece_tag, piece)) = work.pop() {
        if piece.len() == 1 {
            nodes[slot] = StrategyNode::Leaf(piece[0]);
            continue;
        }
        let mut last: Option<(usize, usize)> = None;
        let mut tied = false;
        for &c in &piece {
            let Some(p) = tree.parent(c) else { continue };
            if in_piece[p] != piece_tag {
                continue;
            }
            let st = step_of[u.edge_id(c, p).expect("tree edge")];
            match last {
                Some((best, _)) if st < best => {}
                Some((best, _)) if st == best => tied = true,
                _ => {
                    last = Some((st, c));
                    tied = false;
                }
            }
        }
        let (step, child) = last.expect("a piece with two nodes has an edge");
        if tied {
            return Err(StrategyError::LastStepNotSingle { step });
        }
        let parent = tree.parent(child).expect("non-root");
        stamp += 1;
        let lower_tag = stamp;
        let mut lower = vec![child];
        in_piece[child] = lower_tag;
        let mut k = 0;
        while k < lower.len() {
            for &c in tree.children(lower[k]) {
                if in_piece[c] == piece_tag {
                    in_piece[c] = lower_tag;
                    lower.push(c);
                }
            }
            k += 1;
        }
        stamp += 1;
        let upper_tag = stamp;
        let upper: Vec<usize> = piece.into_iter().filter(|&x| in_piece[x] == piece_tag).collect();
        for &x in &upper {
            in_piece[x] = upper_tag;
        }
        let (left, right) = (nodes.len(), nodes.len() + 1);
        nodes.push(StrategyNode::Leaf(0));
        nodes.push(StrategyNode::Leaf(0));
        nodes[slot] = StrategyNode::Split { child, parent, left, right };
        work.push((right, upper_tag, upper));
        work.push((left, lower_tag, lower));
    }
    Ok(StrategyTree { nodes, root: 0 })
}

fn emit<S: MoveSink>(s: &StrategyTree, i: usize, forward: bool, sink: &mut S) -> u64 {
    match s.nodes[i] {
        StrategyNode::Leaf(v) => {
            sink.push(if forward { Move::place(v) } else { Move::remove(v) });
            1
        }
        // forward = L, R, rev L; its reverse = L, rev R, rev L.
        StrategyNode::Split { left, right, .. } => {
            let a = emit(s, left, true, sink);
            let b = emit(s, right, forward, sink);
            let a2 = emit(s, left, false, sink);
            debug_assert_eq!(a, a2);
            2 * a + b
        }
    }
}

/// Streams the compiled pebbling of `tree` into `sink` and returns the
/// number of moves. Pebbling the cut child first and holding it lets the
/// remainder treat it as already available.
pub fn compile_into<S: MoveSink>(tree: &RootedTree, s: &StrategyTree, sink: &mut S) -> Result<u64, StrategyError> {
    validate_strategy(tree, s)?;
    let moves = emit(s, s.root, true, sink);
    assert_eq!(moves as u128, s.move_count(), "move count recurrence");
    Ok(moves)
}

pub fn compile(tree: &RootedTree, s: &StrategyTree) -> Result<PebbleSequence, StrategyError> {
    let mut seq = PebbleSequence::default();
    compile_into(tree, s, &mut seq)?;
    Ok(seq)
}

/// Optimal reversible pebbling number with its certificates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub rev: usize,
    pub strategy: StrategyTree,
    pub coloring: EdgeColoring,
}

impl SolveResult {
    /// The executable pebbling, compiled from the strategy on demand.
    pub fn sequence(&self, tree: &RootedTree) -> PebbleSequence {
        compile(tree, &self.strategy).expect("solver strategies are valid")
    }

    pub fn stream_sequence<S: MoveSink>(&self, tree: &RootedTree, sink: &mut S) -> u64 {
        compile_into(tree, &self.strategy, sink).expect("solver strategies are valid")
    }

    pub fn move_count(&self) -> u128 {
        self.strategy.move_count()
    }
}

/// `rev(T) = erank(U) + 1`: optimal coloring, then contraction rounds,
/// then the strategy tree those rounds describe.
pub fn solve(tree: &RootedTree) -> SolveResult {
    let u = underlying(tree);
    let coloring = erank_opt(&u);
    let matchings = coloring_to_matchings(&u, &coloring).expect("optimal coloring is valid");
    let strategy = matchings_to_strategy(tree, &matchings).expect("coloring rounds are valid");
    let rev = coloring.rank() as usize + 1;
    debug_assert_eq!(strategy.depth(), rev);
    SolveResult { rev, strategy, coloring }
}

/// Counts the moves of the compiled pebbling without storing them.
pub fn count_moves(tree: &RootedTree, s: &StrategyTree) -> Result<u64, StrategyError> {
    let mut c = MoveCounter::default();
    compile_into(tree, s, &mut c)
}
