//! Explicit pebbling strategies for chains, complete binary trees and
//! bounded-degree trees, built as compact [`Plan`]s and streamed move by
//! move so long sequences never have to be materialized.

use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::cmp::Reverse;
use std::rc::Rc;

use serde::Serialize;
use thiserror::Error;

use crate::pebbling::{Move, MoveSink, PebbleSequence, Replay, ValidationError, Variant};
use crate::strategy::{solve, StrategyNode, StrategyTree};
use crate::treecore::{
    chain, chain_plus_bt, complete_binary_tree, underlying, Carver, GraphError, PieceBounds,
    RootedTree,
};

pub const DEFAULT_DEGREE_CAP: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("tree has degree {degree}, above the cap of {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("generated sequence failed validation: {0}")]
    Invalid(#[from] ValidationError),
}

/// A move program. `Sandwich(x, y)` runs `x`, then `y`, then `x`
/// backwards; `Relocate` runs a complete-binary-tree template under
/// another heap position.
#[derive(Clone, Debug)]
pub enum Plan {
    Place(usize),
    Remove(usize),
    Seq(Vec<Plan>),
    Sandwich(Box<Plan>, Box<Plan>),
    Relocate { base: u64, plan: Rc<Plan> },
}

/// Heap position of `j` when heap position 1 is moved to `base`.
#[inline]
fn relocate(base: u64, j: u64) -> u64 {
    let depth = 63 - j.leading_zeros();
    ((base - 1) << depth) + j
}

impl Plan {
    pub fn sandwich(x: Plan, y: Plan) -> Plan {
        Plan::Sandwich(Box::new(x), Box::new(y))
    }

    /// Number of moves emitted.
    pub fn len(&self) -> u128 {
        match self {
            Plan::Place(_) | Plan::Remove(_) => 1,
            Plan::Seq(xs) => xs.iter().map(Plan::len).sum(),
            Plan::Sandwich(x, y) => 2 * x.len() + y.len(),
            Plan::Relocate { plan, .. } => plan.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn emit<S: MoveSink>(&self, base: u64, forward: bool, labels: Option<&[usize]>, sink: &mut S) {
        match self {
            Plan::Place(v) | Plan::Remove(v) => {
                let place = matches!(self, Plan::Place(_)) == forward;
                let node = match labels {
                    Some(table) => table[relocate(base, *v as u64) as usize],
                    None => *v,
                };
                sink.push(if place { Move::place(node) } else { Move::remove(node) });
            }
            Plan::Seq(xs) => {
                if forward {
                    xs.iter().for_each(|x| x.emit(base, true, labels, sink));
                } else {
                    xs.iter().rev().for_each(|x| x.emit(base, false, labels, sink));
                }
            }
            Plan::Sandwich(x, y) => {
                x.emit(base, true, labels, sink);
                y.emit(base, forward, labels, sink);
                x.emit(base, false, labels, sink);
            }
            Plan::Relocate { base: b, plan } => plan.emit(relocate(base, *b), forward, labels, sink),
        }
    }
}

/// Peak pebbles and configuration count of a generated pebbling, with the
/// moves themselves when requested.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenReport {
    pub family: String,
    pub params: BTreeMap<String, u64>,
    pub space: usize,
    pub time: u64,
    #[serde(skip)]
    pub sequence: Option<PebbleSequence>,
}

/// A generated instance: the tree and a plan for pebbling it.
#[derive(Clone, Debug)]
pub struct Generated {
    pub family: &'static str,
    pub params: BTreeMap<String, u64>,
    pub tree: RootedTree,
    plan: Plan,
    /// Heap position to node index, for plans written in heap positions.
    labels: Option<Vec<usize>>,
}

impl Generated {
    pub fn plan(&self) -> &Plan {
        &self.plan
    }

    pub fn move_count(&self) -> u128 {
        self.plan.len()
    }

    pub fn emit<S: MoveSink>(&self, sink: &mut S) {
        self.plan.emit(1, true, self.labels.as_deref(), sink);
    }

    /// Replays the plan through the validator; the sequence is collected
    /// only if `keep_sequence`.
    pub fn report(&self, keep_sequence: bool) -> Result<GenReport, GenError> {
        let mut replay = Replay::new(&self.tree);
        let sequence = if keep_sequence {
            let mut seq = PebbleSequence::default();
            self.emit(&mut (&mut replay, &mut seq));
            Some(seq)
        } else {
            self.emit(&mut replay);
            None
        };
        let stats = replay.finish(Variant::Persistent)?;
        Ok(GenReport {
            family: self.family.to_string(),
            params: self.params.clone(),
            space: stats.space,
            time: stats.time,
            sequence,
        })
    }
}

fn params<const N: usize>(items: [(&str, u64); N]) -> BTreeMap<String, u64> {
    items.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// Chain position `i` (1 = root) to node index.
fn chain_labels(tree: &RootedTree, n: usize) -> Vec<usize> {
    let mut table = vec![usize::MAX; n + 1];
    for (i, slot) in table.iter_mut().enumerate().skip(1) {
        *slot = tree.index_of(&i.to_string()).expect("chain node");
    }
    table
}

/// Pebbles position `lo` of the chain segment `lo..=hi`, assuming `hi + 1`
/// is already pebbled: first the lower half's top, held while the upper
/// half is pebbled, then the lower half undone.
fn chain_segment(lo: usize, hi: usize) -> Plan {
    if lo == hi {
        return Plan::Place(lo);
    }
    let len = hi - lo + 1;
    let mid = hi + 1 - len.div_ceil(2);
    Plan::sandwich(chain_segment(mid, hi), chain_segment(lo, mid - 1))
}

pub fn chain_plan(n: usize) -> Result<Generated, GenError> {
    if n == 0 {
        return Err(GenError::InvalidParameter("n must be at least 1".into()));
    }
    let tree = chain(n)?;
    let labels = chain_labels(&tree, n);
    Ok(Generated {
        family: "chain",
        params: params([("n", n as u64)]),
        plan: chain_segment(1, n),
        labels: Some(labels),
        tree,
    })
}

/// Midpoint recursion on a chain: `ceil(log2 n) + 1` pebbles.
pub fn chain_pebbling(n: usize) -> Result<GenReport, GenError> {
    chain_plan(n)?.report(true)
}

fn heap_labels(tree: &RootedTree, h: usize) -> Vec<usize> {
    let mut table = vec![usize::MAX; 1 << h];
    for (j, slot) in table.iter_mut().enumerate().skip(1) {
        *slot = tree.index_of(&j.to_string()).expect("heap node");
    }
    table
}

/// Heap position of `right^i(root)`.
fn spine(i: usize) -> u64 {
    (1u64 << (i + 1)) - 1
}

fn strategy_plan(s: &StrategyTree, i: usize, label: &impl Fn(usize) -> u64) -> Plan {
    match s.node(i) {
        StrategyNode::Leaf(v) => Plan::Place(label(v) as usize),
        StrategyNode::Split { left, right, .. } => {
            Plan::sandwich(strategy_plan(s, left, label), strategy_plan(s, right, label))
        }
    }
}

fn ceil_log2(h: usize) -> usize {
    h.next_power_of_two().trailing_zeros() as usize
}

/// Templates in heap positions of `Bt_h`, shared across heights.
struct BtOptimal {
    cache: HashMap<usize, Rc<Plan>>,
}

impl BtOptimal {
    fn template(&mut self, h: usize) -> Rc<Plan> {
        if let Some(p) = self.cache.get(&h) {
            return p.clone();
        }
        let s = h.saturating_sub(ceil_log2(h)).min(h - 1);
        // Residual: spine nodes right^0..right^(s-1) above Bt_(h-s).
        let residual = chain_plus_bt(s, h - s).expect("positive height");
        let solved = solve(&residual);
        let label = |v: usize| -> u64 {
            let x: u64 = residual.name(v).parse().expect("numeric names");
            if x as usize <= s {
                spine(x as usize - 1)
            } else {
                relocate(spine(s), x - s as u64)
            }
        };
        let residual_plan = strategy_plan(&solved.strategy, solved.strategy.root(), &label);
        let plan = if s == 0 {
            residual_plan
        } else {
            let lefts = (0..s)
                .map(|i| Plan::Relocate { base: 2 * spine(i), plan: self.template(h - 1 - i) })
                .collect();
            Plan::sandwich(Plan::Seq(lefts), residual_plan)
        };
        let plan = Rc::new(plan);
        self.cache.insert(h, plan.clone());
        plan
    }
}

fn check_height(h: usize) -> Result<(), GenError> {
    if h == 0 || h > 40 {
        return Err(GenError::InvalidParameter(format!("height {h} outside 1..=40")));
    }
    Ok(())
}

/// Spine strategy for `Bt_h`: pebble the left subtrees hanging off the
/// rightmost path (recursively), pebble the remaining chain-plus-small-tree
/// optimally, then undo the left subtrees.
pub fn bt_optimal_plan(h: usize) -> Result<Generated, GenError> {
    check_height(h)?;
    let tree = complete_binary_tree(h)?;
    let plan = BtOptimal { cache: HashMap::new() }.template(h);
    Ok(Generated {
        family: "bt",
        params: params([("h", h as u64)]),
        plan: Plan::Relocate { base: 1, plan },
        labels: Some(heap_labels(&tree, h)),
        tree,
    })
}

pub fn bt_optimal_pebbling(h: usize) -> Result<GenReport, GenError> {
    bt_optimal_plan(h)?.report(true)
}

fn bt_epsilon_template(h: usize, k: usize, cache: &mut HashMap<usize, Rc<Plan>>, base: &mut BtOptimal) -> Rc<Plan> {
    if let Some(p) = cache.get(&h) {
        return p.clone();
    }
    // Too short for a k-step spine: use the optimal strategy instead.
    if h <= k {
        return base.template(h);
    }
    let plan = {
        let mut step1: Vec<Plan> = (0..k)
            .map(|i| Plan::Relocate { base: 2 * spine(i), plan: bt_epsilon_template(h - 1 - i, k, cache, base) })
            .collect();
        step1.push(Plan::Relocate { base: spine(k), plan: bt_epsilon_template(h - k, k, cache, base) });
        let mut step2: Vec<Plan> = (0..k).rev().map(|i| Plan::Place(spine(i) as usize)).collect();
        step2.extend((1..k).map(|i| Plan::Remove(spine(i) as usize)));
        Plan::sandwich(Plan::Seq(step1), Plan::Seq(step2))
    };
    let plan = Rc::new(plan);
    cache.insert(h, plan.clone());
    plan
}

/// `k`-step spine strategy for `Bt_h`: pebble the `k + 1` subtrees that
/// hang off the first `k` spine nodes, climb the spine to the root in
/// `2k - 1` moves, then undo the subtrees.
pub fn bt_epsilon_plan(h: usize, k: usize) -> Result<Generated, GenError> {
    check_height(h)?;
    if k == 0 {
        return Err(GenError::InvalidParameter("k must be at least 1".into()));
    }
    let tree = complete_binary_tree(h)?;
    let plan = bt_epsilon_template(h, k, &mut HashMap::new(), &mut BtOptimal { cache: HashMap::new() });
    Ok(Generated {
        family: "bt-eps",
        params: params([("h", h as u64), ("k", k as u64)]),
        plan: Plan::Relocate { base: 1, plan },
        labels: Some(heap_labels(&tree, h)),
        tree,
    })
}

pub fn bt_epsilon_pebbling(h: usize, k: usize) -> Result<GenReport, GenError> {
    bt_epsilon_plan(h, k)?.report(true)
}

/// Pebble every node children-first, then remove all but the root.
fn bottom_up(depth: &[usize], nodes: &[usize]) -> Plan {
    let mut order = nodes.to_vec();
    order.sort_by_key(|&v| (Reverse(depth[v]), v));
    let root = order.pop().expect("non-empty piece");
    if order.is_empty() {
        return Plan::Place(root);
    }
    Plan::sandwich(Plan::Seq(order.into_iter().map(Plan::Place).collect()), Plan::Place(root))
}

fn depths(tree: &RootedTree) -> Vec<usize> {
    let mut depth = vec![0; tree.len()];
    let mut stack = vec![tree.root()];
    while let Some(v) = stack.pop() {
        for &c in tree.children(v) {
            depth[c] = depth[v] + 1;
            stack.push(c);
        }
    }
    depth
}

pub fn bottom_up_plan(tree: &RootedTree) -> Generated {
    let depth = depths(tree);
    let all: Vec<usize> = (0..tree.len()).collect();
    Generated {
        family: "bottom-up",
        params: params([("n", tree.len() as u64)]),
        plan: bottom_up(&depth, &all),
        labels: None,
        tree: tree.clone(),
    }
}

/// Full pebbling in `2n - 1` moves with `n` pebbles.
pub fn bottom_up_pebbling(tree: &RootedTree) -> Result<GenReport, GenError> {
    bottom_up_plan(tree).report(true)
}

struct SeparatorCtx<'a> {
    tree: &'a RootedTree,
    depth: Vec<usize>,
    carver: Carver<'a>,
    owner: Vec<usize>,
}

impl SeparatorCtx<'_> {
    /// Pebbles the top node of the connected piece `nodes`, assuming every
    /// node feeding into the piece from below is already pebbled.
    fn piece(&mut self, nodes: Vec<usize>, k: u32) -> Plan {
        if k <= 1 || nodes.len() == 1 {
            return bottom_up(&self.depth, &nodes);
        }
        let hi = PieceBounds::new(nodes.len(), k).hi.max(1);
        let mut pieces = self.carver.partition(&nodes, hi);
        if pieces.len() == 1 {
            return self.piece(pieces.pop().unwrap(), k - 1);
        }
        let tops: Vec<usize> = pieces
            .iter()
            .map(|p| *p.iter().min_by_key(|&&v| (self.depth[v], v)).unwrap())
            .collect();
        for (q, p) in pieces.iter().enumerate() {
            for &v in p {
                self.owner[v] = q;
            }
        }
        let top = *nodes.iter().min_by_key(|&&v| (self.depth[v], v)).unwrap();
        // Pieces form a tree; take the lowermost ones first.
        let mut waiting = vec![0usize; pieces.len()];
        let mut above = vec![usize::MAX; pieces.len()];
        for (q, &t) in tops.iter().enumerate() {
            if t != top {
                let up = self.owner[self.tree.parent(t).expect("inner piece top has a parent")];
                above[q] = up;
                waiting[up] += 1;
            }
        }
        let mut ready: BinaryHeap<Reverse<(usize, usize)>> = (0..pieces.len())
            .filter(|&q| waiting[q] == 0)
            .map(|q| Reverse((tops[q], q)))
            .collect();
        let mut order = Vec::with_capacity(pieces.len());
        while let Some(Reverse((_, q))) = ready.pop() {
            order.push(q);
            if above[q] != usize::MAX {
                waiting[above[q]] -= 1;
                if waiting[above[q]] == 0 {
                    ready.push(Reverse((tops[above[q]], above[q])));
                }
            }
        }
        let last = order.pop().expect("several pieces");
        debug_assert_eq!(tops[last], top);
        let mut taken: Vec<Option<Vec<usize>>> = pieces.into_iter().map(Some).collect();
        let earlier: Vec<Plan> = order
            .into_iter()
            .map(|q| self.piece(taken[q].take().unwrap(), k - 1))
            .collect();
        let final_piece = self.piece(taken[last].take().unwrap(), k - 1);
        Plan::sandwich(Plan::Seq(earlier), final_piece)
    }
}

/// Recursive separator strategy: split the tree into connected pieces of
/// about `n^((k-1)/k)` nodes, pebble the pieces lowermost first at level
/// `k - 1` keeping each piece's top pebbled, then undo. Uses
/// `O(k n^(1/k))` pebbles and `O(2^k n)` moves on bounded-degree trees.
pub fn separator_plan(tree: &RootedTree, k: u32, degree_cap: usize) -> Result<Generated, GenError> {
    if k == 0 {
        return Err(GenError::InvalidParameter("k must be at least 1".into()));
    }
    let degree = tree.max_degree();
    if degree > degree_cap {
        return Err(GenError::DegreeCap { degree, cap: degree_cap });
    }
    let u = underlying(tree);
    let adj: Vec<Vec<usize>> = (0..u.len()).map(|v| u.neighbors(v).iter().map(|&(w, _)| w).collect()).collect();
    let plan = {
        let mut ctx = SeparatorCtx {
            tree,
            depth: depths(tree),
            carver: Carver::new(&adj),
            owner: vec![0; tree.len()],
        };
        ctx.piece((0..tree.len()).collect(), k)
    };
    Ok(Generated {
        family: "separator",
        params: params([("n", tree.len() as u64), ("k", k as u64)]),
        plan,
        labels: None,
        tree: tree.clone(),
    })
}

pub fn separator_pebbling(tree: &RootedTree, k: u32) -> Result<GenReport, GenError> {
    separator_plan(tree, k, DEFAULT_DEGREE_CAP)?.report(true)
}
