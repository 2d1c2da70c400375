//! Reversible pebble game semantics.
//!
//! Both placing and removing a pebble on `v` require every in-neighbour of
//! `v` to carry a pebble. A persistent pebbling goes from the empty
//! configuration to `{root}`; a visiting pebbling goes from empty back to
//! empty and must pebble the root at some point.

use std::fmt;
use std::io::Write;

use serde::Serialize;
use thiserror::Error;

use crate::text::{content_lines, FormatError};
use crate::treecore::{reroot_at_leaf, subtree, Dag, GraphError, RootedTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MoveKind {
    Place,
    Remove,
}

impl MoveKind {
    pub fn flipped(self) -> MoveKind {
        match self {
            MoveKind::Place => MoveKind::Remove,
            MoveKind::Remove => MoveKind::Place,
        }
    }
}

/// One step of the game; `node` is an index into the graph being pebbled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Move {
    pub kind: MoveKind,
    pub node: usize,
}

impl Move {
    pub fn place(node: usize) -> Move {
        Move { kind: MoveKind::Place, node }
    }

    pub fn remove(node: usize) -> Move {
        Move { kind: MoveKind::Remove, node }
    }

    pub fn flipped(self) -> Move {
        Move { kind: self.kind.flipped(), node: self.node }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PebbleSequence {
    pub moves: Vec<Move>,
}

impl PebbleSequence {
    pub fn new(moves: Vec<Move>) -> PebbleSequence {
        PebbleSequence { moves }
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Move> {
        self.moves.iter()
    }

    /// Move-log text: `+node` for a placement, `-node` for a removal.
    pub fn to_text(&self, graph: &Dag) -> String {
        let mut out = String::with_capacity(self.moves.len() * 4);
        for mv in &self.moves {
            out.push(if mv.kind == MoveKind::Place { '+' } else { '-' });
            out.push_str(graph.name(mv.node));
            out.push('\n');
        }
        out
    }

    pub fn parse(graph: &Dag, text: &str) -> Result<PebbleSequence, FormatError> {
        let mut moves = Vec::new();
        for (line, content) in content_lines(text) {
            let mut chars = content.chars();
            let kind = match chars.next() {
                Some('+') => MoveKind::Place,
                Some('-') => MoveKind::Remove,
                _ => return Err(FormatError::new(line, "moves start with '+' or '-'")),
            };
            let name = chars.as_str();
            let node = graph
                .index_of(name)
                .ok_or_else(|| FormatError::new(line, format!("unknown node {name:?}")))?;
            moves.push(Move { kind, node });
        }
        Ok(PebbleSequence { moves })
    }
}

impl FromIterator<Move> for PebbleSequence {
    fn from_iter<I: IntoIterator<Item = Move>>(iter: I) -> Self {
        PebbleSequence { moves: iter.into_iter().collect() }
    }
}

/// Receives moves one at a time, so long sequences never need to be held
/// in memory.
pub trait MoveSink {
    fn push(&mut self, mv: Move);
}

impl MoveSink for Vec<Move> {
    fn push(&mut self, mv: Move) {
        Vec::push(self, mv);
    }
}

impl MoveSink for PebbleSequence {
    fn push(&mut self, mv: Move) {
        self.moves.push(mv);
    }
}

impl<A: MoveSink, B: MoveSink> MoveSink for (A, B) {
    fn push(&mut self, mv: Move) {
        self.0.push(mv);
        self.1.push(mv);
    }
}

impl<S: MoveSink + ?Sized> MoveSink for &mut S {
    fn push(&mut self, mv: Move) {
        (**self).push(mv);
    }
}

/// Counts moves and nothing else.
#[derive(Debug, Default, Clone, Copy)]
pub struct MoveCounter(pub u64);

impl MoveSink for MoveCounter {
    fn push(&mut self, _mv: Move) {
        self.0 += 1;
    }
}

/// Streams moves in the move-log format; the first I/O error is kept.
pub struct MoveLogWriter<'g, W: Write> {
    graph: &'g Dag,
    out: W,
    error: Option<std::io::Error>,
}

impl<'g, W: Write> MoveLogWriter<'g, W> {
    pub fn new(graph: &'g Dag, out: W) -> Self {
        MoveLogWriter { graph, out, error: None }
    }

    pub fn finish(mut self) -> std::io::Result<W> {
        if let Some(e) = self.error {
            return Err(e);
        }
        self.out.flush()?;
        Ok(self.out)
    }
}

impl<W: Write> MoveSink for MoveLogWriter<'_, W> {
    fn push(&mut self, mv: Move) {
        if self.error.is_some() {
            return;
        }
        let sign = if mv.kind == MoveKind::Place { '+' } else { '-' };
        if let Err(e) = writeln!(self.out, "{sign}{}", self.graph.name(mv.node)) {
            self.error = Some(e);
        }
    }
}

/// A set of pebbled nodes.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PebbleConfig {
    bits: Vec<u64>,
    count: usize,
}

impl PebbleConfig {
    pub fn empty(n: usize) -> PebbleConfig {
        PebbleConfig { bits: vec![0; n.div_ceil(64)], count: 0 }
    }

    pub fn from_nodes(n: usize, nodes: impl IntoIterator<Item = usize>) -> PebbleConfig {
        let mut c = PebbleConfig::empty(n);
        for v in nodes {
            if !c.contains(v) {
                c.toggle(v);
            }
        }
        c
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.bits[v >> 6] >> (v & 63) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(w, &word)| {
            (0..64).filter(move |b| word >> b & 1 == 1).map(move |b| w * 64 + b)
        })
    }

    #[inline]
    fn toggle(&mut self, v: usize) {
        let mask = 1u64 << (v & 63);
        let word = &mut self.bits[v >> 6];
        if *word & mask == 0 {
            self.count += 1;
        } else {
            self.count -= 1;
        }
        *word ^= mask;
    }

    fn names(&self, graph: &Dag) -> Vec<String> {
        self.iter().map(|v| graph.name(v).to_string()).collect()
    }
}

impl fmt::Debug for PebbleConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error("node {0} is already pebbled")]
    AlreadyPebbled(String),
    #[error("node {0} is not pebbled")]
    NotPebbled(String),
    #[error("in-neighbour {pred} of {node} is not pebbled")]
    MissingInNeighbor { node: String, pred: String },
    #[error("node index {0} is out of range")]
    OutOfRange(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValidationError {
    #[error("move {index}: {source}")]
    IllegalMove { index: u64, source: MoveError },
    #[error("final configuration {found:?} is not exactly {{{root}}}")]
    WrongFinal { root: String, found: Vec<String> },
    #[error("final configuration {found:?} is not empty")]
    NotEmptyAtEnd { found: Vec<String> },
    #[error("root was never pebbled")]
    RootNeverVisited,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Persistent,
    Visiting,
}

impl std::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "persistent" => Ok(Variant::Persistent),
            "visiting" => Ok(Variant::Visiting),
            other => Err(format!("unknown variant {other:?}")),
        }
    }
}

/// Peak pebble count and number of configurations (`moves + 1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PebbleStats {
    pub space: usize,
    pub time: u64,
}

fn check_move(graph: &Dag, config: &PebbleConfig, mv: Move) -> Result<(), MoveError> {
    if mv.node >= graph.len() {
        return Err(MoveError::OutOfRange(mv.node));
    }
    let pebbled = config.contains(mv.node);
    match mv.kind {
        MoveKind::Place if pebbled => {
            return Err(MoveError::AlreadyPebbled(graph.name(mv.node).to_string()))
        }
        MoveKind::Remove if !pebbled => {
            return Err(MoveError::NotPebbled(graph.name(mv.node).to_string()))
        }
        _ => {}
    }
    if let Some(&p) = graph.preds(mv.node).iter().find(|&&p| !config.contains(p)) {
        return Err(MoveError::MissingInNeighbor {
            node: graph.name(mv.node).to_string(),
            pred: graph.name(p).to_string(),
        });
    }
    Ok(())
}

/// Applies one move, rejecting no-op moves and moves whose in-neighbours
/// are not all pebbled.
pub fn apply_move(graph: &Dag, config: &PebbleConfig, mv: Move) -> Result<PebbleConfig, MoveError> {
    check_move(graph, config, mv)?;
    let mut next = config.clone();
    next.toggle(mv.node);
    Ok(next)
}

/// Incremental validator; also usable as a [`MoveSink`]. After the first
/// illegal move further moves are ignored.
pub struct Replay<'g> {
    graph: &'g Dag,
    config: PebbleConfig,
    moves: u64,
    space: usize,
    root_seen: bool,
    error: Option<ValidationError>,
}

impl<'g> Replay<'g> {
    pub fn new(graph: &'g Dag) -> Replay<'g> {
        Replay::from_config(graph, PebbleConfig::empty(graph.len()))
    }

    pub fn from_config(graph: &'g Dag, config: PebbleConfig) -> Replay<'g> {
        let space = config.len();
        let root_seen = config.contains(graph.root());
        Replay { graph, config, moves: 0, space, root_seen, error: None }
    }

    pub fn config(&self) -> &PebbleConfig {
        &self.config
    }

    pub fn space(&self) -> usize {
        self.space
    }

    pub fn moves(&self) -> u64 {
        self.moves
    }

    pub fn error(&self) -> Option<&ValidationError> {
        self.error.as_ref()
    }

    pub fn stats(&self) -> PebbleStats {
        PebbleStats { space: self.space, time: self.moves + 1 }
    }

    /// Stops at the first error, reported with its 0-based move index.
    pub fn finish(self, variant: Variant) -> Result<PebbleStats, ValidationError> {
        if let Some(e) = self.error {
            return Err(e);
        }
        let root = self.graph.root();
        match variant {
            Variant::Persistent => {
                if self.config.len() != 1 || !self.config.contains(root) {
                    return Err(ValidationError::WrongFinal {
                        root: self.graph.name(root).to_string(),
                        found: self.config.names(self.graph),
                    });
                }
            }
            Variant::Visiting => {
                if !self.config.is_empty() {
                    return Err(ValidationError::NotEmptyAtEnd {
                        found: self.config.names(self.graph),
                    });
                }
                if !self.root_seen {
                    return Err(ValidationError::RootNeverVisited);
                }
            }
        }
        Ok(self.stats())
    }
}

impl MoveSink for Replay<'_> {
    #[inline]
    fn push(&mut self, mv: Move) {
        if self.error.is_some() {
            return;
        }
        if let Err(source) = check_move(self.graph, &self.config, mv) {
            self.error = Some(ValidationError::IllegalMove { index: self.moves, source });
            return;
        }
        self.config.toggle(mv.node);
        self.moves += 1;
        if mv.kind == MoveKind::Place {
            self.space = self.space.max(self.config.len());
            if mv.node == self.graph.root() {
                self.root_seen = true;
            }
        }
    }
}

pub fn validate(graph: &Dag, seq: &PebbleSequence, variant: Variant) -> Result<PebbleStats, ValidationError> {
    let mut replay = Replay::new(graph);
    for &mv in &seq.moves {
        replay.push(mv);
        if replay.error.is_some() {
            break;
        }
    }
    replay.finish(variant)
}

pub fn validate_persistent(graph: &Dag, seq: &PebbleSequence) -> Result<PebbleStats, ValidationError> {
    validate(graph, seq, Variant::Persistent)
}

pub fn validate_visiting(graph: &Dag, seq: &PebbleSequence) -> Result<PebbleStats, ValidationError> {
    validate(graph, seq, Variant::Visiting)
}

/// Runs `seq` backwards: order reversed, every placement becomes a removal
/// and vice versa.
pub fn reverse(seq: &PebbleSequence) -> PebbleSequence {
    seq.moves.iter().rev().map(|m| m.flipped()).collect()
}

/// A tree together with how pebble budgets translate: a budget `k` on the
/// original instance corresponds to `k + budget_shift` on `tree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub tree: RootedTree,
    pub budget_shift: i32,
}

/// Persistent instance `T` to visiting instance `T'` with
/// `rev(T) = vrev(T') + 1`: reroot at the lexicographically smallest leaf
/// and keep the subtree below it.
pub fn to_visiting_instance(tree: &RootedTree) -> Result<Reduction, GraphError> {
    if tree.len() < 2 {
        return Err(GraphError::InvalidSize("reduction needs at least two nodes".into()));
    }
    let leaf = tree.leaves()[0];
    let rerooted = reroot_at_leaf(tree, leaf)?;
    let child = rerooted.children(rerooted.root())[0];
    Ok(Reduction { tree: subtree(&rerooted, child)?, budget_shift: -1 })
}

/// Visiting instance `T` to persistent instance `T'` with
/// `vrev(T) = rev(T') - 1`: hang the root below a fresh node.
pub fn to_persistent_instance(tree: &RootedTree) -> Reduction {
    let mut fresh = format!("{}'", tree.name(tree.root()));
    while tree.index_of(&fresh).is_some() {
        fresh.push('\'');
    }
    let root = tree.name(tree.root()).to_string();
    let edges = tree
        .edges()
        .into_iter()
        .map(|(u, v)| (tree.name(u).to_string(), tree.name(v).to_string()))
        .chain(std::iter::once((root, fresh)));
    let extended = RootedTree::from_named(Vec::<String>::new(), edges)
        .expect("extending a tree at its root keeps it a tree");
    Reduction { tree: extended, budget_shift: 1 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treecore::{chain, complete_binary_tree};

    fn seq(g: &Dag, text: &str) -> PebbleSequence {
        PebbleSequence::parse(g, text).unwrap()
    }

    #[test]
    fn apply_move_rules() {
        let t = complete_binary_tree(3).unwrap();
        let n = |s: &str| t.node(s).unwrap();
        let empty = PebbleConfig::empty(7);
        let c = apply_move(&t, &empty, Move::place(n("4"))).unwrap();
        assert_eq!(c.iter().collect::<Vec<_>>(), [n("4")]);

        let c45 = PebbleConfig::from_nodes(7, [n("4"), n("5")]);
        let c = apply_move(&t, &c45, Move::place(n("2"))).unwrap();
        assert_eq!(c.len(), 3);

        let c4 = PebbleConfig::from_nodes(7, [n("4")]);
        assert!(matches!(
            apply_move(&t, &c4, Move::place(n("2"))),
            Err(MoveError::MissingInNeighbor { .. })
        ));
        assert!(matches!(
            apply_move(&t, &c4, Move::place(n("4"))),
            Err(MoveError::AlreadyPebbled(_))
        ));
        assert!(matches!(
            apply_move(&t, &c4, Move::remove(n("5"))),
            Err(MoveError::NotPebbled(_))
        ));
    }

    #[test]
    fn persistent_examples() {
        let one = chain(1).unwrap();
        let stats = validate_persistent(&one, &seq(&one, "+1")).unwrap();
        assert_eq!(stats, PebbleStats { space: 1, time: 2 });

        let two = chain(2).unwrap();
        let stats = validate_persistent(&two, &seq(&two, "+2\n+1\n-2\n")).unwrap();
        assert_eq!(stats, PebbleStats { space: 2, time: 4 });

        assert!(matches!(
            validate_persistent(&two, &PebbleSequence::default()),
            Err(ValidationError::WrongFinal { .. })
        ));
    }

    #[test]
    fn visiting_examples() {
        let one = chain(1).unwrap();
        let stats = validate_visiting(&one, &seq(&one, "+1\n-1")).unwrap();
        assert_eq!(stats, PebbleStats { space: 1, time: 3 });

        let two = chain(2).unwrap();
        let stats = validate_visiting(&two, &seq(&two, "+2\n+1\n-1\n-2")).unwrap();
        assert_eq!(stats, PebbleStats { space: 2, time: 5 });

        assert_eq!(
            validate_visiting(&two, &seq(&two, "+2\n-2")),
            Err(ValidationError::RootNeverVisited)
        );
    }

    #[test]
    fn illegal_move_reports_index() {
        let t = complete_binary_tree(3).unwrap();
        let err = validate_persistent(&t, &seq(&t, "+4\n+5\n+2\n+1\n")).unwrap_err();
        match err {
            ValidationError::IllegalMove { index, source: MoveError::MissingInNeighbor { node, pred } } => {
                assert_eq!(index, 3);
                assert_eq!(node, "1");
                assert_eq!(pred, "3");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn reverse_examples() {
        assert_eq!(reverse(&PebbleSequence::default()), PebbleSequence::default());
        let two = chain(2).unwrap();
        let s = seq(&two, "+2\n+1\n-2\n");
        assert_eq!(reverse(&s), seq(&two, "+2\n-1\n-2\n"));
    }

    #[test]
    fn reductions_by_construction() {
        let c4 = chain(4).unwrap();
        let r = to_visiting_instance(&c4).unwrap();
        assert_eq!(r.budget_shift, -1);
        // 3 nodes, oriented away from the old root: 1 -> 2 -> 3
        assert_eq!(r.tree.serialize(), "1 2\n2 3\n");
        assert_eq!(r.tree.len(), 3);
        assert_eq!(r.tree.height(), 3);

        let two = chain(2).unwrap();
        assert_eq!(to_visiting_instance(&two).unwrap().tree.len(), 1);
        assert!(to_visiting_instance(&chain(1).unwrap()).is_err());

        let bt = complete_binary_tree(3).unwrap();
        let r = to_visiting_instance(&bt).unwrap();
        assert_eq!(r.tree.len(), 6);
        assert_eq!(r.tree.name(r.tree.root()), "2");

        let p = to_persistent_instance(&chain(1).unwrap());
        assert_eq!(p.tree.serialize(), "1 1'\n");
        let p = to_persistent_instance(&bt);
        assert_eq!(p.tree.len(), 8);
        assert_eq!(p.budget_shift, 1);
        let p = to_persistent_instance(&chain(5).unwrap());
        assert_eq!(p.tree.height(), 6);
        assert_eq!(p.tree.max_degree(), 2);
    }

    #[test]
    fn fresh_root_name_avoids_collisions() {
        let t = RootedTree::from_named(Vec::<&str>::new(), [("r'", "r")]).unwrap();
        let p = to_persistent_instance(&t);
        assert_eq!(p.tree.name(p.tree.root()), "r''");
    }

    #[test]
    fn move_log_round_trip() {
        let t = complete_binary_tree(2).unwrap();
        let s = seq(&t, "# comment\n+2\n+3\n+1\n-3\n-2\n");
        assert_eq!(PebbleSequence::parse(&t, &s.to_text(&t)).unwrap(), s);
        assert!(PebbleSequence::parse(&t, "*2").is_err());
        assert!(PebbleSequence::parse(&t, "+9").is_err());
    }
}
