//! Exhaustive ground truth for small graphs: pebbling numbers and shortest
//! pebblings by breadth-first search over pebble configurations, and the
//! Dymond-Tompa game value by memoized minimax.

use std::collections::VecDeque;

use thiserror::Error;

use crate::pebbling::{Move, PebbleConfig, PebbleSequence, Variant};
use crate::treecore::Dag;

/// Size caps: configuration spaces grow as `2^n`.
pub const REV_CAP: usize = 20;
pub const STEPS_CAP: usize = 16;
pub const DT_CAP: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {nodes} nodes; this search is capped at {cap}")]
    TooLarge { nodes: usize, cap: usize },
    #[error("goal unreachable with {budget} pebbles")]
    Unreachable { budget: usize },
    #[error("{0} is not a legal challenge")]
    IllegalChallenge(String),
    #[error("no challenge is pending")]
    GameOver,
    #[error("the challenger has not answered yet")]
    OutOfTurn,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub value: usize,
    pub witness: Option<PebbleSequence>,
}

fn check_cap(g: &Dag, cap: usize) -> Result<(), OracleError> {
    if g.len() > cap {
        Err(OracleError::TooLarge { nodes: g.len(), cap })
    } else {
        Ok(())
    }
}

fn pred_masks(g: &Dag) -> Vec<u32> {
    (0..g.len()).map(|v| g.preds(v).iter().fold(0u32, |m, &p| m | 1 << p)).collect()
}

/// Shortest move sequence reaching the goal with at most `budget`
/// pebbles, or `None`. States carry a "root was pebbled" bit above the
/// node bits in the visiting variant.
fn search(g: &Dag, budget: usize, variant: Variant) -> Option<PebbleSequence> {
    let n = g.len();
    let preds = pred_masks(g);
    let root = g.root();
    let seen_bit = 1u32 << n;
    let node_mask = seen_bit - 1;
    let start = 0u32;
    let is_goal = |s: u32| match variant {
        Variant::Persistent => s == 1 << root,
        Variant::Visiting => s == seen_bit,
    };
    let states = match variant {
        Variant::Persistent => 1usize << n,
        Variant::Visiting => 1usize << (n + 1),
    };
    let mut parent = vec![u32::MAX; states];
    parent[start as usize] = start;
    let mut queue = VecDeque::from([start]);
    let mut goal = None;
    while let Some(s) = queue.pop_front() {
        if is_goal(s) {
            goal = Some(s);
            break;
        }
        let config = s & node_mask;
        for (v, &need) in preds.iter().enumerate() {
            if config & need != need {
                continue;
            }
            let bit = 1u32 << v;
            if config & bit == 0 && config.count_ones() as usize >= budget {
                continue;
            }
            let mut next = s ^ bit;
            if variant == Variant::Visiting && v == root && config & bit == 0 {
                next |= seen_bit;
            }
            if parent[next as usize] == u32::MAX {
                parent[next as usize] = s;
                queue.push_back(next);
            }
        }
    }
    let mut s = goal?;
    let mut moves = Vec::new();
    while s != start {
        let p = parent[s as usize];
        let diff = (s ^ p) & node_mask;
        let v = diff.trailing_zeros() as usize;
        moves.push(if s & diff != 0 { Move::place(v) } else { Move::remove(v) });
        s = p;
    }
    moves.reverse();
    Some(PebbleSequence::new(moves))
}

fn min_budget(g: &Dag, variant: Variant) -> OracleResult {
    for k in 1..=g.len() {
        if let Some(w) = search(g, k, variant) {
            return OracleResult { value: k, witness: Some(w) };
        }
    }
    unreachable!("pebbling every node is always possible")
}

/// `rev(G)`: fewest pebbles for a persistent pebbling.
pub fn rev_oracle(g: &Dag) -> Result<OracleResult, OracleError> {
    check_cap(g, REV_CAP)?;
    Ok(min_budget(g, Variant::Persistent))
}

/// `vrev(G)`: fewest pebbles for a visiting pebbling.
pub fn vrev_oracle(g: &Dag) -> Result<OracleResult, OracleError> {
    check_cap(g, REV_CAP)?;
    Ok(min_budget(g, Variant::Visiting))
}

/// Fewest configurations (moves + 1) to reach the goal within `budget`.
pub fn min_steps_oracle(g: &Dag, budget: usize, variant: Variant) -> Result<OracleResult, OracleError> {
    check_cap(g, STEPS_CAP)?;
    let w = search(g, budget, variant).ok_or(OracleError::Unreachable { budget })?;
    Ok(OracleResult { value: w.len() + 1, witness: Some(w) })
}

fn effective_mask(preds: &[u32], pebbled: u32, challenged: usize) -> u32 {
    let mut found = 0u32;
    let mut frontier = preds[challenged] & !pebbled;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        if found & 1 << v != 0 {
            continue;
        }
        found |= 1 << v;
        frontier |= preds[v] & !pebbled & !found;
    }
    found
}

/// Nodes with a pebble-free directed path into `challenged`.
pub fn effective_predecessors(g: &Dag, config: &PebbleConfig, challenged: usize) -> Vec<usize> {
    // Walk backwards from the challenged node through unpebbled nodes.
    let mut seen = vec![false; g.len()];
    let mut stack: Vec<usize> = g.preds(challenged).iter().copied().filter(|&p| !config.contains(p)).collect();
    let mut out = Vec::new();
    while let Some(v) = stack.pop() {
        if seen[v] {
            continue;
        }
        seen[v] = true;
        out.push(v);
        stack.extend(g.preds(v).iter().copied().filter(|&p| !config.contains(p) && !seen[p]));
    }
    out.sort_unstable();
    out
}

/// Memoized Dymond-Tompa game values over positions (pebbled, challenged).
struct DtSolver {
    n: usize,
    preds: Vec<u32>,
    prune: bool,
    memo: Vec<u8>,
}

impl DtSolver {
    fn new(g: &Dag, prune: bool) -> DtSolver {
        let n = g.len();
        DtSolver { n, preds: pred_masks(g), prune, memo: vec![0; n << n] }
    }

    fn won(&self, pebbled: u32, c: usize) -> bool {
        pebbled & self.preds[c] == self.preds[c]
    }

    fn candidates(&self, pebbled: u32, c: usize) -> u32 {
        if self.prune {
            effective_mask(&self.preds, pebbled, c)
        } else {
            !pebbled & ((1u32 << self.n) - 1)
        }
    }

    /// Pebbles on the board when the game ends, under optimal play from here.
    fn value(&mut self, pebbled: u32, c: usize) -> usize {
        if self.won(pebbled, c) {
            return pebbled.count_ones() as usize;
        }
        let slot = (pebbled as usize) * self.n + c;
        if self.memo[slot] != 0 {
            return self.memo[slot] as usize;
        }
        let mut best = usize::MAX;
        let mut options = self.candidates(pebbled, c);
        while options != 0 {
            let x = options.trailing_zeros() as usize;
            options &= options - 1;
            let next = pebbled | 1 << x;
            let v = self.value(next, x).max(self.value(next, c));
            best = best.min(v);
        }
        self.memo[slot] = best as u8;
        best
    }

    fn best_move(&mut self, pebbled: u32, c: usize) -> Option<usize> {
        if self.won(pebbled, c) {
            return None;
        }
        let mut best = (usize::MAX, usize::MAX);
        let mut options = self.candidates(pebbled, c);
        while options != 0 {
            let x = options.trailing_zeros() as usize;
            options &= options - 1;
            let next = pebbled | 1 << x;
            let v = self.value(next, x).max(self.value(next, c));
            if v < best.0 {
                best = (v, x);
            }
        }
        Some(best.1)
    }
}

/// `DT(G)`: the pebbler first pebbles the root, which is challenged; each
/// round the pebbler pebbles a node and the challenger either challenges
/// it or keeps the current challenge. The pebbler wins once every
/// in-neighbour of the challenged node holds a pebble; the value is the
/// number of pebbles placed by then under optimal play on both sides.
pub fn dt_oracle(g: &Dag) -> Result<usize, OracleError> {
    dt_oracle_with(g, true)
}

/// As [`dt_oracle`]; `prune` restricts the pebbler to effective
/// predecessors of the challenged node.
pub fn dt_oracle_with(g: &Dag, prune: bool) -> Result<usize, OracleError> {
    check_cap(g, DT_CAP)?;
    let root = g.root();
    Ok(DtSolver::new(g, prune).value(1 << root, root))
}

/// Plays the Dymond-Tompa game as the pebbler against an outside
/// challenger. Rounds alternate: [`pebbler_move`](Self::pebbler_move),
/// then [`challenge`](Self::challenge).
pub struct DtEngine<'g> {
    graph: &'g Dag,
    solver: DtSolver,
    pebbled: u32,
    challenged: usize,
    last: usize,
    awaiting_challenge: bool,
}

impl<'g> DtEngine<'g> {
    /// Starts with the root pebbled and challenged.
    pub fn new(graph: &'g Dag) -> Result<DtEngine<'g>, OracleError> {
        check_cap(graph, DT_CAP)?;
        let root = graph.root();
        Ok(DtEngine {
            graph,
            solver: DtSolver::new(graph, true),
            pebbled: 1 << root,
            challenged: root,
            last: root,
            awaiting_challenge: false,
        })
    }

    /// Game value from the current position (after a challenge).
    pub fn value(&mut self) -> usize {
        self.solver.value(self.pebbled, self.challenged)
    }

    pub fn pebbles(&self) -> usize {
        self.pebbled.count_ones() as usize
    }

    pub fn challenged(&self) -> usize {
        self.challenged
    }

    pub fn is_won(&self) -> bool {
        !self.awaiting_challenge && self.solver.won(self.pebbled, self.challenged)
    }

    /// Pebbles the engine's chosen node and returns it; `None` once won.
    pub fn pebbler_move(&mut self) -> Result<Option<usize>, OracleError> {
        if self.awaiting_challenge {
            return Err(OracleError::OutOfTurn);
        }
        let Some(x) = self.solver.best_move(self.pebbled, self.challenged) else {
            return Ok(None);
        };
        self.pebbled |= 1 << x;
        self.last = x;
        self.awaiting_challenge = true;
        Ok(Some(x))
    }

    /// The challenger answers with the node just pebbled or the currently
    /// challenged node.
    pub fn challenge(&mut self, node: usize) -> Result<(), OracleError> {
        if !self.awaiting_challenge {
            return Err(OracleError::GameOver);
        }
        if node != self.last && node != self.challenged {
            let name = self.graph.names().get(node).cloned().unwrap_or_else(|| format!("#{node}"));
            return Err(OracleError::IllegalChallenge(name));
        }
        self.challenged = node;
        self.awaiting_challenge = false;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pebbling::{validate, validate_persistent};
    use crate::treecore::{chain, complete_binary_tree, parse_graph};

    fn g1() -> Dag {
        parse_graph("2 1\n3 1\n4 1\n4 3\n5 4\n6 4\n7 4\n").unwrap().into_dag()
    }

    fn g2() -> Dag {
        parse_graph("2 1\n3 1\n4 1\n3 4\n5 4\n6 4\n7 4\n").unwrap().into_dag()
    }

    #[test]
    fn pebbling_numbers() {
        let one = chain(1).unwrap();
        assert_eq!(rev_oracle(&one).unwrap().value, 1);
        assert_eq!(vrev_oracle(&one).unwrap().value, 1);
        assert_eq!(rev_oracle(&g1()).unwrap().value, 5);
        assert_eq!(rev_oracle(&g2()).unwrap().value, 6);
        let bt = complete_binary_tree(3).unwrap();
        let r = rev_oracle(&bt).unwrap();
        assert_eq!(r.value, 5);
        let stats = validate_persistent(&bt, r.witness.as_ref().unwrap()).unwrap();
        assert_eq!(stats.space, 5);
        let v = vrev_oracle(&bt).unwrap();
        assert!(validate(&bt, v.witness.as_ref().unwrap(), Variant::Visiting).is_ok());
    }

    #[test]
    fn step_counts() {
        let one = chain(1).unwrap();
        assert_eq!(min_steps_oracle(&one, 1, Variant::Persistent).unwrap().value, 2);
        let two = chain(2).unwrap();
        assert_eq!(min_steps_oracle(&two, 2, Variant::Persistent).unwrap().value, 4);
        let bt = complete_binary_tree(3).unwrap();
        assert_eq!(
            min_steps_oracle(&bt, 4, Variant::Persistent),
            Err(OracleError::Unreachable { budget: 4 })
        );
    }

    #[test]
    fn dymond_tompa_values() {
        assert_eq!(dt_oracle(&chain(1).unwrap()), Ok(1));
        let bt = complete_binary_tree(3).unwrap();
        assert_eq!(dt_oracle(&bt), Ok(5));
        assert_eq!(dt_oracle_with(&bt, false), Ok(5));
        assert_eq!(dt_oracle(&g1()), Ok(5));
        assert_eq!(dt_oracle(&g2()), Ok(6));
    }

    #[test]
    fn effective_predecessor_examples() {
        let two = chain(2).unwrap();
        let empty = PebbleConfig::empty(2);
        assert_eq!(effective_predecessors(&two, &empty, two.root()), [two.node("2").unwrap()]);
        let bt = complete_binary_tree(3).unwrap();
        let c = PebbleConfig::from_nodes(7, [bt.node("2").unwrap()]);
        let names: Vec<&str> = effective_predecessors(&bt, &c, bt.root()).iter().map(|&v| bt.name(v)).collect();
        assert_eq!(names, ["3", "6", "7"]);
        let full = PebbleConfig::from_nodes(7, 0..7);
        assert!(effective_predecessors(&bt, &full, bt.root()).is_empty());
    }

    #[test]
    fn caps() {
        let big = chain(21).unwrap();
        assert!(matches!(rev_oracle(&big), Err(OracleError::TooLarge { .. })));
        assert!(matches!(dt_oracle(&chain(13).unwrap()), Err(OracleError::TooLarge { .. })));
    }

    #[test]
    fn engine_plays_to_the_value() {
        let bt = complete_binary_tree(3).unwrap();
        let mut e = DtEngine::new(&bt).unwrap();
        assert_eq!(e.value(), 5);
        // A challenger that always moves to the freshly pebbled node.
        while let Some(x) = e.pebbler_move().unwrap() {
            e.challenge(x).unwrap();
        }
        assert!(e.is_won());
        assert!(e.pebbles() <= 5);
        assert_eq!(e.challenge(0), Err(OracleError::GameOver));
    }
}
