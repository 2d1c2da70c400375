mod common;

use proptest::prelude::*;
use revpeb::oracle::rev_oracle;
use revpeb::pebbling::{validate_persistent, MoveCounter, PebbleSequence};
use revpeb::ranking::{validate_coloring, validate_matchings};
use revpeb::strategy::*;
use revpeb::treecore::{complete_binary_tree, underlying, RootedTree};

use common::{random_rooted_tree, rng};

/// A random strategy: split on a uniformly chosen edge at every level.
fn random_strategy(tree: &RootedTree, seed: u64) -> StrategyTree {
    use rand::Rng;
    let mut r = rng(seed);
    fn build(tree: &RootedTree, nodes: Vec<usize>, r: &mut impl Rng) -> StrategyTree {
        if nodes.len() == 1 {
            return StrategyTree::leaf(nodes[0]);
        }
        let mut inside = vec![false; tree.len()];
        nodes.iter().for_each(|&v| inside[v] = true);
        let edges: Vec<(usize, usize)> = nodes
            .iter()
            .filter_map(|&v| tree.parent(v).filter(|&p| inside[p]).map(|p| (v, p)))
            .collect();
        let (c, p) = edges[r.gen_range(0..edges.len())];
        let below: Vec<usize> = tree.descendants(c).into_iter().filter(|&v| inside[v]).collect();
        let mut lower = vec![false; tree.len()];
        below.iter().for_each(|&v| lower[v] = true);
        let rest: Vec<usize> = nodes.iter().copied().filter(|&v| !lower[v]).collect();
        StrategyTree::split(c, p, build(tree, below, r), build(tree, rest, r))
    }
    build(tree, (0..tree.len()).collect(), &mut r)
}

/// Move count straight from the recurrence, recomputed here.
fn recurrence(s: &StrategyTree, i: usize) -> u128 {
    match s.node(i) {
        StrategyNode::Leaf(_) => 1,
        StrategyNode::Split { left, right, .. } => 2 * recurrence(s, left) + recurrence(s, right),
    }
}

#[test]
fn solve_is_optimal_on_random_trees() {
    let mut r = rng(5);
    for n in 1..=16 {
        for _ in 0..6 {
            let t = random_rooted_tree(&mut r, n);
            let result = solve(&t);
            assert_eq!(result.rev, rev_oracle(&t).unwrap().value);
            let stats = validate_persistent(&t, &result.sequence(&t)).unwrap();
            assert_eq!(stats.space, result.rev);
            assert_eq!(validate_coloring(&underlying(&t), &result.coloring).unwrap() as usize + 1, result.rev);
        }
    }
}

#[test]
fn text_round_trip() {
    let t = complete_binary_tree(4).unwrap();
    let s = solve(&t).strategy;
    let text = s.to_text(&t);
    let back = StrategyTree::parse(&t, &format!("# saved\n{text}\n")).unwrap();
    assert_eq!(back.to_text(&t), text);
    assert!(StrategyTree::parse(&t, "(2>1 2").is_err());
}

#[test]
fn invalid_strategies_are_rejected() {
    let t = complete_binary_tree(2).unwrap();
    let (one, two, three) = (t.node("1").unwrap(), t.node("2").unwrap(), t.node("3").unwrap());
    let wrong_leaf = StrategyTree::split(two, one, StrategyTree::leaf(three), StrategyTree::leaf(one));
    assert!(validate_strategy(&t, &wrong_leaf).is_err());
    let not_edge = StrategyTree::split(two, three, StrategyTree::leaf(two), StrategyTree::leaf(one));
    assert!(validate_strategy(&t, &not_edge).is_err());
}

#[test]
fn large_solve_streams_without_storing() {
    let mut r = rng(17);
    let t = random_rooted_tree(&mut r, 3000);
    let result = solve(&t);
    let mut counter = MoveCounter(0);
    let emitted = result.stream_sequence(&t, &mut counter);
    assert_eq!(counter.0, emitted);
    assert_eq!(emitted as u128, result.move_count());
}

proptest! {
    #[test]
    fn random_strategy_compiles_to_its_depth(seed in any::<u64>(), n in 1usize..24) {
        let t = random_rooted_tree(&mut rng(seed), n);
        let s = random_strategy(&t, seed ^ 0x5eed);
        let depth = validate_strategy(&t, &s).unwrap();
        prop_assert_eq!(depth, s.depth());
        let seq: PebbleSequence = compile(&t, &s).unwrap();
        let stats = validate_persistent(&t, &seq).unwrap();
        prop_assert_eq!(stats.space, depth);
        prop_assert_eq!(seq.len() as u128, recurrence(&s, s.root()));
        prop_assert_eq!(count_moves(&t, &s).unwrap() as usize, seq.len());
        prop_assert!(depth >= solve(&t).rev);
    }

    #[test]
    fn strategy_matchings_round_trip(seed in any::<u64>(), n in 1usize..24) {
        let t = random_rooted_tree(&mut rng(seed), n);
        let s = random_strategy(&t, seed.rotate_left(7));
        let m = strategy_to_matchings(&t, &s).unwrap();
        prop_assert_eq!(validate_matchings(&underlying(&t), &m).unwrap() + 1, s.depth());
        let back = matchings_to_strategy(&t, &m).unwrap();
        prop_assert_eq!(validate_strategy(&t, &back).unwrap(), s.depth());
    }
}
