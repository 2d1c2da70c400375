use super::{GraphError, UndirectedTree};

/// Size window `[lo, hi]` for a piece carved out of a tree, where
/// `lo = floor(n^((k0-1)/k0) / 2)` and `hi = ceil(n^((k0-1)/k0))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PieceBounds {
    pub lo: usize,
    pub hi: usize,
}

impl PieceBounds {
    pub fn new(n: usize, k0: u32) -> PieceBounds {
        assert!(k0 >= 1, "k0 must be positive");
        let (fl, ce) = match (n as u128).checked_pow(k0 - 1) {
            Some(x) => (root_floor(x, k0), root_ceil(x, k0)),
            None => {
                let r = (n as f64).powf((k0 - 1) as f64 / k0 as f64);
                (r.floor() as u128, r.ceil() as u128)
            }
        };
        PieceBounds { lo: (fl / 2) as usize, hi: ce as usize }
    }
}

/// `size > n^((k0-1)/k0)`, evaluated exactly as `size^k0 > n^(k0-1)`.
pub(crate) fn exceeds_target(size: usize, n: usize, k0: u32) -> bool {
    match ((size as u128).checked_pow(k0), (n as u128).checked_pow(k0 - 1)) {
        (Some(lhs), Some(rhs)) => lhs > rhs,
        (None, Some(_)) => true,
        _ => (size as f64) > (n as f64).powf((k0 - 1) as f64 / k0 as f64),
    }
}

fn pow_cmp(m: u128, k: u32, x: u128) -> std::cmp::Ordering {
    match m.checked_pow(k) {
        Some(p) => p.cmp(&x),
        None => std::cmp::Ordering::Greater,
    }
}

fn root_floor(x: u128, k: u32) -> u128 {
    if k == 1 {
        return x;
    }
    let mut m = (x as f64).powf(1.0 / k as f64) as u128;
    while pow_cmp(m, k, x).is_gt() {
        m -= 1;
    }
    while pow_cmp(m + 1, k, x).is_le() {
        m += 1;
    }
    m
}

fn root_ceil(x: u128, k: u32) -> u128 {
    let f = root_floor(x, k);
    if pow_cmp(f, k, x).is_eq() {
        f
    } else {
        f + 1
    }
}

/// Scratch state for repeated separator descents over one adjacency.
pub(crate) struct Carver<'a> {
    adj: &'a [Vec<usize>],
    mark: Vec<u32>,
    epoch: u32,
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl<'a> Carver<'a> {
    pub(crate) fn new(adj: &'a [Vec<usize>]) -> Carver<'a> {
        let n = adj.len();
        Carver { adj, mark: vec![0; n], epoch: 0, parent: vec![0; n], size: vec![0; n] }
    }

    fn stamp(&mut self, nodes: &[usize]) -> u32 {
        self.epoch += 1;
        for &v in nodes {
            self.mark[v] = self.epoch;
        }
        self.epoch
    }

    /// DFS order of the component `nodes` (stamped `tag`), rooted at its
    /// smallest node; fills `parent` for every non-root node.
    fn order(&mut self, nodes: &[usize], tag: u32) -> Vec<usize> {
        let root = *nodes.iter().min().expect("non-empty component");
        let mut order = Vec::with_capacity(nodes.len());
        self.parent[root] = usize::MAX;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            order.push(v);
            for &w in &self.adj[v] {
                if self.mark[w] == tag && w != self.parent[v] {
                    self.parent[w] = v;
                    stack.push(w);
                }
            }
        }
        order
    }

    /// Repeatedly cuts the component at its most balanced edge and keeps
    /// the larger side until at most `hi` nodes remain.
    pub(crate) fn carve(&mut self, nodes: &[usize], hi: usize) -> Vec<usize> {
        let mut current = nodes.to_vec();
        while current.len() > hi {
            let tag = self.stamp(&current);
            let order = self.order(&current, tag);
            let total = order.len();
            for &v in order.iter().rev() {
                self.size[v] = 1;
            }
            for &v in order.iter().rev() {
                let p = self.parent[v];
                if p != usize::MAX {
                    self.size[p] += self.size[v];
                }
            }
            let mut best: Option<(usize, usize)> = None;
            for &v in &order[1..] {
                let heavy = self.size[v].max(total - self.size[v]);
                if best.is_none_or(|(h, b)| heavy < h || (heavy == h && v < b)) {
                    best = Some((heavy, v));
                }
            }
            let (_, cut) = best.expect("component with at least two nodes");
            let below = self.size[cut];
            // Collect the subtree under `cut` by walking the DFS parent links.
            let mut inside = vec![cut];
            let mut i = 0;
            while i < inside.len() {
                let v = inside[i];
                for &w in &self.adj[v] {
                    if self.mark[w] == tag && self.parent[w] == v && w != self.parent[v] {
                        inside.push(w);
                    }
                }
                i += 1;
            }
            debug_assert_eq!(inside.len(), below);
            current = if below >= total - below {
                inside
            } else {
                let lower = self.stamp(&inside);
                order.into_iter().filter(|&v| self.mark[v] != lower).collect()
            };
            current.sort_unstable();
        }
        current
    }

    /// Splits a connected node set into connected pieces of at most `hi`
    /// nodes, carving pieces out of every larger component.
    pub(crate) fn partition(&mut self, nodes: &[usize], hi: usize) -> Vec<Vec<usize>> {
        let mut pieces = Vec::new();
        let mut work = vec![nodes.to_vec()];
        while let Some(comp) = work.pop() {
            if comp.len() <= hi {
                pieces.push(comp);
                continue;
            }
            let piece = self.carve(&comp, hi);
            let rest = self.stamp(&comp);
            self.stamp(&piece);
            for &start in &comp {
                if self.mark[start] != rest {
                    continue;
                }
                // Flood one remaining component and retire it from `rest`.
                let taken = self.epoch + 1;
                self.epoch = taken;
                self.mark[start] = taken;
                let mut found = vec![start];
                let mut i = 0;
                while i < found.len() {
                    let v = found[i];
                    for &w in &self.adj[v] {
                        if self.mark[w] == rest {
                            self.mark[w] = taken;
                            found.push(w);
                        }
                    }
                    i += 1;
                }
                found.sort_unstable();
                work.push(found);
            }
            pieces.push(piece);
        }
        pieces
    }
}

/// Carves a connected subtree of `tree` whose size lies in
/// [`PieceBounds::new(n, k0)`]. Requires `|tree| > n^((k0-1)/k0)`.
pub fn separator_subtree(
    tree: &UndirectedTree,
    n: usize,
    k0: u32,
) -> Result<Vec<usize>, GraphError> {
    if k0 == 0 {
        return Err(GraphError::InvalidSize("k0 must be positive".into()));
    }
    if !exceeds_target(tree.len(), n, k0) {
        return Err(GraphError::SeparatorPrecondition { size: tree.len(), n, k0 });
    }
    let adj: Vec<Vec<usize>> = (0..tree.len())
        .map(|v| tree.neighbors(v).iter().map(|&(w, _)| w).collect())
        .collect();
    let bounds = PieceBounds::new(n, k0);
    let all: Vec<usize> = (0..tree.len()).collect();
    Ok(Carver::new(&adj).carve(&all, bounds.hi))
}
