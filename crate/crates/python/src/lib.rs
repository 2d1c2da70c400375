use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use revpeb::generators::{
    bottom_up_plan, bt_epsilon_plan, bt_optimal_plan, chain_plan, separator_plan, DEFAULT_DEGREE_CAP,
};
use revpeb::oracle::{dt_oracle, rev_oracle as rev_search, vrev_oracle as vrev_search};
use revpeb::pebbling::{validate as replay, PebbleSequence, Variant};
use revpeb::ranking::erank_opt;
use revpeb::strategy::{solve as solve_tree, SolveResult};
use revpeb::treecore::{self, chain, complete_binary_tree, parse_graph, underlying, RootedTree};

/// `(u, v, color)`.
type ColoredEdge = (String, String, u32);

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A rooted tree or single-sink DAG.
#[pyclass(frozen, module = "revpeb")]
struct Graph {
    inner: treecore::Graph,
}

impl Graph {
    fn tree(&self) -> PyResult<&RootedTree> {
        match &self.inner {
            treecore::Graph::Tree(t) => Ok(t),
            treecore::Graph::Dag(_) => Err(PyValueError::new_err("graph is not a rooted tree")),
        }
    }
}

#[pymethods]
impl Graph {
    /// Parses an edge list: one `u v` per line for the edge u -> v.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Graph> {
        parse_graph(text).map(|inner| Graph { inner }).map_err(value_error)
    }

    #[staticmethod]
    fn complete_binary_tree(h: usize) -> PyResult<Graph> {
        let t = complete_binary_tree(h).map_err(value_error)?;
        Ok(Graph { inner: treecore::Graph::Tree(t) })
    }

    #[staticmethod]
    fn chain(n: usize) -> PyResult<Graph> {
        let t = chain(n).map_err(value_error)?;
        Ok(Graph { inner: treecore::Graph::Tree(t) })
    }

    #[getter]
    fn is_tree(&self) -> bool {
        matches!(self.inner, treecore::Graph::Tree(_))
    }

    #[getter]
    fn root(&self) -> String {
        let g = self.inner.as_dag();
        g.name(g.root()).to_string()
    }

    #[getter]
    fn nodes(&self) -> Vec<String> {
        self.inner.as_dag().names().to_vec()
    }

    #[getter]
    fn edges(&self) -> Vec<(String, String)> {
        let g = self.inner.as_dag();
        g.edges().into_iter().map(|(u, v)| (g.name(u).to_string(), g.name(v).to_string())).collect()
    }

    fn to_text(&self) -> String {
        self.inner.as_dag().serialize()
    }

    fn __len__(&self) -> usize {
        self.inner.as_dag().len()
    }

    fn __repr__(&self) -> String {
        let g = self.inner.as_dag();
        let kind = if self.is_tree() { "tree" } else { "dag" };
        format!("Graph({kind}, {} nodes, root {:?})", g.len(), g.name(g.root()))
    }
}

/// Optimal reversible pebbling of a tree with its certificates.
#[pyclass(frozen, module = "revpeb")]
struct Solution {
    tree: RootedTree,
    result: SolveResult,
}

#[pymethods]
impl Solution {
    #[getter]
    fn rev(&self) -> usize {
        self.result.rev
    }

    /// `(u, v, color)` for every edge.
    #[getter]
    fn coloring(&self) -> Vec<ColoredEdge> {
        coloring_triples(&self.tree, &self.result.coloring.colors)
    }

    #[getter]
    fn strategy(&self) -> String {
        self.result.strategy.to_text(&self.tree)
    }

    #[getter]
    fn move_count(&self) -> u128 {
        self.result.move_count()
    }

    /// The pebbling as `+node` / `-node` strings.
    fn moves(&self) -> Vec<String> {
        let seq = self.result.sequence(&self.tree);
        seq.to_text(&self.tree).lines().map(str::to_string).collect()
    }

    fn __repr__(&self) -> String {
        format!("Solution(rev={}, moves={})", self.result.rev, self.result.move_count())
    }
}

fn coloring_triples(tree: &RootedTree, colors: &[u32]) -> Vec<ColoredEdge> {
    let u = underlying(tree);
    u.edges()
        .iter()
        .zip(colors)
        .map(|(&(a, b), &c)| (u.name(a).to_string(), u.name(b).to_string(), c))
        .collect()
}

#[pyfunction]
fn solve(graph: &Graph) -> PyResult<Solution> {
    let tree = graph.tree()?.clone();
    let result = solve_tree(&tree);
    Ok(Solution { tree, result })
}

/// Minimum edge rank and an optimal coloring of the underlying tree.
#[pyfunction]
fn erank(graph: &Graph) -> PyResult<(u32, Vec<ColoredEdge>)> {
    let tree = graph.tree()?;
    let c = erank_opt(&underlying(tree));
    Ok((c.rank(), coloring_triples(tree, &c.colors)))
}

/// Replays a move log; returns `(space, time)` or raises ValueError.
#[pyfunction]
#[pyo3(signature = (graph, moves, variant = "persistent"))]
fn validate(graph: &Graph, moves: &str, variant: &str) -> PyResult<(usize, u64)> {
    let variant: Variant = variant.parse().map_err(value_error)?;
    let g = graph.inner.as_dag();
    let seq = PebbleSequence::parse(g, moves).map_err(value_error)?;
    let stats = replay(g, &seq, variant).map_err(value_error)?;
    Ok((stats.space, stats.time))
}

#[pyfunction]
fn rev_oracle(graph: &Graph) -> PyResult<usize> {
    rev_search(graph.inner.as_dag()).map(|r| r.value).map_err(value_error)
}

#[pyfunction]
fn vrev_oracle(graph: &Graph) -> PyResult<usize> {
    vrev_search(graph.inner.as_dag()).map(|r| r.value).map_err(value_error)
}

/// Value of the Dymond-Tompa game.
#[pyfunction]
fn dt_value(graph: &Graph) -> PyResult<usize> {
    dt_oracle(graph.inner.as_dag()).map_err(value_error)
}

/// Builds and checks a pebbling for one of the families `chain`, `bt`,
/// `bt-eps`, `separator`, `bottom-up`; returns its stats as a dict.
#[pyfunction]
#[pyo3(signature = (family, n = None, h = None, k = None, tree = None, degree_cap = DEFAULT_DEGREE_CAP, moves = false))]
#[allow(clippy::too_many_arguments)]
fn generate<'py>(
    py: Python<'py>,
    family: &str,
    n: Option<usize>,
    h: Option<usize>,
    k: Option<u32>,
    tree: Option<&Graph>,
    degree_cap: usize,
    moves: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let missing = |what: &str| PyValueError::new_err(format!("{family} needs {what}"));
    let generated = match family {
        "chain" => chain_plan(n.ok_or_else(|| missing("n"))?),
        "bt" => bt_optimal_plan(h.ok_or_else(|| missing("h"))?),
        "bt-eps" => bt_epsilon_plan(h.ok_or_else(|| missing("h"))?, k.ok_or_else(|| missing("k"))? as usize),
        "separator" => separator_plan(tree.ok_or_else(|| missing("tree"))?.tree()?, k.ok_or_else(|| missing("k"))?, degree_cap),
        "bottom-up" => Ok(bottom_up_plan(tree.ok_or_else(|| missing("tree"))?.tree()?)),
        other => return Err(PyValueError::new_err(format!("unknown family {other:?}"))),
    }
    .map_err(value_error)?;
    let report = generated.report(moves).map_err(value_error)?;
    let d = PyDict::new(py);
    d.set_item("family", &report.family)?;
    d.set_item("params", report.params.clone())?;
    d.set_item("space", report.space)?;
    d.set_item("time", report.time)?;
    if let Some(seq) = &report.sequence {
        let lines: Vec<String> = seq.to_text(&generated.tree).lines().map(str::to_string).collect();
        d.set_item("moves", lines)?;
    }
    Ok(d)
}

#[pymodule]
fn _revpeb(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Graph>()?;
    m.add_class::<Solution>()?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(erank, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(rev_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(vrev_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(dt_value, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    Ok(())
}
