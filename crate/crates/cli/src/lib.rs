//! Command-line driver. [`run`] takes the argument list and the three
//! standard streams so it can be exercised without spawning a process.

use std::ffi::OsString;
use std::fmt::Display;
use std::fs::{self, File};
use std::io::{BufRead, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use revpeb::generators::{
    bottom_up_plan, bt_epsilon_plan, bt_optimal_plan, chain_plan, separator_plan, Generated,
    DEFAULT_DEGREE_CAP,
};
use revpeb::oracle::{dt_oracle, min_steps_oracle, rev_oracle, vrev_oracle, DtEngine, OracleError};
use revpeb::pebbling::{validate, MoveLogWriter, PebbleSequence, Variant};
use revpeb::ranking::{
    coloring_to_matchings, erank_opt, matchings_to_coloring, validate_coloring, validate_matchings,
    EdgeColoring, MatchingSequence,
};
use revpeb::strategy::{matchings_to_strategy, solve, strategy_to_matchings, validate_strategy, StrategyTree};
use revpeb::treecore::{parse_graph, parse_undirected, underlying, Graph, RootedTree};

#[derive(Parser, Debug)]
#[command(name = "revpeb", version, about = "Optimal reversible pebbling of trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a graph file and print a summary.
    Parse { graph: PathBuf },
    /// Optimal reversible pebbling number, with optional certificates.
    Solve {
        tree: PathBuf,
        #[arg(long)]
        coloring: Option<PathBuf>,
        #[arg(long)]
        strategy: Option<PathBuf>,
        #[arg(long)]
        moves: Option<PathBuf>,
    },
    /// Minimum edge rank coloring of the underlying tree.
    Erank { tree: PathBuf },
    /// Replay a move log and report space and time.
    Validate {
        #[arg(long, default_value = "persistent")]
        variant: Variant,
        graph: PathBuf,
        moves: PathBuf,
    },
    /// Translate between colorings, contraction rounds and strategy trees.
    Convert {
        #[arg(long, value_enum)]
        from: Format,
        #[arg(long, value_enum)]
        to: Format,
        tree: PathBuf,
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build a pebbling for a tree family and print its stats as JSON.
    Generate {
        #[arg(value_enum)]
        family: Family,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        h: Option<usize>,
        #[arg(long)]
        k: Option<u32>,
        /// Input tree for the separator and bottom-up families.
        #[arg(long)]
        tree: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
        degree_cap: usize,
        #[arg(long)]
        moves: Option<PathBuf>,
    },
    /// Exhaustive search on small graphs.
    Oracle {
        #[arg(long, value_enum)]
        which: Which,
        graph: PathBuf,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, default_value = "persistent")]
        variant: Variant,
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Dymond-Tompa game value; with --interactive the engine plays the
    /// pebbler against challenges read from stdin.
    Dt {
        graph: PathBuf,
        #[arg(long)]
        interactive: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Coloring,
    Matchings,
    Strategy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Chain,
    Bt,
    BtEps,
    Separator,
    BottomUp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Which {
    Rev,
    Vrev,
    Steps,
    Dt,
}

/// A failed command: exit code 1, or 2 when an exhaustive search refuses
/// the input size.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

fn fail(message: impl Display) -> Failure {
    Failure { code: 1, message: message.to_string() }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Failure {
        let code = if matches!(e, OracleError::TooLarge { .. }) { 2 } else { 1 };
        Failure { code, message: e.to_string() }
    }
}

type Outcome = Result<(), Failure>;

struct Io<'a> {
    stdin: &'a mut dyn BufRead,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Io<'_> {
    /// Reads a file, or stdin for `-`.
    fn read(&mut self, path: &Path) -> Result<String, Failure> {
        if path == Path::new("-") {
            let mut s = String::new();
            self.stdin.read_to_string(&mut s).map_err(|e| fail(format!("stdin: {e}")))?;
            return Ok(s);
        }
        fs::read_to_string(path).map_err(|e| fail(format!("{}: {e}", path.display())))
    }

    fn out(&mut self, line: impl Display) -> Outcome {
        writeln!(self.stdout, "{line}").map_err(|e| fail(format!("stdout: {e}")))
    }
}

/// Parses the argument list (program name first) and runs the command.
pub fn run<I, T>(args: I, stdin: &mut dyn BufRead, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = write!(sink, "{text}");
            return code;
        }
    };
    let mut io = Io { stdin, stdout, stderr };
    match dispatch(cli.command, &mut io) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(io.stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, io: &mut Io) -> Outcome {
    match command {
        Command::Parse { graph } => parse(io, &graph),
        Command::Solve { tree, coloring, strategy, moves } => {
            solve_cmd(io, &tree, coloring.as_deref(), strategy.as_deref(), moves.as_deref())
        }
        Command::Erank { tree } => erank(io, &tree),
        Command::Validate { variant, graph, moves } => validate_cmd(io, variant, &graph, &moves),
        Command::Convert { from, to, tree, input, output } => convert(io, from, to, &tree, &input, output.as_deref()),
        Command::Generate { family, n, h, k, tree, degree_cap, moves } => {
            generate(io, family, n, h, k, tree.as_deref(), degree_cap, moves.as_deref())
        }
        Command::Oracle { which, graph, budget, variant, witness } => {
            oracle(io, which, &graph, budget, variant, witness.as_deref())
        }
        Command::Dt { graph, interactive } => dt(io, &graph, interactive),
    }
}

fn load_graph(io: &mut Io, path: &Path) -> Result<Graph, Failure> {
    let text = io.read(path)?;
    parse_graph(&text).map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn load_tree(io: &mut Io, path: &Path) -> Result<RootedTree, Failure> {
    load_graph(io, path)?.into_tree().map_err(|e| fail(format!("{}: {e}", path.display())))
}

/// Writes through a sibling temporary file so a failed command never
/// leaves a partial artifact at `path`.
fn write_artifact(path: &Path, fill: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> Outcome {
    let mut partial = path.as_os_str().to_owned();
    partial.push(".partial");
    let partial = PathBuf::from(partial);
    let result = File::create(&partial).and_then(|f| {
        let mut w = BufWriter::new(f);
        fill(&mut w)?;
        w.flush()
    });
    match result.and_then(|()| fs::rename(&partial, path)) {
        Ok(()) => Ok(()),
        Err(e) => {
            let _ = fs::remove_file(&partial);
            Err(fail(format!("{}: {e}", path.display())))
        }
    }
}

fn write_text(path: &Path, text: &str) -> Outcome {
    write_artifact(path, |w| w.write_all(text.as_bytes()))
}

fn parse(io: &mut Io, path: &Path) -> Outcome {
    let graph = load_graph(io, path)?;
    let (kind, height) = match &graph {
        Graph::Tree(t) => ("tree", Some(t.height())),
        Graph::Dag(_) => ("dag", None),
    };
    let g = graph.as_dag();
    let mut record = json!({
        "kind": kind,
        "nodes": g.len(),
        "edges": g.edge_count(),
        "root": g.name(g.root()),
    });
    if let Some(h) = height {
        record["height"] = json!(h);
    }
    io.out(record)
}

fn solve_cmd(
    io: &mut Io,
    path: &Path,
    coloring: Option<&Path>,
    strategy: Option<&Path>,
    moves: Option<&Path>,
) -> Outcome {
    let tree = load_tree(io, path)?;
    let result = solve(&tree);
    if let Some(p) = coloring {
        write_text(p, &result.coloring.to_text(&underlying(&tree)))?;
    }
    if let Some(p) = strategy {
        write_text(p, &format!("{}\n", result.strategy.to_text(&tree)))?;
    }
    if let Some(p) = moves {
        write_artifact(p, |w| {
            let mut log = MoveLogWriter::new(&tree, w);
            result.stream_sequence(&tree, &mut log);
            log.finish().map(|_| ())
        })?;
    }
    io.out(format!("rev = {}", result.rev))
}

fn erank(io: &mut Io, path: &Path) -> Outcome {
    let text = io.read(path)?;
    let u = parse_undirected(&text).map_err(|e| fail(format!("{}: {e}", path.display())))?;
    let c = erank_opt(&u);
    io.out(format!("erank = {}", c.rank()))?;
    write!(io.stdout, "{}", c.to_text(&u)).map_err(|e| fail(format!("stdout: {e}")))
}

fn validate_cmd(io: &mut Io, variant: Variant, graph: &Path, moves: &Path) -> Outcome {
    let g = load_graph(io, graph)?.into_dag();
    let text = io.read(moves)?;
    let seq = PebbleSequence::parse(&g, &text).map_err(|e| fail(format!("{}: {e}", moves.display())))?;
    let stats = validate(&g, &seq, variant).map_err(fail)?;
    io.out(serde_json::to_string(&stats).expect("stats serialize"))
}

fn convert(io: &mut Io, from: Format, to: Format, tree: &Path, input: &Path, output: Option<&Path>) -> Outcome {
    let tree = load_tree(io, tree)?;
    let u = underlying(&tree);
    let text = io.read(input)?;
    let at = |e: &dyn Display| fail(format!("{}: {e}", input.display()));
    let matchings = match from {
        Format::Coloring => {
            let c = EdgeColoring::parse(&u, &text).map_err(|e| at(&e))?;
            validate_coloring(&u, &c).map_err(fail)?;
            coloring_to_matchings(&u, &c).map_err(fail)?
        }
        Format::Matchings => {
            let m = MatchingSequence::parse(&u, &text).map_err(|e| at(&e))?;
            validate_matchings(&u, &m).map_err(fail)?;
            m
        }
        Format::Strategy => {
            let s = StrategyTree::parse(&tree, &text).map_err(|e| at(&e))?;
            validate_strategy(&tree, &s).map_err(fail)?;
            strategy_to_matchings(&tree, &s).map_err(fail)?
        }
    };
    let result = match to {
        Format::Coloring => matchings_to_coloring(&u, &matchings).map_err(fail)?.to_text(&u),
        Format::Matchings => matchings.to_text(&u),
        Format::Strategy => format!("{}\n", matchings_to_strategy(&tree, &matchings).map_err(fail)?.to_text(&tree)),
    };
    match output {
        Some(p) => write_text(p, &result),
        None => write!(io.stdout, "{result}").map_err(|e| fail(format!("stdout: {e}"))),
    }
}

fn need<T>(value: Option<T>, flag: &str, family: Family) -> Result<T, Failure> {
    let name = family.to_possible_value().expect("no skipped families");
    value.ok_or_else(|| fail(format!("{} needs --{flag}", name.get_name())))
}

#[allow(clippy::too_many_arguments)]
fn generate(
    io: &mut Io,
    family: Family,
    n: Option<usize>,
    h: Option<usize>,
    k: Option<u32>,
    tree: Option<&Path>,
    degree_cap: usize,
    moves: Option<&Path>,
) -> Outcome {
    let generated: Generated = match family {
        Family::Chain => chain_plan(need(n, "n", family)?),
        Family::Bt => bt_optimal_plan(need(h, "h", family)?),
        Family::BtEps => bt_epsilon_plan(need(h, "h", family)?, need(k, "k", family)? as usize),
        Family::Separator => {
            let t = load_tree(io, need(tree, "tree", family)?)?;
            separator_plan(&t, need(k, "k", family)?, degree_cap)
        }
        Family::BottomUp => Ok(bottom_up_plan(&load_tree(io, need(tree, "tree", family)?)?)),
    }
    .map_err(fail)?;
    let report = generated.report(false).map_err(fail)?;
    if let Some(p) = moves {
        write_artifact(p, |w| {
            let mut log = MoveLogWriter::new(&generated.tree, w);
            generated.emit(&mut log);
            log.finish().map(|_| ())
        })?;
    }
    io.out(serde_json::to_string(&report).expect("report serializes"))
}

fn oracle(
    io: &mut Io,
    which: Which,
    path: &Path,
    budget: Option<usize>,
    variant: Variant,
    witness: Option<&Path>,
) -> Outcome {
    let g = load_graph(io, path)?.into_dag();
    let result = match which {
        Which::Rev => rev_oracle(&g)?,
        Which::Vrev => vrev_oracle(&g)?,
        Which::Steps => {
            let budget = budget.ok_or_else(|| fail("--which steps needs --budget"))?;
            min_steps_oracle(&g, budget, variant)?
        }
        Which::Dt => {
            if witness.is_some() {
                return Err(fail("the game oracle has no move-log witness"));
            }
            return io.out(dt_oracle(&g)?);
        }
    };
    if let (Some(p), Some(seq)) = (witness, &result.witness) {
        write_text(p, &seq.to_text(&g))?;
    }
    io.out(result.value)
}

fn dt(io: &mut Io, path: &Path, interactive: bool) -> Outcome {
    let g = load_graph(io, path)?.into_dag();
    let mut engine = DtEngine::new(&g)?;
    let value = engine.value();
    if !interactive {
        return io.out(value);
    }
    let _ = writeln!(io.stderr, "value {value}; answer each pebble with that node or {}", g.name(engine.challenged()));
    let mut line = String::new();
    while let Some(x) = engine.pebbler_move()? {
        io.out(format!("pebble {}", g.name(x)))?;
        io.stdout.flush().map_err(|e| fail(format!("stdout: {e}")))?;
        loop {
            line.clear();
            let read = io.stdin.read_line(&mut line).map_err(|e| fail(format!("stdin: {e}")))?;
            if read == 0 {
                return Err(fail("input ended before the game was decided"));
            }
            let token = line.trim();
            if token.is_empty() {
                continue;
            }
            let accepted = g.index_of(token).ok_or_else(|| OracleError::IllegalChallenge(token.to_string()));
            match accepted.and_then(|v| engine.challenge(v)) {
                Ok(()) => break,
                Err(e) => {
                    let _ = writeln!(io.stderr, "{e}; challenge {} or {}", g.name(x), g.name(engine.challenged()));
                }
            }
        }
    }
    io.out(format!("pebbles = {}", engine.pebbles()))
}
