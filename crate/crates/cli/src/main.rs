use std::collections::BTreeMap;
use std::fs;
use std::io::{Read as _, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use succinv::clique::{eval_expression, order_augment, parse_expression, verify_order_augmented};
use succinv::colnum::{adm_wrt_budget, col_wrt, heuristic_ordering, DEFAULT_ADM_BUDGET};
use succinv::encodings::{encode_matching_order, encode_starforest_successor, is_partial_matching, is_star_forest};
use succinv::io::{parse_graph, parse_ordering, serialize_graph, serialize_ordering, to_dot, GraphDoc};
use succinv::poset::{analyse_poset, PosetDoc};
use succinv::random::{
    random_bounded_degree_tree, random_clique_expression, random_connected_graph, random_graph, random_ordering,
    random_poset, random_tree,
};
use succinv::spantree::{degree3_spanning_tree, low_degree_spanning_tree_budget};
use succinv::successor::{build_successor_budget, succ_pipeline, SuccessorReport};
use succinv::verify::{run_suites, time_tree_u, DEFAULT_SEED, KWALK_FO_MAX_N};
use succinv::walk::{fo_cross_check, full_encoding, interpret_successor, three_walk_from_tree};
use succinv::{Graph, SuccessorRelation, Vertex, VertexOrdering};

/// Clique expressions and walks can nest deeply; parsing and dropping them
/// recurses, so the work runs on a thread with a generous stack.
const STACK_BYTES: usize = 1 << 30;

#[derive(Parser)]
#[command(name = "succinv", version, about = "Order and successor augmentations of sparse graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GraphInput {
    /// Graph JSON `{"n": .., "edges": [[u,v], ..]}`; `-` reads standard input.
    #[arg(long = "in")]
    input: PathBuf,
    /// Ordering JSON `{"order": [..]}`, smallest first. Defaults to a
    /// degeneracy ordering.
    #[arg(long)]
    order: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Colouring number and admissibility of G with respect to L.
    Colnum {
        #[command(flatten)]
        g: GraphInput,
        #[arg(long, default_value_t = 1)]
        r: usize,
        /// Node expansions per vertex for the admissibility search.
        #[arg(long, default_value_t = DEFAULT_ADM_BUDGET)]
        budget: u64,
    },
    /// Edge set F of a spanning tree of maximum degree 3, with the bound check.
    Spantree {
        #[command(flatten)]
        g: GraphInput,
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long, default_value_t = DEFAULT_ADM_BUDGET)]
        budget: u64,
        /// Write a DOT rendering with F dashed.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Successor relation from a Hamiltonian path in the cube of T.
    Successor {
        #[command(flatten)]
        g: GraphInput,
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Degeneracy ordering followed by the successor construction.
    Pipeline {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Encodes a k-walk of a degree-3 spanning tree and interprets the successor.
    Kwalk {
        #[command(flatten)]
        g: GraphInput,
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
    /// Clique-expression evaluation and order augmentation.
    Clique {
        #[command(subcommand)]
        action: CliqueAction,
    },
    /// Poset utilities.
    Poset {
        #[command(subcommand)]
        action: PosetAction,
    },
    /// Ordered-structure encodings of arbitrary graphs.
    Encode {
        #[arg(value_enum)]
        kind: EncodeKind,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Runs a verification suite, or `all`.
    Verify {
        suite: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Prints a random instance as JSON.
    Random {
        #[arg(value_enum)]
        kind: RandomKind,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long)]
        m: Option<usize>,
        /// Width for `clique`, degree cap for `bounded-tree`.
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Comparability probability for `poset`.
        #[arg(long, default_value_t = 0.3)]
        p: f64,
    },
    /// Times build_tree_U at n and 2n on random connected graphs.
    Bench {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long, default_value_t = 250_000)]
        m: usize,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
    },
}

#[derive(Subcommand)]
enum CliqueAction {
    Eval {
        #[arg(long = "in")]
        input: PathBuf,
    },
    Transform {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum PosetAction {
    /// Minimum chain cover and the lifted linear order.
    Chains {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EncodeKind {
    Matching,
    Starforest,
}

#[derive(Clone, Copy, ValueEnum)]
enum RandomKind {
    Graph,
    Connected,
    Tree,
    BoundedTree,
    Ordering,
    Poset,
    Clique,
}

#[derive(Serialize)]
struct CheckRow {
    name: String,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    lhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rhs: Option<String>,
}

#[derive(Default)]
struct Run {
    inputs: Vec<u8>,
    checks: Vec<CheckRow>,
    timings: BTreeMap<String, f64>,
}

impl Run {
    fn read(&mut self, path: &Path) -> Result<String> {
        let mut text = String::new();
        if path == Path::new("-") {
            std::io::stdin().read_to_string(&mut text).context("reading standard input")?;
        } else {
            text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        }
        self.inputs.extend_from_slice(&Sha256::digest(text.as_bytes()));
        Ok(text)
    }

    fn graph(&mut self, path: &Path) -> Result<Graph> {
        let text = self.read(path)?;
        parse_graph(&text).with_context(|| format!("--in {}", path.display()))
    }

    fn ordering(&mut self, g: &Graph, path: Option<&Path>) -> Result<VertexOrdering> {
        let Some(path) = path else {
            return Ok(heuristic_ordering(g));
        };
        let text = self.read(path)?;
        let l = parse_ordering(&text).with_context(|| format!("--order {}", path.display()))?;
        if l.len() != g.n() {
            bail!("--order {}: order has {} entries but the graph has n = {}", path.display(), l.len(), g.n());
        }
        Ok(l)
    }

    fn timed<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.timings.insert(stage.to_string(), start.elapsed().as_secs_f64() * 1e3);
        out
    }

    fn flag(&mut self, name: &str, passed: bool) {
        self.checks.push(CheckRow {
            name: name.to_string(),
            passed,
            lhs: None,
            rhs: None,
        });
    }

    fn ineq(&mut self, name: &str, lhs: impl ToString, rhs: impl ToString, passed: bool) {
        self.checks.push(CheckRow {
            name: name.to_string(),
            passed,
            lhs: Some(lhs.to_string()),
            rhs: Some(rhs.to_string()),
        });
    }

    /// Prints the report with `result` merged at top level.
    fn finish(self, command: &[String], result: Value) -> Result<ExitCode> {
        let mut doc = Map::new();
        doc.insert("command".into(), json!(command));
        doc.insert("input_digest".into(), json!(hex(&Sha256::digest(&self.inputs))));
        match result {
            Value::Object(fields) => doc.extend(fields),
            other => {
                doc.insert("result".into(), other);
            }
        }
        let passed = self.checks.iter().all(|c| c.passed);
        doc.insert("checks".into(), serde_json::to_value(&self.checks)?);
        doc.insert("passed".into(), json!(passed));
        let digest = Sha256::digest(serde_json::to_vec(&doc)?);
        doc.insert("report_digest".into(), json!(hex(&digest)));
        doc.insert("timings_ms".into(), json!(self.timings));
        emit(&serde_json::to_string(&Value::Object(doc))?)?;
        Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
    }
}

/// One line on standard output; a closed pipe is not an error.
fn emit(line: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{line}").and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn pairs(it: impl IntoIterator<Item = (Vertex, Vertex)>) -> Vec<[Vertex; 2]> {
    it.into_iter().map(|(u, v)| [u, v]).collect()
}

fn write_dot(path: Option<&Path>, dot: impl FnOnce() -> String) -> Result<()> {
    if let Some(path) = path {
        fs::write(path, dot()).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn run(cli: Cli, argv: &[String]) -> Result<ExitCode> {
    let mut run = Run::default();
    let result = match cli.command {
        Command::Colnum { g: input, r, budget } => {
            let g = run.graph(&input.input)?;
            let l = run.ordering(&g, input.order.as_deref())?;
            let col = run.timed("col", || col_wrt(&g, &l, r));
            let adm = run.timed("adm", || adm_wrt_budget(&g, &l, r, budget))?;
            run.ineq("adm_r <= col_r", adm, col, adm <= col);
            if r >= 1 {
                let pow = (adm as f64).powi(r as i32);
                run.ineq("col_r <= adm_r^r", col, format!("{adm}^{r}"), (col as f64) <= pow);
            }
            json!({ "r": r, "order": l.order(), "col": col, "adm": adm })
        }
        Command::Spantree { g: input, r, budget, dot } => {
            let g = run.graph(&input.input)?;
            let l = run.ordering(&g, input.order.as_deref())?;
            let rep = run.timed("spantree", || low_degree_spanning_tree_budget(&g, &l, r, budget))?;
            run.flag("T is a spanning tree", rep.spanning_tree);
            run.ineq("max degree of T <= 3", rep.max_degree, 3, rep.max_degree <= 3);
            run.ineq("adm_r(G+F,L) <= 2 + 2 col_2r(G,L)", rep.adm_after, rep.bound, rep.bound_ok);
            if rep.components == 1 {
                let twice = 2 * rep.col_2r_before;
                run.ineq("adm_r(G+F,L) <= 2 col_2r(G,L)", rep.adm_after, twice, rep.adm_after <= twice);
            }
            write_dot(dot.as_deref(), || to_dot(&g, Some(&rep.f), None))?;
            serde_json::to_value(&rep)?
        }
        Command::Successor { g: input, r, budget, dot } => {
            let g = run.graph(&input.input)?;
            let l = run.ordering(&g, input.order.as_deref())?;
            let (s, rep) = run.timed("successor", || build_successor_budget(&g, &l, r, budget))?;
            successor_checks(&mut run, &rep);
            write_dot(dot.as_deref(), || to_dot(&g, None, Some(s.order())))?;
            serde_json::to_value(&rep)?
        }
        Command::Pipeline { input, r, budget, dot } => {
            let g = run.graph(&input)?;
            let (_, s, rep) = run.timed("pipeline", || succ_pipeline(&g, r, budget))?;
            let sr = &rep.successor;
            successor_checks(&mut run, sr);
            if let Some(ok) = rep.gen_col_ok {
                let a = sr.adm_tree.unwrap_or_default();
                let big = 40 * r + 1;
                run.ineq("adm <= col <= adm^(40r+1) on G+F", sr.col_tree, format!("{a}..{a}^{big}"), ok);
            }
            write_dot(dot.as_deref(), || to_dot(&g, None, Some(s.order())))?;
            serde_json::to_value(&rep)?
        }
        Command::Kwalk { g: input, k } => {
            let g = run.graph(&input.input)?;
            let tree = if g.is_tree() && g.max_degree() <= 3 {
                g
            } else {
                let l = run.ordering(&g, input.order.as_deref())?;
                degree3_spanning_tree(&g, &l)?.to_graph(g.n())?
            };
            let n = tree.n();
            let walk = three_walk_from_tree(&tree.edge_set(), n)?;
            let enc = run.timed("encode", || full_encoding(&tree, &walk, k))?;
            let succ = run.timed("interpret", || interpret_successor(&enc));
            let consecutive: Vec<(Vertex, Vertex)> = enc.w1().seq.windows(2).map(|w| (w[0], w[1])).collect();
            run.flag("interpreted relation = consecutive pairs of w_1", succ.iter().copied().eq(sorted(consecutive)));
            let list: Vec<_> = succ.iter().copied().collect();
            run.flag("interpreted relation is a successor relation", SuccessorRelation::from_pairs(n, &list).is_ok());
            if n <= KWALK_FO_MAX_N {
                let fo = run.timed("formulas", || fo_cross_check(&enc, true))?;
                run.flag("formula evaluation agrees", fo.levels_ok && fo.succ_ok == Some(true));
            }
            let e: BTreeMap<String, Vec<[Vertex; 2]>> = enc
                .e
                .iter()
                .map(|(&(a, b), set)| (format!("{a},{b}"), pairs(set.iter().copied())))
                .collect();
            let p: BTreeMap<String, Vec<Vertex>> =
                enc.p.iter().map(|(j, set)| (j.to_string(), set.iter().copied().collect())).collect();
            json!({ "k": k, "tree": GraphDoc::from(&tree), "walk": walk.seq, "E": e, "P": p, "succ": pairs(list) })
        }
        Command::Clique { action } => match action {
            CliqueAction::Eval { input } => {
                let text = run.read(&input)?;
                let e = parse_expression(&text).with_context(|| format!("--in {}", input.display()))?;
                let s = run.timed("eval", || eval_expression(&e));
                let relations: BTreeMap<&str, Vec<[usize; 2]>> =
                    s.relations.iter().map(|(k, v)| (k.as_str(), pairs(v.iter().copied()))).collect();
                json!({ "n": s.n(), "width": e.width(), "colours": s.colours, "relations": relations })
            }
            CliqueAction::Transform { input } => {
                let text = run.read(&input)?;
                let e = parse_expression(&text).with_context(|| format!("--in {}", input.display()))?;
                let t = run.timed("transform", || order_augment(&e))?;
                let rep = run.timed("verify", || verify_order_augmented(&e, &t));
                run.ineq("transformed width = 2k", rep.width_transformed, 2 * rep.width_original, rep.width_ok);
                run.flag("E preserved", rep.same_vertex_count && rep.edges_preserved);
                run.flag("< is a strict total order", rep.irreflexive && rep.antisymmetric && rep.transitive && rep.total);
                json!({ "expression": t.to_doc(), "verification": rep })
            }
        },
        Command::Poset { action: PosetAction::Chains { input } } => {
            let text = run.read(&input)?;
            let doc: PosetDoc = serde_json::from_str(&text).with_context(|| format!("--in {}", input.display()))?;
            let p = doc.to_poset().with_context(|| format!("--in {}: le", input.display()))?;
            let rep = run.timed("chains", || analyse_poset(&p))?;
            if let Some(b) = rep.brute_width {
                run.ineq("chain count = width", rep.width, b, rep.width == b);
            }
            run.flag("lifted order is total", rep.lifted_total);
            run.flag("lifted order extends every chain", rep.extends_within_chains);
            serde_json::to_value(&rep)?
        }
        Command::Encode { kind, input } => {
            let g = run.graph(&input)?;
            match kind {
                EncodeKind::Matching => {
                    let enc = run.timed("encode", || encode_matching_order(&g));
                    run.flag("host is a partial matching", is_partial_matching(&enc.host));
                    let back = run.timed("decode", || enc.decode())?;
                    run.flag("decoding returns the input", back == g);
                    serde_json::to_value(enc.to_doc())?
                }
                EncodeKind::Starforest => {
                    let enc = run.timed("encode", || encode_starforest_successor(&g));
                    run.flag("host is a star forest", is_star_forest(&enc.host));
                    let back = run.timed("decode", || enc.decode())?;
                    run.flag("decoding returns the input", back == g);
                    serde_json::to_value(enc.to_doc())?
                }
            }
        }
        Command::Verify { suite, seed } => {
            let reports = run_suites(&suite, seed)?;
            let mut suites = Vec::new();
            for rep in reports {
                eprintln!("{}", rep.summary());
                run.timings.insert(rep.suite.clone(), rep.elapsed_ms as f64);
                for c in &rep.checks {
                    run.checks.push(CheckRow {
                        name: format!("{}: {}", rep.suite, c.name),
                        passed: c.passed,
                        lhs: c.tightest.as_ref().map(|t| t.lhs.clone()),
                        rhs: c.tightest.as_ref().map(|t| t.rhs.clone()),
                    });
                }
                let mut v = serde_json::to_value(&rep)?;
                if let Value::Object(m) = &mut v {
                    m.remove("elapsed_ms");
                }
                suites.push(v);
            }
            json!({ "seed": seed, "suites": suites })
        }
        Command::Random { kind, seed, n, m, k, p } => {
            emit(&random_doc(kind, seed, n, m, k, p)?)?;
            return Ok(ExitCode::SUCCESS);
        }
        Command::Bench { seed, n, m, repeats } => {
            if n < 2 {
                bail!("--n must be at least 2");
            }
            let small = time_tree_u(seed, n, m, repeats)?;
            let large = time_tree_u(seed, 2 * n, 2 * m, repeats)?;
            run.timings.insert(format!("build_tree_U n={n}"), small.as_secs_f64() * 1e3);
            run.timings.insert(format!("build_tree_U n={}", 2 * n), large.as_secs_f64() * 1e3);
            let ratio = large.as_secs_f64() / small.as_secs_f64().max(1e-9);
            // a measurement, not part of the deterministic content
            run.timings.insert("doubling ratio".into(), ratio);
            json!({ "seed": seed, "n": n, "m": m, "repeats": repeats })
        }
    };
    run.finish(argv, result)
}

fn sorted(mut v: Vec<(Vertex, Vertex)>) -> Vec<(Vertex, Vertex)> {
    v.sort_unstable();
    v
}

fn successor_checks(run: &mut Run, rep: &SuccessorReport) {
    run.flag("consecutive vertices at distance <= 3 in T", rep.cube_path_ok);
    run.ineq("max degree of S-bar <= 2", rep.sbar_max_degree, 2, rep.sbar_max_degree <= 2);
    let lhs = rep.adm_after.map_or("budget exceeded".to_string(), |a| a.to_string());
    // an unevaluated left side is reported, not failed
    run.ineq("adm_r(G+S-bar,L) <= h(r,y)", lhs, &rep.bound, rep.bound_ok.unwrap_or(true));
}

fn random_doc(kind: RandomKind, seed: u64, n: usize, m: Option<usize>, k: usize, p: f64) -> Result<String> {
    let max_m = n * n.saturating_sub(1) / 2;
    Ok(match kind {
        RandomKind::Graph => serialize_graph(&random_graph(seed, n, m.unwrap_or(n.min(max_m)))?),
        RandomKind::Connected => {
            let m = m.unwrap_or((n + n / 2).min(max_m));
            serialize_graph(&random_connected_graph(seed, n, m)?)
        }
        RandomKind::Tree => serialize_graph(&random_tree(seed, n)),
        RandomKind::BoundedTree => {
            if k < 2 && n > 2 {
                bail!("--k must be at least 2 for a tree on {n} vertices");
            }
            serialize_graph(&random_bounded_degree_tree(seed, n, k))
        }
        RandomKind::Ordering => serialize_ordering(&random_ordering(seed, n)),
        RandomKind::Poset => {
            if !(0.0..=1.0).contains(&p) {
                bail!("--p must lie in [0, 1], got {p}");
            }
            serde_json::to_string(&random_poset(seed, n, p).to_doc())?
        }
        RandomKind::Clique => {
            if k == 0 || n == 0 {
                bail!("--k and --n must be positive for a clique expression");
            }
            serde_json::to_string(&random_clique_expression(seed, k, n).to_doc())?
        }
    })
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    let command: Vec<String> = argv.into_iter().skip(1).collect();
    let worker = std::thread::Builder::new()
        .stack_size(STACK_BYTES)
        .spawn(move || run(cli, &command))
        .map_err(|e| anyhow!("spawning worker thread: {e}"));
    let outcome = worker.and_then(|h| h.join().map_err(|_| anyhow!("worker thread panicked")));
    match outcome.and_then(|r| r) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
