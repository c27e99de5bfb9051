//! `groupwl`: command-line front end. Every command prints one JSON report on
//! stdout; diagnostics go to stderr.
//!
//! Exit codes: 0 completed, 1 usage or input error, 2 budget exceeded,
//! 3 invariant violation.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use groupwl_core::cayley::{self, CayleyGroup};
use groupwl_core::cfi::build_cfi;
use groupwl_core::cfigroups::{
    centralizer_profile_check, distinguish_cfi_groups, gadget_twist_generators, subgroup_certificate,
    toggled_edge_set, CfiGroupPair,
};
use groupwl_core::fpalgebra::binom2;
use groupwl_core::graphs::{self, Graph, IsoOutcome, Verdict};
use groupwl_core::mekler::MeklerGroup;
use groupwl_core::wlgroups::{game_solve, wl_group, Budget, Version};
use groupwl_core::Error;

#[derive(Parser)]
#[command(name = "groupwl", version, about = "Weisfeiler-Leman on graphs and groups, CFI graphs and Mekler groups")]
struct Cli {
    /// Worker threads (default: available parallelism). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Add wall-clock timings to the report (makes output non-reproducible).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// CFI graphs.
    #[command(subcommand)]
    Cfi(CfiCmd),
    /// Weisfeiler-Leman refinement.
    #[command(subcommand)]
    Wl(WlCmd),
    /// Bijective pebble game.
    #[command(subcommand)]
    Game(GameCmd),
    /// Mekler groups given by a graph and a prime.
    #[command(subcommand)]
    Mekler(MeklerCmd),
    /// Groups given by multiplication tables or constructor names.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Decide CFI group pairs with the parity discriminator
    #[command(subcommand)]
    Distinguish(DistinguishCmd),
    /// Numerically check the structural lemmas on a CFI group pair
    #[command(subcommand)]
    Check(CheckCmd),
}

#[derive(Subcommand)]
enum CfiCmd {
    /// Build CFI(base) with the given links twisted; writes the graph and a JSON sidecar.
    Build {
        base: PathBuf,
        /// Base edge `u-v` to twist (repeatable).
        #[arg(long = "twist", value_parser = parse_edge)]
        twist: Vec<(usize, usize)>,
        #[arg(short, long)]
        output: PathBuf,
        /// Sidecar path (default: OUTPUT with `.meta.json` appended).
        #[arg(long)]
        meta: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RefineBudget {
    #[arg(long)]
    max_rounds: Option<usize>,
    #[arg(long, default_value_t = 1 << 26)]
    max_tuples: u64,
    /// Include the full color histograms, not only their digest.
    #[arg(long)]
    histograms: bool,
}

#[derive(Subcommand)]
enum WlCmd {
    /// k-WL on two graph files.
    Graph {
        g1: PathBuf,
        g2: PathBuf,
        #[arg(short, default_value_t = 1)]
        k: usize,
        #[command(flatten)]
        budget: RefineBudget,
    },
    /// Group k-WL on two groups (table files or constructor names such as `Z2xZ4`, `D8`, `Q8`, `H3`).
    Group {
        g1: String,
        g2: String,
        #[arg(short, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value = "II")]
        version: Version,
        #[command(flatten)]
        budget: RefineBudget,
    },
}

#[derive(Subcommand)]
enum GameCmd {
    /// Decide the bijective pebble game on two groups.
    Solve {
        g1: String,
        g2: String,
        #[arg(long, default_value_t = 3)]
        pebbles: usize,
        #[arg(long, default_value = "II")]
        version: Version,
        #[arg(long, default_value_t = 1 << 24)]
        max_states: u64,
    },
}

#[derive(Args)]
struct MeklerSource {
    /// Graph file, or a JSON spec `{"graph": path, "p": prime}`.
    group: PathBuf,
    #[arg(short)]
    p: Option<u32>,
}

#[derive(Subcommand)]
enum MeklerCmd {
    /// Report the presentation; optionally write the Cayley table.
    Build {
        #[command(flatten)]
        src: MeklerSource,
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long, default_value_t = 6561)]
        max_order: u64,
    },
    /// Multiply two element literals such as `v1^2*v3*[v1,v2]`.
    Mul {
        #[command(flatten)]
        src: MeklerSource,
        x: String,
        y: String,
    },
    Centralizer {
        #[command(flatten)]
        src: MeklerSource,
        x: String,
    },
    /// Commuting graph on central cosets of bounded support.
    CommutingGraph {
        #[command(flatten)]
        src: MeklerSource,
        #[arg(long, default_value_t = 2)]
        cap: usize,
        #[arg(long, default_value_t = 200_000)]
        max_vertices: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Write the multiplication table of a group.
    Table {
        group: String,
        #[arg(short, long)]
        output: PathBuf,
    },
    Invariants {
        group: String,
    },
    /// Counts of k-generated subgroups by order.
    Profile {
        group: String,
        #[arg(short, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 1 << 20)]
        max_tuples: u64,
    },
    /// Exhaustive isomorphism search.
    Iso {
        g1: String,
        g2: String,
        #[arg(long, default_value_t = cayley::DEFAULT_GROUP_ISO_BUDGET)]
        budget: u64,
    },
}

#[derive(Args)]
struct PairSource {
    /// Base graph file, or a JSON spec `{"base": path, "p": prime, "twisted_edge": [u, v]}`.
    base: PathBuf,
    #[arg(short, default_value_t = 3)]
    p: u32,
    /// Designated twisted base edge (default: the first edge).
    #[arg(long, value_parser = parse_edge)]
    twist: Option<(usize, usize)>,
}

#[derive(Subcommand)]
enum DistinguishCmd {
    /// Parity discriminator on the CFI-group pair over a 3-regular base.
    CfiGroups {
        #[command(flatten)]
        src: PairSource,
    },
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Run the group-side invariant suites on a CFI-group pair.
    Lemmas {
        #[command(flatten)]
        src: PairSource,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        /// Random tuples for the twist pipeline.
        #[arg(long, default_value_t = 20)]
        tuples: usize,
        #[arg(short, default_value_t = 3)]
        k: usize,
    },
}

fn parse_edge(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once('-').ok_or_else(|| format!("expected u-v, got {s:?}"))?;
    let a = a.trim().parse().map_err(|_| format!("bad vertex {a:?}"))?;
    let b = b.trim().parse().map_err(|_| format!("bad vertex {b:?}"))?;
    Ok((a, b))
}

/// A failed invariant check (exit code 3).
#[derive(Debug)]
struct Violation(String);

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invariant violation: {}", self.0)
    }
}

impl std::error::Error for Violation {}

struct Ctx {
    seed: u64,
    inputs: Vec<Value>,
}

impl Ctx {
    fn read(&mut self, path: &Path) -> anyhow::Result<String> {
        let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        self.inputs.push(json!({ "path": path.display().to_string(), "sha256": hex(&Sha256::digest(&bytes)) }));
        String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))
    }

    fn graph(&mut self, path: &Path) -> anyhow::Result<Graph> {
        let text = self.read(path)?;
        graphs::parse_graph(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// A table file if `src` names an existing file, otherwise a constructor expression.
    fn group(&mut self, src: &str) -> anyhow::Result<CayleyGroup> {
        let path = Path::new(src);
        if path.is_file() {
            let text = self.read(path)?;
            return cayley::parse_table(&text).with_context(|| format!("parsing {src}"));
        }
        self.inputs.push(json!({ "constructor": src }));
        construct(src)
    }

    fn mekler(&mut self, src: &MeklerSource) -> anyhow::Result<MeklerGroup> {
        #[derive(Deserialize)]
        struct Spec {
            graph: PathBuf,
            p: u32,
        }
        let (graph, p) = if is_json(&src.group) {
            let spec: Spec = serde_json::from_str(&self.read(&src.group)?).context("group spec")?;
            (self.graph(&relative_to(&src.group, &spec.graph))?, spec.p)
        } else {
            let p = src.p.context("-p is required with a graph file")?;
            (self.graph(&src.group)?, p)
        };
        Ok(MeklerGroup::new(&graph, p)?)
    }

    fn pair(&mut self, src: &PairSource) -> anyhow::Result<CfiGroupPair> {
        #[derive(Deserialize)]
        struct Spec {
            base: PathBuf,
            p: u32,
            twisted_edge: Option<(usize, usize)>,
        }
        let (base, p, twist) = if is_json(&src.base) {
            let spec: Spec = serde_json::from_str(&self.read(&src.base)?).context("pair spec")?;
            (self.graph(&relative_to(&src.base, &spec.base))?, spec.p, spec.twisted_edge)
        } else {
            (self.graph(&src.base)?, src.p, src.twist)
        };
        Ok(CfiGroupPair::new(&base, p, twist)?)
    }
}

fn is_json(p: &Path) -> bool {
    p.extension().is_some_and(|e| e == "json")
}

fn relative_to(spec: &Path, target: &Path) -> PathBuf {
    match spec.parent() {
        Some(dir) if target.is_relative() => dir.join(target),
        _ => target.to_path_buf(),
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// `Z<n>`, `D<2n>`, `Q8`, `H<p>` (Heisenberg) and products joined by `x`.
fn construct(expr: &str) -> anyhow::Result<CayleyGroup> {
    let mut acc: Option<CayleyGroup> = None;
    for factor in expr.split('x') {
        let num = |s: &str| s.parse::<usize>().with_context(|| format!("bad group factor {factor:?}"));
        let g = match factor.split_at(factor.len().min(1)) {
            ("Z", n) => CayleyGroup::cyclic(num(n)?)?,
            ("D", n) => {
                let m = num(n)?;
                if m % 2 != 0 {
                    bail!("D{m}: dihedral groups are named by their (even) order");
                }
                CayleyGroup::dihedral(m / 2)?
            }
            ("Q", "8") => CayleyGroup::quaternion8(),
            ("H", p) => CayleyGroup::heisenberg(num(p)?)?,
            _ => bail!("{expr:?} is neither a file nor a group expression (Z4, D8, Q8, H3, Z2xZ4, ...)"),
        };
        acc = Some(match acc {
            None => g,
            Some(a) => CayleyGroup::direct_product(&a, &g),
        });
    }
    acc.context("empty group expression")
}

fn verdict_json(v: &Verdict, full: bool) -> anyhow::Result<Value> {
    let hist = serde_json::to_vec(&v.histograms)?;
    let mut out = json!({
        "outcome": v.outcome,
        "distinguished": v.distinguished(),
        "histogram_digest": hex(&Sha256::digest(&hist)),
    });
    if full {
        out["histograms"] = serde_json::to_value(&v.histograms)?;
    }
    Ok(out)
}

fn run(cmd: &Command, ctx: &mut Ctx) -> anyhow::Result<Value> {
    Ok(match cmd {
        Command::Cfi(CfiCmd::Build { base, twist, output, meta }) => {
            let base = ctx.graph(base)?;
            let cfi = build_cfi(&base, twist)?;
            std::fs::write(output, graphs::write_graph(&cfi.graph))
                .with_context(|| format!("writing {}", output.display()))?;
            let meta = meta.clone().unwrap_or_else(|| {
                let mut s = output.clone().into_os_string();
                s.push(".meta.json");
                s.into()
            });
            std::fs::write(&meta, cfi.metadata_json() + "\n").with_context(|| format!("writing {}", meta.display()))?;
            json!({
                "graph": output.display().to_string(),
                "metadata": meta.display().to_string(),
                "vertices": cfi.graph.vertex_count(),
                "edges": cfi.graph.edge_count(),
                "twisted": cfi.twisted,
            })
        }
        Command::Wl(WlCmd::Graph { g1, g2, k, budget }) => {
            let (a, b) = (ctx.graph(g1)?, ctx.graph(g2)?);
            let tuples = (a.vertex_count().max(b.vertex_count()) as u64).checked_pow(*k as u32);
            if tuples.is_none_or(|t| t > budget.max_tuples) {
                return Err(Error::Budget(format!("{k}-tuples exceed --max-tuples {}", budget.max_tuples)).into());
            }
            let v = graphs::graph_wl(&a, &b, *k, budget.max_rounds)?;
            json!({ "k": k, "verdict": verdict_json(&v, budget.histograms)? })
        }
        Command::Wl(WlCmd::Group { g1, g2, k, version, budget }) => {
            let (a, b) = (ctx.group(g1)?, ctx.group(g2)?);
            let b_ = Budget { max_tuples: budget.max_tuples, max_rounds: budget.max_rounds };
            let v = wl_group(&a, &b, *k, *version, &b_)?;
            json!({ "k": k, "version": version.to_string(), "verdict": verdict_json(&v, budget.histograms)? })
        }
        Command::Game(GameCmd::Solve { g1, g2, pebbles, version, max_states }) => {
            let (a, b) = (ctx.group(g1)?, ctx.group(g2)?);
            let w = game_solve(&a, &b, *pebbles, *version, *max_states)?;
            json!({ "pebbles": pebbles, "version": version.to_string(), "winner": w })
        }
        Command::Mekler(cmd) => mekler(cmd, ctx)?,
        Command::Group(cmd) => group(cmd, ctx)?,
        Command::Distinguish(DistinguishCmd::CfiGroups { src }) => {
            let pair = ctx.pair(src)?;
            let v = distinguish_cfi_groups(&pair)?;
            json!({
                "p": pair.p,
                "twisted_edge": pair.twisted_edge,
                "cfi_vertices": pair.n(),
                "distinguished": v.distinguished,
                "parity_bits": v.bits,
            })
        }
        Command::Check(CheckCmd::Lemmas { src, samples, tuples, k }) => lemmas(&ctx.pair(src)?, *samples, *tuples, *k, ctx.seed)?,
    })
}

fn mekler(cmd: &MeklerCmd, ctx: &mut Ctx) -> anyhow::Result<Value> {
    Ok(match cmd {
        MeklerCmd::Build { src, table, max_order } => {
            let g = ctx.mekler(src)?;
            let mut out = json!({
                "p": g.p(),
                "n": g.n(),
                "m": g.m(),
                "log_order": g.log_order(),
                "non_edges": g.non_edges(),
                "universal_vertices": g.universal_vertices(),
            });
            if let Some(path) = table {
                let t = g.to_cayley(*max_order)?;
                std::fs::write(path, cayley::write_table(&t)).with_context(|| format!("writing {}", path.display()))?;
                out["table"] = json!(path.display().to_string());
            }
            out
        }
        MeklerCmd::Mul { src, x, y } => {
            let g = ctx.mekler(src)?;
            let z = g.mul(&g.parse_element(x)?, &g.parse_element(y)?)?;
            json!({ "x": x, "y": y, "product": g.format_element(&z) })
        }
        MeklerCmd::Centralizer { src, x } => {
            let g = ctx.mekler(src)?;
            let e = g.parse_element(x)?;
            let basis = g.centralizer_basis(&e)?;
            let gens: Vec<String> =
                basis.iter().filter(|b| !b.gen_exp.is_zero()).map(|b| g.format_element(b)).collect();
            json!({
                "x": g.format_element(&e),
                "log_order": g.centralizer_log_order(&e),
                "generators_mod_derived": gens,
                "derived_log_order": g.m(),
            })
        }
        MeklerCmd::CommutingGraph { src, cap, max_vertices, output } => {
            let g = ctx.mekler(src)?;
            let cg = g.commuting_graph(*cap, *max_vertices)?;
            if let Some(path) = output {
                std::fs::write(path, graphs::write_graph(&cg.graph))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            json!({
                "cap": cap,
                "vertices": cg.graph.vertex_count(),
                "edges": cg.graph.edge_count(),
                "output": output.as_ref().map(|p| p.display().to_string()),
            })
        }
    })
}

fn group(cmd: &GroupCmd, ctx: &mut Ctx) -> anyhow::Result<Value> {
    Ok(match cmd {
        GroupCmd::Table { group, output } => {
            let g = ctx.group(group)?;
            std::fs::write(output, cayley::write_table(&g)).with_context(|| format!("writing {}", output.display()))?;
            json!({ "order": g.order(), "table": output.display().to_string() })
        }
        GroupCmd::Invariants { group } => serde_json::to_value(ctx.group(group)?.invariants())?,
        GroupCmd::Profile { group, k, max_tuples } => {
            let p = ctx.group(group)?.profile(*k, *max_tuples)?;
            let summary: Vec<Value> = p.summary().iter().map(|&(o, c)| json!({ "order": o, "count": c })).collect();
            json!({ "k": k, "subgroups": p.subgroup_count(), "types": p.types.len(), "by_order": summary })
        }
        GroupCmd::Iso { g1, g2, budget } => {
            let (a, b) = (ctx.group(g1)?, ctx.group(g2)?);
            match cayley::iso_oracle(&a, &b, *budget) {
                IsoOutcome::Isomorphic(phi) => json!({ "isomorphic": true, "map": phi }),
                IsoOutcome::NonIsomorphic => json!({ "isomorphic": false }),
                IsoOutcome::Budget => return Err(Error::Budget("isomorphism search budget exhausted".into()).into()),
            }
        }
    })
}

/// Group-side invariant suites on a CFI-group pair; any failure is a violation.
fn lemmas(pair: &CfiGroupPair, samples: usize, tuples: usize, k: usize, seed: u64) -> anyhow::Result<Value> {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // rank(B₂) = C(rank(B₁), 2) on random tuples of the free group.
    let mut wedge_bad = 0;
    for _ in 0..tuples {
        let t = pair.random_tuple(k, &mut rng);
        let (b1, b2) = pair.free.b_matrices(&t)?;
        if b2.rank() != binom2(b1.rank()) {
            wedge_bad += 1;
        }
    }
    if wedge_bad > 0 {
        failures.push(format!("{wedge_bad} tuples with rank(B2) != C(rank(B1), 2)"));
    }

    let mut centralizers = Vec::new();
    for (side, g) in [("G1", &pair.g1), ("G2", &pair.g2)] {
        let r = centralizer_profile_check(g, samples, seed)?;
        failures.extend(r.violations.iter().take(5).map(|v| format!("{side}: {v}")));
        centralizers.push(json!({
            "side": side,
            "center_log_order": r.center_log_order,
            "vertex_ratios_p4": r.vertex_log_ratios.iter().all(|&x| x == 4),
            "max_sample_log_ratio": r.max_sample_log_ratio,
            "violations": r.violations.len(),
        }));
    }

    let gens = gadget_twist_generators(&pair.gamma1)?;
    let mut noncommuting = 0;
    for (i, a) in gens.iter().enumerate() {
        a.validate(&pair.gamma1)?;
        noncommuting += gens[i + 1..].iter().filter(|b| a.compose(b) != b.compose(a)).count();
    }
    if noncommuting > 0 {
        failures.push(format!("{noncommuting} non-commuting gadget twist pairs"));
    }

    // Twisting columns then zeroing E(Γ₁) equals zeroing the twisted set first.
    let n = pair.n();
    let mut twist_bad = 0;
    for e in pair.base.edges() {
        let t = pair.random_tuple(k.max(2), &mut rng);
        let b2 = pair.free.b_matrices(&t)?.1;
        let idx = |(u, v): (usize, usize)| groupwl_core::fpalgebra::pair_index(n, u, v);
        let mut lhs = pair.twist_columns(&b2, e)?;
        lhs.zero_columns(pair.gamma1.graph.edges().map(idx));
        let mut rhs = b2;
        rhs.zero_columns(toggled_edge_set(&pair.gamma1, e)?.into_iter().map(idx));
        if lhs != pair.twist_columns(&rhs, e)? {
            twist_bad += 1;
        }
    }
    if twist_bad > 0 {
        failures.push(format!("twist/zero commutation fails on {twist_bad} edges"));
    }

    let batch: Vec<_> = (0..tuples).map(|_| pair.random_tuple(k, &mut rng)).collect();
    let reports = pair.phi_pipeline_batch(&batch)?;
    let found = reports.iter().filter(|r| r.edge.is_some()).count();
    let equal = reports.iter().filter(|r| r.equal).count();
    if equal < tuples {
        failures.push(format!("twist pipeline: {equal}/{tuples} certificate matches"));
    }
    let example = reports.first().map(|r| json!({ "edge": r.edge, "path": r.path, "rank": r.left.rank }));
    // Sanity anchor for the certificate: the untouched tuple against itself.
    if let Some(t) = batch.first() {
        let c = subgroup_certificate(&pair.free, t, pair.gamma1.graph.edges())?;
        if c != reports[0].left {
            failures.push("certificate is not deterministic".into());
        }
    }

    let parity = distinguish_cfi_groups(pair)?;
    if !parity.distinguished {
        failures.push(format!("parity bits {:?} do not differ", parity.bits));
    }

    let report = json!({
        "p": pair.p,
        "cfi_vertices": n,
        "base_edges": pair.base.edge_count(),
        "wedge_rank": { "tuples": tuples, "k": k, "failures": wedge_bad },
        "centralizers": centralizers,
        "gadget_twists": { "generators": gens.len(), "non_commuting_pairs": noncommuting },
        "twist_zero_commutation": { "edges": pair.base.edge_count(), "failures": twist_bad },
        "pipeline": { "tuples": tuples, "k": k, "edge_found": found, "certificates_equal": equal, "example": example },
        "parity": { "distinguished": parity.distinguished, "bits": parity.bits },
        "ok": failures.is_empty(),
    });
    if !failures.is_empty() {
        println!("{}", serde_json::to_string_pretty(&report)?);
        return Err(Violation(failures.join("; ")).into());
    }
    Ok(report)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<Violation>() {
            return 3;
        }
        match cause.downcast_ref::<Error>() {
            Some(Error::Budget(_)) => return 2,
            Some(Error::Validation(_)) => return 3,
            Some(_) => return 1,
            None => {}
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let command: Vec<String> = std::env::args().skip(1).collect();
    let mut ctx = Ctx { seed: cli.seed, inputs: Vec::new() };
    let start = Instant::now();
    match run(&cli.command, &mut ctx) {
        Ok(result) => {
            let mut report = json!({
                "command": command,
                "inputs": ctx.inputs,
                "seed": cli.seed,
                "result": result,
            });
            if cli.timings {
                report["timings"] = json!({ "total_seconds": start.elapsed().as_secs_f64() });
            }
            let text = serde_json::to_string_pretty(&report).expect("reports serialize");
            // A closed pipe (e.g. `| head`) is not an error worth a panic.
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{text}").and_then(|_| out.flush());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
