use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use magnusforge::embedding::{self, EmbeddingContext};
use magnusforge::groups::{CayleyTable, FreeAbelian, FreeAbelianElement, Group, Word};
use magnusforge::magnus::{build_cancellation_graph, magnus_image, rs_check, verify_with_strategy, PairingStrategy};
use magnusforge::metrics::{
    folner_defect, growth_count, min_folner_set, Ball, Domain, LamplighterLength, LengthFunction, TableLength,
    WeightedL1, FOLNER_SEARCH_LIMIT,
};
use magnusforge::parafree::{greedy_build_with, verify_greedy, GreedyConfig};
use magnusforge::wreath::{Lamplighter, LamplighterElement};

mod groupspec;
use groupspec::{parse_group, GroupSpec};

/// Exact verifiers for Magnus maps, parallelogram-free sets and wreath
/// embeddings.
#[derive(Parser, Debug)]
#[command(name = "magnusforge", version)]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output format; each subcommand accepts only some of these.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generalized Magnus image μ(f), (RS) and the bound ℓ(g) ≤ ‖w‖.
    Magnus(WordArgs),
    /// Cancellation graph of μ(f) in DOT.
    CancelGraph(WordArgs),
    /// Greedy parallelogram-free subset of ℤ≀ℤ.
    Parafree {
        #[arg(long)]
        radius: u32,
        #[arg(long)]
        radius_cap: Option<u32>,
        /// Record the solution counts n, #triples, #squares per radius.
        #[arg(long)]
        solutions: bool,
    },
    /// Embedding H ↪ G with certified bounds.
    Embed {
        #[arg(long)]
        group: String,
        /// `all` or an element index of H.
        #[arg(long, default_value = "all")]
        check: String,
        #[arg(long)]
        lengths: Option<String>,
        /// Smallest q to try for λ = 1/q.
        #[arg(long, default_value_t = 1)]
        lambda_hint: u64,
        #[arg(long, default_value_t = embedding::DEFAULT_RADIUS_CAP)]
        radius_cap: u32,
        /// Randomly padded words per element fed through the lower-bound chain.
        #[arg(long, default_value_t = 20)]
        padded: usize,
        /// Also check |h|_Y = ℓ(h)+1 by BFS in V.
        #[arg(long)]
        y_lengths: bool,
    },
    /// Growth counts #{h : ℓ(h) ≤ k} as CSV.
    Growth {
        #[arg(long)]
        group: String,
        /// Defaults to max ℓ for a finite group.
        #[arg(long)]
        levels: Option<u64>,
        #[command(flatten)]
        length: LengthArgs,
    },
    /// Følner defects of balls and an exhaustive minimal ε-Følner search.
    Folner {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 3)]
        radius: u32,
        /// Threshold ε as a fraction `p/q`.
        #[arg(long)]
        eps: Option<String>,
        /// Size limit for the exhaustive search.
        #[arg(long, default_value_t = 6)]
        max_size: usize,
        /// Radius of the ball used as candidate pool.
        #[arg(long, default_value_t = 1)]
        pool_radius: u32,
    },
}

#[derive(Args, Debug)]
struct LengthArgs {
    /// Comma-separated weights of the basis of ℤ^r.
    #[arg(long)]
    weights: Option<String>,
    /// Comma-separated length table of a finite group, by element index.
    #[arg(long)]
    lengths: Option<String>,
}

#[derive(Args, Debug)]
struct WordArgs {
    #[arg(long)]
    group: String,
    /// Tokens `xi` or `xi^k`, xi mapping to the i-th generator of H.
    #[arg(long, allow_hyphen_values = true)]
    word: String,
    #[command(flatten)]
    length: LengthArgs,
    #[arg(long, value_enum, default_value_t = Strategy::Forward)]
    strategy: Strategy,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Strategy {
    Forward,
    Reverse,
}

impl From<Strategy> for PairingStrategy {
    fn from(s: Strategy) -> Self {
        match s {
            Strategy::Forward => PairingStrategy::Forward,
            Strategy::Reverse => PairingStrategy::Reverse,
        }
    }
}

/// Input the user got wrong; exits with status 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage<T>(r: Result<T>) -> Result<T> {
    r.map_err(|e| anyhow!(Usage(format!("{e:#}"))))
}

/// A rendered report and whether every check in it passed.
struct Outcome {
    output: String,
    ok: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("MAGNUSFORGE_LOG", "error"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.output);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let input_error = e.downcast_ref::<Usage>().is_some()
                || matches!(
                    e.downcast_ref::<magnusforge::Error>(),
                    Some(
                        magnusforge::Error::Parse(_)
                            | magnusforge::Error::InvalidGroup(_)
                            | magnusforge::Error::InvalidLength(_)
                            | magnusforge::Error::UnassignedGenerator(_)
                    )
                );
            ExitCode::from(if input_error { 2 } else { 1 })
        }
    }
}

fn check_format(cli: &Cli, allowed: &[Format]) -> Result<Format> {
    match cli.format {
        None => Ok(allowed[0]),
        Some(f) if allowed.contains(&f) => Ok(f),
        Some(f) => Err(anyhow!(Usage(format!("format {f:?} is not available for this subcommand")))),
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Magnus(args) => {
            check_format(cli, &[Format::Json])?;
            with_word_group(args, |ctx| ctx.magnus_report())
        }
        Command::CancelGraph(args) => {
            check_format(cli, &[Format::Dot])?;
            with_word_group(args, |ctx| ctx.cancel_graph(args.strategy.into()))
        }
        Command::Parafree {
            radius,
            radius_cap,
            solutions,
        } => {
            check_format(cli, &[Format::Json])?;
            parafree(*radius, radius_cap.unwrap_or((*radius).max(1)), *solutions)
        }
        Command::Embed {
            group,
            check,
            lengths,
            lambda_hint,
            radius_cap,
            padded,
            y_lengths,
        } => {
            check_format(cli, &[Format::Json])?;
            let GroupSpec::Finite(table) = usage(parse_group(group))? else {
                bail!(Usage("embed needs a finite group".into()));
            };
            let ell = usage(table_length(&table, lengths.as_deref()))?;
            embed(cli.seed, &table, &ell, check, *lambda_hint, *radius_cap, *padded, *y_lengths)
        }
        Command::Growth { group, levels, length } => {
            check_format(cli, &[Format::Csv])?;
            growth(&usage(parse_group(group))?, *levels, length)
        }
        Command::Folner {
            group,
            radius,
            eps,
            max_size,
            pool_radius,
        } => {
            check_format(cli, &[Format::Json])?;
            let eps = eps.as_deref().map(parse_ratio).transpose();
            folner(&usage(parse_group(group))?, *radius, usage(eps)?, *max_size, *pool_radius)
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|t| t.trim().parse::<u64>().with_context(|| format!("bad number `{t}`")))
        .collect()
}

fn parse_ratio(s: &str) -> Result<Ratio<u64>> {
    let (p, q) = s.split_once('/').unwrap_or((s, "1"));
    let p: u64 = p.trim().parse().context("bad numerator")?;
    let q: u64 = q.trim().parse().context("bad denominator")?;
    if q == 0 {
        bail!("zero denominator");
    }
    Ok(Ratio::new(p, q))
}

fn table_length(table: &CayleyTable, lengths: Option<&str>) -> Result<TableLength> {
    match lengths {
        None => Ok(TableLength::word_length(table)),
        Some(s) => Ok(TableLength::new(table, parse_list(s)?)?),
    }
}

/// A group with a length function and a generator assignment, ready for
/// word-based subcommands.
struct WordContext<'a, G: Group, L> {
    group: G,
    ell: L,
    assignment: BTreeMap<usize, G::Elem>,
    word: Word,
    name: &'a dyn Fn(&G::Elem) -> String,
    description: String,
}

fn with_word_group(args: &WordArgs, f: impl Fn(&dyn WordCommands) -> Result<Outcome>) -> Result<Outcome> {
    let spec = usage(parse_group(&args.group))?;
    let word = usage(Word::parse(&args.word).map_err(anyhow::Error::from))?;
    let max_gen = word.letters().iter().map(|l| l.gen).max().unwrap_or(0);
    match spec {
        GroupSpec::FreeAbelian(rank) => {
            let weights = match &args.length.weights {
                Some(w) => usage(parse_list(w))?,
                None => Vec::new(),
            };
            let ell = usage(WeightedL1::new(weights).map_err(anyhow::Error::from))?;
            let assignment = assign(rank, max_gen, FreeAbelianElement::basis)?;
            let name = |e: &FreeAbelianElement| e.render("h");
            f(&WordContext {
                group: FreeAbelian::new(rank),
                ell,
                assignment,
                word,
                name: &name,
                description: spec.describe(),
            })
        }
        GroupSpec::Finite(table) => {
            let ell = usage(table_length(&table, args.length.lengths.as_deref()))?;
            let gens = table.generators().to_vec();
            let assignment = assign(gens.len(), max_gen, |i| gens[i])?;
            let labels: Vec<String> = table.elements().map(|e| table.label(e).to_string()).collect();
            let name = move |e: &usize| labels[*e].clone();
            f(&WordContext {
                description: table.name(),
                group: table,
                ell,
                assignment,
                word,
                name: &name,
            })
        }
        GroupSpec::Lamplighter => bail!(Usage("Magnus maps need an abelian or finite group here".into())),
    }
}

fn assign<E>(count: usize, max_gen: usize, gen: impl Fn(usize) -> E) -> Result<BTreeMap<usize, E>> {
    if max_gen > count {
        bail!(Usage(format!("word uses x{max_gen} but the group has {count} generators")));
    }
    Ok((1..=count).map(|i| (i, gen(i - 1))).collect())
}

trait WordCommands {
    fn magnus_report(&self) -> Result<Outcome>;
    fn cancel_graph(&self, strategy: PairingStrategy) -> Result<Outcome>;
}

impl<G, L> WordCommands for WordContext<'_, G, L>
where
    G: Group + Clone,
    L: LengthFunction<G::Elem>,
{
    fn magnus_report(&self) -> Result<Outcome> {
        let name = self.name;
        let m = magnus_image(&self.group, &self.ell, &self.assignment, &self.word)?;
        let rs = rs_check(&self.group, &m);
        let t: BTreeMap<String, String> = m
            .t
            .iter()
            .map(|(i, t)| (format!("t{i}"), t.render_with(&self.group, name)))
            .collect();
        let s: Option<BTreeMap<String, String>> = rs.s.as_ref().map(|s| {
            s.iter()
                .map(|(i, s)| (format!("s{i}"), s.render_with(&self.group, name)))
                .collect()
        });
        let (bound, ok, failure) = match verify_with_strategy(&self.group, &m, &self.ell, PairingStrategy::Forward) {
            Ok((lg, norm, arc)) => (json!([lg, norm, arc]), rs.holds, None),
            Err(e) => (Value::Null, false, Some(e.to_string())),
        };
        let report = json!({
            "group": self.description,
            "word": self.word.to_string(),
            "image": m.to_json(&self.group),
            "t": t,
            "g": name(&m.g),
            "norm": m.norm(),
            "rs": {"holds": rs.holds, "s": s},
            "bound": bound,
            "holds": ok,
            "failure": failure,
        });
        Ok(Outcome {
            output: pretty(&report),
            ok,
        })
    }

    fn cancel_graph(&self, strategy: PairingStrategy) -> Result<Outcome> {
        let m = magnus_image(&self.group, &self.ell, &self.assignment, &self.word)?;
        let graph = build_cancellation_graph(&self.group, &m, strategy)?;
        let ok = graph.check_invariants(&self.group, &self.ell).is_ok();
        Ok(Outcome {
            output: graph.to_dot(self.name),
            ok,
        })
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn parafree(radius: u32, radius_cap: u32, solutions: bool) -> Result<Outcome> {
    let set = usage(
        greedy_build_with(GreedyConfig {
            radius,
            radius_cap,
            record_solutions: solutions,
        })
        .map_err(anyhow::Error::from),
    )?;
    let verification = verify_greedy(&set);
    let ok = verification.passed() || radius == 0;
    let counts: Vec<usize> = set.growth_log.iter().map(|l| l.members).collect();
    let report = json!({
        "radius": radius,
        "members": set.members,
        "counts": counts,
        "fitted_c": verification.fitted_c,
        "fitted_k": verification.fitted_k,
        "log": set.growth_log,
        "verification": verification,
        "passed": ok,
    });
    Ok(Outcome {
        output: pretty(&report),
        ok,
    })
}

#[allow(clippy::too_many_arguments)]
fn embed(
    seed: u64,
    table: &CayleyTable,
    ell: &TableLength,
    check: &str,
    lambda_hint: u64,
    radius_cap: u32,
    padded: usize,
    y_lengths: bool,
) -> Result<Outcome> {
    let targets: Vec<usize> = if check == "all" {
        table.elements().collect()
    } else {
        let h: usize = usage(check.parse().context("--check takes `all` or an element index"))?;
        if h >= table.order() {
            bail!(Usage(format!("element {h} is out of range")));
        }
        vec![h]
    };
    let ctx = embedding::build_context(table, ell, lambda_hint, radius_cap)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut elements = Vec::new();
    let mut ok = true;
    for h in targets {
        let r = embedding::check_element(&ctx, h, padded, &mut rng);
        match r {
            Ok(r) => {
                ok &= r.passed();
                elements.push(serde_json::to_value(&r)?);
            }
            Err(e) => {
                ok = false;
                elements.push(json!({"h": h, "error": e.to_string()}));
            }
        }
    }
    let y = if y_lengths {
        match embedding::y_length_check_all(&ctx, radius_cap) {
            Ok(v) => json!(v
                .iter()
                .map(|(h, d, want)| json!({"h": h, "y_length": d, "ell_plus_one": want}))
                .collect::<Vec<_>>()),
            Err(e) => {
                ok = false;
                json!({"error": e.to_string()})
            }
        }
    } else {
        Value::Null
    };
    info!("checked embedding of {}", table.name());
    let report = json!({
        "group": table.name(),
        "order": table.order(),
        "lambda": format!("1/{}", ctx.q),
        "theta": ctx.theta().to_string(),
        "radius": ctx.radius,
        "a": ctx.a,
        "c": ctx.c,
        "c_below_max_a_3": ctx.c < ctx.a.max(3.0),
        "pairing": pairing_json(&ctx),
        "elements": elements,
        "y_lengths": y,
        "passed": ok,
    });
    Ok(Outcome {
        output: pretty(&report),
        ok,
    })
}

fn pairing_json(ctx: &EmbeddingContext) -> Value {
    json!(ctx
        .pairs
        .iter()
        .enumerate()
        .map(|(i, p)| json!({
            "i": i + 1,
            "h": p.h,
            "kind": p.kind,
            "w": p.w,
            "w_word": p.w_word.render_with(embedding::x_name),
        }))
        .collect::<Vec<_>>())
}

fn growth(spec: &GroupSpec, levels: Option<u64>, length: &LengthArgs) -> Result<Outcome> {
    let required = || levels.ok_or_else(|| anyhow!(Usage("--levels is required for infinite groups".into())));
    let report = match spec {
        GroupSpec::Finite(table) => {
            let ell = usage(table_length(table, length.lengths.as_deref()))?;
            let levels = levels.unwrap_or(ell.max());
            growth_count(&ell, &Domain::finite(table.elements().collect()), levels)?
        }
        GroupSpec::FreeAbelian(rank) => {
            let weights = match &length.weights {
                Some(w) => usage(parse_list(w))?,
                None => Vec::new(),
            };
            let ell = usage(WeightedL1::new(weights).map_err(anyhow::Error::from))?;
            let levels = required()?;
            let group = FreeAbelian::new(*rank);
            let ball = Ball::enumerate(&group, &group.basis(), levels as u32);
            growth_count(&ell, &Domain::ball(ball.elements().to_vec(), levels), levels)?
        }
        GroupSpec::Lamplighter => {
            let levels = required()?;
            let m = Lamplighter;
            let ball = Ball::enumerate(&m, &m.generators(), levels as u32);
            growth_count(&LamplighterLength, &Domain::ball(ball.elements().to_vec(), levels), levels)?
        }
    };
    let mut out = String::from("level,count,fitted_a\n");
    for (k, (c, a)) in report.counts.iter().zip(&report.fitted).enumerate() {
        let _ = writeln!(out, "{k},{c},{a:.6}");
    }
    let ok = report.witnesses(report.fitted_a());
    Ok(Outcome { output: out, ok })
}

fn folner(spec: &GroupSpec, radius: u32, eps: Option<Ratio<u64>>, max_size: usize, pool_radius: u32) -> Result<Outcome> {
    if eps.is_some() && max_size > FOLNER_SEARCH_LIMIT {
        bail!(Usage(format!("--max-size is limited to {FOLNER_SEARCH_LIMIT}")));
    }
    match spec {
        GroupSpec::Finite(table) => {
            let gens = table.generators().to_vec();
            let labels: Vec<String> = table.elements().map(|e| table.label(e).to_string()).collect();
            folner_report(table, &gens, radius, eps, max_size, pool_radius, |e| json!(labels[*e]))
        }
        GroupSpec::FreeAbelian(rank) => {
            let group = FreeAbelian::new(*rank);
            folner_report(&group, &group.basis(), radius, eps, max_size, pool_radius, |e| json!(e.render("h")))
        }
        GroupSpec::Lamplighter => {
            let m = Lamplighter;
            folner_report(&m, &m.generators(), radius, eps, max_size, pool_radius, |e: &LamplighterElement| {
                json!(e)
            })
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn folner_report<G: Group>(
    group: &G,
    gens: &[G::Elem],
    radius: u32,
    eps: Option<Ratio<u64>>,
    max_size: usize,
    pool_radius: u32,
    render: impl Fn(&G::Elem) -> Value,
) -> Result<Outcome> {
    let ball = Ball::enumerate(group, gens, radius);
    let mut balls = Vec::new();
    for r in 0..=radius {
        let members: Vec<G::Elem> = (0..=r).flat_map(|s| ball.sphere(s).iter().cloned()).collect();
        let d = folner_defect(group, gens, &members)?;
        balls.push(json!({"radius": r, "size": members.len(), "defect": d.to_string(), "defect_f64": ratio_f64(d)}));
    }
    let search = match eps {
        None => Value::Null,
        Some(eps) => {
            let pool = Ball::enumerate(group, gens, pool_radius);
            let found = min_folner_set(group, gens, pool.elements(), eps, max_size)?;
            json!({
                "eps": eps.to_string(),
                "pool_size": pool.len(),
                "max_size": max_size,
                "set": found.as_ref().map(|s| s.iter().map(&render).collect::<Vec<_>>()),
                "size": found.as_ref().map(Vec::len),
            })
        }
    };
    let report = json!({
        "group": group.name(),
        "generators": gens.iter().map(&render).collect::<Vec<_>>(),
        "balls": balls,
        "search": search,
    });
    Ok(Outcome {
        output: pretty(&report),
        ok: true,
    })
}

fn ratio_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}
