//! Command-line front end for `ptmoments`.
//!
//! Every subcommand prints one JSON document (default) or CSV with a header
//! row (`--format csv`). Exact rationals are written as `{"num": .., "den": ..}`
//! with decimal strings. Exit status is 0 on success, 1 when the library
//! refuses the input (ceilings, invalid parameters, failed checks) and 2 on
//! usage errors.

mod output;
mod parse;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ptmoments::exactmoments::{
    centered_moment_with, expected_mixed_moment_with, expected_moment_with, genus_expansion_from_table,
    high_moment_bound, variance_with, MixedMomentSpec,
};
use ptmoments::freeprob::{
    atoms, cumulants_from_moments, density, limit_moment, moments_from_cumulants, named_cumulants, support,
    CumulantSequence, MomentSequence,
};
use ptmoments::harerzagier::{
    cardinarity_suite, enumerate_involutions_by_genus, genus_strata, hz_epsilon, hzcor_check, identity1_check,
};
use ptmoments::meanders::{meander_tally_with_ceiling, MeanderConfig, DEFAULT_CEILING as MEANDER_CEILING};
use ptmoments::montecarlo::{
    estimates_to_csv, extreme_eigenvalue_experiment, mc_moment_run, meander_mc_estimate, spectrum_histogram,
};
use ptmoments::ncpartitions::{biane_inverse, biane_t, enumerate_nc, NoncrossingPartition};
use ptmoments::permgroup::{full_cycle, genus, on_geodesic, GenusKind};
use ptmoments::scalar::to_f64;
use ptmoments::{selfcheck, DistributionSpec, Error, Result, TableCache};

use output::{exact, CommandResult, Report, Table};

#[derive(Parser, Debug)]
#[command(name = "ptmoments", version, about = "Moments of partially transposed random bipartite states")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Worker threads for table builds and sampling (results do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Do not read or write the class-table cache directory.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Largest permutation degree for class tables.
    #[arg(long, global = true)]
    ceiling: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone, Copy)]
struct Dims {
    /// Environment dimension.
    #[arg(long)]
    l: u64,
    /// First subsystem dimension.
    #[arg(long)]
    m: u64,
    /// Second (transposed) subsystem dimension.
    #[arg(long)]
    n: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// E Z^(p) = (1/mn) E tr[(mn ρ^Γ)^p], exactly.
    Exact {
        #[command(flatten)]
        dims: Dims,
        #[arg(long)]
        p: usize,
    },
    /// E Π_i tr[(mn ρ^Γ)^θ_i] for a cycle type θ.
    Mixed {
        #[command(flatten)]
        dims: Dims,
        /// Comma-separated cycle lengths, e.g. 2,2.
        #[arg(long, value_delimiter = ',', required = true)]
        cycle_type: Vec<usize>,
    },
    /// Var Z^(p), exactly.
    Variance {
        #[command(flatten)]
        dims: Dims,
        #[arg(long)]
        p: usize,
    },
    /// (1/mn) E tr[(mn ρ^Γ − I)^p], with the high-moment bound when it applies.
    Centered {
        #[command(flatten)]
        dims: Dims,
        #[arg(long)]
        p: usize,
    },
    /// Moment sum regrouped by (|α|, g1, g2).
    Genus {
        #[command(flatten)]
        dims: Dims,
        #[arg(long)]
        p: usize,
    },
    /// Build or inspect a class-count table.
    Table {
        /// Degree of the full cycle.
        #[arg(long, required_unless_present = "cycle_type")]
        p: Option<usize>,
        /// Mixed cycle type instead of a full cycle.
        #[arg(long, value_delimiter = ',', conflicts_with = "p")]
        cycle_type: Option<Vec<usize>>,
        /// Print every (a,b,c,count) entry.
        #[arg(long)]
        entries: bool,
    },
    /// Limit-law moments, cumulants, densities.
    Limit(LimitArgs),
    /// Moment and cumulant sequences of each other.
    Transform {
        /// Comma-separated k_1,k_2,...
        #[arg(long, conflicts_with = "moments", required_unless_present = "moments")]
        cumulants: Option<String>,
        /// Comma-separated m_1,m_2,...
        #[arg(long)]
        moments: Option<String>,
    },
    /// Meander tallies, polynomials and single configurations.
    Meander {
        #[arg(long, required_unless_present = "upper")]
        q: Option<usize>,
        /// Report the polynomial coefficients.
        #[arg(long)]
        poly: bool,
        /// Evaluate M_q at this exact value.
        #[arg(long)]
        x: Option<String>,
        /// Upper arc system of one configuration, e.g. {{1,2},{3,4}}.
        #[arg(long, requires = "lower")]
        upper: Option<String>,
        /// Lower arc system of one configuration.
        #[arg(long, requires = "upper")]
        lower: Option<String>,
    },
    /// Genus counts of pairings and the related inequalities.
    Hz(HzArgs),
    /// Monte Carlo experiments (seed required).
    Mc(McArgs),
    /// Pooled eigenvalue histogram of mn ρ^Γ as CSV (seed required).
    Spectrum {
        #[command(flatten)]
        dims: Dims,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 40)]
        bins: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Permutation arithmetic in S_p (cycle notation, 1-based).
    Perm(PermArgs),
    /// Noncrossing partitions and the map to geodesic permutations.
    Nc(NcArgs),
    /// Run the built-in consistency checks.
    Check,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Regime {
    Semicircle,
    FreePoisson,
    FreeDifference,
    PureStateLimit,
    Regime1,
    LFixed,
    MFixed,
}

#[derive(Args, Debug)]
struct LimitArgs {
    #[arg(long, value_enum)]
    regime: Regime,
    /// Moment order.
    #[arg(long)]
    p: Option<usize>,
    /// All moments 0..=P.
    #[arg(long)]
    moments: Option<usize>,
    /// Free cumulants 1..=P (named laws only).
    #[arg(long)]
    cumulants: Option<usize>,
    /// Density of the continuous part at x.
    #[arg(long, allow_hyphen_values = true)]
    density: Option<f64>,
    /// Report support and atoms.
    #[arg(long)]
    support: bool,
    #[arg(long)]
    a: Option<String>,
    #[arg(long)]
    l: Option<String>,
    #[arg(long)]
    c: Option<String>,
    #[arg(long)]
    b: Option<String>,
    #[arg(long)]
    m0: Option<String>,
    #[arg(long)]
    mean: Option<String>,
    #[arg(long)]
    variance: Option<String>,
    #[arg(long)]
    rate: Option<String>,
    #[arg(long)]
    jump: Option<String>,
    #[arg(long)]
    x: Option<String>,
    #[arg(long)]
    y: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum HzWhat {
    /// ε_g(n) from the recursion.
    Epsilon,
    /// Direct count of pairings of [2n] by genus.
    Enumerate,
    /// ε_g(n) ≤ 4^(n−1) n^(3g).
    Hzcor,
    /// Fixed-point-free α ∈ S_p by total genus, with the stratum bound.
    Strata,
    /// The alternating binomial sum against C(p,t)(p/√D)^(p−t).
    Identity1,
}

#[derive(Args, Debug)]
struct HzArgs {
    #[arg(long, value_enum, default_value_t = HzWhat::Epsilon)]
    what: HzWhat,
    #[arg(long)]
    g: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    d: Option<u64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Experiment {
    /// Means and variances of Z^(1..p), with exact values alongside.
    Moments,
    /// Extreme eigenvalues of mn ρ^Γ along m = n, l = ⌈n²/a⌉.
    Edge,
    /// Matrix-model estimate of the meander polynomial M_q(l).
    Meander,
}

#[derive(Args, Debug)]
struct McArgs {
    #[arg(long, value_enum, default_value_t = Experiment::Moments)]
    experiment: Experiment,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long)]
    l: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    /// Ratio mn/l for the edge experiment.
    #[arg(long)]
    a: Option<String>,
    /// Comma-separated sizes for the edge experiment.
    #[arg(long, value_delimiter = ',')]
    n_list: Option<Vec<usize>>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum PermOp {
    Compose,
    Inverse,
    Cycles,
    Length,
    Distance,
    FullCycle,
    Geodesic,
    Genus,
}

#[derive(Args, Debug)]
struct PermArgs {
    #[arg(value_enum)]
    op: PermOp,
    /// Degree.
    #[arg(long)]
    p: usize,
    /// Operands in cycle notation, e.g. "(1,2,3)" or "(123)(45)".
    operands: Vec<String>,
    /// Which genus function, 1 or 2.
    #[arg(long, default_value_t = 1)]
    which: u8,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum NcOp {
    Count,
    List,
    Check,
    Biane,
    Inverse,
    EvenBlocks,
}

#[derive(Args, Debug)]
struct NcArgs {
    #[arg(value_enum)]
    op: NcOp,
    #[arg(long)]
    p: Option<usize>,
    /// Allowed block sizes, e.g. 1,2.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// A partition like {{1},{2,3}} or a permutation like (1)(236)(45).
    operand: Option<String>,
}

/// Runs the command line `args` (including the program name), writing to
/// the given streams, and returns the exit status.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let start = Instant::now();
    let result = match cli.threads {
        Some(0) => Err(Error::InvalidParameter("--threads must be at least 1".into())),
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(Error::InvalidParameter(format!("thread pool: {e}"))),
        },
        None => dispatch(&cli),
    };
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    match result {
        Ok(report) => {
            let failed = report.value.get("all_passed") == Some(&Value::Bool(false))
                || report.value.get("holds") == Some(&Value::Bool(false));
            let text = match cli.format {
                Format::Json => {
                    let doc = CommandResult {
                        command: report.command,
                        parameters: &report.parameters,
                        value: &report.value,
                        elapsed_ms,
                        cache_hit: report.cache_hit,
                    };
                    serde_json::to_string_pretty(&doc).expect("serializable") + "\n"
                }
                Format::Csv => report.table.to_csv(),
            };
            let _ = write!(out, "{text}");
            i32::from(failed)
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

/// [`run_with`] on the process's standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

fn cache_dir() -> Option<PathBuf> {
    if let Some(dir) = std::env::var_os("PTMOMENTS_CACHE").filter(|d| !d.is_empty()) {
        return Some(PathBuf::from(dir));
    }
    dirs::cache_dir().map(|d| d.join("ptmoments"))
}

fn make_cache(cli: &Cli) -> TableCache {
    let cache = match (cli.no_cache, cache_dir()) {
        (false, Some(dir)) => TableCache::with_dir(dir),
        _ => TableCache::in_memory(),
    };
    let cache = cache.threads(cli.threads);
    match cli.ceiling {
        Some(c) => cache.ceiling(c),
        None => cache,
    }
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidParameter(format!("--{flag} is required here")))
}

fn dims_params(r: Report, d: Dims) -> Report {
    r.param("l", d.l).param("m", d.m).param("n", d.n)
}

fn exact_report(command: &'static str, x: &ptmoments::ExactScalar) -> Report {
    let mut value = exact(x);
    value["approx"] = json!(to_f64(x));
    Report::new(command, value, Table::exact_row(x))
}

fn dispatch(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Exact { dims, p } => {
            let cache = make_cache(cli);
            let hit = if *p > 0 { cache.full_cycle_table(*p)?.1 } else { true };
            let v = expected_moment_with(&cache, dims.l, dims.m, dims.n, *p)?;
            Ok(dims_params(exact_report("exact", &v), *dims).param("p", p).cache_hit(hit))
        }
        Command::Mixed { dims, cycle_type } => {
            let cache = make_cache(cli);
            let spec = MixedMomentSpec::new(cycle_type.clone())?;
            let hit = cache.table_for_cycle_type(spec.cycle_type())?.1;
            let v = expected_mixed_moment_with(&cache, dims.l, dims.m, dims.n, &spec)?;
            Ok(dims_params(exact_report("mixed", &v), *dims).param("cycle_type", cycle_type).cache_hit(hit))
        }
        Command::Variance { dims, p } => {
            let cache = make_cache(cli);
            let hit = if *p > 0 { cache.table_for_cycle_type(&[*p, *p])?.1 } else { true };
            let v = variance_with(&cache, dims.l, dims.m, dims.n, *p)?;
            Ok(dims_params(exact_report("variance", &v), *dims).param("p", p).cache_hit(hit))
        }
        Command::Centered { dims, p } => {
            let cache = make_cache(cli);
            let v = centered_moment_with(&cache, dims.l, dims.m, dims.n, *p)?;
            let bound = high_moment_bound(dims.l, dims.m, dims.n, *p);
            let mut r = dims_params(exact_report("centered", &v), *dims).param("p", p);
            r.value["bound"] = json!(bound);
            if let Some(b) = bound {
                r.value["holds"] = json!(to_f64(&v) <= b);
            }
            r.table.header.push("bound".into());
            r.table.rows[0].push(bound.map(|b| b.to_string()).unwrap_or_default());
            Ok(r)
        }
        Command::Genus { dims, p } => {
            let cache = make_cache(cli);
            let (table, hit) = cache.full_cycle_table(*p)?;
            if dims.l == 0 || dims.m == 0 || dims.n == 0 {
                return Err(Error::ZeroDimension("l, m and n"));
            }
            let strata = genus_expansion_from_table(&table, dims.l, dims.m, dims.n);
            let mut t = Table::new(&["length", "g1", "g2", "count", "term_num", "term_den"]);
            let rows: Vec<Value> = strata
                .iter()
                .map(|s| {
                    let e = exact(&s.term);
                    t.push(vec![
                        s.length.to_string(),
                        s.g1.to_string(),
                        s.g2.to_string(),
                        s.count.to_string(),
                        e["num"].as_str().unwrap_or_default().to_string(),
                        e["den"].as_str().unwrap_or_default().to_string(),
                    ]);
                    json!({ "length": s.length, "g1": s.g1, "g2": s.g2, "count": s.count, "term": e })
                })
                .collect();
            Ok(dims_params(Report::new("genus", json!({ "strata": rows }), t), *dims).param("p", p).cache_hit(hit))
        }
        Command::Table { p, cycle_type, entries } => {
            let cache = make_cache(cli);
            let ct = match (p, cycle_type) {
                (Some(p), _) => vec![*p],
                (None, Some(ct)) => ct.clone(),
                (None, None) => unreachable!("clap requires one of them"),
            };
            let (table, hit) = cache.table_for_cycle_type(&ct)?;
            let mut t = Table::new(&["a", "b", "c", "count"]);
            let mut rows = Vec::new();
            for (&(a, b, c), &count) in table.entries() {
                t.push(vec![a.to_string(), b.to_string(), c.to_string(), count.to_string()]);
                rows.push(json!([a, b, c, count]));
            }
            let mut value = json!({
                "p": table.p(),
                "cycle_type": table.cycle_type(),
                "classes": table.entries().len(),
                "total": table.total(),
            });
            if *entries {
                value["entries"] = Value::Array(rows);
            }
            if let Some(dir) = cache.dir().filter(|_| table.is_full_cycle()) {
                value["path"] = json!(TableCache::path_for(dir, table.p()));
            }
            Ok(Report::new("table", value, t).param("cycle_type", ct).cache_hit(hit))
        }
        Command::Limit(args) => limit(args),
        Command::Transform { cumulants, moments } => transform(cumulants.as_deref(), moments.as_deref()),
        Command::Meander { q, poly, x, upper, lower } => meander(*q, *poly, x.as_deref(), upper.as_deref(), lower.as_deref()),
        Command::Hz(args) => hz(args),
        Command::Mc(args) => mc(args),
        Command::Spectrum { dims, samples, bins, seed } => {
            let h = spectrum_histogram(dims.l as usize, dims.m as usize, dims.n as usize, *samples, *bins, *seed)?;
            let mut t = Table::new(&["lo", "hi", "count", "density"]);
            let bins_json: Vec<Value> = (0..h.counts.len())
                .map(|b| {
                    t.push(vec![
                        h.edges[b].to_string(),
                        h.edges[b + 1].to_string(),
                        h.counts[b].to_string(),
                        h.density(b).to_string(),
                    ]);
                    json!({ "lo": h.edges[b], "hi": h.edges[b + 1], "count": h.counts[b], "density": h.density(b) })
                })
                .collect();
            Ok(dims_params(Report::new("spectrum", json!({ "bins": bins_json, "eigenvalues": h.total }), t), *dims)
                .param("samples", samples)
                .param("seed", seed))
        }
        Command::Perm(args) => perm(args),
        Command::Nc(args) => nc(args),
        Command::Check => {
            let cache = make_cache(cli);
            let outcomes = selfcheck::run_all(&cache);
            let all = outcomes.iter().all(|o| o.passed);
            let mut t = Table::new(&["check", "passed", "detail", "elapsed_ms"]);
            for o in &outcomes {
                t.push(vec![o.name.clone(), o.passed.to_string(), o.detail.clone(), o.elapsed_ms.to_string()]);
            }
            Ok(Report::new("check", json!({ "all_passed": all, "checks": outcomes }), t))
        }
    }
}

fn spec_from(args: &LimitArgs) -> Result<DistributionSpec> {
    let get = |v: &Option<String>, flag: &str| -> Result<ptmoments::ExactScalar> { parse::exact(&need(v.clone(), flag)?) };
    Ok(match args.regime {
        Regime::Semicircle => {
            DistributionSpec::Semicircle { mean: get(&args.mean, "mean")?, variance: get(&args.variance, "variance")? }
        }
        Regime::FreePoisson => DistributionSpec::FreePoisson { rate: get(&args.rate, "rate")?, jump: get(&args.jump, "jump")? },
        Regime::FreeDifference => DistributionSpec::FreeDifference { x: get(&args.x, "x")?, y: get(&args.y, "y")? },
        Regime::PureStateLimit => DistributionSpec::PureStateLimit { c: get(&args.c, "c")? },
        Regime::Regime1 => DistributionSpec::Regime1 { a: get(&args.a, "a")? },
        Regime::LFixed => DistributionSpec::LFixed { l: get(&args.l, "l")?, c: get(&args.c, "c")? },
        Regime::MFixed => DistributionSpec::MFixed { b: get(&args.b, "b")?, m: get(&args.m0, "m0")? },
    })
}

fn limit(args: &LimitArgs) -> Result<Report> {
    let spec = spec_from(args)?;
    let mut value = json!({ "spec": spec.to_string() });
    let mut t = Table::new(&["quantity", "order", "num", "den", "approx"]);
    let push_exact = |t: &mut Table, what: &str, k: usize, x: &ptmoments::ExactScalar| {
        let e = exact(x);
        t.push(vec![
            what.to_string(),
            k.to_string(),
            e["num"].as_str().unwrap_or_default().to_string(),
            e["den"].as_str().unwrap_or_default().to_string(),
            to_f64(x).to_string(),
        ]);
    };
    let mut any = false;
    if let Some(p) = args.p {
        let v = limit_moment(&spec, p)?;
        push_exact(&mut t, "moment", p, &v);
        value["moment"] = exact(&v);
        value["approx"] = json!(to_f64(&v));
        any = true;
    }
    if let Some(pmax) = args.moments {
        let mut list = Vec::new();
        for p in 0..=pmax {
            let v = limit_moment(&spec, p)?;
            push_exact(&mut t, "moment", p, &v);
            list.push(exact(&v));
        }
        value["moments"] = Value::Array(list);
        any = true;
    }
    if let Some(pmax) = args.cumulants {
        let k = named_cumulants(&spec, pmax)?;
        let mut list = Vec::new();
        for (i, v) in k.values().iter().enumerate() {
            push_exact(&mut t, "cumulant", i + 1, v);
            list.push(exact(v));
        }
        value["cumulants"] = Value::Array(list);
        any = true;
    }
    if let Some(x) = args.density {
        let d = density(&spec, x)?;
        t.push(vec!["density".into(), x.to_string(), String::new(), String::new(), d.to_string()]);
        value["density"] = json!({ "x": x, "value": d });
        any = true;
    }
    if args.support {
        let (lo, hi) = support(&spec)?;
        let at = atoms(&spec)?;
        t.push(vec!["support_lo".into(), String::new(), String::new(), String::new(), lo.to_string()]);
        t.push(vec!["support_hi".into(), String::new(), String::new(), String::new(), hi.to_string()]);
        for (loc, mass) in &at {
            t.push(vec!["atom".into(), loc.to_string(), String::new(), String::new(), mass.to_string()]);
        }
        value["support"] = json!([lo, hi]);
        value["atoms"] = json!(at.iter().map(|(l, m)| json!({ "location": l, "mass": m })).collect::<Vec<_>>());
        any = true;
    }
    if !any {
        return Err(Error::InvalidParameter("give at least one of --p, --moments, --cumulants, --density, --support".into()));
    }
    Ok(Report::new("limit", value, t).param("regime", spec.name()))
}

fn transform(cumulants: Option<&str>, moments: Option<&str>) -> Result<Report> {
    let mut t = Table::new(&["order", "num", "den"]);
    let row = |t: &mut Table, k: usize, x: &ptmoments::ExactScalar| {
        let e = exact(x);
        t.push(vec![
            k.to_string(),
            e["num"].as_str().unwrap_or_default().to_string(),
            e["den"].as_str().unwrap_or_default().to_string(),
        ]);
        e
    };
    if let Some(k) = cumulants {
        let k = parse::exact_list(k)?;
        let order = k.len();
        let m = moments_from_cumulants(&CumulantSequence::new(k), order)?;
        let list: Vec<Value> = (1..=order).map(|p| row(&mut t, p, m.get(p).expect("computed"))).collect();
        Ok(Report::new("transform", json!({ "moments": list }), t).param("from", "cumulants"))
    } else {
        let m = parse::exact_list(need(moments, "moments")?)?;
        let order = m.len();
        let mut seq = vec![ptmoments::scalar::int(1)];
        seq.extend(m);
        let k = cumulants_from_moments(&MomentSequence::new(seq), order)?;
        let list: Vec<Value> = k.values().iter().enumerate().map(|(i, v)| row(&mut t, i + 1, v)).collect();
        Ok(Report::new("transform", json!({ "cumulants": list }), t).param("from", "moments"))
    }
}

fn meander(q: Option<usize>, poly: bool, x: Option<&str>, upper: Option<&str>, lower: Option<&str>) -> Result<Report> {
    if let (Some(u), Some(l)) = (upper, lower) {
        let side = |s: &str| -> Result<NoncrossingPartition> {
            let part = parse::partition(s, None)?;
            NoncrossingPartition::try_from(part).map_err(|e| Error::MalformedPairPartition(e.to_string()))
        };
        let cfg = MeanderConfig::new(side(u)?, side(l)?)?;
        let k = cfg.components();
        let mut t = Table::new(&["q", "components"]);
        t.push(vec![cfg.order().to_string(), k.to_string()]);
        return Ok(Report::new("meander", json!({ "q": cfg.order(), "components": k }), t)
            .param("upper", u)
            .param("lower", l));
    }
    let q = need(q, "q")?;
    let tally = meander_tally_with_ceiling(q, MEANDER_CEILING)?;
    let coeffs: BTreeMap<String, u64> = tally.counts.iter().map(|(k, c)| (k.to_string(), *c)).collect();
    let mut value = json!({ "q": q, "total": tally.total() });
    value[if poly { "coefficients" } else { "counts" }] = json!(coeffs);
    let mut t = Table::new(&["components", "count"]);
    for (k, c) in &tally.counts {
        t.push(vec![k.to_string(), c.to_string()]);
    }
    if let Some(x) = x {
        let xv = parse::exact(x)?;
        let v = tally.evaluate(&xv);
        value["value"] = exact(&v);
        t = Table::exact_row(&v);
    }
    Ok(Report::new("meander", value, t).param("q", q))
}

fn hz(args: &HzArgs) -> Result<Report> {
    match args.what {
        HzWhat::Epsilon => {
            let (g, n) = (need(args.g, "g")?, need(args.n, "n")?);
            let v = ptmoments::ExactScalar::from_integer(hz_epsilon(g, n));
            Ok(exact_report("hz", &v).param("g", g).param("n", n))
        }
        HzWhat::Hzcor => {
            let (g, n) = (need(args.g, "g")?, need(args.n, "n")?);
            let holds = hzcor_check(g, n);
            let mut t = Table::new(&["g", "n", "epsilon", "holds"]);
            let e = hz_epsilon(g, n).to_string();
            t.push(vec![g.to_string(), n.to_string(), e.clone(), holds.to_string()]);
            Ok(Report::new("hz", json!({ "epsilon": e, "holds": holds }), t).param("g", g).param("n", n))
        }
        HzWhat::Enumerate => {
            let n = need(args.n, "n")?;
            let counts = enumerate_involutions_by_genus(n)?;
            let mut t = Table::new(&["g", "count", "recursion"]);
            let mut rows = serde_json::Map::new();
            for (g, c) in &counts {
                t.push(vec![g.to_string(), c.to_string(), hz_epsilon(*g, n).to_string()]);
                rows.insert(g.to_string(), json!(c));
            }
            Ok(Report::new("hz", json!({ "counts": rows }), t).param("n", n))
        }
        HzWhat::Strata => {
            let p = need(args.p, "p")?;
            let suite = cardinarity_suite(p)?;
            let total: u64 = genus_strata(p)?.values().sum();
            let mut t = Table::new(&["p", "h", "count", "holds"]);
            for s in &suite {
                t.push(vec![p.to_string(), s.h.to_string(), s.count.to_string(), s.holds.to_string()]);
            }
            let holds = suite.iter().all(|s| s.holds);
            Ok(Report::new("hz", json!({ "strata": suite, "fixed_point_free": total, "holds": holds }), t).param("p", p))
        }
        HzWhat::Identity1 => {
            let (p, tt, d) = (need(args.p, "p")?, need(args.t, "t")?, need(args.d, "d")?);
            let r = identity1_check(p, tt, d)?;
            let mut table = Table::new(&["p", "t", "d", "lhs_num", "lhs_den", "rhs", "holds"]);
            let e = exact(&r.lhs);
            table.push(vec![
                p.to_string(),
                tt.to_string(),
                d.to_string(),
                e["num"].as_str().unwrap_or_default().to_string(),
                e["den"].as_str().unwrap_or_default().to_string(),
                r.rhs.to_string(),
                r.holds.to_string(),
            ]);
            Ok(Report::new("hz", json!({ "lhs": e, "rhs": r.rhs, "holds": r.holds }), table)
                .param("p", p)
                .param("t", tt)
                .param("d", d))
        }
    }
}

fn mc(args: &McArgs) -> Result<Report> {
    match args.experiment {
        Experiment::Moments => {
            let (l, m, n, p) = (need(args.l, "l")?, need(args.m, "m")?, need(args.n, "n")?, need(args.p, "p")?);
            let run = mc_moment_run(l, m, n, p, args.samples, args.seed)?;
            let mut exact_means = Vec::new();
            for k in 1..=p {
                let v = ptmoments::exactmoments::expected_moment(l as u64, m as u64, n as u64, k).ok();
                exact_means.push(v.as_ref().map(exact));
            }
            let table = Table {
                header: vec![],
                rows: vec![],
            };
            let csv = estimates_to_csv(run.means.iter().chain(&run.variances));
            let mut r = Report::new("mc", json!({ "means": run.means, "variances": run.variances, "exact_means": exact_means }), table)
                .param("experiment", "moments")
                .param("l", l)
                .param("m", m)
                .param("n", n)
                .param("p", p)
                .param("samples", args.samples)
                .param("seed", args.seed);
            r.table = csv_table(&csv);
            Ok(r)
        }
        Experiment::Edge => {
            let a = parse::exact(&need(args.a.clone(), "a")?)?;
            let ns = need(args.n_list.clone(), "n-list")?;
            let rows = extreme_eigenvalue_experiment(&a, &ns, args.samples, args.seed)?;
            let csv = estimates_to_csv(rows.iter().flat_map(|r| [&r.min, &r.max]));
            let mut r = Report::new("mc", json!({ "sizes": rows }), Table::default())
                .param("experiment", "edge")
                .param("a", a.to_string())
                .param("samples", args.samples)
                .param("seed", args.seed);
            r.table = csv_table(&csv);
            Ok(r)
        }
        Experiment::Meander => {
            let (l, n, q) = (need(args.l, "l")?, need(args.n, "n")?, need(args.q, "q")?);
            let e = meander_mc_estimate(l, n, q, args.samples, args.seed)?;
            let target = meander_tally_with_ceiling(q, MEANDER_CEILING)
                .ok()
                .map(|t| to_f64(&t.evaluate(&ptmoments::scalar::int(l as i64))));
            let csv = estimates_to_csv([&e]);
            let mut r = Report::new("mc", json!({ "estimate": e, "meander_polynomial": target }), Table::default())
                .param("experiment", "meander")
                .param("l", l)
                .param("n", n)
                .param("q", q)
                .param("samples", args.samples)
                .param("seed", args.seed);
            r.table = csv_table(&csv);
            Ok(r)
        }
    }
}

fn csv_table(csv: &str) -> Table {
    let mut r = csv::Reader::from_reader(csv.as_bytes());
    let header = r.headers().map(|h| h.iter().map(str::to_string).collect()).unwrap_or_default();
    let rows = r.records().filter_map(|rec| rec.ok()).map(|rec| rec.iter().map(str::to_string).collect()).collect();
    Table { header, rows }
}

fn perm(args: &PermArgs) -> Result<Report> {
    let p = args.p;
    let ops: Vec<_> = args.operands.iter().map(|s| parse::permutation(p, s)).collect::<Result<_>>()?;
    let arity = match args.op {
        PermOp::FullCycle => 0,
        PermOp::Compose | PermOp::Distance => 2,
        PermOp::Geodesic => 3,
        _ => 1,
    };
    if ops.len() != arity {
        return Err(Error::InvalidParameter(format!("{:?} takes {arity} operand(s), got {}", args.op, ops.len())));
    }
    let value = match args.op {
        PermOp::Compose => json!(ops[0].compose(&ops[1])?.to_string()),
        PermOp::Inverse => json!(ops[0].inverse().to_string()),
        PermOp::Cycles => json!(ops[0].cycle_count()),
        PermOp::Length => json!(ops[0].length()),
        PermOp::Distance => json!(ops[0].distance(&ops[1])?),
        PermOp::FullCycle => json!(full_cycle(p)?.to_string()),
        PermOp::Geodesic => json!(on_geodesic(&ops[0], &ops[1], &ops[2])?),
        PermOp::Genus => {
            let kind = GenusKind::from_index(args.which)
                .ok_or_else(|| Error::InvalidParameter(format!("--which must be 1 or 2, got {}", args.which)))?;
            json!(genus(&ops[0], kind))
        }
    };
    let mut t = Table::new(&["result"]);
    t.push(vec![match &value {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }]);
    Ok(Report::new("perm", json!({ "result": value }), t)
        .param("op", format!("{:?}", args.op).to_lowercase())
        .param("p", p)
        .param("operands", &args.operands))
}

fn nc(args: &NcArgs) -> Result<Report> {
    let operand = || need(args.operand.clone(), "operand (positional)");
    let mut t = Table::new(&["result"]);
    let value = match args.op {
        NcOp::Count | NcOp::List => {
            let p = need(args.p, "p")?;
            let list = enumerate_nc(p, args.sizes.as_deref());
            if args.op == NcOp::Count {
                json!(list.len())
            } else {
                json!(list.iter().map(|t| t.to_string()).collect::<Vec<_>>())
            }
        }
        NcOp::Check => json!(parse::partition(&operand()?, args.p)?.is_noncrossing()),
        NcOp::EvenBlocks => json!(parse::partition(&operand()?, args.p)?.even_block_count()),
        NcOp::Biane => {
            let part = parse::partition(&operand()?, args.p)?;
            let nc = NoncrossingPartition::try_from(part)?;
            json!(biane_t(&nc).to_string())
        }
        NcOp::Inverse => {
            let p = need(args.p, "p")?;
            let s = parse::permutation(p, &operand()?)?;
            json!(biane_inverse(&s)?.to_string())
        }
    };
    match &value {
        Value::Array(items) => items.iter().for_each(|i| t.push(vec![i.as_str().unwrap_or_default().to_string()])),
        Value::String(s) => t.push(vec![s.clone()]),
        other => t.push(vec![other.to_string()]),
    }
    Ok(Report::new("nc", json!({ "result": value }), t).param("op", format!("{:?}", args.op).to_lowercase()))
}
