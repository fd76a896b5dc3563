//! Subcommands. Each resolves its flags against the config file, fills in
//! defaults, and records the effective values in its output.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, ValueEnum};
use mstgrid::asymptotics::SeriesFamily;
use mstgrid::bipartite::avg_stretch;
use mstgrid::prob::{prob_exact_dual_with, prob_exact_with};
use mstgrid::rational::to_f64;
use mstgrid::rng::derive_seed;
use mstgrid::{
    a_statistic, centipede, decay_lower_bound, family_power_series, fractal, fractal_p_infinity,
    prob_estimate, sample_kruskal, sample_wilson, BipartiteCompanion, ExactGuards, FamilyKind,
    FamilySpec, Graph, ProbEstimate, SpanningTree, TreeSpec, TreeStats,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::resolve;
use crate::CliError;

const VERSION: &str = env!("CARGO_PKG_VERSION");
const DEFAULT_SEED: u64 = 0;
const DEFAULT_SAMPLES: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TreeFormat {
    Json,
    Ascii,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbMode {
    Exact,
    ExactDual,
    Estimate,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct TreeArgs {
    /// centipede, double-spiral, fractal, kruskal or wilson.
    #[arg(long)]
    pub family: Option<String>,
    /// Grid side.
    #[arg(long)]
    pub n: Option<usize>,
    /// Fractal level (side 2^k).
    #[arg(long)]
    pub k: Option<usize>,
    /// Seed for the random families.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub format: Option<TreeFormat>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ProbArgs {
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Tree JSON file, as written by `mstgrid tree`, instead of a family.
    #[arg(long)]
    pub tree: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub mode: Option<ProbMode>,
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub max_exact_m: Option<usize>,
    #[arg(long)]
    pub max_exact_n: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ScatterArgs {
    #[arg(long)]
    pub n: Option<usize>,
    /// Trees drawn from each sampler.
    #[arg(long)]
    pub trees: Option<usize>,
    /// Random orders per probability estimate.
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct DecayArgs {
    /// centipede, double-spiral, fractal or uniform.
    #[arg(long)]
    pub family: Option<String>,
    /// Largest degree kept in the power series.
    #[arg(long)]
    pub d_max: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<TableFormat>,
    /// Intervals of the `x,f` table in CSV output.
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ConjectureArgs {
    /// centipede, double-spiral or fractal.
    #[arg(long)]
    pub family: Option<String>,
    /// Comma-separated grid sides.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<Value, CliError> {
    serde_json::to_value(value).map_err(|e| CliError::Internal(e.to_string()))
}

fn json_report(
    command: &str,
    seed: Option<u64>,
    config: &impl Serialize,
    body: Value,
) -> Result<String, CliError> {
    let mut report = json!({
        "command": command,
        "version": VERSION,
        "seed": seed,
        "config": to_json(config)?,
    });
    if let (Value::Object(r), Value::Object(b)) = (&mut report, body) {
        r.extend(b);
    }
    let mut text =
        serde_json::to_string_pretty(&report).map_err(|e| CliError::Internal(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

/// First line of every CSV and ASCII output.
fn comment_header(
    schema: &str,
    seed: Option<u64>,
    config: &impl Serialize,
) -> Result<String, CliError> {
    let seed = seed.map_or("none".to_string(), |s| s.to_string());
    Ok(format!(
        "# mstgrid {VERSION} schema={schema} seed={seed} config={}\n",
        to_json(config)?
    ))
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("missing --{flag}")))
}

fn log2_side(n: usize) -> Result<usize, CliError> {
    if n >= 2 && n.is_power_of_two() {
        Ok(n.trailing_zeros() as usize)
    } else {
        Err(CliError::Usage(format!(
            "fractal side must be a power of two, got {n}"
        )))
    }
}

/// Family member from `--family`, `--n`/`--k` and the seed.
fn family_spec(
    family: &str,
    n: Option<usize>,
    k: Option<usize>,
    seed: u64,
) -> Result<FamilySpec, CliError> {
    let kind: FamilyKind = family.parse()?;
    let size = match kind {
        FamilyKind::Fractal => match (k, n) {
            (Some(k), _) => k,
            (None, Some(n)) => log2_side(n)?,
            (None, None) => return Err(CliError::Usage("missing --k".into())),
        },
        _ => require(n, "n")?,
    };
    let spec = FamilySpec::new(kind, size);
    Ok(if kind.is_random() {
        spec.with_seed(seed)
    } else {
        spec
    })
}

pub fn tree(flags: &TreeArgs, config: Option<&Path>) -> Result<(), CliError> {
    let mut args = resolve(flags, config)?;
    let family = require(args.family.clone(), "family")?;
    let seed = *args.seed.get_or_insert(DEFAULT_SEED);
    let format = *args.format.get_or_insert(TreeFormat::Json);
    let spec = family_spec(&family, args.n, args.k, seed)?;
    let t = spec.generate()?;
    let b = BipartiteCompanion::from_tree(&t);
    let text = match format {
        TreeFormat::Json => json_report(
            "tree",
            Some(seed),
            &args,
            json!({
                "tree": to_json(&t.to_spec())?,
                "stats": to_json(&TreeStats::compute(&t, &b))?,
            }),
        )?,
        TreeFormat::Ascii => {
            let art = t
                .render_ascii()
                .ok_or_else(|| CliError::Internal("grid tree without a grid host".into()))?;
            comment_header("tree-ascii/1", Some(seed), &args)? + &art
        }
        TreeFormat::Csv => {
            let dm = b.degree_mass()?;
            comment_header("degree-mass/1", Some(seed), &args)? + &dm.to_csv()
        }
    };
    emit(&text, args.out.as_deref())
}

fn read_tree(path: &Path) -> Result<SpanningTree, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let inner = value.get("tree").cloned().unwrap_or(value);
    let spec: TreeSpec = serde_json::from_value(inner)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    Ok(spec.build()?)
}

pub fn prob(flags: &ProbArgs, config: Option<&Path>) -> Result<(), CliError> {
    let mut args = resolve(flags, config)?;
    let seed = *args.seed.get_or_insert(DEFAULT_SEED);
    let mode = *args.mode.get_or_insert(ProbMode::Exact);
    let t = match (&args.tree, &args.family) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "give either --tree or --family, not both".into(),
            ))
        }
        (Some(path), None) => read_tree(path)?,
        (None, Some(family)) => family_spec(family, args.n, args.k, seed)?.generate()?,
        (None, None) => return Err(CliError::Usage("missing --family or --tree".into())),
    };
    let guards = ExactGuards {
        max_branches: *args
            .max_exact_m
            .get_or_insert(ExactGuards::default().max_branches),
        max_chords: *args
            .max_exact_n
            .get_or_insert(ExactGuards::default().max_chords),
    };
    let (probability, estimate) = match mode {
        ProbMode::Exact | ProbMode::ExactDual => {
            let p = if mode == ProbMode::Exact {
                prob_exact_with(&t, &guards)?
            } else {
                prob_exact_dual_with(&t, &guards)?
            };
            (Some(p.to_string()), ProbEstimate::from_exact(&p))
        }
        ProbMode::Estimate => {
            let samples = *args.samples.get_or_insert(DEFAULT_SAMPLES);
            let b = BipartiteCompanion::from_tree(&t);
            (None, prob_estimate(&b, samples, seed)?)
        }
    };
    let mut body = json!({
        "M": t.branch_count(),
        "N": t.chord_count(),
        "log_prob": estimate.log_value,
        "samples": estimate.samples,
        "log_std_err": estimate.log_std_err,
        "exact": estimate.exact,
    });
    if let Some(p) = probability {
        body["probability"] = Value::String(p);
    }
    emit(
        &json_report("prob", Some(seed), &args, body)?,
        args.out.as_deref(),
    )
}

fn pearson(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let cov: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let vx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let vy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

pub fn scatter(flags: &ScatterArgs, config: Option<&Path>) -> Result<(), CliError> {
    let mut args = resolve(flags, config)?;
    let n = require(args.n, "n")?;
    if n < 4 {
        return Err(CliError::Usage(format!(
            "scatter needs --n of at least 4, got {n}"
        )));
    }
    let trees = *args.trees.get_or_insert(100);
    let samples = *args.samples.get_or_insert(DEFAULT_SAMPLES);
    let seed = *args.seed.get_or_insert(DEFAULT_SEED);
    let g = Arc::new(Graph::grid(n)?);

    let mut rows: Vec<(String, usize, SpanningTree)> = Vec::new();
    for i in 0..trees {
        rows.push((
            "kruskal".into(),
            i,
            sample_kruskal(&g, derive_seed(seed, i as u64))?,
        ));
    }
    for i in 0..trees {
        rows.push((
            "wilson".into(),
            i,
            sample_wilson(&g, derive_seed(seed, (trees + i) as u64))?,
        ));
    }
    let random_rows = rows.len();
    rows.push(("centipede".into(), 0, centipede(n)?));
    if n.is_power_of_two() {
        rows.push(("fractal".into(), 0, fractal(log2_side(n)?)?));
    }

    let mut out = comment_header("scatter/1", Some(seed), &args)?;
    out.push_str("sampler,index,avg_stretch,log_prob,log_std_err\n");
    let mut points = Vec::with_capacity(random_rows);
    for (j, (sampler, index, t)) in rows.iter().enumerate() {
        let est = prob_estimate(
            &BipartiteCompanion::from_tree(t),
            samples,
            derive_seed(!seed, j as u64),
        )?;
        let stretch = to_f64(&avg_stretch(t));
        if j < random_rows {
            points.push((stretch, est.log_value));
        }
        out.push_str(&format!(
            "{sampler},{index},{stretch},{},{}\n",
            est.log_value, est.log_std_err
        ));
    }
    out.push_str(&format!("# pearson_r_random_trees={}\n", pearson(&points)));
    emit(&out, args.out.as_deref())
}

fn default_d_max(family: SeriesFamily) -> usize {
    match family {
        SeriesFamily::Uniform => mstgrid::asymptotics::UNIFORM_D_MAX,
        _ => 125,
    }
}

pub fn decay(flags: &DecayArgs, config: Option<&Path>) -> Result<(), CliError> {
    let mut args = resolve(flags, config)?;
    let family: SeriesFamily = require(args.family.clone(), "family")?.parse()?;
    let d_max = *args.d_max.get_or_insert(default_d_max(family));
    let format = *args.format.get_or_insert(TableFormat::Json);
    let ps = family_power_series(family, d_max)?;
    let text = match format {
        TableFormat::Json => {
            let bound = decay_lower_bound(&ps)?;
            let mut body = json!({
                "family": family.name(),
                "d_max": d_max,
                "f_bar": bound.f_bar,
                "e_f_bar": bound.e_f_bar,
                "q_lower": bound.q_lower,
                "mass_total": ps.mass_total(),
                "omitted_mass": ps.omitted_mass(),
            });
            if family == SeriesFamily::Fractal {
                let table: Vec<Value> = fractal_p_infinity(d_max)?
                    .iter()
                    .map(|(d, p)| json!({ "d": d, "p_infinity": p.to_string() }))
                    .collect();
                body["p_infinity"] = Value::Array(table);
            }
            json_report("decay", None, &args, body)?
        }
        TableFormat::Csv => {
            let points = *args.points.get_or_insert(100);
            comment_header("power-series/1", None, &args)? + &ps.to_csv(points)
        }
    };
    emit(&text, args.out.as_deref())
}

pub fn conjecture(flags: &ConjectureArgs, config: Option<&Path>) -> Result<(), CliError> {
    let mut args = resolve(flags, config)?;
    let family = require(args.family.clone(), "family")?;
    let kind: FamilyKind = family.parse()?;
    let series = match kind {
        FamilyKind::Centipede => SeriesFamily::Centipede,
        FamilyKind::DoubleSpiral => SeriesFamily::DoubleSpiral,
        FamilyKind::Fractal => SeriesFamily::Fractal,
        _ => {
            return Err(CliError::Usage(format!(
                "`{family}` has no limiting power series"
            )))
        }
    };
    let sides = require(args.n.clone(), "n")?;
    let samples = *args.samples.get_or_insert(2_000);
    let seed = *args.seed.get_or_insert(DEFAULT_SEED);
    let e_f_bar = decay_lower_bound(&family_power_series(series, 125)?)?.e_f_bar;

    let mut out = comment_header("conjecture/1", Some(seed), &args)?;
    out.push_str("n,mean_ln_a,sigma2,half_n2_sigma2,implied\n");
    for (j, &n) in sides.iter().enumerate() {
        let t = family_spec(&family, Some(n), None, seed)?.generate()?;
        let a = a_statistic(
            &BipartiteCompanion::from_tree(&t),
            samples,
            derive_seed(seed, j as u64),
        )?;
        let half = (n * n) as f64 * a.log_variance / 2.0;
        out.push_str(&format!(
            "{n},{},{},{half},{}\n",
            a.mean_log,
            a.log_variance,
            half.exp() / e_f_bar
        ));
    }
    emit(&out, args.out.as_deref())
}
