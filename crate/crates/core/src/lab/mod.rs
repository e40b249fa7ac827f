//! The `dimlab` command line: generation, arithmetic, analysis and
//! verification with flat-file outputs.

pub mod verify;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::arithmetic::{difference_set, distance_set, index_sumset, GridSetD, SumsetReport};
use crate::dyadic::{DyadicTree, DEFAULT_MAX_DEPTH};
use crate::error::{Error, Result};
use crate::estimate::{assouad_estimate, box_estimate, estimates_csv, lower_estimate, EstimateRow, Multiscale};
use crate::generators::{GeneratorSpec, LengthInput, RealInput};
use crate::measure::{covering_bounds_check, default_window, CoveringReport, ScaleProfile, TreeMeasure};
use crate::rational::RationalInput;

pub const DEFAULT_BUDGET_CELLS: u64 = 1 << 28;

#[derive(Debug, Parser)]
#[command(name = "dimlab", version, about = "Dyadic-tree experiments on fractal sets, sumsets and distance sets")]
pub struct Cli {
    /// Largest number of grid cells any stage may hold in memory.
    #[arg(long, global = true, env = "DIMLAB_BUDGET_CELLS")]
    pub budget_cells: Option<u64>,

    /// Experiment config (JSON); command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a set and write its dyadic tree.
    Gen(GenArgs),
    /// Index sumset of two trees, or the k-fold sumset of one.
    Sum(SumArgs),
    /// Difference set of a tree.
    Diff(DiffArgs),
    /// Distance set of a product of trees or of a grid-set file.
    Dist(DistArgs),
    /// Dimension estimates, entropy profile and covering checks.
    Analyze(AnalyzeArgs),
    /// Run a named verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Two-map or general IFS: `r=1/3 t=0,2/3 [span=B]`.
    #[arg(long, num_args = 1.., value_name = "KEY=VALUE", group = "gen")]
    pub ifs: Option<Vec<String>>,
    /// Moran construction: `k=2 l=4^-j` or `k=2 l=1/4,1/16`.
    #[arg(long, num_args = 1.., value_name = "KEY=VALUE", group = "gen")]
    pub moran: Option<Vec<String>>,
    /// Truncated semigroup: `g=1,sqrt(2) bound=4`.
    #[arg(long, num_args = 1.., value_name = "KEY=VALUE", group = "gen")]
    pub semigroup: Option<Vec<String>>,
    /// The set {1/k} ∪ {0}.
    #[arg(long, group = "gen")]
    pub reciprocal: bool,
    /// Generator spec as a JSON file.
    #[arg(long, group = "gen")]
    pub spec: Option<PathBuf>,
    #[arg(long)]
    pub depth: Option<u32>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SumArgs {
    #[arg(num_args = 1..=2, required = true)]
    pub inputs: Vec<PathBuf>,
    /// Number of summands when a single input is given.
    #[arg(short, long, default_value_t = 1)]
    pub k: u32,
    #[arg(long)]
    pub level: Option<u32>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Where to write the sumset report (JSON).
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DiffArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub level: Option<u32>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DistArgs {
    /// Tree files whose product forms the set.
    #[arg(conflicts_with = "grid")]
    pub inputs: Vec<PathBuf>,
    /// A `grid-set v1` file instead of a product.
    #[arg(long)]
    pub grid: Option<PathBuf>,
    /// Dimension of the product when one tree is given.
    #[arg(short, long, default_value_t = 2)]
    pub d: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// A `dyadic-tree v1` or `grid-set v1` file.
    pub input: PathBuf,
    /// Box-counting window `n_min,n_max` (repeatable).
    #[arg(long = "box", value_name = "N_MIN,N_MAX")]
    pub box_windows: Vec<String>,
    #[arg(long, value_name = "M")]
    pub assouad: Vec<u32>,
    #[arg(long, value_name = "M")]
    pub lower: Vec<u32>,
    /// Entropy scale profile `eps[,m]` of the counting measure.
    #[arg(long, value_name = "EPS[,M]")]
    pub profile: Option<String>,
    /// Also check the entropy-to-covering bounds (needs --profile).
    #[arg(long)]
    pub covering: bool,
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub suite: String,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

/// A pipeline stage applied to the generated tree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase", deny_unknown_fields)]
pub enum Stage {
    Sum { k: u32 },
    Difference {},
    Distance { d: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileRequest {
    pub eps: f64,
    #[serde(default)]
    pub m: Option<u32>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisRequest {
    pub box_windows: Vec<(u32, u32)>,
    pub assouad: Vec<u32>,
    pub lower: Vec<u32>,
    pub profile: Option<ProfileRequest>,
    pub covering: bool,
}

impl AnalysisRequest {
    fn is_empty(&self) -> bool {
        self.box_windows.is_empty() && self.assouad.is_empty() && self.lower.is_empty() && self.profile.is_none()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputPaths {
    pub tree: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub csv: Option<PathBuf>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: Option<String>,
    pub generator: Option<GeneratorSpec>,
    pub pipeline: Vec<Stage>,
    pub analysis: AnalysisRequest,
    pub outputs: OutputPaths,
    pub depth: Option<u32>,
    pub budget_cells: Option<u64>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(&fs::read_to_string(path)?)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.budget_cells == Some(0) {
            return Err(Error::arg("budget_cells must be positive"));
        }
        if let Some(g) = &self.generator {
            g.validate()?;
        }
        for stage in &self.pipeline {
            match stage {
                Stage::Sum { k: 0 } => return Err(Error::arg("sum stage needs k ≥ 1")),
                Stage::Distance { d } if !(1..=8).contains(d) => {
                    return Err(Error::arg(format!("distance stage needs 1 ≤ d ≤ 8, got {d}")))
                }
                _ => {}
            }
        }
        Ok(())
    }
}

struct Ctx {
    budget: u64,
    config: ExperimentConfig,
}

impl Ctx {
    fn guard(&self, what: &str, cells: u128) -> Result<()> {
        if cells > self.budget as u128 {
            return Err(Error::Resource(format!(
                "{what} needs {cells} cells, budget is {}",
                self.budget
            )));
        }
        Ok(())
    }

    fn guard_tree(&self, what: &str, span: u64, depth: u32) -> Result<()> {
        self.guard(what, span as u128 * (1u128 << depth.min(100)))
    }
}

/// Outputs are collected first and written only once every stage succeeded.
#[derive(Default)]
struct Outputs {
    files: Vec<(Option<PathBuf>, String)>,
}

impl Outputs {
    fn push(&mut self, path: Option<PathBuf>, text: String) {
        self.files.push((path, text));
    }

    fn flush(self) -> Result<()> {
        for (path, text) in self.files {
            match path {
                Some(p) => write_atomic(&p, text.as_bytes())?,
                None => std::io::stdout().write_all(text.as_bytes())?,
            }
        }
        Ok(())
    }
}

/// Writes to a sibling temporary file, then renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| Error::arg(format!("`{}` is not a file path", path.display())))?;
    let mut tmp_name = OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    let res = fs::write(&tmp, bytes).and_then(|_| fs::rename(&tmp, path));
    if res.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(res?)
}

fn warn(msg: &str) {
    eprintln!("warning: {msg}");
}

fn read_tree(path: &Path) -> Result<DyadicTree> {
    DyadicTree::from_text(&fs::read_to_string(path)?)
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

/// Parses `key=value` tokens; values may contain commas.
fn key_values(tokens: &[String]) -> Result<Vec<(String, String)>> {
    tokens
        .iter()
        .map(|t| {
            t.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| Error::arg(format!("expected KEY=VALUE, got `{t}`")))
        })
        .collect()
}

fn list<T>(v: &str, f: impl Fn(&str) -> T) -> Vec<T> {
    v.split(',').filter(|s| !s.trim().is_empty()).map(|s| f(s.trim())).collect()
}

fn spec_from_flags(args: &GenArgs) -> Result<Option<GeneratorSpec>> {
    let unknown = |k: &str, what: &str| Error::arg(format!("unknown {what} parameter `{k}`"));
    if let Some(tokens) = &args.ifs {
        let (mut r, mut t, mut span) = (None, None, None);
        for (k, v) in key_values(tokens)? {
            match k.as_str() {
                "r" => r = Some(RationalInput::Text(v)),
                "t" => t = Some(list(&v, |s| RationalInput::Text(s.into()))),
                "span" => span = Some(v.parse().map_err(|_| Error::spec(format!("bad span `{v}`")))?),
                _ => return Err(unknown(&k, "--ifs")),
            }
        }
        let r = r.ok_or_else(|| Error::spec("--ifs needs r="))?;
        let translations = t.ok_or_else(|| Error::spec("--ifs needs t="))?;
        return Ok(Some(GeneratorSpec::Ifs { r, translations, span }));
    }
    if let Some(tokens) = &args.moran {
        let (mut k, mut l) = (None, None);
        for (key, v) in key_values(tokens)? {
            match key.as_str() {
                "k" => k = Some(v.parse().map_err(|_| Error::spec(format!("bad k `{v}`")))?),
                "l" if v.contains("^-j") => l = Some(LengthInput::Formula(v)),
                "l" => l = Some(LengthInput::List(list(&v, |s| RationalInput::Text(s.into())))),
                _ => return Err(unknown(&key, "--moran")),
            }
        }
        return Ok(Some(GeneratorSpec::Moran {
            k: k.ok_or_else(|| Error::spec("--moran needs k="))?,
            lengths: l.ok_or_else(|| Error::spec("--moran needs l="))?,
        }));
    }
    if let Some(tokens) = &args.semigroup {
        let (mut g, mut bound) = (None, None);
        for (k, v) in key_values(tokens)? {
            match k.as_str() {
                "g" => g = Some(list(&v, |s| RealInput::Text(s.into()))),
                "bound" => bound = Some(v.parse().map_err(|_| Error::spec(format!("bad bound `{v}`")))?),
                _ => return Err(unknown(&k, "--semigroup")),
            }
        }
        return Ok(Some(GeneratorSpec::Semigroup {
            generators: g.ok_or_else(|| Error::spec("--semigroup needs g="))?,
            bound: bound.ok_or_else(|| Error::spec("--semigroup needs bound="))?,
        }));
    }
    if args.reciprocal {
        return Ok(Some(GeneratorSpec::Reciprocal {}));
    }
    if let Some(p) = &args.spec {
        return Ok(Some(serde_json::from_str(&fs::read_to_string(p)?)?));
    }
    Ok(None)
}

fn apply_stage(ctx: &Ctx, tree: DyadicTree, stage: &Stage) -> Result<DyadicTree> {
    let depth = tree.max_depth();
    match *stage {
        Stage::Sum { k } => {
            ctx.guard_tree("sum stage", tree.span() * k as u64, depth)?;
            let mut acc = tree.clone();
            for _ in 1..k {
                acc = index_sumset(&acc, &tree, depth)?.0;
            }
            Ok(acc)
        }
        Stage::Difference {} => {
            ctx.guard_tree("difference stage", 2 * tree.span(), depth)?;
            Ok(difference_set(&tree, depth)?.tree)
        }
        Stage::Distance { d } => {
            let copies = vec![&tree; d];
            ctx.guard("distance stage", (tree.leaves().len() as u128).pow(d as u32))?;
            distance_set(&GridSetD::product(&copies)?)
        }
    }
}

fn cmd_gen(ctx: &Ctx, args: &GenArgs) -> Result<Outputs> {
    let spec = match spec_from_flags(args)? {
        Some(s) => s,
        None => ctx
            .config
            .generator
            .clone()
            .ok_or_else(|| Error::arg("no generator given (use --ifs, --moran, --semigroup, --reciprocal, --spec or a config)"))?,
    };
    spec.validate()?;
    let depth = args.depth.or(ctx.config.depth).unwrap_or(DEFAULT_MAX_DEPTH);
    ctx.guard_tree("generation", spec.span()?, depth)?;
    let generated = spec.build(depth)?;
    for w in &generated.warnings {
        warn(w);
    }
    let mut tree = generated.tree;
    for stage in &ctx.config.pipeline {
        tree = apply_stage(ctx, tree, stage)?;
    }
    let mut out = Outputs::default();
    out.push(args.output.clone().or(ctx.config.outputs.tree.clone()), tree.to_text());
    Ok(out)
}

#[derive(Serialize)]
struct SumOutput<'a> {
    inputs: Vec<String>,
    k: u32,
    span: u64,
    report: &'a SumsetReport,
}

fn cmd_sum(ctx: &Ctx, args: &SumArgs) -> Result<Outputs> {
    let trees = args.inputs.iter().map(|p| read_tree(p)).collect::<Result<Vec<_>>>()?;
    if args.k == 0 {
        return Err(Error::arg("k must be at least 1"));
    }
    if trees.len() == 2 && args.k != 1 {
        return Err(Error::arg("k applies only to a single input"));
    }
    let level = match args.level {
        Some(l) => l,
        None => {
            let d = trees[0].max_depth();
            if trees.iter().any(|t| t.max_depth() != d) {
                return Err(Error::arg(format!(
                    "depth mismatch: inputs have depths {} and {}; pass --level",
                    d,
                    trees[1].max_depth()
                )));
            }
            d
        }
    };
    if trees.iter().any(DyadicTree::is_empty) {
        warn("an input set is empty; the sumset is empty");
    }
    let (a, b) = match trees.as_slice() {
        [a, b] => (a, b),
        [a] => (a, a),
        _ => unreachable!("clap enforces one or two inputs"),
    };
    let summands = if trees.len() == 2 { 2 } else { args.k };
    let span: u64 = if trees.len() == 2 { a.span() + b.span() } else { a.span() * args.k as u64 };
    ctx.guard_tree("sumset", span, level)?;
    let (tree, report) = if summands == 1 {
        let t = a.truncate(level)?;
        let n = t.level(level).len();
        let report = SumsetReport {
            level,
            count_exact: n,
            bracket: [n as f64 / 2.0, 2.0 * n as f64],
            kernel: crate::arithmetic::Kernel::Sparse,
        };
        (t, report)
    } else {
        let mut acc = index_sumset(a, b, level)?;
        for _ in 2..summands {
            acc = index_sumset(&acc.0, a, level)?;
        }
        acc
    };
    let mut out = Outputs::default();
    let json = to_json(&SumOutput {
        inputs: args.inputs.iter().map(|p| p.display().to_string()).collect(),
        k: summands,
        span: tree.span(),
        report: &report,
    })?;
    let tree_path = args.output.clone();
    let to_stdout = tree_path.is_none();
    out.push(tree_path, tree.to_text());
    match (&args.report, to_stdout) {
        (Some(p), _) => out.push(Some(p.clone()), json),
        (None, false) => out.push(None, json),
        (None, true) => {}
    }
    Ok(out)
}

fn cmd_diff(ctx: &Ctx, args: &DiffArgs) -> Result<Outputs> {
    let tree = read_tree(&args.input)?;
    let level = args.level.unwrap_or(tree.max_depth());
    ctx.guard_tree("difference set", 2 * tree.span(), level)?;
    if tree.is_empty() {
        warn("the input set is empty; the difference set is empty");
    }
    let d = difference_set(&tree, level)?;
    let mut out = Outputs::default();
    let json = to_json(&json!({"level": level, "offset": d.offset, "span": d.tree.span()}))?;
    let to_stdout = args.output.is_none();
    out.push(args.output.clone(), d.tree.to_text());
    match (&args.report, to_stdout) {
        (Some(p), _) => out.push(Some(p.clone()), json),
        (None, false) => out.push(None, json),
        (None, true) => {}
    }
    Ok(out)
}

fn cmd_dist(ctx: &Ctx, args: &DistArgs) -> Result<Outputs> {
    let set = if let Some(g) = &args.grid {
        GridSetD::from_text(&fs::read_to_string(g)?)?
    } else {
        let trees = args.inputs.iter().map(|p| read_tree(p)).collect::<Result<Vec<_>>>()?;
        let refs: Vec<&DyadicTree> = match trees.as_slice() {
            [] => return Err(Error::arg("dist needs tree inputs or --grid")),
            [one] => vec![one; args.d],
            many => many.iter().collect(),
        };
        let cells: u128 = refs.iter().map(|t| t.leaves().len() as u128).product();
        ctx.guard("product set", cells)?;
        GridSetD::product(&refs)?
    };
    let out_span = (set.span() as f64 * (set.d() as f64).sqrt()).ceil() as u64;
    ctx.guard_tree("distance set", out_span, set.depth())?;
    let tree = distance_set(&set)?;
    let mut out = Outputs::default();
    out.push(args.output.clone(), tree.to_text());
    Ok(out)
}

/// Results of `analyze`, serialized as one JSON document.
#[derive(Debug, Serialize)]
pub struct AnalysisOutput {
    pub input: String,
    pub dim: u32,
    pub depth: u32,
    pub span: u64,
    pub estimates: Vec<EstimateRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<ScaleProfile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub covering: Option<CoveringReport>,
}

fn parse_pair(s: &str) -> Result<(u32, u32)> {
    let bad = || Error::arg(format!("expected N_MIN,N_MAX, got `{s}`"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn parse_profile(s: &str) -> Result<ProfileRequest> {
    let bad = || Error::arg(format!("expected EPS[,M], got `{s}`"));
    let mut parts = s.split(',');
    let eps = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    let m = parts.next().map(|m| m.trim().parse().map_err(|_| bad())).transpose()?;
    Ok(ProfileRequest { eps, m })
}

fn estimate_rows<S: Multiscale>(set: &S, name: &str, req: &AnalysisRequest) -> Result<Vec<EstimateRow>> {
    let mut rows = Vec::new();
    for &(lo, hi) in &req.box_windows {
        let b = box_estimate(set, lo, hi)?;
        rows.extend(b.all().iter().map(|e| EstimateRow::new(name, e)));
    }
    for &m in &req.assouad {
        rows.push(EstimateRow::new(name, &assouad_estimate(set, m)?));
    }
    for &m in &req.lower {
        rows.push(EstimateRow::new(name, &lower_estimate(set, m)?));
    }
    Ok(rows)
}

pub fn analyze_text(text: &str, name: &str, req: &AnalysisRequest) -> Result<AnalysisOutput> {
    if text.starts_with("grid-set") {
        if req.profile.is_some() || req.covering {
            return Err(Error::arg("entropy profiles need a 1-d tree input"));
        }
        let set = GridSetD::from_text(text)?;
        return Ok(AnalysisOutput {
            input: name.to_string(),
            dim: set.d() as u32,
            depth: set.depth(),
            span: set.span(),
            estimates: estimate_rows(&set, name, req)?,
            profile: None,
            covering: None,
        });
    }
    let tree = DyadicTree::from_text(text)?;
    let estimates = estimate_rows(&tree, name, req)?;
    let depth = tree.max_depth();
    let (mut profile, mut covering) = (None, None);
    if let Some(p) = &req.profile {
        let m = p.m.unwrap_or_else(|| default_window(p.eps));
        let mu = TreeMeasure::counting(tree.clone())?;
        if m > depth {
            return Err(Error::range(format!("window m = {m} exceeds tree depth {depth}")));
        }
        profile = Some(mu.scale_profile(p.eps, m, depth - m)?);
        if req.covering {
            let full = mu.scale_profile(p.eps, m, depth)?;
            covering = Some(covering_bounds_check(&tree, &full, depth)?);
        }
    } else if req.covering {
        return Err(Error::arg("--covering needs --profile"));
    }
    Ok(AnalysisOutput {
        input: name.to_string(),
        dim: 1,
        depth,
        span: tree.span(),
        estimates,
        profile,
        covering,
    })
}

fn cmd_analyze(ctx: &Ctx, args: &AnalyzeArgs) -> Result<Outputs> {
    let mut req = AnalysisRequest {
        box_windows: args.box_windows.iter().map(|s| parse_pair(s)).collect::<Result<_>>()?,
        assouad: args.assouad.clone(),
        lower: args.lower.clone(),
        profile: args.profile.as_deref().map(parse_profile).transpose()?,
        covering: args.covering,
    };
    if req.is_empty() {
        let covering = req.covering;
        req = ctx.config.analysis.clone();
        req.covering |= covering;
    }
    let text = fs::read_to_string(&args.input)?;
    let field = |key: &str| {
        text.lines()
            .next()
            .and_then(|h| h.split_whitespace().find_map(|f| f.strip_prefix(key)))
            .and_then(|v| v.parse::<u32>().ok())
    };
    let (d, depth, span) = (field("d=").unwrap_or(1), field("depth=").unwrap_or(1), field("span=").unwrap_or(1));
    ctx.guard_tree("analysis input", (span as u64).saturating_pow(d), depth.saturating_mul(d))?;
    if req.is_empty() {
        req.box_windows.push(((depth / 2).max(1), depth.max(1)));
    }
    let name = args
        .input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let result = analyze_text(&text, &name, &req)?;
    let mut out = Outputs::default();
    out.push(args.json.clone().or(ctx.config.outputs.json.clone()), to_json(&result)?);
    if let Some(p) = args.csv.clone().or(ctx.config.outputs.csv.clone()) {
        out.push(Some(p), estimates_csv(&result.estimates));
    }
    Ok(out)
}

fn cmd_verify(args: &VerifyArgs) -> Result<(Outputs, i32)> {
    let report = verify::run_suite(&args.suite)?;
    let mut out = Outputs::default();
    out.push(args.json.clone(), to_json(&report)?);
    if args.json.is_some() {
        for c in &report.criteria {
            eprintln!("{} {:>2} {} ({:.2}s)", if c.passed { "PASS" } else { "FAIL" }, c.id, c.name, c.seconds);
        }
    }
    Ok((out, if report.passed { 0 } else { 1 }))
}

/// Runs a parsed command; returns the process exit status.
pub fn run(cli: Cli) -> Result<i32> {
    let config = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    let budget = cli.budget_cells.or(config.budget_cells).unwrap_or(DEFAULT_BUDGET_CELLS);
    if budget == 0 {
        return Err(Error::arg("budget must be positive"));
    }
    let ctx = Ctx { budget, config };
    let (out, code) = match &cli.command {
        Command::Gen(a) => (cmd_gen(&ctx, a)?, 0),
        Command::Sum(a) => (cmd_sum(&ctx, a)?, 0),
        Command::Diff(a) => (cmd_diff(&ctx, a)?, 0),
        Command::Dist(a) => (cmd_dist(&ctx, a)?, 0),
        Command::Analyze(a) => (cmd_analyze(&ctx, a)?, 0),
        Command::Verify(a) => cmd_verify(a)?,
    };
    out.flush()?;
    Ok(code)
}

/// Parses `args`, runs the command and reports errors as JSON on stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            eprintln!("{}", json!({"error": {"code": "USAGE", "message": e.to_string().trim()}}));
            return 2;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", json!({"error": {"code": e.code(), "message": e.to_string()}}));
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flag_specs() {
        let args = GenArgs {
            ifs: Some(vec!["r=1/3".into(), "t=0,2/3".into()]),
            moran: None,
            semigroup: None,
            reciprocal: false,
            spec: None,
            depth: Some(4),
            output: None,
        };
        let spec = spec_from_flags(&args).unwrap().unwrap();
        assert_eq!(spec.ifs_spec().unwrap().unwrap().translations().len(), 2);
        let bad = GenArgs { ifs: Some(vec!["r=1.5".into(), "t=0".into()]), ..args };
        let e = spec_from_flags(&bad).unwrap().unwrap().validate().unwrap_err();
        assert_eq!(e.code(), "SPEC_INVALID");
    }

    #[test]
    fn config_round_trip_and_validation() {
        let text = r#"{
            "name": "cantor-sums",
            "generator": {"type": "ifs", "r": "1/3", "translations": [0, "2/3"]},
            "pipeline": [{"op": "sum", "k": 2}],
            "analysis": {"box_windows": [[4, 8]], "assouad": [4]},
            "depth": 8
        }"#;
        let cfg: ExperimentConfig = serde_json::from_str(text).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.pipeline, vec![Stage::Sum { k: 2 }]);
        let bad: ExperimentConfig = serde_json::from_str(r#"{"pipeline": [{"op": "distance", "d": 0}]}"#).unwrap();
        assert!(bad.validate().is_err());
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn analysis_of_simple_sets() {
        let full = DyadicTree::full(1, 10).unwrap().to_text();
        let req = AnalysisRequest {
            profile: Some(ProfileRequest { eps: 0.1, m: Some(5) }),
            covering: true,
            ..Default::default()
        };
        let out = analyze_text(&full, "full", &req).unwrap();
        assert_eq!(out.profile.unwrap().uniform_levels, (0..=5).collect::<Vec<_>>());
        assert!(out.covering.unwrap().consistent());

        let point = DyadicTree::point(0.5, 1, 10).unwrap().to_text();
        let req = AnalysisRequest { lower: vec![4], ..Default::default() };
        assert_eq!(analyze_text(&point, "pt", &req).unwrap().estimates[0].value, 0.0);
    }
}
