//! Command-line front end.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::bivariate::{self, BoxMesh, CrissCross, TensorMesh};
use crate::error::{Error, Result};
use crate::functionals::QuasiInterpolant;
use crate::nearbest::UniformKind;
use crate::normest::{self, NormOptions};
use crate::partition::{self, PartitionSpec};
use crate::quadrature;
use crate::quasiinterp::{self, UNIFORM_SPANS};
use crate::splinecore::KnotSequence;
use crate::io;

#[derive(Debug, Parser)]
#[command(name = "nbqi", version, about = "Near-best spline quasi-interpolants")]
pub struct Cli {
    /// Seed for randomized partitions given without an explicit seed.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// key=value file preloading option defaults.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an operator and list its coefficient functionals.
    Build(FamilyArgs),
    /// Solve the l1 near-best problem at every anchor.
    Nearbest(NearbestArgs),
    /// Norm bound and sampled norm estimate.
    Norms(NormsArgs),
    /// Bivariate weight tables.
    Biv(BivArgs),
    /// Quadrature rule obtained by integrating a discrete operator.
    Quad(FamilyArgs),
    /// Recompute the reference tables and compare.
    Repro(ReproArgs),
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    /// schoenberg | s2 | gs1 | gs2 | qstar | nearbest | nb-dqi | nb-iqi
    #[arg(long, default_value = "s2")]
    pub family: String,
    /// Spline degree.
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    /// uniform:N | geometric:N:ratio | random:N[:seed] | file:PATH | comma list
    #[arg(long, default_value = "uniform:10")]
    pub knots: String,
    #[arg(long, default_value_t = 2)]
    pub p: usize,
    #[arg(long, default_value_t = 2)]
    pub q: usize,
    /// Stencil half-width of the cardinal families.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Exactness degree of the cardinal families.
    #[arg(long, default_value_t = 3)]
    pub r: usize,
    /// Spans of the uniform emulation for the cardinal families.
    #[arg(long, default_value_t = UNIFORM_SPANS)]
    pub spans: usize,
}

#[derive(Debug, Clone, Args)]
pub struct NearbestArgs {
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    #[arg(long, default_value_t = 2)]
    pub p: usize,
    #[arg(long, default_value_t = 2)]
    pub q: usize,
    #[arg(long, default_value = "uniform:10")]
    pub knots: String,
    /// Include anchors whose stencil touches repeated end knots.
    #[arg(long)]
    pub all_anchors: bool,
}

#[derive(Debug, Clone, Args)]
pub struct NormsArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Samples per knot span.
    #[arg(long, default_value_t = 64)]
    pub samples: usize,
    #[arg(long)]
    pub no_polish: bool,
}

#[derive(Debug, Clone, Args)]
pub struct BivArgs {
    /// s1 | t1 | g1 | t2 | g2
    #[arg(long, default_value = "t2")]
    pub family: String,
    /// X partition (uniform:N | geometric:N:ratio | random:N[:seed]).
    #[arg(long, default_value = "uniform:6")]
    pub mesh: String,
    /// Y partition; defaults to the X partition.
    #[arg(long)]
    pub mesh_y: Option<String>,
    /// Two-line mesh file, overriding --mesh.
    #[arg(long)]
    pub mesh_file: Option<PathBuf>,
    /// Near-best box-spline stencil instead: three | four.
    #[arg(long = "box")]
    pub box_mesh: Option<String>,
    /// Stencil scale for --box.
    #[arg(long, default_value_t = 1)]
    pub s: usize,
    /// Also sample the four-direction norm on a grid of this size.
    #[arg(long)]
    pub grid: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct ReproArgs {
    /// cardinal-dqi | cardinal-iqi | box-three | box-four | s2-uniform | crisscross | all
    #[arg(long, default_value = "all")]
    pub section: String,
}

/// Output table: named columns, rows of cells, optional metadata.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub meta: Vec<(String, Cell)>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => fmt_num(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => {
                if s.contains([',', '"', '\n']) {
                    format!("\"{}\"", s.replace('"', "\"\""))
                } else {
                    s.clone()
                }
            }
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => json!(v),
            Cell::Int(v) => json!(v),
            Cell::Bool(b) => json!(b),
            Cell::Text(s) => json!(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Full double precision: 17 significant digits.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            ..Default::default()
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Cell>) {
        self.meta.push((key.to_string(), value.into()));
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = String::new();
                for (k, v) in &self.meta {
                    let _ = writeln!(out, "# {k}={}", v.csv());
                }
                let _ = writeln!(out, "{}", self.columns.join(","));
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    let _ = writeln!(out, "{}", cells.join(","));
                }
                out
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = self
                            .columns
                            .iter()
                            .cloned()
                            .zip(row.iter().map(Cell::json))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                let mut top = Map::new();
                for (k, v) in &self.meta {
                    top.insert(k.clone(), v.json());
                }
                top.insert("rows".into(), Value::Array(rows));
                let mut s = serde_json::to_string_pretty(&Value::Object(top)).unwrap_or_default();
                s.push('\n');
                s
            }
        }
    }
}

/// Parses a partition string, using `seed` for `random:N`.
pub fn parse_partition(spec: &str, seed: u64) -> Result<Vec<f64>> {
    if let Some(rest) = spec.strip_prefix("random:") {
        if !rest.contains(':') {
            return format!("random:{rest}:{seed}").parse::<PartitionSpec>().map(|p| p.breakpoints());
        }
    }
    if spec.contains(',') || spec.parse::<f64>().is_ok() {
        return spec
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad breakpoint '{t}'")))
            })
            .collect();
    }
    Ok(spec.parse::<PartitionSpec>()?.breakpoints())
}

/// Knot sequence of degree `m` from a CLI knot string.
pub fn parse_knot_arg(spec: &str, m: usize, seed: u64) -> Result<KnotSequence> {
    if let Some(path) = spec.strip_prefix("file:").or_else(|| spec.strip_prefix('@')) {
        return io::read_knots(std::path::Path::new(path));
    }
    io::knots_from_values(m, &parse_partition(spec, seed)?)
}

/// Builds the operator named by `args`.
pub fn build_family(args: &FamilyArgs, seed: u64) -> Result<QuasiInterpolant> {
    let name = args.family.to_ascii_lowercase();
    match name.as_str() {
        "nb-dqi" | "nb-iqi" => {
            if args.m.is_multiple_of(2) {
                return Err(Error::UnsupportedDegree {
                    m: args.m,
                    reason: "cardinal families use odd degree (even order)",
                });
            }
            let ks = KnotSequence::uniform_emulation(args.m, args.spans, 1.0)?;
            if name == "nb-dqi" {
                quasiinterp::uniform_nb_dqi_on(&ks, args.n, args.r)
            } else {
                quasiinterp::uniform_nb_iqi_on(&ks, args.n, args.r)
            }
        }
        _ => {
            let ks = parse_knot_arg(&args.knots, args.m, seed)?;
            match name.as_str() {
                "schoenberg" | "s1" => quasiinterp::schoenberg(&ks),
                "s2" => quasiinterp::s2(&ks),
                "gs1" | "g1" => quasiinterp::gs1(&ks),
                "gs2" | "g2" => quasiinterp::gs2(&ks),
                "qstar" => quasiinterp::nb_dqi_nonuniform(&ks, args.p),
                "nearbest" | "nb" => quasiinterp::near_best_dqi(&ks, args.p, args.q),
                other => Err(Error::Parse(format!("unknown family '{other}'"))),
            }
        }
    }
}

fn join_nums(v: &[f64]) -> String {
    v.iter().map(|x| fmt_num(*x)).collect::<Vec<_>>().join(" ")
}

fn cmd_build(args: &FamilyArgs, seed: u64) -> Result<Table> {
    let q = build_family(args, seed)?;
    let mut t = Table::new(&["index", "kind", "offsets", "weights", "nu"]);
    t.meta("family", q.family().to_string());
    t.meta("exactness_degree", q.exactness_degree());
    t.meta("nu_bound", q.nu_bound());
    for (j, lam) in q.functionals().iter().enumerate() {
        let offs: Vec<String> = lam.offsets().iter().map(|o| o.to_string()).collect();
        let kind = if lam.is_discrete() { "discrete" } else { "integral" };
        t.push(vec![
            j.into(),
            kind.into(),
            offs.join(" ").into(),
            join_nums(lam.weights()).into(),
            lam.nu().into(),
        ]);
    }
    Ok(t)
}

fn cmd_nearbest(args: &NearbestArgs, seed: u64) -> Result<Table> {
    let ks = parse_knot_arg(&args.knots, args.m, seed)?;
    let width = 2 * args.p + 1;
    let mut cols = vec![
        "anchor".to_string(),
        "centred".into(),
        "first_offset".into(),
        "nu_star".into(),
        "duality_gap".into(),
    ];
    cols.extend((0..width).map(|k| format!("w{k}")));
    let mut t = Table {
        columns: cols,
        ..Default::default()
    };
    t.meta("m", args.m);
    t.meta("p", args.p);
    t.meta("q", args.q);
    for i in 0..ks.len() {
        let sol = quasiinterp::near_best_anchor(&ks, i, args.p, args.q)?;
        if !args.all_anchors && !(sol.centred && sol.regular) {
            continue;
        }
        let w = sol.functional.weights();
        let mut row: Vec<Cell> = vec![
            i.into(),
            sol.centred.into(),
            sol.functional.offsets()[0].into(),
            sol.solution.nu.into(),
            sol.solution.duality_gap().into(),
        ];
        row.extend((0..width).map(|k| Cell::Num(w.get(k).copied().unwrap_or(0.0))));
        t.push(row);
    }
    Ok(t)
}

fn cmd_norms(args: &NormsArgs, seed: u64) -> Result<Table> {
    let q = build_family(&args.family, seed)?;
    let opts = NormOptions {
        samples_per_span: args.samples,
        polish: !args.no_polish,
        ..Default::default()
    };
    let mut t = Table::new(&[
        "family",
        "nu_bound",
        "empirical",
        "node_level",
        "argmax",
        "samples_per_span",
        "lower_estimate",
    ]);
    let skeleton = normest::empirical_norm_skeleton(&q, &opts)?;
    let est = normest::empirical_norm(&q, &opts)?;
    t.push(vec![
        q.family().to_string().into(),
        q.nu_bound().into(),
        est.value.into(),
        skeleton.value.into(),
        est.argmax.into(),
        args.samples.into(),
        est.lower_estimate.into(),
    ]);
    Ok(t)
}

fn mesh_from_args(args: &BivArgs, seed: u64) -> Result<TensorMesh> {
    if let Some(path) = &args.mesh_file {
        return io::read_mesh(path);
    }
    let x = parse_partition(&args.mesh, seed)?;
    let y = match &args.mesh_y {
        Some(s) => parse_partition(s, seed.wrapping_add(1))?,
        None => x.clone(),
    };
    TensorMesh::new(x, y)
}

fn cmd_biv(args: &BivArgs, seed: u64) -> Result<Table> {
    if let Some(kind) = &args.box_mesh {
        let mesh: BoxMesh = kind.parse()?;
        let c = bivariate::nb_box_coeffs(mesh, args.s)?;
        let mut t = Table::new(&["s", "center", "vertex", "vertices", "nu_star", "empirical"]);
        let emp = match (args.grid, mesh) {
            (Some(g), BoxMesh::FourDirection) => Cell::Num(bivariate::four_direction_norm(&c, g)?),
            _ => Cell::Text(String::new()),
        };
        t.push(vec![
            args.s.into(),
            c.center.into(),
            c.vertex.into(),
            c.vertices.len().into(),
            c.nu.into(),
            emp,
        ]);
        return Ok(t);
    }
    let family: CrissCross = args.family.parse()?;
    let fam = bivariate::crisscross(family, &mesh_from_args(args, seed)?)?;
    let mut t = Table::new(&["i", "j", "west", "east", "south", "north", "center", "nu"]);
    t.meta("family", family.to_string());
    t.meta("nu_bound", fam.nu_bound());
    t.meta("max_directional", fam.max_directional());
    for c in &fam.cells {
        let w = c.weights;
        t.push(vec![
            c.i.into(),
            c.j.into(),
            w.west.into(),
            w.east.into(),
            w.south.into(),
            w.north.into(),
            w.center.into(),
            w.nu().into(),
        ]);
    }
    Ok(t)
}

fn cmd_quad(args: &FamilyArgs, seed: u64) -> Result<Table> {
    let q = build_family(args, seed)?;
    let rule = quadrature::qi_to_quadrature(&q)?;
    let degree = quadrature::exactness_degree(&rule, q.exactness_degree() + 4);
    let mut t = Table::new(&["node", "weight"]);
    t.meta("family", q.family().to_string());
    t.meta("weight_sum", rule.weight_sum());
    t.meta(
        "exactness_degree",
        degree.map(|d| Cell::Int(d as i64)).unwrap_or(Cell::Int(-1)),
    );
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        t.push(vec![(*x).into(), (*w).into()]);
    }
    Ok(t)
}

/// One reproduced value.
#[derive(Debug, Clone)]
pub struct Claim {
    pub id: String,
    pub reference: f64,
    pub computed: f64,
    pub tolerance: f64,
}

impl Claim {
    pub fn passes(&self) -> bool {
        (self.reference - self.computed).abs() <= self.tolerance
    }
}

pub const REPRO_SECTIONS: [&str; 6] = [
    "cardinal-dqi",
    "cardinal-iqi",
    "box-three",
    "box-four",
    "s2-uniform",
    "crisscross",
];

/// Printed values carry three or four decimals.
const PRINTED: f64 = 1e-3;
const NORM_TOL: f64 = 1e-2;

pub fn repro_claims(section: &str) -> Result<Vec<Claim>> {
    let claim = |id: String, reference: f64, computed: f64, tolerance: f64| Claim {
        id,
        reference,
        computed,
        tolerance,
    };
    let opts = NormOptions::default();
    let mut out = Vec::new();
    match section {
        "cardinal-dqi" | "cardinal-iqi" => {
            let (kind, nus, norms) = if section == "cardinal-dqi" {
                (UniformKind::Discrete, [1.666, 1.166, 1.074], [1.222, 1.139, 1.074])
            } else {
                (UniformKind::Integral, [2.333, 1.333, 1.1482], [1.5278, 1.2778, 1.1481])
            };
            for n in 1..=3 {
                let q = match kind {
                    UniformKind::Discrete => quasiinterp::uniform_nb_dqi(4, n, 3)?,
                    UniformKind::Integral => quasiinterp::uniform_nb_iqi(4, n, 3)?,
                };
                out.push(claim(format!("{section}/nu/n={n}"), nus[n - 1], q.nu_bound(), PRINTED));
                let emp = normest::empirical_norm_skeleton(&q, &opts)?.value;
                out.push(claim(format!("{section}/norm/n={n}"), norms[n - 1], emp, NORM_TOL));
            }
        }
        "box-three" | "box-four" => {
            let mesh = if section == "box-three" {
                BoxMesh::ThreeDirection
            } else {
                BoxMesh::FourDirection
            };
            let nus = [2.0, 1.25, 1.111];
            for s in 1..=3 {
                let c = bivariate::nb_box_coeffs(mesh, s)?;
                out.push(claim(format!("{section}/nu/s={s}"), nus[s - 1], c.nu, PRINTED));
                if mesh == BoxMesh::FourDirection {
                    let emp = bivariate::four_direction_norm(&c, 400)?;
                    out.push(claim(format!("{section}/norm/s={s}"), [1.5, 1.25, 1.111][s - 1], emp, NORM_TOL));
                }
            }
        }
        "s2-uniform" => {
            let ks = KnotSequence::clamped(2, &partition::uniform(20))?;
            let q = quasiinterp::s2(&ks)?;
            let opts = NormOptions {
                samples_per_span: 256,
                ..opts
            };
            let emp = normest::empirical_norm_discrete(&q, &opts)?.value;
            out.push(claim("s2-uniform/norm/m=2".into(), 305.0 / 207.0, emp, 5e-3));
        }
        "crisscross" => {
            let mesh = TensorMesh::uniform(6, 6)?;
            let t2 = bivariate::crisscross_t2(&mesh)?;
            let w = t2.cell(3, 3).map(|c| c.weights).ok_or(Error::Infeasible)?;
            out.push(claim("crisscross/t2/directional".into(), -3.0 / 20.0, w.west, 1e-12));
            out.push(claim("crisscross/t2/center".into(), 8.0 / 5.0, w.center, 1e-12));
            out.push(claim("crisscross/t2/nu".into(), 11.0 / 5.0, t2.nu_bound(), 1e-12));
            let g2 = bivariate::crisscross_g2(&mesh)?;
            let w = g2.cell(3, 3).map(|c| c.weights).ok_or(Error::Infeasible)?;
            out.push(claim("crisscross/g2/directional".into(), -1.0 / 6.0, w.west, 1e-12));
            out.push(claim("crisscross/g2/center".into(), 5.0 / 3.0, w.center, 1e-12));
            out.push(claim("crisscross/g2/nu".into(), 7.0 / 3.0, g2.nu_bound(), 1e-12));
        }
        "all" => {
            for s in REPRO_SECTIONS {
                out.extend(repro_claims(s)?);
            }
        }
        other => return Err(Error::Parse(format!("unknown section '{other}'"))),
    }
    Ok(out)
}

fn cmd_repro(args: &ReproArgs) -> Result<(Table, bool)> {
    let claims = repro_claims(&args.section)?;
    let mut t = Table::new(&["claim_id", "reference_value", "computed_value", "abs_diff", "status"]);
    let mut ok = true;
    for c in &claims {
        let pass = c.passes();
        ok &= pass;
        t.push(vec![
            c.id.clone().into(),
            c.reference.into(),
            c.computed.into(),
            (c.reference - c.computed).abs().into(),
            if pass { "pass" } else { "fail" }.into(),
        ]);
    }
    Ok((t, ok))
}

/// Parses a `key=value` config file; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("config line {} lacks '='", n + 1)))?;
        out.insert(k.trim().replace('_', "-"), v.trim().to_string());
    }
    Ok(out)
}

/// Inserts config defaults as flags the user did not give explicitly.
pub fn apply_config(argv: Vec<String>, config: &BTreeMap<String, String>) -> Vec<String> {
    let cmd = Cli::command();
    let given = |key: &str| {
        argv.iter()
            .any(|a| a == &format!("--{key}") || a.starts_with(&format!("--{key}=")))
    };
    let sub_pos = argv
        .iter()
        .position(|a| cmd.find_subcommand(a).is_some());
    let mut global = Vec::new();
    let mut local = Vec::new();
    for (k, v) in config {
        if k == "config" || given(k) {
            continue;
        }
        let is_global = cmd.get_arguments().any(|a| a.get_long() == Some(k.as_str()));
        let accepts_local = sub_pos
            .and_then(|p| cmd.find_subcommand(&argv[p]))
            .map(|s| s.get_arguments().any(|a| a.get_long() == Some(k.as_str()) && !a.is_global_set()))
            .unwrap_or(false);
        let flag = |out: &mut Vec<String>| {
            out.push(format!("--{k}"));
            if !(v == "true" || v.is_empty()) {
                out.push(v.clone());
            }
        };
        if is_global {
            flag(&mut global);
        } else if accepts_local {
            flag(&mut local);
        }
    }
    let mut out = Vec::with_capacity(argv.len() + global.len() + local.len());
    match sub_pos {
        Some(p) => {
            out.extend_from_slice(&argv[..=p]);
            out.extend(local);
            out.extend_from_slice(&argv[p + 1..]);
            out.splice(1..1, global);
        }
        None => {
            out = argv;
            out.splice(1..1, global);
        }
    }
    out
}

fn config_path(argv: &[String]) -> Option<PathBuf> {
    argv.iter().enumerate().find_map(|(k, a)| {
        if a == "--config" {
            argv.get(k + 1).map(PathBuf::from)
        } else {
            a.strip_prefix("--config=").map(PathBuf::from)
        }
    })
}

/// Result of a CLI run: bytes for stdout and stderr plus the exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

fn error_json(kind: &str, message: &str) -> String {
    let mut s = json!({ "error": kind, "message": message }).to_string();
    s.push('\n');
    s
}

/// Runs the CLI on `argv` (including the program name).
pub fn run(argv: Vec<String>) -> Outcome {
    let argv = match config_path(&argv) {
        Some(path) => match std::fs::read_to_string(&path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
            .and_then(|t| parse_config(&t))
        {
            Ok(cfg) => apply_config(argv, &cfg),
            Err(e) => {
                return Outcome {
                    stdout: String::new(),
                    stderr: error_json(e.kind(), &e.to_string()),
                    code: 2,
                }
            }
        },
        None => argv,
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome {
                    stdout: e.to_string(),
                    stderr: String::new(),
                    code: 0,
                };
            }
            return Outcome {
                stdout: String::new(),
                stderr: error_json("usage", e.to_string().trim()),
                code: 2,
            };
        }
    };
    let result = match &cli.command {
        Command::Build(a) => cmd_build(a, cli.seed).map(|t| (t, true)),
        Command::Nearbest(a) => cmd_nearbest(a, cli.seed).map(|t| (t, true)),
        Command::Norms(a) => cmd_norms(a, cli.seed).map(|t| (t, true)),
        Command::Biv(a) => cmd_biv(a, cli.seed).map(|t| (t, true)),
        Command::Quad(a) => cmd_quad(a, cli.seed).map(|t| (t, true)),
        Command::Repro(a) => cmd_repro(a),
    };
    match result {
        Ok((table, ok)) => Outcome {
            stdout: table.render(cli.format),
            stderr: if ok {
                String::new()
            } else {
                error_json("reproduction-failed", "one or more values outside tolerance")
            },
            code: if ok { 0 } else { 1 },
        },
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: error_json(e.kind(), &e.to_string()),
            code: 2,
        },
    }
}
