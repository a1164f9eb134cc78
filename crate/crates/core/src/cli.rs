//! Command-line front end: one subcommand per family of methods, JSON or CSV on stdout.

use std::collections::BTreeMap;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::chain1d::{induction_closed, recursive_open, transfer_closed, ChainParams};
use crate::error::{domain, Error, Result};
use crate::model::{Boundary, Geometry, LatticeSpec, Method, MethodResult, ReducedCouplings};
use crate::oracle::{
    build_lattice_graph, count_matchings, count_matchings_graph, count_matchings_profile,
    enumerate_partition_graph, MatchingWeights, MAX_BACKTRACK_SITES, MAX_ENUMERATION_SITES,
};
use crate::pfaffian::{dimer_count_pfaffian, ising_pfaffian_torus, MAX_SKEW_DIM};
use crate::spectral::{
    dimer_count_free, kacward_partition, kaufman_partition, triangular_log_z_per_site,
};
use crate::thermo::{self, QuadratureSpec, DEFAULT_DK, DEFAULT_POINTS};
use crate::transfer2d::{torus_log_z, MAX_TRANSFER_COLS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERICAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "ising",
    version,
    about = "Exact Ising partition functions, dimer counts and free energies"
)]
pub struct RunRequest {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// ln Z of a finite lattice by one method.
    Z(ZArgs),
    /// -beta f per site in the thermodynamic limit.
    FreeEnergy(FreeEnergyArgs),
    /// Weighted perfect-matching count of a grid.
    Dimers(DimerArgs),
    /// The square-lattice critical coupling.
    Critical(FormatArg),
    /// Every applicable method on one square torus, with the largest disagreement.
    Compare(CompareArgs),
    /// -beta f, u and c over a range of isotropic couplings.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct FormatArg {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ZMethod {
    Oracle,
    Transfer,
    Kaufman,
    Pfaffian,
    Kacward,
    ChainTransfer,
    ChainRecursive,
    ChainInduction,
    TriangularSpectral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeometryArg {
    Chain,
    Square,
    Triangular,
    Honeycomb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundaryArg {
    Free,
    CylinderH,
    CylinderV,
    Torus,
}

#[derive(Debug, Args)]
pub struct ZArgs {
    #[arg(long, value_enum)]
    pub method: ZMethod,
    #[arg(long)]
    pub rows: usize,
    #[arg(long)]
    pub cols: usize,
    #[arg(long)]
    pub kh: f64,
    #[arg(long, default_value_t = 0.0)]
    pub kv: f64,
    #[arg(long)]
    pub kd: Option<f64>,
    /// Field, chain only.
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long, value_enum, default_value = "torus")]
    pub bc: BoundaryArg,
    #[arg(long, value_enum, default_value = "square")]
    pub geometry: GeometryArg,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FreeEnergyMethod {
    Onsager,
    Fermionic,
    Dirac,
    Triangular,
}

#[derive(Debug, Args)]
pub struct FreeEnergyArgs {
    #[arg(long, value_enum)]
    pub method: FreeEnergyMethod,
    #[arg(long)]
    pub k: f64,
    /// Second coupling (defaults to `k`).
    #[arg(long)]
    pub k2: Option<f64>,
    /// Third coupling, triangular only (defaults to `k`).
    #[arg(long)]
    pub k3: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    pub points: usize,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DimerMethod {
    Product,
    Pfaffian,
    Enumerate,
}

#[derive(Debug, Args)]
pub struct DimerArgs {
    #[arg(long)]
    pub rows: usize,
    #[arg(long)]
    pub cols: usize,
    #[arg(long, default_value_t = 1.0)]
    pub z1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub z2: f64,
    /// Omit to run every applicable method.
    #[arg(long, value_enum)]
    pub method: Option<DimerMethod>,
    #[arg(long, value_enum, default_value = "free")]
    pub bc: BoundaryArg,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub rows: usize,
    #[arg(long)]
    pub cols: usize,
    #[arg(long)]
    pub kh: f64,
    #[arg(long)]
    pub kv: f64,
    #[arg(long, value_enum, default_value = "torus")]
    pub bc: BoundaryArg,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub k_from: f64,
    #[arg(long)]
    pub k_to: f64,
    #[arg(long)]
    pub steps: usize,
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    pub points: usize,
    #[arg(long, default_value_t = DEFAULT_DK)]
    pub dk: f64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

impl From<GeometryArg> for Geometry {
    fn from(g: GeometryArg) -> Self {
        match g {
            GeometryArg::Chain => Geometry::Chain,
            GeometryArg::Square => Geometry::Square,
            GeometryArg::Triangular => Geometry::Triangular,
            GeometryArg::Honeycomb => Geometry::Honeycomb,
        }
    }
}

impl From<BoundaryArg> for Boundary {
    fn from(b: BoundaryArg) -> Self {
        match b {
            BoundaryArg::Free => Boundary::Free,
            BoundaryArg::CylinderH => Boundary::CylinderH,
            BoundaryArg::CylinderV => Boundary::CylinderV,
            BoundaryArg::Torus => Boundary::Torus,
        }
    }
}

/// Formats with 17 significant digits; integers below `1e15` print without a fraction.
pub fn format_number(x: f64) -> String {
    if !x.is_finite() {
        return "null".into();
    }
    if x == 0.0 {
        return "0".into();
    }
    if x.fract() == 0.0 && x.abs() < 1e15 {
        return format!("{}", x as i64);
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..16).contains(&exp) {
        format!("{:.*}", (16 - exp) as usize, x)
    } else {
        format!("{:.16e}", x)
    }
}

/// A flat output record: ordered scalar fields plus a parameter map.
struct Record {
    fields: Vec<(&'static str, Value)>,
    params: BTreeMap<String, f64>,
}

enum Value {
    Str(String),
    Num(f64),
    Bool(bool),
}

impl Value {
    fn render(&self, json: bool) -> String {
        match self {
            Value::Str(s) if json => format!("\"{s}\""),
            Value::Str(s) => s.clone(),
            Value::Num(x) => format_number(*x),
            Value::Bool(b) => b.to_string(),
        }
    }
}

impl Record {
    fn new(method: &str) -> Self {
        Record {
            fields: vec![("method", Value::Str(method.into()))],
            params: BTreeMap::new(),
        }
    }

    fn num(mut self, key: &'static str, x: f64) -> Self {
        self.fields.push((key, Value::Num(x)));
        self
    }

    fn flag(mut self, key: &'static str, b: bool) -> Self {
        self.fields.push((key, Value::Bool(b)));
        self
    }

    fn text(mut self, key: &'static str, s: &str) -> Self {
        self.fields.push((key, Value::Str(s.into())));
        self
    }

    fn param(mut self, key: &str, x: f64) -> Self {
        self.params.insert(key.into(), x);
        self
    }

    fn from_result(r: &MethodResult) -> Self {
        let mut rec = Record::new(r.method.as_str())
            .num("log_z", r.log_z)
            .flag("per_site", r.per_site);
        rec.params = r.params.clone();
        rec
    }

    fn json(&self) -> String {
        let mut parts: Vec<String> = self
            .fields
            .iter()
            .map(|(k, v)| format!("\"{k}\":{}", v.render(true)))
            .collect();
        let params: Vec<String> = self
            .params
            .iter()
            .map(|(k, v)| format!("\"{k}\":{}", format_number(*v)))
            .collect();
        parts.push(format!("\"params\":{{{}}}", params.join(",")));
        format!("{{{}}}", parts.join(","))
    }

    fn csv(&self) -> String {
        let mut header: Vec<String> = self.fields.iter().map(|(k, _)| k.to_string()).collect();
        let mut row: Vec<String> = self.fields.iter().map(|(_, v)| v.render(false)).collect();
        for (k, v) in &self.params {
            header.push(k.clone());
            row.push(format_number(*v));
        }
        format!("{}\n{}", header.join(","), row.join(","))
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.json(),
            Format::Csv => self.csv(),
        }
    }
}

/// A command's output and whether it signals a numerical problem.
struct Outcome {
    text: String,
    numerical_flag: Option<String>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome {
            text,
            numerical_flag: None,
        }
    }
}

/// Parses `argv` (program name first), runs the command and returns the exit code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let request = match RunRequest::try_parse_from(argv) {
        Ok(r) => r,
        Err(e) => {
            use clap::error::ErrorKind;
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                EXIT_OK
            } else {
                let _ = write!(err, "{e}");
                EXIT_USAGE
            };
        }
    };
    let outcome = match thread_pool() {
        Ok(Some(pool)) => pool.install(|| dispatch(&request.command)),
        Ok(None) => dispatch(&request.command),
        Err(e) => Err(e),
    };
    match outcome {
        Ok(o) => {
            let _ = writeln!(out, "{}", o.text);
            match o.numerical_flag {
                Some(msg) => {
                    let _ = writeln!(err, "error: {msg}");
                    EXIT_NUMERICAL
                }
                None => EXIT_OK,
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) => EXIT_USAGE,
        Error::Capacity { .. } => EXIT_CAPACITY,
        Error::Singular(_) => EXIT_NUMERICAL,
    }
}

fn thread_pool() -> Result<Option<rayon::ThreadPool>> {
    let Ok(v) = std::env::var("ISING_THREADS") else {
        return Ok(None);
    };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        domain(format!(
            "ISING_THREADS must be a positive integer, got {v:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map(Some)
        .map_err(|e| domain(format!("cannot build thread pool: {e}")))
}

fn dispatch(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Z(a) => z(a),
        Command::FreeEnergy(a) => free_energy(a),
        Command::Dimers(a) => dimers(a),
        Command::Critical(a) => Ok(Outcome::ok(critical().render(a.format))),
        Command::Compare(a) => compare(a),
        Command::Sweep(a) => sweep(a),
    }
}

fn z(a: &ZArgs) -> Result<Outcome> {
    let spec = LatticeSpec::new(a.rows, a.cols, a.geometry.into(), a.bc.into())?;
    let c = ReducedCouplings {
        k_h: a.kh,
        k_v: a.kv,
        k_d: a.kd,
        h: a.h,
    };
    let r = z_method(a.method, &spec, &c)?
        .with("rows", a.rows as f64)
        .with("cols", a.cols as f64)
        .with("kh", a.kh)
        .with("kv", a.kv);
    let r = match (a.kd, a.h) {
        (Some(kd), _) => r.with("kd", kd),
        (_, Some(h)) => r.with("h", h),
        _ => r,
    };
    Ok(Outcome::ok(Record::from_result(&r).render(a.format)))
}

fn unsupported(method: ZMethod, spec: &LatticeSpec) -> Error {
    domain(format!(
        "method {method:?} does not support a {:?} lattice with {:?} boundary",
        spec.geometry(),
        spec.boundary()
    ))
}

/// Runs one `z` method on a lattice.
pub fn z_method(method: ZMethod, spec: &LatticeSpec, c: &ReducedCouplings) -> Result<MethodResult> {
    c.validate()?;
    let (m, n) = (spec.rows(), spec.cols());
    let square_torus = spec.geometry() == Geometry::Square && spec.boundary() == Boundary::Torus;
    let chain = |closed: bool| -> Result<ChainParams> {
        if spec.geometry() != Geometry::Chain || (spec.boundary() == Boundary::Torus) != closed {
            return Err(unsupported(method, spec));
        }
        ChainParams::new(n, c.k_h, c.field(), closed)
    };
    if c.h.is_some() && spec.geometry() != Geometry::Chain {
        return Err(domain("a field is only supported on the chain"));
    }
    let result = match method {
        ZMethod::Oracle => {
            let g = build_lattice_graph(spec, c)?;
            MethodResult::new(Method::Oracle, enumerate_partition_graph(&g, c.field())?)
        }
        ZMethod::Transfer if square_torus => {
            MethodResult::new(Method::Transfer, torus_log_z(m, n, c.k_h, c.k_v)?)
        }
        ZMethod::Kaufman if square_torus => {
            MethodResult::new(Method::Kaufman, kaufman_partition(m, n, c.k_v, c.k_h)?)
        }
        ZMethod::Pfaffian if square_torus => {
            MethodResult::new(Method::Pfaffian, ising_pfaffian_torus(m, n, c.k_h, c.k_v)?)
        }
        ZMethod::Kacward if square_torus => {
            MethodResult::new(Method::KacWard, kacward_partition(m, n, c.k_h, c.k_v)?)
        }
        ZMethod::ChainTransfer => {
            MethodResult::new(Method::ChainTransfer, transfer_closed(&chain(true)?)?)
        }
        ZMethod::ChainInduction => {
            MethodResult::new(Method::ChainInduction, induction_closed(&chain(true)?)?)
        }
        ZMethod::ChainRecursive => {
            MethodResult::new(Method::ChainRecursive, recursive_open(&chain(false)?)?)
        }
        ZMethod::TriangularSpectral
            if spec.geometry() == Geometry::Triangular && spec.boundary() == Boundary::Torus =>
        {
            let kd = c
                .k_d
                .ok_or_else(|| domain("triangular lattice needs --kd"))?;
            MethodResult::new(
                Method::TriangularSpectral,
                triangular_log_z_per_site(m, n, c.k_h, c.k_v, kd)?,
            )
            .per_site()
        }
        _ => return Err(unsupported(method, spec)),
    };
    Ok(result)
}

fn free_energy(a: &FreeEnergyArgs) -> Result<Outcome> {
    let q = QuadratureSpec::new(a.points)?;
    let k2 = a.k2.unwrap_or(a.k);
    let (method, f) = match a.method {
        FreeEnergyMethod::Onsager => (Method::Onsager, thermo::onsager_free_energy(a.k, k2, &q)?),
        FreeEnergyMethod::Fermionic => (Method::Fermionic, thermo::fermionic_free_energy(a.k, &q)?),
        FreeEnergyMethod::Dirac => (Method::Dirac, thermo::dirac_free_energy(a.k, &q)?),
        FreeEnergyMethod::Triangular => (
            Method::Triangular,
            thermo::triangular_free_energy(a.k, k2, a.k3.unwrap_or(a.k), &q)?,
        ),
    };
    let mut rec = Record::new(method.as_str())
        .num("f", f)
        .param("k", a.k)
        .param("points", a.points as f64);
    if matches!(
        a.method,
        FreeEnergyMethod::Onsager | FreeEnergyMethod::Triangular
    ) {
        rec = rec.param("k2", k2);
    }
    if a.method == FreeEnergyMethod::Triangular {
        rec = rec.param("k3", a.k3.unwrap_or(a.k));
    }
    Ok(Outcome::ok(rec.render(a.format)))
}

fn dimer_count(method: DimerMethod, spec: &LatticeSpec, w: MatchingWeights) -> Result<f64> {
    let (m, n) = (spec.rows(), spec.cols());
    match (method, spec.boundary()) {
        (DimerMethod::Product, Boundary::Free) => Ok(dimer_count_free(m, n, w)?.raw),
        (DimerMethod::Product, b) => Err(domain(format!(
            "the product formula is for free boundaries, got {b:?}"
        ))),
        (DimerMethod::Pfaffian, _) => {
            if m * n % 2 == 1 {
                return Ok(0.0);
            }
            crate::error::check_capacity("sites", m * n, MAX_SKEW_DIM)?;
            dimer_count_pfaffian(spec, w)
        }
        (DimerMethod::Enumerate, Boundary::Free)
            if w == MatchingWeights::UNIT && m * n > MAX_BACKTRACK_SITES =>
        {
            Ok(count_matchings_profile(m, n)? as f64)
        }
        (DimerMethod::Enumerate, Boundary::Free) => count_matchings(m, n, w),
        (DimerMethod::Enumerate, b) => {
            let mut edges = Vec::new();
            for r in 0..m {
                for c in 0..n {
                    if c + 1 < n || b.wraps_h() {
                        edges.push((r * n + c, r * n + (c + 1) % n, w.z1));
                    }
                    if r + 1 < m || b.wraps_v() {
                        edges.push((r * n + c, ((r + 1) % m) * n + c, w.z2));
                    }
                }
            }
            count_matchings_graph(m * n, &edges)
        }
    }
}

fn dimers(a: &DimerArgs) -> Result<Outcome> {
    let spec = LatticeSpec::new(a.rows, a.cols, Geometry::Square, a.bc.into())?;
    let w = MatchingWeights::new(a.z1, a.z2)?;
    let methods: Vec<DimerMethod> = match a.method {
        Some(m) => vec![m],
        None if spec.boundary() == Boundary::Free => {
            vec![
                DimerMethod::Product,
                DimerMethod::Pfaffian,
                DimerMethod::Enumerate,
            ]
        }
        None => vec![DimerMethod::Pfaffian, DimerMethod::Enumerate],
    };
    let counts = methods
        .iter()
        .map(|&m| dimer_count(m, &spec, w))
        .collect::<Result<Vec<f64>>>()?;
    let integral = w == MatchingWeights::UNIT;
    let shown = |x: f64| if integral { x.round() } else { x };
    let agree = counts.windows(2).all(|p| {
        if integral {
            p[0].round() == p[1].round()
        } else {
            (p[0] - p[1]).abs() <= 1e-9 * p[0].abs().max(1.0)
        }
    });
    let name = match a.method {
        Some(DimerMethod::Product) => "product",
        Some(DimerMethod::Pfaffian) => "pfaffian",
        Some(DimerMethod::Enumerate) => "enumerate",
        None => "all",
    };
    let mut rec = Record::new(name).num("count", shown(counts[0]));
    if a.method.is_none() {
        for (m, c) in methods.iter().zip(&counts) {
            let key = match m {
                DimerMethod::Product => "product",
                DimerMethod::Pfaffian => "pfaffian",
                DimerMethod::Enumerate => "enumerate",
            };
            rec = rec.num(key, shown(*c));
        }
        rec = rec.flag("agree", agree);
    }
    let rec = rec
        .text("boundary", &format!("{:?}", spec.boundary()).to_lowercase())
        .param("rows", a.rows as f64)
        .param("cols", a.cols as f64)
        .param("z1", a.z1)
        .param("z2", a.z2);
    Ok(Outcome {
        text: rec.render(a.format),
        numerical_flag: (!agree).then(|| "dimer counting methods disagree".to_string()),
    })
}

fn critical() -> Record {
    let kc = thermo::critical_point_square();
    Record::new("critical")
        .num("k_c", kc)
        .num("tanh_k_c", kc.tanh())
        .num("sinh2_sq", (2.0 * kc).sinh().powi(2))
}

/// Every applicable method on one square torus: `(method, log_z)` in a fixed order.
pub fn compare_methods(m: usize, n: usize, k_h: f64, k_v: f64) -> Result<Vec<(Method, f64)>> {
    let spec = LatticeSpec::square_torus(m, n)?;
    let c = ReducedCouplings::square(k_h, k_v);
    let mut methods = Vec::new();
    if spec.num_sites() <= MAX_ENUMERATION_SITES {
        methods.push(ZMethod::Oracle);
    }
    if m.min(n) <= MAX_TRANSFER_COLS {
        methods.push(ZMethod::Transfer);
    }
    methods.push(ZMethod::Kaufman);
    if m >= 2 && n >= 2 && 4 * m * n <= MAX_SKEW_DIM {
        methods.push(ZMethod::Pfaffian);
    }
    methods.push(ZMethod::Kacward);
    methods
        .into_par_iter()
        .map(|method| z_method(method, &spec, &c).map(|r| (r.method, r.log_z)))
        .collect()
}

fn compare(a: &CompareArgs) -> Result<Outcome> {
    if a.bc != BoundaryArg::Torus {
        return Err(domain("compare runs on the square torus only"));
    }
    let results = compare_methods(a.rows, a.cols, a.kh, a.kv)?;
    let mut max_dev = 0.0f64;
    for (i, x) in results.iter().enumerate() {
        for y in &results[i + 1..] {
            max_dev = max_dev.max((x.1 - y.1).abs());
        }
    }
    let params = [
        ("rows", a.rows as f64),
        ("cols", a.cols as f64),
        ("kh", a.kh),
        ("kv", a.kv),
    ];
    let text = match a.format {
        Format::Json => {
            let mut rec = Record::new("compare").num("log_z", results[0].1);
            for (m, z) in &results {
                rec.fields.push((m.as_str(), Value::Num(*z)));
            }
            rec = rec.num("max_deviation", max_dev);
            for (k, v) in params {
                rec = rec.param(k, v);
            }
            rec.json()
        }
        Format::Csv => {
            let mut lines = vec!["method,log_z".to_string()];
            lines.extend(
                results
                    .iter()
                    .map(|(m, z)| format!("{m},{}", format_number(*z))),
            );
            lines.push(format!("max_deviation,{}", format_number(max_dev)));
            lines.join("\n")
        }
    };
    Ok(Outcome::ok(text))
}

fn sweep(a: &SweepArgs) -> Result<Outcome> {
    if a.steps == 0 {
        return Err(domain("--steps must be at least 1"));
    }
    let q = QuadratureSpec::new(a.points)?;
    let ks: Vec<f64> = (0..a.steps)
        .map(|i| {
            if a.steps == 1 {
                a.k_from
            } else {
                a.k_from + (a.k_to - a.k_from) * i as f64 / (a.steps - 1) as f64
            }
        })
        .collect();
    let rows = ks
        .par_iter()
        .map(|&k| {
            Ok([
                k,
                thermo::onsager_free_energy(k, k, &q)?,
                thermo::internal_energy(k, a.dk, &q)?,
                thermo::specific_heat(k, a.dk, &q)?,
            ])
        })
        .collect::<Result<Vec<[f64; 4]>>>()?;
    let text = match a.format {
        Format::Csv => {
            let mut lines = vec!["k,neg_beta_f,u,c".to_string()];
            lines.extend(rows.iter().map(|r| r.map(format_number).join(",")));
            lines.join("\n")
        }
        Format::Json => {
            let body: Vec<String> = rows
                .iter()
                .map(|r| {
                    let [k, f, u, c] = r.map(format_number);
                    format!("{{\"k\":{k},\"neg_beta_f\":{f},\"u\":{u},\"c\":{c}}}")
                })
                .collect();
            format!(
                "{{\"method\":\"sweep\",\"rows\":[{}],\"params\":{{\"dk\":{},\"points\":{},\"steps\":{}}}}}",
                body.join(","),
                format_number(a.dk),
                a.points,
                a.steps
            )
        }
    };
    Ok(Outcome::ok(text))
}
