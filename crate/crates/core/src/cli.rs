//! Command-line front end.
//!
//! Every output starts with `#` metadata lines (schema version, the
//! canonical command that regenerates the file, and the input parameters),
//! followed by a header row and data rows. Numbers carry 12 significant
//! digits. `--format json` emits the same fields as one JSON object.
//!
//! Exit codes: 0 success, 1 invalid input, 2 failed verification.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::analytic::{
    component_jet, mode_bound, normalized_spinor_samples, psi2_value, spinor_samples, zero_mode,
    zero_mode_count, zero_mode_spectrum, KySign, ZeroMode,
};
use crate::error::{Error, Result};
use crate::model::{
    classify_regime, effective_potential, effective_potential_from_well, potential_value,
    scarf_parameters, scarf_potential_value, Branch, PotentialParams, Regime, ScarfCase,
};
use crate::numeric::{
    dirac_residual, estimate_decay_rate, schrodinger_residual, shoot_spectrum, Grid,
};

pub const SCHEMA_VERSION: u32 = 1;

/// `hbar * v_F` in meV·nm for `v_F = 1e6 m/s`.
pub const HBAR_VF_MEV_NM: f64 = 658.2119569;

const SIGNIFICANT_DIGITS: usize = 12;
const PROGRAM: &str = "zero-modes";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "zero-modes",
    version,
    about = "Zero-energy bound states of graphene in the well V(x) = -lambda sech x + mu tanh x",
    after_help = "Outputs begin with '#' metadata lines; the '# command:' line regenerates the file byte for byte.\n\
                  Exit codes: 0 success, 1 invalid input, 2 verification failure."
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

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
    /// Admissible zero modes: columns n,k_y,kappa,regime.
    Spectrum(WellArgs),
    /// Sampled spinor of one mode: columns x,re_psi_a,im_psi_a,re_psi_b,im_psi_b.
    Wavefunction(WavefunctionArgs),
    /// Potential profile with and without the tanh term: columns x,V,V_tilde.
    Potential(PotentialArgs),
    /// Run every consistency check for one well; exit 2 if any fails.
    Verify(VerifyArgs),
    /// Mode counts over a (lambda, mu) grid.
    Scan(ScanArgs),
    /// Convert a dimensionless ky to physical units.
    Units(UnitsArgs),
}

#[derive(Debug, Clone, Copy, Args)]
pub struct WellArgs {
    /// Depth of the sech well (positive binds electrons, negative binds holes).
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: f64,
    /// Strength of the tanh asymmetry.
    #[arg(long, allow_negative_numbers = true)]
    pub mu: f64,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct XRange {
    #[arg(long, allow_negative_numbers = true, default_value_t = -10.0)]
    pub x_min: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = 10.0)]
    pub x_max: f64,
    /// Number of sample points, endpoints included.
    #[arg(long, default_value_t = 201)]
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    #[value(alias = "+")]
    Plus,
    #[value(alias = "-")]
    Minus,
}

impl From<SignArg> for KySign {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Plus => KySign::Plus,
            SignArg::Minus => KySign::Minus,
        }
    }
}

#[derive(Debug, Clone, Copy, Args)]
pub struct WavefunctionArgs {
    #[command(flatten)]
    pub well: WellArgs,
    /// Mode number, `0 <= n < |lambda| - 1/2`.
    #[arg(long)]
    pub n: usize,
    /// Sign of ky; `minus` swaps the two sublattice components.
    #[arg(long, value_enum, default_value_t = SignArg::Plus, allow_hyphen_values = true)]
    pub ky_sign: SignArg,
    #[command(flatten)]
    pub range: XRange,
    /// Scale to unit L2 norm over the sampled range.
    #[arg(long)]
    pub normalize: bool,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct PotentialArgs {
    #[command(flatten)]
    pub well: WellArgs,
    #[command(flatten)]
    pub range: XRange,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Profile {
    /// Residual 1e-8, oracle 1e-6, grid spacing 0.01.
    Fast,
    /// Residual 1e-10, oracle 1e-7, grid spacing 0.002.
    Strict,
}

/// Tolerances and resolution of one verification run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifySettings {
    pub residual_tol: f64,
    pub oracle_tol: f64,
    pub spacing: f64,
    pub half_width: f64,
}

impl Profile {
    pub fn settings(self) -> VerifySettings {
        match self {
            Profile::Fast => VerifySettings { residual_tol: 1e-8, oracle_tol: 1e-6, spacing: 0.01, half_width: 25.0 },
            Profile::Strict => VerifySettings { residual_tol: 1e-10, oracle_tol: 1e-7, spacing: 0.002, half_width: 25.0 },
        }
    }
}

#[derive(Debug, Clone, Copy, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub well: WellArgs,
    #[arg(long, value_enum, default_value_t = Profile::Fast)]
    pub profile: Profile,
    /// Override the profile's residual tolerance.
    #[arg(long)]
    pub residual_tol: Option<f64>,
    /// Override the profile's oracle tolerance on ky.
    #[arg(long)]
    pub oracle_tol: Option<f64>,
    /// Half-width L of the grid [-L, L] used by every check.
    #[arg(long, env = "ZERO_MODES_HALF_WIDTH", default_value_t = 25.0)]
    pub half_width: f64,
}

impl VerifyArgs {
    pub fn settings(&self) -> VerifySettings {
        let base = self.profile.settings();
        VerifySettings {
            residual_tol: self.residual_tol.unwrap_or(base.residual_tol),
            oracle_tol: self.oracle_tol.unwrap_or(base.oracle_tol),
            half_width: self.half_width,
            ..base
        }
    }
}

/// Closed interval written `a:b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub start: f64,
    pub end: f64,
}

impl Interval {
    /// `steps` evenly spaced values from `start` to `end` inclusive.
    pub fn samples(self, steps: usize) -> Vec<f64> {
        if steps == 1 {
            return vec![self.start];
        }
        (0..steps)
            .map(|i| {
                if i + 1 == steps {
                    self.end
                } else {
                    self.start + (self.end - self.start) * i as f64 / (steps - 1) as f64
                }
            })
            .collect()
    }
}

impl std::str::FromStr for Interval {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (a, b) = s.split_once(':').ok_or_else(|| format!("expected start:end, got '{s}'"))?;
        let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("'{t}': {e}"));
        let (start, end) = (parse(a)?, parse(b)?);
        if !(start.is_finite() && end.is_finite()) {
            return Err(format!("interval bounds must be finite, got '{s}'"));
        }
        Ok(Self { start, end })
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, Copy, Args)]
pub struct ScanArgs {
    /// lambda interval `start:end`.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda_range: Interval,
    #[arg(long, default_value_t = 21)]
    pub lambda_steps: usize,
    /// mu interval `start:end`.
    #[arg(long, allow_hyphen_values = true, default_value = "0:0")]
    pub mu_range: Interval,
    #[arg(long, default_value_t = 1)]
    pub mu_steps: usize,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct UnitsArgs {
    /// Dimensionless transverse momentum.
    #[arg(long, allow_negative_numbers = true)]
    pub ky: f64,
    /// Length unit of x in nanometers.
    #[arg(long, allow_negative_numbers = true)]
    pub length_nm: f64,
}

/// `(E in meV, ky in 1/nm)` for a dimensionless `ky` when `x` is measured
/// in units of `length_scale_nm`.
pub fn convert_units(ky: f64, length_scale_nm: f64) -> Result<(f64, f64)> {
    if !(length_scale_nm > 0.0 && length_scale_nm.is_finite()) {
        return Err(Error::InvalidLengthScale(length_scale_nm));
    }
    let ky_per_nm = ky / length_scale_nm;
    Ok((HBAR_VF_MEV_NM * ky_per_nm, ky_per_nm))
}

/// `value` rounded to 12 significant digits, `%g` style: fixed notation for
/// decimal exponents in `[-5, 12)`, otherwise `mantissa e exponent`.
/// Trailing zeros are dropped and `-0` prints as `0`.
pub fn format_number(value: f64) -> String {
    if value.is_nan() {
        return "NaN".into();
    }
    if value.is_infinite() {
        return if value > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if value == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, value);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp) as usize;
        let fixed = trim_zeros(&format!("{value:.decimals$}"));
        if fixed == "-0" { "0".into() } else { fixed }
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format_number(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            // round-trips through the CSV text so both formats carry the same digits
            Cell::Num(v) => format_number(*v)
                .parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
                .map_or(Value::Null, Value::Number),
            Cell::Int(v) => json!(v),
            Cell::Text(s) => json!(s),
            Cell::Empty => Value::Null,
        }
    }
}

/// Echoed input value.
#[derive(Debug, Clone, PartialEq)]
pub enum Param {
    Num(f64),
    Int(u64),
    Text(String),
}

impl Param {
    fn text(&self) -> String {
        match self {
            Param::Num(v) => v.to_string(),
            Param::Int(v) => v.to_string(),
            Param::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Param::Num(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Param::Int(v) => json!(v),
            Param::Text(s) => json!(s),
        }
    }
}

/// A command's complete output.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub command: String,
    pub params: Vec<(&'static str, Param)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.render_csv(),
            Format::Json => self.render_json(),
        }
    }

    fn render_csv(&self) -> String {
        let mut s = String::new();
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={}", v.text())).collect();
        let _ = writeln!(s, "# schema_version: {SCHEMA_VERSION}");
        let _ = writeln!(s, "# command: {}", self.command);
        let _ = writeln!(s, "# params: {}", params.join(" "));
        let _ = writeln!(s, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }

    fn render_json(&self) -> String {
        let params: Map<String, Value> = self.params.iter().map(|(k, v)| (k.to_string(), v.json())).collect();
        let rows: Vec<Value> = self.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
        let doc = json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "params": params,
            "columns": self.columns,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }
}

/// Canonical command line: `--flag=value` pairs with shortest round-trip floats.
fn command_line(sub: &str, flags: &[(&str, String)], format: Format) -> String {
    let mut s = format!("{PROGRAM} {sub}");
    for (k, v) in flags {
        if v.is_empty() {
            let _ = write!(s, " --{k}");
        } else {
            let _ = write!(s, " --{k}={v}");
        }
    }
    let _ = write!(s, " --format={}", format_name(format));
    s
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

fn well_params(w: &WellArgs) -> Result<PotentialParams> {
    PotentialParams::new(w.lambda, w.mu)
}

fn well_echo(p: PotentialParams) -> Vec<(&'static str, Param)> {
    vec![("lambda", Param::Num(p.lambda)), ("mu", Param::Num(p.mu))]
}

fn well_flags(p: PotentialParams) -> Vec<(&'static str, String)> {
    vec![("lambda", p.lambda.to_string()), ("mu", p.mu.to_string())]
}

fn range_flags(r: &XRange) -> Vec<(&'static str, String)> {
    vec![("x-min", r.x_min.to_string()), ("x-max", r.x_max.to_string()), ("points", r.points.to_string())]
}

fn range_echo(r: &XRange) -> Vec<(&'static str, Param)> {
    vec![
        ("x_min", Param::Num(r.x_min)),
        ("x_max", Param::Num(r.x_max)),
        ("points", Param::Int(r.points as u64)),
    ]
}

/// Error with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: EXIT_INVALID, message: e.to_string() }
    }
}

/// Result of a command: the table plus the exit code to report.
pub struct Outcome {
    pub table: Table,
    pub code: i32,
    pub summary: Option<String>,
}

impl From<Table> for Outcome {
    fn from(table: Table) -> Self {
        Outcome { table, code: EXIT_OK, summary: None }
    }
}

pub fn cmd_spectrum(w: &WellArgs, format: Format) -> std::result::Result<Table, Failure> {
    let p = well_params(w)?;
    let modes = zero_mode_spectrum(p)?;
    Ok(Table {
        command: command_line("spectrum", &well_flags(p), format),
        params: well_echo(p),
        columns: vec!["n", "k_y", "kappa", "regime"],
        rows: modes
            .iter()
            .map(|m| {
                vec![Cell::Int(m.n as i64), Cell::Num(m.ky), Cell::Num(m.kappa), Cell::Text(m.regime.to_string())]
            })
            .collect(),
    })
}

fn sample_grid(r: &XRange) -> Result<Grid> {
    Grid::new(r.x_min, r.x_max, r.points)
}

pub fn cmd_wavefunction(a: &WavefunctionArgs, format: Format) -> std::result::Result<Table, Failure> {
    let p = well_params(&a.well)?;
    let grid = sample_grid(&a.range)?;
    let mode = zero_mode(p, a.n).map_err(|e| match e {
        Error::InadmissibleMode { .. } => {
            let count = zero_mode_count(p);
            Failure {
                code: EXIT_INVALID,
                message: format!("{e}; valid range for lambda = {}: n = 0..={}", p.lambda, count - 1),
            }
        }
        Error::NoBoundStates { .. } => Failure {
            code: EXIT_INVALID,
            message: format!("{e}; no n is admissible (need |lambda| > 1/2, bound |lambda| - 1/2 = {})", mode_bound(p)),
        },
        other => other.into(),
    })?;
    let sign = KySign::from(a.ky_sign);
    let samples = if a.normalize {
        normalized_spinor_samples(p, &mode, sign, &grid)?.0
    } else {
        spinor_samples(p, &mode, sign, &grid)?
    };
    let mut flags = well_flags(p);
    flags.push(("n", a.n.to_string()));
    flags.push(("ky-sign", sign_name(a.ky_sign).into()));
    flags.extend(range_flags(&a.range));
    if a.normalize {
        flags.push(("normalize", String::new()));
    }
    let mut params = well_echo(p);
    params.push(("n", Param::Int(a.n as u64)));
    params.push(("ky_sign", Param::Text(sign_name(a.ky_sign).into())));
    params.extend(range_echo(&a.range));
    params.push(("normalize", Param::Text(a.normalize.to_string())));
    params.push(("k_y", Param::Num(sign.apply(mode.ky))));
    Ok(Table {
        command: command_line("wavefunction", &flags, format),
        params,
        columns: vec!["x", "re_psi_a", "im_psi_a", "re_psi_b", "im_psi_b"],
        rows: samples
            .iter()
            .map(|s| {
                vec![
                    Cell::Num(s.x),
                    Cell::Num(s.psi_a.re),
                    Cell::Num(s.psi_a.im),
                    Cell::Num(s.psi_b.re),
                    Cell::Num(s.psi_b.im),
                ]
            })
            .collect(),
    })
}

fn sign_name(s: SignArg) -> &'static str {
    match s {
        SignArg::Plus => "plus",
        SignArg::Minus => "minus",
    }
}

pub fn cmd_potential(a: &PotentialArgs, format: Format) -> std::result::Result<Table, Failure> {
    let p = well_params(&a.well)?;
    let grid = sample_grid(&a.range)?;
    let symmetric = p.without_asymmetry();
    let mut flags = well_flags(p);
    flags.extend(range_flags(&a.range));
    let mut params = well_echo(p);
    params.extend(range_echo(&a.range));
    Ok(Table {
        command: command_line("potential", &flags, format),
        params,
        columns: vec!["x", "V", "V_tilde"],
        rows: grid
            .points()
            .map(|x| vec![Cell::Num(x), Cell::Num(potential_value(p, x)), Cell::Num(potential_value(symmetric, x))])
            .collect(),
    })
}

/// One line of the verification report.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub comparison: Comparison,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    AtMost,
    Above,
    Below,
}

impl Comparison {
    fn symbol(self) -> &'static str {
        match self {
            Comparison::AtMost => "<=",
            Comparison::Above => ">",
            Comparison::Below => "<",
        }
    }
}

impl Check {
    fn at_most(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self { name: name.into(), measured, comparison: Comparison::AtMost, tolerance }
    }

    pub fn passed(&self) -> bool {
        match self.comparison {
            Comparison::AtMost => self.measured <= self.tolerance,
            Comparison::Above => self.measured > self.tolerance,
            Comparison::Below => self.measured < self.tolerance,
        }
    }
}

/// Tail window for the decay fit.
const DECAY_TAIL: (f64, f64) = (8.0, 20.0);
const DECAY_REL_TOL: f64 = 0.01;
/// The oracle bisects to this fraction of the oracle tolerance.
const BISECTION_FRACTION: f64 = 1e-3;
/// Schrödinger residuals scale with the second derivative, so they get
/// this multiple of the residual tolerance.
const SCHRODINGER_FACTOR: f64 = 100.0;

/// Every consistency check for one well.
pub fn verification_checks(p: PotentialParams, s: &VerifySettings) -> Result<Vec<Check>> {
    if classify_regime(p) == Regime::Invalid {
        return Err(Error::InvalidRegime);
    }
    let hw = s.half_width;
    if !(hw > 0.0 && hw.is_finite()) {
        return Err(Error::InvalidGrid(format!("half width must be positive, got {hw}")));
    }
    let grid = Grid::with_spacing(-hw, hw, s.spacing)?;
    let tol = s.residual_tol;
    let modes = zero_mode_spectrum(p)?;
    let mut checks = Vec::new();

    let ky_probe = modes.first().map_or(p.mu.abs() + 1.0, |m| m.ky);
    let mut equivalence: f64 = 0.0;
    let mut scarf: f64 = 0.0;
    for br in [Branch::Plus, Branch::Minus] {
        let sets = scarf_parameters(p, br);
        for x in grid.points() {
            let closed = effective_potential(p, br, ky_probe, x);
            let scale = closed.norm().max(1.0);
            equivalence = equivalence.max((closed - effective_potential_from_well(p, br, ky_probe, x)).norm() / scale);
            let shift = ky_probe * ky_probe - p.mu * p.mu;
            for set in sets {
                scarf = scarf.max((scarf_potential_value(set, x) + shift - closed).norm() / scale);
            }
        }
    }
    checks.push(Check::at_most("effective potential forms agree", equivalence, tol));
    checks.push(Check::at_most("Scarf II reconstruction (4 cases x 2 branches)", scarf, tol));

    let pt: f64 = [Branch::Plus, Branch::Minus]
        .iter()
        .flat_map(|&br| {
            grid.points()
                .map(move |x| (effective_potential(p, br, ky_probe, -x).conj() - effective_potential(p, br, ky_probe, x)).norm())
        })
        .fold(0.0, f64::max);
    checks.push(if p.mu == 0.0 {
        Check::at_most("PT symmetry at mu = 0", pt, tol)
    } else {
        Check { name: "PT symmetry broken for mu != 0".into(), measured: pt, comparison: Comparison::Above, tolerance: tol }
    });

    let case_d = scarf_parameters(p, Branch::Plus)
        .into_iter()
        .find(|s| s.case == ScarfCase::D)
        .expect("case D present");
    checks.push(Check {
        name: "case (d) excluded: Re A".into(),
        measured: case_d.a.re,
        comparison: Comparison::Below,
        tolerance: 0.0,
    });

    let shoot_grid = Grid::with_spacing(-hw, hw, s.spacing)?;
    let oracle = shoot_spectrum(p, p.lambda.abs() + p.mu.abs(), &shoot_grid, s.oracle_tol * BISECTION_FRACTION)?;
    let count_gap = (oracle.len() as f64 - modes.len() as f64).abs();
    let count_name = if modes.is_empty() {
        "empty-spectrum agreement (oracle roots)".to_string()
    } else {
        format!("mode count agreement ({} modes)", modes.len())
    };
    checks.push(Check::at_most(count_name, count_gap, 0.0));
    if !modes.is_empty() {
        let mut a: Vec<f64> = modes.iter().map(|m| m.ky).collect();
        let mut o: Vec<f64> = oracle.iter().map(|r| r.ky).collect();
        a.sort_by(f64::total_cmp);
        o.sort_by(f64::total_cmp);
        let worst = if a.len() == o.len() {
            a.iter().zip(&o).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
        } else {
            f64::INFINITY
        };
        checks.push(Check::at_most("oracle ky agreement", worst, s.oracle_tol));
    }

    for m in &modes {
        checks.extend(mode_checks(p, m, &grid, s)?);
    }
    Ok(checks)
}

fn mode_checks(p: PotentialParams, m: &ZeroMode, grid: &Grid, s: &VerifySettings) -> Result<Vec<Check>> {
    let tol = s.residual_tol;
    let tag = format!("[n={}]", m.n);
    let samples = spinor_samples(p, m, KySign::Plus, grid)?;
    let dirac = dirac_residual(p, m.ky, &samples)?;
    let swapped = spinor_samples(p, m, KySign::Minus, grid)?;
    let dirac_swapped = dirac_residual(p, -m.ky, &swapped)?;

    let mut schrodinger: f64 = 0.0;
    for br in [Branch::Plus, Branch::Minus] {
        let jets = grid
            .points()
            .map(|x| component_jet(p, m, br, x).map(|j| (x, j)))
            .collect::<Result<Vec<_>>>()?;
        let values: Vec<(f64, Complex64)> = jets.iter().map(|(x, j)| (*x, j.value)).collect();
        let d2: Vec<Complex64> = jets.iter().map(|(_, j)| j.d2).collect();
        schrodinger = schrodinger.max(schrodinger_residual(p, br, m.ky, &values, &d2)?);
    }

    let i = Complex64::i();
    let mut intertwining: f64 = 0.0;
    for x in grid.points() {
        let j1 = component_jet(p, m, Branch::Plus, x)?;
        let j2 = component_jet(p, m, Branch::Minus, x)?;
        let v = potential_value(p, x);
        let scale = j1.value.norm().max(1.0);
        let rebuilt = (i * v * j1.value + j1.d1) / m.ky;
        let partner = psi2_value(p, m, x)?;
        let forward = (rebuilt - partner).norm() / scale;
        let backward = (v * j2.value + i * j2.d1 - i * m.ky * j1.value).norm() / scale;
        intertwining = intertwining.max(forward).max(backward);
    }

    let (lo, hi) = DECAY_TAIL;
    let tail: Vec<_> = samples.iter().copied().filter(|t| t.x <= hi.min(grid.x_max())).collect();
    let tail_start = lo.min(0.5 * grid.x_max());
    let fitted = estimate_decay_rate(&tail, tail_start)?;

    Ok(vec![
        Check::at_most(format!("Dirac residual {tag}"), dirac, tol),
        Check::at_most(format!("Dirac residual of swapped spinor at -ky {tag}"), dirac_swapped, tol),
        Check::at_most(format!("Schrodinger residual {tag}"), schrodinger, SCHRODINGER_FACTOR * tol),
        Check::at_most(format!("intertwining relations {tag}"), intertwining, tol),
        Check::at_most(format!("decay rate vs kappa = {} (relative) {tag}", format_number(m.kappa)), (fitted - m.kappa).abs() / m.kappa, DECAY_REL_TOL),
    ])
}

pub fn cmd_verify(a: &VerifyArgs, format: Format) -> std::result::Result<Outcome, Failure> {
    let p = well_params(&a.well)?;
    let settings = a.settings();
    for (name, v) in [("residual tolerance", settings.residual_tol), ("oracle tolerance", settings.oracle_tol)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidParams(format!("{name} must be positive, got {v}")).into());
        }
    }
    let checks = verification_checks(p, &settings)?;
    let failed = checks.iter().filter(|c| !c.passed()).count();

    let mut flags = well_flags(p);
    flags.push(("profile", profile_name(a.profile).into()));
    if let Some(t) = a.residual_tol {
        flags.push(("residual-tol", t.to_string()));
    }
    if let Some(t) = a.oracle_tol {
        flags.push(("oracle-tol", t.to_string()));
    }
    flags.push(("half-width", settings.half_width.to_string()));
    let mut params = well_echo(p);
    params.extend([
        ("profile", Param::Text(profile_name(a.profile).into())),
        ("residual_tol", Param::Num(settings.residual_tol)),
        ("oracle_tol", Param::Num(settings.oracle_tol)),
        ("spacing", Param::Num(settings.spacing)),
        ("half_width", Param::Num(settings.half_width)),
    ]);
    let table = Table {
        command: command_line("verify", &flags, format),
        params,
        columns: vec!["check", "measured", "comparison", "tolerance", "status"],
        rows: checks
            .iter()
            .map(|c| {
                vec![
                    Cell::Text(c.name.clone()),
                    Cell::Num(c.measured),
                    Cell::Text(c.comparison.symbol().into()),
                    Cell::Num(c.tolerance),
                    Cell::Text(if c.passed() { "pass" } else { "FAIL" }.into()),
                ]
            })
            .collect(),
    };
    let modes = zero_mode_count(p);
    Ok(Outcome {
        table,
        code: if failed == 0 { EXIT_OK } else { EXIT_VERIFY_FAILED },
        summary: Some(format!("verify: {} checks, {failed} failed, {modes} modes", checks.len())),
    })
}

fn profile_name(p: Profile) -> &'static str {
    match p {
        Profile::Fast => "fast",
        Profile::Strict => "strict",
    }
}

pub fn cmd_scan(a: &ScanArgs, format: Format) -> std::result::Result<Table, Failure> {
    if a.lambda_steps == 0 || a.mu_steps == 0 {
        return Err(Error::InvalidParams("step counts must be at least 1".into()).into());
    }
    let cells: Vec<(f64, f64)> = a
        .lambda_range
        .samples(a.lambda_steps)
        .into_iter()
        .flat_map(|l| a.mu_range.samples(a.mu_steps).into_iter().map(move |m| (l, m)))
        .collect();
    let mut rows: Vec<(f64, f64, Vec<Cell>)> = cells
        .par_iter()
        .map(|&(lambda, mu)| {
            let p = PotentialParams::new(lambda, mu)?;
            let regime = classify_regime(p);
            let modes = if regime == Regime::Invalid { Vec::new() } else { zero_mode_spectrum(p)? };
            let ky = |f: fn(f64, f64) -> f64| modes.iter().map(|m| m.ky).reduce(f).map_or(Cell::Empty, Cell::Num);
            Ok((
                lambda,
                mu,
                vec![
                    Cell::Num(lambda),
                    Cell::Num(mu),
                    Cell::Text(regime.to_string()),
                    Cell::Int(modes.len() as i64),
                    ky(f64::min),
                    ky(f64::max),
                ],
            ))
        })
        .collect::<Result<_>>()?;
    rows.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    let flags = [
        ("lambda-range", a.lambda_range.to_string()),
        ("lambda-steps", a.lambda_steps.to_string()),
        ("mu-range", a.mu_range.to_string()),
        ("mu-steps", a.mu_steps.to_string()),
    ];
    Ok(Table {
        command: command_line("scan", &flags, format),
        params: vec![
            ("lambda_range", Param::Text(a.lambda_range.to_string())),
            ("lambda_steps", Param::Int(a.lambda_steps as u64)),
            ("mu_range", Param::Text(a.mu_range.to_string())),
            ("mu_steps", Param::Int(a.mu_steps as u64)),
        ],
        columns: vec!["lambda", "mu", "regime", "mode_count", "ky_min", "ky_max"],
        rows: rows.into_iter().map(|r| r.2).collect(),
    })
}

pub fn cmd_units(a: &UnitsArgs, format: Format) -> std::result::Result<Table, Failure> {
    let (e_mev, ky_per_nm) = convert_units(a.ky, a.length_nm)?;
    let flags = [("ky", a.ky.to_string()), ("length-nm", a.length_nm.to_string())];
    Ok(Table {
        command: command_line("units", &flags, format),
        params: vec![("ky", Param::Num(a.ky)), ("length_nm", Param::Num(a.length_nm))],
        columns: vec!["ky", "length_nm", "ky_per_nm", "E_meV"],
        rows: vec![vec![Cell::Num(a.ky), Cell::Num(a.length_nm), Cell::Num(ky_per_nm), Cell::Num(e_mev)]],
    })
}

/// Execute a parsed command.
pub fn execute(cli: &Cli) -> std::result::Result<Outcome, Failure> {
    let f = cli.format;
    match &cli.command {
        Command::Spectrum(a) => cmd_spectrum(a, f).map(Outcome::from),
        Command::Wavefunction(a) => cmd_wavefunction(a, f).map(Outcome::from),
        Command::Potential(a) => cmd_potential(a, f).map(Outcome::from),
        Command::Verify(a) => cmd_verify(a, f),
        Command::Scan(a) => cmd_scan(a, f).map(Outcome::from),
        Command::Units(a) => cmd_units(a, f).map(Outcome::from),
    }
}

/// Parse `args` (program name first), run, and write the result. Returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_INVALID
                }
            };
        }
    };
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            return f.code;
        }
    };
    let text = outcome.table.render(cli.format);
    let written = match &cli.output {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => out.write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: cannot write output: {e}");
        return EXIT_INVALID;
    }
    if let Some(summary) = outcome.summary {
        let _ = writeln!(err, "{summary}");
    }
    outcome.code
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn number_formatting() {
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(-0.0), "0");
        assert_eq!(format_number(-1e-300 * 1e-300), "0");
        assert_eq!(format_number(13.25f64.sqrt()), "3.64005494464");
        assert_eq!(format_number(-4.0), "-4");
        assert_eq!(format_number(0.5), "0.5");
        assert_eq!(format_number(1e-5), "0.00001");
        assert_eq!(format_number(1.5e-7), "1.5e-7");
        assert_eq!(format_number(123456789012.0), "123456789012");
        assert_eq!(format_number(1234567890123.0), "1.23456789012e12");
        assert_eq!(format_number(9.99999999999995), "10");
        assert_eq!(format_number(f64::INFINITY), "inf");
        assert_eq!(format_number(f64::NAN), "NaN");
    }

    #[test]
    fn formatting_keeps_twelve_digits() {
        for v in [std::f64::consts::PI, -std::f64::consts::E * 1e-9, 6.02214076e23, 0.1 + 0.2] {
            let back: f64 = format_number(v).parse().unwrap();
            assert_relative_eq!(back, v, max_relative = 5e-12);
        }
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(Cell::Text("a,b".into()).csv(), "\"a,b\"");
        assert_eq!(Cell::Text("say \"hi\"".into()).csv(), "\"say \"\"hi\"\"\"");
        assert_eq!(Cell::Text("plain".into()).csv(), "plain");
    }

    #[test]
    fn units() {
        assert_eq!(convert_units(0.0, 3.0).unwrap(), (0.0, 0.0));
        let (e, k) = convert_units(1.0, 1.0).unwrap();
        assert_eq!(k, 1.0);
        assert_relative_eq!(e, 658.2, max_relative = 1e-4);
        let (_, k) = convert_units(3.6400549, 10.0).unwrap();
        assert_relative_eq!(k, 0.36400549, max_relative = 1e-15);
        assert_eq!(convert_units(1.0, 0.0), Err(Error::InvalidLengthScale(0.0)));
        assert!(convert_units(1.0, -2.0).is_err());
    }

    #[test]
    fn interval_parsing() {
        let i: Interval = "-1:1".parse().unwrap();
        assert_eq!(i, Interval { start: -1.0, end: 1.0 });
        assert_eq!(i.to_string(), "-1:1");
        assert_eq!(i.samples(3), vec![-1.0, 0.0, 1.0]);
        assert_eq!(i.samples(1), vec![-1.0]);
        assert!("1".parse::<Interval>().is_err());
        assert!("a:1".parse::<Interval>().is_err());
    }

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("zero-modes").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn spectrum_table() {
        let (code, out, _) = run_args(&["spectrum", "--lambda", "4", "--mu", "1"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(lines[0], "n,k_y,kappa,regime");
        assert_eq!(lines[1], "0,3.64005494464,3.5,ElectronBound");
        assert_eq!(lines.len(), 5);
        assert!(out.contains("# command: zero-modes spectrum --lambda=4 --mu=1 --format=csv\n"));
    }

    #[test]
    fn json_mirrors_csv() {
        let (code, out, _) = run_args(&["spectrum", "--lambda=-4", "--mu=1", "--format", "json"]);
        assert_eq!(code, 0);
        let doc: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(doc["schema_version"], 1);
        assert_eq!(doc["columns"], json!(["n", "k_y", "kappa", "regime"]));
        assert_eq!(doc["rows"].as_array().unwrap().len(), 4);
        assert_eq!(doc["rows"][0][3], "HoleBound");
        assert_eq!(doc["params"]["lambda"], -4.0);
    }

    #[test]
    fn invalid_regime_is_a_validation_error() {
        let (code, out, err) = run_args(&["spectrum", "--lambda", "0", "--mu", "1"]);
        assert_eq!(code, EXIT_INVALID);
        assert!(out.is_empty());
        assert!(err.contains("Invalid"), "{err}");
    }

    #[test]
    fn help_exits_cleanly() {
        let (code, out, _) = run_args(&["verify", "--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("ZERO_MODES_HALF_WIDTH"));
    }
}
