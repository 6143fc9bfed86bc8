//! Report generation behind the `hyperbits` binary.
//!
//! Every command runs either on input files or, when no files are given, on a
//! seeded sweep of random instances. Reports are rendered completely before
//! anything is written, so a failing run leaves no partial output. Given the
//! same configuration the rendered bytes are identical.

use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::hyperball::{HyperbitState, MeasurementVector};
use crate::infocausality::{ic_audit, optimal_measurements, BitEnsemble, ICReport};
use crate::protocols::{
    decompose, eval_ebit, eval_hyperbit, hyperbit_to_ebit, EBitProtocol, HyperbitProtocol, Protocol, ProtocolFile,
};
use crate::queries::{
    biases, check_suboptimal, hadamard, koenig_compare, optimize_rac_2to1, symmetric_two_bit_encoding,
    EncodingScheme, QueryMatrix,
};
use crate::random;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Convert,
    Identity,
    Ic,
    Koenig,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Convert => "convert",
            Command::Identity => "identity",
            Command::Ic => "ic",
            Command::Koenig => "koenig",
        }
    }

    pub fn default_tol(self) -> f64 {
        match self {
            Command::Convert => 1e-8,
            _ => 1e-9,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub inputs: Vec<PathBuf>,
    pub seed: u64,
    /// Sweep size; ignored when input files are given.
    pub trials: usize,
    pub tol: Option<f64>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self { command, inputs: Vec::new(), seed: 0, trials: 100, tol: None, format: Format::Json, out: None }
    }

    pub fn tol(&self) -> f64 {
        self.tol.unwrap_or(self.command.default_tol())
    }

    fn is_sweep(&self) -> bool {
        self.inputs.is_empty()
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    /// A checked inequality or identity failed beyond tolerance.
    Finding = 1,
    InvalidInput = 2,
    /// Some e-bit protocol had no realisable hyperbit post-processing.
    Infeasible = 3,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub version: &'static str,
    pub seed: u64,
    pub trials: Option<usize>,
    pub tol: f64,
    pub inputs: Vec<String>,
    pub summary: Map<String, Value>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub converted: Option<ProtocolFile>,
}

impl Report {
    fn new(config: &RunConfig, columns: Vec<&'static str>) -> Self {
        Self {
            command: config.command.name(),
            version: VERSION,
            seed: config.seed,
            trials: config.is_sweep().then_some(config.trials),
            tol: config.tol(),
            inputs: config.inputs.iter().map(|p| p.display().to_string()).collect(),
            summary: Map::new(),
            columns,
            rows: Vec::new(),
            converted: None,
        }
    }

    fn set(&mut self, key: &str, value: impl Serialize) {
        self.summary.insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(self)? + "\n"),
            Format::Csv => self.render_csv(),
        }
    }

    fn render_csv(&self) -> Result<String> {
        let trials = self.trials.map_or_else(|| "-".to_string(), |t| t.to_string());
        let mut out = format!(
            "# hyperbits {} command={} seed={} trials={} tol={:e}\n",
            self.version, self.command, self.seed, trials, self.tol
        );
        for (k, v) in &self.summary {
            out.push_str(&format!("# {k}={}\n", cell(v)));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).map_err(csv_error)?;
        for row in &self.rows {
            w.write_record(row.iter().map(cell)).map_err(csv_error)?;
        }
        let body = w.into_inner().map_err(|e| Error::Malformed(e.to_string()))?;
        out.push_str(&String::from_utf8(body).map_err(|e| Error::Malformed(e.to_string()))?);
        Ok(out)
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Malformed(format!("csv: {e}"))
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub struct Outcome {
    pub exit: Exit,
    pub report: Report,
}

/// Runs the command, renders the report and writes it to `config.out` when set.
/// Returns the exit status and the rendered text. Errors mean invalid input.
pub fn run(config: &RunConfig) -> Result<(Exit, String)> {
    let outcome = execute(config)?;
    let text = outcome.report.render(config.format)?;
    if let Some(path) = &config.out {
        fs::write(path, &text)?;
    }
    Ok((outcome.exit, text))
}

pub fn execute(config: &RunConfig) -> Result<Outcome> {
    if config.is_sweep() && config.trials == 0 {
        return Err(Error::OutOfRange("trials must be positive".into()));
    }
    if !(config.tol() >= 0.0) {
        return Err(Error::OutOfRange(format!("tolerance {} must be nonnegative", config.tol())));
    }
    match config.command {
        Command::Convert => cmd_convert(config),
        Command::Identity => cmd_identity(config),
        Command::Ic => cmd_ic(config),
        Command::Koenig => cmd_koenig(config),
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn expect_inputs(config: &RunConfig, min: usize, max: usize) -> Result<()> {
    let n = config.inputs.len();
    if n < min || n > max {
        return Err(Error::Malformed(format!(
            "{} takes {min} to {max} input files, got {n}",
            config.command.name()
        )));
    }
    Ok(())
}

fn read_measurements(path: &Path) -> Result<Vec<MeasurementVector>> {
    read_json(path)
}

fn max_abs_diff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn table_of<F: Fn(usize, usize) -> Result<f64>>(rows: usize, cols: usize, f: F) -> Result<Vec<Vec<f64>>> {
    (0..rows).map(|a| (0..cols).map(|b| f(a, b)).collect()).collect()
}

struct ForwardCheck {
    original: Vec<Vec<f64>>,
    converted: Vec<Vec<f64>>,
    feasible: bool,
    max_weight: f64,
    infeasible: Vec<(usize, i8, f64)>,
    protocol: Option<HyperbitProtocol>,
}

/// E-bit to hyperbit. When post-processing is infeasible the converted column
/// holds the exact affine target that a realisable protocol would have to match.
fn forward(p: &EBitProtocol) -> Result<ForwardCheck> {
    let (na, nb) = (p.alice_inputs(), p.bob_inputs());
    let original = p.answer_table()?;
    let dec = decompose(p)?;
    let infeasible = dec.infeasible();
    let (converted, protocol) = if infeasible.is_empty() {
        let h = dec.to_protocol()?;
        (table_of(na, nb, |a, b| eval_hyperbit(&h, a, b))?, Some(h))
    } else {
        (table_of(na, nb, |a, b| Ok(dec.target(a, b)))?, None)
    };
    Ok(ForwardCheck {
        original,
        converted,
        feasible: infeasible.is_empty(),
        max_weight: dec.max_weight(),
        infeasible,
        protocol,
    })
}

fn converse(h: &HyperbitProtocol) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>, EBitProtocol)> {
    let e = hyperbit_to_ebit(h)?;
    let original = h.answer_table()?;
    let converted = table_of(h.alice_inputs(), h.bob_inputs(), |a, b| eval_ebit(&e, a, b))?;
    Ok((original, converted, e))
}

fn pair_rows(report: &mut Report, original: &[Vec<f64>], converted: &[Vec<f64>]) {
    for (a, (ro, rc)) in original.iter().zip(converted).enumerate() {
        for (b, (o, c)) in ro.iter().zip(rc).enumerate() {
            report.rows.push(vec![json!(a), json!(b), json!(o), json!(c), json!((o - c).abs())]);
        }
    }
}

pub fn cmd_convert(config: &RunConfig) -> Result<Outcome> {
    let tol = config.tol();
    if !config.is_sweep() {
        expect_inputs(config, 1, 1)?;
        let file: ProtocolFile = read_json(&config.inputs[0])?;
        let protocol = Protocol::try_from(&file)?;
        let mut report = Report::new(config, vec!["alice_input", "bob_input", "original", "converted", "residual"]);
        let (original, converted, exit) = match &protocol {
            Protocol::Ebit(p) => {
                let fc = forward(p)?;
                report.set("direction", "ebit_to_hyperbit");
                report.set("feasible", fc.feasible);
                report.set("max_postprocessing_weight", fc.max_weight);
                let infeasible: Vec<Value> = fc
                    .infeasible
                    .iter()
                    .map(|&(b, m, w)| json!({"bob_input": b, "message": m, "weight": w}))
                    .collect();
                report.set("infeasible_readouts", infeasible);
                report.converted = fc.protocol.as_ref().map(|h| ProtocolFile::Hyperbit(h.to_json()));
                let exit = if fc.feasible { Exit::Success } else { Exit::Infeasible };
                (fc.original, fc.converted, exit)
            }
            Protocol::Hyperbit(h) => {
                let (o, c, e) = converse(h)?;
                report.set("direction", "hyperbit_to_ebit");
                report.converted = Some(ProtocolFile::Ebit(e.to_json()));
                (o, c, Exit::Success)
            }
        };
        let residual = max_abs_diff(&original, &converted);
        pair_rows(&mut report, &original, &converted);
        report.set("max_residual", residual);
        let exit = if residual > tol { Exit::Finding } else { exit };
        return Ok(Outcome { exit, report });
    }

    let mut rng = config.rng();
    let mut report = Report::new(
        config,
        vec!["trial", "direction", "alice_inputs", "bob_inputs", "max_residual", "feasible", "max_weight"],
    );
    let (mut worst_forward, mut worst_converse, mut infeasible) = (0.0f64, 0.0f64, 0usize);
    for trial in 0..config.trials {
        let (na, nb) = (rng.random_range(1..=4), rng.random_range(1..=4));
        let p = random::ebit_protocol(2, 2, na, nb, &mut rng);
        let fc = forward(&p)?;
        let r = max_abs_diff(&fc.original, &fc.converted);
        worst_forward = worst_forward.max(r);
        infeasible += usize::from(!fc.feasible);
        report.rows.push(vec![
            json!(trial),
            json!("ebit_to_hyperbit"),
            json!(na),
            json!(nb),
            json!(r),
            json!(fc.feasible),
            json!(fc.max_weight),
        ]);

        let (dim, na, nb) = (rng.random_range(1..=5), rng.random_range(1..=4), rng.random_range(1..=4));
        let h = random::direct_hyperbit_protocol(dim, na, nb, &mut rng);
        let (o, c, _) = converse(&h)?;
        let r = max_abs_diff(&o, &c);
        worst_converse = worst_converse.max(r);
        report.rows.push(vec![
            json!(trial),
            json!("hyperbit_to_ebit"),
            json!(na),
            json!(nb),
            json!(r),
            json!(true),
            Value::Null,
        ]);
    }
    report.set("max_residual_ebit_to_hyperbit", worst_forward);
    report.set("max_residual_hyperbit_to_ebit", worst_converse);
    report.set("infeasible_count", infeasible);
    let exit = if worst_forward > tol || worst_converse > tol {
        Exit::Finding
    } else if infeasible > 0 {
        Exit::Infeasible
    } else {
        Exit::Success
    };
    Ok(Outcome { exit, report })
}

fn random_encoding<R: Rng + ?Sized>(size: usize, dim: usize, rng: &mut R) -> Result<EncodingScheme> {
    let hyperbits = (0..size).map(|_| HyperbitState::new(random::ball_vector(dim, rng))).collect::<Result<_>>()?;
    EncodingScheme::new(random::probability_vector(size, rng), hyperbits)
}

fn unit_uniform_encoding<R: Rng + ?Sized>(size: usize, dim: usize, rng: &mut R) -> Result<EncodingScheme> {
    let hyperbits = (0..size).map(|_| HyperbitState::new(random::unit_vector(dim, rng))).collect::<Result<_>>()?;
    EncodingScheme::uniform(hyperbits)
}

fn random_bank<R: Rng + ?Sized>(count: usize, dim: usize, rng: &mut R) -> Result<Vec<MeasurementVector>> {
    (0..count).map(|_| MeasurementVector::new(random::unit_vector(dim, rng))).collect()
}

/// Inputs: encoding file, optional query-matrix file (default Sylvester–Hadamard),
/// optional measurement file for the suboptimal-Bob inequality.
pub fn cmd_identity(config: &RunConfig) -> Result<Outcome> {
    let tol = config.tol();
    if !config.is_sweep() {
        expect_inputs(config, 1, 3)?;
        let enc: EncodingScheme = read_json(&config.inputs[0])?;
        let enc = enc.padded_to_power_of_two();
        let f: QueryMatrix = match config.inputs.get(1) {
            Some(path) => read_json(path)?,
            None => hadamard(enc.len().trailing_zeros() as usize)?,
        };
        let meas = config.inputs.get(2).map(|p| read_measurements(p)).transpose()?;
        let rep = biases(&f, &enc)?;
        let slack = meas.as_ref().map(|m| check_suboptimal(&f, &enc, m)).transpose()?;

        let mut report = Report::new(config, vec!["query", "bias", "pathological"]);
        for (i, e) in rep.biases.iter().enumerate() {
            report.rows.push(vec![json!(i), json!(e), json!(rep.pathological.contains(&i))]);
        }
        report.set("n", f.n());
        report.set("lhs", rep.lhs);
        report.set("rhs", rep.rhs);
        report.set("residual", rep.residual());
        report.set("constant_row", rep.constant_row);
        report.set("split_lhs", rep.split_lhs);
        report.set("pathological", &rep.pathological);
        report.set("suboptimal_slack", slack);
        let violated = rep.residual() > tol || slack.is_some_and(|s| s < -tol);
        let exit = if violated { Exit::Finding } else { Exit::Success };
        return Ok(Outcome { exit, report });
    }

    let mut rng = config.rng();
    let mut report = Report::new(config, vec!["trial", "n", "dim", "residual", "uniform_unit_deviation", "slack"]);
    let (mut worst, mut worst_uniform, mut min_slack) = (0.0f64, 0.0f64, f64::INFINITY);
    for trial in 0..config.trials {
        let n = rng.random_range(0..=4usize);
        let dim = rng.random_range(1..=8usize);
        let f = hadamard(n)?;
        let enc = random_encoding(f.size(), dim, &mut rng)?;
        let residual = biases(&f, &enc)?.residual();
        let bank = random_bank(f.size(), dim, &mut rng)?;
        let slack = check_suboptimal(&f, &enc, &bank)?;
        let uniform = biases(&f, &unit_uniform_encoding(f.size(), dim, &mut rng)?)?;
        let deviation = (uniform.lhs - 1.0).abs();
        worst = worst.max(residual);
        worst_uniform = worst_uniform.max(deviation);
        min_slack = min_slack.min(slack);
        report.rows.push(vec![json!(trial), json!(n), json!(dim), json!(residual), json!(deviation), json!(slack)]);
    }
    report.set("max_residual", worst);
    report.set("max_uniform_unit_deviation", worst_uniform);
    report.set("min_slack", min_slack);
    let exit = if worst > tol || min_slack < -tol { Exit::Finding } else { Exit::Success };
    Ok(Outcome { exit, report })
}

fn ic_rows(report: &mut Report, trial: Option<usize>, ic: &ICReport) {
    for b in &ic.bits {
        report.rows.push(vec![
            trial.map_or(Value::Null, |t| json!(t)),
            json!(b.row),
            json!(b.mutual_information),
            json!(b.bound_term),
            json!(b.cauchy_schwarz_gap),
            json!(b.bayes_residual),
        ]);
    }
}

/// Inputs: ensemble file, uniform encoding file, optional measurement file
/// (default: Bob's optimal direction for each bit).
pub fn cmd_ic(config: &RunConfig) -> Result<Outcome> {
    let tol = config.tol();
    let columns = vec!["trial", "row", "mutual_information", "bound_term", "cauchy_schwarz_gap", "bayes_residual"];
    if !config.is_sweep() {
        expect_inputs(config, 2, 3)?;
        let ensemble: BitEnsemble = read_json(&config.inputs[0])?;
        let enc: EncodingScheme = read_json(&config.inputs[1])?;
        let meas = match config.inputs.get(2) {
            Some(p) => read_measurements(p)?,
            None => optimal_measurements(&ensemble, &enc)?,
        };
        let ic = ic_audit(&ensemble, &enc, &meas)?;
        let mut report = Report::new(config, columns);
        ic_rows(&mut report, None, &ic);
        report.set("total_information", ic.total_information);
        report.set("bound_total", ic.bound_total);
        report.set("bridge_residual", ic.bridge_residual);
        report.set("min_cauchy_schwarz_gap", ic.min_cauchy_schwarz_gap());
        report.set("max_bayes_residual", ic.max_bayes_residual());
        let exit = if ic.holds(tol) { Exit::Success } else { Exit::Finding };
        return Ok(Outcome { exit, report });
    }

    let mut rng = config.rng();
    let ensemble = BitEnsemble::two_bit_parities();
    let mut report = Report::new(config, columns);
    let (mut max_info, mut max_bound, mut min_margin) = (0.0f64, 0.0f64, f64::INFINITY);
    let mut violations = 0usize;
    for trial in 0..config.trials {
        let dim = rng.random_range(1..=6usize);
        let enc = unit_uniform_encoding(4, dim, &mut rng)?;
        let ic = ic_audit(&ensemble, &enc, &optimal_measurements(&ensemble, &enc)?)?;
        max_info = max_info.max(ic.total_information);
        max_bound = max_bound.max(ic.bound_total);
        min_margin = min_margin.min(ic.bound_total - ic.total_information);
        violations += usize::from(!ic.holds(tol));
        ic_rows(&mut report, Some(trial), &ic);
    }
    report.set("ensemble_rows", ensemble.bits());
    report.set("max_total_information", max_info);
    report.set("max_bound_total", max_bound);
    report.set("min_bound_margin", min_margin);
    report.set("violations", violations);
    let exit = if violations > 0 { Exit::Finding } else { Exit::Success };
    Ok(Outcome { exit, report })
}

/// Input: a four-input uniform encoding file, indexed `j = a₀ + 2a₁`.
pub fn cmd_koenig(config: &RunConfig) -> Result<Outcome> {
    let tol = config.tol();
    if !config.is_sweep() {
        expect_inputs(config, 1, 1)?;
        let enc: EncodingScheme = read_json(&config.inputs[0])?;
        let k = koenig_compare(&enc)?;
        let mut report = Report::new(config, vec!["bit", "bias", "success"]);
        for (label, (e, p)) in ["a0", "a1", "a0_xor_a1"].iter().zip(k.biases.iter().zip(&k.success)) {
            report.rows.push(vec![json!(label), json!(e), json!(p)]);
        }
        report.set("p_sum", k.p_sum);
        report.set("e_sq_sum", k.e_sq_sum);
        report.set("benchmark", k.benchmark);
        report.set("exceeds_benchmark", k.exceeds_benchmark(tol));
        let exit = if k.within_identity(tol) { Exit::Success } else { Exit::Finding };
        return Ok(Outcome { exit, report });
    }

    let mut rng = config.rng();
    let mut report = Report::new(config, vec!["trial", "dim", "p_sum", "e_sq_sum", "exceeds_benchmark"]);
    let (mut max_e, mut max_p, mut above) = (0.0f64, 0.0f64, 0usize);
    let mut violations = 0usize;
    for trial in 0..config.trials {
        let dim = rng.random_range(1..=6usize);
        let k = koenig_compare(&unit_uniform_encoding(4, dim, &mut rng)?)?;
        max_e = max_e.max(k.e_sq_sum);
        max_p = max_p.max(k.p_sum);
        above += usize::from(k.exceeds_benchmark(tol));
        violations += usize::from(!k.within_identity(tol));
        report.rows.push(vec![json!(trial), json!(dim), json!(k.p_sum), json!(k.e_sq_sum), json!(k.exceeds_benchmark(tol))]);
    }
    let symmetric = koenig_compare(&symmetric_two_bit_encoding())?;
    let rac = optimize_rac_2to1()?;
    report.set("max_e_sq_sum", max_e);
    report.set("max_p_sum", max_p);
    report.set("above_benchmark", above);
    report.set("violations", violations);
    report.set("benchmark", symmetric.benchmark);
    report.set("symmetric_p_sum", symmetric.p_sum);
    report.set("symmetric_e_sq_sum", symmetric.e_sq_sum);
    report.set("rac_2to1_success", rac.success);
    let exit = if violations > 0 { Exit::Finding } else { Exit::Success };
    Ok(Outcome { exit, report })
}
