//! Batch front end: every verification as a reproducible command with a JSON or
//! text report and stable exit codes (0 pass, 1 verification failure, 2 usage or
//! domain error).

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::elimination::{
    compare_predicates, eliminant_n2, eliminant_n3, eliminant_n4, has_nontrivial_zero, newton_no_common_zero, EliminationError, HomSystem, ZeroSetReport,
};
use crate::poly::{parse_rational, BlockKind, Factored, MPoly, Var};
use crate::recurrence::{
    big_lambda, l_general, l_small, link_property, mu_specialize, p_family, power_sum_limit, power_sum_limit_by_substitution, power_sum_target, q_family,
    RecurrenceError,
};
use crate::saddle::{
    divergence_probe_n1, double_cycle_family_probe, geometric_grid, identity_check, identity_check_with, mu_limit_probe, random_model, DivergenceReport,
    IdentityReport, ModelError, MuLimitReport, PolycycleModel, SaddleError, SaddleModel, DEFAULT_PRECISION_BITS,
};

/// Environment override for the working precision of the saddle commands.
pub const PRECISION_ENV: &str = "POLYCYCLE_PRECISION_BITS";
pub const SCHEMA: u32 = 1;
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "polycycle", version, about = "Exact and multi-precision checks for polycycle multiplicity computations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Generate the limit polynomials Q_{n,1..l} and check the known closed forms.
    GenQ(Flags),
    /// Generate P_{n,1..l} and check that specializing μ gives Q_{n,l}.
    GenP(Flags),
    /// Check homogeneity, integrality and the link property for all n, l up to the bounds.
    VerifyLink(Flags),
    /// Reproduce the genericity polynomial for n = 2, 3 or 4.
    VerifySmall(Flags),
    /// Derive that power sums p_1..p_m have no common nontrivial zero.
    VerifyNewton(Flags),
    /// Check the power-sum limit of Q_{n,l} for all n, l up to the bound.
    VerifyPowersum(Flags),
    /// Probe the limits of the scaled log-derivatives of each saddle map.
    SaddleLimits(Flags),
    /// Compare derivatives of ln Δ' with P_{n,l} at chain values.
    IdentityCheck(Flags),
    /// Follow a family of double fixed points of a two-saddle chain.
    DoubleCycleProbe(Flags),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug, Default, Args)]
pub struct Flags {
    /// Number of saddles, variables or the upper bound for n, depending on the command.
    #[arg(long)]
    pub n: Option<usize>,
    /// Largest order l (or q).
    #[arg(long)]
    pub l: Option<usize>,
    /// Number of sample points, random models or grid points.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Model file (JSON).
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Working precision for the saddle commands.
    #[arg(long)]
    pub precision_bits: Option<u32>,
    /// Base point for identity-check with a model file, as a rational.
    #[arg(long)]
    pub x0: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    GenQ,
    GenP,
    VerifyLink,
    VerifySmall,
    VerifyNewton,
    VerifyPowersum,
    SaddleLimits,
    IdentityCheck,
    DoubleCycleProbe,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::GenQ => "gen-q",
            CommandKind::GenP => "gen-p",
            CommandKind::VerifyLink => "verify-link",
            CommandKind::VerifySmall => "verify-small",
            CommandKind::VerifyNewton => "verify-newton",
            CommandKind::VerifyPowersum => "verify-powersum",
            CommandKind::SaddleLimits => "saddle-limits",
            CommandKind::IdentityCheck => "identity-check",
            CommandKind::DoubleCycleProbe => "double-cycle-probe",
        }
    }

    fn uses_precision(self) -> bool {
        matches!(self, CommandKind::SaddleLimits | CommandKind::IdentityCheck | CommandKind::DoubleCycleProbe)
    }
}

/// A validated invocation with defaults filled in; echoed into every report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub n: Option<usize>,
    pub l: Option<usize>,
    pub samples: Option<usize>,
    pub seed: u64,
    pub model: Option<PathBuf>,
    pub x0: Option<String>,
    pub precision_bits: Option<u32>,
    pub format: Format,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags, unsupported ranges, malformed model files, violated preconditions.
    #[error("{0}")]
    Usage(String),
    /// A computation that could not complete.
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl From<RecurrenceError> for CliError {
    fn from(e: RecurrenceError) -> Self {
        match e {
            RecurrenceError::Argument(_) | RecurrenceError::Unsupported(_) => CliError::Usage(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

impl From<EliminationError> for CliError {
    fn from(e: EliminationError) -> Self {
        match e {
            EliminationError::Argument(_) | EliminationError::Unsupported(_) => CliError::Usage(e.to_string()),
            EliminationError::Recurrence(r) => r.into(),
            EliminationError::Poly(_) => CliError::Failure(e.to_string()),
        }
    }
}

impl From<SaddleError> for CliError {
    fn from(e: SaddleError) -> Self {
        match e {
            SaddleError::Newton { .. } | SaddleError::Precision(_) => CliError::Failure(e.to_string()),
            SaddleError::Recurrence(r) => r.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn check_range(name: &str, value: usize, lo: usize, hi: usize) -> Result<usize, CliError> {
    if (lo..=hi).contains(&value) {
        Ok(value)
    } else {
        Err(CliError::Usage(format!("--{name} {value} is outside the supported range {lo}..={hi}")))
    }
}

impl RunConfig {
    /// Validates flags for `command` and fills in its defaults. The precision
    /// override is passed in rather than read here, so callers control the environment.
    pub fn new(command: &Command, precision_env: Option<&str>) -> Result<Self, CliError> {
        let (kind, flags) = match command {
            Command::GenQ(f) => (CommandKind::GenQ, f),
            Command::GenP(f) => (CommandKind::GenP, f),
            Command::VerifyLink(f) => (CommandKind::VerifyLink, f),
            Command::VerifySmall(f) => (CommandKind::VerifySmall, f),
            Command::VerifyNewton(f) => (CommandKind::VerifyNewton, f),
            Command::VerifyPowersum(f) => (CommandKind::VerifyPowersum, f),
            Command::SaddleLimits(f) => (CommandKind::SaddleLimits, f),
            Command::IdentityCheck(f) => (CommandKind::IdentityCheck, f),
            Command::DoubleCycleProbe(f) => (CommandKind::DoubleCycleProbe, f),
        };
        let n = |default: usize, lo: usize, hi: usize| check_range("n", flags.n.unwrap_or(default), lo, hi).map(Some);
        let l = |default: usize, lo: usize, hi: usize| check_range("l", flags.l.unwrap_or(default), lo, hi).map(Some);
        let samples = |default: usize, lo: usize, hi: usize| check_range("samples", flags.samples.unwrap_or(default), lo, hi).map(Some);
        let (n, l, samples) = match kind {
            CommandKind::GenQ => (n(2, 1, 10)?, l(2, 1, 8)?, None),
            CommandKind::GenP => (n(2, 1, 6)?, l(2, 1, 6)?, None),
            CommandKind::VerifyLink => (n(6, 2, 8)?, l(5, 1, 6)?, None),
            CommandKind::VerifySmall => (n(3, 2, 4)?, None, samples(1000, 1, 100_000)?),
            CommandKind::VerifyNewton => (n(8, 1, 12)?, None, None),
            CommandKind::VerifyPowersum => (n(8, 2, 10)?, None, None),
            CommandKind::SaddleLimits => (None, flags.l.map(|v| check_range("l", v, 1, 63)).transpose()?, samples(6, 2, 12)?),
            CommandKind::IdentityCheck => {
                let n = flags.n.map(|v| check_range("n", v, 1, 4)).transpose()?;
                let samples = if flags.model.is_some() { None } else { samples(50, 1, 10_000)? };
                (n, l(4, 1, 4)?, samples)
            }
            CommandKind::DoubleCycleProbe => (None, None, samples(6, 2, 30)?),
        };
        if kind == CommandKind::SaddleLimits && flags.model.is_none() {
            return Err(CliError::Usage("saddle-limits needs --model".into()));
        }
        if flags.x0.is_some() && !(kind == CommandKind::IdentityCheck && flags.model.is_some()) {
            return Err(CliError::Usage("--x0 only applies to identity-check with --model".into()));
        }
        let precision_bits = if kind.uses_precision() {
            match (flags.precision_bits, precision_env) {
                (Some(b), _) => Some(b),
                (None, Some(s)) => Some(
                    s.trim()
                        .parse::<u32>()
                        .map_err(|_| CliError::Usage(format!("{PRECISION_ENV}={s} is not a bit count")))?,
                ),
                (None, None) => None,
            }
        } else {
            if flags.precision_bits.is_some() {
                return Err(CliError::Usage(format!("--precision-bits does not apply to {}", kind.name())));
            }
            None
        };
        Ok(RunConfig {
            command: kind,
            n,
            l,
            samples,
            seed: flags.seed,
            model: flags.model.clone(),
            x0: flags.x0.clone(),
            precision_bits,
            format: flags.format,
            out: flags.out.clone(),
        })
    }
}

/// A finished command: whether all checks passed, the structured result and a
/// human-readable summary.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub passed: bool,
    pub result: Value,
    pub text: String,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

fn load_model(config: &RunConfig) -> Result<Option<PolycycleModel>, CliError> {
    let Some(path) = &config.model else { return Ok(None) };
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read model file {}: {e}", path.display())))?;
    let mut model = PolycycleModel::from_json_str(&text)?;
    if let Some(bits) = config.precision_bits {
        model = model.with_precision(bits)?;
    }
    Ok(Some(model))
}

fn working_precision(config: &RunConfig) -> u32 {
    config.precision_bits.unwrap_or(DEFAULT_PRECISION_BITS)
}

fn linear_form(space_poly: &MPoly, n: usize) -> Result<MPoly, CliError> {
    let s = space_poly.space();
    let mut acc = MPoly::zero(s);
    let one = MPoly::one(s);
    for i in 1..=n {
        let l = MPoly::var(s, &Var::Lambda(i)).map_err(|e| CliError::Failure(e.to_string()))?;
        let z = MPoly::var(s, &Var::Z(i)).map_err(|e| CliError::Failure(e.to_string()))?;
        acc += &(&(&l - &one) * &z);
    }
    Ok(acc)
}

fn poly_entry(l: usize, p: &MPoly) -> Value {
    json!({ "l": l, "terms": p.len(), "poly": p.to_string(), "exact": to_value(&p.to_json()) })
}

fn gen_q(config: &RunConfig) -> Result<Outcome, CliError> {
    let (n, l) = (config.n.expect("set"), config.l.expect("set"));
    let fam = q_family(n, l)?;
    let mut checks: BTreeMap<&str, bool> = BTreeMap::new();
    let q1 = &fam.polys[0];
    checks.insert("first_member_is_linear_form", *q1 == linear_form(q1, n)?);
    if n == 2 && l >= 2 {
        let s = q1.space();
        let v = |x: Var| MPoly::var(s, &x).expect("variable in space");
        let (l1, l2, z1, z2) = (v(Var::Lambda(1)), v(Var::Lambda(2)), v(Var::Z(1)), v(Var::Z(2)));
        let one = MPoly::one(s);
        let z1z2 = &z1 * &z2;
        let expected = &(&(&(&(&(&(&(&l1 * &l2) * &z1z2) - &(&l1 * &(&z1 * &z1))) - &(&l1 * &z1z2)) - &(&l2 * &z1z2)) - &(&l2 * &(&z2 * &z2)))
            + &(&(&z1 * &z1) + &z1z2))
            + &(&z2 * &z2);
        checks.insert("q22_matches_closed_form", fam.polys[1] == expected);
        let combined = &fam.polys[1] + &(&(&z1 + &z2) * q1);
        checks.insert("q22_combination_identity", combined == &(&(&l1 * &l2) - &one) * &z1z2);
    }
    if n == 3 && l >= 2 {
        checks.insert("q32_combination_matches_closed_form", eliminant_n4()?.combined_matches);
    }
    let passed = checks.values().all(|&b| b);
    let mut text = String::new();
    for (k, p) in fam.polys.iter().enumerate() {
        let _ = writeln!(text, "Q_{{{n},{}}} = {p}", k + 1);
    }
    for (name, ok) in &checks {
        let _ = writeln!(text, "check {name}: {}", mark(*ok));
    }
    let polys: Vec<Value> = fam.polys.iter().enumerate().map(|(k, p)| poly_entry(k + 1, p)).collect();
    Ok(Outcome {
        passed,
        result: json!({ "n": n, "l_max": l, "polys": polys, "checks": checks }),
        text,
    })
}

fn gen_p(config: &RunConfig) -> Result<Outcome, CliError> {
    let (n, l) = (config.n.expect("set"), config.l.expect("set"));
    let pf = p_family(n, l)?;
    let qf = q_family(n, l)?;
    let mut text = String::new();
    let mut polys = Vec::with_capacity(l);
    let mut passed = true;
    for (k, (p, q)) in pf.polys.iter().zip(&qf.polys).enumerate() {
        let specialized = mu_specialize(p)?;
        let holds = specialized == *q;
        passed &= holds;
        let _ = writeln!(text, "P_{{{n},{}}} = {p}", k + 1);
        let _ = writeln!(text, "check mu_specialization_gives_q_{}: {}", k + 1, mark(holds));
        let mut entry = poly_entry(k + 1, p);
        entry["specializes_to_q"] = json!(holds);
        polys.push(entry);
    }
    Ok(Outcome {
        passed,
        result: json!({ "n": n, "l_max": l, "polys": polys }),
        text,
    })
}

fn verify_link(config: &RunConfig) -> Result<Outcome, CliError> {
    let (n_max, l_max) = (config.n.expect("set"), config.l.expect("set"));
    let families: Vec<_> = (1..=n_max).map(|n| q_family(n, l_max)).collect::<Result<_, _>>()?;
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut passed = true;
    for (k, fam) in families.iter().enumerate() {
        let n = k + 1;
        let homogeneous = fam.polys.iter().enumerate().all(|(i, p)| p.is_homogeneous_in(BlockKind::Z, (i + 1) as u32));
        let integral = fam.polys.iter().all(MPoly::is_integral);
        let (checked, failures) = if n >= 2 {
            let checks = link_property(fam, &families[k - 1])?;
            let failures: Vec<Value> = checks.iter().filter(|c| !c.holds).map(to_value).collect();
            (checks.len(), failures)
        } else {
            (0, Vec::new())
        };
        let ok = homogeneous && integral && failures.is_empty();
        passed &= ok;
        let _ = writeln!(
            text,
            "n = {n}: homogeneous {}, integral {}, link checks {checked} with {} failures",
            mark(homogeneous),
            mark(integral),
            failures.len()
        );
        rows.push(json!({ "n": n, "homogeneous": homogeneous, "integral": integral, "link_checks": checked, "link_failures": failures }));
    }
    Ok(Outcome {
        passed,
        result: json!({ "n_max": n_max, "l_max": l_max, "families": rows }),
        text,
    })
}

fn solver_agreement(closed: &Factored, samples: usize, seed: u64) -> Result<ZeroSetReport, CliError> {
    let m = closed.space().n();
    let sys = HomSystem::q_system(m)?;
    Ok(compare_predicates(
        closed.space(),
        &closed.distinct_factors(),
        &[],
        samples,
        seed,
        |p| has_nontrivial_zero(&sys.clone().with_lambda(p.clone())),
        |p| Ok(closed.vanishes_at(p)?),
    )?)
}

fn verify_small(config: &RunConfig) -> Result<Outcome, CliError> {
    let n = config.n.expect("set");
    let samples = config.samples.expect("set");
    let mut checks: BTreeMap<&str, bool> = BTreeMap::new();
    let (computed, closed, pipeline) = match n {
        2 => {
            let e = eliminant_n2()?;
            checks.insert("eliminant_equals_closed_form", e.poly == e.closed_form.expand());
            (e.factored.clone().unwrap_or_else(|| Factored::from_poly(&e.poly)), e.closed_form, Value::Null)
        }
        3 => {
            let e = eliminant_n3()?;
            checks.insert("eliminant_factors_match", e.matches_closed_form());
            (e.factored.clone().unwrap_or_else(|| Factored::from_poly(&e.poly)), e.closed_form, Value::Null)
        }
        4 => {
            let e = eliminant_n4()?;
            checks.insert("combination_matches_closed_form", e.combined_matches);
            checks.insert("combination_preserves_ideal", e.same_ideal);
            checks.insert("linear_factor_matches", e.linear_factor_matches);
            checks.insert("determinant_matches", e.determinant_matches);
            checks.insert("eliminant_factors_match", e.r_star.same_factors(&e.closed_form));
            let pipeline = json!({
                "linear_factor": e.linear_factor.to_string(),
                "alpha": e.alpha.to_string(),
                "beta": e.beta.to_string(),
                "determinant": e.determinant.to_string(),
            });
            (e.r_star, e.closed_form, pipeline)
        }
        _ => return Err(CliError::Usage(format!("verify-small supports n = 2, 3, 4, not {n}"))),
    };
    let generic = l_general(n, &computed)?;
    let expected = l_small(n)?;
    checks.insert("genericity_polynomial_factors_match", generic.same_factors(&expected));
    if n <= 3 {
        checks.insert("genericity_polynomial_is_big_lambda", generic.same_factors(&big_lambda(n)?));
    }
    let zero_set = solver_agreement(&closed, samples, config.seed)?;
    checks.insert("solver_agrees_with_closed_form", zero_set.passed());
    let passed = checks.values().all(|&b| b);

    let mut text = String::new();
    let _ = writeln!(text, "genericity check for n = {n}");
    let _ = writeln!(text, "eliminant: {computed}");
    let _ = writeln!(text, "closed form: {closed}");
    let _ = writeln!(text, "genericity polynomial: {generic}");
    for (name, ok) in &checks {
        let _ = writeln!(text, "check {name}: {}", mark(*ok));
    }
    let _ = writeln!(
        text,
        "solver vs closed form: {}/{} agree ({} on factors, {} random, {} vanishing)",
        zero_set.agree_count, zero_set.sample_count, zero_set.on_factor_count, zero_set.random_count, zero_set.left_vanishing
    );
    for d in &zero_set.disagreements {
        let _ = writeln!(text, "disagreement at {:?}: solver {}, closed form {}", d.point, d.left, d.right);
    }
    let result = json!({
        "n": n,
        "eliminant": computed.to_string(),
        "closed_form": closed.to_string(),
        "genericity_polynomial": generic.to_string(),
        "expected_genericity_polynomial": expected.to_string(),
        "checks": checks,
        "zero_set": to_value(&zero_set),
        "pipeline": pipeline,
    });
    Ok(Outcome { passed, result, text })
}

fn verify_newton(config: &RunConfig) -> Result<Outcome, CliError> {
    let m_max = config.n.expect("set");
    let mut rows = Vec::with_capacity(m_max);
    let mut text = String::new();
    let mut passed = true;
    for m in 1..=m_max {
        let d = newton_no_common_zero(m)?;
        passed &= d.no_common_zero;
        let _ = writeln!(
            text,
            "m = {m}: identities {}, vieta {}, collapse {}, only zero root {} => {}",
            mark(d.steps.iter().all(|s| s.identity_holds)),
            mark(d.vieta_holds),
            mark(d.collapses_to_power),
            mark(d.only_zero_root),
            mark(d.no_common_zero)
        );
        rows.push(to_value(&d));
    }
    Ok(Outcome {
        passed,
        result: json!({ "m_max": m_max, "derivations": rows }),
        text,
    })
}

fn verify_powersum(config: &RunConfig) -> Result<Outcome, CliError> {
    let n_max = config.n.expect("set");
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut passed = true;
    for n in 2..=n_max {
        for l in 1..n {
            let limit = power_sum_limit(n, l)?;
            let target = power_sum_target(n, l)?;
            let matches = limit == target;
            let by_substitution = if n <= 6 {
                Some(power_sum_limit_by_substitution(n, l)? == limit)
            } else {
                None
            };
            let ok = matches && by_substitution.unwrap_or(true);
            passed &= ok;
            let _ = writeln!(text, "n = {n}, l = {l}: {limit} {}", mark(ok));
            rows.push(json!({ "n": n, "l": l, "limit": limit.to_string(), "matches_target": matches, "substitution_route_agrees": by_substitution }));
        }
    }
    Ok(Outcome {
        passed,
        result: json!({ "n_max": n_max, "cases": rows }),
        text,
    })
}

/// Tolerance for pure power maps: all but 56 bits of the working precision.
fn exact_tolerance(bits: u32) -> f64 {
    2f64.powi(-(bits.saturating_sub(56).min(1000) as i32))
}

pub const CORRECTED_TOLERANCE: f64 = 1e-8;

fn saddle_limits(config: &RunConfig) -> Result<Outcome, CliError> {
    let model = load_model(config)?.expect("checked in config");
    let q_max = config.l.unwrap_or(4).min(model.jet_order - 1);
    if let Some(l) = config.l {
        if l + 1 > model.jet_order {
            return Err(CliError::Usage(format!("--l {l} needs jet_order at least {}", l + 1)));
        }
    }
    let tenth = BigRational::new(1.into(), 10.into());
    let grid = geometric_grid(&tenth, &tenth, config.samples.expect("set"));
    let mut probes: Vec<(MuLimitReport, f64, bool)> = Vec::new();
    for (i, s) in model.saddles.iter().enumerate() {
        let pure = s.corrections.is_empty();
        let tol = if pure { exact_tolerance(model.precision_bits) } else { CORRECTED_TOLERANCE };
        for q in 1..=q_max {
            let rep = mu_limit_probe(&model, i + 1, q, &grid)?;
            let ok = rep.within(tol) && (!pure || rep.estimate_errors.iter().all(|e| *e <= tol));
            probes.push((rep, tol, ok));
        }
    }
    let divergence: Option<DivergenceReport> = if model.n() == 1 { Some(divergence_probe_n1(&model, 30)?) } else { None };
    let passed = probes.iter().all(|p| p.2) && divergence.as_ref().is_none_or(|d| d.passed);

    let mut text = String::new();
    for (rep, tol, ok) in &probes {
        let _ = writeln!(
            text,
            "saddle {} (lambda {}), q = {}: target {}, error {:.3e} (tolerance {:.1e}) {}",
            rep.i,
            rep.lambda,
            rep.q,
            rep.target,
            rep.error,
            tol,
            mark(*ok)
        );
    }
    if let Some(d) = &divergence {
        let _ = writeln!(
            text,
            "divergence: direction {}, tail slope {:.6} (expected {:.6}) {}",
            d.expected_direction,
            d.tail_slope,
            d.expected_slope,
            mark(d.passed)
        );
    }
    let probes: Vec<Value> = probes
        .iter()
        .map(|(rep, tol, ok)| {
            let mut v = to_value(rep);
            v["tolerance"] = json!(tol);
            v["passed"] = json!(ok);
            v
        })
        .collect();
    let result = json!({ "model": model.to_json_value(), "probes": probes, "divergence": divergence.as_ref().map(to_value) });
    Ok(Outcome { passed, result, text })
}

fn identity_text(rep: &IdentityReport, label: &str, text: &mut String) {
    let _ = writeln!(
        text,
        "{label}: n = {}, x0 = {}, max relative error {} (tolerance 2^{}) {}",
        rep.n,
        rep.x0,
        rep.max_rel_error,
        rep.tolerance_log2,
        mark(rep.passed)
    );
}

fn identity_check_cmd(config: &RunConfig) -> Result<Outcome, CliError> {
    let l = config.l.expect("set");
    let mut text = String::new();
    if let Some(model) = load_model(config)? {
        let x0 = match &config.x0 {
            Some(s) => parse_rational(s).map_err(|_| CliError::Usage(format!("--x0 {s} is not a rational")))?,
            None => BigRational::new(1.into(), 4.into()),
        };
        if l + 1 > model.jet_order {
            return Err(CliError::Usage(format!("--l {l} needs jet_order at least {}", l + 1)));
        }
        let rep = identity_check(&model, &x0, l)?;
        identity_text(&rep, "model", &mut text);
        return Ok(Outcome {
            passed: rep.passed,
            result: json!({ "model": model.to_json_value(), "checks": [to_value(&rep)] }),
            text,
        });
    }
    let count = config.samples.expect("set");
    let bits = working_precision(config);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let sizes: Vec<usize> = match config.n {
        Some(n) => vec![n],
        None => (1..=4).collect(),
    };
    let families: Vec<_> = sizes.iter().map(|&n| p_family(n, l)).collect::<Result<_, _>>()?;
    let mut checks = Vec::with_capacity(count);
    let mut passed = true;
    for k in 0..count {
        let idx = k % sizes.len();
        let n = sizes[idx];
        let rm = random_model(n, (n + 1).max(l + 1), bits, &mut rng)?;
        let rep = identity_check_with(&rm.model, &rm.x0, l, &families[idx])?;
        passed &= rep.passed;
        identity_text(&rep, &format!("model {k}"), &mut text);
        let mut v = to_value(&rep);
        v["model"] = rm.model.to_json_value();
        checks.push(v);
    }
    Ok(Outcome {
        passed,
        result: json!({ "models": count, "precision_bits": bits, "checks": checks }),
        text,
    })
}

pub const DOUBLE_CYCLE_THRESHOLD: f64 = 1e-2;

fn double_cycle(config: &RunConfig) -> Result<Outcome, CliError> {
    let model = match load_model(config)? {
        Some(m) => m,
        None => {
            let pure = |v: i64| SaddleModel::pure_power(BigRational::from_integer(v.into()));
            PolycycleModel::new(vec![pure(2)?, pure(3)?], working_precision(config), 3)?
        }
    };
    let tenth = BigRational::new(1.into(), 10.into());
    let grid = geometric_grid(&tenth, &tenth, config.samples.expect("set"));
    let rep = double_cycle_family_probe(&model, &grid)?;
    let below = rep.final_min_ratio < DOUBLE_CYCLE_THRESHOLD;
    let passed = rep.monotone_decreasing && below;
    let mut text = String::new();
    for p in &rep.points {
        let _ = writeln!(
            text,
            "x0 = {}: min |z_i| / |z| = {:.6e}, residuals {:.1e} {:.1e}",
            p.x0, p.min_ratio, p.residuals[0], p.residuals[1]
        );
    }
    let _ = writeln!(
        text,
        "monotone decrease {}, final below {DOUBLE_CYCLE_THRESHOLD:e} {}",
        mark(rep.monotone_decreasing),
        mark(below)
    );
    let mut result = to_value(&rep);
    result["model"] = model.to_json_value();
    result["threshold"] = json!(DOUBLE_CYCLE_THRESHOLD);
    Ok(Outcome { passed, result, text })
}

/// Runs one validated command.
pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    match config.command {
        CommandKind::GenQ => gen_q(config),
        CommandKind::GenP => gen_p(config),
        CommandKind::VerifyLink => verify_link(config),
        CommandKind::VerifySmall => verify_small(config),
        CommandKind::VerifyNewton => verify_newton(config),
        CommandKind::VerifyPowersum => verify_powersum(config),
        CommandKind::SaddleLimits => saddle_limits(config),
        CommandKind::IdentityCheck => identity_check_cmd(config),
        CommandKind::DoubleCycleProbe => double_cycle(config),
    }
}

/// Renders a report. Both forms are deterministic functions of the configuration.
pub fn render(config: &RunConfig, outcome: &Outcome) -> String {
    match config.format {
        Format::Json => {
            let report = json!({
                "schema": SCHEMA,
                "tool": "polycycle",
                "version": VERSION,
                "command": config.command.name(),
                "config": to_value(config),
                "seed": config.seed,
                "passed": outcome.passed,
                "result": outcome.result,
            });
            let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = format!("polycycle {VERSION} {} (schema {SCHEMA}, seed {})\n", config.command.name(), config.seed);
            s.push_str(&outcome.text);
            let _ = writeln!(s, "verdict: {}", if outcome.passed { "PASS" } else { "FAIL" });
            s
        }
    }
}

/// Parses arguments, runs the command, writes the report and returns the exit code.
pub fn main_with<I, T>(args: I, precision_env: Option<&str>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let config = match RunConfig::new(&cli.command, precision_env) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let outcome = match run(&config) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let report = render(&config, &outcome);
    let written = match &config.out {
        Some(path) => std::fs::write(path, &report).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{report}");
            Ok(())
        }
    };
    if let Err(msg) = written {
        eprintln!("error: {msg}");
        return 2;
    }
    if outcome.passed {
        0
    } else {
        1
    }
}
