use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use domcon::example::{example_record, sweep, sweep_csv, ExampleParams, SweepRow};
use domcon::io::parse_operator;
use domcon::lp::{search_lp_failure, SearchConfig};
use domcon::norm::{operator_norm_1, separation_sequence, SeparationSequence};
use domcon::operator::{dominates, is_positive_op, DominatedPair, Operator};
use domcon::verifier::{
    first_separation_index, run_campaign, run_campaign_with_threads, verify_theorem, CampaignConfig, MAX_HORIZON,
};
use domcon::Scalar;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{ExampleArgs, GlobalArgs, NormsArgs, SearchArgs, VerifyArgs};
use crate::exit::{Failure, CLEAN, USAGE, VIOLATION};
use crate::manifest::{emit, load_manifest, read_input, Envelope, InputDigest, RunManifest};

const DEFAULT_HORIZON: usize = 10;
/// `(K + 1)^5` grid points are visited.
const MAX_SWEEP_STEPS: u32 = 12;

fn horizon(global: &GlobalArgs) -> Result<usize, Failure> {
    let h = global.horizon.unwrap_or(DEFAULT_HORIZON);
    if h == 0 || h > MAX_HORIZON {
        return Err(Failure::usage(format!("horizon must be in 1..={MAX_HORIZON} (got {h})")));
    }
    Ok(h)
}

fn csv_sequence(d: &SeparationSequence) -> String {
    let mut out = String::from("n,d,d_approx\n");
    for (i, v) in d.values.iter().enumerate() {
        out.push_str(&format!("{},{},{}\n", i + 1, v, v.to_f64()));
    }
    out
}

fn finish<R: Serialize>(global: &GlobalArgs, manifest: RunManifest, report: R, csv: &str, code: u8) -> Result<u8, Failure> {
    emit(&Envelope { manifest, report }, csv, global.out.as_ref(), global.format)?;
    Ok(code)
}

#[derive(Debug, Serialize)]
struct NormsReport {
    dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<Scalar>>,
    norm_s: Scalar,
    norm_t: Scalar,
    s_positive: bool,
    t_positive: bool,
    /// `S − T ≥ 0` entrywise.
    dominated: bool,
    contractions: bool,
    separation: SeparationSequence,
    n0: Option<usize>,
    nonincreasing: bool,
    /// `0 ≤ T ≤ S` with both contractions, so the theorem applies.
    theorem_applicable: bool,
    violations: Vec<usize>,
    multiple_violations: Vec<usize>,
}

fn load_operator(role: &str, path: &Path) -> Result<(Operator, InputDigest), Failure> {
    let (text, digest) = read_input(role, path)?;
    let op = parse_operator(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    Ok((op, digest))
}

pub fn norms(global: &GlobalArgs, args: &NormsArgs) -> Result<u8, Failure> {
    let horizon = horizon(global)?;
    let (s, ds) = load_operator("S", &args.s)?;
    let (t, dt) = load_operator("T", &args.t)?;
    if s.dim() != t.dim() {
        return Err(Failure::usage(format!(
            "dimension mismatch: S is {0}x{0}, T is {1}x{1}",
            s.dim(),
            t.dim()
        )));
    }
    if s.space() != t.space() {
        return Err(Failure::usage("S and T carry different weights"));
    }
    let separation = separation_sequence(&s, &t, horizon)?;
    let n0 = first_separation_index(&separation);
    let (norm_s, norm_t) = (operator_norm_1(&s), operator_norm_1(&t));
    let one = Scalar::one();
    let verdict = DominatedPair::new(s.clone(), t.clone())
        .ok()
        .map(|pair| verify_theorem(&pair, horizon))
        .transpose()?;
    let report = NormsReport {
        dim: s.dim(),
        weights: (!s.space().is_unweighted()).then(|| s.space().weights().to_vec()),
        s_positive: is_positive_op(&s),
        t_positive: is_positive_op(&t),
        dominated: dominates(&s, &t)?,
        contractions: norm_s <= one && norm_t <= one,
        norm_s,
        norm_t,
        n0,
        nonincreasing: separation.is_nonincreasing(),
        theorem_applicable: verdict.is_some(),
        violations: verdict.as_ref().map(|v| v.violations.clone()).unwrap_or_default(),
        multiple_violations: verdict.as_ref().map(|v| v.multiple_violations.clone()).unwrap_or_default(),
        separation,
    };
    let code = if report.violations.is_empty() && report.multiple_violations.is_empty() {
        CLEAN
    } else {
        VIOLATION
    };
    let csv = csv_sequence(&report.separation);
    let manifest = RunManifest::new("norms", json!({ "horizon": horizon }), vec![ds, dt], None);
    finish(global, manifest, report, &csv, code)
}

fn scalar_arg(name: &str, value: &Option<String>) -> Result<Scalar, Failure> {
    let raw = value
        .as_deref()
        .ok_or_else(|| Failure::usage(format!("missing --{name} (or use --paper-instance)")))?;
    Scalar::from_str(raw).map_err(|e| Failure::usage(format!("--{name}: {e}")))
}

#[derive(Debug, Serialize)]
struct SweepReport {
    steps: u32,
    horizon: usize,
    rows: Vec<SweepRow>,
}

pub fn example(global: &GlobalArgs, args: &ExampleArgs) -> Result<u8, Failure> {
    let horizon = horizon(global)?;
    if let Some(steps) = args.sweep_steps {
        if steps == 0 || steps > MAX_SWEEP_STEPS {
            return Err(Failure::usage(format!("sweep steps must be in 1..={MAX_SWEEP_STEPS} (got {steps})")));
        }
        let rows = sweep(steps, horizon)?;
        let csv = sweep_csv(&rows);
        let config = json!({ "mode": "sweep", "steps": steps, "horizon": horizon });
        let manifest = RunManifest::new("example", config, Vec::new(), None);
        return finish(global, manifest, SweepReport { steps, horizon, rows }, &csv, CLEAN);
    }
    let params = if args.paper_instance {
        ExampleParams::paper_instance()
    } else {
        ExampleParams::new(
            scalar_arg("a", &args.a)?,
            scalar_arg("b", &args.b)?,
            scalar_arg("c", &args.c)?,
            scalar_arg("d", &args.d)?,
            scalar_arg("lambda", &args.lambda)?,
        )
    };
    params
        .validate()
        .map_err(|e| Failure::usage(format!("invalid example parameters: {e}")))?;
    let record = example_record(&params, horizon)?;
    let code = if record.cross_validated { CLEAN } else { VIOLATION };
    let csv = csv_sequence(&record.separation);
    let config = json!({ "mode": "single", "params": params, "horizon": horizon });
    let manifest = RunManifest::new("example", config, Vec::new(), None);
    finish(global, manifest, record, &csv, code)
}

/// Base configuration from a rerun manifest, a config file, or defaults.
fn base_config<C: DeserializeOwned + Default>(
    subcommand: &str,
    config: Option<&Path>,
    from_manifest: Option<&Path>,
) -> Result<(C, Vec<InputDigest>), Failure> {
    if let Some(path) = from_manifest {
        let m = load_manifest(path, subcommand)?;
        let c = serde_json::from_value(m.config)
            .map_err(|e| Failure::usage(format!("{}: bad config in manifest: {e}", path.display())))?;
        return Ok((c, m.inputs));
    }
    if let Some(path) = config {
        let (text, digest) = read_input("config", path)?;
        let c = serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        return Ok((c, vec![digest]));
    }
    Ok((C::default(), Vec::new()))
}

fn set<T: Clone>(slot: &mut T, value: &Option<T>) {
    if let Some(v) = value {
        *slot = v.clone();
    }
}

fn to_value<T: Serialize>(x: &T) -> Result<Value, Failure> {
    serde_json::to_value(x).map_err(|e| Failure::usage(format!("cannot serialize config: {e}")))
}

pub fn verify(global: &GlobalArgs, args: &VerifyArgs) -> Result<u8, Failure> {
    let (mut config, inputs): (CampaignConfig, _) =
        base_config("verify", args.config.as_deref(), args.from_manifest.as_deref())?;
    set(&mut config.master_seed, &global.seed);
    set(&mut config.horizon, &global.horizon);
    set(&mut config.trials, &args.trials);
    set(&mut config.dim_min, &args.dim_min);
    set(&mut config.dim_max, &args.dim_max);
    set(&mut config.density, &args.density);
    set(&mut config.magnitude_grid, &args.magnitude_grid);
    set(&mut config.stochastic_fraction, &args.stochastic_fraction);
    set(&mut config.null_t_fraction, &args.null_t_fraction);
    config.random_weights |= args.random_weights;
    config.include_sequences |= args.include_sequences;
    config.validate()?;

    let started = Instant::now();
    let report = match args.threads {
        Some(0) => return Err(Failure::usage("--threads must be at least 1")),
        Some(n) => run_campaign_with_threads(&config, n)?,
        None => run_campaign(&config)?,
    };
    let c = &report.counts;
    eprintln!(
        "domcon: {} trials, {} with n0, {} corollary cases, {} violations; {} ({:.2?})",
        c.trials,
        c.with_n0,
        c.corollary_cases,
        c.violations,
        report.status,
        started.elapsed()
    );
    let code = if report.is_clean() { CLEAN } else { VIOLATION };
    let csv = report.to_csv();
    let manifest = RunManifest::new("verify", to_value(&config)?, inputs, Some(config.master_seed));
    finish(global, manifest, report, &csv, code)
}

pub fn search_lp(global: &GlobalArgs, args: &SearchArgs) -> Result<u8, Failure> {
    let (mut config, inputs): (SearchConfig, _) =
        base_config("search-lp", args.config.as_deref(), args.from_manifest.as_deref())?;
    set(&mut config.seed, &global.seed);
    set(&mut config.horizon, &global.horizon);
    set(&mut config.ps, &args.ps);
    set(&mut config.trials, &args.trials);
    set(&mut config.dim_min, &args.dim_min);
    set(&mut config.dim_max, &args.dim_max);
    set(&mut config.density, &args.density);
    set(&mut config.margin_tol, &args.margin_tol);
    set(&mut config.tol, &args.tol);
    set(&mut config.max_iter, &args.max_iter);
    set(&mut config.restarts, &args.restarts);
    config.validate()?;

    let started = Instant::now();
    let report = search_lp_failure(&config)?;
    eprintln!(
        "domcon: {} tasks, {} certified candidates ({:.2?})",
        report.tasks,
        report.candidates.len(),
        started.elapsed()
    );
    let csv = report.to_csv();
    let manifest = RunManifest::new("search-lp", to_value(&config)?, inputs, Some(config.seed));
    finish(global, manifest, report, &csv, CLEAN)
}

pub fn report_failure(err: &Failure) -> u8 {
    eprintln!("domcon: error: {err}");
    USAGE
}
