//! Randomized verification campaigns for dominated contraction pairs.
//!
//! Each trial samples a pair `T ≤ S` of positive contractions, computes the
//! exact separation sequence `d(n) = ‖Sⁿ − Tⁿ‖` up to a horizon, and checks
//! that once `d(n₀) < 1` it stays below one. Results are labelled "verified to
//! horizon N", never more.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norm::{dominated_separation_sequence, SeparationSequence};
use crate::operator::{DominatedPair, Operator};
use crate::scalar::{cmp_one, Scalar};
use crate::space::Space;

pub const MAX_DIM: usize = 16;
pub const MAX_HORIZON: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CampaignConfig {
    pub master_seed: u64,
    pub trials: usize,
    pub dim_min: usize,
    pub dim_max: usize,
    pub horizon: usize,
    /// Probability that a sampled entry is forced to zero.
    pub density: f64,
    /// Largest denominator of a sampled raw entry.
    pub magnitude_grid: u32,
    /// Probability that a column of `S` is rescaled to weighted sum exactly 1.
    pub stochastic_fraction: f64,
    /// Probability that a column of `T` is zeroed, which lets `S − T` reach
    /// norm one on that column.
    pub null_t_fraction: f64,
    pub random_weights: bool,
    /// Keep every trial's full exact `d` sequence in the report.
    pub include_sequences: bool,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            master_seed: 0x5eed_d0c0,
            trials: 1000,
            dim_min: 2,
            dim_max: 10,
            horizon: 50,
            density: 0.3,
            magnitude_grid: 6,
            stochastic_fraction: 0.5,
            null_t_fraction: 0.25,
            random_weights: false,
            include_sequences: false,
        }
    }
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.trials == 0 {
            return fail("trials must be at least 1".into());
        }
        if self.dim_min == 0 || self.dim_min > self.dim_max {
            return fail(format!(
                "dimension range must satisfy 1 <= dim_min <= dim_max (got {}..={})",
                self.dim_min, self.dim_max
            ));
        }
        if self.dim_max > MAX_DIM {
            return fail(format!("dim_max {} exceeds cap {MAX_DIM}", self.dim_max));
        }
        if self.horizon == 0 || self.horizon > MAX_HORIZON {
            return fail(format!("horizon must be in 1..={MAX_HORIZON} (got {})", self.horizon));
        }
        if !(0.0..1.0).contains(&self.density) {
            return fail(format!("density must be in [0, 1) (got {})", self.density));
        }
        if self.magnitude_grid == 0 {
            return fail("magnitude_grid must be at least 1".into());
        }
        for (name, v) in [
            ("stochastic_fraction", self.stochastic_fraction),
            ("null_t_fraction", self.null_t_fraction),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return fail(format!("{name} must be in [0, 1] (got {v})"));
            }
        }
        Ok(())
    }
}

/// Deterministic per-trial generator: the trial index selects a ChaCha stream.
pub fn trial_rng(master_seed: u64, trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial_index);
    rng
}

fn sample_raw(rng: &mut impl Rng, density: f64, grid: u32) -> Scalar {
    if rng.gen_bool(density) {
        return Scalar::zero();
    }
    let den = rng.gen_range(1..=grid);
    let num = rng.gen_range(0..=den);
    Scalar::ratio(num.into(), den.into())
}

/// Samples `(S, T)` with `0 ≤ T ≤ S = T + D` and every weighted column sum
/// of `S` at most one.
///
/// Columns of `S` whose weighted sum exceeds one, plus a random fraction of
/// the rest, are rescaled to sum exactly one; the matching column of `T` is
/// scaled by the same factor so dominance survives. A random fraction of the
/// columns of `T` is then zeroed.
pub fn sample_dominated_pair(dim: usize, rng: &mut impl Rng, config: &CampaignConfig) -> Result<DominatedPair> {
    if dim == 0 {
        return Err(Error::Config("dim must be at least 1".into()));
    }
    let grid = config.magnitude_grid.max(1);
    let density = config.density.clamp(0.0, 1.0);
    let weights = if config.random_weights {
        (0..dim)
            .map(|_| {
                let den = rng.gen_range(1..=grid);
                let num = rng.gen_range(1..=2 * den);
                Scalar::ratio(num.into(), den.into())
            })
            .collect()
    } else {
        vec![Scalar::one(); dim]
    };
    let space = Space::new(weights)?;

    let mut t_rows = vec![vec![Scalar::zero(); dim]; dim];
    let mut s_rows = vec![vec![Scalar::zero(); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            let t = sample_raw(rng, density, grid);
            let d = sample_raw(rng, density, grid);
            s_rows[i][j] = &t + &d;
            t_rows[i][j] = t;
        }
    }
    let w = space.weights();
    for j in 0..dim {
        let make_stochastic = rng.gen_bool(config.stochastic_fraction.clamp(0.0, 1.0));
        if rng.gen_bool(config.null_t_fraction.clamp(0.0, 1.0)) {
            for row in t_rows.iter_mut() {
                row[j] = Scalar::zero();
            }
        }
        let col: Scalar = (0..dim).map(|i| &w[i] * &s_rows[i][j]).sum::<Scalar>() / &w[j];
        if col.is_zero() || !(make_stochastic || cmp_one(&col).is_gt()) {
            continue;
        }
        let factor = col.recip();
        for i in 0..dim {
            s_rows[i][j] = &s_rows[i][j] * &factor;
            t_rows[i][j] = &t_rows[i][j] * &factor;
        }
    }
    let s = Operator::from_rows(space.clone(), s_rows)?;
    let t = Operator::from_rows(space, t_rows)?;
    DominatedPair::new(s, t)
}

/// Smallest `n` with `d(n) < 1`, compared exactly.
pub fn first_separation_index(d: &SeparationSequence) -> Option<usize> {
    d.values.iter().position(|v| cmp_one(v).is_lt()).map(|i| i + 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub pair_id: usize,
    pub n0: Option<usize>,
    /// Every `n ≥ n₀` (or every `n` for the corollary) with `d(n) ≥ 1`.
    pub violations: Vec<usize>,
    /// Multiples `k·n₀` within the horizon with `d(k·n₀) ≥ 1`.
    pub multiple_violations: Vec<usize>,
    pub d_sequence: SeparationSequence,
    /// `d(1) < 1`.
    pub corollary_applicable: bool,
    /// `d(n) = 1` for every `n` up to the horizon.
    pub no_separation: bool,
    /// Empirical only; nothing is asserted about monotonicity.
    pub nonincreasing: bool,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.violations.is_empty() && self.multiple_violations.is_empty()
    }
}

fn theorem_verdict(pair_id: usize, d: SeparationSequence) -> Verdict {
    let n0 = first_separation_index(&d);
    let at_least_one = |n: &usize| !cmp_one(&d.values[n - 1]).is_lt();
    let (violations, multiple_violations) = match n0 {
        Some(n0) => (
            (n0..=d.horizon).filter(at_least_one).collect(),
            (n0..=d.horizon).step_by(n0).filter(at_least_one).collect(),
        ),
        None => (Vec::new(), Vec::new()),
    };
    Verdict {
        pair_id,
        n0,
        violations,
        multiple_violations,
        corollary_applicable: n0 == Some(1),
        no_separation: d.values.iter().all(|v| cmp_one(v).is_eq()),
        nonincreasing: d.is_nonincreasing(),
        d_sequence: d,
    }
}

fn corollary_verdict(pair_id: usize, d: SeparationSequence) -> Verdict {
    let mut v = theorem_verdict(pair_id, d);
    v.multiple_violations.clear();
    v.violations = if v.corollary_applicable {
        (1..=v.d_sequence.horizon)
            .filter(|n| !cmp_one(&v.d_sequence.values[n - 1]).is_lt())
            .collect()
    } else {
        Vec::new()
    };
    v
}

/// Checks `d(n) < 1` for every `n₀ ≤ n ≤ horizon`, and separately for every
/// multiple of `n₀`.
pub fn verify_theorem(pair: &DominatedPair, horizon: usize) -> Result<Verdict> {
    Ok(theorem_verdict(0, dominated_separation_sequence(pair, horizon)?))
}

/// When `d(1) < 1`, checks `d(n) < 1` for every `n ≤ horizon`; otherwise
/// marks the corollary inapplicable and asserts nothing.
pub fn verify_corollary(pair: &DominatedPair, horizon: usize) -> Result<Verdict> {
    Ok(corollary_verdict(0, dominated_separation_sequence(pair, horizon)?))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub trial: usize,
    pub dim: usize,
    pub n0: Option<usize>,
    pub d1: Scalar,
    /// Decimal approximation of `min d(n)`; the exact value is in `d` when
    /// sequences are kept.
    pub min_d: f64,
    pub violations: Vec<usize>,
    pub multiple_violations: Vec<usize>,
    pub corollary_applicable: bool,
    pub corollary_violations: Vec<usize>,
    pub no_separation: bool,
    pub nonincreasing: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<SeparationSequence>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignCounts {
    pub trials: usize,
    pub with_n0: usize,
    pub no_separation: usize,
    pub corollary_cases: usize,
    /// Trials with any theorem violation; zero unless the engine is broken.
    pub violations: usize,
    pub multiple_violations: usize,
    pub corollary_violations: usize,
    /// Corollary trials whose `n₀` is not 1.
    pub corollary_n0_mismatches: usize,
    pub nonincreasing: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub config: CampaignConfig,
    pub status: String,
    pub counts: CampaignCounts,
    /// Number of trials per first separation index.
    pub n0_histogram: BTreeMap<usize, usize>,
    pub trials: Vec<TrialSummary>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl CampaignReport {
    pub fn is_clean(&self) -> bool {
        let c = &self.counts;
        c.violations == 0
            && c.multiple_violations == 0
            && c.corollary_violations == 0
            && c.corollary_n0_mismatches == 0
    }

    /// `trial,dim,n0,min_d,violations`
    pub fn to_csv(&self) -> String {
        let mut out = String::from("trial,dim,n0,min_d,violations\n");
        for t in &self.trials {
            let n0 = t.n0.map(|n| n.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                t.trial,
                t.dim,
                n0,
                t.min_d,
                t.violations.len()
            ));
        }
        out
    }
}

/// One trial, fully determined by `(master_seed, trial_index)`.
pub fn run_trial(config: &CampaignConfig, trial_index: usize) -> Result<TrialSummary> {
    let mut rng = trial_rng(config.master_seed, trial_index as u64);
    let dim = rng.gen_range(config.dim_min..=config.dim_max);
    let pair = sample_dominated_pair(dim, &mut rng, config)?;
    let d = dominated_separation_sequence(&pair, config.horizon)?;
    let theorem = theorem_verdict(trial_index, d);
    let corollary = corollary_verdict(trial_index, theorem.d_sequence.clone());
    Ok(TrialSummary {
        trial: trial_index,
        dim,
        n0: theorem.n0,
        d1: theorem.d_sequence.values[0].clone(),
        min_d: theorem.d_sequence.min().map(Scalar::to_f64).unwrap_or(f64::NAN),
        violations: theorem.violations,
        multiple_violations: theorem.multiple_violations,
        corollary_applicable: theorem.corollary_applicable,
        corollary_violations: corollary.violations,
        no_separation: theorem.no_separation,
        nonincreasing: theorem.nonincreasing,
        d: config.include_sequences.then_some(theorem.d_sequence),
    })
}

/// Runs all trials on the current rayon pool. Trial order in the report is
/// by index, so the result does not depend on scheduling.
pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignReport> {
    config.validate()?;
    let start = Instant::now();
    let trials = (0..config.trials)
        .into_par_iter()
        .map(|i| run_trial(config, i))
        .collect::<Result<Vec<_>>>()?;

    let mut counts = CampaignCounts {
        trials: trials.len(),
        ..Default::default()
    };
    let mut n0_histogram = BTreeMap::new();
    for t in &trials {
        if let Some(n0) = t.n0 {
            counts.with_n0 += 1;
            *n0_histogram.entry(n0).or_insert(0) += 1;
        }
        counts.no_separation += usize::from(t.no_separation);
        counts.violations += usize::from(!t.violations.is_empty());
        counts.multiple_violations += usize::from(!t.multiple_violations.is_empty());
        counts.nonincreasing += usize::from(t.nonincreasing);
        if t.corollary_applicable {
            counts.corollary_cases += 1;
            counts.corollary_violations += usize::from(!t.corollary_violations.is_empty());
            counts.corollary_n0_mismatches += usize::from(t.n0 != Some(1));
        }
    }
    let mut report = CampaignReport {
        config: config.clone(),
        status: String::new(),
        counts,
        n0_histogram,
        trials,
        wall_time: start.elapsed(),
    };
    report.status = if report.is_clean() {
        format!("verified to horizon {}", config.horizon)
    } else {
        "violation detected".to_string()
    };
    Ok(report)
}

/// [`run_campaign`] on a dedicated pool of `threads` workers.
pub fn run_campaign_with_threads(config: &CampaignConfig, threads: usize) -> Result<CampaignReport> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| run_campaign(config))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::{operator_norm_1, separation_sequence};
    use crate::operator::dominates;

    fn q(s: &str) -> Scalar {
        s.parse().unwrap()
    }

    fn seq(values: &[&str]) -> SeparationSequence {
        SeparationSequence {
            horizon: values.len(),
            values: values.iter().map(|v| q(v)).collect(),
        }
    }

    fn reference_pair() -> DominatedPair {
        let space = Space::unweighted(2).unwrap();
        let s = Operator::from_rows(
            space.clone(),
            vec![vec![q("1/2"), q("1/3")], vec![q("1/2"), q("1/3")]],
        )
        .unwrap();
        let t = Operator::from_rows(space, vec![vec![q("0"), q("1/4")], vec![q("0"), q("0")]]).unwrap();
        DominatedPair::new(s, t).unwrap()
    }

    fn unit_pair() -> DominatedPair {
        let space = Space::unweighted(1).unwrap();
        DominatedPair::new(Operator::identity(space.clone()), Operator::zero(space)).unwrap()
    }

    #[test]
    fn first_index_examples() {
        assert_eq!(first_separation_index(&seq(&["1", "5/6", "25/36"])), Some(2));
        assert_eq!(first_separation_index(&seq(&["0", "0", "0"])), Some(1));
        assert_eq!(first_separation_index(&seq(&["1", "1", "1"])), None);
    }

    #[test]
    fn theorem_examples() {
        let v = verify_theorem(&reference_pair(), 64).unwrap();
        assert_eq!(v.n0, Some(2));
        assert!(v.holds());
        assert!(!v.corollary_applicable);

        let p = reference_pair();
        let same = DominatedPair::new(p.s().clone(), p.s().clone()).unwrap();
        let v = verify_theorem(&same, 10).unwrap();
        assert_eq!(v.n0, Some(1));
        assert!(v.holds());

        let v = verify_theorem(&unit_pair(), 10).unwrap();
        assert_eq!(v.n0, None);
        assert!(v.violations.is_empty());
        assert!(v.no_separation);
    }

    #[test]
    fn violations_are_collected_after_n0() {
        let v = theorem_verdict(0, seq(&["1", "1/2", "1", "1/3", "1"]));
        assert_eq!(v.n0, Some(2));
        assert_eq!(v.violations, vec![3, 5]);
        assert!(v.multiple_violations.is_empty());
        let v = theorem_verdict(0, seq(&["1", "1/2", "1/2", "1"]));
        assert_eq!(v.multiple_violations, vec![4]);
    }

    #[test]
    fn corollary_examples() {
        let v = verify_corollary(&reference_pair(), 20).unwrap();
        assert!(!v.corollary_applicable);
        assert!(v.violations.is_empty());

        // d(1) = 5/6 after scaling S by 5/6
        let p = reference_pair();
        let shrunk = DominatedPair::new(p.s().scale(&q("5/6")), p.t().clone()).unwrap();
        let v = verify_corollary(&shrunk, 20).unwrap();
        assert_eq!(v.d_sequence.values[0], q("5/6"));
        assert!(v.corollary_applicable);
        assert!(v.violations.is_empty());
        assert_eq!(v.n0, Some(1));

        let same = DominatedPair::new(p.s().clone(), p.s().clone()).unwrap();
        let v = verify_corollary(&same, 10).unwrap();
        assert!(v.corollary_applicable && v.violations.is_empty());
    }

    #[test]
    fn sampler_outputs_are_valid_pairs() {
        let config = CampaignConfig {
            random_weights: true,
            ..Default::default()
        };
        for trial in 0..200 {
            let mut rng = trial_rng(7, trial);
            let dim = 1 + (trial as usize % 6);
            let pair = sample_dominated_pair(dim, &mut rng, &config).unwrap();
            assert!(dominates(pair.s(), pair.t()).unwrap());
            assert!(pair.t().is_positive());
            assert!(cmp_one(&operator_norm_1(pair.s())).is_le());
            assert!(cmp_one(&operator_norm_1(pair.t())).is_le());
        }
    }

    #[test]
    fn sampler_fixed_seed_dim2_is_reproducible() {
        let config = CampaignConfig::default();
        let a = sample_dominated_pair(2, &mut trial_rng(42, 0), &config).unwrap();
        let b = sample_dominated_pair(2, &mut trial_rng(42, 0), &config).unwrap();
        assert_eq!(a, b);
        let c = sample_dominated_pair(2, &mut trial_rng(42, 1), &config).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn fully_stochastic_sampling_hits_the_boundary() {
        let config = CampaignConfig {
            stochastic_fraction: 1.0,
            density: 0.0,
            ..Default::default()
        };
        let pair = sample_dominated_pair(4, &mut trial_rng(1, 3), &config).unwrap();
        for j in 0..4 {
            assert_eq!(pair.s().column_norm(j), Scalar::one());
        }
    }

    #[test]
    fn trace_route_agrees_with_matrix_route_on_samples() {
        let config = CampaignConfig {
            random_weights: true,
            ..Default::default()
        };
        for trial in 0..40 {
            let mut rng = trial_rng(99, trial);
            let pair = sample_dominated_pair(1 + trial as usize % 5, &mut rng, &config).unwrap();
            assert_eq!(
                dominated_separation_sequence(&pair, 6).unwrap(),
                separation_sequence(pair.s(), pair.t(), 6).unwrap()
            );
        }
    }

    #[test]
    fn config_validation() {
        let ok = CampaignConfig::default();
        assert!(ok.validate().is_ok());
        let bad = [
            CampaignConfig { trials: 0, ..ok.clone() },
            CampaignConfig { dim_min: 0, ..ok.clone() },
            CampaignConfig { dim_min: 5, dim_max: 4, ..ok.clone() },
            CampaignConfig { dim_max: MAX_DIM + 1, ..ok.clone() },
            CampaignConfig { horizon: 0, ..ok.clone() },
            CampaignConfig { horizon: MAX_HORIZON + 1, ..ok.clone() },
            CampaignConfig { density: 1.0, ..ok.clone() },
            CampaignConfig { magnitude_grid: 0, ..ok.clone() },
            CampaignConfig { stochastic_fraction: 1.5, ..ok.clone() },
            CampaignConfig { null_t_fraction: -0.1, ..ok.clone() },
        ];
        for cfg in bad {
            assert!(matches!(cfg.validate(), Err(Error::Config(_))), "{cfg:?}");
            assert!(run_campaign(&cfg).is_err());
        }
    }

    #[test]
    fn small_campaign_is_clean_and_deterministic() {
        let config = CampaignConfig {
            trials: 40,
            horizon: 12,
            dim_max: 5,
            ..Default::default()
        };
        let a = run_campaign_with_threads(&config, 1).unwrap();
        let b = run_campaign_with_threads(&config, 3).unwrap();
        assert!(a.is_clean());
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        assert_eq!(a.to_csv().lines().count(), 41);
    }
}
