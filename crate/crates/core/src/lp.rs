//! ℓp operator norms in floating point, with certified brackets, and a
//! randomized search for dominated pairs whose separation sequence returns
//! to one after dropping below it.
//!
//! A bracket `[lower, upper]` for `‖M‖_p` takes `lower` from an explicit
//! witness (`‖Mx‖_p / ‖x‖_p`, evaluated directly) found by the nonlinear power
//! iteration for p-norms, and `upper` from the interpolation bound
//! `‖M‖₁^{1/p} ‖M‖_∞^{1−1/p}`, rounded outward.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::verifier::{trial_rng, MAX_DIM};

/// Dense square real matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    n: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidSpace("matrix must be at least 1×1".into()));
        }
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            if let Some(x) = row.iter().find(|x| !x.is_finite()) {
                return Err(Error::NonFinite(format!("matrix entry {x}")));
            }
            data.extend_from_slice(row);
        }
        Ok(RealMatrix { n, data })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        RealMatrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n).map(<[_]>::to_vec).collect()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.data
            .chunks(self.n)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn apply_transpose(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (i, row) in self.data.chunks(self.n).enumerate() {
            for (o, a) in out.iter_mut().zip(row) {
                *o += a * y[i];
            }
        }
        out
    }

    pub fn mul(&self, rhs: &RealMatrix) -> RealMatrix {
        let n = self.n;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        RealMatrix { n, data }
    }

    pub fn sub(&self, rhs: &RealMatrix) -> RealMatrix {
        RealMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: f64) -> RealMatrix {
        RealMatrix {
            n: self.n,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> f64 {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self.get(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        self.data
            .chunks(self.n)
            .map(|row| row.iter().map(|a| a.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// `(Σ wᵢ|xᵢ|^p)^{1/p}`, computed with the largest entry factored out so it
/// neither overflows nor underflows for extreme `p`. `p = ∞` gives the max.
pub fn p_norm_vec(x: &[f64], p: f64, weights: Option<&[f64]>) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::Config(format!("p must be >= 1 (got {p})")));
    }
    if let Some(v) = x.iter().find(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("vector entry {v}")));
    }
    if let Some(w) = weights {
        if w.len() != x.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                got: w.len(),
            });
        }
        if w.iter().any(|w| !w.is_finite() || *w <= 0.0) {
            return Err(Error::InvalidSpace("weights must be finite and > 0".into()));
        }
    }
    Ok(p_norm_unchecked(x, p, weights))
}

fn p_norm_unchecked(x: &[f64], p: f64, weights: Option<&[f64]>) -> f64 {
    let m = x.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    if m == 0.0 {
        return 0.0;
    }
    if p.is_infinite() {
        return m;
    }
    let sum: f64 = x
        .iter()
        .enumerate()
        .map(|(i, v)| weights.map_or(1.0, |w| w[i]) * (v.abs() / m).powf(p))
        .sum();
    m * sum.powf(1.0 / p)
}

/// Direction of `sign(v)|v|^{e}`, scaled by the largest entry.
fn dual_direction(v: &[f64], exponent: f64) -> Vec<f64> {
    let m = v.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
    if m == 0.0 {
        return vec![0.0; v.len()];
    }
    v.iter()
        .map(|&x| {
            if x == 0.0 {
                0.0
            } else {
                x.signum() * (x.abs() / m).powf(exponent)
            }
        })
        .collect()
}

/// Outward rounding applied to the interpolation bound.
fn upper_inflation(n: usize) -> f64 {
    1.0 + (2.0 * n as f64 + 8.0) * f64::EPSILON
}

/// `‖M‖₁^{1/p} ‖M‖_∞^{1−1/p}`, rounded outward; `p = 1` and `p = ∞` give the
/// column and row formulas.
pub fn interpolation_upper(m: &RealMatrix, p: f64) -> f64 {
    let (one, inf) = (m.norm_1(), m.norm_inf());
    let raw = if p.is_infinite() {
        inf
    } else if p == 1.0 {
        one
    } else if one == 0.0 || inf == 0.0 {
        0.0
    } else {
        one.powf(1.0 / p) * inf.powf(1.0 - 1.0 / p)
    };
    raw * upper_inflation(m.dim())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PNormBracket {
    pub p: f64,
    pub lower: f64,
    pub upper: f64,
    pub witness: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Best lower bound after each iteration of the winning start.
    #[serde(skip)]
    pub history: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BracketOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Random positive starts in addition to the all-ones start.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for BracketOptions {
    fn default() -> Self {
        BracketOptions {
            tol: 1e-12,
            max_iter: 1000,
            restarts: 8,
            seed: 0,
        }
    }
}

struct StartResult {
    value: f64,
    witness: Vec<f64>,
    iterations: usize,
    converged: bool,
    history: Vec<f64>,
}

fn ratio(m: &RealMatrix, x: &[f64], p: f64) -> f64 {
    let den = p_norm_unchecked(x, p, None);
    if den == 0.0 {
        0.0
    } else {
        p_norm_unchecked(&m.apply(x), p, None) / den
    }
}

fn power_iteration(m: &RealMatrix, p: f64, start: Vec<f64>, tol: f64, max_iter: usize) -> StartResult {
    let q = p / (p - 1.0);
    let mut x = start;
    let mut best = ratio(m, &x, p);
    let mut witness = x.clone();
    let mut history = vec![best];
    let mut prev = best;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        let y = m.apply(&x);
        let z = m.apply_transpose(&dual_direction(&y, p - 1.0));
        if z.iter().all(|v| *v == 0.0) {
            converged = true;
            break;
        }
        let next = dual_direction(&z, q - 1.0);
        let nn = p_norm_unchecked(&next, p, None);
        if nn == 0.0 || !nn.is_finite() {
            converged = true;
            break;
        }
        // Stationary point: ‖z‖_q ≤ zᵀx.
        let zx: f64 = z.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() / p_norm_unchecked(&x, p, None);
        let stationary = p_norm_unchecked(&z, q, None) <= zx;
        x = next.iter().map(|v| v / nn).collect();
        let value = ratio(m, &x, p);
        if value > best {
            best = value;
            witness = x.clone();
        }
        history.push(best);
        if stationary || (value - prev).abs() < tol {
            converged = true;
            break;
        }
        prev = value;
    }
    StartResult {
        value: best,
        witness,
        iterations,
        converged,
        history,
    }
}

/// Bracket with the default options and the given tolerance and iteration cap.
pub fn p_norm_op_bracket(m: &RealMatrix, p: f64, tol: f64, max_iter: usize) -> Result<PNormBracket> {
    p_norm_op_bracket_with(
        m,
        p,
        &BracketOptions {
            tol,
            max_iter,
            ..Default::default()
        },
    )
}

pub fn p_norm_op_bracket_with(m: &RealMatrix, p: f64, opts: &BracketOptions) -> Result<PNormBracket> {
    if p <= 1.0 || !p.is_finite() {
        return Err(Error::Config(format!("p must be finite and > 1 (got {p})")));
    }
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(Error::Config(format!("tol must be > 0 (got {})", opts.tol)));
    }
    let n = m.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut starts = vec![vec![1.0; n]];
    for _ in 0..opts.restarts {
        starts.push((0..n).map(|_| rng.gen_range(f64::EPSILON..=1.0)).collect());
    }
    let mut best: Option<StartResult> = None;
    let mut iterations = 0;
    for start in starts {
        let r = power_iteration(m, p, start, opts.tol, opts.max_iter);
        iterations += r.iterations;
        if best.as_ref().is_none_or(|b| r.value > b.value) {
            best = Some(r);
        }
    }
    let best = best.expect("at least one start");
    Ok(PNormBracket {
        p,
        lower: best.value,
        upper: interpolation_upper(m, p),
        witness: best.witness,
        iterations,
        converged: best.converged,
        history: best.history,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchConfig {
    pub ps: Vec<f64>,
    pub trials: usize,
    pub dim_min: usize,
    pub dim_max: usize,
    pub horizon: usize,
    pub margin_tol: f64,
    pub seed: u64,
    pub density: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub restarts: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            ps: vec![1.5, 2.0, 3.0],
            trials: 100,
            dim_min: 2,
            dim_max: 6,
            horizon: 12,
            margin_tol: 1e-6,
            seed: 0x5eed_d0c0,
            density: 0.3,
            tol: 1e-10,
            max_iter: 200,
            restarts: 8,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.ps.is_empty() {
            return fail("at least one p is required".into());
        }
        if let Some(p) = self.ps.iter().find(|p| !(**p > 1.0 && p.is_finite())) {
            return fail(format!("p must exceed 1 and be finite (got {p})"));
        }
        if self.trials == 0 {
            return fail("trials must be at least 1".into());
        }
        if self.dim_min == 0 || self.dim_min > self.dim_max || self.dim_max > MAX_DIM {
            return fail(format!(
                "dimension range must satisfy 1 <= dim_min <= dim_max <= {MAX_DIM}"
            ));
        }
        if self.horizon < 2 {
            return fail("horizon must be at least 2".into());
        }
        if !(self.margin_tol > 0.0 && self.margin_tol < 1.0) {
            return fail(format!("margin_tol must be in (0, 1) (got {})", self.margin_tol));
        }
        if !(0.0..1.0).contains(&self.density) {
            return fail(format!("density must be in [0, 1) (got {})", self.density));
        }
        if self.tol.is_nan() || self.tol <= 0.0 || self.max_iter == 0 {
            return fail("tol must be > 0 and max_iter >= 1".into());
        }
        Ok(())
    }
}

/// Bound on the floating-point error of a bracket endpoint for the `n`-th
/// power of a `dim`-dimensional contraction pair.
pub fn error_budget(dim: usize, n: usize) -> f64 {
    64.0 * (dim as f64 + 2.0) * (n as f64 + 1.0) * f64::EPSILON
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerBracket {
    pub n: usize,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureCandidate {
    pub p: f64,
    pub dim: usize,
    pub s: Vec<Vec<f64>>,
    pub t: Vec<Vec<f64>>,
    pub n0_claim: usize,
    pub n_violation: usize,
    /// `1 − upper(n₀)`.
    pub margin_n0: f64,
    /// `lower(n_violation) − 1`.
    pub margin_violation: f64,
    pub brackets: Vec<PowerBracket>,
}

fn separation_brackets(
    s: &RealMatrix,
    t: &RealMatrix,
    p: f64,
    horizon: usize,
    opts: &BracketOptions,
) -> Result<Vec<PowerBracket>> {
    let mut sn = s.clone();
    let mut tn = t.clone();
    let mut out = Vec::with_capacity(horizon);
    for n in 1..=horizon {
        if n > 1 {
            sn = s.mul(&sn);
            tn = t.mul(&tn);
        }
        let b = p_norm_op_bracket_with(&sn.sub(&tn), p, opts)?;
        out.push(PowerBracket {
            n,
            lower: b.lower,
            upper: b.upper,
        });
    }
    Ok(out)
}

/// `(n₀, n_violation)` if some `n₀` has `upper < 1 − margin` and a later `n`
/// has `lower ≥ 1 + margin`.
fn find_gap(brackets: &[PowerBracket], margin: f64) -> Option<(usize, usize)> {
    let n0 = brackets.iter().find(|b| b.upper < 1.0 - margin)?.n;
    let nv = brackets
        .iter()
        .find(|b| b.n > n0 && b.lower >= 1.0 + margin)?
        .n;
    Some((n0, nv))
}

/// Certifies `d_p(n₀) < 1 ≤ d_p(n)` for some `n > n₀` on an arbitrary pair,
/// then re-checks the same indices with a 10× tighter tolerance. Returns
/// `None` unless both passes keep both gaps above `margin_tol` and
/// `margin_tol` exceeds the floating-point error budget.
pub fn certify_pair(
    s: &RealMatrix,
    t: &RealMatrix,
    p: f64,
    horizon: usize,
    margin_tol: f64,
    opts: &BracketOptions,
) -> Result<Option<FailureCandidate>> {
    if s.dim() != t.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            got: t.dim(),
        });
    }
    let dim = s.dim();
    let budget = error_budget(dim, horizon);
    if margin_tol <= budget {
        return Ok(None);
    }
    let brackets = separation_brackets(s, t, p, horizon, opts)?;
    let Some((n0, nv)) = find_gap(&brackets, margin_tol) else {
        return Ok(None);
    };
    let tight = BracketOptions {
        tol: opts.tol / 10.0,
        max_iter: opts.max_iter.saturating_mul(10),
        ..opts.clone()
    };
    let recheck = separation_brackets(s, t, p, horizon, &tight)?;
    let (up, lo) = (recheck[n0 - 1].upper, recheck[nv - 1].lower);
    if !(up < 1.0 - margin_tol && lo >= 1.0 + margin_tol) {
        return Ok(None);
    }
    Ok(Some(FailureCandidate {
        p,
        dim,
        s: s.rows(),
        t: t.rows(),
        n0_claim: n0,
        n_violation: nv,
        margin_n0: 1.0 - up,
        margin_violation: lo - 1.0,
        brackets: recheck,
    }))
}

/// Samples `0 ≤ T ≤ S = T + D` and scales both so the interpolation bound of
/// `S` is one. Since `T ≤ S` entrywise, `‖T‖_p ≤ ‖S‖_p ≤ 1`.
pub fn sample_lp_pair(dim: usize, p: f64, density: f64, rng: &mut impl Rng) -> (RealMatrix, RealMatrix) {
    let mut draw = || {
        if rng.gen_bool(density) {
            0.0
        } else {
            rng.gen_range(0.0..1.0)
        }
    };
    let mut t = vec![vec![0.0; dim]; dim];
    let mut s = vec![vec![0.0; dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            t[i][j] = draw();
            s[i][j] = t[i][j] + draw();
        }
    }
    let s = RealMatrix::from_rows(&s).expect("finite");
    let t = RealMatrix::from_rows(&t).expect("finite");
    let u = interpolation_upper(&s, p);
    if u > 0.0 {
        (s.scale(1.0 / u), t.scale(1.0 / u))
    } else {
        (s, t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproachSummary {
    pub p: f64,
    pub tasks: usize,
    /// Tasks where some `n` has `upper < 1 − margin_tol`.
    pub with_n0_claim: usize,
    /// Largest lower bound of `d_p(n)` seen after a certified `n₀`.
    pub max_lower_after_n0: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub config: SearchConfig,
    pub tasks: usize,
    pub candidates: Vec<FailureCandidate>,
    pub approach: Vec<ApproachSummary>,
}

impl SearchReport {
    /// `p,dim,n0_claim,n_violation,margin`, margin being the smaller gap.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,dim,n0_claim,n_violation,margin\n");
        for c in &self.candidates {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                c.p,
                c.dim,
                c.n0_claim,
                c.n_violation,
                c.margin_n0.min(c.margin_violation)
            ));
        }
        out
    }
}

struct TaskOutcome {
    p_index: usize,
    n0_claim: bool,
    max_lower_after_n0: f64,
    candidate: Option<FailureCandidate>,
}

fn run_task(config: &SearchConfig, task: usize) -> Result<TaskOutcome> {
    let p_index = task % config.ps.len();
    let p = config.ps[p_index];
    let mut rng = trial_rng(config.seed, task as u64);
    let dim = rng.gen_range(config.dim_min..=config.dim_max);
    let (s, t) = sample_lp_pair(dim, p, config.density, &mut rng);
    let opts = BracketOptions {
        tol: config.tol,
        max_iter: config.max_iter,
        restarts: config.restarts,
        seed: rng.gen(),
    };
    let brackets = separation_brackets(&s, &t, p, config.horizon, &opts)?;
    let n0 = brackets
        .iter()
        .find(|b| b.upper < 1.0 - config.margin_tol)
        .map(|b| b.n);
    let max_lower_after_n0 = n0.map_or(0.0, |n0| {
        brackets[n0..].iter().map(|b| b.lower).fold(0.0, f64::max)
    });
    let candidate = if find_gap(&brackets, config.margin_tol).is_some() {
        certify_pair(&s, &t, p, config.horizon, config.margin_tol, &opts)?
    } else {
        None
    };
    Ok(TaskOutcome {
        p_index,
        n0_claim: n0.is_some(),
        max_lower_after_n0,
        candidate,
    })
}

/// Runs `trials × ps.len()` independent tasks; task `k` uses stream `k` of
/// the seed and `p = ps[k mod ps.len()]`.
pub fn search_lp_failure(config: &SearchConfig) -> Result<SearchReport> {
    config.validate()?;
    let tasks = config.trials * config.ps.len();
    let outcomes = (0..tasks)
        .into_par_iter()
        .map(|k| run_task(config, k))
        .collect::<Result<Vec<_>>>()?;
    let mut approach: Vec<ApproachSummary> = config
        .ps
        .iter()
        .map(|&p| ApproachSummary {
            p,
            tasks: 0,
            with_n0_claim: 0,
            max_lower_after_n0: 0.0,
        })
        .collect();
    let mut candidates = Vec::new();
    for o in outcomes {
        let a = &mut approach[o.p_index];
        a.tasks += 1;
        a.with_n0_claim += usize::from(o.n0_claim);
        a.max_lower_after_n0 = a.max_lower_after_n0.max(o.max_lower_after_n0);
        candidates.extend(o.candidate);
    }
    Ok(SearchReport {
        config: config.clone(),
        tasks,
        candidates,
        approach,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> RealMatrix {
        RealMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn vector_norm_examples() {
        assert!((p_norm_vec(&[3.0, 4.0], 2.0, Some(&[1.0, 1.0])).unwrap() - 5.0).abs() < 1e-15);
        assert_eq!(p_norm_vec(&[1.0, -2.0], 1.0, None).unwrap(), 3.0);
        let v = p_norm_vec(&[1.0, 1.0], 3.0, None).unwrap();
        assert!((v - 2f64.powf(1.0 / 3.0)).abs() < 1e-15);
        assert_eq!(p_norm_vec(&[1.0, -7.0], f64::INFINITY, None).unwrap(), 7.0);
    }

    #[test]
    fn vector_norm_errors() {
        assert!(matches!(p_norm_vec(&[f64::NAN], 2.0, None), Err(Error::NonFinite(_))));
        assert!(matches!(p_norm_vec(&[f64::INFINITY], 2.0, None), Err(Error::NonFinite(_))));
        assert!(p_norm_vec(&[1.0], 0.5, None).is_err());
        assert!(p_norm_vec(&[1.0, 2.0], 2.0, Some(&[1.0])).is_err());
    }

    #[test]
    fn vector_norm_survives_extreme_exponents() {
        let v = p_norm_vec(&[1e-200, 3e-200], 1e6, None).unwrap();
        assert!((v / 3e-200 - 1.0).abs() < 1e-5);
    }

    #[test]
    fn identity_bracket_is_tight() {
        let b = p_norm_op_bracket(&RealMatrix::identity(3), 2.0, 1e-12, 100).unwrap();
        assert!((b.lower - 1.0).abs() < 1e-14);
        assert!((b.upper - 1.0).abs() < 1e-14);
        assert!(b.converged);
    }

    #[test]
    fn rank_one_example() {
        let b = p_norm_op_bracket(&m(&[&[1.0, 1.0], &[0.0, 0.0]]), 2.0, 1e-14, 1000).unwrap();
        let r2 = 2f64.sqrt();
        assert!((b.lower - r2).abs() < 1e-12, "{}", b.lower);
        assert!((b.upper - r2).abs() < 1e-12);
        assert!(b.lower <= b.upper);
    }

    #[test]
    fn bracket_rejects_bad_p_and_tol() {
        let id = RealMatrix::identity(2);
        assert!(p_norm_op_bracket(&id, 1.0, 1e-9, 10).is_err());
        assert!(p_norm_op_bracket(&id, f64::INFINITY, 1e-9, 10).is_err());
        assert!(p_norm_op_bracket(&id, 2.0, 0.0, 10).is_err());
    }

    #[test]
    fn non_convergence_keeps_a_valid_bracket() {
        let a = m(&[&[0.9, 0.5, 0.1], &[0.2, 0.8, 0.7], &[0.4, 0.3, 0.95]]);
        let b = p_norm_op_bracket_with(
            &a,
            3.0,
            &BracketOptions {
                tol: 1e-300,
                max_iter: 1,
                restarts: 0,
                seed: 0,
            },
        )
        .unwrap();
        assert!(b.lower <= b.upper);
        let direct = p_norm_vec(&a.apply(&b.witness), 3.0, None).unwrap()
            / p_norm_vec(&b.witness, 3.0, None).unwrap();
        assert_eq!(b.lower, direct);
    }

    #[test]
    fn interpolation_endpoints() {
        let a = m(&[&[1.0, -2.0], &[3.0, 0.5]]);
        assert!((interpolation_upper(&a, 1.0) - 4.0).abs() < 1e-12);
        assert!((interpolation_upper(&a, f64::INFINITY) - 3.5).abs() < 1e-12);
    }

    #[test]
    fn certification_finds_growth_after_separation() {
        // d(n) = 1.2ⁿ − 1.1ⁿ: below one until n = 6
        let s = RealMatrix::identity(2).scale(1.2);
        let t = RealMatrix::identity(2).scale(1.1);
        let c = certify_pair(&s, &t, 2.0, 8, 1e-6, &BracketOptions::default())
            .unwrap()
            .expect("candidate");
        assert_eq!((c.n0_claim, c.n_violation), (1, 6));
        assert!(c.margin_n0 > 1e-6 && c.margin_violation > 1e-6);
    }

    #[test]
    fn certification_refuses_margins_inside_error_budget() {
        let s = RealMatrix::identity(2).scale(1.2);
        let t = RealMatrix::identity(2).scale(1.1);
        let tiny = error_budget(2, 8) / 2.0;
        assert!(certify_pair(&s, &t, 2.0, 8, tiny, &BracketOptions::default())
            .unwrap()
            .is_none());
    }

    #[test]
    fn sampled_pairs_are_contractions() {
        let mut rng = trial_rng(5, 0);
        for p in [1.5, 2.0, 3.0] {
            for dim in 1..6 {
                let (s, t) = sample_lp_pair(dim, p, 0.3, &mut rng);
                assert!(interpolation_upper(&s, p) <= 1.0 + 1e-12);
                for i in 0..dim {
                    for j in 0..dim {
                        assert!(t.get(i, j) >= 0.0 && t.get(i, j) <= s.get(i, j));
                    }
                }
            }
        }
    }

    #[test]
    fn search_config_guards() {
        let bad = SearchConfig {
            ps: vec![1.0],
            ..Default::default()
        };
        assert!(matches!(search_lp_failure(&bad), Err(Error::Config(_))));
        assert!(SearchConfig { trials: 0, ..Default::default() }.validate().is_err());
        assert!(SearchConfig { horizon: 1, ..Default::default() }.validate().is_err());
    }

    #[test]
    fn small_search_is_deterministic() {
        let config = SearchConfig {
            trials: 4,
            horizon: 5,
            ..Default::default()
        };
        let a = search_lp_failure(&config).unwrap();
        let b = search_lp_failure(&config).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.tasks, 12);
        assert!(a.to_csv().starts_with("p,dim,n0_claim,n_violation,margin\n"));
    }
}
