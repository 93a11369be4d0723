//! The two-dimensional family
//!
//! ```text
//! S(x₁, x₂) = (A x₁ + B x₂, C x₁ + D x₂)
//! T(x₁, x₂) = (λ x₂, 0)
//! ```
//!
//! on unweighted ℓ1(2). Under `B + D ≤ A + C` the norms have closed forms
//! `‖S‖ = ‖S − T‖ = A + C` and `‖S² − T²‖ = A² + AC + BC + DC` (since
//! `T² = 0`). With `A = C = 1/2`, `B = D = 1/3`, `λ = 1/4` this gives a pair
//! with `‖S − T‖ = 1` but `‖S² − T²‖ = 5/6`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, ExampleConstraint, Result};
use crate::norm::{operator_norm_1, power, separation_sequence, SeparationSequence};
use crate::operator::{DominatedPair, Operator};
use crate::scalar::{cmp_one, Scalar};
use crate::space::Space;
use crate::verifier::first_separation_index;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleParams {
    #[serde(rename = "A")]
    pub a: Scalar,
    #[serde(rename = "B")]
    pub b: Scalar,
    #[serde(rename = "C")]
    pub c: Scalar,
    #[serde(rename = "D")]
    pub d: Scalar,
    pub lambda: Scalar,
}

impl ExampleParams {
    pub fn new(a: Scalar, b: Scalar, c: Scalar, d: Scalar, lambda: Scalar) -> Self {
        ExampleParams { a, b, c, d, lambda }
    }

    /// `A = C = 1/2`, `B = D = 1/3`, `λ = 1/4`.
    pub fn paper_instance() -> Self {
        ExampleParams::new(
            Scalar::ratio(1, 2),
            Scalar::ratio(1, 3),
            Scalar::ratio(1, 2),
            Scalar::ratio(1, 3),
            Scalar::ratio(1, 4),
        )
    }

    /// Checks positivity, dominance, column order and contraction, in
    /// that order, reporting the first violated one.
    pub fn validate(&self) -> Result<()> {
        let all = [&self.a, &self.b, &self.c, &self.d, &self.lambda];
        if all.iter().any(|x| x.is_negative()) {
            return Err(Error::Example(ExampleConstraint::Positivity));
        }
        if self.lambda > self.b {
            return Err(Error::Example(ExampleConstraint::Dominance));
        }
        let (col0, col1) = (&self.a + &self.c, &self.b + &self.d);
        if col1 > col0 {
            return Err(Error::Example(ExampleConstraint::ColumnOrder));
        }
        if cmp_one(&col0).is_gt() {
            return Err(Error::Example(ExampleConstraint::Contraction));
        }
        Ok(())
    }

    /// `C > 0` and `B + D < 1`: necessary for `‖S² − T²‖ < 1` when
    /// `A + C = 1`. Diagnostic only.
    pub fn second_power_separates(&self) -> bool {
        self.c.is_positive() && cmp_one(&(&self.b + &self.d)).is_lt()
    }
}

pub fn build_example(p: &ExampleParams) -> Result<DominatedPair> {
    p.validate()?;
    let space = Space::unweighted(2)?;
    let z = Scalar::zero;
    let s = Operator::from_rows(
        space.clone(),
        vec![vec![p.a.clone(), p.b.clone()], vec![p.c.clone(), p.d.clone()]],
    )?;
    let t = Operator::from_rows(space, vec![vec![z(), p.lambda.clone()], vec![z(), z()]])?;
    DominatedPair::new(s, t)
}

/// `(‖S‖, ‖S − T‖, ‖S² − T²‖)`, one triple of norms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormTriple {
    pub s: Scalar,
    pub s_minus_t: Scalar,
    pub s2_minus_t2: Scalar,
}

/// Closed forms `(A + C, A + C, A² + AC + BC + DC)`.
pub fn closed_form_norms(p: &ExampleParams) -> Result<NormTriple> {
    p.validate()?;
    let (a, b, c, d) = (&p.a, &p.b, &p.c, &p.d);
    Ok(NormTriple {
        s: a + c,
        s_minus_t: a + c,
        s2_minus_t2: a * a + a * c + b * c + d * c,
    })
}

pub fn engine_norms(pair: &DominatedPair) -> Result<NormTriple> {
    let (s, t) = (pair.s(), pair.t());
    Ok(NormTriple {
        s: operator_norm_1(s),
        s_minus_t: operator_norm_1(&s.sub(t)?),
        s2_minus_t2: operator_norm_1(&power(s, 2).sub(&power(t, 2))?),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub closed_form: NormTriple,
    pub engine: NormTriple,
    /// Names of the norms that disagree; empty on agreement.
    pub mismatches: Vec<String>,
}

impl CrossCheck {
    pub fn agrees(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares the closed forms with the engine's exact norms.
pub fn cross_validate(p: &ExampleParams) -> Result<CrossCheck> {
    let closed_form = closed_form_norms(p)?;
    let engine = engine_norms(&build_example(p)?)?;
    let mut mismatches = Vec::new();
    for (name, lhs, rhs) in [
        ("|S|", &closed_form.s, &engine.s),
        ("|S-T|", &closed_form.s_minus_t, &engine.s_minus_t),
        ("|S^2-T^2|", &closed_form.s2_minus_t2, &engine.s2_minus_t2),
    ] {
        if lhs != rhs {
            mismatches.push(format!("{name}: closed form {lhs} vs engine {rhs}"));
        }
    }
    Ok(CrossCheck {
        closed_form,
        engine,
        mismatches,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleRecord {
    pub params: ExampleParams,
    pub formulas: [String; 3],
    pub cross_check: CrossCheck,
    pub cross_validated: bool,
    pub separation: SeparationSequence,
    pub n0: Option<usize>,
    pub corollary_applicable: bool,
    pub second_power_separates: bool,
}

pub fn example_record(p: &ExampleParams, horizon: usize) -> Result<ExampleRecord> {
    let cross_check = cross_validate(p)?;
    let pair = build_example(p)?;
    let separation = separation_sequence(pair.s(), pair.t(), horizon)?;
    let n0 = first_separation_index(&separation);
    Ok(ExampleRecord {
        params: p.clone(),
        formulas: [
            "|S| = A + C".into(),
            "|S - T| = A + C".into(),
            "|S^2 - T^2| = A^2 + AC + BC + DC".into(),
        ],
        cross_validated: cross_check.agrees(),
        cross_check,
        separation,
        n0,
        corollary_applicable: n0 == Some(1),
        second_power_separates: p.second_power_separates(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub params: ExampleParams,
    pub n0: Option<usize>,
}

/// Every valid parameter choice with each of `A, B, C, D, λ` on the grid
/// `{0, 1/steps, …, 1}`.
pub fn sweep(steps: u32, horizon: usize) -> Result<Vec<SweepRow>> {
    if steps == 0 {
        return Err(Error::Config("sweep steps must be at least 1".into()));
    }
    let grid: Vec<Scalar> = (0..=steps)
        .map(|k| Scalar::ratio(k.into(), steps.into()))
        .collect();
    let mut rows = Vec::new();
    for a in &grid {
        for b in &grid {
            for c in &grid {
                for d in &grid {
                    for lambda in &grid {
                        let p = ExampleParams::new(a.clone(), b.clone(), c.clone(), d.clone(), lambda.clone());
                        if p.validate().is_err() {
                            continue;
                        }
                        let pair = build_example(&p)?;
                        let seq = separation_sequence(pair.s(), pair.t(), horizon)?;
                        rows.push(SweepRow {
                            n0: first_separation_index(&seq),
                            params: p,
                        });
                    }
                }
            }
        }
    }
    Ok(rows)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("A,B,C,D,lambda,n0\n");
    for r in rows {
        let p = &r.params;
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            p.a,
            p.b,
            p.c,
            p.d,
            p.lambda,
            r.n0.map(|n| n.to_string()).unwrap_or_default()
        ));
    }
    out
}

fn grid_fraction(rng: &mut impl Rng, grid: u32) -> Scalar {
    let den = rng.gen_range(1..=grid);
    Scalar::ratio(rng.gen_range(0..=den).into(), den.into())
}

/// A random valid parameter set. Half of the draws sit on the boundary
/// `A + C = 1`.
pub fn sample_params(rng: &mut impl Rng, grid: u32) -> ExampleParams {
    let grid = grid.max(1);
    let total = if rng.gen_bool(0.5) {
        Scalar::one()
    } else {
        grid_fraction(rng, grid)
    };
    let a = &total * &grid_fraction(rng, grid);
    let c = &total - &a;
    let bd = &total * &grid_fraction(rng, grid);
    let b = &bd * &grid_fraction(rng, grid);
    let d = &bd - &b;
    let lambda = &b * &grid_fraction(rng, grid);
    ExampleParams::new(a, b, c, d, lambda)
}
