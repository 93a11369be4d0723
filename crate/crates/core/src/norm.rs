//! Exact operator norms on weighted ℓ1 and the separation sequence
//! `d(n) = ‖Sⁿ − Tⁿ‖`.
//!
//! The extreme points of the weighted ℓ1 unit ball are `±eⱼ/wⱼ`, so
//! `‖M‖ = maxⱼ (Σᵢ wᵢ|Mᵢⱼ|) / wⱼ` exactly. For positive `M` every extreme
//! point that matters is positive, which is why the supremum may be taken over
//! the positive cone alone.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{DominatedPair, Operator};
use crate::scalar::Scalar;
use crate::space::Vec1;

/// The exact L1→L1 operator norm.
pub fn operator_norm_1(m: &Operator) -> Scalar {
    (0..m.dim())
        .map(|j| m.column_norm(j))
        .fold(Scalar::zero(), Scalar::max)
}

/// A positive unit vector realizing the norm of a positive operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormWitness {
    pub column_index: usize,
    pub vector: Vec1,
    pub value: Scalar,
}

/// Witness `eⱼ/wⱼ` for the maximizing column; ties go to the smallest `j`.
pub fn positive_norm_witness(m: &Operator) -> Result<NormWitness> {
    if !m.is_positive() {
        return Err(Error::NotPositive);
    }
    let mut best = 0;
    let mut value = m.column_norm(0);
    for j in 1..m.dim() {
        let c = m.column_norm(j);
        if c > value {
            best = j;
            value = c;
        }
    }
    Ok(NormWitness {
        column_index: best,
        vector: Vec1::unit_basis(m.space().clone(), best),
        value,
    })
}

/// `(‖Sx − Tx‖, ‖Sx‖, ‖Tx‖)` for `T ≤ S` positive and `x ≥ 0`.
///
/// The first component always equals the difference of the other two: on the
/// positive cone the norm is the trace, which is linear.
pub fn lemma32_identity(s: &Operator, t: &Operator, x: &Vec1) -> Result<(Scalar, Scalar, Scalar)> {
    let diff = s.sub(t)?;
    if let Some(k) = diff.entries().iter().position(Scalar::is_negative) {
        let n = s.dim();
        return Err(Error::NotDominated {
            row: k / n,
            col: k % n,
        });
    }
    if !t.is_positive() {
        return Err(Error::NotPositive);
    }
    if let Some(index) = x.coords().iter().position(Scalar::is_negative) {
        return Err(Error::NegativeVector { index });
    }
    let sx = s.apply(x)?;
    let tx = t.apply(x)?;
    let gap = sx.sub(&tx)?.norm1();
    let (sn, tn) = (sx.norm1(), tx.norm1());
    debug_assert_eq!(gap, &sn - &tn);
    Ok((gap, sn, tn))
}

/// `Mⁿ` by repeated multiplication; `M⁰` is the identity.
pub fn power(m: &Operator, n: u32) -> Operator {
    let mut acc = Operator::identity(m.space().clone());
    for _ in 0..n {
        acc = m.compose(&acc).expect("same space");
    }
    acc
}

/// `d(1), …, d(N)` with `d(n) = ‖Sⁿ − Tⁿ‖`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationSequence {
    pub horizon: usize,
    #[serde(rename = "d")]
    pub values: Vec<Scalar>,
}

impl SeparationSequence {
    /// `d(n)`, one-based.
    pub fn get(&self, n: usize) -> Option<&Scalar> {
        n.checked_sub(1).and_then(|i| self.values.get(i))
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] <= w[0])
    }

    pub fn min(&self) -> Option<&Scalar> {
        self.values.iter().min()
    }
}

/// Matrix route: builds `Sⁿ` and `Tⁿ` incrementally and takes the exact norm
/// of their difference at every step. Works for any pair of operators.
pub fn separation_sequence(s: &Operator, t: &Operator, horizon: usize) -> Result<SeparationSequence> {
    if horizon == 0 {
        return Err(Error::Config("horizon must be at least 1".into()));
    }
    if s.dim() != t.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            got: t.dim(),
        });
    }
    let mut sn = s.clone();
    let mut tn = t.clone();
    let mut values = Vec::with_capacity(horizon);
    for n in 1..=horizon {
        if n > 1 {
            sn = s.compose(&sn)?;
            tn = t.compose(&tn)?;
        }
        values.push(operator_norm_1(&sn.sub(&tn)?));
    }
    Ok(SeparationSequence { horizon, values })
}

/// Trace route for dominated pairs.
///
/// Since `0 ≤ Tⁿ ≤ Sⁿ`, the j-th weighted column sum of `Sⁿ − Tⁿ` is
/// `(wᵀSⁿ)ⱼ − (wᵀTⁿ)ⱼ` over `wⱼ`, so only the row vectors `wᵀSⁿ` and `wᵀTⁿ`
/// are propagated: one vector-matrix product per step per operator instead
/// of a matrix product. Arithmetic runs on integers over a common
/// denominator and is reduced once per step. Produces exactly the same
/// values as [`separation_sequence`].
pub fn dominated_separation_sequence(pair: &DominatedPair, horizon: usize) -> Result<SeparationSequence> {
    if horizon == 0 {
        return Err(Error::Config("horizon must be at least 1".into()));
    }
    let n = pair.dim();
    let denom = pair
        .s()
        .entries()
        .iter()
        .chain(pair.t().entries())
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let to_int = |m: &Operator| -> Vec<BigInt> {
        m.entries()
            .iter()
            .map(|x| x.numer() * (&denom / x.denom()))
            .collect()
    };
    let s_int = to_int(pair.s());
    let t_int = to_int(pair.t());

    let weights = pair.space().weights();
    let w_denom = weights.iter().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    let w_int: Vec<BigInt> = weights
        .iter()
        .map(|w| w.numer() * (&w_denom / w.denom()))
        .collect();

    let step = |row: &[BigInt], m: &[BigInt]| -> Vec<BigInt> {
        (0..n)
            .map(|j| {
                let mut acc = BigInt::zero();
                for (i, r) in row.iter().enumerate() {
                    let e = &m[i * n + j];
                    if !e.is_zero() && !r.is_zero() {
                        acc += r * e;
                    }
                }
                acc
            })
            .collect()
    };

    let mut rs = w_int.clone();
    let mut rt = w_int.clone();
    let mut scale = BigInt::one();
    let mut values = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        rs = step(&rs, &s_int);
        rt = step(&rt, &t_int);
        scale *= &denom;
        let mut best = 0;
        let mut best_gap = &rs[0] - &rt[0];
        for j in 1..n {
            let gap = &rs[j] - &rt[j];
            // gap / w_j > best_gap / w_best
            if &gap * &w_int[best] > &best_gap * &w_int[j] {
                best = j;
                best_gap = gap;
            }
        }
        values.push(Scalar::from_big(best_gap, &w_int[best] * &scale));
    }
    Ok(SeparationSequence { horizon, values })
}
