//! Dense exact operators on a weighted ℓ1 space.
//!
//! Column-action convention: `(Mx)ᵢ = Σⱼ Mᵢⱼxⱼ`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{cmp_one, Scalar};
use crate::space::{same_space, Space, Vec1};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Operator {
    space: Arc<Space>,
    // row-major, dim × dim
    entries: Vec<Scalar>,
}

impl Operator {
    pub fn from_rows(space: Arc<Space>, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = space.dim();
        if rows.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: rows.len(),
            });
        }
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(Operator { space, entries })
    }

    pub fn identity(space: Arc<Space>) -> Self {
        let n = space.dim();
        let entries = (0..n * n)
            .map(|k| {
                if k / n == k % n {
                    Scalar::one()
                } else {
                    Scalar::zero()
                }
            })
            .collect();
        Operator { space, entries }
    }

    pub fn zero(space: Arc<Space>) -> Self {
        let n = space.dim();
        Operator {
            space,
            entries: vec![Scalar::zero(); n * n],
        }
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn get(&self, row: usize, col: usize) -> &Scalar {
        &self.entries[row * self.dim() + col]
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        self.entries.chunks(self.dim()).map(<[_]>::to_vec).collect()
    }

    pub(crate) fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn apply(&self, x: &Vec1) -> Result<Vec1> {
        if !same_space(&self.space, x.space()) {
            return Err(Error::SpaceMismatch);
        }
        let n = self.dim();
        let coords = self
            .entries
            .chunks(n)
            .map(|row| row.iter().zip(x.coords()).map(|(m, v)| m * v).sum())
            .collect();
        Vec1::new(self.space.clone(), coords)
    }

    /// Composition `self ∘ rhs`.
    pub fn compose(&self, rhs: &Operator) -> Result<Operator> {
        self.check_space(rhs)?;
        let n = self.dim();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Scalar::zero();
                for k in 0..n {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc += &(a * rhs.get(k, j));
                }
                entries.push(acc);
            }
        }
        Ok(Operator {
            space: self.space.clone(),
            entries,
        })
    }

    pub fn add(&self, rhs: &Operator) -> Result<Operator> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Operator) -> Result<Operator> {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn scale(&self, c: &Scalar) -> Operator {
        Operator {
            space: self.space.clone(),
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }

    /// Entrywise nonnegativity, which on the standard cone is exactly
    /// "maps positive vectors to positive vectors".
    pub fn is_positive(&self) -> bool {
        self.entries.iter().all(Scalar::is_nonnegative)
    }

    /// Weighted column sum `(Σᵢ wᵢ|Mᵢⱼ|) / wⱼ`: the norm of `M(eⱼ/wⱼ)`.
    pub fn column_norm(&self, col: usize) -> Scalar {
        let w = self.space.weights();
        let sum: Scalar = (0..self.dim())
            .map(|i| &w[i] * &self.get(i, col).abs())
            .sum();
        sum / &w[col]
    }

    fn check_space(&self, rhs: &Operator) -> Result<()> {
        if self.dim() != rhs.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: rhs.dim(),
            });
        }
        if !same_space(&self.space, &rhs.space) {
            return Err(Error::SpaceMismatch);
        }
        Ok(())
    }

    fn zip_with(&self, rhs: &Operator, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Operator> {
        self.check_space(rhs)?;
        Ok(Operator {
            space: self.space.clone(),
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }
}

pub fn is_positive_op(m: &Operator) -> bool {
    m.is_positive()
}

/// `T ≤ S` in the operator order: `S − T` is positive.
pub fn dominates(s: &Operator, t: &Operator) -> Result<bool> {
    Ok(first_undominated_entry(s, t)?.is_none())
}

fn first_undominated_entry(s: &Operator, t: &Operator) -> Result<Option<(usize, usize)>> {
    s.check_space(t)?;
    let n = s.dim();
    Ok(s
        .entries
        .iter()
        .zip(&t.entries)
        .position(|(a, b)| a < b)
        .map(|k| (k / n, k % n)))
}

/// A pair of positive contractions with `T ≤ S`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominatedPair {
    s: Operator,
    t: Operator,
}

impl DominatedPair {
    pub fn new(s: Operator, t: Operator) -> Result<Self> {
        if let Some((row, col)) = first_undominated_entry(&s, &t)? {
            return Err(Error::NotDominated { row, col });
        }
        if !t.is_positive() {
            return Err(Error::NotPositive);
        }
        for (which, op) in [("S", &s), ("T", &t)] {
            let norm = crate::norm::operator_norm_1(op);
            if cmp_one(&norm).is_gt() {
                return Err(Error::NotContraction {
                    which,
                    norm: norm.to_string(),
                });
            }
        }
        Ok(DominatedPair { s, t })
    }

    pub fn s(&self) -> &Operator {
        &self.s
    }

    pub fn t(&self) -> &Operator {
        &self.t
    }

    pub fn dim(&self) -> usize {
        self.s.dim()
    }

    pub fn space(&self) -> &Arc<Space> {
        self.s.space()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(rows: &[&[&str]]) -> Operator {
        let space = Space::unweighted(rows.len()).unwrap();
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|x| x.parse().unwrap()).collect())
            .collect();
        Operator::from_rows(space, rows).unwrap()
    }

    #[test]
    fn positivity_examples() {
        assert!(Operator::identity(Space::unweighted(3).unwrap()).is_positive());
        assert!(op(&[&["0", "1/4"], &["0", "0"]]).is_positive());
        assert!(!op(&[&["1", "-1"], &["0", "1"]]).is_positive());
    }

    #[test]
    fn dominance_examples() {
        let s = op(&[&["1/2", "1/3"], &["1/2", "1/3"]]);
        let t = op(&[&["0", "1/4"], &["0", "0"]]);
        assert!(dominates(&s, &t).unwrap());
        assert!(dominates(&s, &s).unwrap());
        let s2 = op(&[&["1/2", "1/5"], &["1/2", "1/3"]]);
        assert!(!dominates(&s2, &t).unwrap());
    }

    #[test]
    fn dominance_rejects_mismatched_dims() {
        let a = op(&[&["1"]]);
        let b = op(&[&["1", "0"], &["0", "1"]]);
        assert!(matches!(
            dominates(&a, &b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn ragged_rows_rejected() {
        let space = Space::unweighted(2).unwrap();
        let rows = vec![vec![Scalar::one(), Scalar::one()], vec![Scalar::one()]];
        assert!(Operator::from_rows(space, rows).is_err());
    }

    #[test]
    fn apply_uses_column_action() {
        // T(x1, x2) = (x2/4, 0)
        let t = op(&[&["0", "1/4"], &["0", "0"]]);
        let x = Vec1::new(t.space().clone(), vec![Scalar::from_int(3), Scalar::from_int(2)]).unwrap();
        let y = t.apply(&x).unwrap();
        assert_eq!(y.coords(), &[Scalar::ratio(1, 2), Scalar::zero()]);
    }

    #[test]
    fn pair_constructor_reports_what_failed() {
        let s = op(&[&["1/2", "1/5"], &["1/2", "1/3"]]);
        let t = op(&[&["0", "1/4"], &["0", "0"]]);
        assert!(matches!(
            DominatedPair::new(s, t.clone()),
            Err(Error::NotDominated { row: 0, col: 1 })
        ));
        let big = op(&[&["1", "1"], &["1", "0"]]);
        assert!(matches!(
            DominatedPair::new(big, t),
            Err(Error::NotContraction { which: "S", .. })
        ));
    }
}
