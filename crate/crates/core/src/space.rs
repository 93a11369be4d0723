//! Weighted ℓ1 spaces and their vectors.
//!
//! A [`Space`] of dimension `n` carries strictly positive weights `w`. They
//! define the trace `τ(x) = Σ wᵢxᵢ` and the norm `‖x‖ = Σ wᵢ|xᵢ|`, so on the
//! positive cone the norm is additive and coincides with the trace.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Space {
    weights: Vec<Scalar>,
}

impl Space {
    pub fn new(weights: Vec<Scalar>) -> Result<Arc<Self>> {
        if weights.is_empty() {
            return Err(Error::InvalidSpace("dimension must be at least 1".into()));
        }
        if let Some(i) = weights.iter().position(|w| !w.is_positive()) {
            return Err(Error::InvalidSpace(format!(
                "weight {i} is {} but must be > 0",
                weights[i]
            )));
        }
        Ok(Arc::new(Space { weights }))
    }

    /// Unit weights: the counting trace.
    pub fn unweighted(dim: usize) -> Result<Arc<Self>> {
        Space::new(vec![Scalar::one(); dim])
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Scalar] {
        &self.weights
    }

    pub fn is_unweighted(&self) -> bool {
        self.weights.iter().all(|w| *w == Scalar::one())
    }
}

pub(crate) fn same_space(a: &Arc<Space>, b: &Arc<Space>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vec1 {
    space: Arc<Space>,
    coords: Vec<Scalar>,
}

impl Vec1 {
    pub fn new(space: Arc<Space>, coords: Vec<Scalar>) -> Result<Self> {
        if coords.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                got: coords.len(),
            });
        }
        Ok(Vec1 { space, coords })
    }

    pub fn zeros(space: Arc<Space>) -> Self {
        let coords = vec![Scalar::zero(); space.dim()];
        Vec1 { space, coords }
    }

    /// The j-th standard basis vector scaled by `1/wⱼ`, a positive unit vector.
    pub fn unit_basis(space: Arc<Space>, j: usize) -> Self {
        let mut v = Vec1::zeros(space);
        v.coords[j] = v.space.weights[j].recip();
        v
    }

    pub fn space(&self) -> &Arc<Space> {
        &self.space
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// `τ(x) = Σ wᵢxᵢ`.
    pub fn trace(&self) -> Scalar {
        self.space
            .weights
            .iter()
            .zip(&self.coords)
            .map(|(w, x)| w * x)
            .sum()
    }

    /// `‖x‖ = Σ wᵢ|xᵢ|`.
    pub fn norm1(&self) -> Scalar {
        self.space
            .weights
            .iter()
            .zip(&self.coords)
            .map(|(w, x)| w * &x.abs())
            .sum()
    }

    /// Splits `x = x⁺ − x⁻` into disjointly supported positive parts.
    pub fn jordan_decompose(&self) -> (Vec1, Vec1) {
        let (pos, neg) = self
            .coords
            .iter()
            .map(|x| {
                if x.is_negative() {
                    (Scalar::zero(), -x)
                } else {
                    (x.clone(), Scalar::zero())
                }
            })
            .unzip();
        (
            Vec1 {
                space: self.space.clone(),
                coords: pos,
            },
            Vec1 {
                space: self.space.clone(),
                coords: neg,
            },
        )
    }

    pub fn is_positive(&self) -> bool {
        self.coords.iter().all(Scalar::is_nonnegative)
    }

    pub fn scale(&self, c: &Scalar) -> Vec1 {
        Vec1 {
            space: self.space.clone(),
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &Vec1) -> Result<Vec1> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Vec1) -> Result<Vec1> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Vec1, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Vec1> {
        if !same_space(&self.space, &other.space) {
            return Err(Error::SpaceMismatch);
        }
        Ok(Vec1 {
            space: self.space.clone(),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }
}

/// Free-function form of [`Vec1::trace`].
pub fn trace(x: &Vec1) -> Scalar {
    x.trace()
}

/// Free-function form of [`Vec1::norm1`].
pub fn norm1(x: &Vec1) -> Scalar {
    x.norm1()
}

pub fn jordan_decompose(x: &Vec1) -> (Vec1, Vec1) {
    x.jordan_decompose()
}

pub fn is_positive_vec(x: &Vec1) -> bool {
    x.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &str) -> Scalar {
        v.parse().unwrap()
    }

    fn vec_on(weights: &[&str], coords: &[&str]) -> Vec1 {
        let space = Space::new(weights.iter().map(|w| s(w)).collect()).unwrap();
        Vec1::new(space, coords.iter().map(|c| s(c)).collect()).unwrap()
    }

    #[test]
    fn trace_examples() {
        assert_eq!(vec_on(&["1", "1"], &["1", "2"]).trace(), s("3"));
        assert_eq!(vec_on(&["5/2", "7"], &["0", "0"]).trace(), s("0"));
        assert_eq!(vec_on(&["2", "3"], &["1", "-1"]).trace(), s("-1"));
    }

    #[test]
    fn norm1_examples() {
        assert_eq!(vec_on(&["1", "1"], &["1", "-2"]).norm1(), s("3"));
        assert_eq!(vec_on(&["1", "1"], &["1/2", "1/3"]).norm1(), s("5/6"));
        assert_eq!(vec_on(&["2", "3"], &["1", "-1"]).norm1(), s("5"));
    }

    #[test]
    fn jordan_examples() {
        let check = |x: &[&str], p: &[&str], n: &[&str]| {
            let v = vec_on(&["1", "1"], x);
            let (pos, neg) = v.jordan_decompose();
            assert_eq!(pos, vec_on(&["1", "1"], p));
            assert_eq!(neg, vec_on(&["1", "1"], n));
        };
        check(&["2", "-3"], &["2", "0"], &["0", "3"]);
        check(&["0", "0"], &["0", "0"], &["0", "0"]);
        check(&["-1", "5"], &["0", "5"], &["1", "0"]);
    }

    #[test]
    fn space_rejects_bad_weights() {
        assert!(Space::new(vec![]).is_err());
        assert!(Space::new(vec![s("1"), s("0")]).is_err());
        assert!(Space::new(vec![s("-1/2")]).is_err());
    }

    #[test]
    fn vector_length_must_match() {
        let space = Space::unweighted(3).unwrap();
        assert!(matches!(
            Vec1::new(space, vec![Scalar::one()]),
            Err(Error::DimensionMismatch { expected: 3, got: 1 })
        ));
    }

    #[test]
    fn unit_basis_has_norm_one() {
        let space = Space::new(vec![s("2"), s("1/3")]).unwrap();
        for j in 0..2 {
            let e = Vec1::unit_basis(space.clone(), j);
            assert!(e.is_positive());
            assert_eq!(e.norm1(), Scalar::one());
        }
    }
}
