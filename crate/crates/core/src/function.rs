//! Complex-valued functions on a finite group.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::group::{same_group, FiniteGroup, MeasureTriple, QuotientGroup};

/// A dense function `G -> C`, indexed by element.
#[derive(Clone, Debug)]
pub struct GroupFunction {
    group: Arc<FiniteGroup>,
    values: Vec<Complex64>,
}

impl GroupFunction {
    pub fn new(group: Arc<FiniteGroup>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::DimensionMismatch { expected: group.order(), found: values.len() });
        }
        Ok(GroupFunction { group, values })
    }

    pub fn zeros(group: Arc<FiniteGroup>) -> Self {
        let values = vec![Complex64::new(0.0, 0.0); group.order()];
        GroupFunction { group, values }
    }

    /// Point mass at `x`.
    pub fn delta(group: Arc<FiniteGroup>, x: usize) -> Self {
        let mut f = Self::zeros(group);
        f.values[x] = Complex64::new(1.0, 0.0);
        f
    }

    /// Independent standard normal real and imaginary parts at every element.
    pub fn random<R: Rng + ?Sized>(group: Arc<FiniteGroup>, rng: &mut R) -> Self {
        let values = random_values(group.order(), rng);
        GroupFunction { group, values }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    #[inline]
    pub fn value(&self, x: usize) -> Complex64 {
        self.values[x]
    }

    pub fn scale(&self, alpha: Complex64) -> Self {
        let values = self.values.iter().map(|v| v * alpha).collect();
        GroupFunction { group: self.group.clone(), values }
    }

    /// `alpha * self + beta * other`.
    pub fn combine(&self, alpha: Complex64, other: &Self, beta: Complex64) -> Result<Self> {
        if !same_group(&self.group, &other.group) {
            return Err(Error::GroupMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| alpha * a + beta * b).collect();
        Ok(GroupFunction { group: self.group.clone(), values })
    }

    /// Sup-norm distance; infinite when the groups differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if !same_group(&self.group, &other.group) {
            return f64::INFINITY;
        }
        max_abs_diff(&self.values, &other.values)
    }

    /// Unweighted `sum |f(x)|`.
    pub fn abs_sum(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).sum()
    }
}

pub(crate) fn random_values<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex64> {
    (0..n)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
        .collect()
}

pub(crate) fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub(crate) fn weighted_lp(values: impl Iterator<Item = f64>, p: f64, weight: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    let sum: f64 = values.map(|a| weight * a.powf(p)).sum();
    Ok(sum.powf(1.0 / p))
}

/// `(sum_x weight * |f(x)|^p)^(1/p)` for a uniform Haar weight.
pub fn lp_norm(f: &GroupFunction, p: f64, weight: f64) -> Result<f64> {
    weighted_lp(f.values.iter().map(|v| v.norm()), p, weight)
}

/// `T_N f`, the average of `f` over each coset: `sum_{s in N} w_n f(x s)`.
pub fn t_n(f: &GroupFunction, quotient: &QuotientGroup, measure: &MeasureTriple) -> Result<GroupFunction> {
    if !same_group(f.group(), quotient.parent()) {
        return Err(Error::GroupMismatch);
    }
    let n = quotient.normal().order();
    let values = (0..quotient.order())
        .map(|c| {
            let sum: Complex64 = (0..n).map(|pos| f.value(quotient.element(c, pos))).sum();
            sum * measure.w_n
        })
        .collect();
    GroupFunction::new(quotient.table().clone(), values)
}

/// `|integral over G/N of T_N f  -  integral over G of f|`.
pub fn weil_residual(f: &GroupFunction, quotient: &QuotientGroup, measure: &MeasureTriple) -> Result<f64> {
    let averaged = t_n(f, quotient, measure)?;
    let lhs: Complex64 = averaged.values().iter().map(|v| v * measure.w_q).sum();
    let rhs: Complex64 = f.values().iter().map(|v| v * measure.w_g).sum();
    Ok((lhs - rhs).norm())
}
