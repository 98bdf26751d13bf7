//! Group convolution, the convolution action of functions on covariant
//! functions, and convolution on the quotient `G/N`.
//!
//! These are the generic kernels: they use nothing but the Cayley table and
//! the coset decomposition, so they work for any finite group and serve as
//! the reference for the structured fast paths in [`crate::semidirect`].

use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::character::Character;
use crate::covariant::{cov_norm, covariance_defect, t_xi, CovariantFunction};
use crate::error::{Error, Result};
use crate::function::{lp_norm, GroupFunction};
use crate::group::{same_group, MeasureTriple, QuotientGroup};

/// Below this many inner-loop terms a kernel runs on the calling thread.
pub(crate) const PARALLEL_WORK: usize = 1 << 16;

/// Evaluates `point` at every output index, in parallel for large jobs.
/// Each output is a sequential sum, so results do not depend on scheduling.
pub(crate) fn evaluate<F>(outputs: usize, terms_each: usize, point: F) -> Vec<Complex64>
where
    F: Fn(usize) -> Complex64 + Sync + Send,
{
    if outputs.saturating_mul(terms_each) < PARALLEL_WORK {
        (0..outputs).map(point).collect()
    } else {
        (0..outputs).into_par_iter().map(point).collect()
    }
}

/// `(f * g)(x) = sum_y w_g f(y) g(y^-1 x)`.
pub fn convolve(f: &GroupFunction, g: &GroupFunction, measure: &MeasureTriple) -> Result<GroupFunction> {
    convolve_weighted(f, g, measure.w_g)
}

fn convolve_weighted(f: &GroupFunction, g: &GroupFunction, weight: f64) -> Result<GroupFunction> {
    if !same_group(f.group(), g.group()) {
        return Err(Error::GroupMismatch);
    }
    let grp = f.group();
    let n = grp.order();
    let values = evaluate(n, n, |x| {
        let sum: Complex64 = (0..n).map(|y| f.value(y) * g.value(grp.mul(grp.inv(y), x))).sum();
        sum * weight
    });
    GroupFunction::new(grp.clone(), values)
}

/// `(f * psi)(x) = sum_y w_g f(y) psi(y^-1 x)`, evaluated at each coset
/// representative.
pub fn module_action(f: &GroupFunction, psi: &CovariantFunction, measure: &MeasureTriple) -> Result<CovariantFunction> {
    if !same_group(f.group(), psi.group()) {
        return Err(Error::GroupMismatch);
    }
    let grp = f.group();
    let q = psi.quotient();
    let n = grp.order();
    let chi = psi.character().values();
    let section = psi.section();
    let out = evaluate(q.order(), n, |c| {
        let x = q.reps()[c];
        let sum: Complex64 = (0..n)
            .map(|y| {
                let z = grp.mul(grp.inv(y), x);
                f.value(y) * section[q.proj(z)] * chi[q.offset(z)]
            })
            .sum();
        sum * measure.w_g
    });
    CovariantFunction::from_section(out, psi.character().clone(), q.clone())
}

/// `(Psi * Phi)(xN) = sum_{yN} w_q Psi(yN) Phi(y^-1 x N)` on `G/N`.
pub fn quotient_convolve(psi: &GroupFunction, phi: &GroupFunction, measure: &MeasureTriple) -> Result<GroupFunction> {
    convolve_weighted(psi, phi, measure.w_q)
}

/// Largest residual seen for one law across all trials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LawResidual {
    pub law: String,
    pub max_residual: f64,
}

/// Outcome of [`verify_module_axioms`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModuleReport {
    pub seed: u64,
    pub trials: usize,
    pub tolerance: f64,
    pub laws: Vec<LawResidual>,
    pub passed: bool,
}

impl ModuleReport {
    pub fn residual(&self, law: &str) -> Option<f64> {
        self.laws.iter().find(|l| l.law == law).map(|l| l.max_residual)
    }
}

/// Law names used in [`ModuleReport`].
pub mod laws {
    pub const ASSOCIATIVITY: &str = "associativity";
    pub const LINEAR_IN_FUNCTION: &str = "linear_in_function";
    pub const LINEAR_IN_COVARIANT: &str = "linear_in_covariant";
    pub const NORM_BOUND_P1: &str = "norm_bound_p1";
    pub const NORM_BOUND_P2: &str = "norm_bound_p2";
    pub const NORM_BOUND_P3: &str = "norm_bound_p3";
    pub const OUTPUT_COVARIANCE: &str = "output_covariance";
    pub const FULL_GROUP_AGREEMENT: &str = "full_group_agreement";
    pub const TXI_HOMOMORPHISM: &str = "txi_homomorphism";
    pub const TXI_LINEARITY: &str = "txi_linearity";
}

/// Checks the left-module laws of the convolution action on random inputs.
///
/// Per trial, with random `f`, `g` and covariant `psi`, `phi`:
/// associativity `(f*g)*psi = f*(g*psi)`; linearity in each argument; the
/// norm bound `||f*psi||_(p) <= ||f||_1 ||psi||_(p)` for `p = 1, 2, 3`
/// (residual is the excess, zero when the bound holds); covariance of the
/// full-group convolution `f * psi`; agreement of that full convolution with
/// the section-based action; and `T_xi(f*g) = f*T_xi(g)` plus linearity of
/// `T_xi`. The homomorphism residual is relative to `||f||_1 ||g||_1`; the
/// others are absolute.
pub fn verify_module_axioms(
    quotient: &Arc<QuotientGroup>,
    character: &Character,
    measure: &MeasureTriple,
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<ModuleReport> {
    let g = quotient.parent().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names = [
        laws::ASSOCIATIVITY,
        laws::LINEAR_IN_FUNCTION,
        laws::LINEAR_IN_COVARIANT,
        laws::NORM_BOUND_P1,
        laws::NORM_BOUND_P2,
        laws::NORM_BOUND_P3,
        laws::OUTPUT_COVARIANCE,
        laws::FULL_GROUP_AGREEMENT,
        laws::TXI_HOMOMORPHISM,
        laws::TXI_LINEARITY,
    ];
    let mut worst = vec![0.0f64; names.len()];
    if trials == 0 {
        return Ok(ModuleReport { seed, trials, tolerance: tol, laws: Vec::new(), passed: true });
    }

    let alpha = Complex64::new(0.75, -1.25);
    let beta = Complex64::new(-0.5, 2.0);
    for _ in 0..trials {
        let f = GroupFunction::random(g.clone(), &mut rng);
        let h = GroupFunction::random(g.clone(), &mut rng);
        let psi = CovariantFunction::random(character.clone(), quotient.clone(), &mut rng)?;
        let phi = CovariantFunction::random(character.clone(), quotient.clone(), &mut rng)?;

        let f_psi = module_action(&f, &psi, measure)?;

        let lhs = module_action(&convolve(&f, &h, measure)?, &psi, measure)?;
        let rhs = module_action(&f, &module_action(&h, &psi, measure)?, measure)?;
        worst[0] = worst[0].max(lhs.max_abs_diff(&rhs));

        let lhs = module_action(&f.combine(alpha, &h, beta)?, &psi, measure)?;
        let rhs = f_psi.combine(alpha, &module_action(&h, &psi, measure)?, beta)?;
        worst[1] = worst[1].max(lhs.max_abs_diff(&rhs));

        let lhs = module_action(&f, &psi.combine(alpha, &phi, beta)?, measure)?;
        let rhs = f_psi.combine(alpha, &module_action(&f, &phi, measure)?, beta)?;
        worst[2] = worst[2].max(lhs.max_abs_diff(&rhs));

        let f_l1 = lp_norm(&f, 1.0, measure.w_g)?;
        for (slot, p) in [(3, 1.0), (4, 2.0), (5, 3.0)] {
            let excess = cov_norm(&f_psi, p, measure)? - f_l1 * cov_norm(&psi, p, measure)?;
            worst[slot] = worst[slot].max(excess.max(0.0));
        }

        let full = convolve(&f, &psi.to_full(), measure)?;
        worst[6] = worst[6].max(covariance_defect(&full, character)?);
        worst[7] = worst[7].max(full.max_abs_diff(&f_psi.to_full()));

        let scale = f_l1 * lp_norm(&h, 1.0, measure.w_g)?;
        let lhs = t_xi(&convolve(&f, &h, measure)?, character, quotient, measure)?;
        let rhs = module_action(&f, &t_xi(&h, character, quotient, measure)?, measure)?;
        worst[8] = worst[8].max(lhs.max_abs_diff(&rhs) / scale.max(f64::MIN_POSITIVE));

        let lhs = t_xi(&f.combine(alpha, &h, beta)?, character, quotient, measure)?;
        let rhs =
            t_xi(&f, character, quotient, measure)?.combine(alpha, &t_xi(&h, character, quotient, measure)?, beta)?;
        worst[9] = worst[9].max(lhs.max_abs_diff(&rhs));
    }

    let laws: Vec<LawResidual> =
        names.iter().zip(&worst).map(|(name, &r)| LawResidual { law: (*name).to_string(), max_residual: r }).collect();
    let passed = laws.iter().all(|l| l.max_residual <= tol);
    Ok(ModuleReport { seed, trials, tolerance: tol, laws, passed })
}
