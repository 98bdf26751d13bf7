//! Functions covariant for a character of a normal subgroup.
//!
//! `psi` is covariant for `xi` on `N` when `psi(x s) = xi(s) psi(x)` for all
//! `x` in `G` and `s` in `N`. Such a function is determined by its values on
//! one representative per coset, so [`CovariantFunction`] stores only that
//! section (`|G/N|` numbers) and extends on demand. Covariance therefore holds
//! by construction.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use crate::character::Character;
use crate::error::{Error, Result};
use crate::function::{max_abs_diff, random_values, weighted_lp, GroupFunction};
use crate::group::{same_group, FiniteGroup, MeasureTriple, QuotientGroup};

/// Default tolerance for membership tests.
pub const COVARIANCE_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct CovariantFunction {
    quotient: Arc<QuotientGroup>,
    character: Character,
    section: Vec<Complex64>,
}

fn check_character(character: &Character, quotient: &QuotientGroup) -> Result<()> {
    if character.domain() != quotient.normal() {
        return Err(Error::Shape("character domain differs from the quotient's normal subgroup".into()));
    }
    Ok(())
}

impl CovariantFunction {
    /// Extends `section` (one value per coset, in coset order) by
    /// `psi(rep * s) = xi(s) * section[rep]`.
    pub fn from_section(section: Vec<Complex64>, character: Character, quotient: Arc<QuotientGroup>) -> Result<Self> {
        check_character(&character, &quotient)?;
        if section.len() != quotient.order() {
            return Err(Error::DimensionMismatch { expected: quotient.order(), found: section.len() });
        }
        Ok(CovariantFunction { quotient, character, section })
    }

    pub fn zero(character: Character, quotient: Arc<QuotientGroup>) -> Result<Self> {
        let section = vec![Complex64::new(0.0, 0.0); quotient.order()];
        Self::from_section(section, character, quotient)
    }

    /// Random complex Gaussian section.
    pub fn random<R: Rng + ?Sized>(character: Character, quotient: Arc<QuotientGroup>, rng: &mut R) -> Result<Self> {
        let section = random_values(quotient.order(), rng);
        Self::from_section(section, character, quotient)
    }

    /// Reads off the section of a function assumed to be covariant.
    pub fn restrict(full: &GroupFunction, character: Character, quotient: Arc<QuotientGroup>) -> Result<Self> {
        if !same_group(full.group(), quotient.parent()) {
            return Err(Error::GroupMismatch);
        }
        let section = quotient.reps().iter().map(|&r| full.value(r)).collect();
        Self::from_section(section, character, quotient)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.quotient.parent()
    }

    pub fn quotient(&self) -> &Arc<QuotientGroup> {
        &self.quotient
    }

    pub fn character(&self) -> &Character {
        &self.character
    }

    /// Values at the coset representatives, in coset order.
    pub fn section(&self) -> &[Complex64] {
        &self.section
    }

    #[inline]
    pub fn value_at(&self, x: usize) -> Complex64 {
        self.section[self.quotient.proj(x)] * self.character.values()[self.quotient.offset(x)]
    }

    /// All values on `G`.
    pub fn to_full(&self) -> GroupFunction {
        let values = (0..self.group().order()).map(|x| self.value_at(x)).collect();
        GroupFunction::new(self.group().clone(), values).expect("length matches group order")
    }

    /// `alpha * self + beta * other`; both must share quotient and character.
    pub fn combine(&self, alpha: Complex64, other: &Self, beta: Complex64) -> Result<Self> {
        self.check_compatible(other)?;
        let section = self.section.iter().zip(&other.section).map(|(a, b)| alpha * a + beta * b).collect();
        Ok(CovariantFunction { section, ..self.clone() })
    }

    pub fn scale(&self, alpha: Complex64) -> Self {
        let section = self.section.iter().map(|v| v * alpha).collect();
        CovariantFunction { section, ..self.clone() }
    }

    /// Sup-norm distance between sections (which equals the distance on `G`).
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.check_compatible(other).is_err() {
            return f64::INFINITY;
        }
        max_abs_diff(&self.section, &other.section)
    }

    pub(crate) fn check_compatible(&self, other: &Self) -> Result<()> {
        if !same_group(self.group(), other.group()) {
            return Err(Error::GroupMismatch);
        }
        if self.quotient.normal() != other.quotient.normal() || self.character != other.character {
            return Err(Error::Shape("covariant for different characters".into()));
        }
        Ok(())
    }
}

/// `T_xi f (x) = sum_{s in N} w_n f(x s) conj(xi(s))`.
pub fn t_xi(
    f: &GroupFunction,
    character: &Character,
    quotient: &Arc<QuotientGroup>,
    measure: &MeasureTriple,
) -> Result<CovariantFunction> {
    if !same_group(f.group(), quotient.parent()) {
        return Err(Error::GroupMismatch);
    }
    check_character(character, quotient)?;
    let chi = character.values();
    let section = (0..quotient.order())
        .map(|c| {
            let sum: Complex64 =
                chi.iter().enumerate().map(|(pos, v)| f.value(quotient.element(c, pos)) * v.conj()).sum();
            sum * measure.w_n
        })
        .collect();
    CovariantFunction::from_section(section, character.clone(), quotient.clone())
}

/// `max |psi(x s) - xi(s) psi(x)|` over `x` in `G`, `s` in `N`.
pub fn covariance_defect(psi: &GroupFunction, character: &Character) -> Result<f64> {
    let normal = character.domain();
    if !same_group(psi.group(), normal.parent()) {
        return Err(Error::GroupMismatch);
    }
    let g = psi.group();
    let chi = character.values();
    let mut worst = 0.0f64;
    for x in 0..g.order() {
        for (pos, &s) in normal.members().iter().enumerate() {
            worst = worst.max((psi.value(g.mul(x, s)) - chi[pos] * psi.value(x)).norm());
        }
    }
    Ok(worst)
}

/// Membership in the covariant space up to `tol`.
pub fn is_covariant(psi: &GroupFunction, character: &Character, tol: f64) -> Result<bool> {
    Ok(covariance_defect(psi, character)? <= tol)
}

/// `||psi||_(p) = (sum over cosets of w_q |psi(rep)|^p)^(1/p)`.
pub fn cov_norm(psi: &CovariantFunction, p: f64, measure: &MeasureTriple) -> Result<f64> {
    weighted_lp(psi.section.iter().map(|v| v.norm()), p, measure.w_q)
}

/// For the trivial character, the function on `G/N` with `xN -> psi(x)`.
pub fn project_trivial(psi: &CovariantFunction) -> Result<GroupFunction> {
    if !psi.character.is_trivial() {
        return Err(Error::NontrivialCharacter);
    }
    GroupFunction::new(psi.quotient.table().clone(), psi.section.clone())
}

/// Inverse of [`project_trivial`]: lifts a function on `G/N` to a
/// coset-constant function.
pub fn lift_trivial(phi: &GroupFunction, quotient: &Arc<QuotientGroup>) -> Result<CovariantFunction> {
    if !same_group(phi.group(), quotient.table()) {
        return Err(Error::GroupMismatch);
    }
    let trivial = Character::trivial(quotient.normal().clone());
    CovariantFunction::from_section(phi.values().to_vec(), trivial, quotient.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character::{enumerate_characters, Phase};
    use crate::function::{lp_norm, t_n};
    use crate::group::Subgroup;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    struct Z4 {
        g: Arc<FiniteGroup>,
        q: Arc<QuotientGroup>,
        trivial: Character,
        sign: Character,
    }

    fn z4() -> Z4 {
        let g = Arc::new(FiniteGroup::cyclic(4).unwrap());
        let n = Subgroup::new(g.clone(), [0, 2]).unwrap();
        let q = Arc::new(QuotientGroup::new(&n).unwrap());
        let trivial = Character::trivial(n.clone());
        let sign = Character::new(n, vec![Phase::ZERO, Phase::new(1, 2)]).unwrap();
        Z4 { g, q, trivial, sign }
    }

    fn assert_close(a: &[Complex64], b: &[Complex64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).norm() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn t_xi_with_trivial_character_is_averaging() {
        let z = z4();
        let psi = t_xi(&GroupFunction::delta(z.g.clone(), 0), &z.trivial, &z.q, &MeasureTriple::counting()).unwrap();
        assert_close(psi.to_full().values(), &[c(1., 0.), c(0., 0.), c(1., 0.), c(0., 0.)], 0.0);
    }

    #[test]
    fn t_xi_with_sign_character() {
        let z = z4();
        let psi = t_xi(&GroupFunction::delta(z.g.clone(), 0), &z.sign, &z.q, &MeasureTriple::counting()).unwrap();
        assert_close(psi.to_full().values(), &[c(1., 0.), c(0., 0.), c(-1., 0.), c(0., 0.)], 1e-15);
    }

    #[test]
    fn t_xi_scales_covariant_inputs_by_n() {
        let z = z4();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for chi in [&z.trivial, &z.sign] {
            let psi = CovariantFunction::random(chi.clone(), z.q.clone(), &mut rng).unwrap();
            let out = t_xi(&psi.to_full(), chi, &z.q, &MeasureTriple::counting()).unwrap();
            assert_close(out.section(), psi.scale(c(2.0, 0.0)).section(), 1e-12);
        }
    }

    #[test]
    fn from_section_extension_rule() {
        let z = z4();
        let psi = CovariantFunction::from_section(vec![c(1., 0.), c(0., 2.)], z.sign.clone(), z.q.clone()).unwrap();
        assert_close(psi.to_full().values(), &[c(1., 0.), c(0., 2.), c(-1., 0.), c(0., -2.)], 1e-15);
        assert_eq!(covariance_defect(&psi.to_full(), &z.sign).unwrap(), 0.0);

        let flat = CovariantFunction::from_section(vec![c(3., 1.), c(-1., 0.)], z.trivial.clone(), z.q.clone())
            .unwrap()
            .to_full();
        assert_eq!(flat.value(0), flat.value(2));
        assert_eq!(flat.value(1), flat.value(3));

        let zero = CovariantFunction::zero(z.sign.clone(), z.q.clone()).unwrap();
        assert!(zero.to_full().values().iter().all(|v| *v == c(0., 0.)));

        let err = CovariantFunction::from_section(vec![c(1., 0.)], z.sign, z.q).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 2, found: 1 }));
    }

    #[test]
    fn membership_examples() {
        let z = z4();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let f = GroupFunction::random(z.g.clone(), &mut rng);
        let psi = t_xi(&f, &z.sign, &z.q, &MeasureTriple::counting()).unwrap();
        assert!(is_covariant(&psi.to_full(), &z.sign, COVARIANCE_TOL).unwrap());
        let ones = GroupFunction::new(z.g.clone(), vec![c(1., 0.); 4]).unwrap();
        assert!(!is_covariant(&ones, &z.sign, COVARIANCE_TOL).unwrap());
        assert!(is_covariant(&GroupFunction::zeros(z.g.clone()), &z.sign, 0.0).unwrap());
    }

    #[test]
    fn norms_of_the_reference_section() {
        let z = z4();
        let psi = CovariantFunction::from_section(vec![c(1., 0.), c(0., 2.)], z.sign.clone(), z.q.clone()).unwrap();
        let m = MeasureTriple::counting();
        assert!((cov_norm(&psi, 2.0, &m).unwrap() - 5f64.sqrt()).abs() < 1e-15);
        assert!((lp_norm(&psi.to_full(), 2.0, 1.0).unwrap() - 10f64.sqrt()).abs() < 1e-15);
        let zero = CovariantFunction::zero(z.sign, z.q).unwrap();
        assert_eq!(cov_norm(&zero, 3.0, &m).unwrap(), 0.0);
        assert!(matches!(cov_norm(&psi, 0.9, &m), Err(Error::InvalidExponent(_))));
    }

    #[test]
    fn trivial_projection() {
        let z = z4();
        let m = MeasureTriple::counting();
        let psi = CovariantFunction::from_section(vec![c(2., 1.), c(0., -3.)], z.trivial.clone(), z.q.clone()).unwrap();
        let proj = project_trivial(&psi).unwrap();
        assert_eq!(proj.values(), psi.section());
        for p in [1.0, 2.0, 3.0] {
            assert_eq!(lp_norm(&proj, p, m.w_q).unwrap(), cov_norm(&psi, p, &m).unwrap());
        }

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = GroupFunction::random(z.g.clone(), &mut rng);
        let via_txi = project_trivial(&t_xi(&f, &z.trivial, &z.q, &m).unwrap()).unwrap();
        assert!(via_txi.max_abs_diff(&t_n(&f, &z.q, &m).unwrap()) < 1e-12);

        let signed = CovariantFunction::zero(z.sign, z.q).unwrap();
        assert!(matches!(project_trivial(&signed), Err(Error::NontrivialCharacter)));
    }

    #[test]
    fn restriction_inverts_extension() {
        let g = Arc::new(FiniteGroup::symmetric(3).unwrap());
        let n = Subgroup::derived(g.clone());
        let q = Arc::new(QuotientGroup::new(&n).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for chi in enumerate_characters(&n) {
            let psi = CovariantFunction::random(chi.clone(), q.clone(), &mut rng).unwrap();
            let back = CovariantFunction::restrict(&psi.to_full(), chi, q.clone()).unwrap();
            assert_eq!(back.section(), psi.section());
        }
    }
}
