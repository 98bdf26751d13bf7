//! The averaging map `T_xi` onto covariant functions and the covariant
//! `L^p` norm.

use std::sync::Arc;

use covmod::character::{Character, Phase};
use covmod::covariant::{cov_norm, covariance_defect, t_xi, CovariantFunction};
use covmod::function::{lp_norm, GroupFunction};
use covmod::group::{FiniteGroup, MeasureTriple, QuotientGroup, Subgroup};
use num_complex::Complex64;

fn main() -> covmod::Result<()> {
    let z4 = Arc::new(FiniteGroup::cyclic(4)?);
    let n = Subgroup::new(z4.clone(), [0, 2])?;
    let q = Arc::new(QuotientGroup::new(&n)?);
    let sign = Character::from_fn(n.clone(), |s| Phase::new((s / 2) as i64, 2))?;
    let measure = MeasureTriple::counting();

    let f = GroupFunction::new(z4.clone(), (0..4).map(|x| Complex64::new(x as f64 + 1.0, 0.0)).collect())?;
    let psi = t_xi(&f, &sign, &q, &measure)?;
    println!("T_xi f section: {}", show(psi.section()));
    println!("T_xi f on G:    {}", show(psi.to_full().values()));
    println!("covariance defect: {:e}", covariance_defect(&psi.to_full(), &sign)?);

    // The section (1, 2i) extends to (1, 2i, -1, -2i).
    let psi = CovariantFunction::from_section(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)], sign, q)?;
    for p in [1.0, 2.0, 3.0] {
        let full = lp_norm(&psi.to_full(), p, measure.w_g)?;
        println!(
            "p={p}: cov_norm {:.12}, |N|^(-1/p) ||psi||_p {:.12}",
            cov_norm(&psi, p, &measure)?,
            2f64.powf(-1.0 / p) * full
        );
    }
    Ok(())
}

fn show(values: &[Complex64]) -> String {
    values.iter().map(|z| format!("{z}")).collect::<Vec<_>>().join(", ")
}
