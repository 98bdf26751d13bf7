//! `L^1(G)` acting on covariant functions by convolution, with a seeded
//! check of the module laws.

use std::sync::Arc;

use covmod::character::enumerate_characters;
use covmod::convolution::{convolve, module_action, verify_module_axioms};
use covmod::covariant::{t_xi, CovariantFunction};
use covmod::function::GroupFunction;
use covmod::group::{FiniteGroup, MeasureTriple, QuotientGroup, Subgroup};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> covmod::Result<()> {
    let s3 = Arc::new(FiniteGroup::symmetric(3)?);
    let q = Arc::new(QuotientGroup::new(&Subgroup::derived(s3.clone()))?);
    let measure = MeasureTriple::counting();
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    for chi in enumerate_characters(q.normal()) {
        let f = GroupFunction::random(s3.clone(), &mut rng);
        let g = GroupFunction::random(s3.clone(), &mut rng);

        // T_xi intertwines convolution: T_xi(f * g) = f * T_xi(g).
        let lhs = t_xi(&convolve(&f, &g, &measure)?, &chi, &q, &measure)?;
        let rhs = module_action(&f, &t_xi(&g, &chi, &q, &measure)?, &measure)?;
        println!("chi {:?}: intertwining residual {:e}", chi.phases(), lhs.max_abs_diff(&rhs));

        // A point mass at the identity acts trivially.
        let psi = CovariantFunction::random(chi.clone(), q.clone(), &mut rng)?;
        let delta = GroupFunction::delta(s3.clone(), s3.identity());
        let same = module_action(&delta, &psi, &measure)?;
        println!("  |delta_e * psi - psi| = {:e}", same.max_abs_diff(&psi));

        let report = verify_module_axioms(&q, &chi, &measure, 20, 1e-9, 11)?;
        for law in &report.laws {
            println!("  {:<22} {:e}", law.law, law.max_residual);
        }
        println!("  passed: {}", report.passed);
    }
    Ok(())
}
