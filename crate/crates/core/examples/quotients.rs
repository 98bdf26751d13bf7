//! Cosets, quotient tables and the Weil integration formula on a few small
//! groups.

use std::sync::Arc;

use covmod::function::{t_n, weil_residual, GroupFunction};
use covmod::group::{weil_measure, FiniteGroup, QuotientGroup, Subgroup};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> covmod::Result<()> {
    let s3 = Arc::new(FiniteGroup::symmetric(3)?);
    let a3 = Subgroup::derived(s3.clone());
    println!("S3 abelian: {}, A3 = {:?}, normal: {}", s3.is_abelian(), a3.members(), a3.is_normal());

    let q = QuotientGroup::new(&a3)?;
    for (c, coset) in q.cosets().iter().enumerate() {
        println!("coset {c}: rep {} members {:?}", q.reps()[c], coset);
    }
    // Every element splits as rep * member.
    for x in 0..s3.order() {
        assert_eq!(q.element(q.proj(x), q.offset(x)), x);
    }

    // A non-normal subgroup has no quotient.
    let transposition = Subgroup::generated_by(s3.clone(), &[1])?;
    println!("<(0 1)> normal: {}, quotient: {:?}", transposition.is_normal(), QuotientGroup::new(&transposition).err());

    let z6 = Arc::new(FiniteGroup::cyclic(6)?);
    let q = QuotientGroup::new(&Subgroup::new(z6.clone(), [0, 2, 4])?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let f = GroupFunction::random(z6, &mut rng);
    for (wg, wn) in [(1.0, 1.0), (1.0, 1.0 / 3.0), (0.25, 2.0)] {
        let measure = weil_measure(wg, wn)?;
        let tn = t_n(&f, &q, &measure)?;
        println!(
            "w_g={wg} w_n={wn:.4} w_q={:.4}: T_N f(0) = {:.4}, Weil residual {:e}",
            measure.w_q,
            tn.value(0),
            weil_residual(&f, &q, &measure)?
        );
    }
    Ok(())
}
