//! Exact characters of normal subgroups: enumeration, orthogonality and
//! pullback along conjugation.

use std::sync::Arc;

use covmod::character::{enumerate_characters, exact_inner_product, Automorphism, Character, Phase};
use covmod::group::{FiniteGroup, Subgroup};

fn main() -> covmod::Result<()> {
    let z4 = Arc::new(FiniteGroup::cyclic(4)?);
    let v4 = Arc::new(FiniteGroup::product(&FiniteGroup::cyclic(2)?, &FiniteGroup::cyclic(2)?)?);
    let s3 = Arc::new(FiniteGroup::symmetric(3)?);

    for (name, n) in
        [("Z4", Subgroup::full(z4.clone())), ("Z2xZ2", Subgroup::full(v4)), ("S3", Subgroup::full(s3.clone()))]
    {
        let chars = enumerate_characters(&n);
        println!("{name}: {} linear characters", chars.len());
        for chi in &chars {
            let phases: Vec<String> = chi.phases().iter().map(|p| format!("{}/{}", p.num(), p.den())).collect();
            println!("  [{}]", phases.join(", "));
        }
        for a in &chars {
            for b in &chars {
                let ip = exact_inner_product(a, b)?;
                assert_eq!(ip, if a == b { n.order() } else { 0 });
            }
        }
    }

    // chi_1 on Z4 sends the generator to i.
    let chi = Character::cyclic(z4.clone(), 1)?;
    println!("chi_1(1) = {}", chi.eval(1)?);

    // Phases that break the homomorphism law are rejected.
    let bad = Character::new(Subgroup::full(z4.clone()), vec![Phase::ZERO, Phase::new(1, 2), Phase::ZERO, Phase::ZERO]);
    println!("bad phases: {}", bad.unwrap_err());

    // Conjugation in S3 permutes the characters of A3.
    let a3 = Subgroup::derived(s3.clone());
    let chars = enumerate_characters(&a3);
    let swap = Automorphism::from_fn(a3.clone(), |s| s3.conjugate(1, s))?;
    for (i, chi) in chars.iter().enumerate() {
        let pulled = chi.pullback(&swap)?;
        let j = chars.iter().position(|c| *c == pulled).expect("pullback stays in the character group");
        println!("A3 character {i} pulls back to {j}");
    }
    Ok(())
}
