//! Writing and reading groups, characters and covariant functions as JSON.

use std::sync::Arc;

use covmod::character::enumerate_characters;
use covmod::covariant::CovariantFunction;
use covmod::group::QuotientGroup;
use covmod::json::{self, CovariantJson, GroupJson};
use covmod::semidirect::heisenberg_finite;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> covmod::Result<()> {
    let heis = heisenberg_finite(2)?;
    let g = heis.product().clone();
    let q = Arc::new(QuotientGroup::new(&heis.center())?);
    let chi = enumerate_characters(q.normal()).pop().expect("at least the trivial character");
    let psi = CovariantFunction::random(chi, q, &mut ChaCha8Rng::seed_from_u64(5))?;

    let group_text = json::to_string(&GroupJson::from_group(&g))?;
    let psi_text = json::to_string_pretty(&CovariantJson::from_covariant(&psi))?;
    println!("group: {group_text}");
    println!("covariant:\n{psi_text}");

    let g2 = Arc::new(json::from_str::<GroupJson>(&group_text)?.to_group()?);
    let back = json::from_str::<CovariantJson>(&psi_text)?.to_covariant(&g2)?;
    println!("round trip exact: {}", back.section() == psi.section());

    // Objects are tied to the group they were written against.
    let other = Arc::new(heisenberg_finite(3)?.product().as_ref().clone());
    println!("wrong group: {}", json::from_str::<CovariantJson>(&psi_text)?.to_covariant(&other).unwrap_err());

    println!("sqrt(5) is written as {}", json::format_f64(5f64.sqrt()));
    Ok(())
}
