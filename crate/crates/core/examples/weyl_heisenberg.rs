//! Fast convolution kernels on the discretised Weyl-Heisenberg group
//! `W(Z_M, Z_R)`, compared against the generic module action.

use covmod::bench::run_bench;
use covmod::convolution::module_action;
use covmod::covariant::CovariantFunction;
use covmod::function::GroupFunction;
use covmod::group::MeasureTriple;
use covmod::semidirect::weyl_heisenberg_finite;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> covmod::Result<()> {
    let (m, r) = (4, 8);
    let wh = weyl_heisenberg_finite(m, r)?;
    let g = wh.product().clone();
    let measure = MeasureTriple::counting();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    println!("W(Z{m},Z{r}) has order {}; centre order {}", g.order(), wh.center().order());

    let f = GroupFunction::random(g.clone(), &mut rng);
    for n in 0..r as i64 {
        let psi = CovariantFunction::random(wh.chi_n(n), wh.center_quotient().clone(), &mut rng)?;
        let fast = wh.conv_fast_center(&f, &psi, n, &measure)?;
        let slow = module_action(&f, &psi, &measure)?;
        println!("centre  n={n}: |fast - generic| = {:e}", fast.max_abs_diff(&slow));
    }
    for (y, n) in [(0, 0), (1, 2), (3, 5)] {
        let psi = CovariantFunction::random(wh.chi_yn(y, n), wh.k_quotient().clone(), &mut rng)?;
        let fast = wh.conv_fast_full(&f, &psi, y, n, &measure)?;
        let slow = module_action(&f, &psi, &measure)?;
        println!("K y={y} n={n}: |fast - generic| = {:e}", fast.max_abs_diff(&slow));
    }

    // W(Z3, Z4) has no exact discretisation.
    println!("W(Z3,Z4): {}", weyl_heisenberg_finite(3, 4).unwrap_err());

    print!("{}", run_bench(4, 4, 500, 42)?.table());
    Ok(())
}
