use std::sync::Arc;

use covmod::character::{Character, Phase};
use covmod::convolution::{convolve, module_action};
use covmod::covariant::t_xi;
use covmod::function::{t_n, GroupFunction};
use covmod::group::{weil_measure, FiniteGroup, QuotientGroup, Subgroup};
use covmod::json;
use num_complex::Complex64;
use proptest::prelude::*;

type Values = Vec<(f64, f64)>;

/// `(m, d, values)` with `d | m`, so `N = d Z_m` has order `m / d`.
fn cyclic_case() -> impl Strategy<Value = (usize, usize, Values, Values)> {
    (1usize..=12).prop_flat_map(|m| {
        let divisors: Vec<usize> = (1..=m).filter(|d| m % d == 0).collect();
        let vals = || prop::collection::vec((-5.0..5.0f64, -5.0..5.0f64), m);
        (Just(m), prop::sample::select(divisors), vals(), vals())
    })
}

fn function(g: &Arc<FiniteGroup>, vals: &[(f64, f64)]) -> GroupFunction {
    GroupFunction::new(g.clone(), vals.iter().map(|&(a, b)| Complex64::new(a, b)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Weil's formula against a direct sum over `Z_m`, and `T_xi` turning
    /// convolution into the module action, for every character of `d Z_m`.
    #[test]
    fn weil_and_intertwining_on_cyclic_groups(
        (m, d, fv, gv) in cyclic_case(),
        wg in 0.1..4.0f64,
        wn in 0.1..4.0f64,
    ) {
        let g = Arc::new(FiniteGroup::cyclic(m).unwrap());
        let n = Subgroup::new(g.clone(), (0..m).step_by(d)).unwrap();
        let q = Arc::new(QuotientGroup::new(&n).unwrap());
        let measure = weil_measure(wg, wn).unwrap();
        let f = function(&g, &fv);
        let h = function(&g, &gv);

        let lhs: Complex64 = fv.iter().map(|&(a, b)| Complex64::new(a, b)).sum::<Complex64>() * wg;
        let tn = t_n(&f, &q, &measure).unwrap();
        // Cosets of d Z_m are the residues 0..d; average by hand.
        let rhs: Complex64 = (0..d)
            .map(|c| {
                let by_hand: Complex64 = (0..m / d).map(|k| f.value(c + k * d)).sum::<Complex64>() * wn;
                assert!((tn.value(c) - by_hand).norm() <= 1e-12 * (1.0 + by_hand.norm()));
                by_hand
            })
            .sum::<Complex64>()
            * (wg / wn);
        prop_assert!((lhs - rhs).norm() <= 1e-12 * f.abs_sum().max(1.0) * wg.max(1.0));

        for ell in 0..n.order() as i64 {
            let chi = Character::from_fn(n.clone(), |s| {
                Phase::new(ell * (s / d) as i64, (m / d) as u64)
            })
            .unwrap();
            let a = t_xi(&convolve(&f, &h, &measure).unwrap(), &chi, &q, &measure).unwrap();
            let b = module_action(&f, &t_xi(&h, &chi, &q, &measure).unwrap(), &measure).unwrap();
            let scale = wg * wg * wn * f.abs_sum() * h.abs_sum();
            prop_assert!(a.max_abs_diff(&b) <= 1e-9 * scale.max(1.0));
        }
    }

    /// Written floats parse back to the same bits.
    #[test]
    fn float_text_round_trips(bits in any::<u64>()) {
        let x = f64::from_bits(bits);
        prop_assume!(x.is_finite());
        let text = json::format_f64(x);
        prop_assert_eq!(text.parse::<f64>().unwrap().to_bits(), x.to_bits());
    }
}
