//! Semi-direct products, the finite Heisenberg group and quotients by
//! invariant subgroups of the normal factor.

use std::sync::Arc;

use covmod::group::{FiniteGroup, QuotientGroup, Subgroup};
use covmod::semidirect::{
    canonical_quotient_map, heisenberg_finite, quotient_semidirect, quotient_table_mismatches, semidirect,
};

fn main() -> covmod::Result<()> {
    // Z2 acting on Z3 by inversion gives a nonabelian group of order 6.
    let h = Arc::new(FiniteGroup::cyclic(2)?);
    let k = Arc::new(FiniteGroup::cyclic(3)?);
    let sd = semidirect(h.clone(), k.clone(), &[vec![0, 1, 2], vec![0, 2, 1]])?;
    let g = sd.product();
    println!("Z2:Z3 order {}, abelian {}", g.order(), g.is_abelian());
    let (a, b) = (sd.element(1, 0), sd.element(0, 1));
    println!("(1,0)(0,1) = {:?}", sd.split(g.mul(a, b)));
    println!("(0,1)(1,0) = {:?}", sd.split(g.mul(b, a)));

    // A map that is not an automorphism is refused.
    let err = semidirect(h, k, &[vec![0, 1, 2], vec![0, 0, 1]]).unwrap_err();
    println!("invalid action: {err}");

    for m in [2, 3] {
        let heis = heisenberg_finite(m)?;
        let g = heis.product();
        let x = heis.element(1, 0, 0);
        let y = heis.element(0, 1, 0);
        let comm = g.commutator(x, y);
        println!("Heis(Z{m}): order {}, [x, y] = {:?}", g.order(), heis.semidirect().split(comm));

        let center = heis.center();
        assert_eq!(center, Subgroup::center(g.clone()));
        let q = QuotientGroup::new(&center)?;
        println!("  G/Z order {}, abelian {}", q.order(), q.table().is_abelian());

        let sd = heis.semidirect();
        let n = heis.center_in_k();
        let quotient_sd = quotient_semidirect(sd, &n)?;
        println!(
            "  H x| (K/Z) order {}, canonical map {:?}, table mismatches {}",
            quotient_sd.product().order(),
            canonical_quotient_map(sd, &n)?,
            quotient_table_mismatches(sd, &n)?
        );
    }
    Ok(())
}
