//! Semi-direct products `H x| K`, the finite Heisenberg and Weyl-Heisenberg
//! groups, and closed-form convolution kernels that exploit their structure.
//!
//! The pair `(h, k)` has index `h * |K| + k`, with group law
//! `(h, k)(h', k') = (h h', k theta_h(k'))`.
//!
//! Haar measures here are counting measures. Any `theta_h` permutes a finite
//! set, so all modular factors `delta` equal 1; they are still computed from
//! the action (as ratios of image sizes) so the measure bookkeeping stays
//! explicit.

use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use crate::character::{Automorphism, Character, Phase};
use crate::convolution::{evaluate, PARALLEL_WORK};
use crate::covariant::CovariantFunction;
use crate::error::{check_order, Error, Result};
use crate::function::{t_n, GroupFunction};
use crate::group::{same_group, FiniteGroup, MeasureTriple, QuotientGroup, Subgroup};
use rayon::prelude::*;

#[derive(Clone, Debug)]
pub struct SemidirectGroup {
    h: Arc<FiniteGroup>,
    k: Arc<FiniteGroup>,
    action: Vec<u32>,
    product: Arc<FiniteGroup>,
    delta: Vec<f64>,
}

/// Builds `H x|_theta K` from the table `action[h][k] = theta_h(k)`.
///
/// Each `theta_h` must be an automorphism of `K`, and `h -> theta_h` a
/// homomorphism into `Aut(K)`.
pub fn semidirect(h: Arc<FiniteGroup>, k: Arc<FiniteGroup>, action: &[Vec<usize>]) -> Result<SemidirectGroup> {
    let (nh, nk) = (h.order(), k.order());
    let order = nh.checked_mul(nk).ok_or(Error::Resource { order: usize::MAX, limit: crate::MAX_ORDER })?;
    check_order(order)?;
    if action.len() != nh {
        return Err(Error::InvalidAction(format!("{} rows for |H| = {nh}", action.len())));
    }
    let mut flat = Vec::with_capacity(order);
    for (hi, row) in action.iter().enumerate() {
        if row.len() != nk {
            return Err(Error::InvalidAction(format!("row {hi} has {} entries, |K| = {nk}", row.len())));
        }
        let mut hit = vec![false; nk];
        for &img in row {
            if img >= nk {
                return Err(Error::InvalidAction(format!("theta_{hi} maps into {img}, outside K")));
            }
            if std::mem::replace(&mut hit[img], true) {
                return Err(Error::InvalidAction(format!("theta_{hi} is not bijective, {img} hit twice")));
            }
        }
        for a in 0..nk {
            for b in 0..nk {
                if row[k.mul(a, b)] != k.mul(row[a], row[b]) {
                    return Err(Error::InvalidAction(format!("theta_{hi} is not multiplicative at ({a}, {b})")));
                }
            }
        }
        flat.extend(row.iter().map(|&v| v as u32));
    }
    let theta = |hi: usize, ki: usize| flat[hi * nk + ki] as usize;
    if let Some(ki) = (0..nk).find(|&ki| theta(h.identity(), ki) != ki) {
        return Err(Error::InvalidAction(format!("theta_e moves {ki}")));
    }
    for a in 0..nh {
        for b in 0..nh {
            let ab = h.mul(a, b);
            if let Some(ki) = (0..nk).find(|&ki| theta(ab, ki) != theta(a, theta(b, ki))) {
                return Err(Error::InvalidAction(format!(
                    "theta_({a}*{b}) differs from theta_{a} o theta_{b} at {ki}"
                )));
            }
        }
    }

    let mut mul = Vec::with_capacity(order * order);
    for x in 0..order {
        let (xh, xk) = (x / nk, x % nk);
        for y in 0..order {
            let (yh, yk) = (y / nk, y % nk);
            mul.push((h.mul(xh, yh) * nk + k.mul(xk, theta(xh, yk))) as u32);
        }
    }
    let labels = (0..order).map(|x| format!("({},{})", h.label(x / nk), k.label(x % nk))).collect();
    let product = Arc::new(FiniteGroup::from_parts(order, mul, Some(labels)));

    let mut sd = SemidirectGroup { h, k, action: flat, product, delta: Vec::new() };
    let whole_k = Subgroup::full(sd.k.clone());
    sd.delta = (0..nh).map(|hi| image_ratio(&sd, &whole_k, hi)).collect();
    Ok(sd)
}

/// `|N| / |theta_h(N)|`, the counting-measure scaling of `theta_h` on `N`.
fn image_ratio(sd: &SemidirectGroup, n: &Subgroup, h: usize) -> f64 {
    let image: BTreeSet<usize> = n.members().iter().map(|&s| sd.theta(h, s)).collect();
    n.order() as f64 / image.len() as f64
}

impl SemidirectGroup {
    pub fn h(&self) -> &Arc<FiniteGroup> {
        &self.h
    }

    pub fn k(&self) -> &Arc<FiniteGroup> {
        &self.k
    }

    /// The semi-direct product as a plain group.
    pub fn product(&self) -> &Arc<FiniteGroup> {
        &self.product
    }

    #[inline]
    pub fn theta(&self, h: usize, k: usize) -> usize {
        self.action[h * self.k.order() + k] as usize
    }

    /// Index of the pair `(h, k)`.
    #[inline]
    pub fn element(&self, h: usize, k: usize) -> usize {
        h * self.k.order() + k
    }

    /// The pair `(h, k)` of an element index.
    #[inline]
    pub fn split(&self, x: usize) -> (usize, usize) {
        (x / self.k.order(), x % self.k.order())
    }

    /// `delta_{H,K}(h)`.
    pub fn delta(&self, h: usize) -> f64 {
        self.delta[h]
    }

    /// The action table `theta_h(k)` by rows.
    pub fn action_table(&self) -> Vec<Vec<usize>> {
        self.action.chunks(self.k.order()).map(|row| row.iter().map(|&v| v as usize).collect()).collect()
    }

    pub fn is_invariant(&self, n: &Subgroup) -> bool {
        same_group(n.parent(), &self.k)
            && (0..self.h.order()).all(|h| n.members().iter().all(|&s| n.contains(self.theta(h, s))))
    }

    fn check_invariant(&self, n: &Subgroup) -> Result<()> {
        if !same_group(n.parent(), &self.k) {
            return Err(Error::Shape("subgroup does not live in K".into()));
        }
        if let Some((h, s)) = (0..self.h.order())
            .flat_map(|h| n.members().iter().map(move |&s| (h, s)))
            .find(|&(h, s)| !n.contains(self.theta(h, s)))
        {
            return Err(Error::NotInvariant(format!("theta_{h}({s}) = {} leaves N", self.theta(h, s))));
        }
        Ok(())
    }

    /// `{(e_H, s) : s in n}` as a subgroup of the product.
    pub fn embed(&self, n: &Subgroup) -> Result<Subgroup> {
        if !same_group(n.parent(), &self.k) {
            return Err(Error::Shape("subgroup does not live in K".into()));
        }
        let e = self.h.identity();
        Subgroup::new(self.product.clone(), n.members().iter().map(|&s| self.element(e, s)))
    }

    /// `K` as a normal subgroup of the product.
    pub fn k_subgroup(&self) -> Subgroup {
        self.embed(&Subgroup::full(self.k.clone())).expect("K embeds")
    }

    /// `theta_h` restricted to an invariant subgroup `n` of `K`.
    pub fn automorphism(&self, h: usize, n: &Subgroup) -> Result<Automorphism> {
        self.check_invariant(n)?;
        Automorphism::from_fn(n.clone(), |s| self.theta(h, s))
    }

    /// Carries a character of `n` (a subgroup of `K`) to the embedded copy of `n`.
    pub fn embed_character(&self, chi: &Character) -> Result<Character> {
        let n = chi.domain();
        let embedded = self.embed(n)?;
        Character::new(embedded, chi.phases().to_vec())
    }
}

/// `delta_{H,N}(h)` for a `theta`-invariant subgroup `n` of `K`.
pub fn delta_factor(sd: &SemidirectGroup, n: &Subgroup, h: usize) -> Result<f64> {
    sd.check_invariant(n)?;
    Ok(image_ratio(sd, n, h))
}

/// `delta_{H,K/N}(h)`, the scaling of the induced action on cosets.
pub fn delta_factor_quotient(sd: &SemidirectGroup, n: &Subgroup, h: usize) -> Result<f64> {
    sd.check_invariant(n)?;
    let kq = QuotientGroup::new(n)?;
    let image: BTreeSet<usize> = kq.reps().iter().map(|&r| kq.proj(sd.theta(h, r))).collect();
    Ok(kq.order() as f64 / image.len() as f64)
}

/// Largest `|delta_{H,K}(h) - delta_{H,N}(h) delta_{H,K/N}(h)|` over `h`.
pub fn delta_factorization_residual(sd: &SemidirectGroup, n: &Subgroup) -> Result<f64> {
    let mut worst = 0.0f64;
    for h in 0..sd.h.order() {
        let product = delta_factor(sd, n, h)? * delta_factor_quotient(sd, n, h)?;
        worst = worst.max((sd.delta(h) - product).abs());
    }
    Ok(worst)
}

/// `H x|_theta~ (K/N)` with the induced action `theta~_h(kN) = theta_h(k) N`.
pub fn quotient_semidirect(sd: &SemidirectGroup, n: &Subgroup) -> Result<SemidirectGroup> {
    sd.check_invariant(n)?;
    let kq = QuotientGroup::new(n)?;
    let action: Vec<Vec<usize>> =
        (0..sd.h.order()).map(|h| kq.reps().iter().map(|&r| kq.proj(sd.theta(h, r))).collect()).collect();
    semidirect(sd.h.clone(), kq.table().clone(), &action)
}

/// The canonical map `(h, k)N -> (h, kN)` from cosets of `G/N` (for `N`
/// embedded in the product) to indices of [`quotient_semidirect`].
pub fn canonical_quotient_map(sd: &SemidirectGroup, n: &Subgroup) -> Result<Vec<usize>> {
    sd.check_invariant(n)?;
    let kq = QuotientGroup::new(n)?;
    let gq = QuotientGroup::new(&sd.embed(n)?)?;
    Ok(gq
        .reps()
        .iter()
        .map(|&r| {
            let (h, k) = sd.split(r);
            h * kq.order() + kq.proj(k)
        })
        .collect())
}

/// Number of coset pairs where the table of `G/N` and the table of
/// `H x| (K/N)` disagree under the canonical map (zero for an isomorphism),
/// plus one if the map is not a bijection.
pub fn quotient_table_mismatches(sd: &SemidirectGroup, n: &Subgroup) -> Result<usize> {
    let phi = canonical_quotient_map(sd, n)?;
    let gq = QuotientGroup::new(&sd.embed(n)?)?;
    let qsd = quotient_semidirect(sd, n)?;
    let table = gq.table();
    let distinct: BTreeSet<usize> = phi.iter().copied().collect();
    let mut bad = usize::from(distinct.len() != phi.len() || phi.len() != qsd.product().order());
    for a in 0..table.order() {
        for b in 0..table.order() {
            if phi[table.mul(a, b)] != qsd.product().mul(phi[a], phi[b]) {
                bad += 1;
            }
        }
    }
    Ok(bad)
}

/// Haar weights on `H`, `K` and the invariant subgroup `N`.
#[derive(Clone, Copy, Debug)]
pub struct FactorWeights {
    pub w_h: f64,
    pub w_k: f64,
    pub w_n: f64,
}

/// Compares two ways of integrating over `G/N` for `N` inside `K`.
///
/// For `f` on the product and `Phi = T_N f`, returns the largest of
/// `|A - B|`, `|A - C|` and `|A - D|` where
/// * `A = sum_x w_g f(x)` with `w_g = delta_{H,K}(h) w_h w_k`,
/// * `B = sum over G/N of w_q Phi` with Weil's `w_q = w_g / w_n`,
/// * `C = sum_h sum_{kN} delta_{H,K/N}(h) w_h w_{K/N} Phi((h,k)N)` with
///   `w_{K/N} = w_k / w_n`,
/// * `D` as `C` but with the inner average written as
///   `sum_{s in N} w_n f(h, k theta_h(s))`.
pub fn quotient_haar_residual(
    sd: &SemidirectGroup,
    n: &Subgroup,
    f: &GroupFunction,
    weights: FactorWeights,
) -> Result<f64> {
    if !same_group(f.group(), &sd.product) {
        return Err(Error::GroupMismatch);
    }
    let FactorWeights { w_h, w_k, w_n } = weights;
    let gq = QuotientGroup::new(&sd.embed(n)?)?;
    let kq = QuotientGroup::new(n)?;
    let w_kq = w_k / w_n;

    let a: Complex64 = (0..sd.product.order()).map(|x| f.value(x) * (sd.delta(sd.split(x).0) * w_h * w_k)).sum();

    // Weil on G: w_q = w_g / w_n, with w_g uniform because delta is constant.
    let w_g = sd.delta(sd.h.identity()) * w_h * w_k;
    let measure = MeasureTriple { w_g, w_n, w_q: w_g / w_n };
    let phi = t_n(f, &gq, &measure)?;
    let b: Complex64 = phi.values().iter().map(|v| v * measure.w_q).sum();

    let mut c = Complex64::new(0.0, 0.0);
    let mut d = Complex64::new(0.0, 0.0);
    for h in 0..sd.h.order() {
        let weight = delta_factor_quotient(sd, n, h)? * w_h * w_kq;
        for &rep in kq.reps() {
            c += phi.value(gq.proj(sd.element(h, rep))) * weight;
            let inner: Complex64 =
                n.members().iter().map(|&s| f.value(sd.element(h, sd.k.mul(rep, sd.theta(h, s)))) * w_n).sum();
            d += inner * weight;
        }
    }
    Ok([(a - b).norm(), (a - c).norm(), (a - d).norm()].into_iter().fold(0.0, f64::max))
}

/// Largest `|psi(h, s) - xi(theta_{h^-1}(s)) psi(h, e_K)|` over `h` in `H`
/// and `s` in `N`, for `psi` covariant for a character of `N` inside `K`.
pub fn covariance_shape_defect(sd: &SemidirectGroup, psi: &CovariantFunction) -> Result<f64> {
    if !same_group(psi.group(), &sd.product) {
        return Err(Error::GroupMismatch);
    }
    let normal = psi.quotient().normal();
    let chi = psi.character();
    let e_k = sd.k.identity();
    let mut worst = 0.0f64;
    for h in 0..sd.h.order() {
        let base = psi.value_at(sd.element(h, e_k));
        let h_inv = sd.h.inv(h);
        for &x in normal.members() {
            let (nh, s) = sd.split(x);
            if nh != sd.h.identity() {
                return Err(Error::Shape("normal subgroup is not inside K".into()));
            }
            let twisted = chi.eval(sd.element(nh, sd.theta(h_inv, s)))?;
            worst = worst.max((psi.value_at(sd.element(h, s)) - twisted * base).norm());
        }
    }
    Ok(worst)
}

/// `f * psi` for `psi` covariant for a character `xi` of the whole of `K`:
///
/// `(f*psi)(a, b) = xi(theta_{a^-1}(b)) sum_h sum_k f(h, k) psi(h^-1 a, e_K)
///  conj(xi(theta_{a^-1}(k))) delta_{H,K}(h) w_g`.
///
/// Cost `O(|H|^2 |K|)`.
pub fn conv_fast_full_k(
    sd: &SemidirectGroup,
    f: &GroupFunction,
    psi: &CovariantFunction,
    measure: &MeasureTriple,
) -> Result<CovariantFunction> {
    if !same_group(f.group(), &sd.product) || !same_group(psi.group(), &sd.product) {
        return Err(Error::GroupMismatch);
    }
    let k_sub = sd.k_subgroup();
    if *psi.quotient().normal() != k_sub {
        return Err(Error::Shape("fast path needs N = K".into()));
    }
    let (nh, nk) = (sd.h.order(), sd.k.order());
    let e_h = sd.h.identity();
    let e_k = sd.k.identity();
    let chi = psi.character().values();
    let xi_k: Vec<Complex64> = (0..nk).map(|k| chi[k_sub.position(sd.element(e_h, k)).unwrap()]).collect();
    let psi_e: Vec<Complex64> = (0..nh).map(|h| psi.value_at(sd.element(h, e_k))).collect();
    let q = psi.quotient();

    let section = evaluate(q.order(), nh * nk, |c| {
        let (a, b) = sd.split(q.reps()[c]);
        let a_inv = sd.h.inv(a);
        let twist: Vec<Complex64> = (0..nk).map(|k| xi_k[sd.theta(a_inv, k)].conj()).collect();
        let sum: Complex64 = (0..nh)
            .map(|h| {
                let inner: Complex64 = (0..nk).map(|k| f.value(sd.element(h, k)) * twist[k]).sum();
                inner * psi_e[sd.h.mul(sd.h.inv(h), a)] * sd.delta(h)
            })
            .sum();
        xi_k[sd.theta(a_inv, b)] * sum * measure.w_g
    });
    CovariantFunction::from_section(section, psi.character().clone(), q.clone())
}

/// The Heisenberg group over Z_M: `H = Z_M`, `K = Z_M x Z_M` and
/// `theta_x(y, s) = (y, s + x y)`, so
/// `(x, y, s)(x', y', s') = (x + x', y + y', s + s' + x y')`.
#[derive(Clone, Debug)]
pub struct Heisenberg {
    m: usize,
    group: SemidirectGroup,
}

pub fn heisenberg_finite(m: usize) -> Result<Heisenberg> {
    check_order(m)?;
    let h = Arc::new(FiniteGroup::cyclic(m)?);
    let z = FiniteGroup::cyclic(m)?;
    let k = Arc::new(FiniteGroup::product(&z, &z)?);
    let action: Vec<Vec<usize>> = (0..m)
        .map(|x| {
            (0..m * m)
                .map(|yk| {
                    let (y, s) = (yk / m, yk % m);
                    y * m + (s + x * y) % m
                })
                .collect()
        })
        .collect();
    Ok(Heisenberg { m, group: semidirect(h, k, &action)? })
}

impl Heisenberg {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn semidirect(&self) -> &SemidirectGroup {
        &self.group
    }

    pub fn product(&self) -> &Arc<FiniteGroup> {
        self.group.product()
    }

    pub fn element(&self, x: usize, y: usize, s: usize) -> usize {
        let m = self.m;
        self.group.element(x % m, (y % m) * m + s % m)
    }

    /// `{(0, s)}` inside `K`.
    pub fn center_in_k(&self) -> Subgroup {
        Subgroup::new(self.group.k().clone(), 0..self.m).expect("central line is a subgroup")
    }

    /// `{(0, 0, s)}` inside the group.
    pub fn center(&self) -> Subgroup {
        self.group.embed(&self.center_in_k()).expect("embeds")
    }

    /// `e_{z,nu}(y, s) = exp(2 pi i (z y + nu s) / M)` on `K`.
    pub fn k_character(&self, z: i64, nu: i64) -> Result<Character> {
        let m = self.m;
        Character::from_fn(Subgroup::full(self.group.k().clone()), |yk| {
            let (y, s) = ((yk / m) as i64, (yk % m) as i64);
            Phase::new(z * y + nu * s, m as u64)
        })
    }
}

/// The Weyl-Heisenberg group over Z_M with the circle replaced by Z_R:
/// `H = Z_M`, `K = Z_M x Z_R` (the first factor indexing the dual of Z_M)
/// and `theta_m(l, t) = (l, t + (R/M) m l)`. Requires `M | R`.
///
/// Elements are written `(m, l, t)`. Characters of the centre are
/// `chi_n(t) = exp(2 pi i n t / R)`; characters of `K` are
/// `chi_{y,n}(l, t) = exp(2 pi i y l / M) exp(2 pi i n t / R)`.
#[derive(Clone, Debug)]
pub struct WeylHeisenberg {
    m: usize,
    r: usize,
    group: SemidirectGroup,
    center: Subgroup,
    k_normal: Subgroup,
    center_quotient: Arc<QuotientGroup>,
    k_quotient: Arc<QuotientGroup>,
    /// `pow_m[a * M + b] = exp(2 pi i a b / M)`.
    pow_m: Vec<Complex64>,
    roots_r: Vec<Complex64>,
    chars_n: Vec<OnceLock<Character>>,
    chars_yn: Vec<OnceLock<Character>>,
}

pub fn weyl_heisenberg_finite(m: usize, r: usize) -> Result<WeylHeisenberg> {
    check_order(m)?;
    check_order(r)?;
    if !r.is_multiple_of(m) {
        return Err(Error::Discretization { m, r });
    }
    let step = r / m;
    let h = Arc::new(FiniteGroup::cyclic(m)?);
    let k = Arc::new(FiniteGroup::product(&FiniteGroup::cyclic(m)?, &FiniteGroup::cyclic(r)?)?);
    let action: Vec<Vec<usize>> = (0..m)
        .map(|mm| {
            (0..m * r)
                .map(|lt| {
                    let (l, t) = (lt / r, lt % r);
                    l * r + (t + step * mm * l) % r
                })
                .collect()
        })
        .collect();
    let group = semidirect(h, k, &action)?;
    // (0, 0, t) has index t and (0, l, t) has index l R + t.
    let center = Subgroup::new(group.product().clone(), 0..r)?;
    let k_normal = group.k_subgroup();
    let center_quotient = Arc::new(QuotientGroup::new(&center)?);
    let k_quotient = Arc::new(QuotientGroup::new(&k_normal)?);
    let pow_m = (0..m * m).map(|ab| Phase::new(((ab / m) * (ab % m)) as i64, m as u64).to_complex()).collect();
    let roots_r = (0..r).map(|j| Phase::new(j as i64, r as u64).to_complex()).collect();
    Ok(WeylHeisenberg {
        m,
        r,
        group,
        center,
        k_normal,
        center_quotient,
        k_quotient,
        pow_m,
        roots_r,
        chars_n: (0..r).map(|_| OnceLock::new()).collect(),
        chars_yn: (0..m * r).map(|_| OnceLock::new()).collect(),
    })
}

impl WeylHeisenberg {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn semidirect(&self) -> &SemidirectGroup {
        &self.group
    }

    pub fn product(&self) -> &Arc<FiniteGroup> {
        self.group.product()
    }

    pub fn element(&self, m: usize, l: usize, t: usize) -> usize {
        self.group.element(m % self.m, (l % self.m) * self.r + t % self.r)
    }

    /// `(m, l, t)` of an element index.
    pub fn coords(&self, x: usize) -> (usize, usize, usize) {
        let (m, lt) = self.group.split(x);
        (m, lt / self.r, lt % self.r)
    }

    /// `{(0, 0, t)}` inside the group.
    pub fn center(&self) -> Subgroup {
        self.center.clone()
    }

    /// `{(0, l, t)}`, the copy of `K`.
    pub fn k_normal(&self) -> Subgroup {
        self.k_normal.clone()
    }

    /// `G / center`, shared by every covariant function built here.
    pub fn center_quotient(&self) -> &Arc<QuotientGroup> {
        &self.center_quotient
    }

    /// `G / K`.
    pub fn k_quotient(&self) -> &Arc<QuotientGroup> {
        &self.k_quotient
    }

    fn reduce(v: i64, d: usize) -> usize {
        v.rem_euclid(d as i64) as usize
    }

    /// `chi_n` on [`WeylHeisenberg::center`].
    pub fn chi_n(&self, n: i64) -> Character {
        let n = Self::reduce(n, self.r);
        let r = self.r as u64;
        self.chars_n[n]
            .get_or_init(|| {
                Character::from_fn(self.center.clone(), |x| Phase::new((self.coords(x).2 * n) as i64, r))
                    .expect("chi_n is a character")
            })
            .clone()
    }

    /// `chi_{y,n}` on [`WeylHeisenberg::k_normal`].
    pub fn chi_yn(&self, y: i64, n: i64) -> Character {
        let (y, n) = (Self::reduce(y, self.m), Self::reduce(n, self.r));
        let (m, r) = (self.m as u64, self.r as u64);
        self.chars_yn[y * self.r + n]
            .get_or_init(|| {
                Character::from_fn(self.k_normal.clone(), |x| {
                    let (_, l, t) = self.coords(x);
                    Phase::new((y * l) as i64, m) + Phase::new((n * t) as i64, r)
                })
                .expect("chi_{y,n} is a character")
            })
            .clone()
    }

    fn check_inputs(&self, f: &GroupFunction, psi: &CovariantFunction, expected: &Character) -> Result<()> {
        if !same_group(f.group(), self.product()) || !same_group(psi.group(), self.product()) {
            return Err(Error::GroupMismatch);
        }
        if psi.character() != expected {
            return Err(Error::Shape("covariant function has a different character".into()));
        }
        Ok(())
    }

    /// `w_g sum_t f(m', l', t) exp(-2 pi i n t / R)` for every `(m', l')`.
    fn central_transform(&self, f: &GroupFunction, n: usize, w_g: f64) -> Vec<Complex64> {
        let r = self.r;
        let mut twiddle = Vec::with_capacity(r);
        let mut idx = 0;
        for _ in 0..r {
            twiddle.push(self.roots_r[idx].conj() * w_g);
            idx += n;
            if idx >= r {
                idx -= r;
            }
        }
        f.values().chunks_exact(r).map(|line| line.iter().zip(&twiddle).map(|(v, w)| v * w).sum()).collect()
    }

    /// `pow_m` row for the exponent `a`.
    fn pow_row(&self, a: usize) -> &[Complex64] {
        &self.pow_m[(a % self.m) * self.m..][..self.m]
    }

    /// `f * psi` for `N` the centre and `xi = chi_n`:
    ///
    /// `(f*psi)(m, l, t) = exp(2 pi i n t / R) sum_{m', l'} exp(2 pi i n (l' - l) m' / M)
    ///   F(m', l') psi(m - m', l - l', 0)` with
    /// `F(m', l') = sum_t f(m', l', t) exp(-2 pi i n t / R)`.
    ///
    /// Cost `O(|G| + M^4)` against `O(|G| M^2)` for the generic action.
    pub fn conv_fast_center(
        &self,
        f: &GroupFunction,
        psi: &CovariantFunction,
        n: i64,
        measure: &MeasureTriple,
    ) -> Result<CovariantFunction> {
        self.check_inputs(f, psi, &self.chi_n(n))?;
        let m = self.m;
        let nm = Self::reduce(n, m);
        let transformed = self.central_transform(f, Self::reduce(n, self.r), measure.w_g);
        let q = psi.quotient();

        let zero = Complex64::new(0.0, 0.0);
        let stride = m * self.r;

        // twisted[m'][l'] = F(m', l') exp(2 pi i n m' l' / M) and
        // untwist[m'][l] = exp(-2 pi i n m' l / M).
        let mut twisted = transformed;
        let mut untwist = Vec::with_capacity(m * m);
        let mut a = 0;
        for mp in 0..m {
            let row = &self.pow_m[a * m..][..m];
            for (v, w) in twisted[mp * m..][..m].iter_mut().zip(row) {
                *v *= w;
            }
            untwist.extend(row.iter().map(|w| w.conj()));
            a += nm;
            if a >= m {
                a -= m;
            }
        }
        // psi(m, l, 0) with each row doubled so that (l - l') mod M needs
        // no reduction.
        let section = psi.section();
        let mut psi0 = vec![zero; 2 * m * m];
        for mm in 0..m {
            for l in 0..m {
                let v = section[q.proj(mm * stride + l * self.r)];
                psi0[mm * 2 * m + l] = v;
                psi0[mm * 2 * m + l + m] = v;
            }
        }

        // Row mm of the output; the l-loop is innermost so its M
        // accumulators are independent.
        let row_of = |mm: usize, out: &mut [Complex64]| {
            let mut acc = vec![zero; m];
            let mut shifted = mm;
            for mp in 0..m {
                acc.fill(zero);
                let row = &psi0[shifted * 2 * m..][..2 * m];
                for (lp, w) in twisted[mp * m..][..m].iter().enumerate() {
                    for (a, p) in acc.iter_mut().zip(&row[m - lp..][..m]) {
                        *a += w * p;
                    }
                }
                for ((o, a), t) in out.iter_mut().zip(&acc).zip(&untwist[mp * m..][..m]) {
                    *o += a * t;
                }
                shifted = if shifted == 0 { m - 1 } else { shifted - 1 };
            }
        };
        let mut values = vec![zero; m * m];
        if m * m * m * m < PARALLEL_WORK {
            values.chunks_mut(m).enumerate().for_each(|(mm, out)| row_of(mm, out));
        } else {
            values.par_chunks_mut(m).enumerate().for_each(|(mm, out)| row_of(mm, out));
        }
        let mut section = vec![zero; q.order()];
        for mm in 0..m {
            for l in 0..m {
                section[q.proj(mm * stride + l * self.r)] = values[mm * m + l];
            }
        }
        CovariantFunction::from_section(section, psi.character().clone(), q.clone())
    }

    /// `f * psi` for `N = K` and `xi = chi_{y,n}`:
    ///
    /// `(f*psi)(m, l, t) = exp(2 pi i l (y - n m) / M) exp(2 pi i n t / R)
    ///   sum_{m'} psi(m - m', 0, 0) sum_{l', t'} f(m', l', t')
    ///   exp(-2 pi i l' (y - n m) / M) exp(-2 pi i n t' / R)`.
    ///
    /// The inner sums are one discrete Fourier coefficient of `f(m', ., .)`,
    /// giving cost `O(|G| + M^3)` against `O(|G| M)` for the generic action.
    pub fn conv_fast_full(
        &self,
        f: &GroupFunction,
        psi: &CovariantFunction,
        y: i64,
        n: i64,
        measure: &MeasureTriple,
    ) -> Result<CovariantFunction> {
        self.check_inputs(f, psi, &self.chi_yn(y, n))?;
        let m = self.m;
        let transformed = self.central_transform(f, Self::reduce(n, self.r), measure.w_g);
        let q = psi.quotient();
        let stride = m * self.r;
        let psi0: Vec<Complex64> = (0..m).map(|mm| psi.section()[q.proj(mm * stride)]).collect();

        let values = evaluate(m, m * m, |mm| {
            let dft = self.pow_row(Self::reduce(y - n * mm as i64, m));
            let mut shifted = mm;
            let mut sum = Complex64::new(0.0, 0.0);
            for mp in 0..m {
                let coeff: Complex64 = transformed[mp * m..][..m].iter().zip(dft).map(|(v, w)| v * w.conj()).sum();
                sum += psi0[shifted] * coeff;
                shifted = if shifted == 0 { m - 1 } else { shifted - 1 };
            }
            sum
        });
        let mut section = vec![Complex64::new(0.0, 0.0); q.order()];
        for (mm, v) in values.into_iter().enumerate() {
            section[q.proj(mm * stride)] = v;
        }
        CovariantFunction::from_section(section, psi.character().clone(), q.clone())
    }
}

/// Free-function form of [`WeylHeisenberg::conv_fast_center`].
pub fn conv_fast_wh_center(
    wh: &WeylHeisenberg,
    f: &GroupFunction,
    psi: &CovariantFunction,
    n: i64,
    measure: &MeasureTriple,
) -> Result<CovariantFunction> {
    wh.conv_fast_center(f, psi, n, measure)
}

/// Free-function form of [`WeylHeisenberg::conv_fast_full`].
pub fn conv_fast_wh_full(
    wh: &WeylHeisenberg,
    f: &GroupFunction,
    psi: &CovariantFunction,
    y: i64,
    n: i64,
    measure: &MeasureTriple,
) -> Result<CovariantFunction> {
    wh.conv_fast_full(f, psi, y, n, measure)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character::enumerate_characters;
    use crate::convolution::module_action;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn inversion_action() -> Vec<Vec<usize>> {
        vec![vec![0, 1, 2], vec![0, 2, 1]]
    }

    fn z2_z3() -> SemidirectGroup {
        let h = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let k = Arc::new(FiniteGroup::cyclic(3).unwrap());
        semidirect(h, k, &inversion_action()).unwrap()
    }

    #[test]
    fn trivial_action_gives_direct_product() {
        let h = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let k = Arc::new(FiniteGroup::cyclic(3).unwrap());
        let id = vec![vec![0, 1, 2]; 2];
        let sd = semidirect(h.clone(), k.clone(), &id).unwrap();
        assert_eq!(**sd.product(), FiniteGroup::product(&h, &k).unwrap());
    }

    #[test]
    fn inversion_gives_a_nonabelian_group_of_order_six() {
        let sd = z2_z3();
        assert_eq!(sd.product().order(), 6);
        assert!(!sd.product().is_abelian());
        sd.product().check_associativity().unwrap();
    }

    /// Brute-force search for a bijection preserving the tables.
    fn isomorphic(a: &FiniteGroup, b: &FiniteGroup) -> bool {
        fn extend(a: &FiniteGroup, b: &FiniteGroup, map: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
            let x = map.len();
            if x == a.order() {
                return (0..x).all(|i| (0..x).all(|j| map[a.mul(i, j)] == b.mul(map[i], map[j])));
            }
            for y in 0..b.order() {
                if !used[y] && a.element_order(x) == b.element_order(y) {
                    used[y] = true;
                    map.push(y);
                    if extend(a, b, map, used) {
                        return true;
                    }
                    map.pop();
                    used[y] = false;
                }
            }
            false
        }
        a.order() == b.order() && extend(a, b, &mut Vec::new(), &mut vec![false; b.order()])
    }

    #[test]
    fn inversion_action_gives_s3() {
        let sd = z2_z3();
        assert!(isomorphic(sd.product(), &FiniteGroup::symmetric(3).unwrap()));
        let z6 = FiniteGroup::cyclic(6).unwrap();
        assert!(!isomorphic(sd.product(), &z6));
    }

    #[test]
    fn heisenberg_mod_center_is_klein_four() {
        let heis = heisenberg_finite(2).unwrap();
        let q = QuotientGroup::new(&heis.center()).unwrap();
        let z2 = FiniteGroup::cyclic(2).unwrap();
        assert!(isomorphic(q.table(), &FiniteGroup::product(&z2, &z2).unwrap()));
        assert!(!isomorphic(q.table(), &FiniteGroup::cyclic(4).unwrap()));
    }

    #[test]
    fn invalid_actions_are_rejected() {
        let h = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let k = Arc::new(FiniteGroup::cyclic(3).unwrap());
        let not_bijective = vec![vec![0, 1, 2], vec![0, 0, 0]];
        let err = semidirect(h.clone(), k.clone(), &not_bijective).unwrap_err();
        assert!(err.to_string().contains("not bijective"), "{err}");
        // theta_1 = x -> x + 1 is a bijection but not a homomorphism.
        let shift = vec![vec![0, 1, 2], vec![1, 2, 0]];
        assert!(matches!(semidirect(h, k, &shift), Err(Error::InvalidAction(_))));
        // Z_3 acting on Z_3 by inversion is not a homomorphism in h.
        let h3 = Arc::new(FiniteGroup::cyclic(3).unwrap());
        let k3 = Arc::new(FiniteGroup::cyclic(3).unwrap());
        let bad = vec![vec![0, 1, 2], vec![0, 2, 1], vec![0, 2, 1]];
        assert!(matches!(semidirect(h3, k3, &bad), Err(Error::InvalidAction(_))));
    }

    #[test]
    fn inverse_formula() {
        let sd = z2_z3();
        let g = sd.product();
        for x in 0..6 {
            let (h, k) = sd.split(x);
            let hi = sd.h().inv(h);
            assert_eq!(g.inv(x), sd.element(hi, sd.theta(hi, sd.k().inv(k))));
        }
    }

    #[test]
    fn heisenberg_group_law() {
        let heis = heisenberg_finite(2).unwrap();
        let g = heis.product();
        assert_eq!(g.order(), 8);
        let a = heis.element(1, 1, 0);
        assert_eq!(g.mul(a, a), heis.element(0, 0, 1));
        for (x, y, s) in [(1, 0, 1), (0, 1, 1), (1, 1, 1)] {
            for (x2, y2, s2) in [(1, 1, 0), (0, 1, 0), (1, 0, 1)] {
                let lhs = g.mul(heis.element(x, y, s), heis.element(x2, y2, s2));
                assert_eq!(lhs, heis.element(x + x2, y + y2, s + s2 + x * y2));
            }
        }
        assert_eq!(heisenberg_finite(1).unwrap().product().order(), 1);
        assert!(matches!(heisenberg_finite(0), Err(Error::InvalidOrder(0))));
    }

    #[test]
    fn heisenberg_center_is_normal_and_fixed() {
        for m in 2..=4 {
            let heis = heisenberg_finite(m).unwrap();
            let center = heis.center();
            assert!(center.is_normal());
            assert_eq!(center, Subgroup::center(heis.product().clone()));
            let sd = heis.semidirect();
            for x in 0..m {
                for &s in heis.center_in_k().members() {
                    assert_eq!(sd.theta(x, s), s);
                }
            }
        }
    }

    #[test]
    fn heisenberg_character_pullback() {
        let m = 3usize;
        let heis = heisenberg_finite(m).unwrap();
        let k_full = Subgroup::full(heis.semidirect().k().clone());
        for x in 0..m {
            let theta = heis.semidirect().automorphism(x, &k_full).unwrap();
            for z in 0..m as i64 {
                for nu in 0..m as i64 {
                    let pulled = heis.k_character(z, nu).unwrap().pullback(&theta).unwrap();
                    let expected = heis.k_character(z + nu * x as i64, nu).unwrap();
                    assert_eq!(pulled, expected);
                    pulled.check_homomorphism().unwrap();
                }
            }
        }
    }

    #[test]
    fn weyl_heisenberg_action() {
        let wh = weyl_heisenberg_finite(2, 4).unwrap();
        let sd = wh.semidirect();
        // K index of (l, t) is l * R + t.
        assert_eq!(sd.theta(1, 4), 4 + 2);
        for a in 0..2 {
            for b in 0..2 {
                for k in 0..8 {
                    assert_eq!(sd.theta(a, sd.theta(b, k)), sd.theta((a + b) % 2, k));
                }
            }
        }
        assert!(matches!(weyl_heisenberg_finite(3, 4), Err(Error::Discretization { m: 3, r: 4 })));
        assert!(matches!(weyl_heisenberg_finite(0, 4), Err(Error::InvalidOrder(0))));
    }

    #[test]
    fn weyl_heisenberg_with_r_equal_m_is_heisenberg() {
        for m in 1..=4 {
            let wh = weyl_heisenberg_finite(m, m).unwrap();
            let heis = heisenberg_finite(m).unwrap();
            assert_eq!(**wh.product(), **heis.product());
        }
    }

    #[test]
    fn deltas_are_one() {
        let heis = heisenberg_finite(3).unwrap();
        let sd = heis.semidirect();
        let n = heis.center_in_k();
        for h in 0..3 {
            assert_eq!(sd.delta(h), 1.0);
            assert_eq!(delta_factor(sd, &n, h).unwrap(), 1.0);
            assert_eq!(delta_factor_quotient(sd, &n, h).unwrap(), 1.0);
        }
        assert_eq!(delta_factorization_residual(sd, &n).unwrap(), 0.0);
    }

    #[test]
    fn non_invariant_subgroup_is_rejected() {
        let heis = heisenberg_finite(2).unwrap();
        let sd = heis.semidirect();
        // {(0,0), (1,0)} inside K = Z_2 x Z_2: theta_1(1,0) = (1,1).
        let line = Subgroup::new(sd.k().clone(), [0, 2]).unwrap();
        assert!(matches!(delta_factor(sd, &line, 1), Err(Error::NotInvariant(_))));
    }

    #[test]
    fn quotient_matches_semidirect_of_quotient() {
        let heis = heisenberg_finite(3).unwrap();
        let sd = heis.semidirect();
        let n = heis.center_in_k();
        assert_eq!(quotient_table_mismatches(sd, &n).unwrap(), 0);
        let phi = canonical_quotient_map(sd, &n).unwrap();
        assert!(phi.iter().enumerate().all(|(i, &j)| i == j));
    }

    #[test]
    fn quotient_haar_construction_agrees() {
        let wh = weyl_heisenberg_finite(2, 4).unwrap();
        let sd = wh.semidirect();
        let center_in_k = Subgroup::new(sd.k().clone(), 0..4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for weights in [FactorWeights { w_h: 1.0, w_k: 1.0, w_n: 1.0 }, FactorWeights { w_h: 0.5, w_k: 3.0, w_n: 0.25 }]
        {
            let f = GroupFunction::random(wh.product().clone(), &mut rng);
            let r = quotient_haar_residual(sd, &center_in_k, &f, weights).unwrap();
            assert!(r <= 1e-12 * f.abs_sum().max(1.0), "{r}");
        }
    }

    #[test]
    fn covariance_shape_holds() {
        let heis = heisenberg_finite(3).unwrap();
        let sd = heis.semidirect();
        let n = sd.k_subgroup();
        let q = Arc::new(QuotientGroup::new(&n).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for chi in enumerate_characters(&n) {
            let psi = CovariantFunction::random(chi, q.clone(), &mut rng).unwrap();
            assert!(covariance_shape_defect(sd, &psi).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn full_k_fast_path_matches_generic_on_s3() {
        let sd = z2_z3();
        let n = sd.k_subgroup();
        let q = Arc::new(QuotientGroup::new(&n).unwrap());
        let m = MeasureTriple::counting();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for chi in enumerate_characters(&n) {
            let psi = CovariantFunction::random(chi.clone(), q.clone(), &mut rng).unwrap();
            let e = GroupFunction::delta(sd.product().clone(), sd.product().identity());
            assert!(conv_fast_full_k(&sd, &e, &psi, &m).unwrap().max_abs_diff(&psi) < 1e-15);
            for _ in 0..10 {
                let f = GroupFunction::random(sd.product().clone(), &mut rng);
                let fast = conv_fast_full_k(&sd, &f, &psi, &m).unwrap();
                let slow = module_action(&f, &psi, &m).unwrap();
                assert!(fast.max_abs_diff(&slow) <= 1e-12);
            }
        }
    }

    #[test]
    fn full_k_fast_path_requires_n_equal_k() {
        let heis = heisenberg_finite(2).unwrap();
        let center = heis.center();
        let q = Arc::new(QuotientGroup::new(&center).unwrap());
        let psi = CovariantFunction::zero(Character::trivial(center), q).unwrap();
        let f = GroupFunction::zeros(heis.product().clone());
        let err = conv_fast_full_k(heis.semidirect(), &f, &psi, &MeasureTriple::counting()).unwrap_err();
        assert!(matches!(err, Error::Shape(_)));
    }

    #[test]
    fn weyl_heisenberg_fast_paths_match_generic() {
        let m = MeasureTriple::counting();
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for (mm, r) in [(1, 1), (2, 2), (2, 4), (3, 3), (3, 6), (4, 4)] {
            let wh = weyl_heisenberg_finite(mm, r).unwrap();
            let g = wh.product().clone();
            let qc = Arc::new(QuotientGroup::new(&wh.center()).unwrap());
            let qk = Arc::new(QuotientGroup::new(&wh.k_normal()).unwrap());
            for n in -1..(r as i64 + 1) {
                let psi = CovariantFunction::random(wh.chi_n(n), qc.clone(), &mut rng).unwrap();
                let f = GroupFunction::random(g.clone(), &mut rng);
                let fast = wh.conv_fast_center(&f, &psi, n, &m).unwrap();
                assert!(fast.max_abs_diff(&module_action(&f, &psi, &m).unwrap()) <= 1e-12);
                for y in 0..mm as i64 {
                    let psi = CovariantFunction::random(wh.chi_yn(y, n), qk.clone(), &mut rng).unwrap();
                    let fast = wh.conv_fast_full(&f, &psi, y, n, &m).unwrap();
                    assert!(fast.max_abs_diff(&module_action(&f, &psi, &m).unwrap()) <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn fast_paths_fix_delta_identity() {
        let wh = weyl_heisenberg_finite(2, 2).unwrap();
        let m = MeasureTriple::counting();
        let e = GroupFunction::delta(wh.product().clone(), wh.product().identity());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let qc = Arc::new(QuotientGroup::new(&wh.center()).unwrap());
        let psi = CovariantFunction::random(wh.chi_n(1), qc, &mut rng).unwrap();
        assert!(wh.conv_fast_center(&e, &psi, 1, &m).unwrap().max_abs_diff(&psi) < 1e-15);
        let qk = Arc::new(QuotientGroup::new(&wh.k_normal()).unwrap());
        let psi = CovariantFunction::random(wh.chi_yn(1, 1), qk, &mut rng).unwrap();
        assert!(wh.conv_fast_full(&e, &psi, 1, 1, &m).unwrap().max_abs_diff(&psi) < 1e-15);
    }

    #[test]
    fn trivial_central_character_gives_flat_output() {
        let wh = weyl_heisenberg_finite(2, 4).unwrap();
        let m = MeasureTriple::counting();
        let qc = Arc::new(QuotientGroup::new(&wh.center()).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let psi = CovariantFunction::random(wh.chi_n(0), qc, &mut rng).unwrap();
        let f = GroupFunction::random(wh.product().clone(), &mut rng);
        let out = wh.conv_fast_center(&f, &psi, 0, &m).unwrap().to_full();
        for mm in 0..2 {
            for l in 0..2 {
                for t in 1..4 {
                    assert_eq!(out.value(wh.element(mm, l, t)), out.value(wh.element(mm, l, 0)));
                }
            }
        }
    }

    #[test]
    fn fast_paths_reject_wrong_character() {
        let wh = weyl_heisenberg_finite(2, 2).unwrap();
        let m = MeasureTriple::counting();
        let qc = Arc::new(QuotientGroup::new(&wh.center()).unwrap());
        let psi = CovariantFunction::zero(wh.chi_n(1), qc).unwrap();
        let f = GroupFunction::zeros(wh.product().clone());
        assert!(matches!(wh.conv_fast_center(&f, &psi, 0, &m), Err(Error::Shape(_))));
        assert!(matches!(wh.conv_fast_full(&f, &psi, 0, 1, &m), Err(Error::Shape(_))));
    }
}
