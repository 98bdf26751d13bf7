//! One-dimensional characters of finite groups with exact rational phases.
//!
//! A character value is always a root of unity, so it is stored as a phase
//! `q` in `[0, 1)` meaning `exp(2 pi i q)`. Products and pullbacks are exact
//! rational arithmetic; floats appear only in [`Character::eval`] and
//! [`Character::values`].

use std::cmp::Ordering;
use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};

/// An exact element of `Q/Z`, kept reduced with `0 <= num < den`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Phase {
    num: u64,
    den: u64,
}

impl Phase {
    pub const ZERO: Phase = Phase { num: 0, den: 1 };

    /// `num / den` reduced modulo 1. Panics if `den == 0`.
    pub fn new(num: i64, den: u64) -> Phase {
        assert!(den > 0, "phase with zero denominator");
        let r = num.rem_euclid(den as i64) as u64;
        let g = r.gcd(&den);
        Phase { num: r / g, den: den / g }
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    /// `k * self`.
    pub fn scale(self, k: i64) -> Phase {
        let n = (self.num as i128 * k as i128).rem_euclid(self.den as i128);
        Phase::new(n as i64, self.den)
    }

    /// `exp(2 pi i q)`. Whole quarter turns are applied exactly, so values at
    /// multiples of 1/4 are exactly `1, i, -1, -i`.
    pub fn to_complex(self) -> Complex64 {
        let four_n = 4 * self.num as u128;
        let quarter = (four_n / self.den as u128) as u8;
        let rest = (four_n % self.den as u128) as f64 / self.den as f64;
        let (s, c) = (TAU / 4.0 * rest).sin_cos();
        match quarter {
            0 => Complex64::new(c, s),
            1 => Complex64::new(-s, c),
            2 => Complex64::new(-c, -s),
            _ => Complex64::new(s, -c),
        }
    }
}

impl std::ops::Add for Phase {
    type Output = Phase;

    fn add(self, other: Phase) -> Phase {
        let l = self.den.lcm(&other.den);
        let n = (self.num as u128 * (l / self.den) as u128 + other.num as u128 * (l / other.den) as u128) % l as u128;
        Phase::new(n as i64, l)
    }
}

impl std::ops::Neg for Phase {
    type Output = Phase;

    fn neg(self) -> Phase {
        Phase::new(-(self.num as i64), self.den)
    }
}

impl std::ops::Sub for Phase {
    type Output = Phase;

    fn sub(self, other: Phase) -> Phase {
        self + -other
    }
}

impl Ord for Phase {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for Phase {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// A homomorphism from a subgroup into the circle.
#[derive(Clone)]
pub struct Character {
    domain: Subgroup,
    phases: Arc<[Phase]>,
    values: Arc<[Complex64]>,
}

impl PartialEq for Character {
    fn eq(&self, other: &Self) -> bool {
        self.domain == other.domain && (Arc::ptr_eq(&self.phases, &other.phases) || self.phases == other.phases)
    }
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Character").field("domain", &self.domain.members()).field("phases", &self.phases).finish()
    }
}

impl Character {
    /// `phases[i]` is the phase at `domain.members()[i]`. The homomorphism
    /// law is checked exactly.
    pub fn new(domain: Subgroup, phases: Vec<Phase>) -> Result<Self> {
        if phases.len() != domain.order() {
            return Err(Error::DimensionMismatch { expected: domain.order(), found: phases.len() });
        }
        let chi = Character::assemble(domain, phases);
        chi.check_homomorphism()?;
        Ok(chi)
    }

    /// Builds the character from a phase function on parent element indices.
    pub fn from_fn(domain: Subgroup, phase: impl Fn(usize) -> Phase) -> Result<Self> {
        let phases = domain.members().iter().map(|&s| phase(s)).collect();
        Self::new(domain, phases)
    }

    fn assemble(domain: Subgroup, phases: Vec<Phase>) -> Self {
        let values = phases.iter().map(|p| p.to_complex()).collect();
        Character { domain, phases: phases.into(), values }
    }

    pub fn trivial(domain: Subgroup) -> Self {
        let phases = vec![Phase::ZERO; domain.order()];
        Character::assemble(domain, phases)
    }

    /// The `ell`-th character `m -> exp(2 pi i m ell / M)` of the cyclic
    /// group Z_M (as built by [`FiniteGroup::cyclic`]).
    pub fn cyclic(group: Arc<FiniteGroup>, ell: i64) -> Result<Self> {
        let m = group.order();
        if *group != FiniteGroup::cyclic(m)? {
            return Err(Error::Shape("group is not the standard cyclic group".into()));
        }
        Self::from_fn(Subgroup::full(group), |x| Phase::new(x as i64 * ell, m as u64))
    }

    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }

    /// Phases in the order of `domain().members()`.
    pub fn phases(&self) -> &[Phase] {
        &self.phases
    }

    pub fn phase(&self, s: usize) -> Result<Phase> {
        self.domain.position(s).map(|p| self.phases[p]).ok_or(Error::Domain(s))
    }

    /// The value at element `s` of the parent group.
    pub fn eval(&self, s: usize) -> Result<Complex64> {
        self.domain.position(s).map(|p| self.values[p]).ok_or(Error::Domain(s))
    }

    /// Complex values in the order of `domain().members()`, converted once
    /// from the exact phases.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn is_trivial(&self) -> bool {
        self.phases.iter().all(|p| p.is_zero())
    }

    pub fn conj(&self) -> Self {
        Character::assemble(self.domain.clone(), self.phases.iter().map(|&p| -p).collect())
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Character) -> Result<Self> {
        if self.domain != other.domain {
            return Err(Error::InvalidCharacter("characters on different domains".into()));
        }
        let phases = self.phases.iter().zip(other.phases.iter()).map(|(&a, &b)| a + b).collect();
        Ok(Character::assemble(self.domain.clone(), phases))
    }

    /// Exact check of `phase(st) = phase(s) + phase(t)` on all pairs.
    pub fn check_homomorphism(&self) -> Result<()> {
        let g = self.domain.parent();
        let members = self.domain.members();
        let e = self.domain.position(g.identity()).expect("subgroups contain the identity");
        if !self.phases[e].is_zero() {
            return Err(Error::InvalidCharacter("nonzero phase at the identity".into()));
        }
        for (i, &s) in members.iter().enumerate() {
            for (j, &t) in members.iter().enumerate() {
                let st = self.domain.position(g.mul(s, t)).unwrap();
                if self.phases[st] != self.phases[i] + self.phases[j] {
                    return Err(Error::InvalidCharacter(format!("not multiplicative at ({s}, {t})")));
                }
            }
        }
        Ok(())
    }

    /// `s -> xi(theta(s))`.
    pub fn pullback(&self, theta: &Automorphism) -> Result<Self> {
        if theta.domain != self.domain {
            return Err(Error::InvalidAction("automorphism acts on a different subgroup".into()));
        }
        let phases = theta.images.iter().map(|&img| self.phases[self.domain.position(img).unwrap()]).collect();
        Ok(Character::assemble(self.domain.clone(), phases))
    }
}

/// A validated automorphism of a subgroup, stored as the image of each member.
#[derive(Clone, Debug, PartialEq)]
pub struct Automorphism {
    domain: Subgroup,
    images: Vec<usize>,
}

impl Automorphism {
    /// `images[i]` is the image of `domain.members()[i]`.
    pub fn new(domain: Subgroup, images: Vec<usize>) -> Result<Self> {
        let n = domain.order();
        if images.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: images.len() });
        }
        let mut hit = vec![false; n];
        for &img in &images {
            let p =
                domain.position(img).ok_or_else(|| Error::InvalidAction(format!("image {img} leaves the subgroup")))?;
            if std::mem::replace(&mut hit[p], true) {
                return Err(Error::InvalidAction(format!("image {img} hit twice, map is not bijective")));
            }
        }
        let g = domain.parent();
        for (i, &s) in domain.members().iter().enumerate() {
            for (j, &t) in domain.members().iter().enumerate() {
                let st = domain.position(g.mul(s, t)).unwrap();
                if images[st] != g.mul(images[i], images[j]) {
                    return Err(Error::InvalidAction(format!("not multiplicative at ({s}, {t})")));
                }
            }
        }
        Ok(Automorphism { domain, images })
    }

    pub fn from_fn(domain: Subgroup, map: impl Fn(usize) -> usize) -> Result<Self> {
        let images = domain.members().iter().map(|&s| map(s)).collect();
        Self::new(domain, images)
    }

    pub fn identity(domain: Subgroup) -> Self {
        let images = domain.members().to_vec();
        Automorphism { domain, images }
    }

    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }

    pub fn apply(&self, s: usize) -> Result<usize> {
        self.domain.position(s).map(|p| self.images[p]).ok_or(Error::Domain(s))
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            images[self.domain.position(img).unwrap()] = self.domain.members()[i];
        }
        Automorphism { domain: self.domain.clone(), images }
    }
}

/// All one-dimensional characters of `domain`, sorted lexicographically by
/// phase vector (so the trivial character comes first).
///
/// Phases are assigned to a greedily chosen generating set by backtracking;
/// each partial assignment is propagated over the subgroup it generates and
/// rejected on the first inconsistency.
pub fn enumerate_characters(domain: &Subgroup) -> Vec<Character> {
    let local = domain.to_group();
    let n = local.order();

    let mut gens = Vec::new();
    let mut span = vec![false; n];
    span[local.identity()] = true;
    for x in 0..n {
        if !span[x] {
            gens.push(x);
            span = closure(&local, &gens);
        }
    }
    let gen_orders: Vec<u64> = gens.iter().map(|&g| local.element_order(g) as u64).collect();

    let mut found = Vec::new();
    let mut assignment = Vec::with_capacity(gens.len());
    search(&local, &gens, &gen_orders, &mut assignment, &mut found);

    let mut chars: Vec<Character> =
        found.into_iter().map(|phases| Character::assemble(domain.clone(), phases)).collect();
    chars.sort_by(|a, b| a.phases.cmp(&b.phases));
    chars
}

fn closure(g: &FiniteGroup, gens: &[usize]) -> Vec<bool> {
    let mut seen = vec![false; g.order()];
    let mut stack = vec![g.identity()];
    seen[g.identity()] = true;
    while let Some(x) = stack.pop() {
        for &s in gens {
            let y = g.mul(x, s);
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen
}

/// Extends the generator phases to the generated subgroup; `None` on conflict.
fn propagate(g: &FiniteGroup, gens: &[usize], phases: &[Phase]) -> Option<Vec<Option<Phase>>> {
    let mut value: Vec<Option<Phase>> = vec![None; g.order()];
    value[g.identity()] = Some(Phase::ZERO);
    let mut stack = vec![g.identity()];
    while let Some(x) = stack.pop() {
        let px = value[x].unwrap();
        for (&s, &ps) in gens.iter().zip(phases) {
            let y = g.mul(x, s);
            let py = px + ps;
            match value[y] {
                None => {
                    value[y] = Some(py);
                    stack.push(y);
                }
                Some(existing) if existing != py => return None,
                Some(_) => {}
            }
        }
    }
    Some(value)
}

fn search(g: &FiniteGroup, gens: &[usize], orders: &[u64], assignment: &mut Vec<Phase>, found: &mut Vec<Vec<Phase>>) {
    let depth = assignment.len();
    if depth == gens.len() {
        if let Some(values) = propagate(g, gens, assignment) {
            found.push(values.into_iter().map(Option::unwrap).collect());
        }
        return;
    }
    for k in 0..orders[depth] {
        assignment.push(Phase::new(k as i64, orders[depth]));
        if propagate(g, &gens[..=depth], assignment).is_some() {
            search(g, gens, orders, assignment, found);
        }
        assignment.pop();
    }
}

/// Exact value of `sum_s a(s) conj(b(s))`.
///
/// The quotient character `a conj(b)` is either trivial (sum `|N|`) or takes
/// every `d`-th root of unity equally often for some `d > 1` (sum zero). The
/// second case is certified by counting phases, with no floating point.
pub fn exact_inner_product(a: &Character, b: &Character) -> Result<usize> {
    let eta = a.mul(&b.conj())?;
    if eta.is_trivial() {
        return Ok(eta.domain.order());
    }
    let d = eta.phases.iter().fold(1u64, |acc, p| acc.lcm(&p.den));
    let mut counts = vec![0usize; d as usize];
    for p in eta.phases.iter() {
        counts[(p.num * (d / p.den)) as usize] += 1;
    }
    if counts.iter().all(|&c| c == counts[0]) {
        Ok(0)
    } else {
        Err(Error::InvalidCharacter(format!("phase distribution {counts:?} does not cancel")))
    }
}
