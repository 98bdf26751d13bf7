//! Randomized verification suite over a corpus of `(G, N)` pairs.
//!
//! Every check draws its inputs from a ChaCha stream derived from one seed,
//! so a report is reproducible from `(corpus, seed, trials)`.

use std::sync::Arc;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::character::{enumerate_characters, exact_inner_product, Automorphism, Character};
use crate::convolution::{laws, module_action, quotient_convolve, verify_module_axioms, ModuleReport};
use crate::covariant::{cov_norm, project_trivial, CovariantFunction};
use crate::error::{Error, Result};
use crate::function::{lp_norm, t_n, weil_residual, GroupFunction};
use crate::group::{weil_measure, FiniteGroup, MeasureTriple, QuotientGroup, Subgroup};
use crate::json::{ActionJson, GroupJson};
use crate::semidirect::{
    conv_fast_full_k, covariance_shape_defect, delta_factor, delta_factor_quotient, delta_factorization_residual,
    heisenberg_finite, quotient_haar_residual, quotient_table_mismatches, semidirect, weyl_heisenberg_finite,
    FactorWeights, SemidirectGroup,
};

/// Check names used in [`SuiteReport`].
pub mod checks {
    pub const WEIL_FORMULA: &str = "weil_formula";
    pub const TXI_HOMOMORPHISM: &str = "txi_homomorphism";
    pub const NORM_BOUND: &str = "norm_bound";
    pub const NORM_IDENTITY: &str = "norm_identity";
    pub const MODULE_AXIOMS: &str = "module_axioms";
    pub const MODULE_CONSISTENCY: &str = "module_consistency";
    pub const TRIVIAL_CHARACTER: &str = "trivial_character";
    pub const SEMIDIRECT_DELTA: &str = "semidirect_delta";
    pub const SEMIDIRECT_QUOTIENT_HAAR: &str = "semidirect_quotient_haar";
    pub const SEMIDIRECT_QUOTIENT_TABLE: &str = "semidirect_quotient_table";
    pub const COVARIANCE_SHAPE: &str = "covariance_shape";
    pub const FAST_PATHS: &str = "fast_paths";
    pub const CHARACTERS: &str = "characters";
}

/// A `theta`-invariant subgroup of `K` inside a semi-direct product.
#[derive(Clone, Debug)]
pub struct SemidirectPart {
    pub group: Arc<SemidirectGroup>,
    pub normal_in_k: Subgroup,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub quotient: Arc<QuotientGroup>,
    pub semidirect: Option<SemidirectPart>,
}

impl CorpusEntry {
    pub fn plain(name: impl Into<String>, normal: &Subgroup) -> Result<Self> {
        Ok(CorpusEntry { name: name.into(), quotient: Arc::new(QuotientGroup::new(normal)?), semidirect: None })
    }

    pub fn from_semidirect(name: impl Into<String>, sd: SemidirectGroup, normal_in_k: Subgroup) -> Result<Self> {
        let embedded = sd.embed(&normal_in_k)?;
        Ok(CorpusEntry {
            name: name.into(),
            quotient: Arc::new(QuotientGroup::new(&embedded)?),
            semidirect: Some(SemidirectPart { group: Arc::new(sd), normal_in_k }),
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.quotient.parent()
    }

    pub fn normal(&self) -> &Subgroup {
        self.quotient.normal()
    }
}

#[derive(Clone, Debug, Default)]
pub struct Corpus {
    pub entries: Vec<CorpusEntry>,
    /// `(M, R)` pairs whose Weyl-Heisenberg fast paths are cross-checked.
    pub wh_configs: Vec<(usize, usize)>,
}

impl Corpus {
    pub fn builtin() -> Result<Self> {
        let z4 = Arc::new(FiniteGroup::cyclic(4)?);
        let z6 = Arc::new(FiniteGroup::cyclic(6)?);
        let s3 = Arc::new(FiniteGroup::symmetric(3)?);
        let mut entries = vec![
            CorpusEntry::plain("Z4/{0,2}", &Subgroup::new(z4, [0, 2])?)?,
            CorpusEntry::plain("Z6/Z3", &Subgroup::new(z6, [0, 2, 4])?)?,
            CorpusEntry::plain("S3/A3", &Subgroup::derived(s3))?,
        ];
        for m in [2, 3] {
            let heis = heisenberg_finite(m)?;
            let center = heis.center_in_k();
            entries.push(CorpusEntry::from_semidirect(
                format!("Heis(Z{m})/center"),
                heis.semidirect().clone(),
                center,
            )?);
        }
        let wh = weyl_heisenberg_finite(2, 4)?;
        let sd = wh.semidirect().clone();
        let circle = Subgroup::new(sd.k().clone(), 0..4)?;
        let whole = Subgroup::full(sd.k().clone());
        entries.push(CorpusEntry::from_semidirect("W(Z2,Z4)/center", sd.clone(), circle)?);
        entries.push(CorpusEntry::from_semidirect("W(Z2,Z4)/K", sd, whole)?);

        let h = Arc::new(FiniteGroup::cyclic(2)?);
        let k = Arc::new(FiniteGroup::cyclic(3)?);
        let sd = semidirect(h, k, &[vec![0, 1, 2], vec![0, 2, 1]])?;
        let whole = Subgroup::full(sd.k().clone());
        entries.push(CorpusEntry::from_semidirect("Z2:Z3/Z3", sd, whole)?);

        Ok(Corpus { entries, wh_configs: vec![(1, 1), (2, 2), (2, 4), (4, 4)] })
    }

    pub fn extend(&mut self, other: Corpus) {
        self.entries.extend(other.entries);
        for cfg in other.wh_configs {
            if !self.wh_configs.contains(&cfg) {
                self.wh_configs.push(cfg);
            }
        }
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.iter().map(|e| e.name.clone()).collect()
    }
}

/// A corpus file: `{"entries": [...]}` where each entry is either
/// `{"name", "group": <group>, "normal": [members]}` or
/// `{"name", "h": <group>, "k": <group>, "action": [[...]], "normal_in_k": [members]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorpusFile {
    pub entries: Vec<CorpusFileEntry>,
    #[serde(default)]
    pub weyl_heisenberg: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CorpusFileEntry {
    Plain {
        #[serde(default)]
        name: Option<String>,
        group: GroupJson,
        normal: Vec<usize>,
    },
    Semidirect {
        #[serde(default)]
        name: Option<String>,
        h: GroupJson,
        k: GroupJson,
        #[serde(flatten)]
        action: ActionJson,
        normal_in_k: Vec<usize>,
    },
}

impl CorpusFile {
    pub fn into_corpus(self) -> Result<Corpus> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for (i, entry) in self.entries.into_iter().enumerate() {
            entries.push(match entry {
                CorpusFileEntry::Plain { name, group, normal } => {
                    let g = Arc::new(group.to_group()?);
                    CorpusEntry::plain(name.unwrap_or_else(|| format!("entry{i}")), &Subgroup::new(g, normal)?)?
                }
                CorpusFileEntry::Semidirect { name, h, k, action, normal_in_k } => {
                    let sd = semidirect(Arc::new(h.to_group()?), Arc::new(k.to_group()?), &action.action)?;
                    let n = Subgroup::new(sd.k().clone(), normal_in_k)?;
                    CorpusEntry::from_semidirect(name.unwrap_or_else(|| format!("entry{i}")), sd, n)?
                }
            });
        }
        for &(m, r) in &self.weyl_heisenberg {
            weyl_heisenberg_finite(m, r)?;
        }
        Ok(Corpus { entries, wh_configs: self.weyl_heisenberg })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub threshold: f64,
    pub max_residual: f64,
    pub passed: bool,
    /// Corpus entry (and character) where the largest residual occurred.
    pub worst_case: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModuleRun {
    pub entry: String,
    pub character: usize,
    pub report: ModuleReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub trials: usize,
    pub corpus: Vec<String>,
    pub checks: Vec<CheckResult>,
    pub module_runs: Vec<ModuleRun>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// One line per check, failures marked.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed { "ok  " } else { "FAIL" };
            let worst = c.worst_case.as_deref().unwrap_or("-");
            out.push_str(&format!(
                "{status} {:<26} max {:<24e} threshold {:<8e} worst {worst}\n",
                c.name, c.max_residual, c.threshold
            ));
        }
        out
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
    /// Replaces every default threshold when set.
    pub tol: Option<f64>,
}

/// Running maximum with the label of its argmax.
#[derive(Debug)]
struct Worst {
    value: f64,
    label: Option<String>,
}

impl Worst {
    fn new() -> Self {
        Worst { value: 0.0, label: None }
    }

    fn update(&mut self, value: f64, label: impl FnOnce() -> String) {
        // NaN counts as a failure and sticks.
        if value > self.value || (value.is_nan() && !self.value.is_nan()) {
            self.value = value;
            self.label = Some(label());
        }
    }

    fn finish(self, name: &str, default: f64, tol: Option<f64>) -> CheckResult {
        let threshold = tol.unwrap_or(default);
        CheckResult {
            name: name.to_string(),
            threshold,
            max_residual: self.value,
            passed: self.value <= threshold,
            worst_case: self.label,
        }
    }
}

fn stream(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// `|integral of T_N f - integral of f|` relative to `sum |f|`, for counting
/// measures and for the probability measure on `N`.
pub fn check_weil(corpus: &Corpus, trials: usize, seed: u64, tol: Option<f64>) -> Result<Vec<CheckResult>> {
    let mut rng = stream(seed, 1);
    let mut worst = Worst::new();
    for e in &corpus.entries {
        let n = e.normal().order() as f64;
        for (tag, measure) in [("counting", weil_measure(1.0, 1.0)?), ("probability-N", weil_measure(1.0, 1.0 / n)?)] {
            for _ in 0..trials {
                let f = GroupFunction::random(e.group().clone(), &mut rng);
                let r = weil_residual(&f, &e.quotient, &measure)? / f.abs_sum().max(f64::MIN_POSITIVE);
                worst.update(r, || format!("{} ({tag})", e.name));
            }
        }
    }
    Ok(vec![worst.finish(checks::WEIL_FORMULA, 1e-12, tol)])
}

/// Module laws for every entry and every character of `N`.
///
/// Returns the homomorphism, norm-bound, module-axiom and consistency checks
/// together with the per-character reports they are drawn from.
pub fn check_module(
    corpus: &Corpus,
    trials: usize,
    seed: u64,
    tol: Option<f64>,
) -> Result<(Vec<CheckResult>, Vec<ModuleRun>)> {
    let mut seeds = stream(seed, 2);
    let measure = MeasureTriple::counting();
    let (mut hom, mut bound, mut axioms, mut consistency) = (Worst::new(), Worst::new(), Worst::new(), Worst::new());
    let mut runs = Vec::new();
    for e in &corpus.entries {
        for (idx, chi) in enumerate_characters(e.normal()).into_iter().enumerate() {
            let sub_seed = seeds.next_u64();
            // Thresholds are applied per check below; the run itself uses the
            // tightest default so its own flag is informative.
            let report = verify_module_axioms(&e.quotient, &chi, &measure, trials, tol.unwrap_or(1e-9), sub_seed)?;
            let label = || format!("{} chi#{idx}", e.name);
            let get = |law| report.residual(law).unwrap_or(0.0);
            hom.update(get(laws::TXI_HOMOMORPHISM), label);
            for law in [laws::NORM_BOUND_P1, laws::NORM_BOUND_P2, laws::NORM_BOUND_P3] {
                bound.update(get(law), label);
            }
            for law in [laws::ASSOCIATIVITY, laws::LINEAR_IN_FUNCTION, laws::LINEAR_IN_COVARIANT] {
                axioms.update(get(law), label);
            }
            for law in [laws::OUTPUT_COVARIANCE, laws::FULL_GROUP_AGREEMENT, laws::TXI_LINEARITY] {
                consistency.update(get(law), label);
            }
            runs.push(ModuleRun { entry: e.name.clone(), character: idx, report });
        }
    }
    Ok((
        vec![
            hom.finish(checks::TXI_HOMOMORPHISM, 1e-9, tol),
            bound.finish(checks::NORM_BOUND, 1e-9, tol),
            axioms.finish(checks::MODULE_AXIOMS, 1e-9, tol),
            consistency.finish(checks::MODULE_CONSISTENCY, 1e-9, tol),
        ],
        runs,
    ))
}

/// `||psi||_(p) = lambda_N(N)^(-1/p) ||psi||_p` for `p = 1, 2, 3`, relative
/// to the right-hand side, under counting measures and the probability
/// measure on `N`.
pub fn check_norm_identity(corpus: &Corpus, trials: usize, seed: u64, tol: Option<f64>) -> Result<Vec<CheckResult>> {
    let mut rng = stream(seed, 3);
    let mut worst = Worst::new();
    for e in &corpus.entries {
        let n = e.normal().order() as f64;
        for measure in [weil_measure(1.0, 1.0)?, weil_measure(1.0, 1.0 / n)?] {
            let mass_n = measure.w_n * n;
            for (idx, chi) in enumerate_characters(e.normal()).into_iter().enumerate() {
                for _ in 0..trials {
                    let psi = CovariantFunction::random(chi.clone(), e.quotient.clone(), &mut rng)?;
                    for p in [1.0, 2.0, 3.0] {
                        let lhs = cov_norm(&psi, p, &measure)?;
                        let rhs = mass_n.powf(-1.0 / p) * lp_norm(&psi.to_full(), p, measure.w_g)?;
                        let r = (lhs - rhs).abs() / rhs.max(f64::MIN_POSITIVE);
                        worst.update(r, || format!("{} chi#{idx} p={p}", e.name));
                    }
                }
            }
        }
    }
    Ok(vec![worst.finish(checks::NORM_IDENTITY, 1e-9, tol)])
}

/// For the trivial character: `project(f * psi) = T_N f *_{G/N} project(psi)`.
pub fn check_trivial_character(
    corpus: &Corpus,
    trials: usize,
    seed: u64,
    tol: Option<f64>,
) -> Result<Vec<CheckResult>> {
    let mut rng = stream(seed, 4);
    let measure = MeasureTriple::counting();
    let mut worst = Worst::new();
    for e in &corpus.entries {
        let trivial = Character::trivial(e.normal().clone());
        for _ in 0..trials {
            let f = GroupFunction::random(e.group().clone(), &mut rng);
            let psi = CovariantFunction::random(trivial.clone(), e.quotient.clone(), &mut rng)?;
            let lhs = project_trivial(&module_action(&f, &psi, &measure)?)?;
            let rhs = quotient_convolve(&t_n(&f, &e.quotient, &measure)?, &project_trivial(&psi)?, &measure)?;
            worst.update(lhs.max_abs_diff(&rhs), || e.name.clone());
        }
    }
    Ok(vec![worst.finish(checks::TRIVIAL_CHARACTER, 1e-9, tol)])
}

/// Modular factors, the two quotient Haar constructions, the quotient table
/// isomorphism and the covariance shape, for entries with semi-direct
/// structure.
pub fn check_semidirect(corpus: &Corpus, trials: usize, seed: u64, tol: Option<f64>) -> Result<Vec<CheckResult>> {
    let mut rng = stream(seed, 5);
    let (mut delta, mut haar, mut table, mut shape) = (Worst::new(), Worst::new(), Worst::new(), Worst::new());
    for e in &corpus.entries {
        let Some(part) = &e.semidirect else { continue };
        let sd = &part.group;
        let n = &part.normal_in_k;
        for h in 0..sd.h().order() {
            for d in [sd.delta(h), delta_factor(sd, n, h)?, delta_factor_quotient(sd, n, h)?] {
                delta.update((d - 1.0).abs(), || format!("{} h={h}", e.name));
            }
        }
        delta.update(delta_factorization_residual(sd, n)?, || format!("{} factorization", e.name));
        table.update(quotient_table_mismatches(sd, n)? as f64, || e.name.clone());

        let scaled = FactorWeights { w_h: 0.5, w_k: 3.0, w_n: 1.0 / n.order() as f64 };
        let counting = FactorWeights { w_h: 1.0, w_k: 1.0, w_n: 1.0 };
        for weights in [counting, scaled] {
            for _ in 0..trials {
                let f = GroupFunction::random(e.group().clone(), &mut rng);
                let r = quotient_haar_residual(sd, n, &f, weights)? / f.abs_sum().max(f64::MIN_POSITIVE);
                haar.update(r, || e.name.clone());
            }
        }

        for (idx, chi) in enumerate_characters(e.normal()).into_iter().enumerate() {
            for _ in 0..trials {
                let psi = CovariantFunction::random(chi.clone(), e.quotient.clone(), &mut rng)?;
                shape.update(covariance_shape_defect(sd, &psi)?, || format!("{} chi#{idx}", e.name));
            }
        }
    }
    Ok(vec![
        delta.finish(checks::SEMIDIRECT_DELTA, 0.0, tol),
        haar.finish(checks::SEMIDIRECT_QUOTIENT_HAAR, 1e-12, tol),
        table.finish(checks::SEMIDIRECT_QUOTIENT_TABLE, 0.0, tol),
        shape.finish(checks::COVARIANCE_SHAPE, 1e-9, tol),
    ])
}

/// Fast paths against the generic module action: the full-`K` closed form on
/// every semi-direct entry with `N = K`, and both Weyl-Heisenberg kernels
/// for every configured `(M, R)` and every character.
pub fn check_fast_paths(corpus: &Corpus, trials: usize, seed: u64, tol: Option<f64>) -> Result<Vec<CheckResult>> {
    let mut rng = stream(seed, 6);
    let measure = MeasureTriple::counting();
    let mut worst = Worst::new();
    for e in &corpus.entries {
        let Some(part) = &e.semidirect else { continue };
        if part.normal_in_k.order() != part.group.k().order() {
            continue;
        }
        for (idx, chi) in enumerate_characters(e.normal()).into_iter().enumerate() {
            for _ in 0..trials {
                let f = GroupFunction::random(e.group().clone(), &mut rng);
                let psi = CovariantFunction::random(chi.clone(), e.quotient.clone(), &mut rng)?;
                let fast = conv_fast_full_k(&part.group, &f, &psi, &measure)?;
                let slow = module_action(&f, &psi, &measure)?;
                worst.update(fast.max_abs_diff(&slow), || format!("{} full-K chi#{idx}", e.name));
            }
        }
    }
    for &(m, r) in &corpus.wh_configs {
        let wh = weyl_heisenberg_finite(m, r)?;
        let g = wh.product().clone();
        let qc = Arc::new(QuotientGroup::new(&wh.center())?);
        let qk = Arc::new(QuotientGroup::new(&wh.k_normal())?);
        for n in 0..r as i64 {
            let chi = wh.chi_n(n);
            for _ in 0..trials {
                let f = GroupFunction::random(g.clone(), &mut rng);
                let psi = CovariantFunction::random(chi.clone(), qc.clone(), &mut rng)?;
                let fast = wh.conv_fast_center(&f, &psi, n, &measure)?;
                let slow = module_action(&f, &psi, &measure)?;
                worst.update(fast.max_abs_diff(&slow), || format!("W(Z{m},Z{r}) center n={n}"));
            }
            for y in 0..m as i64 {
                let chi = wh.chi_yn(y, n);
                for _ in 0..trials {
                    let f = GroupFunction::random(g.clone(), &mut rng);
                    let psi = CovariantFunction::random(chi.clone(), qk.clone(), &mut rng)?;
                    let fast = wh.conv_fast_full(&f, &psi, y, n, &measure)?;
                    let slow = module_action(&f, &psi, &measure)?;
                    worst.update(fast.max_abs_diff(&slow), || format!("W(Z{m},Z{r}) K y={y} n={n}"));
                }
            }
        }
    }
    Ok(vec![worst.finish(checks::FAST_PATHS, 1e-9, tol)])
}

/// Exact character checks on every `N`: the enumeration has `|N / [N,N]|`
/// members, each passes the homomorphism test, pairwise inner products are
/// `|N|` or `0`, and pulling back along conjugation by any `x in G` stays
/// inside the enumerated set. The residual counts failures.
pub fn check_characters(corpus: &Corpus, tol: Option<f64>) -> Result<Vec<CheckResult>> {
    let mut worst = Worst::new();
    for e in &corpus.entries {
        let n = e.normal();
        let mut failures = 0usize;
        let chars = enumerate_characters(n);
        let local = Arc::new(n.to_group());
        let abelianized = n.order() / Subgroup::derived(local).order();
        failures += usize::from(chars.len() != abelianized);
        for (i, a) in chars.iter().enumerate() {
            failures += usize::from(a.check_homomorphism().is_err());
            for (j, b) in chars.iter().enumerate() {
                let expected = if i == j { n.order() } else { 0 };
                failures += usize::from(exact_inner_product(a, b).ok() != Some(expected));
            }
        }
        let g = e.group();
        for x in 0..g.order() {
            let conj = Automorphism::from_fn(n.clone(), |s| g.conjugate(x, s))?;
            for chi in &chars {
                match chi.pullback(&conj) {
                    Ok(pulled) => {
                        failures += usize::from(pulled.check_homomorphism().is_err() || !chars.contains(&pulled))
                    }
                    Err(_) => failures += 1,
                }
            }
        }
        worst.update(failures as f64, || e.name.clone());
    }
    Ok(vec![worst.finish(checks::CHARACTERS, 0.0, tol)])
}

/// Runs every check family over the corpus.
pub fn run_suite(corpus: &Corpus, config: &SuiteConfig) -> Result<SuiteReport> {
    if corpus.entries.is_empty() && corpus.wh_configs.is_empty() {
        return Err(Error::Validation("empty corpus".into()));
    }
    let SuiteConfig { seed, trials, tol } = *config;
    let mut results = check_weil(corpus, trials, seed, tol)?;
    let (module, module_runs) = check_module(corpus, trials, seed, tol)?;
    results.extend(module);
    results.extend(check_norm_identity(corpus, trials, seed, tol)?);
    results.extend(check_trivial_character(corpus, trials, seed, tol)?);
    results.extend(check_semidirect(corpus, trials, seed, tol)?);
    results.extend(check_fast_paths(corpus, trials, seed, tol)?);
    results.extend(check_characters(corpus, tol)?);
    let passed = results.iter().all(|c| c.passed) && module_runs.iter().all(|r| r.report.passed);
    Ok(SuiteReport { seed, trials, corpus: corpus.names(), checks: results, module_runs, passed })
}
