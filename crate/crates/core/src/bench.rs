//! Wall-clock comparison of the generic module action against the
//! Weyl-Heisenberg fast paths.

use std::hint::black_box;
use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::convolution::{convolve, module_action};
use crate::covariant::CovariantFunction;
use crate::error::{Error, Result};
use crate::function::GroupFunction;
use crate::group::{MeasureTriple, QuotientGroup};
use crate::semidirect::weyl_heisenberg_finite;

/// Fast and generic outputs must agree to this before anything is timed.
pub const AGREEMENT_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    /// `"center"` (N the centre, `chi_n`) or `"full"` (N = K, `chi_{y,n}`).
    pub kernel: String,
    pub character: String,
    /// Nanoseconds per call of the generic section-wise module action.
    pub generic_ns: f64,
    /// Nanoseconds per call of the full-group convolution `f * psi`
    /// over every element, the textbook `O(|G|^2)` evaluation.
    pub full_convolution_ns: f64,
    pub fast_ns: f64,
    /// `generic_ns / fast_ns`.
    pub speedup: f64,
    /// `full_convolution_ns / fast_ns`.
    pub speedup_vs_full_convolution: f64,
    pub max_disagreement: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub m: usize,
    pub r: usize,
    pub order: usize,
    pub repetitions: usize,
    pub seed: u64,
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn table(&self) -> String {
        let mut out = format!(
            "W(Z{},Z{}) order {} repetitions {}\n{:<8} {:<10} {:>12} {:>12} {:>12} {:>9} {:>12}\n",
            self.m,
            self.r,
            self.order,
            self.repetitions,
            "kernel",
            "character",
            "generic_ns",
            "full_conv_ns",
            "fast_ns",
            "speedup",
            "vs_full_conv"
        );
        for row in &self.rows {
            out.push_str(&format!(
                "{:<8} {:<10} {:>12.1} {:>12.1} {:>12.1} {:>9.2} {:>12.2}\n",
                row.kernel,
                row.character,
                row.generic_ns,
                row.full_convolution_ns,
                row.fast_ns,
                row.speedup,
                row.speedup_vs_full_convolution
            ));
        }
        out
    }
}

/// Mean nanoseconds per call over `reps` calls, taken as the best of up to
/// five equal batches so that scheduler noise only ever inflates a batch.
fn mean_ns<T>(reps: usize, mut call: impl FnMut() -> Result<T>) -> Result<f64> {
    // One untimed call warms caches and surfaces errors early.
    black_box(call()?);
    let batches = reps.clamp(1, 5);
    let mut best = f64::INFINITY;
    for b in 0..batches {
        let calls = reps / batches + usize::from(b < reps % batches);
        let start = Instant::now();
        for _ in 0..calls {
            black_box(call()?);
        }
        best = best.min(start.elapsed().as_nanos() as f64 / calls as f64);
    }
    Ok(best)
}

/// Times both Weyl-Heisenberg fast paths against the generic kernels on
/// `W(Z_M, Z_R)` with one random input pair each. `reps = 0` gives an
/// empty table.
pub fn run_bench(m: usize, r: usize, reps: usize, seed: u64) -> Result<BenchReport> {
    let wh = weyl_heisenberg_finite(m, r)?;
    let g = wh.product().clone();
    let mut report = BenchReport { m, r, order: g.order(), repetitions: reps, seed, rows: Vec::new() };
    if reps == 0 {
        return Ok(report);
    }
    let measure = MeasureTriple::counting();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = (r > 1) as i64;
    let y = (m > 1) as i64;

    let qc = Arc::new(QuotientGroup::new(&wh.center())?);
    let qk = Arc::new(QuotientGroup::new(&wh.k_normal())?);
    let cases = [("center", format!("n={n}"), wh.chi_n(n), qc), ("full", format!("y={y},n={n}"), wh.chi_yn(y, n), qk)];
    for (kernel, label, chi, quotient) in cases {
        let f = GroupFunction::random(g.clone(), &mut rng);
        let psi = CovariantFunction::random(chi, quotient, &mut rng)?;
        let full_psi = psi.to_full();
        let fast = |f: &GroupFunction, psi: &CovariantFunction| match kernel {
            "center" => wh.conv_fast_center(f, psi, n, &measure),
            _ => wh.conv_fast_full(f, psi, y, n, &measure),
        };

        let generic_out = module_action(&f, &psi, &measure)?;
        let fast_out = fast(&f, &psi)?;
        let full_out = convolve(&f, &full_psi, &measure)?;
        let disagreement = fast_out.max_abs_diff(&generic_out).max(fast_out.to_full().max_abs_diff(&full_out));
        if disagreement.is_nan() || disagreement > AGREEMENT_TOL {
            return Err(Error::Validation(format!(
                "{kernel} fast path disagrees with the generic kernel by {disagreement:e}"
            )));
        }

        let generic_ns = mean_ns(reps, || module_action(&f, &psi, &measure))?;
        let full_convolution_ns = mean_ns(reps, || convolve(&f, &full_psi, &measure))?;
        let fast_ns = mean_ns(reps, || fast(&f, &psi))?;
        report.rows.push(BenchRow {
            kernel: kernel.to_string(),
            character: label,
            generic_ns,
            full_convolution_ns,
            fast_ns,
            speedup: generic_ns / fast_ns,
            speedup_vs_full_convolution: full_convolution_ns / fast_ns,
            max_disagreement: disagreement,
        });
    }
    Ok(report)
}
