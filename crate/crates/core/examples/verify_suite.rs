//! The seeded verification suite over the built-in corpus.

use std::time::Instant;

use covmod::verify::{run_suite, Corpus, SuiteConfig};

fn main() -> covmod::Result<()> {
    let corpus = Corpus::builtin()?;
    println!("corpus: {}", corpus.names().join(", "));
    let start = Instant::now();
    let report = run_suite(&corpus, &SuiteConfig { seed: 42, trials: 50, tol: None })?;
    print!("{}", report.summary());
    println!("passed: {} in {:.2?}", report.passed, start.elapsed());
    Ok(())
}
