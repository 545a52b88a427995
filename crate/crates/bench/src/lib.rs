//! Shared inputs for the criterion benchmarks.

use efd_core::testbed::{standard_cases, BenchCase};

/// Examples 1 to 4 and the synthetic ECG trace, with their standard segment counts.
pub fn all_cases() -> Vec<BenchCase> {
    standard_cases(&[1, 2, 3, 4], None).expect("built-in examples generate")
}
