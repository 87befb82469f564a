//! Inputs shared by the benchmarks.

use spectral_rumin::carnot::library::heisenberg;
use spectral_rumin::forms::build_polynomial_complex;
use spectral_rumin::FilteredComplex;

/// Truncated polynomial model of the Heisenberg group with coefficient
/// weight at most `d`.
pub fn polynomial_heisenberg(d: u32) -> FilteredComplex {
    build_polynomial_complex(&heisenberg(), d).complex
}
