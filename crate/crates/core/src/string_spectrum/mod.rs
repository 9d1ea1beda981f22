//! Dirichlet eigenvalue counting for the one-dimensional p-Laplacian on
//! fractal strings.
//!
//! On an interval of length `T` the eigenvalues are `π_p^p k^p / T^p`, so
//! for a string with lengths `l_j`
//! `N(λ) = Σ_j ⌊l_j λ^{1/p} / π_p⌋`.

mod asymptotic;
mod counting;
mod fractal_string;
mod oscillating;
mod pi_p;

pub use asymptotic::{asymptotic_count, eigenvalue_growth, zeta_cached};
pub use counting::{count_hyperbola, count_naive, count_with, eigenvalue_by_rank, Algorithm, CountBreakdown};
pub use fractal_string::{FractalString, TailLaw, TailMode};
pub use oscillating::{oscillating_count, OscillatingCount};
pub use pi_p::{interval_eigenvalue, pi_p};
