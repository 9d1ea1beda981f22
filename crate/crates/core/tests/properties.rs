use std::f64::consts::PI;

use proptest::prelude::*;

use fracspec::horn::{dirichlet_count_bound, mixed_count_bound, rectangle_count_dirichlet, rectangle_count_mixed};
use fracspec::minkowski::tubular_measure;
use fracspec::string_spectrum::{count_hyperbola, count_naive, interval_eigenvalue, pi_p, FractalString};

fn config() -> ProptestConfig {
    ProptestConfig { cases: 64, ..ProptestConfig::default() }
}

/// λ with `λ^{1/p}/π_p = x`.
fn lambda_for(x: f64, p: f64) -> f64 {
    (x * pi_p(p).unwrap()).powf(p)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn hyperbola_matches_naive(d in 0.3f64..3.0, p in 1.2f64..4.0, scale in 0.2f64..5.0, u in 0.0f64..1.0) {
        let s = FractalString::power_law(d, scale).unwrap();
        // Cutoff near (x·scale)^d, kept below 10^6; x stays where floors are exact.
        let lambda = lambda_for(10f64.powf((u * 6.0 / d).min(15.0)) / scale, p);
        let a = count_naive(&s, p, lambda).unwrap();
        let b = count_hyperbola(&s, p, lambda).unwrap();
        prop_assert_eq!(a.exact, b.exact);
        prop_assert_eq!(a.cutoff_j, b.cutoff_j);
    }

    #[test]
    fn count_is_monotone(d in 0.3f64..3.0, p in 1.2f64..4.0, u in 0.0f64..1.0, bump in 1.0f64..1.5) {
        let s = FractalString::power_law(d, 1.0).unwrap();
        let lambda = lambda_for(10f64.powf((u * 9.0 / d).min(15.0)), p);
        let lo = count_hyperbola(&s, p, lambda).unwrap().exact.unwrap();
        let hi = count_hyperbola(&s, p, lambda * bump).unwrap().exact.unwrap();
        prop_assert!(lo <= hi);
    }

    /// The count of a finite string is the number of interval eigenvalues at or below λ.
    #[test]
    fn finite_count_enumerates_interval_spectra(
        lengths in prop::collection::vec(0.01f64..1.0, 1..8),
        p in 1.2f64..4.0,
        x in 0.5f64..200.0,
    ) {
        let mut lengths = lengths;
        lengths.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let s = FractalString::finite(lengths.clone()).unwrap();
        let lambda = lambda_for(x, p);
        let mut enumerated = 0u64;
        for &l in &lengths {
            let mut k = 1;
            while interval_eigenvalue(l, p, k).unwrap() <= lambda {
                enumerated += 1;
                k += 1;
            }
        }
        prop_assert_eq!(count_naive(&s, p, lambda).unwrap().exact.unwrap(), enumerated);
    }

    /// Scaling the string by `c` is the same as scaling λ by `c^p`.
    #[test]
    fn scaling_law(d in 0.3f64..3.0, p in 1.2f64..4.0, c in 0.25f64..4.0, u in 0.0f64..1.0) {
        let base = FractalString::power_law(d, 1.0).unwrap();
        let scaled = FractalString::power_law(d, c).unwrap();
        let lambda = lambda_for(10f64.powf((u * 9.0 / d).min(14.0)) / c, p);
        let a = count_hyperbola(&scaled, p, lambda).unwrap().exact.unwrap();
        let b = count_hyperbola(&base, p, lambda * c.powf(p)).unwrap().exact.unwrap();
        // Both sides agree unless a term sits within rounding of an integer.
        prop_assert!(a.abs_diff(b) <= 1, "{a} vs {b}");
    }

    #[test]
    fn mixed_minus_dirichlet_is_column_count(hw in 0.05f64..3.0, lambda in 1.0f64..1e5) {
        let columns = (1u64..).take_while(|&k| (k as f64 * PI / (2.0 * hw)).powi(2) <= lambda).count() as u64;
        let mixed = rectangle_count_mixed(hw, lambda);
        let dirichlet = rectangle_count_dirichlet(hw, lambda);
        prop_assert_eq!(mixed - dirichlet, columns);
        prop_assert!(mixed as f64 <= mixed_count_bound(hw, lambda));
        prop_assert!(dirichlet as f64 >= dirichlet_count_bound(hw, lambda));
    }

    #[test]
    fn tubular_measure_is_monotone(d in 0.1f64..0.95, e1 in 1e-6f64..0.5, e2 in 1e-6f64..0.5) {
        let s = FractalString::power_law(d, 1.0).unwrap();
        let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        let v_lo = tubular_measure(&s, lo).unwrap();
        let v_hi = tubular_measure(&s, hi).unwrap();
        prop_assert!(v_lo <= v_hi * (1.0 + 1e-12));
        prop_assert!(v_hi <= s.measure() * (1.0 + 1e-12));
    }
}
