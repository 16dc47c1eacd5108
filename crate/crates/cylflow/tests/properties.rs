//! Property tests of the norm layer and the cutoff profile.

use proptest::prelude::*;
use std::sync::Arc;

use cylflow::domain::field::{FaceProfile, ScalarField};
use cylflow::domain::grid::{build_grid, CylinderSpec, StaggeredGrid};
use cylflow::hopf::{eta, eta_prime, HopfParams};
use cylflow::norms::{gagliardo_norm, lp_norm, v02_norm, weighted_norm};

fn grid() -> Arc<StaggeredGrid> {
    build_grid(CylinderSpec {
        a: 0.5,
        lx: 1.0,
        ly: 1.0,
        nx: 5,
        ny: 4,
        nz: 6,
        nu: 1.0,
        gamma: 1.0,
    })
    .unwrap()
}

fn scalar_field(values: Vec<f64>) -> ScalarField {
    let g = grid();
    let n = g.n_cells();
    let data = (0..n).map(|i| values[i % values.len()]).collect();
    ScalarField { grid: g, data }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lp_norm_is_homogeneous(
        values in prop::collection::vec(-10.0f64..10.0, 8..40),
        c in -50.0f64..50.0,
        p in 1.0f64..6.0,
    ) {
        let f = scalar_field(values);
        let mut cf = f.clone();
        cf.scale(c);
        let n_f = lp_norm(&f, p).unwrap();
        let n_cf = lp_norm(&cf, p).unwrap();
        prop_assert!((n_cf - c.abs() * n_f).abs() <= 1e-12 * (1.0 + n_cf.abs()));
    }

    #[test]
    fn lp_norm_satisfies_triangle_inequality(
        a in prop::collection::vec(-5.0f64..5.0, 8..40),
        b in prop::collection::vec(-5.0f64..5.0, 8..40),
        p in 1.0f64..6.0,
    ) {
        let fa = scalar_field(a);
        let fb = scalar_field(b);
        let sum = ScalarField {
            grid: fa.grid.clone(),
            data: fa.data.iter().zip(&fb.data).map(|(x, y)| x + y).collect(),
        };
        let n_sum = lp_norm(&sum, p).unwrap();
        let n_a = lp_norm(&fa, p).unwrap();
        let n_b = lp_norm(&fb, p).unwrap();
        prop_assert!(n_sum <= n_a + n_b + 1e-10);
    }

    #[test]
    fn weighted_norm_is_homogeneous_and_reduces_at_zero_weight(
        values in prop::collection::vec(-3.0f64..3.0, 8..40),
        c in -10.0f64..10.0,
        mu in 0.0f64..1.5,
    ) {
        let f = scalar_field(values);
        let mut cf = f.clone();
        cf.scale(c);
        let n_f = weighted_norm(&f, 0, 3.0, mu).unwrap();
        let n_cf = weighted_norm(&cf, 0, 3.0, mu).unwrap();
        prop_assert!((n_cf - c.abs() * n_f).abs() <= 1e-12 * (1.0 + n_cf.abs()));

        let plain = lp_norm(&f, 3.0).unwrap();
        let unweighted = weighted_norm(&f, 0, 3.0, 0.0).unwrap();
        prop_assert!((plain - unweighted).abs() <= 1e-12 * (1.0 + plain));
    }

    #[test]
    fn gagliardo_norm_is_homogeneous_and_triangular(
        values in prop::collection::vec(-2.0f64..2.0, 20),
        c in -5.0f64..5.0,
    ) {
        let g = grid();
        let n = g.spec.nx * g.spec.ny;
        let data: Vec<f64> = (0..n).map(|i| values[i % values.len()]).collect();
        let prof = FaceProfile { nx: g.spec.nx, ny: g.spec.ny, data };
        let mut cprof = prof.clone();
        cprof.scale(c);
        let n_f = gagliardo_norm(&prof, &g, 0.5, 2.0).unwrap();
        let n_cf = gagliardo_norm(&cprof, &g, 0.5, 2.0).unwrap();
        prop_assert!((n_cf - c.abs() * n_f).abs() <= 1e-10 * (1.0 + n_cf.abs()));

        let mut shifted = prof.clone();
        for v in &mut shifted.data {
            *v = 1.5 - *v;
        }
        let sum = FaceProfile {
            nx: prof.nx,
            ny: prof.ny,
            data: prof.data.iter().zip(&shifted.data).map(|(a, b)| a + b).collect(),
        };
        let n_s = gagliardo_norm(&shifted, &g, 0.5, 2.0).unwrap();
        let n_sum = gagliardo_norm(&sum, &g, 0.5, 2.0).unwrap();
        prop_assert!(n_sum <= n_f + n_s + 1e-10);
    }

    #[test]
    fn v02_norm_is_homogeneous(
        seed in 1u64..1_000_000,
        c in 0.01f64..20.0,
    ) {
        let g = grid();
        let mut state = seed;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state as f64 / u64::MAX as f64) - 0.5
        };
        let mut f = cylflow::domain::field::VectorField::zeros(&g);
        for v in f.u.iter_mut().chain(&mut f.v).chain(&mut f.w) {
            *v = next();
        }
        let mut cf = f.clone();
        cf.scale(c);
        let history = vec![f.clone(), f.clone(), f];
        let history_c = vec![cf.clone(), cf.clone(), cf];
        let n = v02_norm(&history, 0.1).unwrap();
        let n_c = v02_norm(&history_c, 0.1).unwrap();
        prop_assert!((n_c - c * n).abs() <= 1e-10 * (1.0 + n_c));
    }

    #[test]
    fn cutoff_stays_in_unit_band_and_respects_derivative_bound(
        eps in 0.01f64..3.0,
        rho in 0.01f64..0.25,
        sigma in 0.0f64..1.0,
    ) {
        let params = HopfParams::new(eps, rho);
        let e = eta(sigma, &params).unwrap();
        prop_assert!((0.0..=1.0).contains(&e));
        if sigma > 0.0 {
            let ep = eta_prime(sigma, &params).unwrap();
            prop_assert!(ep <= 0.0);
            prop_assert!(ep.abs() <= params.eps / sigma + 1e-15);
        }
        // Monotone non-increasing on a local pair.
        let e2 = eta(sigma * 1.01 + 1e-9, &params).unwrap();
        prop_assert!(e2 <= e + 1e-12);
    }
}
