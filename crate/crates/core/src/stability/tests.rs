use std::f64::consts::PI;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::field3d::{embed_profile, great_circle, random_perturbation, smooth_periodic_sample, BoundaryCondition, Dims};
use crate::model::{Mat3, Vec3};
use crate::profile1d::minimize_1d;
use crate::DomainSpec;

fn chi(t: f64) -> Chirality {
    Chirality::new(t).unwrap()
}

fn dims(nx: usize, ny: usize, nz: usize) -> Dims {
    Dims::new(nx, ny, nz).unwrap()
}

fn dom() -> DomainSpec {
    DomainSpec::default()
}

fn one() -> ElasticConstants {
    ElasticConstants::one_constant()
}

/// Smooth field vanishing on the plates.
fn smooth_difference(seed: u64, d: Dims, bc: BoundaryCondition) -> VectorField {
    smooth_periodic_sample(seed, d, dom(), bc).difference(&great_circle(d, dom(), bc)).unwrap()
}

/// Nodal noise in `[-1, 1]³`, zero on the plates.
fn noise(seed: u64, d: Dims) -> VectorField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let slab = d.slab();
    let values = (0..d.len())
        .map(|p| {
            let v: Vec3 = [(); 3].map(|_| rng.gen_range(-1.0..1.0));
            if p < slab || p >= d.len() - slab {
                [0.0; 3]
            } else {
                v
            }
        })
        .collect();
    VectorField::new(d, dom(), values).unwrap()
}

#[test]
fn closed_forms_at_zero() {
    let g0 = gamma_frustrated(chi(0.0));
    assert!((g0 - PI * PI * (0.75 - 1.0 / (2.0 * SQRT_2))).abs() < 1e-14);
    assert!((g0 - 3.913).abs() < 1e-3);
    assert!((gamma_homeotropic(chi(0.0)) - 6.380172).abs() < 1e-6);
    assert!((frustrated_quadratic_coefficient() - 6.6569).abs() < 1e-4);
    let t = chi(0.3);
    let drop = gamma_frustrated(chi(0.0)) - gamma_frustrated(t);
    assert!((drop - frustrated_quadratic_coefficient() * 0.09).abs() < 1e-14);
}

#[test]
fn thresholds_bracket_published_values() {
    assert!(gamma_frustrated(chi(0.766)) > 0.0);
    assert!(gamma_frustrated(chi(0.767)) < 0.0);
    assert!(gamma_homeotropic(chi(1.061)) > 0.0);
    assert!(gamma_homeotropic(chi(1.063)) < 0.0);
    assert!((threshold_frustrated() - 0.7667).abs() < 1e-4);
    assert!((threshold_homeotropic() - 1.0620).abs() < 1e-4);
}

#[test]
fn constants_vanish_at_their_roots() {
    let c = StabilityConstants::at(chi(0.2));
    assert_eq!(c.gamma_t, gamma_frustrated(chi(0.2)));
    assert!(gamma_frustrated(chi(c.threshold_frustrated)).abs() < 1e-12);
    assert!(gamma_homeotropic(chi(c.threshold_homeotropic)).abs() < 1e-12);
}

#[test]
fn optimal_cauchy_weight() {
    assert!((optimal_cauchy_eps(chi(1.0)) - 4.0967).abs() < 1e-4);
    assert_eq!(optimal_cauchy_eps(chi(0.0)), 0.0);
    // the weight ε = 4t used in the constants is one member of the family
    assert!((frustrated_threshold_for_slope(4.0) - threshold_frustrated()).abs() < 1e-14);
    let (best, _) = (1..=20000)
        .map(|i| i as f64 * 1e-3)
        .map(|c| (c, frustrated_threshold_for_slope(c)))
        .fold((0.0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
    assert!((best - optimal_cauchy_slope()).abs() < 2e-3, "{best}");
    let peak = frustrated_threshold_for_slope(optimal_cauchy_slope());
    assert!(peak > threshold_frustrated());
    assert!(peak >= frustrated_threshold_for_slope(best));
}

#[test]
fn lambda_field_at_zero_chirality() {
    let p = minimize_1d(&one(), chi(0.0), 1025).unwrap();
    for l in lambda_field(&p, chi(0.0), 33).unwrap() {
        assert!((l - PI * PI / 4.0).abs() < 1e-8);
    }
}

#[test]
fn lambda_window_is_attained_at_the_plates() {
    let t = chi(1.5);
    let p = minimize_1d(&one(), t, 2049).unwrap();
    let delta = delta_t(&p, &one()).unwrap();
    let l = lambda_field(&p, t, 65).unwrap();
    let t2 = 2.25;
    for w in &l {
        assert!(*w >= delta - t2 - 1e-12 && *w <= delta + t2 + 1e-12);
    }
    assert!((l[0] - (delta - t2)).abs() < 1e-12);
    assert!((l[64] - (delta + t2)).abs() < 1e-9);
    // monotone because θ is
    assert!(l.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn lambda_matches_stencil_evaluation() {
    let t = chi(1.0);
    let p = minimize_1d(&one(), t, 4097).unwrap();
    let err: Vec<f64> = [33, 65, 129]
        .iter()
        .map(|&nz| {
            let d = dims(4, 4, nz);
            let g = embed_profile(&p, d, dom()).unwrap();
            let nodal = lambda_discrete(&g, t);
            let levels = lambda_field(&p, t, nz).unwrap();
            (d.slab()..d.len() - d.slab())
                .map(|q| (nodal[q] - levels[q / d.slab()]).abs())
                .fold(0.0, f64::max)
        })
        .collect();
    for w in err.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((1.8..2.3).contains(&order), "{err:?}");
    }
}

#[test]
fn h_of_zero_is_zero() {
    let d = dims(4, 4, 9);
    let v = VectorField::zeros(d, dom());
    let l = vec![3.0; d.len()];
    assert_eq!(h_functional(&v, Lambda::Nodes(&l), chi(0.7)).unwrap(), 0.0);
    assert_eq!(h_functional(&v, Lambda::Zero, chi(0.7)).unwrap(), 0.0);
}

#[test]
fn h_rejects_fields_on_the_plates() {
    let d = dims(4, 4, 9);
    let mut values = noise(1, d).into_values();
    values[3] = [1e-9, 0.0, 0.0];
    let v = VectorField::new(d, dom(), values).unwrap();
    assert!(h_functional(&v, Lambda::Zero, chi(0.5)).is_err());
    let v = noise(1, d);
    assert!(h_functional(&v, Lambda::Levels(&[1.0; 8]), chi(0.5)).is_err());
    assert!(h_functional(&v, Lambda::Nodes(&[1.0; 9]), chi(0.5)).is_err());
    assert!(h_functional(&v, Lambda::Levels(&[1.0; 9]), chi(0.5)).is_ok());
}

#[test]
fn h_is_quadratic_and_levels_match_nodes() {
    let d = dims(6, 5, 11);
    let v = smooth_difference(3, d, BoundaryCondition::Frustrated);
    let t = chi(0.8);
    let levels: Vec<f64> = (0..d.nz).map(|k| 1.0 + k as f64 * 0.1).collect();
    let nodes: Vec<f64> = (0..d.len()).map(|p| levels[p / d.slab()]).collect();
    let a = h_functional(&v, Lambda::Levels(&levels), t).unwrap();
    let b = h_functional(&v, Lambda::Nodes(&nodes), t).unwrap();
    assert!((a - b).abs() < 1e-14 * a.abs().max(1.0));
    let doubled = VectorField::new(d, dom(), v.values().iter().map(|x| x.map(|c| 2.0 * c)).collect()).unwrap();
    let c = h_functional(&doubled, Lambda::Levels(&levels), t).unwrap();
    assert!((c - 4.0 * a).abs() < 1e-12 * c.abs());
    let split = dirichlet_integral(&v);
    assert!((h_functional(&v, Lambda::Zero, chi(0.0)).unwrap() - split).abs() < 1e-12 * split);
}

/// `H(v) - λ₀ ∫|v|²` with constant `λ₀ = π²/4 + t²` against the lower bound
/// `(1 - 1/(2√2)) ∫|∇v|² - (π²/4 + t² + 4√2 t²) ∫|v|²`.
fn bound_chain_gap(v: &VectorField, t: f64) -> (f64, f64) {
    let lambda0 = PI * PI / 4.0 + t * t;
    let levels = vec![lambda0; v.dims().nz];
    let lhs = h_functional(v, Lambda::Levels(&levels), chi(t)).unwrap();
    let rhs = dirichlet_share() * dirichlet_integral(v) - (lambda0 + 4.0 * SQRT_2 * t * t) * l2_norm_sq(v);
    (lhs, rhs)
}

#[test]
fn bound_chain_on_smooth_and_rough_fields() {
    let d = dims(8, 6, 17);
    for seed in 0..5 {
        for t in [0.1, 0.5, 0.766, 2.0] {
            for v in [smooth_difference(seed, d, BoundaryCondition::Frustrated), noise(seed, d)] {
                let (lhs, rhs) = bound_chain_gap(&v, t);
                assert!(lhs >= rhs - 1e-12 * lhs.abs(), "seed {seed}, t {t}: {lhs} < {rhs}");
            }
        }
    }
}

#[test]
fn homeotropic_excess_dominates_gamma() {
    let d = dims(16, 16, 33);
    for t in [0.2, 0.5] {
        let t = chi(t);
        let e3 = crate::field3d::DirectorGrid::uniform_e3(d, dom());
        for seed in 0..5 {
            let n = smooth_periodic_sample(seed, d, dom(), BoundaryCondition::Homeotropic);
            let v = n.difference(&e3).unwrap();
            let h = h_functional(&v, Lambda::Zero, t).unwrap();
            assert!(h >= gamma_homeotropic(t) * l2_norm_sq(&v), "seed {seed}");
        }
    }
}

#[test]
fn frustrated_excess_dominates_gamma() {
    let t = chi(0.5);
    let d = dims(16, 16, 33);
    let p = minimize_1d(&one(), t, 2049).unwrap();
    let nstar = embed_profile(&p, d, dom()).unwrap();
    let lambda = lambda_discrete(&nstar, t);
    for seed in 0..5 {
        let n = random_perturbation(&nstar, 0.5, seed);
        let v = n.difference(&nstar).unwrap();
        let h = h_functional(&v, Lambda::Nodes(&lambda), t).unwrap();
        assert!(h >= gamma_frustrated(t) * l2_norm_sq(&v), "seed {seed}");
    }
}

#[test]
fn splitting_is_exact_at_the_reference() {
    let t = chi(0.5);
    let d = dims(8, 8, 17);
    let p = minimize_1d(&one(), t, 2049).unwrap();
    let nstar = embed_profile(&p, d, dom()).unwrap();
    assert_eq!(splitting_residual(&nstar, &nstar, t).unwrap(), 0.0);
    let e3 = crate::field3d::DirectorGrid::uniform_e3(d, dom());
    assert_eq!(splitting_residual(&e3, &e3, t).unwrap(), 0.0);
}

#[test]
fn splitting_residual_is_second_order_for_frustrated_anchoring() {
    let t = chi(0.5);
    let p = minimize_1d(&one(), t, 4097).unwrap();
    let r: Vec<f64> = [17, 33, 65]
        .iter()
        .map(|&nz| {
            let d = dims(8, 8, nz);
            let nstar = embed_profile(&p, d, dom()).unwrap();
            let n = smooth_periodic_sample(2, d, dom(), BoundaryCondition::Frustrated);
            splitting_residual(&n, &nstar, t).unwrap()
        })
        .collect();
    for w in r.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((1.8..2.2).contains(&order), "{r:?}");
    }
}

#[test]
fn splitting_identity_is_exact_for_homeotropic_anchoring() {
    // the lateral sums of the twist term telescope, so the identity holds to
    // rounding on every grid
    let t = chi(0.8);
    for nz in [9, 17, 33] {
        let d = dims(8, 8, nz);
        let e3 = crate::field3d::DirectorGrid::uniform_e3(d, dom());
        let n = smooth_periodic_sample(4, d, dom(), BoundaryCondition::Homeotropic);
        assert!(splitting_residual(&n, &e3, t).unwrap() < 1e-14);
    }
}

fn curl_of(g: &Mat3) -> Vec3 {
    [g[2][1] - g[1][2], g[0][2] - g[2][0], g[1][0] - g[0][1]]
}

proptest! {
    #[test]
    fn curl_is_bounded_by_gradient(g in prop::array::uniform3(prop::array::uniform3(-10.0f64..10.0))) {
        let c = curl(&g);
        prop_assert_eq!(c, curl_of(&g));
        prop_assert!(dot(&c, &c) <= 2.0 * frobenius_sq(&g) * (1.0 + 1e-12));
    }

    #[test]
    fn homeotropic_gamma_dominates_frustrated(t in 0.0f64..10.0) {
        prop_assert!(gamma_homeotropic(chi(t)) > gamma_frustrated(chi(t)));
    }

    #[test]
    fn slope_family_never_beats_the_optimum(c in 0.01f64..50.0) {
        prop_assert!(frustrated_threshold_for_slope(c) <= frustrated_threshold_for_slope(optimal_cauchy_slope()) + 1e-15);
    }
}
