use super::*;
use std::f64::consts::{FRAC_PI_2, PI};

fn chi(t: f64) -> Chirality {
    Chirality::new(t).unwrap()
}

fn one() -> ElasticConstants {
    ElasticConstants::one_constant()
}

fn k123() -> ElasticConstants {
    ElasticConstants::new(1.0, 2.0, 3.0, 0.0).unwrap()
}

// Reference values from an independent 30-digit computation: tanh-sinh
// quadrature of η and bisection in ln(C - K2 t²); energies via the change
// of variables dz = dθ/θ'.
const EXCESS_T1: f64 = 2.0052272558872523576;
const EXCESS_T2_5: f64 = 0.62614388934487244194;
const EXCESS_T5: f64 = 0.018133651989321346719;
const EXCESS_T10: f64 = 3.2978453064913961358e-6;
const EXCESS_T20: f64 = 2.7189467233866152013e-14;
const EXCESS_K123_T1: f64 = 3.6174629905225879245;
const ENERGY_T2_5: f64 = 5.1289826793416833487;
const ENERGY_K123_T1: f64 = 5.9777585817353892696;

/// Composite Simpson on `n` panels, independent of the adaptive routine.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

#[test]
fn eta_one_constant_nematic_closed_form() {
    let v = eta(PI * PI / 4.0, &one(), chi(0.0)).unwrap();
    assert!((v - 1.0).abs() < 1e-10);
    let v = eta(4.0, &one(), chi(0.0)).unwrap();
    assert!((v - FRAC_PI_2 / 2.0).abs() < 1e-10);
}

#[test]
fn eta_is_strictly_decreasing() {
    let (k, t) = (one(), chi(1.0));
    assert!(eta(2.5, &k, t).unwrap() > eta(3.0, &k, t).unwrap());
    let cs = [1.0 + 1e-8, 1.001, 1.1, 2.0, 5.0, 50.0];
    let vals: Vec<f64> = cs.iter().map(|&c| eta(c, &k, t).unwrap()).collect();
    assert!(vals.windows(2).all(|w| w[0] > w[1]), "{vals:?}");
}

#[test]
fn eta_rejects_c_at_or_below_threshold() {
    assert!(matches!(eta(1.0, &one(), chi(1.0)), Err(Error::Domain(_))));
    assert!(eta(0.5, &k123(), chi(0.5)).is_err());
    assert!(eta(0.0, &one(), chi(0.0)).is_err());
}

#[test]
fn eta_blows_up_logarithmically_at_threshold() {
    // Near u = 0 the integrand behaves like sqrt(K1)/sqrt(ε + K3 t² u²), so
    // each factor 100 in ε adds sqrt(K1/K3) ln(10) / t.
    let rc = ReducedCoefficients::new(&one(), chi(1.0));
    let e = |eps: f64| eta_excess(eps, &rc);
    let (a, b, c) = (e(1e-2), e(1e-4), e(1e-6));
    assert!(a < b && b < c);
    let ln10 = 10f64.ln();
    assert!((b - a - ln10).abs() < 1e-2, "{}", b - a);
    assert!((c - b - ln10).abs() < 1e-3, "{}", c - b);
    // unbounded: keeps growing by the same increment far below 1e-6
    assert!((e(1e-12) - c - 3.0 * ln10).abs() < 1e-5);
    assert!(c > 6.0 * e(1.0));
    // one-constant closed form K(m)/sqrt(1 + ε) with m = 1/(1 + ε)
    assert!((e(1e-12) - 15.201804919080614272).abs() < 1e-9);
}

#[test]
fn nematic_constant_is_pi_squared_over_four() {
    let c = solve_first_integral_constant(&one(), chi(0.0), 1.0).unwrap();
    assert!((c.value() - PI * PI / 4.0).abs() < 1e-9);
}

#[test]
fn constants_match_reference_values() {
    for (t, reference) in [
        (1.0, EXCESS_T1),
        (2.5, EXCESS_T2_5),
        (5.0, EXCESS_T5),
        (10.0, EXCESS_T10),
        (20.0, EXCESS_T20),
    ] {
        let c = solve_first_integral_constant(&one(), chi(t), 1.0).unwrap();
        let rel = (c.excess() / reference - 1.0).abs();
        assert!(rel < 1e-8, "t = {t}: {} vs {reference} (rel {rel:e})", c.excess());
    }
    let c = solve_first_integral_constant(&k123(), chi(1.0), 1.0).unwrap();
    assert!((c.excess() / EXCESS_K123_T1 - 1.0).abs() < 1e-9);
}

#[test]
fn constant_t2_5_matches_simpson_bisection_oracle() {
    // D solves ∫_0^{π/2} du / sqrt(D - t² cos²u) = 1; composite Simpson with
    // 10^6 panels and plain bisection in D
    let t = 2.5f64;
    let eta_d = |d: f64| simpson(|u| 1.0 / (d - t * t * u.cos().powi(2)).sqrt(), 0.0, FRAC_PI_2, 1_000_000);
    let (mut lo, mut hi) = (t * t + 1e-3, t * t + 10.0);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if eta_d(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let oracle = 0.5 * (lo + hi);
    let c = solve_first_integral_constant(&one(), chi(t), 1.0).unwrap();
    assert!((c.value() - oracle).abs() < 1e-9, "{} vs {oracle}", c.value());
    assert!((oracle - (t * t + EXCESS_T2_5)).abs() < 1e-9);
}

#[test]
fn constant_grows_as_alpha_shrinks() {
    let (k, t) = (one(), chi(1.0));
    let half = solve_first_integral_constant(&k, t, 0.5).unwrap();
    let full = solve_first_integral_constant(&k, t, 1.0).unwrap();
    assert!(half.value() > full.value());
    let e = eta_excess(half.excess(), &ReducedCoefficients::new(&k, t));
    assert!((e - 0.5).abs() < 1e-10);
    assert!(solve_first_integral_constant(&k, t, 0.0).is_err());
    assert!(solve_first_integral_constant(&k, t, -1.0).is_err());
}

#[test]
fn nematic_profile_is_linear() {
    let c = solve_first_integral_constant(&one(), chi(0.0), 1.0).unwrap();
    let p = theta_profile(c, &one(), chi(0.0), 1001).unwrap();
    let err = p
        .z_nodes
        .iter()
        .zip(&p.theta)
        .map(|(z, th)| (th - FRAC_PI_2 * z).abs())
        .fold(0.0, f64::max);
    assert!(err < 1e-8, "{err:e}");
    assert_eq!(p.theta[0], 0.0);
    assert_eq!(*p.theta.last().unwrap(), FRAC_PI_2);
}

#[test]
fn inconsistent_constant_is_reported() {
    // C well above the solution overshoots π/2 at z = 1
    let c = FirstIntegral::from_value(4.0, &one(), chi(1.0)).unwrap();
    assert!(matches!(
        theta_profile(c, &one(), chi(1.0), 1001),
        Err(Error::NotConverged { .. })
    ));
}

#[test]
fn profile_shapes_bend_towards_the_top() {
    let k = one();
    let mid: Vec<f64> = [0.0, 2.5, 20.0]
        .iter()
        .map(|&t| {
            let p = minimize_1d(&k, chi(t), 1001).unwrap();
            assert!(p.theta.windows(2).all(|w| w[1] > w[0]));
            p.theta[500]
        })
        .collect();
    // t = 2.5 bends the linear profile slightly; t = 20 keeps θ small
    assert!(mid[1] < mid[0] && mid[0] - mid[1] < 0.3);
    assert!(mid[2] < 1e-3);
    // with a vanishing excess θ' = t sin θ, so tan(θ/2) = exp(-t(1 - z))
    let p = minimize_1d(&k, chi(20.0), 1001).unwrap();
    for (z, th) in p.z_nodes.iter().zip(&p.theta) {
        let layer = 2.0 * (-20.0 * (1.0 - z)).exp().atan();
        assert!((th - layer).abs() < 1e-6, "z = {z}");
    }
}

#[test]
fn phi_is_linear_for_one_constant() {
    let p = minimize_1d(&one(), chi(5.0), 1001).unwrap();
    assert!((p.phi.last().unwrap() - 5.0).abs() < 1e-8);
    let dev = p.z_nodes.iter().zip(&p.phi).map(|(z, ph)| (ph - 5.0 * z).abs()).fold(0.0, f64::max);
    assert!(dev < 1e-8);
    let p0 = minimize_1d(&k123(), chi(0.0), 101).unwrap();
    assert!(p0.phi.iter().all(|&v| v == 0.0));
}

#[test]
fn phi_rate_at_pole() {
    let k = ElasticConstants::new(1.0, 1.0, 2.0, 0.0).unwrap();
    let rc = ReducedCoefficients::new(&k, chi(1.0));
    assert!((rc.phi_rate(FRAC_PI_2) - 0.5).abs() < 1e-15);
}

#[test]
fn phi_is_nondecreasing_for_general_constants() {
    let p = minimize_1d(&k123(), chi(2.0), 501).unwrap();
    assert_eq!(p.phi[0], 0.0);
    assert!(p.phi.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn reduced_coefficient_bounds() {
    let k = k123();
    let rc = ReducedCoefficients::new(&k, chi(1.5));
    for i in 0..=200 {
        let th = -FRAC_PI_2 + PI * i as f64 / 200.0;
        assert!(rc.f(th) >= 1.0 - 1e-15);
        let g = rc.g(th);
        assert!((-1e-15..=rc.g_max() + 1e-12).contains(&g));
        assert!((rc.deficit(th) - (rc.g_max() - g)).abs() < 1e-12);
    }
    assert!((rc.g(0.0) - 2.0 * 1.5 * 1.5).abs() < 1e-14);
    assert!(rc.g(FRAC_PI_2).abs() < 1e-14);
}

#[test]
fn energies_match_reference_values() {
    let p = minimize_1d(&one(), chi(0.0), 1001).unwrap();
    assert!((p.energy_per_area - PI * PI / 4.0).abs() < 1e-9);
    let p = minimize_1d(&one(), chi(2.5), 2001).unwrap();
    assert!((p.energy_per_area / ENERGY_T2_5 - 1.0).abs() < 1e-6);
    let p = minimize_1d(&k123(), chi(1.0), 2001).unwrap();
    assert!((p.energy_per_area / ENERGY_K123_T1 - 1.0).abs() < 1e-6);
}

#[test]
fn restricted_minimum_decreases_over_alpha_grid() {
    for k in [one(), k123()] {
        for t in [0.5, 1.0, 2.0] {
            let v: Vec<f64> = [0.25, 0.5, 1.0, 2.0, 4.0]
                .iter()
                .map(|&a| restricted_minimum(a, &k, chi(t)).unwrap())
                .collect();
            assert!(v.windows(2).all(|w| w[0] > w[1]), "t = {t}: {v:?}");
        }
    }
}

#[test]
fn restricted_minimum_is_monotone_in_alpha() {
    let (k, t) = (one(), chi(1.0));
    assert!(restricted_minimum(0.5, &k, t).unwrap() > restricted_minimum(1.0, &k, t).unwrap());
    let full = minimize_1d(&k, t, RESTRICTED_NODES).unwrap();
    let r1 = restricted_minimum(1.0, &k, t).unwrap();
    assert!((r1 - full.energy_per_area).abs() < 1e-12);
    // linear profile on [0, α] at t = 0
    let r = restricted_minimum(0.5, &one(), chi(0.0)).unwrap();
    assert!((r - PI * PI / 2.0).abs() < 1e-8);
}

#[test]
fn first_integral_residual_diagnostics() {
    let c = solve_first_integral_constant(&one(), chi(0.0), 1.0).unwrap();
    let mut p = theta_profile(c, &one(), chi(0.0), 1001).unwrap();
    assert!(first_integral_residual(&p, &one(), chi(0.0)) < 1e-8);
    p.theta = p.z_nodes.iter().map(|z| FRAC_PI_2 * z).collect();
    p.first_integral_excess = PI * PI / 4.0;
    assert!(first_integral_residual(&p, &one(), chi(0.0)) < 1e-10);

    let p = minimize_1d(&one(), chi(5.0), 1001).unwrap();
    assert!(first_integral_residual(&p, &one(), chi(5.0)) < 1e-6);

    let mut bad = p.clone();
    bad.theta[400] += 0.01;
    assert!(first_integral_residual(&bad, &one(), chi(5.0)) > 1e-3);
}

#[test]
fn first_integral_residual_converges_under_refinement() {
    // bounded by a fixed multiple of h² on every grid
    for t in [2.5, 5.0] {
        let (k, t) = (one(), chi(t));
        for n in [126, 251, 501, 1001, 2001] {
            let h = 1.0 / (n - 1) as f64;
            let r = first_integral_residual(&minimize_1d(&k, t, n).unwrap(), &k, t);
            assert!(r < h * h, "n = {n}: {r:e}");
        }
    }
}

#[test]
fn sixth_order_derivative_is_exact_on_polynomials() {
    let h = 0.1;
    let v: Vec<f64> = (0..12).map(|i| (i as f64 * h).powi(6) - 2.0 * (i as f64 * h)).collect();
    let d = theta_derivative(&v, h);
    for (i, di) in d.iter().enumerate() {
        let x = i as f64 * h;
        assert!((di - (6.0 * x.powi(5) - 2.0)).abs() < 1e-9, "{i}: {di}");
    }
}

#[test]
fn one_constant_cross_check() {
    for t in [0.5, 2.5, 5.0] {
        let p = minimize_1d(&one(), chi(t), 1001).unwrap();
        let d = p.first_integral_constant;
        let delta = delta_t(&p, &one()).unwrap();
        assert!((d - (delta + t * t)).abs() < 1e-12 * d);
        let h = 1.0 / 1000.0;
        let dth = theta_derivative(&p.theta, h);
        for i in 1..1000 {
            let lhs = dth[i] * dth[i];
            let rhs = delta + t * t * p.theta[i].sin().powi(2);
            assert!((lhs - rhs).abs() < 1e-6, "t = {t}, node {i}");
        }
    }
}

#[test]
fn delta_t_window() {
    let p = minimize_1d(&one(), chi(0.0), 101).unwrap();
    assert!((delta_t(&p, &one()).unwrap() - PI * PI / 4.0).abs() < 1e-9);
    for t in [0.5, 20.0] {
        let p = minimize_1d(&one(), chi(t), 1001).unwrap();
        let d = delta_t(&p, &one()).unwrap();
        assert!(d > 0.0 && d <= PI * PI / 4.0);
    }
    let mut p = minimize_1d(&one(), chi(1.0), 101).unwrap();
    p.first_integral_excess = 3.0;
    assert!(delta_t(&p, &one()).is_err());
    assert!(delta_t(&p, &k123()).is_err());
}

#[test]
fn brute_force_recovers_linear_profile() {
    let p = brute_force_1d(&one(), chi(0.0), 201).unwrap();
    let err = p.z_nodes.iter().zip(&p.theta).map(|(z, th)| (th - FRAC_PI_2 * z).abs()).fold(0.0, f64::max);
    assert!(err < 1e-9);
    assert!((p.energy_per_area - PI * PI / 4.0).abs() < 1e-10);
}

#[test]
fn brute_force_agrees_with_first_integral_route() {
    for (k, t) in [(one(), 2.5), (k123(), 1.0)] {
        let exact = minimize_1d(&k, chi(t), 2001).unwrap();
        let brute = brute_force_1d(&k, chi(t), 2001).unwrap();
        let rel = (brute.energy_per_area / exact.energy_per_area - 1.0).abs();
        assert!(rel < 1e-4, "t = {t}: rel {rel:e}");
        let dev = exact.theta.iter().zip(&brute.theta).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(dev < 1e-4, "t = {t}: nodal {dev:e}");
    }
}

#[test]
fn csv_output_format() {
    let p = minimize_1d(&one(), chi(1.0), 5).unwrap();
    let mut buf = Vec::new();
    write_profile_csv(&p, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "z,theta,phi");
    assert_eq!(lines.len(), 6);
    let last: Vec<f64> = lines[5].split(',').map(|s| s.parse().unwrap()).collect();
    assert_eq!(last[1], FRAC_PI_2);
    assert!(lines[2].starts_with("2.5000000000000000e-1,"));
}
