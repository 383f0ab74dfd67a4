use frankmin::field3d::{
    discrete_energy, embed_profile, random_perturbation, relax, BoundaryCondition, Dims, DirectorGrid, RelaxOptions,
};
use frankmin::profile1d::minimize_1d;
use frankmin::stability::{gamma_frustrated, l2_norm_sq, splitting_residual, threshold_frustrated};
use frankmin::{Chirality, DomainSpec, ElasticConstants};

#[test]
fn perturbed_minimizer_relaxes_back_below_threshold() {
    let k = ElasticConstants::one_constant();
    let t = Chirality::new(0.5).unwrap();
    assert!(t.t() < threshold_frustrated());
    let dims = Dims::new(8, 8, 17).unwrap();
    let profile = minimize_1d(&k, t, 4097).unwrap();
    let nstar = embed_profile(&profile, dims, DomainSpec::default()).unwrap();
    assert_eq!(nstar.bc(), BoundaryCondition::Frustrated);

    let start = random_perturbation(&nstar, 0.3, 7);
    let e_star = discrete_energy(&nstar, &k, t);
    assert!(discrete_energy(&start, &k, t) > e_star);

    let (relaxed, report) = relax(&start, &k, t, &RelaxOptions::default()).unwrap();
    assert!(report.converged, "{report:?}");
    assert!((report.final_energy() / e_star - 1.0).abs() < 1e-4);
    assert!(l2_norm_sq(&relaxed.difference(&nstar).unwrap()) < 1e-3);

    // far from n*, the splitting identity and coercivity still hold
    let v = start.difference(&nstar).unwrap();
    let gap = discrete_energy(&start, &k, t) - e_star;
    assert!(gap >= gamma_frustrated(t) * l2_norm_sq(&v) - splitting_residual(&start, &nstar, t).unwrap());

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("relaxed.ofgrid");
    relaxed.save(&path).unwrap();
    let back = DirectorGrid::load(&path).unwrap();
    assert_eq!(back.values(), relaxed.values());
}
