use std::ffi::OsString;
use std::fs;
use std::io::BufWriter;
use std::path::Path;

use serde_json::json;

use frankmin::field3d::{
    discrete_energy, embed_profile, random_perturbation, relax, BoundaryCondition, Dims, DirectorGrid,
    RelaxOptions,
};
use frankmin::profile1d::{
    brute_force_1d, first_integral_residual, minimize_1d, write_profile_csv, EulerProfile, ProfileMetadata,
};
use frankmin::stability::{gamma_frustrated, gamma_homeotropic, threshold_frustrated, threshold_homeotropic};
use frankmin::verify::{self, Suite};
use frankmin::{Chirality, DomainSpec, ElasticConstants};

use crate::meta::{write_json, Metadata};
use crate::{
    Command, ConstantsArgs, EmbedArgs, Failure, GridArgs, Method, RelaxArgs, ReplayArgs, ScanArgs, Solve1dArgs,
    StabilityCommand, VerifyArgs, EXIT_OK, EXIT_VERIFY,
};

pub fn dispatch(command: Command, argv: Vec<String>) -> Result<u8, Failure> {
    match command {
        Command::Solve1d(a) => solve1d(&a, &argv),
        Command::Embed(a) => embed(&a, &argv),
        Command::Relax(a) => relax_cmd(&a, &argv),
        Command::Scan(a) | Command::Stability(StabilityCommand::Scan(a)) => scan(&a, &argv),
        Command::Verify(a) => verify_cmd(&a, &argv),
        Command::Replay(a) => replay(&a),
    }
}

fn constants(a: &ConstantsArgs) -> Result<ElasticConstants, Failure> {
    let Some(raw) = &a.k else {
        return Ok(ElasticConstants::one_constant());
    };
    let parts = raw
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<Vec<f64>, _>>()
        .map_err(|e| Failure::usage(format!("--k {raw:?}: {e}")))?;
    let [k1, k2, k3, k4] = parts[..] else {
        return Err(Failure::usage(format!("--k needs four values, got {}", parts.len())));
    };
    Ok(ElasticConstants::new(k1, k2, k3, k4)?)
}

fn domain_and_dims(g: &GridArgs) -> Result<(DomainSpec, Dims), Failure> {
    Ok((DomainSpec::new(g.l1, g.l2)?, Dims::new(g.nx, g.ny, g.nz)?))
}

fn out_dir(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::usage(format!("cannot create {}: {e}", dir.display())))
}

fn name_of(path: &Path) -> String {
    path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn solve1d(a: &Solve1dArgs, argv: &[String]) -> Result<u8, Failure> {
    let k = constants(&a.constants)?;
    let ts: Vec<f64> = if a.fig1 { vec![2.5, 5.0, 10.0, 20.0] } else { vec![a.t.expect("clap requires --t")] };
    for t_raw in ts {
        let t = Chirality::new(t_raw)?;
        let profile = match a.method {
            Method::FirstIntegral => minimize_1d(&k, t, a.n_nodes)?,
            Method::BruteForce => brute_force_1d(&k, t, a.n_nodes)?,
        };
        let residual = first_integral_residual(&profile, &k, t);
        out_dir(&a.out)?;
        let stem = format!("profile_t{t_raw}");
        let csv = a.out.join(format!("{stem}.csv"));
        let sidecar = a.out.join(format!("{stem}.json"));
        write_profile_csv(&profile, BufWriter::new(fs::File::create(&csv)?))?;
        let mut meta = Metadata::new("solve1d", argv, a)?;
        meta.outputs = vec![name_of(&csv), name_of(&sidecar)];
        write_json(
            &sidecar,
            &meta,
            json!({
                "profile": ProfileMetadata::new(&profile, &k, t),
                "first_integral_residual": residual,
            }),
        )?;
        println!(
            "t={t_raw} C={:.12} energy_per_area={:.12} residual={residual:.2e} -> {}",
            profile.first_integral_constant,
            profile.energy_per_area,
            csv.display()
        );
    }
    Ok(EXIT_OK)
}

fn embed(a: &EmbedArgs, argv: &[String]) -> Result<u8, Failure> {
    let k = constants(&a.constants)?;
    let t = Chirality::new(a.t)?;
    let (domain, dims) = domain_and_dims(&a.grid)?;
    let profile = minimize_1d(&k, t, a.n_nodes)?;
    let grid = embed_profile(&profile, dims, domain)?;
    out_dir(&a.out)?;
    let file = a.out.join("embedded.ofgrid");
    let sidecar = a.out.join("embedded.json");
    grid.save(&file)?;
    let energy = discrete_energy(&grid, &k, t);
    let continuum = profile.energy_per_area * domain.area();
    let mut meta = Metadata::new("embed", argv, a)?;
    meta.outputs = vec![name_of(&file), name_of(&sidecar)];
    write_json(
        &sidecar,
        &meta,
        json!({
            "discrete_energy": energy,
            "profile_energy": continuum,
            "relative_difference": energy / continuum - 1.0,
        }),
    )?;
    println!("{dims} discrete energy {energy:.12} vs profile {continuum:.12} -> {}", file.display());
    Ok(EXIT_OK)
}

/// The state relaxation is compared against: the embedded minimizer for
/// frustrated anchoring, `e3` for homeotropic anchoring.
fn reference_state(
    bc: BoundaryCondition,
    k: &ElasticConstants,
    t: Chirality,
    dims: Dims,
    domain: DomainSpec,
) -> Result<(DirectorGrid, f64), Failure> {
    Ok(match bc {
        BoundaryCondition::Frustrated => {
            let p: EulerProfile = minimize_1d(k, t, 4097)?;
            (embed_profile(&p, dims, domain)?, p.energy_per_area * domain.area())
        }
        BoundaryCondition::Homeotropic => {
            (DirectorGrid::uniform_e3(dims, domain), k.k2 * t.t() * t.t() * domain.area())
        }
    })
}

fn relax_cmd(a: &RelaxArgs, argv: &[String]) -> Result<u8, Failure> {
    let k = constants(&a.constants)?;
    let t = Chirality::new(a.t)?;
    if !(a.perturb.is_finite() && a.perturb >= 0.0) {
        return Err(Failure::usage(format!("--perturb must be finite and >= 0, got {}", a.perturb)));
    }
    let (domain, dims) = domain_and_dims(&a.grid)?;
    let (reference, continuum) = reference_state(a.bc, &k, t, dims, domain)?;
    let start = match &a.start {
        Some(path) => {
            let g = DirectorGrid::load(path)?;
            if g.bc() != a.bc {
                return Err(Failure::usage(format!("{} has {} anchoring, not {}", path.display(), g.bc(), a.bc)));
            }
            g
        }
        None => random_perturbation(&reference, a.perturb, a.seed),
    };
    let opts = RelaxOptions { max_iter: a.max_iter, grad_tol: a.grad_tol, step_init: a.step_init };
    let (relaxed, report) = relax(&start, &k, t, &opts)?;
    let reference_energy = discrete_energy(&reference, &k, t);
    let final_energy = report.final_energy();

    out_dir(&a.out)?;
    let file = a.out.join("relaxed.ofgrid");
    let sidecar = a.out.join("relax_report.json");
    relaxed.save(&file)?;
    let mut meta = Metadata::new("relax", argv, a)?;
    meta.outputs = vec![name_of(&file), name_of(&sidecar)];
    write_json(
        &sidecar,
        &meta,
        json!({
            "final_energy": final_energy,
            "reference_energy": reference_energy,
            "reference_energy_continuum": continuum,
            "relative_to_reference": final_energy / reference_energy - 1.0,
            "report": report,
        }),
    )?;
    println!(
        "{} after {} iterations (converged={}, stalled={}): energy {final_energy:.12}, reference {reference_energy:.12}, relative {:+.3e} -> {}",
        a.bc,
        report.iterations,
        report.converged,
        report.stalled,
        final_energy / reference_energy - 1.0,
        file.display()
    );
    Ok(EXIT_OK)
}

fn scan(a: &ScanArgs, argv: &[String]) -> Result<u8, Failure> {
    if !(a.t_min.is_finite() && a.t_max.is_finite() && a.t_min >= 0.0 && a.t_max >= a.t_min) {
        return Err(Failure::usage(format!("need 0 <= t-min <= t-max, got [{}, {}]", a.t_min, a.t_max)));
    }
    let rows = if a.t_max == a.t_min {
        1
    } else if a.steps == 0 {
        return Err(Failure::usage("--steps must be positive for a nonempty range"));
    } else {
        a.steps + 1
    };
    let mut csv = String::from("t,gamma_frustrated,gamma_homeotropic\n");
    for i in 0..rows {
        let t = if i + 1 == rows && rows > 1 {
            a.t_max
        } else {
            a.t_min + (a.t_max - a.t_min) * i as f64 / a.steps as f64
        };
        let c = Chirality::new(t)?;
        csv.push_str(&format!("{t},{},{}\n", gamma_frustrated(c), gamma_homeotropic(c)));
    }
    out_dir(&a.out)?;
    let file = a.out.join("scan.csv");
    let sidecar = a.out.join("scan.json");
    fs::write(&file, csv)?;
    let mut meta = Metadata::new("scan", argv, a)?;
    meta.outputs = vec![name_of(&file), name_of(&sidecar)];
    let (tf, th) = (threshold_frustrated(), threshold_homeotropic());
    write_json(&sidecar, &meta, json!({ "threshold_frustrated": tf, "threshold_homeotropic": th }))?;
    println!("threshold_frustrated {tf:.4} ({tf:.15})");
    println!("threshold_homeotropic {th:.4} ({th:.15})");
    println!("{rows} rows -> {}", file.display());
    Ok(EXIT_OK)
}

fn verify_cmd(a: &VerifyArgs, argv: &[String]) -> Result<u8, Failure> {
    let suites: Vec<Suite> = if a.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![a.suite.parse().map_err(|e: frankmin::Error| Failure::usage(e.to_string()))?]
    };
    out_dir(&a.out)?;
    let mut all_passed = true;
    for suite in suites {
        let report = verify::run(suite)?;
        let file = a.out.join(format!("verify_{suite}.json"));
        let mut meta = Metadata::new("verify", argv, a)?;
        meta.outputs = vec![name_of(&file)];
        write_json(&file, &meta, json!({ "report": report }))?;
        for c in report.cases.iter().filter(|c| !c.passed) {
            println!("  FAIL {}: {}", c.name, serde_json::to_string(&c.metrics)?);
        }
        println!(
            "{suite}: {}/{} passed -> {}",
            report.pass_count(),
            report.cases.len(),
            file.display()
        );
        all_passed &= report.passed;
    }
    Ok(if all_passed { EXIT_OK } else { EXIT_VERIFY })
}

/// `argv` with every `--out` option replaced by `out`.
fn with_out(argv: &[String], out: &Path) -> Vec<String> {
    let mut v = Vec::with_capacity(argv.len() + 2);
    let mut it = argv.iter();
    while let Some(a) = it.next() {
        if a == "--out" {
            it.next();
        } else if !a.starts_with("--out=") {
            v.push(a.clone());
        }
    }
    v.push("--out".into());
    v.push(out.to_string_lossy().into_owned());
    v
}

fn replay(a: &ReplayArgs) -> Result<u8, Failure> {
    let meta = Metadata::load(&a.metadata)?;
    if meta.argv.first().map(String::as_str) == Some("replay") {
        return Err(Failure::usage("refusing to replay a replay"));
    }
    let argv = match &a.out {
        Some(out) => with_out(&meta.argv, out),
        None => meta.argv.clone(),
    };
    crate::run_args(argv.into_iter().map(OsString::from).collect())
}
