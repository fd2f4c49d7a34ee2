use mht_core::dyadic::bumps::{build_bumps, build_bumps_with, BumpPair, CertificationTolerances};
use mht_core::dyadic::{bad_intervals, check_cover, epsdel_report, greedy_tree_cover, IndicatorTuple};
use mht_core::extremal::{
    alternating_maximize_with, growth_curve, indicator_search, multiplier_norm_k1, SearchOptions,
};
use mht_core::gowers::{gowers_norm_cyclic, gowers_norm_interval, is_prime, von_neumann_check};
use mht_core::mht::{kernel_mass, truncated_transform_full, trivial_bound_check, TruncationParams};
use mht_core::rng::{derive_seed, seeded};
use mht_core::signals::{CyclicSignal, HolderExponents, IndicatorSet, Signal};
use mht_core::Complex64;
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Command, Flags, Format, FunctionKind};
use crate::{csv_doc, format_or, json_doc, Artifact, Failure};

pub fn dispatch(command: Command, flags: &Flags) -> Result<Artifact, Failure> {
    match command {
        Command::BumpVerify => bump_verify(flags),
        Command::Transform => transform(flags),
        Command::Gowers => gowers(flags),
        Command::VnCheck => vn_check(flags),
        Command::TreeStats => tree_stats(flags),
        Command::Curve => curve(flags),
        Command::NormSearch => norm_search(flags),
    }
}

fn render<T: Serialize>(flags: &Flags, default: Format, rows: &[T], payload: Value) -> Result<Vec<u8>, Failure> {
    match format_or(flags, default) {
        Format::Csv => csv_doc(flags, rows),
        Format::Json => Ok(json_doc(flags, payload)),
    }
}

fn bumps(flags: &Flags) -> Result<BumpPair, Failure> {
    Ok(build_bumps(flags.sharpness.unwrap_or(1.0))?)
}

fn params(flags: &Flags, k: usize, default_r: f64) -> Result<TruncationParams, Failure> {
    Ok(TruncationParams::new(flags.r.unwrap_or(1.0), flags.big_r.unwrap_or(default_r), k)?)
}

fn domain(flags: &Flags, default: usize) -> Result<usize, Failure> {
    match flags.n_domain.unwrap_or(default) {
        0 => Err(Failure::Config("--n-domain must be positive".into())),
        n => Ok(n),
    }
}

#[derive(Serialize)]
struct CertRow {
    check: &'static str,
    residual: f64,
    tolerance: f64,
    pass: bool,
}

fn bump_verify(flags: &Flags) -> Result<Artifact, Failure> {
    let defaults = CertificationTolerances::default();
    let tol = CertificationTolerances {
        odd: flags.tol_odd.unwrap_or(defaults.odd),
        support: flags.tol_support.unwrap_or(defaults.support),
        telescoping: flags.tol_telescoping.unwrap_or(defaults.telescoping),
        partition: flags.tol_partition.unwrap_or(defaults.partition),
    };
    let unchecked = CertificationTolerances {
        odd: f64::INFINITY,
        support: f64::INFINITY,
        telescoping: f64::INFINITY,
        partition: f64::INFINITY,
    };
    let pair = build_bumps_with(flags.sharpness.unwrap_or(1.0), &unchecked)?;
    let cert = *pair.certification();
    let rows: Vec<CertRow> = cert
        .table(&tol)
        .into_iter()
        .map(|(check, residual, tolerance)| CertRow {
            check,
            residual,
            tolerance,
            pass: residual <= tolerance,
        })
        .collect();
    let (psi_l1, phi_l1) = pair.fourier_l1_norms();
    let payload = json!({
        "sharpness": pair.sharpness(),
        "psi_sup": pair.psi_sup(),
        "phi_sup": pair.phi_sup(),
        "psi_fourier_l1": psi_l1,
        "phi_fourier_l1": phi_l1,
        "grid_points": cert.grid_points,
        "certification": rows,
    });
    let violation = rows
        .iter()
        .find(|r| !r.pass)
        .map(|r| (format!("{} residual {:e} exceeds {:e}", r.check, r.residual, r.tolerance), payload.clone()));
    Ok(Artifact {
        body: render(flags, Format::Json, &rows, payload)?,
        violation,
    })
}

#[derive(Serialize)]
struct ValueRow {
    x: i64,
    re: f64,
    im: f64,
}

fn transform(flags: &Flags) -> Result<Artifact, Failure> {
    let (k, exps) = flags.dual_exponents(1)?;
    let exponents = HolderExponents::dual(exps)?;
    let params = params(flags, k, 8.0)?;
    let inputs: Vec<Signal> = match &flags.input {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?
        }
        None => {
            let n = domain(flags, 32)? as i64;
            let mut rng = seeded(flags.seed()?);
            (0..k)
                .map(|_| Signal::from_fn(1..=n, |_| Complex64::new(rng.gen_range(-1.0..=1.0), 0.0)))
                .collect::<Result<_, _>>()?
        }
    };
    if inputs.len() != k {
        return Err(Failure::Config(format!("expected {k} input signals, got {}", inputs.len())));
    }
    let out = truncated_transform_full(&inputs, &params)?;
    let bound = trivial_bound_check(&inputs, &params, &exponents)?;
    let rows: Vec<ValueRow> = out
        .iter()
        .map(|(x, v)| ValueRow { x, re: v.re, im: v.im })
        .collect();
    let payload = json!({ "params": params, "trivial_bound": bound, "output": out });
    let violation = (!bound.holds(flags.tol_verify())).then(|| {
        (
            format!("trivial bound fails: {} > {}", bound.lhs, bound.rhs),
            json!({ "inputs": inputs, "params": params, "bound": bound }),
        )
    });
    Ok(Artifact {
        body: render(flags, Format::Json, &rows, payload)?,
        violation,
    })
}

fn test_function(flags: &Flags, n: usize) -> Result<Vec<Complex64>, Failure> {
    Ok(match flags.function.unwrap_or(FunctionKind::Ones) {
        FunctionKind::Ones => vec![Complex64::new(1.0, 0.0); n],
        FunctionKind::Random => {
            let mut rng = seeded(flags.seed()?);
            (0..n)
                .map(|_| Complex64::from_polar(rng.gen_range(0.0..=1.0), rng.gen_range(0.0..std::f64::consts::TAU)))
                .collect()
        }
        FunctionKind::Quadratic => (0..n)
            .map(|x| {
                let phase = ((x * x) % n) as f64 / n as f64;
                Complex64::from_polar(1.0, std::f64::consts::TAU * phase)
            })
            .collect(),
    })
}

#[derive(Serialize)]
struct GowersRow {
    d: u32,
    n: usize,
    value: f64,
    raw_power: f64,
}

fn gowers(flags: &Flags) -> Result<Artifact, Failure> {
    let n = domain(flags, 64)?;
    let d = flags.d.unwrap_or(2);
    let values = test_function(flags, n)?;
    let result = if flags.interval {
        gowers_norm_interval(&Signal::new(1, values)?, d, n)?
    } else {
        gowers_norm_cyclic(&CyclicSignal::new(values)?, d)?
    };
    let row = GowersRow {
        d,
        n,
        value: result.value,
        raw_power: result.raw_power,
    };
    let body = match flags.format {
        None => format!("{:?}\n", result.value).into_bytes(),
        Some(_) => render(flags, Format::Json, &[&row], json!({ "result": row }))?,
    };
    Ok(Artifact { body, violation: None })
}

#[derive(Serialize)]
struct VnRow {
    trial: usize,
    lhs: f64,
    rhs: f64,
    holds: bool,
}

fn random_bounded(rng: &mut impl Rng, n: usize) -> CyclicSignal {
    let values = if rng.gen_bool(0.5) {
        (0..n)
            .map(|_| Complex64::from_polar(rng.gen_range(0.0..=1.0), rng.gen_range(0.0..std::f64::consts::TAU)))
            .collect()
    } else {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        (0..n)
            .map(|x| Complex64::from_polar(1.0, std::f64::consts::TAU * ((a * x * x + b * x) % n) as f64 / n as f64))
            .collect()
    };
    CyclicSignal::new(values).expect("bounded values")
}

fn vn_check(flags: &Flags) -> Result<Artifact, Failure> {
    let k = flags.k.unwrap_or(2);
    let n = domain(flags, 31)?;
    if k == 0 || !is_prime(n) || n <= k {
        return Err(Failure::Config(format!("need a prime --n-domain above k = {k}, got {n}")));
    }
    let seed = flags.seed()?;
    let slack = flags.tol_vn.unwrap_or(1e-9);
    let trials = flags.trials.unwrap_or(20);
    let mut rows = Vec::with_capacity(trials);
    let mut violation = None;
    for trial in 0..trials {
        let mut rng = seeded(derive_seed(seed, trial as u64));
        let fs: Vec<CyclicSignal> = (0..=k).map(|_| random_bounded(&mut rng, n)).collect();
        let vn = von_neumann_check(&fs)?;
        let holds = vn.holds(slack);
        if !holds && violation.is_none() {
            violation = Some((
                format!("trial {trial}: {} > {} + {slack:e}", vn.lhs, vn.rhs),
                json!({ "functions": fs, "lhs": vn.lhs, "rhs": vn.rhs }),
            ));
        }
        rows.push(VnRow {
            trial,
            lhs: vn.lhs,
            rhs: vn.rhs,
            holds,
        });
    }
    let worst = rows.iter().map(|r| r.lhs / r.rhs.max(f64::MIN_POSITIVE)).fold(0.0, f64::max);
    let payload = json!({ "modulus": n, "k": k, "max_ratio": worst, "trials": rows });
    Ok(Artifact {
        body: render(flags, Format::Json, &rows, payload)?,
        violation,
    })
}

fn tree_stats(flags: &Flags) -> Result<Artifact, Failure> {
    let k = flags.k.unwrap_or(1);
    let n = domain(flags, 64)? as i64;
    let density = flags.density.unwrap_or(0.5);
    if !(0.0..=1.0).contains(&density) {
        return Err(Failure::Config(format!("--density must lie in [0, 1], got {density}")));
    }
    let delta = flags.delta.unwrap_or(0.05);
    let eps = flags.eps.unwrap_or(0.5);
    let a_max = flags.a_max.unwrap_or(16.0);
    let r = flags.r.unwrap_or(1.0);
    let big_r = flags.big_r.unwrap_or(16.0);
    let pair = bumps(flags)?;
    let mut rng = seeded(flags.seed()?);
    let sets: Vec<IndicatorSet> = (0..=k)
        .map(|_| IndicatorSet::new((1..=n).filter(|_| rng.gen_bool(density))))
        .collect();
    let data = IndicatorTuple::new(sets.clone())?;
    let report = epsdel_report(&data, r, big_r, delta, &pair)?;
    let bad = bad_intervals(&data, r, big_r, delta, &pair)?;
    let trees = greedy_tree_cover(&bad, &data, delta, eps, a_max, &pair)?;
    let check = check_cover(&bad, &trees);
    let achieved = trees.iter().filter(|t| t.achieved).count();
    let payload = json!({
        "report": report,
        "cover": {
            "trees": trees.len(),
            "achieved": achieved,
            "check": check,
            "tops": trees,
        },
    });
    let violation = (!check.all()).then(|| {
        (
            format!("greedy cover fails structural check: {check:?}"),
            json!({ "sets": sets, "bad": bad, "trees": trees }),
        )
    });
    Ok(Artifact {
        body: render(flags, Format::Json, &[&report], payload)?,
        violation,
    })
}

fn search_options(flags: &Flags) -> SearchOptions {
    let defaults = SearchOptions::default();
    SearchOptions {
        max_iter: flags.max_iter.unwrap_or(defaults.max_iter),
        restarts: flags.restarts.unwrap_or(defaults.restarts),
        trials: flags.trials.unwrap_or(defaults.trials),
        workers: 0,
    }
}

#[derive(Serialize)]
struct CurveRow {
    ratio: f64,
    lower_bound: f64,
    trivial: f64,
    normalized: f64,
    method: &'static str,
    seed: u64,
    iterations: usize,
}

fn curve(flags: &Flags) -> Result<Artifact, Failure> {
    let (_, exps) = flags.dual_exponents(1)?;
    let exponents = HolderExponents::dual(exps)?;
    let ratios = flags
        .ratios
        .clone()
        .unwrap_or_else(|| (4..=14).map(|e| f64::from(1u32 << e)).collect());
    let n = domain(flags, 128)?;
    let points = growth_curve(&exponents, &ratios, n, flags.seed()?, &search_options(flags))?;
    let tol = flags.tol_verify();
    let rows: Vec<CurveRow> = points
        .iter()
        .map(|p| CurveRow {
            ratio: p.ratio,
            lower_bound: p.lower_bound,
            trivial: p.trivial,
            normalized: p.normalized,
            method: p.method.as_str(),
            seed: p.seed,
            iterations: p.iterations,
        })
        .collect();
    let violation = points
        .iter()
        .find(|p| !(0.0..=1.0 + tol).contains(&p.normalized))
        .map(|p| (format!("normalized bound {} at ratio {} exceeds 1", p.normalized, p.ratio), json!(p)));
    Ok(Artifact {
        body: render(flags, Format::Csv, &rows, json!({ "points": points }))?,
        violation,
    })
}

#[derive(Serialize)]
struct SearchRow {
    lower_bound: f64,
    trivial: f64,
    method: &'static str,
    iterations: usize,
}

fn norm_search(flags: &Flags) -> Result<Artifact, Failure> {
    let (k, exps) = flags.dual_exponents(1)?;
    let exponents = HolderExponents::dual(exps.clone())?;
    let params = params(flags, k, 8.0)?;
    let n = domain(flags, 64)?;
    let seed = flags.seed()?;
    let opts = search_options(flags);
    let ascent = alternating_maximize_with(&exponents, &params, n, seed, &opts)?;
    let floor = indicator_search(&exponents, &params, n, opts.trials, seed)?;
    let tol = flags.tol_verify();
    let trivial = kernel_mass(&params);
    let multiplier = if k == 1 && exps.iter().all(|&p| p == 2.0) {
        Some(multiplier_norm_k1(&params, flags.grid_points.unwrap_or(4096))?)
    } else {
        None
    };
    let mut problems = Vec::new();
    for est in [&ascent, &floor] {
        let err = est.verify()?;
        if err > tol {
            problems.push(format!("{} bound re-verifies with relative error {err:e}", est.method.as_str()));
        }
        if est.lower_bound > trivial + tol {
            problems.push(format!("{} bound {} beats the trivial bound {trivial}", est.method.as_str(), est.lower_bound));
        }
    }
    if ascent.monotonicity_defect > flags.tol_monotone.unwrap_or(1e-12) {
        problems.push(format!("objective dropped by {:e}", ascent.monotonicity_defect));
    }
    if let Some(m) = multiplier {
        if ascent.lower_bound > m + flags.tol_multiplier.unwrap_or(1e-6) {
            problems.push(format!("ascent bound {} exceeds multiplier norm {m}", ascent.lower_bound));
        }
    }
    let best = if floor.lower_bound > ascent.lower_bound { &floor } else { &ascent };
    let payload = json!({
        "trivial": trivial,
        "multiplier_norm": multiplier,
        "indicator_floor": floor.lower_bound,
        "estimate": best,
    });
    let violation = (!problems.is_empty()).then(|| (problems.join("; "), json!({ "estimate": best })));
    let row = SearchRow {
        lower_bound: best.lower_bound,
        trivial,
        method: best.method.as_str(),
        iterations: best.iterations,
    };
    Ok(Artifact {
        body: render(flags, Format::Json, &[row], payload)?,
        violation,
    })
}
