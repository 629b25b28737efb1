//! The acceptance criteria, each at its stated tolerance. Prints one
//! pass/fail line per criterion and exits non-zero if any fails.

use std::time::Instant;

use slab_core::cli::{parse_config_str, run};
use slab_core::experiments::checks::{
    galerkin_checks, partition_check, product_lq_monte_carlo, random_zonal, signature_energy_deviation,
    stationarity_check, translation_check,
};
use slab_core::experiments::{
    bump_scaling, dispersion_experiment, random_data_sweep, sharpness_experiment, BumpProfile, DispersionSpec,
    SharpnessSpec, SweepSpec, Verdict,
};
use slab_core::geometry::{zonal_grid_s3, ManifoldSpec};
use slab_core::norms::product_zonal_lq;
use slab_core::operators::OperatorSpec;
use slab_core::spectral::make_partition_bump;
use slab_core::Result;

type Check = fn() -> Result<(bool, String)>;

fn octaves(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(|j| 2f64.powi(j)).collect()
}

fn bump_lq() -> Result<(bool, String)> {
    let (lq, _) = bump_scaling(4.0, &octaves(3, 8), &BumpProfile::default(), 1024)?;
    let f = lq.fit()?;
    let ok = (f.slope + 0.75).abs() <= 0.05 && f.r_squared >= 0.999;
    Ok((ok, format!("slope {:.4} (want -0.75 ± 0.05), R² {:.6}", f.slope, f.r_squared)))
}

fn bump_h2() -> Result<(bool, String)> {
    let (_, h2) = bump_scaling(4.0, &octaves(3, 8), &BumpProfile::default(), 1024)?;
    let f = h2.fit()?;
    Ok(((f.slope - 0.5).abs() <= 0.05, format!("slope {:.4} (want 0.50 ± 0.05)", f.slope)))
}

fn sharpness() -> Result<(bool, String)> {
    let mut ok = true;
    let mut msg = Vec::new();
    for s in [0.0, 0.25, 0.5] {
        let o = sharpness_experiment(&SharpnessSpec::new(2.0, 3.0, s, octaves(3, 8)))?;
        let want = 0.5 - s;
        ok &= (o.quotient_fit.slope - want).abs() <= 0.05;
        msg.push(format!("s={s}: {:.4} (want {want})", o.quotient_fit.slope));
    }
    Ok((ok, msg.join(", ")))
}

fn factorization() -> Result<(bool, String)> {
    let grid = zonal_grid_s3(1023)?;
    let mut worst: f64 = 0.0;
    for i in 0..5u64 {
        let f = random_zonal(6, 100 + i)?;
        for q in [2.0, 4.0] {
            let exact = product_zonal_lq(&f, &grid, q)?.powf(q);
            let mc = product_lq_monte_carlo(&f, q, 1_000_000, 1000 * i + q as u64)?;
            worst = worst.max(mc.z_score(exact));
        }
    }
    Ok((worst < 3.0, format!("largest deviation {worst:.3} standard errors over 5 fields, q in {{2, 4}}")))
}

fn stationarity() -> Result<(bool, String)> {
    let mu = stationarity_check(512)?;
    let d = translation_check(100, 7)?;
    Ok((mu == 0.0 && d <= 1e-8, format!("max |symbol| {mu:e}, translation defect {d:.3e}")))
}

fn dispersion() -> Result<(bool, String)> {
    let op = OperatorSpec::signature(ManifoldSpec::split_torus(2)?, vec![1, -1])?;
    let o = dispersion_experiment(&op, &DispersionSpec::new(2f64.powi(-7)), &make_partition_bump())?;
    let change = (o.fit.slope - o.half_window_fit.slope).abs();
    Ok((
        o.verdict == Verdict::Pass,
        format!("m = {}, slope {:.4} (want -1 ± 0.15), change under alpha/2 {change:.4}", o.rank, o.fit.slope),
    ))
}

fn sweep() -> Result<(bool, String)> {
    let mut ok = true;
    let mut msg = Vec::new();
    for signs in [vec![1i8, 1], vec![1, -1]] {
        let op = OperatorSpec::signature(ManifoldSpec::split_torus(2)?, signs.clone())?;
        let spec = SweepSpec::new(6.0, 3.0, 1.0 / 6.0, (2..=6).collect(), 16, 42);
        let o = random_data_sweep(&op, &spec)?;
        ok &= o.ratio <= 2.0;
        msg.push(format!("signs {signs:?}: ratio {:.3}", o.ratio));
    }
    Ok((ok, format!("(p,q) = (6,3), s = 1/6: {}", msg.join(", "))))
}

fn energy() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for signs in [vec![1i8, 1], vec![1, -1], vec![1, 1, -1]] {
        worst = worst.max(signature_energy_deviation(&signs, &[0.0, 0.5, 1.0], &[0.1, 0.5, 1.0], 3)?);
    }
    Ok((worst <= 1e-12, format!("largest |ratio - 1| {worst:.3e}")))
}

fn galerkin() -> Result<(bool, String)> {
    let c = galerkin_checks(8, 5)?;
    let ok = c.exact_mismatch <= 1e-10
        && c.hermitian_defect <= 1e-10
        && c.gram_drift <= 1e-10
        && c.identity_rank == 2
        && c.cosine_rank == 1;
    Ok((
        ok,
        format!(
            "flow mismatch {:.2e}, Hermitian defect {:.2e}, Gram drift {:.2e}, ranks {} and {}",
            c.exact_mismatch, c.hermitian_defect, c.gram_drift, c.identity_rank, c.cosine_rank
        ),
    ))
}

fn partition() -> Result<(bool, String)> {
    let (sum, outside, min, max) = partition_check(&make_partition_bump(), 10_000);
    Ok((
        sum <= 1e-12 && outside == 0.0 && min >= 0.0 && max <= 1.0,
        format!("sum defect {sum:.2e}, max outside (1/4, 4) {outside:e}"),
    ))
}

fn determinism() -> Result<(bool, String)> {
    let config = parse_config_str(
        r#"{"scenario": "random-sweep", "blocks": [2, 3, 4, 5], "trials": 8, "seed": 11}"#,
    )?;
    let a = tempfile::tempdir()?;
    let b = tempfile::tempdir()?;
    run(&config, a.path())?;
    run(&config, b.path())?;
    let ra = std::fs::read(a.path().join("results.csv"))?;
    let rb = std::fs::read(b.path().join("results.csv"))?;
    Ok((ra == rb && !ra.is_empty(), format!("{} bytes, identical: {}", ra.len(), ra == rb)))
}

fn main() {
    let criteria: [(&str, Check); 11] = [
        ("1 bump L^4 scaling", bump_lq),
        ("2 bump H^2 scaling", bump_h2),
        ("3 sharpness rate", sharpness),
        ("4 factorization identity", factorization),
        ("5 stationarity and isometry", stationarity),
        ("6 dispersion decay", dispersion),
        ("7 Strichartz boundedness", sweep),
        ("8 unitarity and energy", energy),
        ("9 Galerkin consistency", galerkin),
        ("10 partition of unity", partition),
        ("11 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let (ok, detail) = match check() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!ok);
        println!(
            "{} criterion {name}: {detail} [{:.1}s]",
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of 11 passed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
