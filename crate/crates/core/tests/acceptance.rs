//! Acceptance gate: one line per criterion, nonzero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use fastdec::construct::{
    anticommute_bound, anticommuting_family, build_and_verify, hre_family, mutually_orthogonal_family,
    odd_degree_validator, random_pairs, AlgebraParams, FamilyKind, Parity,
};
use fastdec::decoder::{simulate, SimConfig};
use fastdec::exec::Execution;
use fastdec::lattice::{column_orthogonality_test, qr_verify_trials};
use fastdec::matcore::exact::GaussInt;
use fastdec::matcore::DEFAULT_TOL;
use fastdec::mograph::search::oracle_sweep;
use fastdec::mograph::{analyze_default, conflict_graph, mutually_orthogonal, optimal_partition};
use fastdec::stbc::{alamouti_code, silver_code, Constellation};

type Check = fn() -> Result<String, String>;

fn within(limit: Duration, started: Instant) -> Result<Duration, String> {
    let took = started.elapsed();
    if took < limit {
        Ok(took)
    } else {
        Err(format!("took {took:?}, limit {limit:?}"))
    }
}

fn silver_exponent() -> Result<String, String> {
    let started = Instant::now();
    let report = analyze_default(&silver_code());
    let took = within(Duration::from_secs(1), started)?;
    if report.exponent != 5 {
        return Err(format!("exponent {}", report.exponent));
    }
    Ok(format!("exponent 5 in {took:?}"))
}

fn full_rate_no_g_group() -> Result<String, String> {
    let a = analyze_default(&silver_code());
    let b = analyze_default(&silver_code());
    if a != b {
        return Err("repeated analysis differs".into());
    }
    if a.g_group.is_some() {
        return Err(format!("g_group {:?}", a.g_group));
    }
    if !a.all_checks_pass() {
        return Err(format!("failed checks: {:?}", a.bound_checks.iter().filter(|c| !c.pass).collect::<Vec<_>>()));
    }
    Ok(format!("g_group absent, {} bound checks pass", a.bound_checks.len()))
}

fn alamouti() -> Result<String, String> {
    let started = Instant::now();
    let report = analyze_default(&alamouti_code());
    let took = within(Duration::from_secs(1), started)?;
    if report.exponent != 1 || report.g_group != Some(4) {
        return Err(format!("exponent {}, g_group {:?}", report.exponent, report.g_group));
    }
    if !report.all_checks_pass() {
        return Err("bound checks failed".into());
    }
    Ok(format!("exponent 1, g_group 4 = n^2 in {took:?}"))
}

fn theorem_one() -> Result<String, String> {
    let mut pairs = 0;
    let mut witnesses = 0;
    for (seed, basis) in [(101u64, alamouti_code()), (202, silver_code())] {
        let mats = basis.matrices();
        for i in 0..mats.len() {
            for j in i + 1..mats.len() {
                let mo = mutually_orthogonal(&mats[i], &mats[j], DEFAULT_TOL).map_err(|e| e.to_string())?;
                let outcome = column_orthogonality_test(&basis, i, j, 100, seed).map_err(|e| e.to_string())?;
                if outcome.always_orthogonal != mo {
                    return Err(format!("pair ({}, {}) disagrees", i + 1, j + 1));
                }
                pairs += 1;
                witnesses += usize::from(outcome.witness.is_some());
            }
        }
    }
    Ok(format!("{pairs} pairs, {witnesses} witnesses, 0 disagreements"))
}

fn block_structure() -> Result<String, String> {
    let basis = silver_code();
    let partition = optimal_partition(&conflict_graph(&basis, DEFAULT_TOL)).partition.ok_or("no partition")?;
    let trials = qr_verify_trials(&basis, &partition, 2024, 50, 1e-8, Execution::default()).map_err(|e| e.to_string())?;
    let worst = trials.iter().map(|t| t.max_off_block / t.t_norm).fold(0.0, f64::max);
    if trials.len() != 50 || !trials.iter().all(|t| t.pass) {
        return Err(format!("worst relative off-block {worst:e}"));
    }
    Ok(format!("50 channels, worst off-block / ||T||_F = {worst:e}"))
}

fn bound_saturation() -> Result<String, String> {
    let started = Instant::now();
    let fam = anticommuting_family(2);
    let bound = anticommute_bound(&AlgebraParams::new(8, 2, false).map_err(|e| e.to_string())?, Parity::Odd);
    if fam.len() != 7 || bound != 7 || fam.dimension != 8 || !fam.pairwise_anticommuting() || !fam.all_invertible() {
        return Err(format!("anticommuting family: {} members of size {}, bound {bound}", fam.len(), fam.dimension));
    }
    let mo = mutually_orthogonal_family(1);
    if mo.len() != 6 || mo.dimension != 4 || !mo.pairwise_mutually_orthogonal() {
        return Err(format!("mutually orthogonal family: {} members", mo.len()));
    }
    let took = within(Duration::from_secs(1), started)?;
    Ok(format!("7 anticommuting 8x8 = bound 7, 6 mutually orthogonal 4x4, in {took:?}"))
}

fn hre() -> Result<String, String> {
    let fam = hre_family(2);
    let minus_one = GaussInt::new(-1, 0);
    let ok = fam.len() == 5
        && fam.dimension == 4
        && fam.pairwise_anticommuting()
        && fam.exact.iter().all(|m| m.is_unitary() && m.squares_to(&minus_one));
    if !ok {
        return Err(format!("{} members of size {}", fam.len(), fam.dimension));
    }
    Ok("5 unitary 4x4 matrices squaring to -I, pairwise anticommuting".into())
}

fn decoder_equivalence() -> Result<String, String> {
    let started = Instant::now();
    let basis = silver_code();
    let partition = optimal_partition(&conflict_graph(&basis, DEFAULT_TOL)).partition.ok_or("no partition")?;
    let s = Constellation::new(vec![-3.0, -1.0, 1.0, 3.0]).map_err(|e| e.to_string())?;
    for (n0, seed) in [(0.0, 8), (0.1, 9)] {
        let config = SimConfig::new(200, n0, seed, s.clone()).map_err(|e| e.to_string())?;
        let sim = simulate(&basis, &partition, &config).map_err(|e| e.to_string())?;
        if sim.summary.agreement_rate != 1.0 {
            return Err(format!("agreement {} at N0 = {n0}", sim.summary.agreement_rate));
        }
        if let Some(r) = sim.records.iter().find(|r| r.evals_brute != 65536 || r.evals_fast != 4352) {
            return Err(format!("trial {} counted {} / {}", r.trial, r.evals_brute, r.evals_fast));
        }
    }
    let took = within(Duration::from_secs(60), started)?;
    Ok(format!("400 trials agree, 65536 vs 4352 evaluations, in {took:?}"))
}

fn partition_oracle() -> Result<String, String> {
    let cases = oracle_sweep(500, 10, 77, Execution::default());
    let bad: Vec<usize> = cases.iter().filter(|c| !c.agree).map(|c| c.index).collect();
    if !bad.is_empty() {
        return Err(format!("graphs {bad:?} disagree"));
    }
    let fd = cases.iter().filter(|c| c.exhaustive.is_some()).count();
    Ok(format!("500 graphs agree ({fd} fast decodable)"))
}

fn odd_degree() -> Result<String, String> {
    let report = odd_degree_validator(&random_pairs(3, 1000, 33), DEFAULT_TOL).map_err(|e| e.to_string())?;
    if report.anticommuting_found != 0 {
        return Err(format!("{} anticommuting pairs", report.anticommuting_found));
    }
    for kind in [FamilyKind::U, FamilyKind::Anticommute, FamilyKind::Mo, FamilyKind::Hre] {
        for ell in [2, 4] {
            let (_, r) = build_and_verify(kind, ell).map_err(|e| e.to_string())?;
            if !r.pass() {
                return Err(format!("{kind:?} with parameter {ell} failed: {r:?}"));
            }
        }
    }
    Ok(format!(
        "0 of {} invertible 3x3 pairs anticommute, determinant gap {:.3}; even constructions pass",
        report.invertible_candidates, report.min_det_gap
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 10] = [
        ("silver exponent is 5", silver_exponent),
        ("full rate has no g-group", full_rate_no_g_group),
        ("alamouti is 4-group decodable", alamouti),
        ("column orthogonality matches mutual orthogonality", theorem_one),
        ("R block structure on the silver partition", block_structure),
        ("constructions saturate the bounds", bound_saturation),
        ("hurwitz-radon-eckmann family", hre),
        ("fast decoder matches brute force", decoder_equivalence),
        ("branch-and-bound matches exhaustive search", partition_oracle),
        ("odd sizes admit no anticommuting pair", odd_degree),
    ];
    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", k + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", k + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
