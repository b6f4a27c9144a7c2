//! Acceptance checks, one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p ewitness --test acceptance` (add `--release` for
//! representative timings).

use std::f64::consts::SQRT_2;
use std::hash::Hasher;
use std::io::Write;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ewitness::bases::{first_set, fr_norm, unit_set, OperatorBasis};
use ewitness::choi::{d3_is_proved_separable, d4_c2, d4_c3, d4_region_constants, detection_closed_form, ppt_bound};
use ewitness::linalg::{svd, ComplexMatrix, RealMatrix, C64};
use ewitness::scan::{choi_point, scan_choi, write_csv, ChoiScan, Classification};
use ewitness::states::{choi_state, horodecki_a, horodecki_alpha, random_pure_vector, upb_tiles, ChoiParams};
use ewitness::witness::{build_witness, detection_value, seesaw_min_separable, validate_constraint, SeesawConfig};
use ewitness::DensityMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:.2?}, limit {limit:?}"))
}

fn unit_pair(rho: &DensityMatrix) -> (OperatorBasis, OperatorBasis) {
    (unit_set(rho.dim_a()).unwrap(), unit_set(rho.dim_b()).unwrap())
}

fn value_of(rho: &DensityMatrix) -> f64 {
    let (a, b) = unit_pair(rho);
    detection_value(rho, &a, &b).unwrap().value
}

fn random_choi(d: usize, rng: &mut ChaCha8Rng) -> ChoiParams {
    let w: Vec<f64> = (1..d).map(|_| Exp1.sample(&mut *rng)).collect();
    let total: f64 = w.iter().sum();
    let p = rng.random_range(0.0..=1.0 / d as f64);
    ChoiParams::new(d, p, w.iter().map(|x| x / total).collect()).unwrap()
}

fn gaussian(n: usize, m: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, m, |_, _| C64::new(StandardNormal.sample(&mut *rng), StandardNormal.sample(&mut *rng)))
}

fn random_mixed(d: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let g = gaussian(d, d, rng);
    let m = g.matmul(&g.adjoint()).unwrap();
    let t = m.trace();
    m.scale(C64::new(1.0, 0.0) / t)
}

fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let g = gaussian(n, n, rng);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = g.col(j);
        for q in &cols {
            let dot: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= dot * qi;
            }
        }
        let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|x| x / norm).collect());
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}

fn horodecki_alpha_family() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for k in 0..=20 {
        let alpha = 0.25 * k as f64;
        let v = value_of(&horodecki_alpha(alpha).unwrap());
        let expected = (2.0 / 21.0) * (1.0 - (19.0 - 15.0 * alpha + 3.0 * alpha * alpha).sqrt());
        worst = worst.max((v - expected).abs());
        if alpha == 2.0 || alpha == 3.0 {
            ensure(v.abs() <= 1e-9, || format!("alpha={alpha}: |value|={:.3e}", v.abs()))?;
        } else {
            let should = !(2.0..=3.0).contains(&alpha);
            ensure((v < 0.0) == should, || format!("alpha={alpha}: value {v:.6}, detected should be {should}"))?;
        }
    }
    ensure(worst <= 1e-9, || format!("max deviation from closed form {worst:.3e}"))?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("21 points, max deviation {worst:.1e}, {elapsed:.2?}"))
}

/// Reference coefficient matrix, rows and columns ordered
/// S01, S02, S12, A01, A02, A12, E00, E11, E22, to four decimals. The source
/// lists entry (7, 2) as 0.336; its mirror entries (0, 7) and (7, 0) give
/// 0.3316, which is used here.
#[rustfmt::skip]
const UPB_A_REFERENCE: [[f64; 9]; 9] = [
    [ 0.2909,  0.1587,  0.2909, 0.0, 0.0, 0.0,  0.1873,  0.3316, -0.8127],
    [ 0.1587,  0.8463,  0.1587, 0.0, 0.0, 0.0,  0.3403, -0.0416,  0.3403],
    [ 0.2909,  0.1587,  0.2909, 0.0, 0.0, 0.0, -0.8127,  0.3316,  0.1873],
    [ 0.0,     0.0,     0.0,    0.0, 0.0, 0.0,  0.0,     0.0,     0.0   ],
    [ 0.0,     0.0,     0.0,    0.0, 0.0, 0.0,  0.0,     0.0,     0.0   ],
    [ 0.0,     0.0,     0.0,    0.0, 0.0, 0.0,  0.0,     0.0,     0.0   ],
    [-0.8127,  0.3403,  0.1873, 0.0, 0.0, 0.0, -0.2868, -0.1551, -0.2868],
    [ 0.3316, -0.0416,  0.3316, 0.0, 0.0, 0.0, -0.1551, -0.8545, -0.1551],
    [ 0.1873,  0.3403, -0.8127, 0.0, 0.0, 0.0, -0.2868, -0.1551, -0.2868],
];
const UPB_LISTED_OUTLIER: ((usize, usize), f64) = ((7, 2), 0.336);

/// Reference position -> unit-set position.
const REFERENCE_ORDER: [usize; 9] = [3, 4, 5, 6, 7, 8, 0, 1, 2];

fn upb_tiles_state() -> Outcome {
    let start = Instant::now();
    let rho = upb_tiles();
    let (a, b) = unit_pair(&rho);
    let report = detection_value(&rho, &a, &b).unwrap();
    ensure((report.value + 0.087).abs() <= 0.002, || format!("value {:.6}", report.value))?;
    let ours = report.a.permuted(&REFERENCE_ORDER, &REFERENCE_ORDER);
    let reference = RealMatrix::from_fn(9, 9, |i, j| UPB_A_REFERENCE[i][j]);
    let dev = ours.max_abs_diff(&reference);
    ensure(dev <= 2e-3, || format!("max entry deviation {dev:.2e}"))?;
    // With the listed 0.336 restored, exactly that entry leaves the band.
    let ((oi, oj), listed) = UPB_LISTED_OUTLIER;
    let mut outliers = Vec::new();
    for i in 0..9 {
        for j in 0..9 {
            let reference = if (i, j) == (oi, oj) { listed } else { UPB_A_REFERENCE[i][j] };
            if (ours[(i, j)] - reference).abs() > 2e-3 {
                outliers.push((i, j));
            }
        }
    }
    ensure(outliers == [(oi, oj)], || format!("unexpected outliers against listed matrix: {outliers:?}"))?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!(
        "value {:.6}, max |A - A_ref| {dev:.1e} (listed 0.336 at ({oi},{oj}) is off by {:.1e}), {elapsed:.2?}",
        report.value,
        (ours[(oi, oj)] - listed).abs()
    ))
}

fn horodecki_a_family() -> Outcome {
    let start = Instant::now();
    let mut max_value = f64::NEG_INFINITY;
    let mut min_pt = f64::INFINITY;
    for k in 1..=49 {
        let a = 0.02 * k as f64;
        let rho = horodecki_a(a).unwrap();
        let pt = rho.min_partial_transpose_eigenvalue().unwrap();
        ensure(pt >= -1e-10, || format!("a={a}: min PT eigenvalue {pt:.3e}"))?;
        let v = value_of(&rho);
        ensure(v < 0.0, || format!("a={a}: value {v:.3e}"))?;
        max_value = max_value.max(v);
        min_pt = min_pt.min(pt);
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(5))?;
    Ok(format!("49 points PPT (min PT eig {min_pt:.1e}), largest value {max_value:.3e}, {elapsed:.2?}"))
}

fn choi_closed_form_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for d in [3, 4, 5] {
        let u = unit_set(d).unwrap();
        for _ in 0..500 {
            let params = random_choi(d, &mut rng);
            let numeric = detection_value(&choi_state(&params).unwrap(), &u, &u).unwrap().value;
            let diff = (numeric - detection_closed_form(&params)).abs();
            ensure(diff <= 1e-9, || format!("{params:?}: difference {diff:.3e}"))?;
            worst = worst.max(diff);
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(30))?;
    Ok(format!("1500 draws, max difference {worst:.1e}, {elapsed:.2?}"))
}

fn ppt_agreement(params: &ChoiParams, compared: &mut usize) -> Result<(), String> {
    let bound = ppt_bound(params.mu(), params.d()).unwrap();
    if (params.p() - bound).abs() <= 1e-6 {
        return Ok(());
    }
    let numeric = choi_state(params).unwrap().min_partial_transpose_eigenvalue().unwrap() >= -1e-9;
    *compared += 1;
    ensure(numeric == (params.p() <= bound), || {
        format!("{params:?}: bound {bound:.6} says {}, partial transpose says {numeric}", params.p() <= bound)
    })
}

fn ppt_closed_form() -> Outcome {
    let mut compared = 0;
    for i in 0..50 {
        for j in 0..50 {
            let mu1 = i as f64 / 49.0;
            let p = j as f64 / 49.0 / 3.0;
            ppt_agreement(&ChoiParams::new(3, p, vec![mu1, 1.0 - mu1]).unwrap(), &mut compared)?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        ppt_agreement(&random_choi(4, &mut rng), &mut compared)?;
    }
    Ok(format!("{compared} points compared (2700 drawn), 0 disagreements"))
}

fn d3_structure() -> Outcome {
    const N: usize = 100;
    let u = unit_set(3).unwrap();
    // (ppt, detected, proved separable) per cell
    let mut flags = vec![[false; 3]; N * N];
    for i in 0..N {
        for j in 0..N {
            let mu1 = i as f64 / (N - 1) as f64;
            let p = j as f64 / (N - 1) as f64 / 3.0;
            let params = ChoiParams::new(3, p, vec![mu1, 1.0 - mu1]).unwrap();
            let v = detection_value(&choi_state(&params).unwrap(), &u, &u).unwrap().value;
            let ppt = p <= ppt_bound(params.mu(), 3).unwrap();
            flags[i * N + j] = [ppt, v < -1e-9, d3_is_proved_separable(p, mu1)];
        }
    }
    let (mut checked, mut detected) = (0, 0);
    for i in 0..N {
        for j in 0..N {
            let here = flags[i * N + j];
            if !here[0] {
                continue;
            }
            let interior = (i.saturating_sub(1)..=(i + 1).min(N - 1))
                .all(|a| (j.saturating_sub(1)..=(j + 1).min(N - 1)).all(|b| flags[a * N + b] == here));
            if !interior {
                continue;
            }
            checked += 1;
            detected += usize::from(here[1]);
            ensure(here[1] != here[2], || {
                format!("mu1={:.4} p={:.4}: detected={} proved separable={}", i as f64 / 99.0, j as f64 / 297.0, here[1], here[2])
            })?;
        }
    }
    ensure(detected > 0, || "no detected PPT interior points".into())?;
    Ok(format!("{checked} interior PPT points ({detected} detected), 0 violations"))
}

fn catalog_states() -> Vec<(String, DensityMatrix)> {
    let mut out = Vec::new();
    for k in 0..=10 {
        let alpha = 0.5 * k as f64;
        out.push((format!("horodecki-alpha {alpha}"), horodecki_alpha(alpha).unwrap()));
    }
    out.push(("upb-tiles".into(), upb_tiles()));
    for a in [0.02, 0.1, 0.3, 0.5, 0.7, 0.9, 0.98] {
        out.push((format!("horodecki-a {a}"), horodecki_a(a).unwrap()));
    }
    out
}

fn witness_validity() -> Outcome {
    let config = SeesawConfig { restarts: 50, iters: 200, seed: 7 };
    let mut states = catalog_states();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for k in 0..200 {
        let d = 3 + k % 3;
        let params = random_choi(d, &mut rng);
        states.push((format!("{params:?}"), choi_state(&params).unwrap()));
    }
    let mut lowest = f64::INFINITY;
    let mut worst_sv: f64 = 0.0;
    for (name, rho) in &states {
        let (a, b) = unit_pair(rho);
        let w = build_witness(rho, &a, &b).unwrap();
        let min = seesaw_min_separable(&w, config).unwrap().min_value;
        ensure(min >= -1e-7, || format!("{name}: see-saw minimum {min:.3e}"))?;
        lowest = lowest.min(min);
        ensure(validate_constraint(w.coefficients()).pass, || format!("{name}: sigma_max(A) > 1"))?;
        for s in svd(w.coefficients()).singular_values {
            let off = s.abs().min((s - 1.0).abs());
            ensure(off <= 1e-9, || format!("{name}: singular value {s}"))?;
            worst_sv = worst_sv.max(off);
        }
    }
    Ok(format!(
        "{} witnesses, lowest see-saw value {lowest:.2e}, singular values within {worst_sv:.1e} of {{0,1}}",
        states.len()
    ))
}

fn feasible_region() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut e_pure, mut e_purity, mut e_unitary): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for d in 2..=6 {
        let first = first_set(d).unwrap();
        let unit = unit_set(d).unwrap();
        for _ in 0..100 {
            let v = random_pure_vector(d, &mut rng);
            e_pure = e_pure.max((fr_norm(&ComplexMatrix::outer(&v, &v), &first).unwrap() - 1.0).abs());

            let rho = random_mixed(d, &mut rng);
            let purity = rho.trace_product(&rho).re;
            e_purity = e_purity.max((fr_norm(&rho, &unit).unwrap() - purity).abs());

            let u = random_unitary(d, &mut rng);
            let rotated = u.matmul(&rho).unwrap().matmul(&u.adjoint()).unwrap();
            for basis in [&first, &unit] {
                let diff = (fr_norm(&rho, basis).unwrap() - fr_norm(&rotated, basis).unwrap()).abs();
                e_unitary = e_unitary.max(diff);
            }
        }
    }
    ensure(e_pure <= 1e-12, || format!("pure-state norm off by {e_pure:.2e}"))?;
    ensure(e_purity <= 1e-12, || format!("unit-set norm vs purity off by {e_purity:.2e}"))?;
    ensure(e_unitary <= 1e-10, || format!("unitary invariance off by {e_unitary:.2e}"))?;
    Ok(format!("pure {e_pure:.1e}, purity {e_purity:.1e}, unitary {e_unitary:.1e}"))
}

fn d4_spot_checks() -> Outcome {
    let c = d4_region_constants();
    let a1 = (9.0 - 4.0 * SQRT_2) / 29.0;
    ensure((c.a1 - a1).abs() <= 1e-15, || format!("a1 = {}", c.a1))?;
    ensure((c.a2 - (9.0 + 4.0 * SQRT_2) / 29.0).abs() <= 1e-15, || format!("a2 = {}", c.a2))?;

    let mu3 = 0.2;
    let mut detected = 0;
    for i in 0..=200 {
        let mu1 = 0.8 * i as f64 / 200.0;
        for j in 0..=100 {
            let p = 0.25 * j as f64 / 100.0;
            let params = ChoiParams::new(4, p, vec![mu1, 1.0 - mu1 - mu3, mu3]).unwrap();
            if choi_point(&params, false).unwrap().classification == Classification::PptDetected {
                detected += 1;
            }
        }
    }
    ensure(detected > 0, || "no detected PPT point at mu3 = 0.2".into())?;

    let mu1 = 0.444;
    let (c3, c2) = (d4_c3(mu1, mu3), d4_c2(mu1, mu3));
    let p = 0.5 * (c3 + c2);
    ensure(c3 <= p && p <= c2, || format!("c3={c3} c2={c2}"))?;
    let params = ChoiParams::new(4, p, vec![mu1, 1.0 - mu1 - mu3, mu3]).unwrap();
    let rho = choi_state(&params).unwrap();
    let v = value_of(&rho);
    let pt = rho.min_partial_transpose_eigenvalue().unwrap();
    ensure(v < 0.0 && pt >= -1e-9, || format!("sample point: value {v:.3e}, min PT eig {pt:.3e}"))?;
    Ok(format!(
        "a1 = {:.7}, {detected} detected PPT grid points at mu3=0.2; at mu1={mu1}: c3={c3:.5} <= p={p:.5} <= c2={c2:.5}, value {v:.2e}",
        c.a1
    ))
}

/// Hashes CSV output without holding it in memory.
struct HashWriter(std::collections::hash_map::DefaultHasher, usize);

impl Write for HashWriter {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        self.0.write(buf);
        self.1 += buf.len();
        Ok(buf.len())
    }

    fn flush(&mut self) -> std::io::Result<()> {
        Ok(())
    }
}

fn csv_digest(config: ChoiScan) -> (u64, usize, usize) {
    let out = scan_choi(config).unwrap();
    let mut w = HashWriter(Default::default(), 0);
    write_csv(&out, &mut w).unwrap();
    (w.0.finish(), w.1, out.count(Classification::PptDetected))
}

fn choi_scans() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    for d in [4, 5] {
        let config = ChoiScan::new(d);
        let (h1, bytes, detected) = csv_digest(config);
        let (h2, _, _) = csv_digest(config);
        ensure(h1 == h2, || format!("d={d}: reruns differ"))?;
        ensure(detected > 0, || format!("d={d}: no detected PPT points"))?;
        notes.push(format!("d={d}: {detected} detected PPT, {bytes} bytes"));
    }
    let elapsed = start.elapsed();
    // each default scan ran twice
    within(elapsed / 2, Duration::from_secs(300))?;
    Ok(format!("{}; identical reruns, {elapsed:.2?} for two passes", notes.join("; ")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("horodecki-alpha family", horodecki_alpha_family),
        ("tiles UPB state", upb_tiles_state),
        ("horodecki-a family", horodecki_a_family),
        ("choi closed form vs SVD", choi_closed_form_oracle),
        ("PPT closed form", ppt_closed_form),
        ("d=3 detection structure", d3_structure),
        ("witness validity", witness_validity),
        ("feasible-region norm", feasible_region),
        ("d=4 region spot checks", d4_spot_checks),
        ("choi scans", choi_scans),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
