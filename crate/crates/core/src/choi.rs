//! Closed forms for the generalized Choi family.
//!
//! In the unit operator set the correlation matrix of a Choi state is block
//! diagonal. Its diagonal-operator block is the circulant
//! `p/d I + (1-p)/d sum_i mu_i S^i` (S the cyclic shift), whose singular values
//! are `|p + (1-p) V_k| / d` with `V_k = sum_j mu_j omega^(jk)`,
//! `omega = exp(2 pi i / d)`. The remaining `d(d-1)` operators contribute
//! `p/d` each, which gives the detection value
//!
//! ```text
//! 1 - [ (d-1) p + 1/d sum_k |p + (1-p) V_k| ]
//! ```
//!
//! The partial transpose splits into 2x2 blocks on `{|l, l+k>, |l+k, l>}`
//! with diagonal `(1-p)/d (mu_k, mu_{d-k})` and off-diagonal `p/d`, so the
//! state is PPT iff `p <= sqrt(mu_k mu_{d-k}) / (1 + sqrt(mu_k mu_{d-k}))`
//! for every `k`.

use std::f64::consts::{PI, SQRT_2};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::states::ChoiParams;
use crate::tolerance::TOL;

fn check_mu(mu: &[f64], d: usize) -> Result<()> {
    if d < 2 || mu.len() != d - 1 {
        return Err(Error::Parameter(format!("expected {} weights for d={d}, got {}", d.saturating_sub(1), mu.len())));
    }
    Ok(())
}

/// `V_k = sum_{j=1}^{d-1} mu_j omega^(jk)`.
pub fn v_k(mu: &[f64], d: usize, k: usize) -> Result<C64> {
    check_mu(mu, d)?;
    Ok(mu
        .iter()
        .enumerate()
        .map(|(j, &m)| {
            // reduce the exponent so large k keep full accuracy
            let e = ((j + 1) * k) % d;
            C64::from_polar(m, 2.0 * PI * e as f64 / d as f64)
        })
        .sum())
}

/// Detection value of a Choi state from its spectrum; negative means detected.
pub fn detection_closed_form(params: &ChoiParams) -> f64 {
    let d = params.d();
    let p = params.p();
    let df = d as f64;
    let spectral: f64 = (0..d)
        .map(|k| (v_k(params.mu(), d, k).expect("validated params") * (1.0 - p) + p).norm())
        .sum();
    1.0 - ((df - 1.0) * p + spectral / df)
}

/// `x/(x-1) + sqrt(x/(x-1)^2)`, equal to `sqrt(x)/(1+sqrt(x))` on `[0, 1]`.
fn pair_term(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if (x - 1.0).abs() < 1e-12 {
        0.5
    } else {
        x / (x - 1.0) + (x / ((x - 1.0) * (x - 1.0))).sqrt()
    }
}

/// Largest `p` for which the state with weights `mu` is PPT.
///
/// Minimum over the index pairs `{k, d-k}`: `mu_k/(1+mu_k)` when `k = d-k`,
/// the pair expression in `mu_k mu_{d-k}` otherwise.
pub fn ppt_bound(mu: &[f64], d: usize) -> Result<f64> {
    check_mu(mu, d)?;
    let mut bound = f64::INFINITY;
    for k in 1..d {
        let j = d - k;
        if j < k {
            continue;
        }
        let term = if j == k {
            let m = mu[k - 1];
            m / (1.0 + m)
        } else {
            pair_term(mu[k - 1] * mu[j - 1])
        };
        bound = bound.min(term);
    }
    Ok(bound)
}

#[derive(Debug, Clone, Serialize)]
pub struct ChoiReport {
    pub params: ChoiParams,
    pub detection_lhs: f64,
    pub ppt_bound: f64,
    pub ppt: bool,
    pub detected: bool,
}

pub fn choi_report(params: &ChoiParams) -> ChoiReport {
    let detection_lhs = detection_closed_form(params);
    let bound = ppt_bound(params.mu(), params.d()).expect("validated params");
    ChoiReport {
        params: params.clone(),
        detection_lhs,
        ppt_bound: bound,
        ppt: params.p() <= bound + 1e-12,
        detected: detection_lhs < -TOL.detection,
    }
}

/// `2 - 6p - sqrt((1-3p)^2 + 3(p-1)^2 (1-2 mu_1)^2)`, three times the
/// general detection value at `d = 3`.
pub fn d3_detection(p: f64, mu1: f64) -> f64 {
    let a = 1.0 - 3.0 * p;
    let b = (p - 1.0) * (1.0 - 2.0 * mu1);
    2.0 - 6.0 * p - (a * a + 3.0 * b * b).sqrt()
}

/// Parameter regions of the d=3 family known to be separable.
pub fn d3_is_proved_separable(p: f64, mu1: f64) -> bool {
    (mu1 <= 0.5 && p <= mu1 / (1.0 + mu1)) || (mu1 >= 0.5 && p <= (1.0 - mu1) / (2.0 - mu1))
}

/// d=4 detection value written in `mu_1, mu_3` (with `mu_2 = 1 - mu_1 - mu_3`).
pub fn d4_detection(p: f64, mu1: f64, mu3: f64) -> f64 {
    let q = 1.0 - p;
    let linear = (p + q * (1.0 - 2.0 * mu1 - 2.0 * mu3)).abs();
    let radicand = p * p - 2.0 * p * q * (1.0 - mu1 - mu3)
        + q * q * (1.0 - 2.0 * mu1 * (1.0 - mu1) - 2.0 * mu3 * (1.0 - mu3));
    0.25 * (3.0 - 12.0 * p - linear - 2.0 * radicand.max(0.0).sqrt())
}

/// Region constants of the d=4 detected-PPT tables.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct D4RegionConstants {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

pub fn d4_region_constants() -> D4RegionConstants {
    D4RegionConstants {
        a1: (9.0 - 4.0 * SQRT_2) / 29.0,
        a2: (9.0 + 4.0 * SQRT_2) / 29.0,
        a3: (2641.0 - 1740.0 * SQRT_2) / 7053.0,
    }
}

/// Upper `p` edge of the d=4 regions: the `(mu_1, mu_3)` pair PPT bound.
pub fn d4_c2(mu1: f64, mu3: f64) -> f64 {
    pair_term(mu1 * mu3)
}

/// Zero of the linear term, `(2(mu_1+mu_3) - 1) / (2(mu_1+mu_3))`.
pub fn d4_c3(mu1: f64, mu3: f64) -> f64 {
    let s = mu1 + mu3;
    (2.0 * s - 1.0) / (2.0 * s)
}

/// `b_2(mu_3)` of the d=4 tables.
pub fn d4_b2(mu3: f64) -> f64 {
    (48.0 - 73.0 * mu3 - 4.0 * SQRT_2 * ((3.0 * mu3 - 1.0) * (3.0 * mu3 - 1.0)).sqrt()) / 71.0
}

/// `b_3(mu_3)` of the d=4 tables.
pub fn d4_b3(mu3: f64) -> f64 {
    (4.0 - 7.0 * mu3 + (mu3 * (8.0 - 15.0 * mu3)).sqrt()) / 8.0
}

/// Weights for d=5 on the `Im V_1 = 0` locus, given `mu_3` and `mu_4`.
pub fn d5_imv1_zero(mu3: f64, mu4: f64) -> Result<Vec<f64>> {
    let s5 = 5f64.sqrt();
    let mu2 = (mu3 * (1.0 + s5) + 2.0 * (2.0 * mu4 - 1.0)) / (s5 - 3.0);
    let mu1 = 0.5 * ((1.0 - s5) * mu2 + (s5 - 1.0) * mu3 + 2.0 * mu4);
    let mu = vec![mu1, mu2, mu3, mu4];
    let tol = 1e-12;
    if mu.iter().any(|&m| !(-tol..=1.0 + tol).contains(&m)) || (mu.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(Error::Parameter(format!("(mu3, mu4) = ({mu3}, {mu4}) leaves the simplex: {mu:?}")));
    }
    Ok(mu.into_iter().map(|m| m.clamp(0.0, 1.0)).collect())
}
