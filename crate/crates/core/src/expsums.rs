//! Exponential sums over primes: twisted sums `S_x(delta, chi)`, Gauss-type
//! sums `G_{a,q,d,chi}`, the weight `F_{N,d}(n) = Lambda(dn + 1) 1_[N](n)` with
//! its Fourier transform, the character decomposition of `F_{N,d}` near a
//! rational, and the integral form of `S` over zeros.
//!
//! Fourier convention: `f^(theta) = sum_n f(n) e(-n theta)`, `e(t) = exp(2 pi i t)`.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::arith::{euler_phi, gcd, LambdaTable};
use crate::characters::{character_group, e, DirichletCharacter};
use crate::error::{Error, Result};
use crate::zerodata::{zero_window, RangePolicy, ZeroDatabase};

/// `e(-n theta)` with the product reduced mod 1 before scaling.
fn e_neg(n: u64, theta: f64) -> Complex64 {
    let t = (n as f64 * theta).rem_euclid(1.0);
    e(-t)
}

/// `S_x(delta, chi) = sum_{n <= x} Lambda(n) chi(n) e(-n delta)`.
pub fn s_sum(
    lambda: &LambdaTable,
    x: f64,
    delta: f64,
    chi: &DirichletCharacter,
) -> Result<Complex64> {
    let top = x.floor().max(0.0) as u64;
    lambda.require(top)?;
    let q = chi.modulus();
    let mut acc = Complex64::new(0.0, 0.0);
    for (n, w) in lambda.prime_powers(top) {
        let c = chi.eval(n % q);
        if c != Complex64::new(0.0, 0.0) {
            acc += w * c * e_neg(n, delta);
        }
    }
    Ok(acc)
}

/// `psi(x, chi) = S_x(0, chi)`.
pub fn psi_chi(lambda: &LambdaTable, x: f64, chi: &DirichletCharacter) -> Result<Complex64> {
    s_sum(lambda, x, 0.0, chi)
}

/// `G_{a,q,d,chi} = sum_{m=0}^{q-1} e(-am/q) conj(chi)(dm + 1)` for `chi` mod `dq`.
pub fn gauss_sum(a: u64, q: u64, d: u64, chi: &DirichletCharacter) -> Result<Complex64> {
    if q == 0 || d == 0 {
        return Err(Error::InvalidArgument("q and d must be positive".into()));
    }
    if chi.modulus() != d * q {
        return Err(Error::ModulusMismatch {
            expected: d * q,
            found: chi.modulus(),
        });
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for m in 0..q {
        let c = chi.eval(d * m + 1).conj();
        if c != Complex64::new(0.0, 0.0) {
            let r = ((a % q) * m) % q;
            acc += c * e(-(r as f64) / q as f64);
        }
    }
    Ok(acc)
}

/// `|G_{a,q,d,chi}| <= q` up to rounding.
pub fn trivial_g_bound_check(a: u64, q: u64, d: u64, chi: &DirichletCharacter) -> Result<bool> {
    Ok(gauss_sum(a, q, d, chi)?.norm() <= q as f64 + 1e-9)
}

/// `F_{N,d}`: the weights `Lambda(dn + 1)` on `n in [N]`.
#[derive(Clone, Debug)]
pub struct FndFunction {
    n: u64,
    d: u64,
    // weights[i] is the value at n = i + 1
    weights: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierPoint {
    pub theta: f64,
    pub value: Complex64,
}

impl FndFunction {
    pub fn new(lambda: &LambdaTable, n: u64, d: u64) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::InvalidArgument("N and d must be positive".into()));
        }
        lambda.require(d * n + 1)?;
        let weights = (1..=n).map(|k| lambda.get(d * k + 1)).collect();
        Ok(FndFunction { n, d, weights })
    }

    /// Arbitrary weights on `[N]`, `N = weights.len()`.
    pub fn from_weights(d: u64, weights: Vec<f64>) -> Self {
        FndFunction {
            n: weights.len() as u64,
            d,
            weights,
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `sum_n F(n)^2`.
    pub fn l2_squared(&self) -> f64 {
        self.weights.iter().map(|w| w * w).sum()
    }

    /// Direct evaluation of `F^(theta)`.
    pub fn fhat(&self, theta: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, &w) in self.weights.iter().enumerate() {
            if w != 0.0 {
                acc += w * e_neg(i as u64 + 1, theta);
            }
        }
        acc
    }

    /// `F^(k/M)` for `k = 0..M`.
    pub fn fhat_grid(&self, m: usize) -> Result<Vec<FourierPoint>> {
        if m < self.n as usize {
            return Err(Error::GridTooSmall {
                grid: m,
                required: self.n as usize,
            });
        }
        let values = fourier_grid(&self.weights, 1, m);
        Ok(values
            .into_iter()
            .enumerate()
            .map(|(k, value)| FourierPoint {
                theta: k as f64 / m as f64,
                value,
            })
            .collect())
    }
}

/// `F^_{N,d}(theta)` by direct summation.
pub fn f_hat(lambda: &LambdaTable, n: u64, d: u64, theta: f64) -> Result<Complex64> {
    Ok(FndFunction::new(lambda, n, d)?.fhat(theta))
}

/// `sum_j f_j e(-(offset + j) k / M)` for `k = 0..M`, via one length-M FFT.
/// Positions are folded mod `M`, which leaves the values at `k/M` unchanged.
pub fn fourier_grid(values: &[f64], offset: u64, m: usize) -> Vec<Complex64> {
    assert!(m > 0, "grid size must be positive");
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    for (j, &v) in values.iter().enumerate() {
        buf[((offset + j as u64) % m as u64) as usize] += v;
    }
    fft_plan(m).process(&mut buf);
    buf
}

fn fft_plan(m: usize) -> Arc<dyn rustfft::Fft<f64>> {
    FftPlanner::new().plan_fft_forward(m)
}

/// One run of the character decomposition of `F^_{N,d}(a/q + kappa)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub n: u64,
    pub d: u64,
    pub q: u64,
    pub a: u64,
    pub kappa: f64,
    pub lhs: Complex64,
    pub main: Complex64,
    pub residual: f64,
    pub budget: f64,
    pub pass: bool,
}

impl DecompositionReport {
    pub const CSV_HEADER: &'static str = "N,d,q,a,kappa,residual,budget,pass";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n, self.d, self.q, self.a, self.kappa, self.residual, self.budget, self.pass
        )
    }
}

/// Compares `F^_{N,d}(a/q + kappa)` with
/// `phi(dq)^{-1} sum_{chi mod dq} e(kappa/d) S_{dN+1}(kappa/d, chi) G_{a,q,d,chi}`.
/// Passes when the difference is at most `C log(dN) log q` (`C log(dN)` for `q = 1`).
pub fn verify_decomposition(
    lambda: &LambdaTable,
    n: u64,
    d: u64,
    q: u64,
    a: u64,
    kappa: f64,
    budget_constant: f64,
) -> Result<DecompositionReport> {
    if n == 0 || d == 0 || q == 0 {
        return Err(Error::InvalidArgument("N, d, q must be positive".into()));
    }
    if gcd(a, q) != 1 {
        return Err(Error::NotCoprime { a, n: q });
    }
    if kappa.abs() > 0.5 {
        return Err(Error::RangeViolation(format!("|kappa| = {} > 1/2", kappa.abs())));
    }
    let x = d * n + 1;
    lambda.require(x)?;
    let f = FndFunction::new(lambda, n, d)?;
    let lhs = f.fhat(a as f64 / q as f64 + kappa);

    let modulus = d * q;
    let delta = kappa / d as f64;
    // T_r = sum_{m <= x, m = r mod dq} Lambda(m) e(-m delta); then S(chi) = sum_r chi(r) T_r
    let mut buckets = vec![Complex64::new(0.0, 0.0); modulus as usize];
    for (m, w) in lambda.prime_powers(x) {
        buckets[(m % modulus) as usize] += w * e_neg(m, delta);
    }
    let group = character_group(modulus)?;
    let mut total = Complex64::new(0.0, 0.0);
    for chi in &group {
        let mut s = Complex64::new(0.0, 0.0);
        for (r, t) in buckets.iter().enumerate() {
            let c = chi.eval(r as u64);
            if c != Complex64::new(0.0, 0.0) {
                s += c * t;
            }
        }
        total += s * gauss_sum(a, q, d, chi)?;
    }
    let main = e(delta) * total / euler_phi(modulus) as f64;
    let residual = (lhs - main).norm();
    let log_dn = ((d * n) as f64).ln().max(1.0);
    let budget = if q >= 2 {
        budget_constant * log_dn * (q as f64).ln()
    } else {
        budget_constant * log_dn
    };
    Ok(DecompositionReport {
        n,
        d,
        q,
        a,
        kappa,
        lhs,
        main,
        residual,
        budget,
        pass: residual.is_finite() && residual <= budget,
    })
}

/// Step-size factor for the quadrature below: every panel spans at most
/// this fraction of a period of each oscillating factor.
pub const QUADRATURE_RESOLUTION: f64 = 1.0 / 128.0;

/// `int_{N^{1/8}}^{dN+1} (1_{principal}(chi) - sum_{rho in Z(chi;T)} t^{rho - 1}) e(-delta t) dt`.
///
/// The constant term is integrated in closed form; the zero terms by the
/// composite midpoint rule with panels no longer than
/// `QUADRATURE_RESOLUTION / |delta|` and `QUADRATURE_RESOLUTION * t / max(1, max|gamma|)`.
#[allow(clippy::too_many_arguments)]
pub fn s_via_zeros(
    db: &ZeroDatabase,
    n: u64,
    d: u64,
    delta: f64,
    chi: &DirichletCharacter,
    t: f64,
    policy: RangePolicy,
) -> Result<Complex64> {
    if n < 2 || d == 0 {
        return Err(Error::InvalidArgument("need N >= 2 and d >= 1".into()));
    }
    if !(t >= 1.0) {
        return Err(Error::RangeViolation(format!("T = {t} < 1")));
    }
    let nf = n as f64;
    if policy == RangePolicy::Strict && t > nf.powf(1.0 / 32.0) {
        return Err(Error::RangeViolation(format!(
            "T = {t} exceeds N^(1/32) = {}",
            nf.powf(1.0 / 32.0)
        )));
    }
    let window = zero_window(db, chi, t)?;
    let lo = nf.powf(0.125);
    let hi = (d * n + 1) as f64;

    let mut total = Complex64::new(0.0, 0.0);
    if chi.is_principal() {
        total += if delta == 0.0 {
            Complex64::new(hi - lo, 0.0)
        } else {
            // int e(-delta t) dt = (e(-delta hi) - e(-delta lo)) / (-2 pi i delta)
            let num = e(-(delta * hi).rem_euclid(1.0)) - e(-(delta * lo).rem_euclid(1.0));
            num / Complex64::new(0.0, -2.0 * std::f64::consts::PI * delta)
        };
    }
    if window.is_empty() {
        return Ok(total);
    }
    let gamma_max = window.iter().map(|z| z.gamma.abs()).fold(0.0, f64::max);
    let delta_cap = if delta == 0.0 {
        f64::INFINITY
    } else {
        QUADRATURE_RESOLUTION / delta.abs()
    };
    let mut zero_part = Complex64::new(0.0, 0.0);
    let mut a = lo;
    while a < hi {
        // resolves both e^{i gamma log t} and the decay t^{beta - 1}
        let gamma_cap = QUADRATURE_RESOLUTION * a / gamma_max.max(1.0);
        let h = (hi - a).min(delta_cap).min(gamma_cap);
        let mid = a + 0.5 * h;
        let log_mid = mid.ln();
        let mut s = Complex64::new(0.0, 0.0);
        for z in &window {
            let mag = ((z.beta - 1.0) * log_mid).exp();
            let (sn, cs) = (z.gamma * log_mid).sin_cos();
            s += Complex64::new(mag * cs, mag * sn);
        }
        zero_part += s * e(-(delta * mid).rem_euclid(1.0)) * h;
        a += h;
    }
    Ok(total - zero_part)
}
