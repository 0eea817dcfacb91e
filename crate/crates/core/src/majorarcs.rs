//! Major arcs `M_{a,q} = { theta : |theta - a/q| <= 1/(qQ) }` and numeric
//! checks of the major-arc upper bound on `|F^_{N,d}(a/q + delta)|` and the
//! lower bound on `|F^_{N,d}(0)|`, in both regimes of the zero dichotomy.
//!
//! The implied constants of the bounds are configured budgets. Every report
//! carries all of its terms so a failure can be read off directly.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{euler_phi, gcd, LambdaTable};
use crate::error::{Error, Result};
use crate::expsums::FndFunction;
use crate::zerodata::{
    detect_dichotomy, zero_sum_decay, DichotomyConstants, DichotomyVerdict, Regime, ZeroDatabase,
};

/// One arc `[a/q - 1/(qQ), a/q + 1/(qQ)]` on the torus `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MajorArc {
    pub a: u64,
    pub q: u64,
    pub center: f64,
    pub half_width: f64,
}

// arcs are closed; grid points on an endpoint count as inside
const BOUNDARY_TOL: f64 = 1e-12;

/// Torus distance between two points.
pub fn torus_distance(x: f64, y: f64) -> f64 {
    let t = (x - y).rem_euclid(1.0);
    t.min(1.0 - t)
}

impl MajorArc {
    pub fn contains(&self, theta: f64) -> bool {
        torus_distance(theta, self.center) <= self.half_width + BOUNDARY_TOL
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ArcSystem {
    pub big_q: f64,
    pub q_prime: f64,
    pub arcs: Vec<MajorArc>,
}

/// All arcs `M_{a,q}` with `q <= Q'`, `gcd(a, q) = 1`, width `2/(qQ)`.
pub fn build_arcs(big_q: f64, q_prime: f64) -> Result<ArcSystem> {
    if !(q_prime >= 1.0 && big_q >= q_prime) {
        return Err(Error::RangeViolation(format!(
            "arcs need Q >= Q' >= 1, got Q = {big_q}, Q' = {q_prime}"
        )));
    }
    let mut arcs = Vec::new();
    for q in 1..=q_prime.floor() as u64 {
        for a in 1..=q {
            if gcd(a, q) == 1 {
                arcs.push(MajorArc {
                    a,
                    q,
                    center: (a as f64 / q as f64).rem_euclid(1.0),
                    half_width: 1.0 / (q as f64 * big_q),
                });
            }
        }
    }
    Ok(ArcSystem {
        big_q,
        q_prime,
        arcs,
    })
}

impl ArcSystem {
    pub fn max_q(&self) -> u64 {
        self.q_prime.floor() as u64
    }

    /// `sum_{q <= Q'} phi(q) 2/(qQ)`.
    pub fn total_measure(&self) -> f64 {
        (1..=self.max_q())
            .map(|q| euler_phi(q) as f64 * 2.0 / (q as f64 * self.big_q))
            .sum()
    }

    /// `Q' <= Q^{1/2} / 2`, where arcs are guaranteed disjoint.
    pub fn in_standard_regime(&self) -> bool {
        self.q_prime <= self.big_q.sqrt() / 2.0
    }

    /// Whether no two arcs overlap.
    pub fn is_disjoint(&self) -> bool {
        let mut arcs = self.arcs.clone();
        arcs.sort_by(|x, y| x.center.total_cmp(&y.center));
        let n = arcs.len();
        (0..n).all(|i| {
            let x = &arcs[i];
            let y = &arcs[(i + 1) % n];
            n == 1 || torus_distance(x.center, y.center) > x.half_width + y.half_width
        })
    }

    /// The arc with the smallest denominator containing `theta`. The
    /// numerator found this way is automatically coprime to `q`.
    pub fn locate(&self, theta: f64) -> Option<(u64, u64)> {
        for q in 1..=self.max_q() {
            let x = q as f64 * theta;
            let nearest = x.round();
            if (x - nearest).abs() <= 1.0 / self.big_q + BOUNDARY_TOL {
                let a = (nearest as i64).rem_euclid(q as i64) as u64;
                return Some((if q == 1 { 1 } else { a }, q));
            }
        }
        None
    }

    pub fn contains(&self, theta: f64) -> bool {
        self.locate(theta).is_some()
    }

    /// Whether `theta` lies in `M*_q`.
    pub fn in_level(&self, theta: f64, q: u64) -> bool {
        let x = q as f64 * theta;
        let nearest = x.round();
        (x - nearest).abs() <= 1.0 / self.big_q + BOUNDARY_TOL
            && gcd((nearest as i64).rem_euclid(q as i64) as u64, q) == 1
    }
}

/// Budgets standing in for the implied constants of the major-arc bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MajorArcConstants {
    pub dichotomy: DichotomyConstants,
    pub big_c3: f64,
    pub c4: f64,
    /// Multiplies the zero-contribution term.
    pub zero_budget: f64,
    /// Multiplies `(1 + N|delta|) dqN log^2 N / T`.
    pub tail_budget: f64,
    /// Multiplies `N^{1/8}` in the exceptional integral bound.
    pub slack: f64,
}

impl Default for MajorArcConstants {
    fn default() -> Self {
        MajorArcConstants {
            dichotomy: DichotomyConstants::default(),
            big_c3: 8.0,
            c4: 0.05,
            zero_budget: 1.0,
            tail_budget: 1.0,
            slack: 1.0,
        }
    }
}

/// Shared inputs of a batch of major-arc checks.
#[derive(Clone, Copy, Debug)]
pub struct MajorArcSetup<'a> {
    pub lambda: &'a LambdaTable,
    pub db: &'a ZeroDatabase,
    pub n: u64,
    pub big_d: f64,
    pub t: f64,
    pub constants: MajorArcConstants,
    /// Evaluate even when a size hypothesis fails; the report lists which.
    pub allow_out_of_hypothesis: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MajorArcReport {
    pub n: u64,
    pub big_d: f64,
    pub t: f64,
    pub d: u64,
    pub q: u64,
    pub a: u64,
    pub delta: f64,
    pub regime: Regime,
    pub constants: MajorArcConstants,
    pub lhs: f64,
    pub term_main: f64,
    pub term_zero: f64,
    pub term_tail: f64,
    pub pass_ratio: f64,
    /// Smallest tail budget that would still give `pass_ratio <= 1`.
    pub required_tail_budget: f64,
    /// `(dN/phi(d)) (1 - beta_D) log(dT) / (4 c1)`, exceptional regime only.
    pub exceptional_lower_term: Option<f64>,
    /// Hypotheses that failed and were overridden.
    pub out_of_hypothesis: Vec<String>,
}

impl MajorArcReport {
    pub const CSV_HEADER: &'static str =
        "N,D,T,d,q,a,delta,regime,lhs,term_main,term_zero,term_tail,pass_ratio";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.n,
            self.big_d,
            self.t,
            self.d,
            self.q,
            self.a,
            self.delta,
            self.regime,
            self.lhs,
            self.term_main,
            self.term_zero,
            self.term_tail,
            self.pass_ratio
        )
    }

    pub fn passes(&self) -> bool {
        self.pass_ratio <= 1.0
    }
}

/// Size hypotheses of the major-arc bounds that fail for `(d, q)`.
fn violated_hypotheses(
    setup: &MajorArcSetup<'_>,
    verdict: &DichotomyVerdict,
    d: u64,
    q: u64,
) -> Vec<String> {
    let mut out = Vec::new();
    let dq = (d * q) as f64;
    match (verdict.kind, verdict.witness) {
        (Regime::Exceptional, Some(w)) => {
            let cap = setup.big_d.powf(setup.constants.dichotomy.big_c1);
            if dq > cap {
                out.push(format!("dq = {dq} > D^C1 = {cap}"));
            }
            if d % w.modulus != 0 {
                out.push(format!("d_D = {} does not divide d = {d}", w.modulus));
            }
        }
        _ => {
            if dq > setup.big_d {
                out.push(format!("dq = {dq} > D = {}", setup.big_d));
            }
        }
    }
    let floor = (setup.big_d * setup.t).powf(setup.constants.big_c3);
    if !(setup.n as f64 > floor) {
        out.push(format!("N = {} <= (DT)^C3 = {floor:e}", setup.n));
    }
    out
}

fn admit(setup: &MajorArcSetup<'_>, violated: Vec<String>) -> Result<Vec<String>> {
    if !violated.is_empty() && !setup.allow_out_of_hypothesis {
        return Err(Error::HypothesisViolation(violated.join("; ")));
    }
    Ok(violated)
}

/// Upper bound on `|F^_{N,d}(a/q + delta)|` with a precomputed `F_{N,d}` and verdict.
pub fn check_major_arc_bound(
    setup: &MajorArcSetup<'_>,
    verdict: &DichotomyVerdict,
    f: &FndFunction,
    q: u64,
    a: u64,
    delta: f64,
) -> Result<MajorArcReport> {
    let d = f.d();
    if q == 0 || gcd(a, q) != 1 {
        return Err(Error::HypothesisViolation(format!("gcd(a, q) = gcd({a}, {q}) != 1")));
    }
    if delta.abs() > 0.5 {
        return Err(Error::HypothesisViolation(format!("|delta| = {} > 1/2", delta.abs())));
    }
    if f.n() != setup.n {
        return Err(Error::InvalidArgument("F_{N,d} built for a different N".into()));
    }
    let out_of_hypothesis = admit(setup, violated_hypotheses(setup, verdict, d, q))?;
    let k = &setup.constants;
    let nf = setup.n as f64;
    let log_n = nf.ln();
    let (phi_d, phi_q) = (euler_phi(d) as f64, euler_phi(q) as f64);
    let dqn = (d * q) as f64 * nf;

    let lhs = f.fhat(a as f64 / q as f64 + delta).norm();
    let f0 = f.fhat(0.0).norm();
    let term_main = 2.0 * f0 / phi_q;
    let shape = dqn / (phi_d * phi_q);
    let (term_zero, exceptional_lower_term) = match (verdict.kind, verdict.witness) {
        (Regime::Exceptional, Some(w)) => {
            let l = ((d * q) as f64 * setup.t).ln();
            let z = k.zero_budget * shape * (1.0 - w.beta) * l * (-k.c4 * log_n / l).exp();
            let lower = (d as f64 * nf / phi_d) * (1.0 - w.beta) * (d as f64 * setup.t).ln()
                / (4.0 * k.dichotomy.c1);
            (z, Some(lower))
        }
        _ => {
            let l = (setup.big_d * setup.t).ln();
            (k.zero_budget * shape * (-k.c4 * log_n / l).exp(), None)
        }
    };
    let tail_shape = (1.0 + nf * delta.abs()) * dqn * log_n * log_n / setup.t;
    let term_tail = k.tail_budget * tail_shape;
    let pass_ratio = lhs / (term_main + term_zero + term_tail);
    let required_tail_budget = ((lhs - term_main - term_zero) / tail_shape).max(0.0);
    Ok(MajorArcReport {
        n: setup.n,
        big_d: setup.big_d,
        t: setup.t,
        d,
        q,
        a,
        delta,
        regime: verdict.kind,
        constants: *k,
        lhs,
        term_main,
        term_zero,
        term_tail,
        pass_ratio,
        required_tail_budget,
        exceptional_lower_term,
        out_of_hypothesis,
    })
}

/// Upper bound on `|F^_{N,d}(a/q + delta)|`; routes on `detect_dichotomy`.
#[allow(clippy::too_many_arguments)]
pub fn verify_major_arc_bound(
    setup: &MajorArcSetup<'_>,
    d: u64,
    q: u64,
    a: u64,
    delta: f64,
) -> Result<MajorArcReport> {
    let verdict = detect_dichotomy(setup.db, setup.big_d, setup.t, &setup.constants.dichotomy)?;
    let f = FndFunction::new(setup.lambda, setup.n, d)?;
    check_major_arc_bound(setup, &verdict, &f, q, a, delta)
}

/// Every `(d, q, a, delta)` with `d in ds`, `q in qs`, `a` coprime to `q`.
pub fn major_arc_sweep(
    setup: &MajorArcSetup<'_>,
    ds: &[u64],
    qs: &[u64],
    deltas: &[f64],
) -> Result<Vec<MajorArcReport>> {
    let verdict = detect_dichotomy(setup.db, setup.big_d, setup.t, &setup.constants.dichotomy)?;
    let fs: Vec<FndFunction> = ds
        .iter()
        .map(|&d| FndFunction::new(setup.lambda, setup.n, d))
        .collect::<Result<_>>()?;
    let mut jobs = Vec::new();
    for (i, _) in ds.iter().enumerate() {
        for &q in qs {
            for a in 1..=q {
                if gcd(a, q) == 1 {
                    for &delta in deltas {
                        jobs.push((i, q, a, delta));
                    }
                }
            }
        }
    }
    jobs.par_iter()
        .map(|&(i, q, a, delta)| check_major_arc_bound(setup, &verdict, &fs[i], q, a, delta))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundReport {
    pub n: u64,
    pub d: u64,
    pub regime: Regime,
    pub f0: f64,
    pub main_term: f64,
    pub tail_term: f64,
    pub lower_bound: f64,
    pub margin: f64,
    pub out_of_hypothesis: Vec<String>,
}

/// `|F^_{N,d}(0)|` against `dN/(2 phi(d)) - tail` (unexceptional) or
/// `(dN/phi(d)) (1 - beta_D) log(dT)/(4 c1) - tail` (exceptional).
pub fn verify_f0_lower_bound(setup: &MajorArcSetup<'_>, d: u64) -> Result<LowerBoundReport> {
    let verdict = detect_dichotomy(setup.db, setup.big_d, setup.t, &setup.constants.dichotomy)?;
    let out_of_hypothesis = admit(setup, violated_hypotheses(setup, &verdict, d, 1))?;
    let f = FndFunction::new(setup.lambda, setup.n, d)?;
    let f0 = f.fhat(0.0).norm();
    let nf = setup.n as f64;
    let dn_phi = d as f64 * nf / euler_phi(d) as f64;
    let main_term = match verdict.witness {
        Some(w) if verdict.is_exceptional() => {
            dn_phi * (1.0 - w.beta) * (d as f64 * setup.t).ln()
                / (4.0 * setup.constants.dichotomy.c1)
        }
        _ => dn_phi / 2.0,
    };
    let tail_term = f0_tail_term(setup.constants.tail_budget, d, setup.n, setup.t);
    let lower_bound = main_term - tail_term;
    Ok(LowerBoundReport {
        n: setup.n,
        d,
        regime: verdict.kind,
        f0,
        main_term,
        tail_term,
        lower_bound,
        margin: f0 - lower_bound,
        out_of_hypothesis,
    })
}

/// `budget * dN log^2 N / T`; vanishes as `T -> infinity`.
pub fn f0_tail_term(budget: f64, d: u64, n: u64, t: f64) -> f64 {
    let nf = n as f64;
    budget * d as f64 * nf * nf.ln().powi(2) / t
}

/// Measured `sum_{rho in Z(dq;T)} |x^{rho-1}|` next to a major-arc report.
pub fn measured_zero_sum(
    setup: &MajorArcSetup<'_>,
    verdict: &DichotomyVerdict,
    d: u64,
    q: u64,
) -> Result<f64> {
    zero_sum_decay(
        setup.db,
        setup.n as f64,
        d,
        q,
        setup.t,
        verdict.witness.as_ref(),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExceptionalIntegralReport {
    /// `int_{N^{1/8}}^{dN} (1 - t^{beta-1}) dt`.
    pub integral: f64,
    /// `dN (1 - beta) log(dqT) / (2 c1) - slack N^{1/8}`.
    pub bound: f64,
    pub holds: bool,
}

/// `t - t^beta / beta`, computed without cancellation for `beta` near 1.
fn antiderivative(t: f64, beta: f64) -> f64 {
    let u = (beta - 1.0) * t.ln();
    t * ((beta - 1.0) - u.exp_m1()) / beta
}

/// Closed-form evaluation of the exceptional main-term integral, compared
/// with its claimed lower bound.
pub fn exceptional_integral_lower_bound(
    beta: f64,
    d: u64,
    q: u64,
    t: f64,
    n: u64,
    constants: &MajorArcConstants,
) -> Result<ExceptionalIntegralReport> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::HypothesisViolation(format!("beta_D = {beta} not in (0, 1)")));
    }
    let nf = n as f64;
    let lo = nf.powf(0.125);
    let dqt = (d * q) as f64 * t;
    let need = dqt.powf(constants.big_c3 / (8.0 * constants.dichotomy.big_c1));
    if lo < need {
        return Err(Error::HypothesisViolation(format!(
            "N^(1/8) = {lo} < (dqT)^(C3/(8 C1)) = {need}"
        )));
    }
    let hi = d as f64 * nf;
    let integral = antiderivative(hi, beta) - antiderivative(lo, beta);
    let bound = hi * (1.0 - beta) * dqt.ln() / (2.0 * constants.dichotomy.c1) - lo * constants.slack;
    Ok(ExceptionalIntegralReport {
        integral,
        bound,
        holds: integral >= bound,
    })
}
