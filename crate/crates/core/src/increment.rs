//! One density-increment step and its iteration.
//!
//! For a set `A` of density `alpha` in `[N]` avoiding `(p - 1)/d`, the step
//! measures the Fourier energy of the balanced function `1_A - alpha 1_I`
//! (with `I = [N']`) weighted by `|F^_{N',d}|` on the major arcs, and looks
//! for an arithmetic progression on which `A` is denser. The iteration moves
//! to that progression, reindexes it as `[N_1]` and multiplies `d` by the
//! common difference.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{euler_phi, LambdaTable};
use crate::diffsets::validate;
use crate::error::{Error, Result};
use crate::expsums::{fourier_grid, FndFunction};
use crate::majorarcs::{build_arcs, ArcSystem};

/// Where the arc parameters `(Q, Q')` come from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ArcScale {
    /// `Q' = d^4 log^8 N' / (c10^2 alpha^2)`, `Q = N'/Q'`.
    Formula,
    /// Fixed values for desk-scale runs, where the formula is degenerate.
    Desk { big_q: f64, q_prime: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IncrementConstants {
    pub c5: f64,
    pub c6: f64,
    pub c7: f64,
    pub c8: f64,
    pub c9: f64,
    pub c10: f64,
    pub big_c4: f64,
    pub big_c5: f64,
    pub big_c6: f64,
    /// `C'` in the preset `D = exp(log N / (C'(log alpha^{-1} + log log N + 1)))`.
    pub big_c_prime: f64,
    /// `C1`, giving `T = D^{C1^2}` in the same preset.
    pub big_c1: f64,
    pub scale: ArcScale,
    /// Progressions shorter than this fraction of `N` are not searched.
    pub min_length_fraction: f64,
    /// Largest common difference searched.
    pub max_difference: u64,
    /// Stop the iteration when the size caps fail.
    pub enforce_caps: bool,
}

impl Default for IncrementConstants {
    fn default() -> Self {
        IncrementConstants {
            c5: 0.1,
            c6: 1.0,
            c7: 0.1,
            c8: 0.05,
            c9: 1.0,
            c10: 1.0,
            big_c4: 1.0,
            big_c5: 1.0,
            big_c6: 10.0,
            big_c_prime: 1.0,
            big_c1: 10.0,
            scale: ArcScale::Desk {
                big_q: 500.0,
                q_prime: 20.0,
            },
            min_length_fraction: 0.01,
            max_difference: 64,
            enforce_caps: true,
        }
    }
}

impl IncrementConstants {
    /// All three thresholds of the step switched off.
    pub fn zeroed_thresholds(mut self) -> Self {
        self.c6 = 0.0;
        self.c7 = 0.0;
        self.c8 = 0.0;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IncrementParameters {
    pub n: u64,
    pub d: u64,
    pub alpha: f64,
    pub n_prime: u64,
    /// Values from the formula, whatever the scale mode.
    pub formula_q_prime: f64,
    pub formula_big_q: f64,
    /// Values in use.
    pub q_prime: f64,
    pub big_q: f64,
    /// `Q < 2Q'` for the formula values.
    pub degenerate: bool,
    pub overridden: bool,
}

pub fn compute_parameters(
    n: u64,
    d: u64,
    alpha: f64,
    constants: &IncrementConstants,
) -> Result<IncrementParameters> {
    if !(alpha > 0.0 && alpha <= 1.0) || n < 2 || d == 0 {
        return Err(Error::InvalidArgument(format!(
            "parameters need alpha in (0, 1], N >= 2, d >= 1; got alpha = {alpha}, N = {n}, d = {d}"
        )));
    }
    let n_prime = (constants.c9 * alpha * n as f64).floor() as u64;
    let log_np = (n_prime.max(1) as f64).ln();
    let formula_q_prime =
        (d as f64).powi(4) * log_np.powi(8) / (constants.c10 * constants.c10 * alpha * alpha);
    let formula_big_q = n_prime as f64 / formula_q_prime;
    let degenerate = !(formula_big_q >= 2.0 * formula_q_prime);
    let (big_q, q_prime, overridden) = match constants.scale {
        ArcScale::Formula => (formula_big_q, formula_q_prime, false),
        ArcScale::Desk { big_q, q_prime } => (big_q, q_prime, true),
    };
    Ok(IncrementParameters {
        n,
        d,
        alpha,
        n_prime,
        formula_q_prime,
        formula_big_q,
        q_prime,
        big_q,
        degenerate,
        overridden,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyProfile {
    /// `(q, energy_q)` for `q = 1..=Q'`.
    pub per_q: Vec<(u64, f64)>,
    pub total_major: f64,
    /// `int_T |g^|^2 |F^|`.
    pub total_torus_weighted: f64,
    pub minor: f64,
    /// `int_T |g^|^2`, for the Parseval check.
    pub total_torus_unweighted: f64,
    /// `sum_x g(x)^2`.
    pub l2_squared: f64,
    pub f0: f64,
    pub grid: usize,
    /// Length of `I = [N']` in the balanced function.
    pub interval_i: u64,
}

impl EnergyProfile {
    pub fn csv(&self) -> String {
        let mut out = String::from("q,energy\n");
        for (q, e) in &self.per_q {
            out.push_str(&format!("{q},{e}\n"));
        }
        out
    }

    pub fn energy(&self, q: u64) -> f64 {
        self.per_q
            .iter()
            .find(|(k, _)| *k == q)
            .map_or(0.0, |(_, e)| *e)
    }
}

/// Balanced function `1_A - alpha 1_{[N']}` on positions `1..=N`.
pub fn balanced_function(set: &[u64], n: u64, alpha: f64, n_prime: u64) -> Vec<f64> {
    let mut g = vec![0.0; n as usize];
    for &x in set {
        g[x as usize - 1] += 1.0;
    }
    for v in g.iter_mut().take(n_prime.min(n) as usize) {
        *v -= alpha;
    }
    g
}

fn check_set(set: &[u64], n: u64) -> Result<()> {
    match set.iter().find(|&&x| x == 0 || x > n) {
        Some(&x) => Err(Error::ElementOutOfRange { element: x, n }),
        None => Ok(()),
    }
}

/// Riemann sums on `theta = k/M` of `|g^|^2 |F^_{N',d}|` over each `M*_q`,
/// each grid point assigned to the arc of least denominator containing it.
pub fn energy_profile(
    set: &[u64],
    params: &IncrementParameters,
    lambda: &LambdaTable,
    m: usize,
) -> Result<EnergyProfile> {
    let n = params.n;
    if m < 4 * n as usize {
        return Err(Error::GridTooSmall {
            grid: m,
            required: 4 * n as usize,
        });
    }
    check_set(set, n)?;
    let arcs = build_arcs(params.big_q, params.q_prime)?;
    let g = balanced_function(set, n, params.alpha, params.n_prime);
    let g_hat = fourier_grid(&g, 1, m);
    let f = FndFunction::new(lambda, params.n_prime.max(1), params.d)?;
    let f_hat = fourier_grid(f.weights(), 1, m);
    let f0 = f_hat[0].norm();

    let mf = m as f64;
    let cells: Vec<(f64, f64, Option<u64>)> = (0..m)
        .into_par_iter()
        .map(|k| {
            let gg = g_hat[k].norm_sqr() / mf;
            let w = gg * f_hat[k].norm();
            (gg, w, arcs.locate(k as f64 / mf).map(|(_, q)| q))
        })
        .collect();

    let max_q = arcs.max_q();
    let mut per_q_energy = vec![0.0; max_q as usize + 1];
    let mut total_torus_weighted = 0.0;
    let mut total_torus_unweighted = 0.0;
    for &(gg, w, q) in &cells {
        total_torus_unweighted += gg;
        total_torus_weighted += w;
        if let Some(q) = q {
            per_q_energy[q as usize] += w;
        }
    }
    let per_q: Vec<(u64, f64)> = (1..=max_q).map(|q| (q, per_q_energy[q as usize])).collect();
    let total_major: f64 = per_q.iter().map(|(_, e)| e).sum();
    Ok(EnergyProfile {
        per_q,
        total_major,
        total_torus_weighted,
        minor: total_torus_weighted - total_major,
        total_torus_unweighted,
        l2_squared: g.iter().map(|v| v * v).sum(),
        f0,
        grid: m,
        interval_i: params.n_prime,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcSplit {
    /// `C6 alpha^{-3}`.
    pub threshold: f64,
    pub m1: Vec<(u64, f64)>,
    pub m2: Vec<(u64, f64)>,
    pub m1_total: f64,
    pub m2_total: f64,
}

/// Splits the major-arc energy at `q <= C6 alpha^{-3}`.
pub fn split_arcs(profile: &EnergyProfile, alpha: f64, big_c6: f64) -> ArcSplit {
    let threshold = big_c6 / alpha.powi(3);
    let (m1, m2): (Vec<_>, Vec<_>) = profile
        .per_q
        .iter()
        .partition(|(q, _)| (*q as f64) <= threshold);
    ArcSplit {
        threshold,
        m1_total: m1.iter().map(|(_, e)| e).sum(),
        m2_total: m2.iter().map(|(_, e)| e).sum(),
        m1,
        m2,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcSup {
    pub q: u64,
    pub sup: f64,
    /// `|F^(0)| / phi(q)`.
    pub reference: f64,
    pub ratio: f64,
}

/// `max |F^_{N',d}|` over the grid points of each `M*_q`, against `|F^(0)|/phi(q)`.
pub fn sup_on_arcs(f: &FndFunction, arcs: &ArcSystem, qs: &[u64], m: usize) -> Result<Vec<ArcSup>> {
    let grid = f.fhat_grid(m)?;
    let f0 = grid[0].value.norm();
    Ok(qs
        .iter()
        .map(|&q| {
            let sup = grid
                .iter()
                .filter(|p| arcs.in_level(p.theta, q))
                .map(|p| p.value.norm())
                .fold(0.0, f64::max);
            let reference = f0 / euler_phi(q) as f64;
            ArcSup {
                q,
                sup,
                reference,
                ratio: sup / reference,
            }
        })
        .collect())
}

pub fn sup_on_arc(f: &FndFunction, arcs: &ArcSystem, q: u64, m: usize) -> Result<ArcSup> {
    Ok(sup_on_arcs(f, arcs, &[q], m)?[0])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Progression {
    pub difference: u64,
    pub start: u64,
    pub length: u64,
}

impl Progression {
    pub fn elements(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.length).map(move |k| self.start + k * self.difference)
    }

    /// `|A cap P|` by direct membership.
    pub fn count_in(&self, sorted_set: &[u64]) -> u64 {
        self.elements()
            .filter(|x| sorted_set.binary_search(x).is_ok())
            .count() as u64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// `c6 alpha^{-3}`; infinite when `c6 = 0`.
    pub max_difference: f64,
    /// `(c7 alpha / (d log N))^8 N`.
    pub min_length: f64,
    /// `alpha (1 + c8)`.
    pub min_density: f64,
    pub difference_ok: bool,
    pub length_ok: bool,
    pub density_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IncrementOutcome {
    pub found: bool,
    pub n: u64,
    pub d: u64,
    pub alpha: f64,
    /// Densest progression searched, whether or not it qualifies.
    pub progression: Option<Progression>,
    pub count: u64,
    pub new_density: f64,
    pub thresholds: Thresholds,
    /// Largest-energy `q >= 2` in the small-`q` arcs, if any.
    pub dominant_q: Option<u64>,
    pub params: IncrementParameters,
    /// Search space actually scanned.
    pub searched_max_difference: u64,
    pub searched_min_length: u64,
    /// Whether the difference of the progression is a multiple of `dominant_q`.
    pub guided: bool,
}

impl IncrementOutcome {
    pub fn dprime(&self) -> Option<u64> {
        self.progression.map(|p| p.difference)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Candidate {
    density: f64,
    count: u64,
    progression: Progression,
}

/// Densest progression with difference `dp` and length at least `min_len`
/// inside `[N]`. A window of length `>= 2L` splits into two windows of length
/// `>= L`, one at least as dense, so lengths `L..2L-1` suffice.
fn densest_with_difference(member: &[bool], n: u64, dp: u64, min_len: u64) -> Option<Candidate> {
    let mut best: Option<Candidate> = None;
    for residue in 1..=dp.min(n) {
        // chain residue, residue + dp, ... inside [N]
        let chain: Vec<u64> = (0..)
            .map(|k| residue + k * dp)
            .take_while(|&x| x <= n)
            .collect();
        let len = chain.len() as u64;
        if len < min_len {
            continue;
        }
        let mut prefix = vec![0u64; chain.len() + 1];
        for (i, &x) in chain.iter().enumerate() {
            prefix[i + 1] = prefix[i] + member[x as usize] as u64;
        }
        for i in 0..=(len - min_len) {
            let top = (2 * min_len - 1).min(len - i);
            for l in min_len..=top {
                let count = prefix[(i + l) as usize] - prefix[i as usize];
                let c = Candidate {
                    density: count as f64 / l as f64,
                    count,
                    progression: Progression {
                        difference: dp,
                        start: chain[i as usize],
                        length: l,
                    },
                };
                if better(&c, best.as_ref(), None) {
                    best = Some(c);
                }
            }
        }
    }
    best
}

/// Higher density, then a difference divisible by `prefer`, then smaller
/// difference, then smaller start, then longer.
fn better(c: &Candidate, best: Option<&Candidate>, prefer: Option<u64>) -> bool {
    let Some(b) = best else { return true };
    // compare count/len exactly via cross-multiplication
    let lhs = c.count as u128 * b.progression.length as u128;
    let rhs = b.count as u128 * c.progression.length as u128;
    if lhs != rhs {
        return lhs > rhs;
    }
    let (p, q) = (&c.progression, &b.progression);
    let off = |dp: u64| prefer.map_or(false, |q| dp % q != 0);
    (off(p.difference), p.difference, p.start, std::cmp::Reverse(p.length))
        < (off(q.difference), q.difference, q.start, std::cmp::Reverse(q.length))
}

/// One increment step: the densest progression over every difference up to
/// the cap. The energy profile picks a dominant denominator `q`, and among
/// equally dense progressions one whose difference is a multiple of `q` wins.
pub fn extract_increment(
    set: &[u64],
    n: u64,
    d: u64,
    constants: &IncrementConstants,
    lambda: &LambdaTable,
    grid_factor: usize,
) -> Result<IncrementOutcome> {
    check_set(set, n)?;
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.is_empty() {
        return Err(Error::InvalidArgument("increment step needs a nonempty set".into()));
    }
    let alpha = sorted.len() as f64 / n as f64;
    let params = compute_parameters(n, d, alpha, constants)?;
    let profile = energy_profile(&sorted, &params, lambda, grid_factor.max(4) * n as usize)?;
    let split = split_arcs(&profile, alpha, constants.big_c6);
    let dominant_q = split
        .m1
        .iter()
        .filter(|(q, e)| *q >= 2 && *e > 0.0)
        .max_by(|x, y| x.1.total_cmp(&y.1).then(y.0.cmp(&x.0)))
        .map(|(q, _)| *q);

    let max_difference = if constants.c6 > 0.0 {
        constants.c6 / alpha.powi(3)
    } else {
        f64::INFINITY
    };
    let min_length = if constants.c7 > 0.0 {
        (constants.c7 * alpha / (d as f64 * (n as f64).ln())).powi(8) * n as f64
    } else {
        0.0
    };
    let min_density = alpha * (1.0 + constants.c8);
    let dp_max = (constants.max_difference as f64).min(max_difference.floor()).max(1.0) as u64;
    let len_floor = min_length
        .ceil()
        .max((constants.min_length_fraction * n as f64).ceil())
        .max(1.0) as u64;

    let mut member = vec![false; n as usize + 1];
    for &x in &sorted {
        member[x as usize] = true;
    }
    let best = (1..=dp_max)
        .into_par_iter()
        .map(|dp| densest_with_difference(&member, n, dp, len_floor))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .fold(None, |acc: Option<Candidate>, c| {
            if better(&c, acc.as_ref(), dominant_q) {
                Some(c)
            } else {
                acc
            }
        });
    let guided = match (dominant_q, &best) {
        (Some(q), Some(c)) => c.progression.difference % q == 0,
        _ => false,
    };

    let (progression, count, new_density) = match best {
        Some(c) => {
            let recount = c.progression.count_in(&sorted);
            assert_eq!(recount, c.count, "progression count mismatch");
            (Some(c.progression), recount, c.density)
        }
        None => (None, 0, 0.0),
    };
    let thresholds = Thresholds {
        max_difference,
        min_length,
        min_density,
        difference_ok: progression.is_some_and(|p| p.difference as f64 <= max_difference),
        length_ok: progression.is_some_and(|p| p.length as f64 >= min_length),
        density_ok: progression.is_some() && new_density > alpha && new_density >= min_density,
    };
    let found = thresholds.difference_ok && thresholds.length_ok && thresholds.density_ok;
    Ok(IncrementOutcome {
        found,
        n,
        d,
        alpha,
        progression,
        count,
        new_density,
        thresholds,
        dominant_q,
        params,
        searched_max_difference: dp_max,
        searched_min_length: len_floor,
        guided,
    })
}

/// `D = exp(log N / (C'(log alpha^{-1} + log log N + 1)))` and `T = D^{C1^2}`.
pub fn dichotomy_preset(n: u64, alpha: f64, constants: &IncrementConstants) -> (f64, f64) {
    let log_n = (n as f64).ln();
    let denom = constants.big_c_prime * ((1.0 / alpha).ln() + log_n.ln().max(0.0) + 1.0);
    let big_d = (log_n / denom).exp();
    (big_d, big_d.powf(constants.big_c1 * constants.big_c1))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub n: u64,
    pub d: u64,
    pub alpha: f64,
    pub found: bool,
    pub progression: Option<Progression>,
    pub new_density: f64,
    pub thresholds: Thresholds,
    pub dominant_q: Option<u64>,
    pub params: IncrementParameters,
    pub big_d: f64,
    pub t: f64,
    /// `d alpha^{-1}` against `c5 D^{c5}`.
    pub cap_value: f64,
    pub cap_limit: f64,
    pub cap_ok: bool,
    /// `D^{C4} < N <= exp(D^{1/10})`.
    pub size_ok: bool,
    /// The set, as handed to this step, avoids `(p - 1)/d`.
    pub valid: bool,
    pub interval_i: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HaltReason {
    MaxSteps,
    NoIncrement,
    CapExceeded,
    SizeOutOfRange,
    TooShort,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub steps: Vec<StepRecord>,
    pub halt: HaltReason,
}

/// Iterates the increment step from `A_0 subset [N]` with `d = 1`.
pub fn run_iteration(
    a0: &[u64],
    n: u64,
    constants: &IncrementConstants,
    max_steps: usize,
    lambda: &LambdaTable,
    grid_factor: usize,
) -> Result<Trajectory> {
    let mut set: Vec<u64> = a0.to_vec();
    set.sort_unstable();
    set.dedup();
    let (mut cur_n, mut cur_d) = (n, 1u64);
    let mut steps = Vec::new();
    let mut halt = HaltReason::MaxSteps;
    for step in 0..max_steps {
        if cur_n < 2 || set.is_empty() {
            halt = HaltReason::TooShort;
            break;
        }
        let alpha = set.len() as f64 / cur_n as f64;
        let (big_d, t) = dichotomy_preset(n, alpha, constants);
        let cap_value = cur_d as f64 / alpha;
        let cap_limit = constants.c5 * big_d.powf(constants.c5);
        let cap_ok = cap_value <= cap_limit;
        let size_ok = big_d.powf(constants.big_c4) < cur_n as f64
            && (cur_n as f64).ln() <= big_d.powf(0.1);
        let valid = validate(&set, cur_n, cur_d)?.valid;
        let out = extract_increment(&set, cur_n, cur_d, constants, lambda, grid_factor)?;
        steps.push(StepRecord {
            step,
            n: cur_n,
            d: cur_d,
            alpha,
            found: out.found,
            progression: out.progression,
            new_density: out.new_density,
            thresholds: out.thresholds,
            dominant_q: out.dominant_q,
            params: out.params,
            big_d,
            t,
            cap_value,
            cap_limit,
            cap_ok,
            size_ok,
            valid,
            interval_i: out.params.n_prime,
        });
        if !out.found {
            halt = HaltReason::NoIncrement;
            break;
        }
        if constants.enforce_caps && !cap_ok {
            halt = HaltReason::CapExceeded;
            break;
        }
        if constants.enforce_caps && !size_ok {
            halt = HaltReason::SizeOutOfRange;
            break;
        }
        let p = out.progression.expect("found implies a progression");
        set = p
            .elements()
            .enumerate()
            .filter(|(_, x)| set.binary_search(x).is_ok())
            .map(|(k, _)| k as u64 + 1)
            .collect();
        cur_n = p.length;
        cur_d *= p.difference;
    }
    if max_steps == 0 {
        halt = HaltReason::MaxSteps;
    }
    Ok(Trajectory { steps, halt })
}
