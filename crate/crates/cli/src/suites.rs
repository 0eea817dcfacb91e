//! Invariant suites run by `shiftedprime verify`.

use num_complex::Complex64;
use serde::Serialize;
use shifted_prime::arith::{euler_phi, gcd, moebius, sieve_lambda_with_max};
use shifted_prime::characters::{character_group, conductor_and_inducer, verify_induction_identity};
use shifted_prime::diffsets::{greedy_set, ScanOrder};
use shifted_prime::expsums::{fourier_grid, gauss_sum, verify_decomposition, FndFunction};
use shifted_prime::increment::balanced_function;
use shifted_prime::majorarcs::{major_arc_sweep, verify_f0_lower_bound, MajorArcSetup};
use shifted_prime::zerodata::{detect_dichotomy, explicit_psi, RangePolicy, ZeroDatabase};
use shifted_prime::Result;

use crate::config::RunConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Characters,
    Expsums,
    Majorarcs,
    Explicit,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Characters => "characters",
            Suite::Expsums => "expsums",
            Suite::Majorarcs => "majorarcs",
            Suite::Explicit => "explicit",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// Worst measured value.
    pub value: f64,
    /// Largest admissible value.
    pub limit: f64,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Check {
            name: name.into(),
            pass: value.is_finite() && value <= limit,
            value,
            limit,
            detail: String::new(),
        }
    }

    fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

pub fn run(suite: Suite, cfg: &RunConfig) -> Result<Vec<Check>> {
    match suite {
        Suite::Characters => characters(cfg),
        Suite::Expsums => expsums(cfg),
        Suite::Majorarcs => majorarcs(cfg),
        Suite::Explicit => explicit(cfg),
    }
}

fn characters(cfg: &RunConfig) -> Result<Vec<Check>> {
    let max_q = cfg.characters_max_q;
    let (mut rows, mut cols, mut size_errors, mut induction_errors) = (0.0f64, 0.0f64, 0u64, 0u64);
    for q in 1..=max_q {
        let group = character_group(q)?;
        let phi = euler_phi(q);
        if group.len() as u64 != phi || !group.principal().is_principal() {
            size_errors += 1;
        }
        let chars = group.characters();
        for (i, chi) in chars.iter().enumerate() {
            for (j, psi) in chars.iter().enumerate() {
                let s: Complex64 = (0..q).map(|n| chi.eval(n) * psi.eval(n).conj()).sum();
                let expect = if i == j { phi as f64 } else { 0.0 };
                rows = rows.max((s - expect).norm());
            }
            let (f, inducer) = conductor_and_inducer(chi)?;
            let ok = q % f == 0
                && inducer.modulus() == f
                && inducer.is_primitive()
                && verify_induction_identity(chi, &inducer, 0..q);
            if !ok {
                induction_errors += 1;
            }
        }
        let units: Vec<u64> = (0..q).filter(|&n| gcd(n, q) == 1).collect();
        for &a in &units {
            for &b in &units {
                let s: Complex64 = chars.iter().map(|c| c.eval(a) * c.eval(b).conj()).sum();
                let expect = if a == b { phi as f64 } else { 0.0 };
                cols = cols.max((s - expect).norm());
            }
        }
    }
    Ok(vec![
        Check::at_most(format!("group size is phi(q), q <= {max_q}"), size_errors as f64, 0.0),
        Check::at_most(format!("orthogonality over n, q <= {max_q}"), rows, 1e-9),
        Check::at_most(format!("orthogonality over characters, q <= {max_q}"), cols, 1e-9),
        Check::at_most(
            format!("conductor divides q and inducer induces, q <= {max_q}"),
            induction_errors as f64,
            0.0,
        ),
    ])
}

fn expsums(cfg: &RunConfig) -> Result<Vec<Check>> {
    let n_parseval = 10_000u64;
    let lambda = sieve_lambda_with_max(3 * 5_000 + n_parseval + 1, cfg.sieve_max)?;

    // |G| = |mu(q)| when (d, q) = 1 and G = 0 otherwise; in particular |G| <= 1
    let (mut gauss, mut gauss_bound) = (0.0f64, 0.0f64);
    for q in 1..=30u64 {
        for d in 1..=10u64 {
            let principal = character_group(d * q)?.principal().clone();
            let expect = if gcd(d, q) == 1 { moebius(q).abs() as f64 } else { 0.0 };
            for a in (1..=q).filter(|&a| gcd(a, q) == 1) {
                let g = gauss_sum(a, q, d, &principal)?.norm();
                gauss = gauss.max((g - expect).abs());
                gauss_bound = gauss_bound.max(g);
            }
        }
    }

    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for n in [1_000u64, 5_000] {
        for d in 1..=3u64 {
            for q in 1..=10u64 {
                for a in (1..=q).filter(|&a| gcd(a, q) == 1).take(3) {
                    for kappa in [0.0, 0.25 / n as f64, -0.25 / n as f64] {
                        let r = verify_decomposition(&lambda, n, d, q, a, kappa, cfg.decomposition_budget)?;
                        worst = worst.max(r.residual / r.budget);
                        if !r.pass {
                            failures.push(r.csv_row());
                        }
                    }
                }
            }
        }
    }

    let f = FndFunction::new(&lambda, n_parseval, 1)?;
    let m = 4 * n_parseval as usize;
    let grid = fourier_grid(f.weights(), 1, m);
    let energy: f64 = grid.iter().map(|z| z.norm_sqr()).sum::<f64>() / m as f64;
    let parseval_f = (energy - f.l2_squared()).abs() / f.l2_squared();

    let set = greedy_set(n_parseval, 1, ScanOrder::Random(cfg.seed));
    let g = balanced_function(&set.elements, n_parseval, set.density(), n_parseval);
    let l2: f64 = g.iter().map(|v| v * v).sum();
    let grid = fourier_grid(&g, 1, m);
    let energy: f64 = grid.iter().map(|z| z.norm_sqr()).sum::<f64>() / m as f64;
    let parseval_g = (energy - l2).abs() / l2;

    Ok(vec![
        Check::at_most("principal Gauss sum has modulus |mu(q)| or 0, q <= 30, d <= 10", gauss, 1e-9),
        Check::at_most("principal Gauss sum has modulus at most 1, q <= 30, d <= 10", gauss_bound, 1.0 + 1e-9),
        Check::at_most("decomposition residual / budget", worst, 1.0)
            .with_detail(failures.join("; ")),
        Check::at_most("Parseval for F_{N,d}, N = 10000, M = 4N", parseval_f, 1e-6),
        Check::at_most("Parseval for a balanced function, N = 10000, M = 4N", parseval_g, 1e-6),
    ])
}

fn load_db(cfg: &RunConfig) -> Result<ZeroDatabase> {
    ZeroDatabase::load_fixtures(cfg.zeros_dir())
}

fn majorarcs(cfg: &RunConfig) -> Result<Vec<Check>> {
    let db = load_db(cfg)?;
    let ds = [1u64, 2, 3];
    let lambda = sieve_lambda_with_max(ds[2] * cfg.sweep_n + 1, cfg.sieve_max)?;
    let setup = MajorArcSetup {
        lambda: &lambda,
        db: &db,
        n: cfg.sweep_n,
        big_d: cfg.sweep_big_d,
        t: cfg.sweep_t,
        constants: cfg.major_arcs(),
        allow_out_of_hypothesis: true,
    };
    let qs: Vec<u64> = (1..=10).collect();
    let deltas = [0.0, 0.25 / cfg.sweep_n as f64];
    let reports = major_arc_sweep(&setup, &ds, &qs, &deltas)?;
    let worst = reports.iter().map(|r| r.pass_ratio).fold(0.0, f64::max);
    let failures: Vec<String> = reports.iter().filter(|r| !r.passes()).map(|r| r.csv_row()).collect();
    let mut overridden: Vec<String> = reports.iter().flat_map(|r| r.out_of_hypothesis.clone()).collect();
    overridden.sort();
    overridden.dedup();

    let mut checks = vec![Check::at_most(
        format!("major-arc pass_ratio over {} arcs", reports.len()),
        worst,
        1.0,
    )
    .with_detail(if failures.is_empty() {
        format!("out of hypothesis: {}", overridden.join("; "))
    } else {
        failures.join("; ")
    })];
    for d in ds {
        let r = verify_f0_lower_bound(&setup, d)?;
        checks.push(Check::at_most(
            format!("|F(0)| lower bound, d = {d}"),
            r.lower_bound - r.f0,
            0.0,
        ));
    }
    Ok(checks)
}

fn explicit(cfg: &RunConfig) -> Result<Vec<Check>> {
    let db = load_db(cfg)?;
    let lambda = sieve_lambda_with_max(100_000, cfg.sieve_max)?;
    let principal = character_group(1)?.principal().clone();
    let mut checks = Vec::new();
    for x in [1_000u64, 3_000, 10_000, 100_000] {
        for t in [50.0, 100.0] {
            let approx = explicit_psi(&db, x as f64, &principal, t, RangePolicy::Extended)?;
            let err = (lambda.psi(x) - approx.re).abs();
            let lx = (x as f64).ln();
            checks.push(Check::at_most(
                format!("explicit formula error, x = {x}, T = {t}"),
                err,
                5.0 * x as f64 * lx * lx / t,
            ));
        }
    }
    let verdict = detect_dichotomy(&db, 10.0, 10.0, &cfg.dichotomy())?;
    checks.push(Check {
        name: "dichotomy at D = 10, T = 10 is unexceptional".into(),
        pass: !verdict.is_exceptional(),
        value: verdict.witness.map_or(0.0, |w| w.beta),
        limit: verdict.threshold,
        detail: verdict.kind.to_string(),
    });
    Ok(checks)
}

