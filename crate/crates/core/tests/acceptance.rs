//! Acceptance criteria. Each test prints one `[PASS]`/`[FAIL]` line to stderr
//! (written directly, so it shows even when test output is captured) and then
//! asserts the same verdict.

use std::io::Write;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use shifted_prime::arith::sieve_lambda;
use shifted_prime::characters::{character_group, CharacterId, DirichletCharacter};
use shifted_prime::diffsets::{greedy_set, max_set_exact, ScanOrder, DEFAULT_NODE_BUDGET};
use shifted_prime::expsums::{fourier_grid, gauss_sum, verify_decomposition, FndFunction};
use shifted_prime::increment::{balanced_function, extract_increment, IncrementConstants};
use shifted_prime::majorarcs::{major_arc_sweep, MajorArcConstants, MajorArcSetup};
use shifted_prime::zerodata::{
    default_data_dir, detect_dichotomy, explicit_psi, parse_zeros, DichotomyConstants, RangePolicy, Regime,
    ZeroDatabase, ZeroFormat,
};
use shifted_prime::Error;

fn report(id: u32, title: &str, pass: bool, elapsed: Duration, limit: Duration, detail: &str) {
    let in_time = elapsed <= limit;
    let ok = pass && in_time;
    let line = format!(
        "[{}] criterion {id}: {title} | {detail} | runtime {:.2}s (limit {}s{})\n",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs(),
        if in_time { "" } else { ", exceeded" }
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(ok, "{}", line.trim_end());
}

// ---- independent oracles -------------------------------------------------

fn oracle_is_prime(limit: usize) -> Vec<bool> {
    let mut p = vec![true; limit + 1];
    p[0] = false;
    if limit >= 1 {
        p[1] = false;
    }
    let mut i = 2;
    while i * i <= limit {
        if p[i] {
            let mut j = i * i;
            while j <= limit {
                p[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    p
}

/// Lambda by direct prime-power detection over a prime table.
fn oracle_lambda(limit: usize) -> Vec<f64> {
    let primes = oracle_is_prime(limit);
    let mut lam = vec![0.0; limit + 1];
    for p in 2..=limit {
        if primes[p] {
            let mut pk = p;
            loop {
                lam[pk] = (p as f64).ln();
                match pk.checked_mul(p) {
                    Some(next) if next <= limit => pk = next,
                    _ => break,
                }
            }
        }
    }
    lam
}

fn oracle_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn oracle_squarefree(n: u64) -> bool {
    (2..).take_while(|p| p * p <= n).all(|p| n % (p * p) != 0)
}

/// Differences forbidden to a `d`-scaled avoiding set in `[n]`: `(p - 1)/d`.
fn oracle_forbidden(n: usize, d: usize, primes: &[bool]) -> Vec<bool> {
    let mut f = vec![false; n + 1];
    for (k, slot) in f.iter_mut().enumerate().skip(1) {
        let p = d * k + 1;
        *slot = p < primes.len() && primes[p];
    }
    f
}

fn oracle_valid(set: &[u64], n: usize, d: usize, primes: &[bool]) -> bool {
    let forbidden = oracle_forbidden(n, d, primes);
    set.iter().all(|&x| x >= 1 && x as usize <= n)
        && set
            .iter()
            .enumerate()
            .all(|(i, &x)| set[i + 1..].iter().all(|&y| !forbidden[x.abs_diff(y) as usize]))
}

fn direct_dft(weights: &[f64], offset: u64, theta: f64) -> Complex64 {
    weights
        .iter()
        .enumerate()
        .map(|(j, &w)| {
            let t = -((offset + j as u64) as f64 * theta).rem_euclid(1.0);
            w * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * t)
        })
        .sum()
}

fn fixture_db() -> ZeroDatabase {
    ZeroDatabase::load_fixtures(default_data_dir()).expect("shipped zero fixtures load")
}

// ---- criteria ---------------------------------------------------------------

#[test]
fn criterion_1_exact_sizes_and_greedy_density() {
    const MAX_N: usize = 22;
    let start = Instant::now();
    let primes = oracle_is_prime(3 * MAX_N + 1);
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for d in 1..=3usize {
        let forbidden = oracle_forbidden(MAX_N, d, &primes);
        let conflicts: Vec<u32> = (0..MAX_N)
            .map(|i| {
                (0..MAX_N)
                    .filter(|&j| j != i && forbidden[i.abs_diff(j)])
                    .fold(0u32, |m, j| m | (1 << j))
            })
            .collect();
        // valid[mask] from valid[mask without its lowest element]
        let mut valid = vec![false; 1 << MAX_N];
        valid[0] = true;
        let mut best_with_top = [0u32; MAX_N + 1];
        for mask in 1u32..(1 << MAX_N) {
            let low = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            let v = valid[rest as usize] && conflicts[low] & rest == 0;
            valid[mask as usize] = v;
            if v {
                let top = 32 - mask.leading_zeros() as usize;
                best_with_top[top] = best_with_top[top].max(mask.count_ones());
            }
        }
        let mut oracle = 0;
        for n in 1..=MAX_N {
            oracle = oracle.max(best_with_top[n]);
            let r = max_set_exact(n as u64, d as u64, DEFAULT_NODE_BUDGET).unwrap();
            checked += 1;
            if !r.optimal
                || r.set.len() as u32 != oracle
                || !oracle_valid(&r.set.elements, n, d, &oracle_is_prime(d * n + 1))
            {
                mismatches.push(format!("N={n} d={d}: solver {} oracle {oracle}", r.set.len()));
            }
        }
    }
    let exact_time = start.elapsed();

    let start = Instant::now();
    let big = 1usize << 20;
    let big_primes = oracle_is_prime(big + 1);
    let mut densities = Vec::new();
    let mut invalid = Vec::new();
    for k in 6..=20u32 {
        let n = 1u64 << k;
        let s = greedy_set(n, 1, ScanOrder::Ascending);
        if !oracle_valid(&s.elements, n as usize, 1, &big_primes) {
            invalid.push(n);
        }
        densities.push((k, s.density()));
    }
    let rises: Vec<String> = densities
        .windows(2)
        .filter(|w| w[1].1 > 1.1 * w[0].1)
        .map(|w| format!("2^{}: {:.5} -> {:.5}", w[1].0, w[0].1, w[1].1))
        .collect();
    let greedy_time = start.elapsed();

    let pass = mismatches.is_empty()
        && invalid.is_empty()
        && rises.is_empty()
        && exact_time <= Duration::from_secs(60)
        && greedy_time <= Duration::from_secs(300);
    let curve: Vec<String> = densities.iter().map(|(k, v)| format!("2^{k}:{v:.5}")).collect();
    report(
        1,
        "exact max-set sizes match the 2^N oracle (N <= 22, d <= 3); greedy density non-increasing within 10%",
        pass,
        exact_time + greedy_time,
        Duration::from_secs(360),
        &format!(
            "{checked} exact cases, {} mismatches {:?}; exact {:.2}s (limit 60s), greedy {:.2}s (limit 300s); \
             invalid greedy sets {:?}; rises above 10% {:?}; densities {}",
            mismatches.len(),
            mismatches,
            exact_time.as_secs_f64(),
            greedy_time.as_secs_f64(),
            invalid,
            rises,
            curve.join(" ")
        ),
    );
}

#[test]
fn criterion_2_principal_gauss_sum_identity() {
    let start = Instant::now();
    let (mut cases, mut worst_coprime, mut worst_other) = (0u64, 0.0f64, 0.0f64);
    let mut violations = 0u64;
    let mut violating_q = std::collections::BTreeSet::new();
    let mut squarefree_violations = 0u64;
    for q in 1..=60u64 {
        for d in 1..=30u64 {
            let chi = DirichletCharacter::principal(d * q);
            for a in (1..=q).filter(|&a| oracle_gcd(a, q) == 1) {
                cases += 1;
                let g = gauss_sum(a, q, d, &chi).unwrap();
                let err = if oracle_gcd(d, q) == 1 {
                    let e = (g.norm() - 1.0).abs();
                    worst_coprime = worst_coprime.max(e);
                    e
                } else {
                    let e = g.norm();
                    worst_other = worst_other.max(e);
                    e
                };
                if err > 1e-9 {
                    violations += 1;
                    violating_q.insert(q);
                    if oracle_squarefree(q) {
                        squarefree_violations += 1;
                    }
                }
            }
        }
    }
    let qs: Vec<u64> = violating_q.iter().copied().collect();
    report(
        2,
        "|G| = 1 when (d,q) = 1 and G = 0 otherwise, principal chi mod dq, q <= 60, d <= 30",
        violations == 0,
        start.elapsed(),
        Duration::from_secs(30),
        &format!(
            "{cases} cases, {violations} violations; max ||G|-1| over (d,q)=1: {worst_coprime:.3e}; \
             max |G| over (d,q)>1: {worst_other:.3e}; violations at squarefree q: {squarefree_violations}; \
             violating q: {qs:?} (for (d,q) = 1, |G| equals |mu(q)|, a Ramanujan sum)"
        ),
    );
}

#[test]
fn criterion_3_character_orthogonality() {
    let start = Instant::now();
    let (mut rows, mut cols, mut size_mismatch) = (0.0f64, 0.0f64, Vec::new());
    for q in 1..=200u64 {
        let group = character_group(q).unwrap();
        let chars = group.characters();
        let units: Vec<u64> = (0..q).filter(|&n| oracle_gcd(n, q) == 1).collect();
        let phi = units.len() as f64;
        if chars.len() != units.len() {
            size_mismatch.push(q);
            continue;
        }
        let tables: Vec<Vec<Complex64>> = chars.iter().map(|c| (0..q).map(|n| c.eval(n)).collect()).collect();
        for (i, x) in tables.iter().enumerate() {
            for (j, y) in tables.iter().enumerate() {
                let s: Complex64 = x.iter().zip(y).map(|(u, v)| u * v.conj()).sum();
                rows = rows.max((s - if i == j { phi } else { 0.0 }).norm());
            }
        }
        for &a in &units {
            for &b in &units {
                let s: Complex64 = tables.iter().map(|t| t[a as usize] * t[b as usize].conj()).sum();
                cols = cols.max((s - if a == b { phi } else { 0.0 }).norm());
            }
        }
    }
    report(
        3,
        "both orthogonality relations to 1e-9 for q <= 200",
        size_mismatch.is_empty() && rows <= 1e-9 && cols <= 1e-9,
        start.elapsed(),
        Duration::from_secs(60),
        &format!("max error over n {rows:.3e}, over characters {cols:.3e}; group-size mismatches {size_mismatch:?}"),
    );
}

#[test]
fn criterion_4_explicit_formula() {
    let start = Instant::now();
    let db = fixture_db();
    let height = db.height(CharacterId::trivial()).unwrap_or(0.0);
    let lam = oracle_lambda(100_000);
    let zeta = DirichletCharacter::principal(1);
    let mut rows = Vec::new();
    let mut bound_ok = height >= 100.0;
    let mut improved = 0;
    for x in [1_000usize, 3_000, 10_000, 100_000] {
        let psi: f64 = lam[..=x].iter().sum();
        let lx = (x as f64).ln();
        let mut errs = [0.0; 2];
        for (i, t) in [50.0, 100.0].into_iter().enumerate() {
            let approx = explicit_psi(&db, x as f64, &zeta, t, RangePolicy::Extended).unwrap();
            errs[i] = (psi - approx.re).abs();
            bound_ok &= errs[i] <= 5.0 * x as f64 * lx * lx / t;
        }
        if errs[1] < errs[0] {
            improved += 1;
        }
        rows.push(format!("x={x}: err(T=50)={:.3} err(T=100)={:.3}", errs[0], errs[1]));
    }
    let trend_ok = improved >= 3;
    report(
        4,
        "|psi - explicit_psi| <= 5 x log^2 x / T for T in {50,100}, and error at T=100 below T=50 for >= 3 of 4 x",
        bound_ok && trend_ok,
        start.elapsed(),
        Duration::from_secs(60),
        &format!(
            "fixture height {height}; bound {}; T=100 better at {improved}/4 (need 3); {}",
            if bound_ok { "holds" } else { "fails" },
            rows.join("; ")
        ),
    );
}

#[test]
fn criterion_5_decomposition_sweep() {
    let start = Instant::now();
    let lambda = sieve_lambda(20 * 100_000 + 1).unwrap();
    let lam = oracle_lambda(20 * 100_000 + 1);
    let mut worst = (0.0f64, String::new());
    let mut failures = Vec::new();
    let mut lhs_disagree = 0;
    let mut runs = 0;
    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q: u64 = rng.gen_range(1..=30);
        let d: u64 = rng.gen_range(1..=20);
        let n: u64 = rng.gen_range(1_000..=100_000);
        let a = loop {
            let a: u64 = rng.gen_range(1..=q);
            if oracle_gcd(a, q) == 1 {
                break a;
            }
        };
        for kappa in [0.0, 0.25 / n as f64, -0.25 / n as f64] {
            let r = verify_decomposition(&lambda, n, d, q, a, kappa, 10.0).unwrap();
            runs += 1;
            let weights: Vec<f64> = (1..=n).map(|m| lam[(d * m + 1) as usize]).collect();
            let direct = direct_dft(&weights, 1, a as f64 / q as f64 + kappa);
            if (direct - r.lhs).norm() > 1e-6 * (1.0 + direct.norm()) {
                lhs_disagree += 1;
            }
            let residual = (direct - r.main).norm();
            let budget = 10.0 * ((d * n) as f64).ln() * (q.max(2) as f64).ln();
            let ratio = residual / budget;
            let row = format!("seed={seed} N={n} d={d} q={q} a={a} kappa={kappa:e} residual={residual:.4} budget={budget:.4}");
            if ratio > worst.0 {
                worst = (ratio, row.clone());
            }
            if ratio > 1.0 {
                failures.push(row);
            }
        }
    }
    report(
        5,
        "decomposition residual <= 10 log(dN) log(max(q,2)) over 50 seeds",
        failures.is_empty() && lhs_disagree == 0,
        start.elapsed(),
        Duration::from_secs(300),
        &format!(
            "{runs} runs, {} over budget, {lhs_disagree} lhs mismatches vs direct sum; worst residual/budget {:.4} at {}",
            failures.len(),
            worst.0,
            worst.1
        ),
    );
}

#[test]
fn criterion_6_major_arc_sweep() {
    let start = Instant::now();
    let n = 100_000u64;
    let lambda = sieve_lambda(3 * n + 1).unwrap();
    let db = fixture_db();
    let setup = MajorArcSetup {
        lambda: &lambda,
        db: &db,
        n,
        big_d: 5.0,
        t: 30.0,
        constants: MajorArcConstants::default(),
        allow_out_of_hypothesis: true,
    };
    let qs: Vec<u64> = (1..=10).collect();
    let reports = major_arc_sweep(&setup, &[1, 2, 3], &qs, &[0.0, 0.25 / n as f64]).unwrap();
    let lam = oracle_lambda((3 * n + 1) as usize);
    let mut lhs_disagree = 0;
    for r in &reports {
        let weights: Vec<f64> = (1..=n).map(|m| lam[(r.d * m + 1) as usize]).collect();
        let direct = direct_dft(&weights, 1, r.a as f64 / r.q as f64 + r.delta).norm();
        if (direct - r.lhs).abs() > 1e-6 * (1.0 + direct) {
            lhs_disagree += 1;
        }
    }
    let failures: Vec<String> = reports.iter().filter(|r| !(r.pass_ratio <= 1.0)).map(|r| r.csv_row()).collect();
    let worst = reports
        .iter()
        .max_by(|x, y| x.pass_ratio.total_cmp(&y.pass_ratio))
        .unwrap();
    let all_unexceptional = reports.iter().all(|r| r.regime == Regime::Unexceptional);
    report(
        6,
        "major-arc pass_ratio <= 1 (d <= 3, q <= 10, N = 1e5, delta in {0, 1/(4N)}, D = 5, T = 30)",
        failures.is_empty() && lhs_disagree == 0 && all_unexceptional,
        start.elapsed(),
        Duration::from_secs(120),
        &format!(
            "{} arcs, {} failures {:?}; {lhs_disagree} lhs mismatches vs direct sum; unexceptional: {all_unexceptional}; \
             worst: d={} q={} a={} delta={:e} lhs={:.2} main={:.2} zero={:.2} tail={:.2} ratio={:.4} required_tail_budget={:.3e}; \
             out of hypothesis: {}",
            reports.len(),
            failures.len(),
            failures,
            worst.d,
            worst.q,
            worst.a,
            worst.delta,
            worst.lhs,
            worst.term_main,
            worst.term_zero,
            worst.term_tail,
            worst.pass_ratio,
            worst.required_tail_budget,
            worst.out_of_hypothesis.join("; ")
        ),
    );
}

#[test]
fn criterion_7_parseval_on_grids() {
    let start = Instant::now();
    let lambda = sieve_lambda(3 * 100_000 + 1).unwrap();
    let lam = oracle_lambda(3 * 100_000 + 1);
    let mut worst = 0.0f64;
    let mut spot = 0.0f64;
    let mut rows = Vec::new();
    for n in [1_000u64, 10_000, 100_000] {
        let m = 4 * n as usize;
        for d in [1u64, 3] {
            let f = FndFunction::new(&lambda, n, d).unwrap();
            let grid = f.fhat_grid(m).unwrap();
            let energy: f64 = grid.iter().map(|p| p.value.norm_sqr()).sum::<f64>() / m as f64;
            let weights: Vec<f64> = (1..=n).map(|k| lam[(d * k + 1) as usize]).collect();
            let l2: f64 = weights.iter().map(|w| w * w).sum();
            let rel = (energy - l2).abs() / l2;
            worst = worst.max(rel);
            rows.push(format!("F N={n} d={d}: {rel:.2e}"));
            for k in [1usize, 7, m / 3] {
                let direct = direct_dft(&weights, 1, k as f64 / m as f64);
                spot = spot.max((direct - grid[k].value).norm() / (1.0 + direct.norm()));
            }
        }
        let set = greedy_set(n, 1, ScanOrder::Random(n));
        let alpha = set.len() as f64 / n as f64;
        let n_prime = (alpha * n as f64).floor() as u64;
        for i_len in [n, n_prime] {
            let g = balanced_function(&set.elements, n, alpha, i_len);
            let mut own = vec![0.0; n as usize];
            for &x in &set.elements {
                own[x as usize - 1] = 1.0;
            }
            for v in own.iter_mut().take(i_len as usize) {
                *v -= alpha;
            }
            let l2: f64 = own.iter().map(|v| v * v).sum();
            let grid = fourier_grid(&g, 1, m);
            let energy: f64 = grid.iter().map(|z| z.norm_sqr()).sum::<f64>() / m as f64;
            let rel = (energy - l2).abs() / l2;
            worst = worst.max(rel);
            rows.push(format!("balanced N={n} |I|={i_len}: {rel:.2e}"));
            for k in [1usize, 5, m / 2 + 1] {
                let direct = direct_dft(&own, 1, k as f64 / m as f64);
                spot = spot.max((direct - grid[k]).norm() / (1.0 + direct.norm()));
            }
        }
    }
    report(
        7,
        "Parseval relative error <= 1e-6 for F_{N,d} and balanced functions, M = 4N, N <= 1e5",
        worst <= 1e-6 && spot <= 1e-6,
        start.elapsed(),
        Duration::from_secs(30),
        &format!("worst {worst:.2e}; grid vs direct sum {spot:.2e}; {}", rows.join(", ")),
    );
}

/// Best density `|A cap P| / |P|` over progressions `P` in `[n]` with
/// difference at most `max_diff` and length at least `min_len`.
fn oracle_best_progression(set: &[u64], n: u64, max_diff: u64, min_len: u64) -> f64 {
    let mut member = vec![false; n as usize + 1];
    for &x in set {
        member[x as usize] = true;
    }
    let mut best = 0.0f64;
    for diff in 1..=max_diff {
        for start in 1..=n {
            let mut count = 0u64;
            let mut len = 0u64;
            let mut x = start;
            while x <= n {
                len += 1;
                if member[x as usize] {
                    count += 1;
                }
                if len >= min_len {
                    best = best.max(count as f64 / len as f64);
                }
                x += diff;
            }
        }
    }
    best
}

#[test]
fn criterion_8_increment_matches_progression_oracle() {
    let start = Instant::now();
    let n = 3_000u64;
    let lambda = sieve_lambda(4 * n + 1).unwrap();
    let constants = IncrementConstants::default().zeroed_thresholds();
    let min_len = n.div_ceil(100);
    let mut failures = Vec::new();
    let mut worst_gap = 0.0f64;
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1_000 + seed);
        let q: u64 = rng.gen_range(2..=7);
        let r: u64 = rng.gen_range(0..q);
        let set: Vec<u64> = greedy_set(n, 1, ScanOrder::Random(seed))
            .elements
            .into_iter()
            .filter(|x| x % q == r)
            .collect();
        if set.is_empty() {
            failures.push(format!("seed {seed}: empty set"));
            continue;
        }
        let alpha = set.len() as f64 / n as f64;
        let out = extract_increment(&set, n, 1, &constants, &lambda, 4).unwrap();
        let oracle = oracle_best_progression(&set, n, 64, min_len);
        let Some(p) = out.progression.filter(|_| out.found) else {
            failures.push(format!("seed {seed} (q={q}, r={r}): nothing found, oracle {oracle:.4}"));
            continue;
        };
        let elems: Vec<u64> = (0..p.length).map(|i| p.start + i * p.difference).collect();
        let in_range = p.start >= 1 && *elems.last().unwrap() <= n;
        let count = elems.iter().filter(|x| set.binary_search(x).is_ok()).count();
        let density = count as f64 / p.length as f64;
        let gap = (oracle - density) / oracle;
        worst_gap = worst_gap.max(gap.abs());
        if !in_range || density <= alpha || gap.abs() > 0.02 || p.difference > 64 || p.length < min_len {
            failures.push(format!(
                "seed {seed} (q={q}, r={r}): d'={} start={} len={} density {density:.4} vs oracle {oracle:.4}, alpha {alpha:.4}",
                p.difference, p.start, p.length
            ));
        }
    }
    report(
        8,
        "extract_increment beats alpha and matches the exhaustive progression oracle within 2% (20 sets, N = 3000)",
        failures.is_empty(),
        start.elapsed(),
        Duration::from_secs(180),
        &format!("{} failures {:?}; worst relative gap {worst_gap:.4}", failures.len(), failures),
    );
}

#[test]
fn criterion_9_dichotomy_routing() {
    let start = Instant::now();
    let k = DichotomyConstants::default();
    let db = fixture_db();
    let genuine = detect_dichotomy(&db, 10.0, 10.0, &k).unwrap();
    let genuine_ok = genuine.kind == Regime::Unexceptional && genuine.witness.is_none();

    let mut planted = db.clone();
    planted.merge(parse_zeros("# complete_to 20\n3 1 0.999 0\n", ZeroFormat::Tabular, "planted").unwrap());
    let v = detect_dichotomy(&planted, 10.0, 10.0, &k).unwrap();
    let witness_ok = v.kind == Regime::Exceptional
        && v.witness.is_some_and(|w| w.character == CharacterId::new(3, 1) && w.modulus == 3 && w.beta == 0.999);

    let mut two = db.clone();
    two.merge(parse_zeros("# complete_to 20\n3 1 0.999 0\n4 1 0.9995 0\n", ZeroFormat::Tabular, "planted").unwrap());
    let violation = detect_dichotomy(&two, 10.0, 10.0, &k);
    let violation_ok = matches!(violation, Err(Error::LemmaViolation(_)));

    report(
        9,
        "genuine fixture unexceptional at (10,10); planted 0.999 at conductor 3 exceptional; two witnesses a lemma violation",
        genuine_ok && witness_ok && violation_ok,
        start.elapsed(),
        Duration::from_secs(1),
        &format!(
            "genuine: {} (threshold {:.6}); planted: {} witness {:?}; two planted: {}",
            genuine.kind,
            genuine.threshold,
            v.kind,
            v.witness.map(|w| (w.character.to_string(), w.beta)),
            match &violation {
                Err(e) => e.to_string(),
                Ok(v) => format!("no error ({})", v.kind),
            }
        ),
    );
}
