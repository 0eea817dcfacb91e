//! Sieves and elementary multiplicative functions.
//!
//! Everything here is exact integer arithmetic except the von Mangoldt
//! table, which stores `log p` as `f64`.

use crate::error::{Error, Result};

/// Default upper bound on the size of a von Mangoldt table.
pub const DEFAULT_SIEVE_LIMIT: u64 = 100_000_000;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Extended Euclid: returns `(g, x, y)` with `a x + b y = g`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = ext_gcd(a as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

/// Chinese remaindering for pairwise coprime moduli. Returns the residue
/// modulo the product.
pub fn crt(residues: &[u64], moduli: &[u64]) -> Result<u64> {
    let mut r = 0u64;
    let mut m = 1u64;
    for (&ri, &mi) in residues.iter().zip(moduli) {
        let inv = mod_inverse(m % mi, mi).ok_or(Error::NotCoprime { a: m, n: mi })?;
        // r' = r + m * ((ri - r) * m^{-1} mod mi)
        let diff = (ri % mi + mi - r % mi) % mi;
        let t = mul_mod(diff, inv, mi);
        r += m * t;
        m *= mi;
    }
    Ok(r % m.max(1))
}

/// Odd-only bitset sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    // bit i represents 2i + 1
    let half = (n as usize - 1) / 2 + 1;
    let mut composite = vec![0u64; half.div_ceil(64)];
    let mut i = 1usize;
    while (2 * i + 1) * (2 * i + 1) <= n as usize {
        if composite[i / 64] >> (i % 64) & 1 == 0 {
            let p = 2 * i + 1;
            let mut j = (p * p - 1) / 2;
            while j < half {
                composite[j / 64] |= 1 << (j % 64);
                j += p;
            }
        }
        i += 1;
    }
    let mut primes = Vec::with_capacity(estimate_prime_count(n));
    primes.push(2);
    primes.extend(
        (1..half)
            .filter(|&i| composite[i / 64] >> (i % 64) & 1 == 0)
            .map(|i| (2 * i + 1) as u64),
    );
    primes
}

fn estimate_prime_count(n: u64) -> usize {
    let x = n as f64;
    if x < 17.0 {
        8
    } else {
        (1.3 * x / x.ln()) as usize
    }
}

/// Sieved values of the von Mangoldt function on `1..=limit`.
#[derive(Clone, Debug)]
pub struct LambdaTable {
    limit: u64,
    // index 0 unused
    values: Vec<f64>,
}

impl LambdaTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Λ(n); zero for n = 0 or n beyond the table.
    pub fn get(&self, n: u64) -> f64 {
        self.values.get(n as usize).copied().unwrap_or(0.0)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Chebyshev ψ(x) = Σ_{n ≤ x} Λ(n), summed in increasing n.
    pub fn psi(&self, x: u64) -> f64 {
        let top = x.min(self.limit) as usize;
        self.values[1..=top].iter().sum()
    }

    /// Iterator over `(n, Λ(n))` for the prime powers `n ≤ x`.
    pub fn prime_powers(&self, x: u64) -> impl Iterator<Item = (u64, f64)> + '_ {
        let top = x.min(self.limit) as usize;
        self.values[..=top]
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0.0)
            .map(|(n, &v)| (n as u64, v))
    }

    /// Ensures the table reaches `x`.
    pub fn require(&self, x: u64) -> Result<()> {
        if x > self.limit {
            Err(Error::LimitExceeded {
                what: "sieve argument",
                value: x,
                max: self.limit,
            })
        } else {
            Ok(())
        }
    }
}

/// Λ(n) for n ≤ x, with the default maximum table size.
pub fn sieve_lambda(x: u64) -> Result<LambdaTable> {
    sieve_lambda_with_max(x, DEFAULT_SIEVE_LIMIT)
}

pub fn sieve_lambda_with_max(x: u64, max: u64) -> Result<LambdaTable> {
    if x == 0 {
        return Err(Error::InvalidArgument("sieve limit must be at least 1".into()));
    }
    if x > max {
        return Err(Error::LimitExceeded {
            what: "sieve limit",
            value: x,
            max,
        });
    }
    let mut values = vec![0.0f64; x as usize + 1];
    for p in primes_up_to(x) {
        let lp = (p as f64).ln();
        let mut pk = p;
        loop {
            values[pk as usize] = lp;
            match pk.checked_mul(p) {
                Some(next) if next <= x => pk = next,
                _ => break,
            }
        }
    }
    Ok(LambdaTable { limit: x, values })
}

/// Smallest-prime-factor table for fast factorization of small integers.
#[derive(Clone, Debug)]
pub struct SpfTable {
    spf: Vec<u32>,
}

impl SpfTable {
    /// Linear sieve up to `n`.
    pub fn new(n: u32) -> Self {
        let n = n as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes: Vec<u32> = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            for &p in &primes {
                let m = i * p as usize;
                if p > spf[i] || m > n {
                    break;
                }
                spf[m] = p;
            }
        }
        SpfTable { spf }
    }

    pub fn limit(&self) -> u64 {
        self.spf.len() as u64 - 1
    }

    pub fn factorize(&self, n: u64) -> FactoredInteger {
        assert!(n >= 1 && n <= self.limit(), "{n} outside SPF table");
        let mut factors: Vec<(u64, u32)> = Vec::new();
        let mut m = n as usize;
        while m > 1 {
            let p = self.spf[m] as u64;
            let mut e = 0;
            while m as u64 % p == 0 {
                m /= p as usize;
                e += 1;
            }
            factors.push((p, e));
        }
        FactoredInteger { n, factors }
    }
}

/// `n` together with its prime factorization, primes strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredInteger {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    pub fn prime_powers(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, e)| p.pow(e))
    }
}

/// Trial-division factorization.
pub fn factorize(n: u64) -> FactoredInteger {
    assert!(n >= 1);
    let mut factors = Vec::new();
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        factors.push((m, 1));
    }
    FactoredInteger { n, factors }
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .factors
        .iter()
        .map(|&(p, e)| (p - 1) * p.pow(e - 1))
        .product()
}

/// Möbius function.
pub fn moebius(n: u64) -> i32 {
    let f = factorize(n);
    if f.factors.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.factors.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n).factors == [(n, 1)]
}

/// `{ (p − 1)/d : p prime, d | p − 1, 1 ≤ (p − 1)/d ≤ n }`, ascending.
pub fn shifted_prime_targets(n: u64, d: u64) -> Vec<u64> {
    assert!(n >= 1 && d >= 1);
    primes_up_to(d * n + 1)
        .into_iter()
        .filter(|&p| (p - 1) % d == 0)
        .map(|p| (p - 1) / d)
        .filter(|&t| t >= 1 && t <= n)
        .collect()
}

/// Least `k ≥ 1` with `a^k ≡ 1 (mod n)`.
pub fn multiplicative_order(a: u64, n: u64) -> Result<u64> {
    if n == 0 || gcd(a % n.max(1), n) != 1 {
        return Err(Error::NotCoprime { a, n });
    }
    if n == 1 {
        return Ok(1);
    }
    let mut order = euler_phi(n);
    // strip prime factors of φ(n) while the power stays 1
    for (p, _) in factorize(order).factors {
        while order % p == 0 && pow_mod(a, order / p, n) == 1 {
            order /= p;
        }
    }
    Ok(order)
}

/// Least primitive root modulo `n`, or `None` when the unit group is not
/// cyclic (n ∉ {1, 2, 4, p^k, 2p^k}).
pub fn primitive_root(n: u64) -> Option<u64> {
    if n == 1 || n == 2 {
        return Some(1);
    }
    if n == 4 {
        return Some(3);
    }
    let f = factorize(n);
    let cyclic = match f.factors.as_slice() {
        [(p, _)] => *p != 2,
        [(2, 1), (p, _)] => *p != 2,
        _ => false,
    };
    if !cyclic {
        return None;
    }
    let phi = euler_phi(n);
    let phi_primes: Vec<u64> = factorize(phi).factors.iter().map(|&(p, _)| p).collect();
    (2..n).find(|&g| gcd(g, n) == 1 && phi_primes.iter().all(|&p| pow_mod(g, phi / p, n) != 1))
}
