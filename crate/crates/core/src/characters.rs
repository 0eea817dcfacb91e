//! Dirichlet characters.
//!
//! A character mod `q` is labelled by its exponent vector with respect to a
//! fixed list of generators of `(Z/qZ)^*`: for each odd prime power `p^e || q`
//! the least primitive root mod `p^e`; for `4 || q` the class of `-1`; for
//! `2^e || q` with `e >= 3` the classes of `-1` and `5`, in that order. Primes
//! are taken in increasing order and every generator is lifted by CRT to be
//! `1` modulo the other prime-power components. The index is the exponent
//! vector read as a mixed-radix number with the first generator most
//! significant, so index `0` is the principal character.
//!
//! Values are stored as exact phase numerators over a common denominator
//! (the exponent of the group) as well as complex numbers.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{crt, euler_phi, factorize, gcd, lcm, primitive_root};
use crate::error::{Error, Result};

/// Default upper bound on the modulus of a character table.
pub const DEFAULT_CHARACTER_LIMIT: u64 = 100_000;

const NON_UNIT: u32 = u32::MAX;

/// Stable identity of a character, serialized as `"q:index"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct CharacterId {
    pub modulus: u64,
    pub index: u64,
}

impl CharacterId {
    pub fn new(modulus: u64, index: u64) -> Self {
        CharacterId { modulus, index }
    }

    /// The trivial character mod 1, whose L-function is ζ.
    pub fn trivial() -> Self {
        CharacterId::new(1, 0)
    }
}

impl fmt::Display for CharacterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.modulus, self.index)
    }
}

impl FromStr for CharacterId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::UnknownCharacter(s.to_string());
        let (q, i) = s.split_once(':').ok_or_else(bad)?;
        let modulus: u64 = q.trim().parse().map_err(|_| bad())?;
        let index: u64 = i.trim().parse().map_err(|_| bad())?;
        if modulus == 0 {
            return Err(bad());
        }
        Ok(CharacterId { modulus, index })
    }
}

impl From<CharacterId> for String {
    fn from(id: CharacterId) -> String {
        id.to_string()
    }
}

impl TryFrom<String> for CharacterId {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[derive(Clone, Debug)]
struct Generator {
    prime: u64,
    prime_power: u64,
    /// generator as a residue mod `prime_power`
    local: u64,
    /// generator lifted to a residue mod q
    lifted: u64,
    order: u64,
}

/// Generators and discrete logarithms for `(Z/qZ)^*`.
#[derive(Clone, Debug)]
pub struct UnitGroup {
    modulus: u64,
    generators: Vec<Generator>,
    /// lcm of the generator orders
    exponent: u64,
    /// `logs[n * r + i]` = discrete log of `n` w.r.t. generator `i`, or
    /// `NON_UNIT` when `gcd(n, q) > 1`
    logs: Vec<u32>,
}

impl UnitGroup {
    pub fn new(q: u64) -> Result<Self> {
        Self::with_max(q, DEFAULT_CHARACTER_LIMIT)
    }

    pub fn with_max(q: u64, max: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        if q > max {
            return Err(Error::LimitExceeded {
                what: "character modulus",
                value: q,
                max,
            });
        }
        let fact = factorize(q);
        let powers: Vec<u64> = fact.prime_powers().collect();

        // local generators per prime power, before lifting
        let mut locals: Vec<(u64, u64, u64, u64)> = Vec::new(); // (p, p^e, g, order)
        for &(p, e) in &fact.factors {
            let pe = p.pow(e);
            if p == 2 {
                match e {
                    1 => {}
                    2 => locals.push((2, pe, pe - 1, 2)),
                    _ => {
                        locals.push((2, pe, pe - 1, 2));
                        locals.push((2, pe, 5, pe / 4));
                    }
                }
            } else {
                let g = primitive_root(pe).expect("odd prime powers have primitive roots");
                locals.push((p, pe, g, euler_phi(pe)));
            }
        }

        let mut generators = Vec::with_capacity(locals.len());
        for &(p, pe, g, order) in &locals {
            let residues: Vec<u64> = powers.iter().map(|&m| if m == pe { g } else { 1 }).collect();
            let lifted = crt(&residues, &powers)?;
            generators.push(Generator {
                prime: p,
                prime_power: pe,
                local: g,
                lifted,
                order,
            });
        }
        let exponent = generators.iter().fold(1, |acc, g| lcm(acc, g.order));

        // discrete log tables per prime power
        let r = generators.len();
        let mut logs = vec![NON_UNIT; q as usize * r.max(1)];
        let mut component_tables: Vec<Vec<u32>> = Vec::with_capacity(r);
        let mut i = 0;
        while i < r {
            let gen = &generators[i];
            let pe = gen.prime_power;
            if gen.prime == 2 && pe >= 8 {
                // pair (-1, 5): residue = (-1)^a 5^b
                let mut ta = vec![NON_UNIT; pe as usize];
                let mut tb = vec![NON_UNIT; pe as usize];
                let mut five = 1u64;
                for b in 0..pe / 4 {
                    ta[five as usize] = 0;
                    tb[five as usize] = b as u32;
                    let neg = pe - five;
                    ta[neg as usize] = 1;
                    tb[neg as usize] = b as u32;
                    five = five * 5 % pe;
                }
                component_tables.push(ta);
                component_tables.push(tb);
                i += 2;
            } else {
                let mut t = vec![NON_UNIT; pe as usize];
                let mut x = 1u64;
                for k in 0..gen.order {
                    t[x as usize] = k as u32;
                    x = x * gen.local % pe;
                }
                component_tables.push(t);
                i += 1;
            }
        }
        for n in 0..q {
            if gcd(n, q) != 1 {
                continue;
            }
            for (i, gen) in generators.iter().enumerate() {
                logs[n as usize * r + i] = component_tables[i][(n % gen.prime_power) as usize];
            }
        }
        if r == 0 {
            // trivial group: every n is a unit mod 1 or 2 iff coprime
            for n in 0..q {
                if gcd(n, q) == 1 {
                    logs[n as usize] = 0;
                }
            }
        }
        Ok(UnitGroup {
            modulus: q,
            generators,
            exponent,
            logs,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Orders of the canonical generators.
    pub fn orders(&self) -> Vec<u64> {
        self.generators.iter().map(|g| g.order).collect()
    }

    /// Canonical generators as residues mod q.
    pub fn generators(&self) -> Vec<u64> {
        self.generators.iter().map(|g| g.lifted).collect()
    }

    pub fn size(&self) -> u64 {
        self.generators.iter().map(|g| g.order).product()
    }

    fn is_unit(&self, n: u64) -> bool {
        let r = self.generators.len().max(1);
        self.logs[(n % self.modulus) as usize * r] != NON_UNIT
    }

    pub fn index_of(&self, exponents: &[u64]) -> u64 {
        exponents
            .iter()
            .zip(&self.generators)
            .fold(0, |acc, (&k, g)| acc * g.order + k)
    }

    pub fn exponents_of(&self, index: u64) -> Result<Vec<u64>> {
        if index >= self.size() {
            return Err(Error::UnknownCharacter(
                CharacterId::new(self.modulus, index).to_string(),
            ));
        }
        let mut rest = index;
        let mut ex = vec![0; self.generators.len()];
        for (slot, g) in ex.iter_mut().zip(&self.generators).rev() {
            *slot = rest % g.order;
            rest /= g.order;
        }
        Ok(ex)
    }

    pub fn character(&self, index: u64) -> Result<DirichletCharacter> {
        let ex = self.exponents_of(index)?;
        Ok(self.character_from_exponents(&ex))
    }

    fn character_from_exponents(&self, exponents: &[u64]) -> DirichletCharacter {
        let q = self.modulus;
        let r = self.generators.len();
        let l = self.exponent;
        // scale each exponent to the common denominator
        let scaled: Vec<u64> = exponents
            .iter()
            .zip(&self.generators)
            .map(|(&k, g)| k * (l / g.order))
            .collect();
        let mut phases = vec![NON_UNIT; q as usize];
        for n in 0..q as usize {
            if r == 0 {
                if self.logs[n] != NON_UNIT {
                    phases[n] = 0;
                }
                continue;
            }
            let row = &self.logs[n * r..(n + 1) * r];
            if row[0] == NON_UNIT {
                continue;
            }
            let mut acc: u128 = 0;
            for (&lg, &s) in row.iter().zip(&scaled) {
                acc += lg as u128 * s as u128;
            }
            phases[n] = (acc % l as u128) as u32;
        }
        let conductor = self.conductor_of(exponents);
        DirichletCharacter::from_phases(
            CharacterId::new(q, self.index_of(exponents)),
            exponents.to_vec(),
            self.orders(),
            l,
            phases,
            conductor,
        )
    }

    fn conductor_of(&self, exponents: &[u64]) -> u64 {
        let mut f = 1u64;
        let mut i = 0;
        while i < self.generators.len() {
            let g = &self.generators[i];
            let (p, pe) = (g.prime, g.prime_power);
            if p == 2 && pe >= 8 {
                let (ka, kb) = (exponents[i], exponents[i + 1]);
                if kb == 0 {
                    if ka != 0 {
                        f *= 4;
                    }
                } else {
                    // smallest 2^c (c >= 3) with 2^(e - c) | kb
                    let mut c = pe;
                    while c > 8 && kb % (pe / (c / 2)) == 0 {
                        c /= 2;
                    }
                    f *= c;
                }
                i += 2;
            } else {
                let k = exponents[i];
                if k != 0 {
                    if p == 2 {
                        f *= 4;
                    } else {
                        // smallest p^c (c >= 1) with p^(e - c) | k
                        let mut c = pe;
                        while c > p && k % (pe / (c / p)) == 0 {
                            c /= p;
                        }
                        f *= c;
                    }
                }
                i += 1;
            }
        }
        f
    }
}

/// Complex root of unity `e(num / den)`, exact on quarter turns.
fn unit_root(num: u64, den: u64) -> Complex64 {
    let num = num % den;
    if (4 * num) % den == 0 {
        return match 4 * num / den {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let (s, c) = (std::f64::consts::TAU * num as f64 / den as f64).sin_cos();
    Complex64::new(c, s)
}

/// `e(t) = exp(2πi t)` with `t` reduced to `[0, 1)` first.
pub fn e(t: f64) -> Complex64 {
    let t = t.rem_euclid(1.0);
    let (s, c) = (std::f64::consts::TAU * t).sin_cos();
    Complex64::new(c, s)
}

/// `e(num / den)` for an exact rational.
pub fn e_rational(num: i64, den: u64) -> Complex64 {
    unit_root(num.rem_euclid(den as i64) as u64, den)
}

/// A fully evaluated Dirichlet character.
#[derive(Clone, Debug)]
pub struct DirichletCharacter {
    id: CharacterId,
    exponents: Vec<u64>,
    orders: Vec<u64>,
    denominator: u64,
    phases: Vec<u32>,
    values: Vec<Complex64>,
    conductor: u64,
    is_real: bool,
}

impl DirichletCharacter {
    fn from_phases(
        id: CharacterId,
        exponents: Vec<u64>,
        orders: Vec<u64>,
        denominator: u64,
        phases: Vec<u32>,
        conductor: u64,
    ) -> Self {
        let values: Vec<Complex64> = phases
            .iter()
            .map(|&ph| {
                if ph == NON_UNIT {
                    Complex64::new(0.0, 0.0)
                } else {
                    unit_root(ph as u64, denominator)
                }
            })
            .collect();
        let is_real = phases
            .iter()
            .all(|&ph| ph == NON_UNIT || (2 * ph as u64) % denominator == 0);
        DirichletCharacter {
            id,
            exponents,
            orders,
            denominator,
            phases,
            values,
            conductor,
            is_real,
        }
    }

    /// The principal character mod q, without building the whole group.
    pub fn principal(q: u64) -> Self {
        assert!(q >= 1);
        let phases: Vec<u32> = (0..q)
            .map(|n| if gcd(n, q) == 1 { 0 } else { NON_UNIT })
            .collect();
        let orders = UnitGroup::generator_orders(q);
        DirichletCharacter::from_phases(
            CharacterId::new(q, 0),
            vec![0; orders.len()],
            orders,
            1,
            phases,
            1,
        )
    }

    /// Builds the character `q:index` directly.
    pub fn from_id(id: CharacterId) -> Result<Self> {
        UnitGroup::new(id.modulus)?.character(id.index)
    }

    pub fn id(&self) -> CharacterId {
        self.id
    }

    pub fn modulus(&self) -> u64 {
        self.id.modulus
    }

    pub fn index(&self) -> u64 {
        self.id.index
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.id.modulus
    }

    pub fn is_principal(&self) -> bool {
        self.id.index == 0
    }

    pub fn is_real(&self) -> bool {
        self.is_real
    }

    /// `+1` for even characters, `-1` for odd ones.
    pub fn parity(&self) -> i32 {
        let q = self.modulus();
        if q <= 2 {
            return 1;
        }
        if self.phases[(q - 1) as usize] == 0 {
            1
        } else {
            -1
        }
    }

    /// Order of the character in the character group.
    pub fn order(&self) -> u64 {
        self.phases
            .iter()
            .filter(|&&ph| ph != NON_UNIT)
            .fold(1, |acc, &ph| {
                let den = self.denominator / gcd(ph as u64, self.denominator);
                lcm(acc, den)
            })
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// χ(n) for any non-negative n.
    pub fn eval(&self, n: u64) -> Complex64 {
        self.values[(n % self.modulus()) as usize]
    }

    pub fn eval_signed(&self, n: i64) -> Complex64 {
        let q = self.modulus() as i64;
        self.values[n.rem_euclid(q) as usize]
    }

    /// Exact phase of χ(n) as a fraction `(num, den)`, or `None` off units.
    pub fn phase(&self, n: u64) -> Option<(u64, u64)> {
        let ph = self.phases[(n % self.modulus()) as usize];
        (ph != NON_UNIT).then_some((ph as u64, self.denominator))
    }

    pub fn conj(&self) -> DirichletCharacter {
        let den = self.denominator;
        let phases: Vec<u32> = self
            .phases
            .iter()
            .map(|&ph| {
                if ph == NON_UNIT {
                    NON_UNIT
                } else {
                    ((den - ph as u64) % den) as u32
                }
            })
            .collect();
        let exponents: Vec<u64> = self
            .exponents
            .iter()
            .zip(&self.orders)
            .map(|(&k, &m)| (m - k) % m)
            .collect();
        let index = exponents
            .iter()
            .zip(&self.orders)
            .fold(0, |acc, (&k, &m)| acc * m + k);
        DirichletCharacter::from_phases(
            CharacterId::new(self.modulus(), index),
            exponents,
            self.orders.clone(),
            den,
            phases,
            self.conductor,
        )
    }
}

impl UnitGroup {
    fn generator_orders(q: u64) -> Vec<u64> {
        let mut orders = Vec::new();
        for (p, e) in factorize(q).factors {
            match (p, e) {
                (2, 1) => {}
                (2, 2) => orders.push(2),
                (2, _) => orders.extend([2, 1 << (e - 2)]),
                _ => orders.push(euler_phi(p.pow(e))),
            }
        }
        orders
    }
}

/// All φ(q) characters mod q, in index order.
#[derive(Clone, Debug)]
pub struct CharacterGroup {
    structure: UnitGroup,
    characters: Vec<DirichletCharacter>,
}

impl CharacterGroup {
    pub fn modulus(&self) -> u64 {
        self.structure.modulus
    }

    pub fn structure(&self) -> &UnitGroup {
        &self.structure
    }

    pub fn characters(&self) -> &[DirichletCharacter] {
        &self.characters
    }

    pub fn len(&self) -> usize {
        self.characters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.characters.is_empty()
    }

    pub fn principal(&self) -> &DirichletCharacter {
        &self.characters[0]
    }

    pub fn get(&self, index: u64) -> Option<&DirichletCharacter> {
        self.characters.get(index as usize)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, DirichletCharacter> {
        self.characters.iter()
    }

    /// Whether `n` is a unit mod q.
    pub fn is_unit(&self, n: u64) -> bool {
        self.structure.is_unit(n)
    }
}

impl<'a> IntoIterator for &'a CharacterGroup {
    type Item = &'a DirichletCharacter;
    type IntoIter = std::slice::Iter<'a, DirichletCharacter>;

    fn into_iter(self) -> Self::IntoIter {
        self.characters.iter()
    }
}

pub fn character_group(q: u64) -> Result<CharacterGroup> {
    character_group_with_max(q, DEFAULT_CHARACTER_LIMIT)
}

pub fn character_group_with_max(q: u64, max: u64) -> Result<CharacterGroup> {
    let structure = UnitGroup::with_max(q, max)?;
    let characters = (0..structure.size())
        .map(|i| structure.character(i))
        .collect::<Result<Vec<_>>>()?;
    debug_assert_eq!(characters.len() as u64, euler_phi(q));
    Ok(CharacterGroup {
        structure,
        characters,
    })
}

/// Returns the conductor of χ and the primitive character inducing it.
pub fn conductor_and_inducer(chi: &DirichletCharacter) -> Result<(u64, DirichletCharacter)> {
    let f = chi.conductor();
    if f == chi.modulus() {
        return Ok((f, chi.clone()));
    }
    let q = chi.modulus();
    let target = UnitGroup::new(f)?;
    let mut exponents = Vec::with_capacity(target.generators.len());
    for g in &target.generators {
        // a lift of the generator mod f that is a unit mod q
        let mut n = g.lifted % f.max(1);
        while gcd(n, q) != 1 {
            n += f;
        }
        let (num, den) = chi.phase(n).expect("lift is a unit");
        // χ(n) = e(num/den) = e(k / order)
        let k = num as u128 * g.order as u128;
        debug_assert_eq!(k % den as u128, 0);
        exponents.push((k / den as u128) as u64 % g.order);
    }
    let inducer = target.character_from_exponents(&exponents);
    debug_assert!(inducer.is_primitive());
    Ok((f, inducer))
}

/// Checks `χ(n) = χ₁(n) χ′(n)` on the sample, with χ′ principal mod q.
pub fn verify_induction_identity(
    chi: &DirichletCharacter,
    inducer: &DirichletCharacter,
    sample: impl IntoIterator<Item = u64>,
) -> bool {
    let q = chi.modulus();
    sample.into_iter().all(|n| {
        let principal = if gcd(n % q, q) == 1 { 1.0 } else { 0.0 };
        let rhs = inducer.eval(n) * principal;
        (chi.eval(n) - rhs).norm() <= 1e-12
    })
}

/// Identities of every primitive character with modulus in `1..=max_q`.
pub fn primitive_characters_up_to(max_q: u64) -> Result<Vec<DirichletCharacter>> {
    let mut out = Vec::new();
    for q in 1..=max_q {
        let g = UnitGroup::new(q)?;
        for i in 0..g.size() {
            let ex = g.exponents_of(i)?;
            if g.conductor_of(&ex) == q {
                out.push(g.character_from_exponents(&ex));
            }
        }
    }
    Ok(out)
}

/// Whether the modulus has any primitive character at all.
pub fn has_primitive_characters(q: u64) -> bool {
    q % 4 != 2
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    #[test]
    fn character_id_serializes_as_label() {
        let id = CharacterId::new(3, 1);
        assert_eq!(serde_json::to_string(&id).unwrap(), "\"3:1\"");
        assert_eq!(serde_json::from_str::<CharacterId>("\"12:7\"").unwrap(), CharacterId::new(12, 7));
        assert!(serde_json::from_str::<CharacterId>("\"0:1\"").is_err());
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn modulus_one() {
        let g = character_group(1).unwrap();
        assert_eq!(g.len(), 1);
        let chi = g.principal();
        for n in 0..50 {
            assert_eq!(chi.eval(n), Complex64::new(1.0, 0.0));
        }
        assert_eq!(chi.conductor(), 1);
        assert!(chi.is_primitive());
    }

    #[test]
    fn modulus_four() {
        let g = character_group(4).unwrap();
        assert_eq!(g.len(), 2);
        let chi = g.get(1).unwrap();
        assert!(close(chi.eval(3), Complex64::new(-1.0, 0.0), 0.0));
        assert!(close(chi.eval(1), Complex64::new(1.0, 0.0), 0.0));
        assert_eq!(chi.conductor(), 4);
        assert!(chi.is_real());
    }

    #[test]
    fn modulus_five_has_order_four_character() {
        let g = character_group(5).unwrap();
        assert_eq!(g.len(), 4);
        let i = Complex64::new(0.0, 1.0);
        assert!(g.iter().any(|c| close(c.eval(2), i, TOL)));
        assert!(g.iter().any(|c| c.order() == 4));
    }

    #[test]
    fn structural_invariants() {
        for q in 1..=120u64 {
            let g = character_group(q).unwrap();
            assert_eq!(g.len() as u64, euler_phi(q));
            assert_eq!(g.iter().filter(|c| c.is_principal()).count(), 1);
            for chi in &g {
                assert!(close(chi.eval(1), Complex64::new(1.0, 0.0), TOL));
                for n in 0..q {
                    let v = chi.eval(n);
                    if gcd(n, q) == 1 {
                        assert!((v.norm() - 1.0).abs() <= TOL);
                    } else {
                        assert_eq!(v, Complex64::new(0.0, 0.0));
                    }
                    assert_eq!(chi.eval(n + q), v);
                }
                for m in 0..q {
                    for n in 0..q {
                        let lhs = chi.eval(m * n);
                        assert!(close(lhs, chi.eval(m) * chi.eval(n), TOL), "q={q}");
                    }
                }
                assert_eq!(q % chi.conductor(), 0);
                let real = chi
                    .values()
                    .iter()
                    .all(|v| v.im == 0.0 && [-1.0, 0.0, 1.0].contains(&v.re));
                assert_eq!(chi.is_real(), real);
                let c = chi.conj();
                let member = g.get(c.index()).unwrap();
                assert_eq!(member.conductor(), chi.conductor());
                for n in 0..q {
                    assert!(close(member.eval(n), chi.eval(n).conj(), TOL));
                }
            }
        }
    }

    #[test]
    fn character_count_matches_phi() {
        for q in [1u64, 2, 8, 16, 64, 97, 360, 1024, 2310] {
            assert_eq!(character_group(q).unwrap().len() as u64, euler_phi(q));
        }
    }

    /// Conductor by brute force: least f | q such that χ is constant on the
    /// units of each residue class mod f.
    fn brute_conductor(chi: &DirichletCharacter) -> u64 {
        let q = chi.modulus();
        (1..=q)
            .filter(|f| q % f == 0)
            .find(|&f| {
                (0..q).filter(|&n| gcd(n, q) == 1).all(|n| {
                    (0..q)
                        .filter(|&m| gcd(m, q) == 1 && m % f == n % f)
                        .all(|m| close(chi.eval(m), chi.eval(n), 1e-9))
                })
            })
            .unwrap()
    }

    #[test]
    fn conductor_matches_brute_force() {
        for q in 1..=72u64 {
            for chi in &character_group(q).unwrap() {
                assert_eq!(chi.conductor(), brute_conductor(chi), "{}", chi.id());
            }
        }
    }

    #[test]
    fn principal_conductor_one() {
        for q in [1u64, 6, 30, 64] {
            let g = character_group(q).unwrap();
            let (f, inducer) = conductor_and_inducer(g.principal()).unwrap();
            assert_eq!(f, 1);
            assert_eq!(inducer.id(), CharacterId::trivial());
            assert!(verify_induction_identity(g.principal(), &inducer, 1..=q));
        }
    }

    #[test]
    fn mod_eight_from_mod_four() {
        let g = character_group(8).unwrap();
        let from_four: Vec<_> = g.iter().filter(|c| c.conductor() == 4).collect();
        assert_eq!(from_four.len(), 1);
        let chi = from_four[0];
        let (f, inducer) = conductor_and_inducer(chi).unwrap();
        assert_eq!(f, 4);
        assert_eq!(inducer.id(), CharacterId::new(4, 1));
        assert!(verify_induction_identity(chi, &inducer, 1..=100));
        // mismatched pair
        let other = g.iter().find(|c| c.conductor() == 8).unwrap();
        assert!(!verify_induction_identity(other, &inducer, 1..=100));
    }

    #[test]
    fn primitive_is_own_inducer_and_induction_holds() {
        for q in 1..=90u64 {
            for chi in &character_group(q).unwrap() {
                let (f, inducer) = conductor_and_inducer(chi).unwrap();
                assert_eq!(f, chi.conductor());
                assert!(inducer.is_primitive());
                if chi.is_primitive() {
                    assert_eq!(inducer.id(), chi.id());
                }
                assert!(verify_induction_identity(chi, &inducer, 0..3 * q), "{}", chi.id());
            }
        }
    }

    #[test]
    fn primitive_counts() {
        // number of primitive characters mod q, by Möbius inversion
        let prims = primitive_characters_up_to(40).unwrap();
        for q in 1..=40u64 {
            let count = prims.iter().filter(|c| c.modulus() == q).count() as i64;
            let divisors: Vec<u64> = (1..=q).filter(|d| q % d == 0).collect();
            let from_totals: i64 = divisors
                .iter()
                .map(|&d| mobius(q / d) * euler_phi(d) as i64)
                .sum();
            assert_eq!(count, from_totals, "q={q}");
            assert_eq!(count > 0, has_primitive_characters(q));
        }
    }

    fn mobius(n: u64) -> i64 {
        let f = factorize(n);
        if f.factors.iter().any(|&(_, e)| e > 1) {
            0
        } else if f.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    #[test]
    fn id_round_trip() {
        let id: CharacterId = "12:3".parse().unwrap();
        assert_eq!(id, CharacterId::new(12, 3));
        assert_eq!(id.to_string(), "12:3");
        assert!("12".parse::<CharacterId>().is_err());
        assert!("0:0".parse::<CharacterId>().is_err());
        assert!("3:x".parse::<CharacterId>().is_err());
    }

    #[test]
    fn limit_enforced() {
        assert!(matches!(
            character_group_with_max(101, 100),
            Err(Error::LimitExceeded { .. })
        ));
    }
}
