//! Tabulated zeros of Dirichlet L-functions.
//!
//! Zeros are data. A source file must declare the height to which it is
//! complete, and every query beyond that height is an error rather than a
//! silently truncated sum.
//!
//! Two formats are accepted:
//!
//! * zeta-heights: one positive ordinate per line, `beta = 1/2`, character `1:0`;
//! * tabular: `q index beta gamma [multiplicity]` per line.
//!
//! Both use `#` comments and require a `# complete_to <H>` line. Tabular files
//! may also list `# covers q:index ...` lines naming characters that are
//! complete to `H` even though they contribute no zeros below it. Entries of
//! real characters are mirrored (`gamma -> -gamma`) at load time.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::characters::{
    character_group, conductor_and_inducer, primitive_characters_up_to, CharacterId,
    DirichletCharacter, UnitGroup,
};
use crate::error::{Error, Result};

/// Environment variable overriding the fixture directory.
pub const DATA_DIR_ENV: &str = "SHIFTEDPRIME_DATA";

/// `$SHIFTEDPRIME_DATA`, or the `data/` directory of the source checkout.
pub fn default_data_dir() -> PathBuf {
    match std::env::var_os(DATA_DIR_ENV) {
        Some(dir) => PathBuf::from(dir),
        None => PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data")),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZeroFormat {
    ZetaHeights,
    Tabular,
}

impl std::str::FromStr for ZeroFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zeta-heights" => Ok(ZeroFormat::ZetaHeights),
            "tabular" => Ok(ZeroFormat::Tabular),
            other => Err(Error::InvalidArgument(format!("unknown zero format '{other}'"))),
        }
    }
}

/// A nontrivial zero `beta + i gamma` of `L(s, chi)` for a primitive chi.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroEntry {
    pub character: CharacterId,
    pub beta: f64,
    pub gamma: f64,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SourceInfo {
    pub name: String,
    pub format: ZeroFormat,
    pub complete_to: f64,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, Default)]
pub struct ZeroDatabase {
    entries: BTreeMap<CharacterId, Vec<ZeroEntry>>,
    heights: BTreeMap<CharacterId, f64>,
    sources: Vec<SourceInfo>,
}

const SAME_ZERO_TOL: f64 = 1e-9;

fn same_zero(a: &ZeroEntry, b: &ZeroEntry) -> bool {
    (a.beta - b.beta).abs() <= SAME_ZERO_TOL && (a.gamma - b.gamma).abs() <= SAME_ZERO_TOL
}

pub fn load_zeros(path: impl AsRef<Path>, format: ZeroFormat) -> Result<ZeroDatabase> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_zeros(&text, format, &path.display().to_string())
}

/// Parses a zero file already in memory.
pub fn parse_zeros(text: &str, format: ZeroFormat, source: &str) -> Result<ZeroDatabase> {
    let mut complete_to: Option<f64> = None;
    let mut notes = Vec::new();
    let mut covers: Vec<CharacterId> = Vec::new();
    let mut entries: Vec<ZeroEntry> = Vec::new();
    let mut primitive_cache: BTreeMap<u64, UnitGroup> = BTreeMap::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim();
            let mut words = comment.split_whitespace();
            match words.next() {
                Some("complete_to") => {
                    let h = words
                        .next()
                        .and_then(|w| w.parse::<f64>().ok())
                        .filter(|h| h.is_finite() && *h >= 0.0)
                        .ok_or_else(|| Error::Parse {
                            line: line_no,
                            msg: "complete_to needs a non-negative height".into(),
                        })?;
                    complete_to = Some(h);
                }
                Some("covers") if format == ZeroFormat::Tabular => {
                    for w in words {
                        let id: CharacterId = w.parse().map_err(|_| Error::Parse {
                            line: line_no,
                            msg: format!("bad character '{w}'"),
                        })?;
                        check_primitive(id, &mut primitive_cache, line_no)?;
                        covers.push(id);
                    }
                }
                _ => notes.push(comment.to_string()),
            }
            continue;
        }
        let entry = match format {
            ZeroFormat::ZetaHeights => parse_height_line(line, line_no)?,
            ZeroFormat::Tabular => {
                let e = parse_tabular_line(line, line_no)?;
                check_primitive(e.character, &mut primitive_cache, line_no)?;
                e
            }
        };
        entries.push(entry);
    }

    let complete_to = complete_to.ok_or(Error::MissingCompletenessHeader)?;
    let mut db = ZeroDatabase::default();
    if format == ZeroFormat::ZetaHeights {
        covers.push(CharacterId::trivial());
    }
    for id in covers.iter().chain(entries.iter().map(|e| &e.character)) {
        db.heights.insert(*id, complete_to);
        db.entries.entry(*id).or_default();
    }
    for e in entries {
        db.entries.get_mut(&e.character).unwrap().push(e);
    }
    // real characters: mirror gamma > 0 entries
    let ids: Vec<CharacterId> = db.entries.keys().copied().collect();
    for id in ids {
        let real = match id.modulus {
            1 => true,
            q => primitive_cache
                .get(&q)
                .map(|g| g.character(id.index).map(|c| c.is_real()))
                .transpose()?
                .unwrap_or(false),
        };
        let list = db.entries.get_mut(&id).unwrap();
        if real {
            let mirrored: Vec<ZeroEntry> = list
                .iter()
                .filter(|e| e.gamma > 0.0)
                .map(|e| ZeroEntry { gamma: -e.gamma, ..*e })
                .collect();
            for m in mirrored {
                if !list.iter().any(|e| same_zero(e, &m)) {
                    list.push(m);
                }
            }
        }
        list.sort_by(|a, b| a.gamma.total_cmp(&b.gamma).then(a.beta.total_cmp(&b.beta)));
    }
    db.sources.push(SourceInfo {
        name: source.to_string(),
        format,
        complete_to,
        notes,
    });
    Ok(db)
}

fn parse_height_line(line: &str, line_no: usize) -> Result<ZeroEntry> {
    let gamma: f64 = line.parse().map_err(|_| Error::Parse {
        line: line_no,
        msg: format!("expected an ordinate, got '{line}'"),
    })?;
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::Parse {
            line: line_no,
            msg: "ordinates must be positive".into(),
        });
    }
    Ok(ZeroEntry {
        character: CharacterId::trivial(),
        beta: 0.5,
        gamma,
        multiplicity: 1,
    })
}

fn parse_tabular_line(line: &str, line_no: usize) -> Result<ZeroEntry> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    let bad = |msg: String| Error::Parse { line: line_no, msg };
    if fields.len() != 4 && fields.len() != 5 {
        return Err(bad(format!("expected 'q index beta gamma [multiplicity]', got '{line}'")));
    }
    let q: u64 = fields[0].parse().map_err(|_| bad(format!("bad modulus '{}'", fields[0])))?;
    let index: u64 = fields[1].parse().map_err(|_| bad(format!("bad index '{}'", fields[1])))?;
    let beta: f64 = fields[2].parse().map_err(|_| bad(format!("bad beta '{}'", fields[2])))?;
    let gamma: f64 = fields[3].parse().map_err(|_| bad(format!("bad gamma '{}'", fields[3])))?;
    let multiplicity: u32 = match fields.get(4) {
        Some(m) => m.parse().map_err(|_| bad(format!("bad multiplicity '{m}'")))?,
        None => 1,
    };
    if q == 0 || multiplicity == 0 || !gamma.is_finite() {
        return Err(bad(format!("invalid entry '{line}'")));
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::BetaOutOfRange {
            line: line_no,
            beta,
        });
    }
    Ok(ZeroEntry {
        character: CharacterId::new(q, index),
        beta,
        gamma,
        multiplicity,
    })
}

fn check_primitive(
    id: CharacterId,
    cache: &mut BTreeMap<u64, UnitGroup>,
    line_no: usize,
) -> Result<()> {
    if id.modulus == 1 {
        return if id.index == 0 {
            Ok(())
        } else {
            Err(Error::Parse {
                line: line_no,
                msg: format!("unknown character {id}"),
            })
        };
    }
    if !cache.contains_key(&id.modulus) {
        cache.insert(id.modulus, UnitGroup::new(id.modulus)?);
    }
    let chi = cache[&id.modulus].character(id.index).map_err(|_| Error::Parse {
        line: line_no,
        msg: format!("unknown character {id}"),
    })?;
    if !chi.is_primitive() {
        return Err(Error::Parse {
            line: line_no,
            msg: format!("character {id} is not primitive"),
        });
    }
    Ok(())
}

impl ZeroDatabase {
    /// Loads every source, merging them.
    pub fn load_all<P: AsRef<Path>>(sources: &[(P, ZeroFormat)]) -> Result<Self> {
        let mut db = ZeroDatabase::default();
        for (path, format) in sources {
            db.merge(load_zeros(path, *format)?);
        }
        Ok(db)
    }

    /// The shipped fixtures: zeta zeros and small-conductor L-function zeros.
    pub fn load_fixtures(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        Self::load_all(&[
            (dir.join("zeta_zeros.txt"), ZeroFormat::ZetaHeights),
            (dir.join("dirichlet_zeros.txt"), ZeroFormat::Tabular),
        ])
    }

    /// Union of the two databases; duplicate zeros are kept once and each
    /// character keeps the larger completeness height.
    pub fn merge(&mut self, other: ZeroDatabase) {
        for (id, list) in other.entries {
            let mine = self.entries.entry(id).or_default();
            for e in list {
                if !mine.iter().any(|m| same_zero(m, &e)) {
                    mine.push(e);
                }
            }
            mine.sort_by(|a, b| a.gamma.total_cmp(&b.gamma).then(a.beta.total_cmp(&b.beta)));
        }
        for (id, h) in other.heights {
            let slot = self.heights.entry(id).or_insert(h);
            *slot = slot.max(h);
        }
        self.sources.extend(other.sources);
    }

    pub fn sources(&self) -> &[SourceInfo] {
        &self.sources
    }

    /// Completeness height of a primitive character, if covered at all.
    pub fn height(&self, id: CharacterId) -> Option<f64> {
        self.heights.get(&id).copied()
    }

    pub fn characters(&self) -> impl Iterator<Item = CharacterId> + '_ {
        self.heights.keys().copied()
    }

    pub fn entries(&self, id: CharacterId) -> &[ZeroEntry] {
        self.entries.get(&id).map(Vec::as_slice).unwrap_or(&[])
    }

    fn require(&self, id: CharacterId, t: f64) -> Result<()> {
        let available = self.height(id).unwrap_or(0.0);
        if self.height(id).is_none() || t > available {
            return Err(Error::IncompleteData {
                character: id.to_string(),
                requested: t,
                available,
            });
        }
        Ok(())
    }

    /// `Z(chi; T)` for a primitive character given by identity.
    pub fn window_for(&self, id: CharacterId, t: f64) -> Result<Vec<ZeroEntry>> {
        if !(t >= 1.0) {
            return Err(Error::RangeViolation(format!("zero window height {t} < 1")));
        }
        self.require(id, t)?;
        let mut out = Vec::new();
        for e in self.entries(id) {
            if e.beta >= 0.5 && e.gamma.abs() <= t {
                for _ in 0..e.multiplicity {
                    out.push(ZeroEntry {
                        multiplicity: 1,
                        ..*e
                    });
                }
            }
        }
        Ok(out)
    }
}

/// `Z(chi; T)`: zeros with `beta >= 1/2`, `|gamma| <= T`, one entry per
/// multiplicity. Non-primitive characters use the zeros of their inducer.
pub fn zero_window(db: &ZeroDatabase, chi: &DirichletCharacter, t: f64) -> Result<Vec<ZeroEntry>> {
    let (_, inducer) = conductor_and_inducer(chi)?;
    db.window_for(inducer.id(), t)
}

/// CSV rows `q,index,beta,gamma` with a header line.
pub fn entries_to_csv(entries: &[ZeroEntry]) -> String {
    let mut out = String::from("q,index,beta,gamma\n");
    for e in entries {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            e.character.modulus, e.character.index, e.beta, e.gamma
        );
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DichotomyConstants {
    pub c1: f64,
    pub big_c1: f64,
}

impl Default for DichotomyConstants {
    fn default() -> Self {
        DichotomyConstants {
            c1: 0.05,
            big_c1: 10.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Exceptional,
    Unexceptional,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Exceptional => "exceptional",
            Regime::Unexceptional => "unexceptional",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExceptionalWitness {
    pub character: CharacterId,
    pub modulus: u64,
    pub beta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DichotomyVerdict {
    pub d: f64,
    pub t: f64,
    pub kind: Regime,
    pub witness: Option<ExceptionalWitness>,
    pub threshold: f64,
    pub constants: DichotomyConstants,
}

impl DichotomyVerdict {
    pub fn is_exceptional(&self) -> bool {
        self.kind == Regime::Exceptional
    }

    /// An unexceptional verdict that was not derived from data, for
    /// experiments that skip the zero scan.
    pub fn assumed_unexceptional(d: f64, t: f64, constants: DichotomyConstants) -> Self {
        DichotomyVerdict {
            d,
            t,
            kind: Regime::Unexceptional,
            witness: None,
            threshold: exceptional_threshold(d, t, &constants),
            constants,
        }
    }
}

/// `1 - c1 / (C1 log(D T))`.
pub fn exceptional_threshold(d: f64, t: f64, constants: &DichotomyConstants) -> f64 {
    1.0 - constants.c1 / (constants.big_c1 * (d * t).ln())
}

/// Decides whether `(D, T)` is exceptional from the tabulated real zeros of
/// primitive characters of modulus at most `D`.
pub fn detect_dichotomy(
    db: &ZeroDatabase,
    d: f64,
    t: f64,
    constants: &DichotomyConstants,
) -> Result<DichotomyVerdict> {
    if !(d >= 2.0) || !(t >= 1.0) {
        return Err(Error::RangeViolation(format!(
            "dichotomy needs D >= 2 and T >= 1, got D = {d}, T = {t}"
        )));
    }
    let threshold = exceptional_threshold(d, t, constants);
    let mut qualifying: Vec<ExceptionalWitness> = Vec::new();
    let mut ids = vec![CharacterId::trivial()];
    ids.extend(
        primitive_characters_up_to(d.floor() as u64)?
            .iter()
            .map(|c| c.id())
            .filter(|id| id.modulus > 1),
    );
    for id in ids {
        for e in db.window_for(id, t)? {
            if e.gamma == 0.0 && e.beta >= threshold {
                qualifying.push(ExceptionalWitness {
                    character: id,
                    modulus: id.modulus,
                    beta: e.beta,
                });
            }
        }
    }
    match qualifying.len() {
        0 => Ok(DichotomyVerdict {
            d,
            t,
            kind: Regime::Unexceptional,
            witness: None,
            threshold,
            constants: *constants,
        }),
        1 => Ok(DichotomyVerdict {
            d,
            t,
            kind: Regime::Exceptional,
            witness: Some(qualifying[0]),
            threshold,
            constants: *constants,
        }),
        _ => {
            let list: Vec<String> = qualifying
                .iter()
                .map(|w| format!("{} beta={}", w.character, w.beta))
                .collect();
            Err(Error::LemmaViolation(list.join(", ")))
        }
    }
}

/// How to treat a truncation height above the range where the truncated
/// explicit formula is stated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum RangePolicy {
    #[default]
    Strict,
    /// Evaluate anyway; the caller records the run as out of range.
    Extended,
}

/// `x^rho / rho`, computed through `exp(beta log x)`.
fn power_over_rho(log_x: f64, beta: f64, gamma: f64) -> Complex64 {
    let rho = Complex64::new(beta, gamma);
    let mag = (beta * log_x).exp();
    let (s, c) = (gamma * log_x).sin_cos();
    Complex64::new(mag * c, mag * s) / rho
}

/// `x 1_{principal}(chi) - sum_{rho in Z(chi;T)} x^rho / rho`.
pub fn explicit_psi(
    db: &ZeroDatabase,
    x: f64,
    chi: &DirichletCharacter,
    t: f64,
    policy: RangePolicy,
) -> Result<Complex64> {
    if !(x >= 1.0) {
        return Err(Error::RangeViolation(format!("x = {x} < 1")));
    }
    if !(t >= 1.0) {
        return Err(Error::RangeViolation(format!("T = {t} < 1")));
    }
    if policy == RangePolicy::Strict && t > x.powf(0.25) {
        return Err(Error::RangeViolation(format!(
            "T = {t} exceeds x^(1/4) = {}",
            x.powf(0.25)
        )));
    }
    let window = zero_window(db, chi, t)?;
    let log_x = x.ln();
    let main = if chi.is_principal() { x } else { 0.0 };
    let mut zero_sum = Complex64::new(0.0, 0.0);
    if chi.is_real() {
        // pair rho with its conjugate so the sum is exactly real
        for e in &window {
            if e.gamma > 0.0 {
                zero_sum += 2.0 * power_over_rho(log_x, e.beta, e.gamma).re;
            } else if e.gamma == 0.0 {
                zero_sum += power_over_rho(log_x, e.beta, 0.0).re;
            }
        }
    } else {
        for e in &window {
            zero_sum += power_over_rho(log_x, e.beta, e.gamma);
        }
    }
    Ok(Complex64::new(main, 0.0) - zero_sum)
}

/// `sum_{rho in Z(dq;T)} |x^{rho - 1}|`, optionally without the exceptional
/// zero.
pub fn zero_sum_decay(
    db: &ZeroDatabase,
    x: f64,
    d: u64,
    q: u64,
    t: f64,
    exclude: Option<&ExceptionalWitness>,
) -> Result<f64> {
    let modulus = d * q;
    let group = character_group(modulus)?;
    let mut total = 0.0;
    for chi in &group {
        let (_, inducer) = conductor_and_inducer(chi)?;
        let mut skipped = false;
        for e in db.window_for(inducer.id(), t)? {
            if let Some(w) = exclude {
                if !skipped && w.character == inducer.id() && e.gamma == 0.0 && e.beta == w.beta {
                    skipped = true;
                    continue;
                }
            }
            total += x.powf(e.beta - 1.0);
        }
    }
    Ok(total)
}

/// `|Z(dq; T)|`, counted with multiplicity.
pub fn window_cardinality(db: &ZeroDatabase, modulus: u64, t: f64) -> Result<usize> {
    let group = character_group(modulus)?;
    let mut n = 0;
    for chi in &group {
        n += zero_window(db, chi, t)?.len();
    }
    Ok(n)
}
