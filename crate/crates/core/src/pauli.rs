//! Weighted Pauli-sum operators.
//!
//! A [`PauliString`] is stored as a pair of bit masks over qubits: bit `q`
//! of `x` is set for X or Y on qubit `q`, bit `q` of `z` for Z or Y. The
//! textual label puts qubit 0 first (leftmost).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Largest register a mask-encoded string can address.
pub const MAX_QUBITS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n_qubits: usize,
    x: u64,
    z: u64,
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Result<Self> {
        check_width(n_qubits)?;
        Ok(Self { n_qubits, x: 0, z: 0 })
    }

    pub fn from_paulis(paulis: &[Pauli]) -> Result<Self> {
        let mut s = Self::identity(paulis.len())?;
        for (q, p) in paulis.iter().enumerate() {
            s.set(q, *p);
        }
        Ok(s)
    }

    fn set(&mut self, q: usize, p: Pauli) {
        let bit = 1u64 << q;
        self.x &= !bit;
        self.z &= !bit;
        match p {
            Pauli::I => {}
            Pauli::X => self.x |= bit,
            Pauli::Y => {
                self.x |= bit;
                self.z |= bit;
            }
            Pauli::Z => self.z |= bit,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Qubits carrying X or Y.
    pub fn x_mask(&self) -> u64 {
        self.x
    }

    /// Qubits carrying Z or Y.
    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    /// True when the operator is diagonal in the computational basis.
    pub fn is_diagonal(&self) -> bool {
        self.x == 0
    }

    pub fn get(&self, q: usize) -> Pauli {
        let bit = 1u64 << q;
        match (self.x & bit != 0, self.z & bit != 0) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn paulis(&self) -> impl Iterator<Item = Pauli> + '_ {
        (0..self.n_qubits).map(|q| self.get(q))
    }

    pub fn label(&self) -> String {
        self.paulis().map(Pauli::as_char).collect()
    }

    /// Two Pauli strings commute iff they anticommute on an even number of qubits.
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = (self.x & other.z) ^ (self.z & other.x);
        anti.count_ones() % 2 == 0
    }
}

fn check_width(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::TooManyQubits { n_qubits, limit: MAX_QUBITS, what: "pauli strings" });
    }
    Ok(())
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(label: &str) -> Result<Self> {
        let paulis: Option<Vec<Pauli>> = label.chars().map(Pauli::from_char).collect();
        match paulis {
            Some(p) if !p.is_empty() => Self::from_paulis(&p),
            _ => Err(Error::InvalidLabel(label.to_string())),
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({})", self.label())
    }
}

/// Lexicographic by label, qubit 0 first, with `I < X < Y < Z`.
impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n_qubits.cmp(&other.n_qubits).then_with(|| {
            for q in 0..self.n_qubits {
                let ord = self.get(q).as_char().cmp(&other.get(q).as_char());
                if ord != Ordering::Equal {
                    return ord;
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `H = Σ c_i P_i` with real coefficients, kept canonical: sorted by label,
/// duplicates merged, exact zeros dropped.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedPauliSum {
    n_qubits: usize,
    terms: Vec<(f64, PauliString)>,
}

impl WeightedPauliSum {
    pub fn new<I>(n_qubits: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, PauliString)>,
    {
        check_width(n_qubits)?;
        let mut merged: BTreeMap<PauliString, f64> = BTreeMap::new();
        for (c, p) in terms {
            if !c.is_finite() {
                return Err(Error::NonFiniteCoefficient(c));
            }
            if p.n_qubits() != n_qubits {
                return Err(Error::QubitMismatch { expected: n_qubits, found: p.n_qubits() });
            }
            *merged.entry(p).or_insert(0.0) += c;
        }
        let terms = merged.into_iter().filter(|(_, c)| *c != 0.0).map(|(p, c)| (c, p)).collect();
        Ok(Self { n_qubits, terms })
    }

    /// Convenience constructor from `(coefficient, label)` pairs.
    pub fn from_labels(n_qubits: usize, terms: &[(f64, &str)]) -> Result<Self> {
        let parsed = terms
            .iter()
            .map(|(c, l)| l.parse::<PauliString>().map(|p| (*c, p)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n_qubits, parsed)
    }

    pub fn empty(n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, std::iter::empty())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_diagonal(&self) -> bool {
        self.terms.iter().all(|(_, p)| p.is_diagonal())
    }

    /// `a·self + b·other`, canonicalized.
    pub fn linear_combination(&self, a: f64, other: &WeightedPauliSum, b: f64) -> Result<Self> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::QubitMismatch { expected: self.n_qubits, found: other.n_qubits });
        }
        let lhs = self.terms.iter().map(|(c, p)| (a * c, *p));
        let rhs = other.terms.iter().map(|(c, p)| (b * c, *p));
        Self::new(self.n_qubits, lhs.chain(rhs))
    }

    /// Content hash of the canonical serialization (hex SHA-256).
    pub fn content_hash(&self) -> String {
        let digest = Sha256::digest(serialize_pauli_sum(self).as_bytes());
        hex::encode(digest)
    }
}

/// Σ_i |c_i| over canonical terms.
pub fn abs_coefficient_sum(h: &WeightedPauliSum) -> f64 {
    h.terms.iter().map(|(c, _)| c.abs()).sum()
}

/// Parses the `.psum` text format.
///
/// An optional first line `# qubits: <n>` fixes the register width; any
/// other `#` line is a comment. Each remaining non-blank line is
/// `<coefficient> <label>`.
pub fn parse_pauli_sum(text: &str) -> Result<WeightedPauliSum> {
    let mut declared: Option<usize> = None;
    let mut width: Option<(usize, usize)> = None;
    let mut terms = Vec::new();
    let mut seen_content = false;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if !seen_content {
                if let Some(n) = comment.trim().strip_prefix("qubits:") {
                    let n: usize = n.trim().parse().map_err(|_| Error::Parse {
                        line: lineno,
                        message: format!("bad qubit count {:?}", n.trim()),
                    })?;
                    if n == 0 {
                        return Err(Error::Parse { line: lineno, message: "qubit count must be positive".into() });
                    }
                    declared = Some(n);
                }
            }
            seen_content = true;
            continue;
        }
        seen_content = true;

        let mut fields = line.split_whitespace();
        let (Some(coeff), Some(label), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::Parse {
                line: lineno,
                message: format!("expected `<coefficient> <label>`, got {line:?}"),
            });
        };
        let c: f64 = coeff.parse().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("non-numeric coefficient {coeff:?}"),
        })?;
        if !c.is_finite() {
            return Err(Error::Parse { line: lineno, message: format!("non-finite coefficient {coeff:?}") });
        }
        let p: PauliString = label.parse().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("invalid pauli label {label:?}"),
        })?;
        let n = p.n_qubits();
        match (declared, width) {
            (Some(d), _) if d != n => {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("label {label} has {n} qubits, header declares {d}"),
                })
            }
            (None, Some((w, first))) if w != n => {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("label {label} has {n} qubits, line {first} has {w}"),
                })
            }
            (_, None) => width = Some((n, lineno)),
            _ => {}
        }
        terms.push((c, p));
    }

    let n = declared.or(width.map(|(w, _)| w)).ok_or(Error::Parse {
        line: 1,
        message: "no terms and no `# qubits:` header".into(),
    })?;
    WeightedPauliSum::new(n, terms)
}

/// Emits `.psum` text. The header is written only for an empty sum, whose
/// width would otherwise be lost.
pub fn serialize_pauli_sum(h: &WeightedPauliSum) -> String {
    let mut out = String::new();
    if h.is_empty() {
        out.push_str(&format!("# qubits: {}\n", h.n_qubits));
    }
    for (c, p) in &h.terms {
        // shortest round-tripping decimal
        out.push_str(&format!("{c:?} {p}\n"));
    }
    out
}

/// Random-field Ising chain `-J Σ Z_i Z_{i+1} + Σ h_i Z_i` (open boundary).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RfimSpec {
    pub n_qubits: usize,
    #[serde(default = "RfimSpec::default_coupling")]
    pub coupling_j: f64,
    #[serde(default = "RfimSpec::default_low")]
    pub field_low: f64,
    #[serde(default = "RfimSpec::default_high")]
    pub field_high: f64,
    #[serde(default)]
    pub rng_seed: u64,
}

impl RfimSpec {
    /// Field half-width calibrated so that `E[Σ|c_i|] ≈ 15.219` at 12 qubits
    /// with unit coupling: `11 + 12·h_max/2`.
    pub const CALIBRATED_FIELD: f64 = 0.7032;

    fn default_coupling() -> f64 {
        1.0
    }
    fn default_low() -> f64 {
        -Self::CALIBRATED_FIELD
    }
    fn default_high() -> f64 {
        Self::CALIBRATED_FIELD
    }

    /// Calibrated defaults for an `n`-site chain.
    pub fn calibrated(n_qubits: usize, rng_seed: u64) -> Self {
        Self {
            n_qubits,
            coupling_j: 1.0,
            field_low: -Self::CALIBRATED_FIELD,
            field_high: Self::CALIBRATED_FIELD,
            rng_seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits < 2 {
            return Err(Error::InvalidRfim(format!("need at least 2 sites, got {}", self.n_qubits)));
        }
        if self.n_qubits > MAX_QUBITS {
            return Err(Error::InvalidRfim(format!("at most {MAX_QUBITS} sites")));
        }
        if !(self.coupling_j.is_finite() && self.field_low.is_finite() && self.field_high.is_finite()) {
            return Err(Error::InvalidRfim("non-finite parameter".into()));
        }
        if self.field_low > self.field_high {
            return Err(Error::InvalidRfim(format!(
                "field_low {} exceeds field_high {}",
                self.field_low, self.field_high
            )));
        }
        Ok(())
    }

    /// On-site fields in site order, drawn from the seeded generator.
    pub fn fields(&self) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.rng_seed);
        (0..self.n_qubits)
            .map(|_| {
                if self.field_low == self.field_high {
                    self.field_low
                } else {
                    rng.random_range(self.field_low..self.field_high)
                }
            })
            .collect()
    }
}

pub fn generate_rfim(spec: &RfimSpec) -> Result<WeightedPauliSum> {
    spec.validate()?;
    let n = spec.n_qubits;
    let mut terms = Vec::with_capacity(2 * n - 1);
    for i in 0..n - 1 {
        let mut p = PauliString::identity(n)?;
        p.set(i, Pauli::Z);
        p.set(i + 1, Pauli::Z);
        terms.push((-spec.coupling_j, p));
    }
    for (i, h) in spec.fields().into_iter().enumerate() {
        let mut p = PauliString::identity(n)?;
        p.set(i, Pauli::Z);
        terms.push((h, p));
    }
    WeightedPauliSum::new(n, terms)
}
