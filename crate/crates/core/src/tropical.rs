//! Exact max-plus arithmetic.
//!
//! Scalars live in `ℚ ∪ {−∞}` with `max` as addition and ordinary `+` as
//! multiplication. The bottom element `−∞` is a separate variant rather than
//! a sentinel, so absorption holds unconditionally. Matrices are square and
//! indexed from zero.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of the max-plus semiring.
///
/// The derived order puts `Bottom` below every finite value, which is exactly
/// the order tropical addition takes the maximum over.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TropValue {
    Bottom,
    Finite(BigRational),
}

impl TropValue {
    /// The additive identity `𝟘 = −∞`.
    pub fn zero() -> Self {
        TropValue::Bottom
    }

    /// The multiplicative identity `𝟙 = 0`.
    pub fn one() -> Self {
        TropValue::Finite(BigRational::zero())
    }

    pub fn int(v: i64) -> Self {
        TropValue::Finite(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        TropValue::Finite(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, TropValue::Bottom)
    }

    pub fn as_finite(&self) -> Option<&BigRational> {
        match self {
            TropValue::Bottom => None,
            TropValue::Finite(q) => Some(q),
        }
    }

    /// Tropical sum: the larger of the two operands.
    pub fn tadd(&self, other: &TropValue) -> TropValue {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// Tropical product: ordinary sum, absorbed by `Bottom`.
    pub fn tmul(&self, other: &TropValue) -> TropValue {
        match (self, other) {
            (TropValue::Finite(a), TropValue::Finite(b)) => TropValue::Finite(a + b),
            _ => TropValue::Bottom,
        }
    }
}

pub fn tadd(a: &TropValue, b: &TropValue) -> TropValue {
    a.tadd(b)
}

pub fn tmul(a: &TropValue, b: &TropValue) -> TropValue {
    a.tmul(b)
}

impl From<i64> for TropValue {
    fn from(v: i64) -> Self {
        TropValue::int(v)
    }
}

impl fmt::Display for TropValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TropValue::Bottom => f.write_str("-inf"),
            TropValue::Finite(q) if q.is_integer() => write!(f, "{}", q.numer()),
            TropValue::Finite(q) => write!(f, "{}/{}", q.numer(), q.denom()),
        }
    }
}

impl FromStr for TropValue {
    type Err = Error;

    /// Accepts `-inf`, an integer literal, or `p/q` with `q > 0`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "-inf" {
            return Ok(TropValue::Bottom);
        }
        let bad = || Error::ParseValue(s.to_string());
        let parse_int = |x: &str| -> Result<BigInt> {
            let digits = x.strip_prefix(['-', '+']).unwrap_or(x);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            x.parse::<BigInt>().map_err(|_| bad())
        };
        match t.split_once('/') {
            None => Ok(TropValue::Finite(BigRational::from_integer(parse_int(t)?))),
            Some((p, q)) => {
                let p = parse_int(p)?;
                let q = parse_int(q)?;
                if !q.is_positive() {
                    return Err(bad());
                }
                Ok(TropValue::Finite(BigRational::new(p, q)))
            }
        }
    }
}

/// Which entries of a matrix may carry finite weights.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MatrixClass {
    Full,
    UpperTriangular,
    LowerTriangular,
}

impl MatrixClass {
    /// Whether position `(i, j)` lies in the class's support.
    pub fn supports(self, i: usize, j: usize) -> bool {
        match self {
            MatrixClass::Full => true,
            MatrixClass::UpperTriangular => i <= j,
            MatrixClass::LowerTriangular => i >= j,
        }
    }
}

impl FromStr for MatrixClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(MatrixClass::Full),
            "upper" => Ok(MatrixClass::UpperTriangular),
            "lower" => Ok(MatrixClass::LowerTriangular),
            other => Err(Error::precondition(format!(
                "unknown matrix class `{other}`"
            ))),
        }
    }
}

/// A square matrix over the max-plus semiring, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct TropMatrix {
    n: usize,
    entries: Vec<TropValue>,
}

impl TropMatrix {
    pub fn from_rows(rows: Vec<Vec<TropValue>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidMatrix("dimension must be positive".into()));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::InvalidMatrix(format!(
                "row of length {} in a {n}x{n} matrix",
                r.len()
            )));
        }
        Ok(TropMatrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix from a generator over `(row, column)`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> TropValue) -> Self {
        assert!(n > 0, "matrix dimension must be positive");
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        TropMatrix { n, entries }
    }

    /// The unit matrix `I`: zeros on the diagonal, bottom elsewhere.
    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| {
            if i == j {
                TropValue::one()
            } else {
                TropValue::Bottom
            }
        })
    }

    /// The zero matrix `(𝟘)`.
    pub fn zero(n: usize) -> Self {
        Self::from_fn(n, |_, _| TropValue::Bottom)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &TropValue {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: TropValue) {
        self.entries[i * self.n + j] = v;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[TropValue]> {
        self.entries.chunks(self.n)
    }

    pub fn diagonal(&self) -> Vec<TropValue> {
        (0..self.n).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.in_class(MatrixClass::UpperTriangular)
    }

    pub fn is_lower_triangular(&self) -> bool {
        self.in_class(MatrixClass::LowerTriangular)
    }

    /// Whether every entry outside the class support is bottom.
    pub fn in_class(&self, class: MatrixClass) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| class.supports(i, j) || self.get(i, j).is_bottom()))
    }

    fn check_dim(&self, other: &TropMatrix) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    /// Tropical product `self · other`.
    pub fn mul(&self, other: &TropMatrix) -> Result<TropMatrix> {
        self.check_dim(other)?;
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut best: Option<BigRational> = None;
                for k in 0..n {
                    let (TropValue::Finite(a), TropValue::Finite(b)) =
                        (self.get(i, k), other.get(k, j))
                    else {
                        continue;
                    };
                    let s = a + b;
                    if best.as_ref().is_none_or(|cur| s > *cur) {
                        best = Some(s);
                    }
                }
                entries.push(best.map_or(TropValue::Bottom, TropValue::Finite));
            }
        }
        Ok(TropMatrix { n, entries })
    }

    /// `k`-fold tropical power; `A⁰ = I`.
    pub fn pow(&self, k: u32) -> TropMatrix {
        let mut acc = TropMatrix::identity(self.n);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base).expect("same dimension");
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base).expect("same dimension");
            }
        }
        acc
    }
}

pub fn mat_mul(a: &TropMatrix, b: &TropMatrix) -> Result<TropMatrix> {
    a.mul(b)
}

pub fn mat_pow(a: &TropMatrix, k: u32) -> TropMatrix {
    a.pow(k)
}

/// Two matrices are diagonally equivalent when their diagonals coincide.
pub fn diag_equivalent(x: &TropMatrix, y: &TropMatrix) -> Result<bool> {
    x.check_dim(y)?;
    Ok((0..x.n).all(|i| x.get(i, i) == y.get(i, i)))
}

impl fmt::Display for TropMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serde_json::to_string(self).map_err(|_| fmt::Error)?)
    }
}

/// Wire form: `{"n": 2, "entries": [["0","1"],["-inf","2"]]}`.
#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    entries: Vec<Vec<String>>,
}

impl TryFrom<MatrixJson> for TropMatrix {
    type Error = Error;

    fn try_from(raw: MatrixJson) -> Result<Self> {
        let rows = raw
            .entries
            .iter()
            .map(|row| row.iter().map(|s| s.parse()).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let m = TropMatrix::from_rows(rows)?;
        if m.n != raw.n {
            return Err(Error::InvalidMatrix(format!(
                "declared n = {} but {} rows given",
                raw.n, m.n
            )));
        }
        Ok(m)
    }
}

impl From<TropMatrix> for MatrixJson {
    fn from(m: TropMatrix) -> Self {
        MatrixJson {
            n: m.n,
            entries: m
                .rows()
                .map(|r| r.iter().map(ToString::to_string).collect())
                .collect(),
        }
    }
}

/// Parameters for drawing random matrices of a class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplerConfig {
    pub entry_lo: i64,
    pub entry_hi: i64,
    /// Probability that a supported entry is bottom.
    pub bottom_prob: Ratio<u64>,
    pub seed: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            entry_lo: -10,
            entry_hi: 10,
            bottom_prob: Ratio::new(1, 4),
            seed: 0,
        }
    }
}

impl SamplerConfig {
    pub fn with_seed(seed: u64) -> Self {
        SamplerConfig {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.entry_lo > self.entry_hi {
            return Err(Error::InvalidSampler(format!(
                "empty entry range [{}, {}]",
                self.entry_lo, self.entry_hi
            )));
        }
        if self.bottom_prob > Ratio::one() {
            return Err(Error::InvalidSampler(format!(
                "bottom probability {} exceeds 1",
                self.bottom_prob
            )));
        }
        Ok(())
    }

    /// The random stream for one trial. It depends only on `(seed, trial)`.
    pub fn trial_rng(&self, trial: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial);
        rng
    }

    fn draw_entry(&self, rng: &mut ChaCha8Rng) -> TropValue {
        let (num, den) = (*self.bottom_prob.numer(), *self.bottom_prob.denom());
        if num > 0 && rng.gen_range(0..den) < num {
            TropValue::Bottom
        } else {
            TropValue::int(rng.gen_range(self.entry_lo..=self.entry_hi))
        }
    }

    /// Draws the next matrix of `class` from `rng`.
    pub fn sample_from(&self, rng: &mut ChaCha8Rng, class: MatrixClass, n: usize) -> TropMatrix {
        TropMatrix::from_fn(n, |i, j| {
            if class.supports(i, j) {
                self.draw_entry(rng)
            } else {
                TropValue::Bottom
            }
        })
    }
}

/// The first matrix of the stream for `trial`.
pub fn sample_matrix(class: MatrixClass, n: usize, cfg: &SamplerConfig, trial: u64) -> TropMatrix {
    let mut rng = cfg.trial_rng(trial);
    cfg.sample_from(&mut rng, class, n)
}

/// Parses a probability written as `p/q`, an integer, or a decimal such as `0.25`.
pub fn parse_probability(s: &str) -> Result<Ratio<u64>> {
    let bad = || Error::InvalidSampler(format!("cannot parse probability {s:?}"));
    let t = s.trim();
    let r = if let Some((p, q)) = t.split_once('/') {
        let p: u64 = p.trim().parse().map_err(|_| bad())?;
        let q: u64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        Ratio::new(p, q)
    } else if let Some((int, frac)) = t.split_once('.') {
        if frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let int: u64 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let den = 10u64.pow(frac.len() as u32);
        let f: u64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| bad())?
        };
        Ratio::new(
            int.checked_mul(den)
                .and_then(|v| v.checked_add(f))
                .ok_or_else(bad)?,
            den,
        )
    } else {
        Ratio::from_integer(t.parse().map_err(|_| bad())?)
    };
    if r > Ratio::one() {
        return Err(bad());
    }
    Ok(r)
}

impl PartialOrd<i64> for TropValue {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.cmp(&TropValue::int(*other)))
    }
}

impl PartialEq<i64> for TropValue {
    fn eq(&self, other: &i64) -> bool {
        *self == TropValue::int(*other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[&str]]) -> TropMatrix {
        TropMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|s| s.parse().unwrap()).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn scalar_examples() {
        assert_eq!(
            tadd(&TropValue::Bottom, &TropValue::int(3)),
            TropValue::int(3)
        );
        assert_eq!(
            tadd(&TropValue::int(1), &TropValue::int(2)),
            TropValue::int(2)
        );
        let half = TropValue::ratio(5, 2);
        assert_eq!(tadd(&half, &half), half);

        assert_eq!(
            tmul(&TropValue::Bottom, &TropValue::int(7)),
            TropValue::Bottom
        );
        assert_eq!(
            tmul(&TropValue::int(0), &TropValue::int(-4)),
            TropValue::int(-4)
        );
        assert_eq!(
            tmul(&TropValue::int(1), &TropValue::int(2)),
            TropValue::int(3)
        );
    }

    #[test]
    fn value_parsing() {
        assert_eq!("-inf".parse::<TropValue>().unwrap(), TropValue::Bottom);
        assert_eq!("-7".parse::<TropValue>().unwrap(), TropValue::int(-7));
        assert_eq!("6/4".parse::<TropValue>().unwrap().to_string(), "3/2");
        assert_eq!("-4/2".parse::<TropValue>().unwrap().to_string(), "-2");
        for bad in ["", "inf", "1/0", "1/-2", "1.5", "x", "--1", "1/"] {
            assert!(bad.parse::<TropValue>().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn product_examples() {
        let a = m(&[&["0", "1"], &["-inf", "2"]]);
        let b = m(&[&["1", "0"], &["-inf", "0"]]);
        assert_eq!(a.mul(&b).unwrap(), m(&[&["1", "1"], &["-inf", "2"]]));
        assert_eq!(a.mul(&TropMatrix::identity(2)).unwrap(), a);

        let a = m(&[&["0", "0"], &["-inf", "0"]]);
        let b = m(&[&["0", "-inf"], &["-inf", "1"]]);
        let ab = a.mul(&b).unwrap();
        let ba = b.mul(&a).unwrap();
        assert_eq!(ab, m(&[&["0", "1"], &["-inf", "1"]]));
        assert_eq!(ba, m(&[&["0", "0"], &["-inf", "1"]]));
        assert_ne!(ab, ba);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let a = TropMatrix::identity(2);
        let b = TropMatrix::identity(3);
        assert!(matches!(a.mul(&b), Err(Error::DimensionMismatch { .. })));
        assert!(diag_equivalent(&a, &b).is_err());
    }

    #[test]
    fn power_examples() {
        let a = m(&[&["0", "1"], &["-inf", "2"]]);
        assert_eq!(a.pow(0), TropMatrix::identity(2));
        assert_eq!(a.pow(1), a);
        assert_eq!(a.pow(2), m(&[&["0", "3"], &["-inf", "4"]]));
        assert_eq!(a.pow(5), a.mul(&a.pow(4)).unwrap());
    }

    #[test]
    fn diagonal_equivalence() {
        let x = m(&[&["0", "5"], &["-inf", "1"]]);
        let y = m(&[&["0", "-9"], &["-inf", "1"]]);
        assert!(diag_equivalent(&x, &x).unwrap());
        assert!(diag_equivalent(&x, &y).unwrap());
        assert!(!diag_equivalent(&x, &TropMatrix::identity(2)).unwrap());
    }

    #[test]
    fn sampler_respects_class_and_determinism() {
        let cfg = SamplerConfig::with_seed(11);
        for t in 0..50 {
            let u = sample_matrix(MatrixClass::UpperTriangular, 3, &cfg, t);
            assert!(u.is_upper_triangular());
            assert!(u.get(1, 0).is_bottom());
            let l = sample_matrix(MatrixClass::LowerTriangular, 3, &cfg, t);
            assert!(l.is_lower_triangular());
            assert_eq!(u, sample_matrix(MatrixClass::UpperTriangular, 3, &cfg, t));
        }
        let all_bottom = SamplerConfig {
            bottom_prob: Ratio::from_integer(1),
            ..cfg.clone()
        };
        assert_eq!(
            sample_matrix(MatrixClass::Full, 4, &all_bottom, 3),
            TropMatrix::zero(4)
        );
        let never_bottom = SamplerConfig {
            bottom_prob: Ratio::from_integer(0),
            entry_lo: 2,
            entry_hi: 2,
            ..cfg
        };
        let full = sample_matrix(MatrixClass::Full, 2, &never_bottom, 0);
        assert!(full.rows().flatten().all(|v| *v == 2));
    }

    #[test]
    fn sampler_validation() {
        let bad = SamplerConfig {
            entry_lo: 3,
            entry_hi: 2,
            ..SamplerConfig::default()
        };
        assert!(bad.validate().is_err());
        assert!(SamplerConfig::default().validate().is_ok());
    }

    #[test]
    fn probability_parsing() {
        assert_eq!(parse_probability("1/4").unwrap(), Ratio::new(1, 4));
        assert_eq!(parse_probability("0.25").unwrap(), Ratio::new(1, 4));
        assert_eq!(parse_probability("1").unwrap(), Ratio::from_integer(1));
        assert!(parse_probability("5/4").is_err());
        assert!(parse_probability("1/0").is_err());
    }

    #[test]
    fn json_round_trip_is_canonical() {
        let text = r#"{"n":2,"entries":[["0","2/4"],["-inf","-3"]]}"#;
        let parsed: TropMatrix = serde_json::from_str(text).unwrap();
        assert_eq!(
            serde_json::to_string(&parsed).unwrap(),
            r#"{"n":2,"entries":[["0","1/2"],["-inf","-3"]]}"#
        );
        assert!(serde_json::from_str::<TropMatrix>(r#"{"n":3,"entries":[["0"]]}"#).is_err());
        assert!(
            serde_json::from_str::<TropMatrix>(r#"{"n":2,"entries":[["0","1"],["2"]]}"#).is_err()
        );
    }
}
