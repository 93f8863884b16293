//! Exact integers, rationals and the combinatorial tables every formula
//! consumes: binomials, rising factorials, Bernoulli numbers and (r-)Stirling
//! numbers of the first kind.
//!
//! Bernoulli numbers use the `B_1 = -1/2` convention. With `B_1 = +1/2` the
//! power-sum formula in [`crate::hypersum`] silently produces wrong
//! polynomials, so every table in this crate is built on the minus sign.

use std::collections::HashMap;
use std::path::Path;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision exact rational; always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

/// `num/den` as a canonical rational. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: impl Into<BigInt>) -> Rational {
    Rational::from_integer(v.into())
}

/// `C(n, k)`, zero when `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigInt::one();
    for i in 0..k {
        // exact at every step: acc = C(n, i) before, C(n, i + 1) after
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `r (r+1) ... (r+m-1)`, the empty product being 1.
pub fn rising_factorial(r: u64, m: u64) -> BigInt {
    (0..m).fold(BigInt::one(), |acc, i| acc * BigInt::from(r + i))
}

pub fn factorial(n: u64) -> BigInt {
    rising_factorial(1, n)
}

/// Bernoulli number `B_j` from the shared tables.
pub fn bernoulli(j: usize) -> Rational {
    Tables::shared().bernoulli(j)
}

/// `B_t` for any integer `t`, with `B_t = 0` for negative `t`.
pub fn bernoulli_or_zero(t: i64) -> Rational {
    Tables::shared().bernoulli_or_zero(t)
}

/// Unsigned Stirling number of the first kind `[m, n]`.
pub fn stirling1_unsigned(m: usize, n: usize) -> BigInt {
    Tables::shared().stirling1(m, n)
}

/// r-Stirling number of the first kind `[m, n]_r`: permutations of `m`
/// elements with `n` cycles where the first `r` elements lie in distinct
/// cycles. Negative `n` (or `n > m`) yields 0.
pub fn r_stirling1(m: i64, n: i64, r: usize) -> Result<BigInt> {
    if m < r as i64 {
        return Err(Error::RStirlingBelowBase { m, n, r });
    }
    if n < 0 || n > m {
        return Ok(BigInt::zero());
    }
    let (m, n) = (m as usize, n as usize);
    // row[k] = [row_index, k]_r, starting from the boundary row r
    let mut row = vec![BigInt::zero(); m + 1];
    row[r] = BigInt::one();
    for i in r..m {
        for k in (1..=i + 1).rev() {
            row[k] = &row[k] * BigInt::from(i) + &row[k - 1];
        }
        row[0] = &row[0] * BigInt::from(i);
    }
    Ok(row[n].clone())
}

/// Memoized Bernoulli and Stirling tables.
///
/// Lookups take a read lock; growth takes the write lock and re-checks, so
/// concurrent readers always observe the same values.
#[derive(Debug, Default)]
pub struct Tables {
    bernoulli: RwLock<Vec<Rational>>,
    stirling: RwLock<Vec<Vec<BigInt>>>,
    overrides: HashMap<usize, Rational>,
}

impl Tables {
    pub fn new() -> Self {
        Self::default()
    }

    /// Process-wide tables used by the free functions in this module.
    pub fn shared() -> Arc<Tables> {
        static SHARED: OnceLock<Arc<Tables>> = OnceLock::new();
        SHARED.get_or_init(|| Arc::new(Tables::new())).clone()
    }

    /// Replace `B_j` with an arbitrary value on lookup. Only meant for
    /// fault-injection runs of the verifier.
    pub fn with_bernoulli_override(mut self, j: usize, value: Rational) -> Self {
        self.overrides.insert(j, value);
        self
    }

    pub fn has_overrides(&self) -> bool {
        !self.overrides.is_empty()
    }

    pub fn bernoulli(&self, j: usize) -> Rational {
        if let Some(v) = self.overrides.get(&j) {
            return v.clone();
        }
        if let Some(v) = self.bernoulli.read().unwrap().get(j) {
            return v.clone();
        }
        let mut cache = self.bernoulli.write().unwrap();
        while cache.len() <= j {
            let next = cache.len();
            let value = if next == 0 {
                Rational::one()
            } else {
                // sum_{i=0}^{next} C(next+1, i) B_i = 0
                let sum = cache
                    .iter()
                    .enumerate()
                    .fold(Rational::zero(), |acc, (i, b)| {
                        acc + b * rat_int(binomial(next as u64 + 1, i as i64))
                    });
                -sum / rat_int(next as i64 + 1)
            };
            cache.push(value);
        }
        cache[j].clone()
    }

    pub fn bernoulli_or_zero(&self, t: i64) -> Rational {
        if t < 0 {
            Rational::zero()
        } else {
            self.bernoulli(t as usize)
        }
    }

    pub fn stirling1(&self, m: usize, n: usize) -> BigInt {
        if n > m {
            return BigInt::zero();
        }
        if let Some(row) = self.stirling.read().unwrap().get(m) {
            return row[n].clone();
        }
        let mut rows = self.stirling.write().unwrap();
        if rows.is_empty() {
            rows.push(vec![BigInt::one()]);
        }
        while rows.len() <= m {
            let i = rows.len() - 1;
            let prev = &rows[i];
            let mut next = vec![BigInt::zero(); i + 2];
            for k in 1..=i + 1 {
                let stay = prev.get(k).map(|v| v * BigInt::from(i)).unwrap_or_default();
                next[k] = stay + &prev[k - 1];
            }
            rows.push(next);
        }
        rows[m][n].clone()
    }

    /// Seed the tables from `bernoulli.json` / `stirling.json` in `dir`.
    /// Missing files are not an error.
    pub fn load_dir(&self, dir: &Path) -> Result<()> {
        let b = dir.join("bernoulli.json");
        if b.exists() {
            let values: Vec<RationalJson> = serde_json::from_str(&std::fs::read_to_string(b)?)?;
            let values: Vec<Rational> = values.into_iter().map(|v| v.0).collect();
            if values.first().is_some_and(|b0| !b0.is_one()) {
                return Err(Error::Json("bernoulli.json: B_0 must be 1".into()));
            }
            let mut cache = self.bernoulli.write().unwrap();
            if values.len() > cache.len() {
                *cache = values;
            }
        }
        let s = dir.join("stirling.json");
        if s.exists() {
            let rows: Vec<Vec<String>> = serde_json::from_str(&std::fs::read_to_string(s)?)?;
            let rows = rows
                .into_iter()
                .enumerate()
                .map(|(i, row)| {
                    if row.len() != i + 1 {
                        return Err(Error::Json(format!("stirling.json: row {i} has wrong length")));
                    }
                    row.iter()
                        .map(|v| v.parse::<BigInt>().map_err(|e| Error::Json(e.to_string())))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let mut cache = self.stirling.write().unwrap();
            if rows.len() > cache.len() {
                *cache = rows;
            }
        }
        Ok(())
    }

    /// Persist whatever has been computed so far.
    pub fn save_dir(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let b: Vec<RationalJson> = self
            .bernoulli
            .read()
            .unwrap()
            .iter()
            .cloned()
            .map(RationalJson)
            .collect();
        std::fs::write(dir.join("bernoulli.json"), serde_json::to_string(&b)?)?;
        let s: Vec<Vec<String>> = self
            .stirling
            .read()
            .unwrap()
            .iter()
            .map(|row| row.iter().map(|v| v.to_string()).collect())
            .collect();
        std::fs::write(dir.join("stirling.json"), serde_json::to_string(&s)?)?;
        Ok(())
    }
}

/// JSON form of a rational: `["num", "den"]`, canonical, denominator positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalJson(pub Rational);

impl Serialize for RationalJson {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_rational(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for RationalJson {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        deserialize_rational(d).map(RationalJson)
    }
}

pub fn serialize_rational<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    [q.numer().to_string(), q.denom().to_string()].serialize(s)
}

pub fn serialize_rationals<S: Serializer>(qs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(qs.iter().map(|q| RationalJson(q.clone())))
}

pub fn deserialize_rational<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
    let [num, den] = <[String; 2]>::deserialize(d)?;
    let num: BigInt = num.parse().map_err(D::Error::custom)?;
    let den: BigInt = den.parse().map_err(D::Error::custom)?;
    if !den.is_positive() {
        return Err(D::Error::custom("denominator must be positive"));
    }
    if !num.gcd(&den).is_one() {
        return Err(D::Error::custom("rational is not in lowest terms"));
    }
    Ok(Rational::new_raw(num, den))
}
