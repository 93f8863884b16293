//! Hyper-sums of powers of integers `S_m^(r)(n)`.
//!
//! `S_m^(0)(n) = n^m` and `S_m^(r)(n) = sum_{i=1}^n S_m^(r-1)(i)`. For fixed
//! `m` and `r` this is a polynomial in `n` of degree `m + r`. The [`Engine`]
//! builds that polynomial along several independent routes:
//!
//! * [`Method::QForm`]: Stirling-weighted combination of ordinary power sums;
//! * [`Method::CForm`]: explicit double-sum coefficients `c_{m,r}^k`;
//! * [`Method::CRecurrence`]: lifting power-sum coefficients one `r` at a time;
//! * [`Method::LemmaChain`]: the three-term-plus-Bernoulli recurrence in `m`;
//! * [`Method::Determinant`]: `S_1^(r)` times a Hessenberg determinant in `N_r`;
//! * [`Method::BruteforceFit`]: Newton interpolation of brute-force values.
//!
//! It also produces the Faulhaber form `S_m^(r) = S_1^(r) G_m^(r)(N_r)` two
//! ways (determinant and coefficient recurrences) and the related u-forms.
//!
//! Convention: `0^0 = 1`, so `S_0^(0)(0) = 1`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{binomial, factorial, rat, rat_int, rising_factorial, Rational, Tables};
use crate::hessenberg::build_h;
use crate::polyring::{RatPoly, Variable};

/// How a [`HyperSumPoly`] was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    BruteforceFit,
    QForm,
    CForm,
    CRecurrence,
    LemmaChain,
    Determinant,
}

impl Method {
    /// The five formula routes (everything except the interpolation oracle).
    pub const FORMULAS: [Method; 5] =
        [Method::QForm, Method::CForm, Method::CRecurrence, Method::LemmaChain, Method::Determinant];

    pub fn name(self) -> &'static str {
        match self {
            Method::BruteforceFit => "bruteforce-fit",
            Method::QForm => "q-form",
            Method::CForm => "c-form",
            Method::CRecurrence => "c-recurrence",
            Method::LemmaChain => "lemma-chain",
            Method::Determinant => "determinant",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "bruteforce-fit" | "fit" => Method::BruteforceFit,
            "q-form" | "q" => Method::QForm,
            "c-form" | "c" => Method::CForm,
            "c-recurrence" | "chain" => Method::CRecurrence,
            "lemma-chain" | "lemma" => Method::LemmaChain,
            "determinant" | "det" => Method::Determinant,
            other => {
                return Err(Error::OutOfRange { what: "method", detail: other.to_string() });
            }
        })
    }
}

/// `S_m^(r)` as a polynomial in `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HyperSumPoly {
    pub m: usize,
    pub r: usize,
    pub poly: RatPoly,
    pub method: Method,
}

impl HyperSumPoly {
    pub fn eval(&self, n: u64) -> Rational {
        self.poly.eval(&rat_int(n))
    }
}

/// `G_m^(r)(N_r)` with `S_m^(r) = S_1^(r) G_m^(r)`.
///
/// `g_coeffs[j]` multiplies `N^(2j)` when `m` is odd and `N^(2j+1)` when `m`
/// is even; slots of the other parity are always zero for `r >= 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaulhaberPoly {
    pub m: usize,
    pub r: usize,
    pub poly: RatPoly,
    #[serde(serialize_with = "crate::exactnum::serialize_rationals")]
    pub g_coeffs: Vec<Rational>,
}

impl FaulhaberPoly {
    fn from_poly(m: usize, r: usize, poly: RatPoly) -> Self {
        let g_coeffs = parity_slots(&poly, m - 1);
        FaulhaberPoly { m, r, poly, g_coeffs }
    }

    fn from_g(m: usize, r: usize, g_coeffs: Vec<Rational>) -> Self {
        let var = Variable::centered(r);
        let offset = (m + 1) % 2;
        let mut coeffs = vec![Rational::zero(); m];
        for (j, g) in g_coeffs.iter().enumerate() {
            coeffs[2 * j + offset] = g.clone();
        }
        FaulhaberPoly { m, r, poly: RatPoly::new(var, coeffs), g_coeffs }
    }
}

/// Coefficients at `degree, degree - 2, ...` collected in ascending order.
fn parity_slots(poly: &RatPoly, degree: usize) -> Vec<Rational> {
    (degree % 2..=degree).step_by(2).map(|k| poly.coeff(k)).collect()
}

/// `S_m(n)` (the `r = 1` case) in `N = n + 1/2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaulhaberR1Poly {
    pub m: usize,
    pub poly: RatPoly,
    /// `f_{m,j}`: coefficient of `N^(2j)` (odd `m`) or `N^(2j+1)` (even `m`).
    #[serde(serialize_with = "crate::exactnum::serialize_rationals")]
    pub f_coeffs: Vec<Rational>,
}

/// Which hyper-sum multiplies the u-form polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Prefactor {
    /// `S_1^(r)(n)`, odd powers.
    S1,
    /// `S_2^(r)(n)`, even powers.
    S2,
}

/// `S_m^(r)(n) = prefactor * poly(n(n+r))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UForm {
    pub m: usize,
    pub r: usize,
    pub prefactor: Prefactor,
    pub poly: RatPoly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PowerParity {
    /// Exponent `2m - 1`.
    Odd,
    /// Exponent `2m`.
    Even,
}

/// The defining iterated sum, evaluated directly.
pub fn hyper_sum_bruteforce(m: usize, r: usize, n: u64) -> BigInt {
    if n == 0 {
        return if r == 0 && m == 0 { BigInt::one() } else { BigInt::zero() };
    }
    let mut values: Vec<BigInt> = (1..=n).map(|i| BigInt::from(i).pow(m as u32)).collect();
    for _ in 0..r {
        for i in 1..values.len() {
            let prev = values[i - 1].clone();
            values[i] += prev;
        }
    }
    values.pop().unwrap()
}

/// `S_1^(r)(n) = C(n + r, r + 1)`.
pub fn s1_closed(r: usize, n: u64) -> Rational {
    rat_int(binomial(n + r as u64, r as i64 + 1))
}

/// `S_2^(r)(n) = (2n + r)/(r + 2) S_1^(r)(n)`.
pub fn s2_closed(r: usize, n: u64) -> Rational {
    rat((2 * n + r as u64) as i64, r as i64 + 2) * s1_closed(r, n)
}

/// `C(n + r, r + 1) = n (n+1) ... (n+r) / (r+1)!` expanded in `n`.
pub fn s1_poly(r: usize) -> RatPoly {
    let var = Variable::index();
    let prod = (0..=r).fold(RatPoly::one(var), |acc, j| &acc * &RatPoly::linear(var, rat_int(j as i64)));
    prod.scale(&Rational::new(BigInt::one(), factorial(r as u64 + 1)))
}

/// `N_r = n + r/2` as a polynomial in `n`.
fn centered_in_n(r: usize) -> RatPoly {
    RatPoly::linear(Variable::index(), rat(r as i64, 2))
}

/// `C(n, k)` as a polynomial in `n`.
fn falling_binomial(k: usize) -> RatPoly {
    let var = Variable::index();
    let prod = (0..k).fold(RatPoly::one(var), |acc, j| &acc * &RatPoly::linear(var, rat_int(-(j as i64))));
    prod.scale(&Rational::new(BigInt::one(), factorial(k as u64)))
}

fn sign(e: i64) -> Rational {
    if e.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Polynomial constructions over a fixed set of number tables.
///
/// Results that chains reuse (power sums, determinant Faulhaber polynomials,
/// recurrence chains) are cached; every entry is a pure function of its key
/// and the tables, so the caches never change results.
#[derive(Debug)]
pub struct Engine {
    tables: Arc<Tables>,
    power_sums: RwLock<HashMap<usize, RatPoly>>,
    det_g: RwLock<HashMap<(usize, usize), FaulhaberPoly>>,
    rec_chains: RwLock<HashMap<usize, Vec<Vec<Rational>>>>,
}

impl Default for Engine {
    fn default() -> Self {
        Self::new()
    }
}

impl Engine {
    pub fn new() -> Self {
        Self::with_tables(Tables::shared())
    }

    pub fn with_tables(tables: Arc<Tables>) -> Self {
        Engine {
            tables,
            power_sums: RwLock::default(),
            det_g: RwLock::default(),
            rec_chains: RwLock::default(),
        }
    }

    pub fn tables(&self) -> &Tables {
        &self.tables
    }

    fn b(&self, j: usize) -> Rational {
        self.tables.bernoulli(j)
    }

    fn stirling(&self, m: usize, k: usize) -> Rational {
        rat_int(self.tables.stirling1(m, k))
    }

    /// Ordinary power sum `S_m(n)` from the Bernoulli formula.
    pub fn power_sum_poly(&self, m: usize) -> RatPoly {
        if let Some(p) = self.power_sums.read().unwrap().get(&m) {
            return p.clone();
        }
        let top = m + 1;
        let coeffs = (0..=top)
            .map(|t| {
                if t == 0 {
                    return Rational::zero();
                }
                sign((top - t) as i64) * rat_int(binomial(top as u64, t as i64)) * self.b(top - t)
                    / rat_int(top as i64)
            })
            .collect();
        let p = RatPoly::new(Variable::index(), coeffs);
        self.power_sums.write().unwrap().insert(m, p.clone());
        p
    }

    /// `q_{r,i}(n) = sum_{j=0}^{r-i} C(i+j, i) [r+1, i+j+1] n^j`.
    pub fn q_poly(&self, r: usize, i: usize) -> Result<RatPoly> {
        if i > r {
            return Err(Error::OutOfRange { what: "i", detail: format!("q_{{{r},{i}}} needs i <= r") });
        }
        let coeffs = (0..=r - i)
            .map(|j| rat_int(binomial((i + j) as u64, i as i64)) * self.stirling(r + 1, i + j + 1))
            .collect();
        Ok(RatPoly::new(Variable::index(), coeffs))
    }

    fn monomial_n(m: usize) -> RatPoly {
        RatPoly::monomial(Variable::index(), Rational::one(), m)
    }

    /// `S_m^(r) = 1/(r-1)! sum_{i=0}^{r-1} (-1)^i q_{r-1,i}(n) S_{m+i}(n)`.
    ///
    /// `r = 0` short-circuits to `n^m`.
    pub fn hyper_sum_poly_q(&self, m: usize, r: usize) -> HyperSumPoly {
        let poly = if r == 0 {
            Self::monomial_n(m)
        } else {
            let sum = (0..r).fold(RatPoly::zero(Variable::index()), |acc, i| {
                let term = &self.q_poly(r - 1, i).expect("i < r") * &self.power_sum_poly(m + i);
                &acc + &term.scale(&sign(i as i64))
            });
            sum.scale(&Rational::new(BigInt::one(), factorial(r as u64 - 1)))
        };
        HyperSumPoly { m, r, poly, method: Method::QForm }
    }

    /// Coefficient `c_{m,r}^k` of `n^k` in `S_m^(r)(n)`, `1 <= k <= m + r`.
    pub fn coeff_c(&self, m: usize, r: usize, k: usize) -> Result<Rational> {
        if r == 0 {
            return Err(Error::OutOfRange { what: "r", detail: "c_{m,r}^k needs r >= 1".into() });
        }
        if k < 1 || k > m + r {
            return Err(Error::OutOfRange { what: "k", detail: format!("need 1 <= k <= {}", m + r) });
        }
        let mut sum = Rational::zero();
        for i in 0..r {
            for j in 0..k {
                let b = self.tables.bernoulli_or_zero((m + i + j + 1) as i64 - k as i64);
                if b.is_zero() {
                    continue;
                }
                let st = self.stirling(r, i + j + 1);
                if st.is_zero() {
                    continue;
                }
                sum += sign(j as i64)
                    * rat_int(binomial((i + j) as u64, i as i64) * binomial((m + i + 1) as u64, (k - j) as i64))
                    * st
                    * b
                    / rat_int((m + i + 1) as i64);
            }
        }
        Ok(sign(m as i64 + 1 - k as i64) * sum / rat_int(factorial(r as u64 - 1)))
    }

    /// The single-sum form of `c_{m,r}^1`.
    pub fn coeff_c1_reduced(&self, m: usize, r: usize) -> Rational {
        assert!(r >= 1);
        let sum = (0..r).fold(Rational::zero(), |acc, i| acc + self.stirling(r, i + 1) * self.b(m + i));
        sign(m as i64) * sum / rat_int(factorial(r as u64 - 1))
    }

    /// `S_m^(r)` assembled from the `c_{m,r}^k`; `r = 0` gives `n^m`.
    pub fn hyper_sum_poly_c(&self, m: usize, r: usize) -> HyperSumPoly {
        let poly = if r == 0 {
            Self::monomial_n(m)
        } else {
            let coeffs = std::iter::once(Rational::zero())
                .chain((1..=m + r).map(|k| self.coeff_c(m, r, k).expect("k in range")))
                .collect();
            RatPoly::new(Variable::index(), coeffs)
        };
        HyperSumPoly { m, r, poly, method: Method::CForm }
    }

    /// `S_m^(r)` by lifting power-sum coefficients with
    /// [`coeff_recurrence_step`] `r - 1` times; `r = 0` gives `n^m`.
    pub fn hyper_sum_poly_chain(&self, m: usize, r: usize) -> HyperSumPoly {
        let poly = if r == 0 {
            Self::monomial_n(m)
        } else {
            // level[i] holds c^1..c^{m+i+level} of S_{m+i}^(level)
            let mut level: Vec<Vec<Rational>> = (0..r)
                .map(|i| self.power_sum_poly(m + i).coeffs()[1..].to_vec())
                .collect();
            for lvl in 1..r {
                level = level
                    .windows(2)
                    .map(|w| coeff_recurrence_step(lvl, &w[0], &w[1]).expect("consistent lengths"))
                    .collect();
            }
            let coeffs = std::iter::once(Rational::zero()).chain(level.remove(0)).collect();
            RatPoly::new(Variable::index(), coeffs)
        };
        HyperSumPoly { m, r, poly, method: Method::CRecurrence }
    }

    /// `S_1^(r), ..., S_{m_max}^(r)` from
    /// `(m+r) S_m = m N_r S_{m-1} - r sum_{k=1}^{m-2} C(m,k) B_{m-k} S_k`.
    pub fn lemma_recurrence_family(&self, m_max: usize, r: usize) -> Vec<HyperSumPoly> {
        let n_r = centered_in_n(r);
        let mut family: Vec<RatPoly> = Vec::with_capacity(m_max);
        if m_max >= 1 {
            family.push(s1_poly(r));
        }
        for m in 2..=m_max {
            let mut rhs = (&n_r * &family[m - 2]).scale(&rat_int(m as i64));
            for k in 1..=m - 2 {
                let c = rat_int(binomial(m as u64, k as i64) * r) * self.b(m - k);
                if !c.is_zero() {
                    rhs = &rhs - &family[k - 1].scale(&c);
                }
            }
            family.push(rhs.scale(&rat(1, (m + r) as i64)));
        }
        family
            .into_iter()
            .enumerate()
            .map(|(i, poly)| HyperSumPoly { m: i + 1, r, poly, method: Method::LemmaChain })
            .collect()
    }

    /// `G_m^(r)(N) = (-1)^(m-1) / (r+2)^(m-1 rising) det H_m^(r)(N)`.
    pub fn faulhaber_det(&self, m: usize, r: usize) -> Result<FaulhaberPoly> {
        if let Some(g) = self.det_g.read().unwrap().get(&(m, r)) {
            return Ok(g.clone());
        }
        let h = build_h(m, r, &self.tables)?;
        let scale = sign(m as i64 - 1) / rat_int(rising_factorial(r as u64 + 2, m as u64 - 1));
        let g = FaulhaberPoly::from_poly(m, r, h.det().scale(&scale));
        self.det_g.write().unwrap().insert((m, r), g.clone());
        Ok(g)
    }

    /// `S_m^(r) = S_1^(r)(n) G_m^(r)(n + r/2)`.
    pub fn hyper_sum_det(&self, m: usize, r: usize) -> Result<HyperSumPoly> {
        let g = self.faulhaber_det(m, r)?;
        let poly = &s1_poly(r) * &g.poly.to_index()?.with_var(Variable::index());
        Ok(HyperSumPoly { m, r, poly, method: Method::Determinant })
    }

    /// Newton interpolation through brute-force values at `n = 0..=m+r`.
    pub fn hyper_sum_poly_fit(&self, m: usize, r: usize) -> HyperSumPoly {
        let d = m + r;
        let mut diffs: Vec<Rational> = (0..=d as u64).map(|n| rat_int(hyper_sum_bruteforce(m, r, n))).collect();
        let mut poly = RatPoly::zero(Variable::index());
        for k in 0..=d {
            poly = &poly + &falling_binomial(k).scale(&diffs[0]);
            diffs = diffs.windows(2).map(|w| &w[1] - &w[0]).collect();
        }
        HyperSumPoly { m, r, poly, method: Method::BruteforceFit }
    }

    /// Dispatch to one route.
    pub fn hyper_sum(&self, m: usize, r: usize, method: Method) -> Result<HyperSumPoly> {
        let needs_m = |what| {
            if m == 0 {
                Err(Error::OutOfRange { what: "m", detail: format!("the {what} route needs m >= 1") })
            } else {
                Ok(())
            }
        };
        match method {
            Method::BruteforceFit => Ok(self.hyper_sum_poly_fit(m, r)),
            Method::QForm => Ok(self.hyper_sum_poly_q(m, r)),
            Method::CForm => Ok(self.hyper_sum_poly_c(m, r)),
            Method::CRecurrence => Ok(self.hyper_sum_poly_chain(m, r)),
            Method::LemmaChain => {
                needs_m("lemma-chain")?;
                Ok(self.lemma_recurrence_family(m, r).pop().unwrap())
            }
            Method::Determinant => {
                needs_m("determinant")?;
                self.hyper_sum_det(m, r)
            }
        }
    }

    /// `G_1^(r), ..., G_m^(r)` as g-coefficient vectors, built from the
    /// coefficient recurrences for odd and even index.
    fn rec_chain(&self, m: usize, r: usize) -> Vec<Vec<Rational>> {
        if let Some(chain) = self.rec_chains.read().unwrap().get(&r) {
            if chain.len() >= m {
                return chain[..m].to_vec();
            }
        }
        let rr = rat_int(r as i64);
        // g[k - 1] holds the coefficients of G_k
        let mut g: Vec<Vec<Rational>> = vec![vec![Rational::one()]];
        for k in 2..=m {
            let mm = k.div_ceil(2);
            let denom = rat_int((k + r) as i64);
            let kk = rat_int(k as i64);
            let next: Vec<Rational> = if k % 2 == 0 {
                // k = 2M: j = M-1 from the leading term, j < M-1 mixes lower even G's
                (0..mm)
                    .map(|j| {
                        if j == mm - 1 {
                            &kk * &g[k - 2][mm - 1] / &denom
                        } else {
                            let sum = (j + 1..mm).fold(Rational::zero(), |acc, kp| {
                                acc + rat_int(binomial(k as u64, 2 * kp as i64)) * self.b(k - 2 * kp) * &g[2 * kp - 1][j]
                            });
                            (&kk * &g[k - 2][j] - &rr * sum) / &denom
                        }
                    })
                    .collect()
            } else {
                // k = 2M - 1: j = M-1 leading, j = 0 has no N G_{k-1} contribution
                (0..mm)
                    .map(|j| {
                        let sum = (j + 1..mm).fold(Rational::zero(), |acc, kp| {
                            acc + rat_int(binomial(k as u64, 2 * kp as i64 - 1)) * self.b(k + 1 - 2 * kp) * &g[2 * kp - 2][j]
                        });
                        if j == mm - 1 {
                            &kk * &g[k - 2][mm - 2] / &denom
                        } else if j == 0 {
                            -(&rr * sum) / &denom
                        } else {
                            (&kk * &g[k - 2][j - 1] - &rr * sum) / &denom
                        }
                    })
                    .collect()
            };
            g.push(next);
        }
        let mut cache = self.rec_chains.write().unwrap();
        let keep = cache.get(&r).is_none_or(|c| c.len() < g.len());
        if keep {
            cache.insert(r, g.clone());
        }
        g
    }

    /// `G_m^(r)` from the coefficient recurrences, seeded by `G_1 = 1`.
    pub fn faulhaber_rec(&self, m: usize, r: usize) -> Result<FaulhaberPoly> {
        if m < 1 {
            return Err(Error::OutOfRange { what: "m", detail: "G_m needs m >= 1".into() });
        }
        let g = self.rec_chain(m, r).pop().unwrap();
        Ok(FaulhaberPoly::from_g(m, r, g))
    }

    /// The u-form: `S_m^(r)(n) = S_1^(r) F(n(n+r))` for odd `m` and
    /// `S_2^(r) F(n(n+r))` for even `m`, `F` of degree `ceil(m/2) - 1`.
    pub fn theorem1_forms(&self, m: usize, r: usize) -> Result<UForm> {
        if r == 0 {
            return Err(Error::OutOfRange { what: "r", detail: "u-forms need r >= 1".into() });
        }
        let g = self.faulhaber_det(m, r)?.poly;
        let (prefactor, even) = if m % 2 == 1 {
            (Prefactor::S1, g)
        } else {
            let g2 = RatPoly::monomial(Variable::centered(r), rat(2, r as i64 + 2), 1);
            (Prefactor::S2, g.div_exact(&g2)?)
        };
        Ok(UForm { m, r, prefactor, poly: even.to_u_form()? })
    }

    /// `S_m(n)` in `N = n + 1/2` via `(-1)^(m+1)/(m+1)! (N^2 - 1/4) det`,
    /// the determinant being the `r = 1` Hessenberg matrix.
    pub fn faulhaber_r1(&self, m: usize) -> Result<FaulhaberR1Poly> {
        let h = build_h(m, 1, &self.tables)?;
        let var = Variable::centered(1);
        let quad = RatPoly::new(var, vec![rat(-1, 4), Rational::zero(), Rational::one()]);
        let scale = sign(m as i64 + 1) / rat_int(factorial(m as u64 + 1));
        let poly = (&quad * &h.det()).scale(&scale);
        let f_coeffs = parity_slots(&poly, m + 1);
        Ok(FaulhaberR1Poly { m, poly, f_coeffs })
    }

    /// Left side minus right side of the relation expressing `S^(r+1)` of
    /// exponent `2m - 1` (odd) or `2m` (even) through `r`-fold sums of the
    /// opposite parity. Zero whenever the relation holds.
    pub fn coffey_residual(&self, m: usize, r: usize, parity: PowerParity) -> Result<RatPoly> {
        if m < 1 {
            return Err(Error::OutOfRange { what: "m", detail: "need m >= 1".into() });
        }
        let s = |e: usize, rr: usize| self.hyper_sum_det(e, rr).map(|h| h.poly);
        let (e, terms): (usize, Vec<(Rational, usize)>) = match parity {
            PowerParity::Odd => (
                2 * m - 1,
                (1..=m)
                    .map(|k| {
                        let c = rat_int(binomial(2 * m as u64, 2 * k as i64)) * self.b(2 * m - 2 * k)
                            / rat_int(2 * m as i64);
                        (c, 2 * k)
                    })
                    .collect(),
            ),
            PowerParity::Even => (
                2 * m,
                (1..=m + 1)
                    .map(|k| {
                        let c = rat_int(binomial(2 * m as u64 + 1, 2 * k as i64 - 1)) * self.b(2 * m + 2 - 2 * k)
                            / rat_int(2 * m as i64 + 1);
                        (c, 2 * k - 1)
                    })
                    .collect(),
            ),
        };
        let mut residual = &s(e, r + 1)? - &s(e, r)?.scale(&rat(1, 2));
        for (c, idx) in terms {
            residual = &residual - &s(idx, r)?.scale(&c);
        }
        Ok(residual)
    }

    /// `(sum_j [r, j] S_j(n), G_m^(r)(N_r))`; their product is
    /// `r! S_m^(r)(n)` once `G` is pulled back to `n`.
    pub fn stirling_product_form(&self, m: usize, r: usize) -> Result<(RatPoly, RatPoly)> {
        if r == 0 {
            return Err(Error::OutOfRange { what: "r", detail: "need r >= 1".into() });
        }
        let left = (1..=r).fold(RatPoly::zero(Variable::index()), |acc, j| {
            &acc + &self.power_sum_poly(j).scale(&self.stirling(r, j))
        });
        Ok((left, self.faulhaber_det(m, r)?.poly))
    }
}

/// One step of `c_{m,r+1}^k = c_{m,r}^k + (c_{m,r}^{k-1} - c_{m+1,r}^k) / r`.
///
/// `lower` holds `c_{m,r}^1..c_{m,r}^{m+r}` and `upper` holds
/// `c_{m+1,r}^1..c_{m+1,r}^{m+r+1}`; the result holds
/// `c_{m,r+1}^1..c_{m,r+1}^{m+r+1}`.
pub fn coeff_recurrence_step(r: usize, lower: &[Rational], upper: &[Rational]) -> Result<Vec<Rational>> {
    if r == 0 {
        return Err(Error::OutOfRange { what: "r", detail: "the coefficient recurrence needs r >= 1".into() });
    }
    if lower.len() < r {
        return Err(Error::LengthMismatch { expected: r, found: lower.len() });
    }
    if upper.len() != lower.len() + 1 {
        return Err(Error::LengthMismatch { expected: lower.len() + 1, found: upper.len() });
    }
    let rr = rat_int(r as i64);
    let at = |v: &[Rational], k: usize| -> Rational {
        if k == 0 {
            Rational::zero()
        } else {
            v.get(k - 1).cloned().unwrap_or_else(Rational::zero)
        }
    };
    Ok((1..=upper.len())
        .map(|k| at(lower, k) + (at(lower, k - 1) - at(upper, k)) / &rr)
        .collect())
}
