//! Cross-method verification: a grid runner that compares every route and
//! identity over `(m, r, n)`, plus golden fixtures for the published worked
//! examples.
//!
//! Failures are data. A run never stops at the first mismatch; each failure
//! carries both divergent objects so a report is enough to debug from.

use std::fmt::Write as _;
use std::time::Instant;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::exactnum::{
    binomial, factorial, rat, rat_int, rising_factorial, r_stirling1, Rational, RationalJson,
};
use crate::hessenberg::build_h;
use crate::hypersum::{
    hyper_sum_bruteforce, s1_closed, s1_poly, s2_closed, Engine, Method, PowerParity, Prefactor,
};
use crate::polyring::{Parity, RatPoly, Variable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    fn of(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mismatch {
    /// Two polynomials that should be identical; `degree` is the lowest
    /// degree where they differ.
    Polynomial { degree: usize, left: RatPoly, right: RatPoly },
    Value { left: RationalJson, right: RationalJson },
    /// A structural property that does not hold.
    Property { detail: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub check: String,
    /// The two sides compared, e.g. `["q-form", "determinant"]`.
    pub pair: [String; 2],
    pub mismatch: Mismatch,
}

/// Value-level checks at one `(m, r, n)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValueCell {
    pub m: usize,
    pub r: usize,
    pub n: u64,
    pub status: Status,
    pub checks: usize,
    pub failures: Vec<Failure>,
}

/// Polynomial-level checks for one `(m, r)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolyCell {
    pub m: usize,
    pub r: usize,
    pub status: Status,
    pub checks: usize,
    pub failures: Vec<Failure>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixtureResult {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<Mismatch>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub m_max: usize,
    pub r_max: usize,
    pub n_max: u64,
    pub methods: Vec<Method>,
    pub status: Status,
    pub failures: usize,
    pub checks: usize,
    pub cells: Vec<ValueCell>,
    pub poly_cells: Vec<PolyCell>,
    pub golden: Vec<FixtureResult>,
    /// Informational only.
    pub wall_time_ms: u128,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    fn finish(&mut self, started: Instant) {
        self.failures = self.cells.iter().map(|c| c.failures.len()).sum::<usize>()
            + self.poly_cells.iter().map(|c| c.failures.len()).sum::<usize>()
            + self.golden.iter().filter(|g| g.status == Status::Fail).count();
        self.checks = self.cells.iter().map(|c| c.checks).sum::<usize>()
            + self.poly_cells.iter().map(|c| c.checks).sum::<usize>()
            + self.golden.len();
        self.status = Status::of(self.failures == 0);
        self.wall_time_ms = started.elapsed().as_millis();
    }

    /// Append golden fixture results to a grid report.
    pub fn with_golden(mut self, golden: Vec<FixtureResult>) -> Self {
        let started = Instant::now();
        let prior = self.wall_time_ms;
        self.golden.extend(golden);
        self.finish(started);
        self.wall_time_ms += prior;
        self
    }

    /// Human-readable summary table.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "grid m<={} r<={} n<={}  methods: {}",
            self.m_max,
            self.r_max,
            self.n_max,
            self.methods.iter().map(|m| m.name()).collect::<Vec<_>>().join(", ")
        );
        let value_fail = self.cells.iter().filter(|c| c.status == Status::Fail).count();
        let poly_fail = self.poly_cells.iter().filter(|c| c.status == Status::Fail).count();
        let _ = writeln!(out, "{:<22} {:>8} {:>8}", "section", "cells", "failing");
        let _ = writeln!(out, "{:<22} {:>8} {:>8}", "value (m,r,n)", self.cells.len(), value_fail);
        let _ = writeln!(out, "{:<22} {:>8} {:>8}", "polynomial (m,r)", self.poly_cells.len(), poly_fail);
        let golden_fail = self.golden.iter().filter(|g| g.status == Status::Fail).count();
        let _ = writeln!(out, "{:<22} {:>8} {:>8}", "golden fixtures", self.golden.len(), golden_fail);
        for c in self.poly_cells.iter().filter(|c| c.status == Status::Fail) {
            for f in &c.failures {
                let _ = writeln!(out, "FAIL (m={}, r={}) {} [{} vs {}]", c.m, c.r, f.check, f.pair[0], f.pair[1]);
            }
        }
        for c in self.cells.iter().filter(|c| c.status == Status::Fail) {
            for f in &c.failures {
                let _ = writeln!(
                    out,
                    "FAIL (m={}, r={}, n={}) {} [{} vs {}]",
                    c.m, c.r, c.n, f.check, f.pair[0], f.pair[1]
                );
            }
        }
        for g in self.golden.iter().filter(|g| g.status == Status::Fail) {
            let _ = writeln!(out, "FAIL golden {}", g.name);
        }
        let _ = writeln!(
            out,
            "{}: {} checks, {} failures, {} ms",
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks,
            self.failures,
            self.wall_time_ms
        );
        out
    }
}

/// Grid bounds and the routes to compare. Cells cover `1 <= m <= m_max`,
/// `1 <= r <= r_max` and, for values, `1 <= n <= n_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSpec {
    pub m_max: usize,
    pub r_max: usize,
    pub n_max: u64,
    pub methods: Vec<Method>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { m_max: 10, r_max: 6, n_max: 15, methods: Method::FORMULAS.to_vec() }
    }
}

impl GridSpec {
    pub fn new(m_max: usize, r_max: usize, n_max: u64) -> Self {
        GridSpec { m_max, r_max, n_max, methods: Method::FORMULAS.to_vec() }
    }

    /// The route that identity checks are evaluated through.
    fn reference(&self) -> Method {
        self.methods.first().copied().unwrap_or(Method::Determinant)
    }
}

fn first_difference(a: &RatPoly, b: &RatPoly) -> Option<usize> {
    let len = a.coeffs().len().max(b.coeffs().len());
    (0..len).find(|&k| a.coeff(k) != b.coeff(k))
}

#[derive(Default)]
struct Checks {
    count: usize,
    failures: Vec<Failure>,
}

impl Checks {
    fn poly(&mut self, check: &str, pair: [&str; 2], left: &RatPoly, right: &RatPoly) {
        self.count += 1;
        if let Some(degree) = first_difference(left, right) {
            self.failures.push(Failure {
                check: check.to_string(),
                pair: pair.map(str::to_string),
                mismatch: Mismatch::Polynomial { degree, left: left.clone(), right: right.clone() },
            });
        }
    }

    fn zero(&mut self, check: &str, residual: &RatPoly) {
        let zero = RatPoly::zero(residual.var());
        self.poly(check, ["residual", "zero"], residual, &zero);
    }

    fn value(&mut self, check: &str, pair: [&str; 2], left: &Rational, right: &Rational) {
        self.count += 1;
        if left != right {
            self.failures.push(Failure {
                check: check.to_string(),
                pair: pair.map(str::to_string),
                mismatch: Mismatch::Value { left: RationalJson(left.clone()), right: RationalJson(right.clone()) },
            });
        }
    }

    fn property(&mut self, check: &str, subject: &str, violation: Option<String>) {
        self.count += 1;
        if let Some(detail) = violation {
            self.failures.push(Failure {
                check: check.to_string(),
                pair: [subject.to_string(), "property".to_string()],
                mismatch: Mismatch::Property { detail },
            });
        }
    }

    fn error(&mut self, check: &str, subject: &str, e: crate::Error) {
        self.property(check, subject, Some(e.to_string()));
    }
}

/// Expected shape of `G_m^(r)` for `r >= 1`: parity opposite to
/// `m`, exactly `ceil(m/2)` nonzero coefficients, strictly alternating signs
/// from the top, positive leading coefficient. `None` when all hold.
pub fn faulhaber_structure_violation(m: usize, g: &RatPoly) -> Option<String> {
    let want = if m % 2 == 1 { Parity::Even } else { Parity::Odd };
    if g.parity() != want {
        return Some(format!("parity {:?}, expected {:?}", g.parity(), want));
    }
    let support = g.support();
    if support.len() != m.div_ceil(2) {
        return Some(format!("{} nonzero coefficients, expected {}", support.len(), m.div_ceil(2)));
    }
    if g.degree() != Some(m - 1) {
        return Some(format!("degree {:?}, expected {}", g.degree(), m - 1));
    }
    if !g.leading().is_positive() {
        return Some("leading coefficient is not positive".into());
    }
    let signs: Vec<bool> = support.iter().rev().map(|&k| g.coeff(k).is_positive()).collect();
    if let Some(i) = signs.windows(2).position(|w| w[0] == w[1]) {
        return Some(format!("signs do not alternate after the {}-th nonzero coefficient", i + 1));
    }
    None
}

/// Polynomial routes for one `(m, r)`; values are `(method, poly)`.
fn routes(engine: &Engine, m: usize, r: usize, methods: &[Method], checks: &mut Checks) -> Vec<(Method, RatPoly)> {
    methods
        .iter()
        .filter_map(|&method| match engine.hyper_sum(m, r, method) {
            Ok(h) => Some((method, h.poly)),
            Err(e) => {
                checks.error("route", method.name(), e);
                None
            }
        })
        .collect()
}

/// All polynomial-level checks for one `(m, r)`.
pub fn check_poly_cell(engine: &Engine, spec: &GridSpec, m: usize, r: usize) -> PolyCell {
    let mut c = Checks::default();
    let reference = spec.reference();
    let s = |mm: usize, rr: usize| engine.hyper_sum(mm, rr, reference).map(|h| h.poly);
    let polys = routes(engine, m, r, &spec.methods, &mut c);
    let oracle = engine.hyper_sum_poly_fit(m, r).poly;

    // route equivalence, each against the first and against the interpolation oracle
    if let Some((first, base)) = polys.first() {
        for (method, p) in &polys[1..] {
            c.poly("route-equivalence", [first.name(), method.name()], base, p);
        }
    }
    let lead = Rational::new(factorial(m as u64), factorial((m + r) as u64));
    for (method, p) in &polys {
        c.poly("interpolation-oracle", [method.name(), "bruteforce-fit"], p, &oracle);
        c.value("leading-coefficient", [method.name(), "m!/(m+r)!"], &p.leading(), &lead);
        c.value(
            "value-at-zero",
            [method.name(), "bruteforce"],
            &p.eval(&Rational::zero()),
            &rat_int(hyper_sum_bruteforce(m, r, 0)),
        );
    }
    let Ok(s_mr) = s(m, r) else {
        c.property("reference-route", reference.name(), Some("reference route unavailable".into()));
        return finish_poly(m, r, c);
    };

    // Faulhaber form, both constructions, plus structure
    match (engine.faulhaber_det(m, r), engine.faulhaber_rec(m, r)) {
        (Ok(gd), Ok(gr)) => {
            c.poly("faulhaber-det-vs-rec", ["determinant", "case-recurrence"], &gd.poly, &gr.poly);
            c.property("faulhaber-structure", "determinant", faulhaber_structure_violation(m, &gd.poly));
            let forced = &s_mr.leading() * rat_int(factorial(r as u64 + 1));
            c.value("faulhaber-leading", ["G leading", "(r+1)! c^(m+r)"], &gd.poly.leading(), &forced);
            let closed = rat_int(factorial(r as u64 + 1) * factorial(m as u64)) / rat_int(factorial((m + r) as u64));
            c.value("faulhaber-leading-closed", ["G leading", "(r+1)! m!/(m+r)!"], &gd.poly.leading(), &closed);
            match gd.poly.to_index() {
                Ok(g_n) => c.poly("s1-times-g", [reference.name(), "S1*G"], &s_mr, &(&s1_poly(r) * &g_n)),
                Err(e) => c.error("s1-times-g", "determinant", e),
            }
        }
        (Err(e), _) | (_, Err(e)) => c.error("faulhaber", "G", e),
    }

    // u-form
    match engine.theorem1_forms(m, r) {
        Ok(f) => {
            let pre = match f.prefactor {
                Prefactor::S1 => s1_poly(r),
                Prefactor::S2 => &s1_poly(r) * &RatPoly::from_ints(Variable::index(), &[r as i64, 2])
                    .scale(&rat(1, r as i64 + 2)),
            };
            match f.poly.to_index() {
                Ok(fu) => c.poly("u-form", [reference.name(), "prefactor*F(n(n+r))"], &s_mr, &(&pre * &fu)),
                Err(e) => c.error("u-form", "F", e),
            }
        }
        Err(e) => c.error("u-form", "F", e),
    }

    // recurrence in r
    let n_plus_r = RatPoly::linear(Variable::index(), rat_int(r as i64));
    if let (Ok(up), Ok(next_m)) = (s(m, r + 1), s(m + 1, r)) {
        let rhs = (&(&n_plus_r * &s_mr) - &next_m).scale(&rat(1, r as i64));
        c.poly("rec", ["S^(r+1)", "((n+r)S^(r) - S_(m+1)^(r))/r"], &up, &rhs);
    }

    // lemma recurrence in m
    if m >= 2 {
        let n_r = RatPoly::linear(Variable::index(), rat(r as i64, 2));
        if let Ok(prev) = s(m - 1, r) {
            let mut rhs = (&n_r * &prev).scale(&rat_int(m as i64));
            for k in 1..=m - 2 {
                let coef = rat_int(binomial(m as u64, k as i64) * r) * engine.tables().bernoulli(m - k);
                if let Ok(sk) = s(k, r) {
                    rhs = &rhs - &sk.scale(&coef);
                }
            }
            c.poly("lm:1", ["(m+r)S_m", "m N S_(m-1) - r sum"], &s_mr.scale(&rat_int((m + r) as i64)), &rhs);
        }
    }

    // intermediate relation, with m+1 in the role of m
    {
        let big = m + 1;
        if let (Ok(lhs), Ok(top)) = (s(m, r + 1), s(big, r)) {
            let mut rhs = &top + &s_mr.scale(&rat(big as i64, 2));
            for k in 1..=big - 2 {
                let coef = rat_int(binomial(big as u64, k as i64)) * engine.tables().bernoulli(big - k);
                if let Ok(sk) = s(k, r) {
                    rhs = &rhs + &sk.scale(&coef);
                }
            }
            c.poly("lm:2", ["(m+1)S_m^(r+1)", "sum"], &lhs.scale(&rat_int(big as i64)), &rhs);
        }
    }

    // odd/even parity relations
    let (mm, parity) = if m % 2 == 1 { (m.div_ceil(2), PowerParity::Odd) } else { (m / 2, PowerParity::Even) };
    let label = if parity == PowerParity::Odd { "coffey1" } else { "coffey2" };
    match engine.coffey_residual(mm, r, parity) {
        Ok(res) => c.zero(label, &res),
        Err(e) => c.error(label, "residual", e),
    }

    // coefficient formulas
    match engine.coeff_c(m, r, 1) {
        Ok(c1) => c.value("c1-reduced", ["c^1", "reduced"], &c1, &engine.coeff_c1_reduced(m, r)),
        Err(e) => c.error("c1-reduced", "c^1", e),
    }
    match engine.coeff_c(m, r, m + r) {
        Ok(top) => c.value("c-leading", ["c^(m+r)", "m!/(m+r)!"], &top, &lead),
        Err(e) => c.error("c-leading", "c^(m+r)", e),
    }

    // Stirling product representation
    match engine.stirling_product_form(m, r) {
        Ok((left, right)) => match right.to_index() {
            Ok(g) => c.poly(
                "stirling-product",
                ["r! S", "(sum [r,j] S_j) G"],
                &s_mr.scale(&rat_int(factorial(r as u64))),
                &(&left * &g),
            ),
            Err(e) => c.error("stirling-product", "G", e),
        },
        Err(e) => c.error("stirling-product", "left", e),
    }

    // once per r: q_{r,i} against r-Stirling numbers
    if m == 1 {
        for i in 0..=r {
            if let Ok(q) = engine.q_poly(r, i) {
                for n in 0..=8i64 {
                    if let Ok(rs) = r_stirling1(r as i64 + n + 1, i as i64 + n + 1, n as usize + 1) {
                        c.value("q-vs-r-stirling", ["q_(r,i)(n)", "r-Stirling"], &q.eval(&rat_int(n)), &rat_int(rs));
                    }
                }
            }
        }
    }

    finish_poly(m, r, c)
}

fn finish_poly(m: usize, r: usize, c: Checks) -> PolyCell {
    PolyCell { m, r, status: Status::of(c.failures.is_empty()), checks: c.count, failures: c.failures }
}

/// All value-level checks at one `(m, r, n)`; `polys` are this `(m, r)`'s
/// routes, `reference` holds `S_m^(r-1)`, `S_m^(r)`, `S_m^(r+1)`.
fn check_value_cell(
    m: usize,
    r: usize,
    n: u64,
    polys: &[(Method, RatPoly)],
    reference: &Option<[RatPoly; 3]>,
) -> ValueCell {
    let mut c = Checks::default();
    let x = rat_int(n);
    let truth = rat_int(hyper_sum_bruteforce(m, r, n));
    for (method, p) in polys {
        c.value("bruteforce", [method.name(), "bruteforce"], &p.eval(&x), &truth);
    }
    if m == 1 {
        c.value("s1-closed", ["C(n+r,r+1)", "bruteforce"], &s1_closed(r, n), &truth);
    }
    if m == 2 {
        c.value("s2-closed", ["(2n+r)/(r+2) S1", "bruteforce"], &s2_closed(r, n), &truth);
    }
    if let Some([below, here, above]) = reference {
        let lhs = (1..=n).fold(Rational::zero(), |acc, j| acc + rat_int(j) * below.eval(&rat_int(j)));
        let rhs = rat_int(n + 1) * here.eval(&x) - above.eval(&x);
        c.value("A2", ["sum j S^(r-1)(j)", "(n+1)S^(r) - S^(r+1)"], &lhs, &rhs);
    }
    ValueCell { m, r, n, status: Status::of(c.failures.is_empty()), checks: c.count, failures: c.failures }
}

/// Every check over the grid. Cells are independent and run in parallel;
/// the report lists them in `(m, r[, n])` order regardless.
pub fn run_grid(engine: &Engine, spec: &GridSpec) -> VerifyReport {
    let started = Instant::now();
    let pairs: Vec<(usize, usize)> =
        (1..=spec.m_max).flat_map(|m| (1..=spec.r_max).map(move |r| (m, r))).collect();
    let reference = spec.reference();

    let results: Vec<(PolyCell, Vec<ValueCell>)> = pairs
        .par_iter()
        .map(|&(m, r)| {
            let poly_cell = check_poly_cell(engine, spec, m, r);
            let mut scratch = Checks::default();
            let polys = routes(engine, m, r, &spec.methods, &mut scratch);
            let triple = (|| {
                Some([
                    engine.hyper_sum(m, r - 1, reference).ok()?.poly,
                    engine.hyper_sum(m, r, reference).ok()?.poly,
                    engine.hyper_sum(m, r + 1, reference).ok()?.poly,
                ])
            })();
            let cells = (1..=spec.n_max).map(|n| check_value_cell(m, r, n, &polys, &triple)).collect();
            (poly_cell, cells)
        })
        .collect();

    let mut report = VerifyReport {
        m_max: spec.m_max,
        r_max: spec.r_max,
        n_max: spec.n_max,
        methods: spec.methods.clone(),
        status: Status::Pass,
        failures: 0,
        checks: 0,
        cells: Vec::new(),
        poly_cells: Vec::new(),
        golden: Vec::new(),
        wall_time_ms: 0,
    };
    for (p, v) in results {
        report.poly_cells.push(p);
        report.cells.extend(v);
    }
    report.finish(started);
    report
}

fn poly_fixture(name: &str, expected: &RatPoly, actual: crate::Result<RatPoly>) -> FixtureResult {
    let failure = match actual {
        Ok(a) => first_difference(expected, &a)
            .map(|degree| Mismatch::Polynomial { degree, left: expected.clone(), right: a }),
        Err(e) => Some(Mismatch::Property { detail: e.to_string() }),
    };
    FixtureResult { name: name.to_string(), status: Status::of(failure.is_none()), failure }
}

fn value_fixture(name: &str, expected: Rational, actual: Rational) -> FixtureResult {
    let failure = (expected != actual)
        .then(|| Mismatch::Value { left: RationalJson(expected), right: RationalJson(actual) });
    FixtureResult { name: name.to_string(), status: Status::of(failure.is_none()), failure }
}

fn bool_fixture(name: &str, ok: bool, detail: impl FnOnce() -> String) -> FixtureResult {
    let failure = (!ok).then(|| Mismatch::Property { detail: detail() });
    FixtureResult { name: name.to_string(), status: Status::of(ok), failure }
}

fn nv(coeffs: &[(i64, i64)]) -> RatPoly {
    RatPoly::new(Variable::index(), coeffs.iter().map(|&(a, b)| rat(a, b)).collect())
}

fn cv(r: usize, coeffs: &[(i64, i64)]) -> RatPoly {
    RatPoly::new(Variable::centered(r), coeffs.iter().map(|&(a, b)| rat(a, b)).collect())
}

/// `a (n + 7/2)^k` terms summed, in `n`.
fn shifted_sum(shift: Rational, terms: &[(i64, u32)]) -> RatPoly {
    let base = RatPoly::linear(Variable::index(), shift);
    terms.iter().fold(RatPoly::zero(Variable::index()), |acc, &(a, k)| &acc + &base.pow(k).scale(&rat_int(a)))
}

/// Exact checks of the published worked examples.
pub fn golden_fixtures(engine: &Engine) -> Vec<FixtureResult> {
    let mut out = Vec::new();
    let t = engine.tables();

    out.push(value_fixture("B_2 = 1/6", rat(1, 6), t.bernoulli(2)));
    out.push(value_fixture("B_3 = 0", rat(0, 1), t.bernoulli(3)));
    out.push(value_fixture("9 rising 4 = 11880", rat(11880, 1), rat_int(rising_factorial(9, 4))));

    // H_5^(7) as displayed
    let h57 = build_h(5, 7, t).map(|h| h.evaluate(&Rational::zero()));
    let consts = [[0, 9, 0, 0], [0, 0, 10, 0], [0, 7, 0, 11], [0, 0, 0, 0]];
    let lower = [((1, 0), rat(7, 2)), ((3, 0), rat(-7, 6)), ((3, 2), rat(35, 3))];
    out.push(bool_fixture(
        "H_5^(7) entries",
        h57.as_ref().is_ok_and(|h| {
            (0..4).all(|i| {
                (0..4).all(|j| {
                    let want = lower
                        .iter()
                        .find(|(ij, _)| *ij == (i, j))
                        .map(|(_, v)| v.clone())
                        .unwrap_or_else(|| rat_int(consts[i][j]));
                    h.entry(i, j) == &want
                })
            })
        }),
        || "constant parts of H_5^(7) differ from the display".into(),
    ));

    let g57 = cv(7, &[(7, 16), (0, 1), (-35, 198), (0, 1), (1, 99)]);
    let g67 = cv(7, &[(0, 1), (6419, 10296), (0, 1), (-49, 429), (0, 1), (2, 429)]);
    out.push(poly_fixture("G_5^(7)", &g57, engine.faulhaber_det(5, 7).map(|g| g.poly)));
    out.push(poly_fixture("G_6^(7)", &g67, engine.faulhaber_det(6, 7).map(|g| g.poly)));
    out.push(poly_fixture(
        "det H_5^(7) = 11880 G_5^(7)",
        &g57.scale(&rat(11880, 1)),
        build_h(5, 7, t).map(|h| h.det()),
    ));
    out.push(bool_fixture(
        "parity of G_5^(7), G_6^(7)",
        g57.parity() == Parity::Even && g67.parity() == Parity::Odd,
        || "parity".into(),
    ));

    let s57 = (&s1_poly(7) * &shifted_sum(rat(7, 2), &[(16, 4), (-280, 2), (693, 0)])).scale(&rat(1, 1584));
    let s67 = (&s1_poly(7) * &shifted_sum(rat(7, 2), &[(48, 5), (-1176, 3), (6419, 1)])).scale(&rat(1, 10296));
    out.push(poly_fixture("S_5^(7) factored", &s57, engine.hyper_sum_det(5, 7).map(|h| h.poly)));
    out.push(poly_fixture("S_6^(7) factored", &s67, engine.hyper_sum_det(6, 7).map(|h| h.poly)));

    for r in 1..=5usize {
        let ri = r as i64;
        let expected = (&s1_poly(r) * &nv(&[(ri * (ri - 1), 1), (6 * ri, 1), (6, 1)])).scale(&rat(1, (ri + 2) * (ri + 3)));
        out.push(poly_fixture(&format!("S_3^({r}) closed form"), &expected, engine.hyper_sum_det(3, r).map(|h| h.poly)));
        let hm3 = build_h(3, r, t).map(|h| h.evaluate(&Rational::zero()));
        out.push(bool_fixture(
            &format!("H_3^({r}) lower-left = r/2"),
            hm3.is_ok_and(|h| h.entry(1, 0) == &rat(ri, 2) && h.entry(0, 1) == &rat_int(ri + 2)),
            || "entry".into(),
        ));
    }
    let tri = nv(&[(0, 1), (1, 2), (1, 2)]);
    out.push(poly_fixture("S_3(n) = C(n+1,2)^2", &(&tri * &tri), engine.hyper_sum_det(3, 1).map(|h| h.poly)));
    out.push(value_fixture("S_3(3) = 36", rat(36, 1), rat_int(hyper_sum_bruteforce(3, 1, 3))));
    out.push(value_fixture("S_1^(2)(3) = C(5,3)", rat(10, 1), s1_closed(2, 3)));

    let s7 = cv(1, &[(17, 2048), (0, 1), (-31, 384), (0, 1), (49, 192), (0, 1), (-7, 24), (0, 1), (1, 8)]);
    let s8 = cv(1, &[(0, 1), (127, 3840), (0, 1), (-31, 144), (0, 1), (49, 120), (0, 1), (-1, 3), (0, 1), (1, 9)]);
    out.push(poly_fixture("S_7 in N = n + 1/2", &s7, engine.faulhaber_r1(7).map(|f| f.poly)));
    out.push(poly_fixture("S_8 in N = n + 1/2", &s8, engine.faulhaber_r1(8).map(|f| f.poly)));

    // S_5^(4) - S_5^(3)/2, both published factorizations
    let lhs = engine
        .hyper_sum_det(5, 4)
        .and_then(|a| engine.hyper_sum_det(5, 3).map(|b| &a.poly - &b.poly.scale(&rat(1, 2))));
    let front = [nv(&[(0, 1), (1, 1)]), nv(&[(1, 1), (1, 1)]), nv(&[(2, 1), (1, 1)]), nv(&[(3, 1), (1, 1)]), nv(&[(3, 1), (2, 1)])]
        .iter()
        .fold(RatPoly::one(Variable::index()), |acc, f| &acc * f)
        .scale(&rat(1, 240));
    let centered_form = shifted_sum(rat(3, 2), &[(1, 4)]).scale(&rat(5, 126))
        - shifted_sum(rat(3, 2), &[(1, 2)]).scale(&rat(5, 252))
        - RatPoly::constant(Variable::index(), rat(859, 2016));
    let u = nv(&[(0, 1), (3, 1), (1, 1)]);
    let product_form = &(&u.pow(2).scale(&rat(5, 126)) + &u.scale(&rat(10, 63)))
        - &RatPoly::constant(Variable::index(), rat(17, 63));
    out.push(poly_fixture("S_5^(4) - S_5^(3)/2, centered bracket", &(&front * &centered_form), lhs.clone()));
    out.push(poly_fixture("S_5^(4) - S_5^(3)/2, n(n+3) bracket", &(&front * &product_form), lhs));
    out.push(poly_fixture(
        "coffey1 residual, m = r = 3",
        &RatPoly::zero(Variable::index()),
        engine.coffey_residual(3, 3, PowerParity::Odd),
    ));

    out.push(poly_fixture("det H_1^(r) = 1", &RatPoly::one(Variable::centered(3)), build_h(1, 3, t).map(|h| h.det())));
    for m in 2..=8usize {
        let sign = if (m - 1) % 2 == 0 { 1 } else { -1 };
        let expected = RatPoly::monomial(Variable::centered(0), rat_int(rising_factorial(2, m as u64 - 1) * sign), m - 1);
        out.push(poly_fixture(&format!("det H_{m}^(0) closed form"), &expected, build_h(m, 0, t).map(|h| h.det())));
    }
    for m in 1..=8 {
        out.push(poly_fixture(
            &format!("S_{m}^(0) = n^{m} via determinant"),
            &RatPoly::monomial(Variable::index(), Rational::one(), m),
            engine.hyper_sum_det(m, 0).map(|h| h.poly),
        ));
    }
    for r in 0..=6usize {
        out.push(poly_fixture(&format!("G_1^({r}) = 1"), &RatPoly::one(Variable::centered(r)), engine.faulhaber_det(1, r).map(|g| g.poly)));
        out.push(poly_fixture(
            &format!("G_2^({r}) = 2N/(r+2)"),
            &RatPoly::monomial(Variable::centered(r), rat(2, r as i64 + 2), 1),
            engine.faulhaber_rec(2, r).map(|g| g.poly),
        ));
    }
    for m in 0..=8usize {
        for r in 1..=5usize {
            let lead = Rational::new(factorial(m as u64), factorial((m + r) as u64));
            let got = engine.coeff_c(m, r, m + r).unwrap_or_else(|_| -Rational::one());
            out.push(value_fixture(&format!("c_({m},{r})^({}) = m!/(m+r)!", m + r), lead, got));
        }
    }

    // g_{9,j} relations; the displayed constants belong to r = 10
    let g = |m: usize, j: usize| -> Rational {
        engine.faulhaber_rec(m, 10).map(|f| f.g_coeffs[j].clone()).unwrap_or_else(|_| -Rational::one())
    };
    let f = |a: i64| rat(a, 19);
    let relations = [
        ("g_(9,0)", g(9, 0), f(3) * g(1, 0) - f(20) * g(3, 0) + f(42) * g(5, 0) - f(60) * g(7, 0)),
        ("g_(9,1)", g(9, 1), f(9) * g(8, 0) - f(20) * g(3, 1) + f(42) * g(5, 1) - f(60) * g(7, 1)),
        ("g_(9,2)", g(9, 2), f(9) * g(8, 1) + f(42) * g(5, 2) - f(60) * g(7, 2)),
        ("g_(9,3)", g(9, 3), f(9) * g(8, 2) - f(60) * g(7, 3)),
        ("g_(9,4)", g(9, 4), f(9) * g(8, 3)),
    ];
    for (name, lhs, rhs) in relations {
        out.push(value_fixture(&format!("{name} relation at r = 10"), rhs, lhs));
    }
    // the leading relation holds generically with factor 9/(9+r)
    for r in 1..=6usize {
        let got = engine.faulhaber_rec(9, r).map(|f| f.g_coeffs[4].clone()).unwrap_or_default();
        let from8 = engine.faulhaber_rec(8, r).map(|f| f.g_coeffs[3].clone()).unwrap_or_default();
        out.push(value_fixture(&format!("g_(9,4) = 9/(9+r) g_(8,3), r = {r}"), rat(9, 9 + r as i64) * from8, got));
    }
    out
}

/// Golden fixtures wrapped as a report with an empty grid.
pub fn golden_report(engine: &Engine) -> VerifyReport {
    let started = Instant::now();
    let mut report = VerifyReport {
        m_max: 0,
        r_max: 0,
        n_max: 0,
        methods: Vec::new(),
        status: Status::Pass,
        failures: 0,
        checks: 0,
        cells: Vec::new(),
        poly_cells: Vec::new(),
        golden: golden_fixtures(engine),
        wall_time_ms: 0,
    };
    report.finish(started);
    report
}

/// `S_m^(r)` has leading coefficient `m!/(m+r)!`.
pub fn leading_coefficient_holds(engine: &Engine, m: usize, r: usize) -> bool {
    engine
        .hyper_sum_det(m, r)
        .is_ok_and(|h| h.poly.leading() == Rational::new(factorial(m as u64), factorial((m + r) as u64)))
}
