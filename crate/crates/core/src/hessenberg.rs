//! The lower Hessenberg matrix `H_m^(r)(N)` whose determinant yields the
//! Faulhaber polynomial `G_m^(r)`, and an exact division-free determinant.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{binomial, rat_int, Rational, Tables};
use crate::polyring::{RatPoly, Variable};

/// Minimal ring interface shared by the two entry types we need: polynomial
/// entries in `N` and their numeric evaluations.
pub trait RingElement: Clone + PartialEq {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn is_zero_elem(&self) -> bool;
}

impl RingElement for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

impl RingElement for RatPoly {
    fn zero_like(&self) -> Self {
        RatPoly::zero(self.var())
    }
    fn one_like(&self) -> Self {
        RatPoly::one(self.var())
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

/// Square matrix with zeros above the first superdiagonal, stored dense.
/// `one` is the ring unit, returned as the determinant of the empty matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HessenbergMatrix<T> {
    order: usize,
    entries: Vec<Vec<T>>,
    #[serde(skip)]
    one: T,
}

impl<T: RingElement> HessenbergMatrix<T> {
    /// Validates squareness and the Hessenberg shape.
    pub fn from_rows(rows: Vec<Vec<T>>, one: T) -> Result<Self> {
        let order = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(Error::LengthMismatch { expected: order, found: row.len() });
            }
            if let Some(j) = (i + 2..order).find(|&j| !row[j].is_zero_elem()) {
                return Err(Error::OutOfRange {
                    what: "Hessenberg entry",
                    detail: format!("nonzero entry at ({}, {}) above the superdiagonal", i + 1, j + 1),
                });
            }
        }
        Ok(HessenbergMatrix { order, entries: rows, one })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// 0-based access.
    pub fn entry(&self, i: usize, j: usize) -> &T {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.entries
    }

    pub fn unit(&self) -> &T {
        &self.one
    }

    /// Determinant by the leading-principal-minor recurrence
    ///
    /// `p_k = h_kk p_{k-1} + sum_{j<k} (-1)^{k-j} h_kj (prod_{t=j}^{k-1} h_{t,t+1}) p_{j-1}`,
    ///
    /// with `p_0 = 1`. Only ring operations are used, so it is exact over
    /// polynomial entries.
    pub fn det(&self) -> T {
        let h = &self.entries;
        let mut minors = vec![self.one.clone()];
        for k in 0..self.order {
            let mut acc = h[k][k].mul(&minors[k]);
            let mut chain = self.one.clone();
            for j in (0..k).rev() {
                chain = chain.mul(&h[j][j + 1]);
                if h[k][j].is_zero_elem() {
                    continue;
                }
                let term = h[k][j].mul(&chain).mul(&minors[j]);
                acc = if (k - j) % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            minors.push(acc);
        }
        minors.pop().unwrap()
    }

    pub fn map<U: RingElement>(&self, one: U, f: impl Fn(&T) -> U) -> HessenbergMatrix<U> {
        HessenbergMatrix {
            order: self.order,
            entries: self.entries.iter().map(|row| row.iter().map(&f).collect()).collect(),
            one,
        }
    }
}

impl HessenbergMatrix<RatPoly> {
    /// Substitute a concrete value for `N`.
    pub fn evaluate(&self, x: &Rational) -> HessenbergMatrix<Rational> {
        self.map(Rational::one(), |p| p.eval(x))
    }

    /// Column-aligned text rendering with exact fractions.
    pub fn pretty(&self) -> String {
        pretty_grid(&self.entries)
    }
}

impl HessenbergMatrix<Rational> {
    pub fn pretty(&self) -> String {
        pretty_grid(&self.entries)
    }
}

fn pretty_grid<T: std::fmt::Display>(rows: &[Vec<T>]) -> String {
    if rows.is_empty() {
        return "[]\n".to_string();
    }
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|row| row.iter().map(|e| e.to_string()).collect())
        .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    let mut out = String::new();
    for row in &cells {
        let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        out.push_str(&format!("[ {} ]\n", line.join("  ")));
    }
    out
}

/// `H_m^(r)(N)`, order `m - 1`, entries polynomials in `N = n + r/2`.
///
/// With 1-based row `i` and column `j`: the diagonal is `-(i+1) N`, the
/// superdiagonal is `r + i + 1`, and strictly below the diagonal sits
/// `r C(i+1, i+1-j) B_{i+1-j}`.
pub fn build_h(m: usize, r: usize, tables: &Tables) -> Result<HessenbergMatrix<RatPoly>> {
    if m < 1 {
        return Err(Error::OutOfRange { what: "m", detail: "Hessenberg matrix needs m >= 1".into() });
    }
    let var = Variable::centered(r);
    let order = m - 1;
    let rows = (1..=order)
        .map(|i| {
            (1..=order)
                .map(|j| {
                    if j == i {
                        RatPoly::monomial(var, rat_int(-(i as i64 + 1)), 1)
                    } else if j == i + 1 {
                        RatPoly::constant(var, rat_int((r + i + 1) as i64))
                    } else if j < i {
                        let d = i + 1 - j;
                        let c = rat_int(binomial(i as u64 + 1, d as i64) * r) * tables.bernoulli(d);
                        RatPoly::constant(var, c)
                    } else {
                        RatPoly::zero(var)
                    }
                })
                .collect()
        })
        .collect();
    HessenbergMatrix::from_rows(rows, RatPoly::one(var))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{factorial, rat, rising_factorial};
    use proptest::prelude::*;

    fn tables() -> std::sync::Arc<Tables> {
        Tables::shared()
    }

    /// Laplace expansion along the first row; exponential, test-only.
    fn cofactor_det<T: RingElement>(m: &[Vec<T>], one: &T) -> T {
        let n = m.len();
        if n == 0 {
            return one.clone();
        }
        let mut acc = one.zero_like();
        for col in 0..n {
            if m[0][col].is_zero_elem() {
                continue;
            }
            let minor: Vec<Vec<T>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|&(c, _)| c != col).map(|(_, v)| v.clone()).collect())
                .collect();
            let term = m[0][col].mul(&cofactor_det(&minor, one));
            acc = if col % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        acc
    }

    fn consts(var: Variable, rows: &[&[(i64, i64)]]) -> Vec<Vec<RatPoly>> {
        rows.iter()
            .map(|row| row.iter().map(|&(a, b)| RatPoly::constant(var, rat(a, b))).collect())
            .collect()
    }

    #[test]
    fn build_m3_symbolic_shape() {
        for r in 0..6usize {
            let h = build_h(3, r, &tables()).unwrap();
            let var = Variable::centered(r);
            assert_eq!(h.order(), 2);
            assert_eq!(h.entry(0, 0), &RatPoly::monomial(var, rat(-2, 1), 1));
            assert_eq!(h.entry(0, 1), &RatPoly::constant(var, rat(r as i64 + 2, 1)));
            assert_eq!(h.entry(1, 0), &RatPoly::constant(var, rat(r as i64, 2)));
            assert_eq!(h.entry(1, 1), &RatPoly::monomial(var, rat(-3, 1), 1));
        }
    }

    #[test]
    fn build_m1_is_empty() {
        let h = build_h(1, 4, &tables()).unwrap();
        assert_eq!(h.order(), 0);
        assert_eq!(h.det(), RatPoly::one(Variable::centered(4)));
        assert!(build_h(0, 4, &tables()).is_err());
    }

    #[test]
    fn build_m5_r7_matches_display() {
        let h = build_h(5, 7, &tables()).unwrap();
        let var = Variable::centered(7);
        let n = |k: i64| RatPoly::monomial(var, rat(-k, 1), 1);
        let c = |a: i64, b: i64| RatPoly::constant(var, rat(a, b));
        let z = || RatPoly::zero(var);
        let expected = vec![
            vec![n(2), c(9, 1), z(), z()],
            vec![c(7, 2), n(3), c(10, 1), z()],
            vec![z(), c(7, 1), n(4), c(11, 1)],
            vec![c(-7, 6), z(), c(35, 3), n(5)],
        ];
        assert_eq!(h.rows(), expected.as_slice());
        // 11880 G_5^(7)
        let g = RatPoly::new(var, vec![rat(7, 16), rat(0, 1), rat(-35, 198), rat(0, 1), rat(1, 99)]);
        assert_eq!(h.det(), g.scale(&rat(11880, 1)));
    }

    #[test]
    fn det_r0_closed_form() {
        for m in 2..=8usize {
            let h = build_h(m, 0, &tables()).unwrap();
            let sign = if (m - 1) % 2 == 0 { 1 } else { -1 };
            let c = rat_int(rising_factorial(2, m as u64 - 1) * sign);
            assert_eq!(h.det(), RatPoly::monomial(Variable::centered(0), c, m - 1), "m = {m}");
        }
    }

    #[test]
    fn det_degree_and_leading_coefficient() {
        for m in 1..=9usize {
            for r in 0..=5 {
                let d = build_h(m, r, &tables()).unwrap().det();
                assert_eq!(d.degree(), Some(m - 1));
                let sign = if (m - 1) % 2 == 0 { 1 } else { -1 };
                assert_eq!(d.leading(), rat_int(factorial(m as u64) * sign));
            }
        }
    }

    #[test]
    fn det_matches_cofactor_for_built_matrices() {
        for m in 1..=7 {
            for r in 0..=4 {
                let h = build_h(m, r, &tables()).unwrap();
                assert_eq!(h.det(), cofactor_det(h.rows(), h.unit()), "m = {m}, r = {r}");
            }
        }
    }

    #[test]
    fn numeric_evaluation_commutes_with_det() {
        let h = build_h(6, 7, &tables()).unwrap();
        let x = rat(23, 2);
        assert_eq!(h.evaluate(&x).det(), h.det().eval(&x));
    }

    #[test]
    fn shape_is_enforced() {
        let var = Variable::index();
        let rows = consts(var, &[&[(1, 1), (1, 1), (1, 1)], &[(1, 1), (1, 1), (1, 1)], &[(1, 1), (1, 1), (1, 1)]]);
        assert!(HessenbergMatrix::from_rows(rows, RatPoly::one(var)).is_err());
        let ragged = consts(var, &[&[(1, 1)], &[(1, 1), (2, 1)]]);
        assert!(matches!(
            HessenbergMatrix::from_rows(ragged, RatPoly::one(var)),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn pretty_print_aligns() {
        let h = build_h(3, 1, &tables()).unwrap();
        assert_eq!(h.pretty(), "[ -2N    3 ]\n[ 1/2  -3N ]\n");
        assert_eq!(build_h(1, 0, &tables()).unwrap().pretty(), "[]\n");
    }

    fn hessenberg_strategy() -> impl Strategy<Value = (Vec<Vec<RatPoly>>, usize)> {
        (1usize..=5).prop_flat_map(|order| {
            let cell = prop::collection::vec(-3i64..=3, 0..3);
            (prop::collection::vec(prop::collection::vec(cell, order), order), 0..order).prop_map(
                move |(raw, row)| {
                    let var = Variable::index();
                    let rows = raw
                        .into_iter()
                        .enumerate()
                        .map(|(i, r)| {
                            r.into_iter()
                                .enumerate()
                                .map(|(j, cs)| if j > i + 1 { RatPoly::zero(var) } else { RatPoly::from_ints(var, &cs) })
                                .collect()
                        })
                        .collect::<Vec<Vec<RatPoly>>>();
                    (rows, row)
                },
            )
        })
    }

    proptest! {
        #[test]
        fn scaling_a_row_scales_det((rows, row) in hessenberg_strategy(), c in -5i64..=5) {
            let one = RatPoly::one(Variable::index());
            let h = HessenbergMatrix::from_rows(rows.clone(), one.clone()).unwrap();
            let mut scaled = rows;
            for e in scaled[row].iter_mut() {
                *e = e.scale(&rat(c, 1));
            }
            let hs = HessenbergMatrix::from_rows(scaled, one.clone()).unwrap();
            prop_assert_eq!(hs.det(), h.det().scale(&rat(c, 1)));
            prop_assert_eq!(h.det(), cofactor_det(h.rows(), &one));
        }
    }
}
