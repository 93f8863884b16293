//! Acceptance suite. Every comparison is exact. Prints one line per
//! criterion and exits nonzero if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use hypersum::exactnum::{binomial, factorial, r_stirling1, rat, rat_int, rising_factorial, RationalJson};
use hypersum::hypersum::{hyper_sum_bruteforce, s1_poly, PowerParity};
use hypersum::{build_h, Engine, HessenbergMatrix, Method, Parity, RatPoly, Rational, Variable};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

const M_MAX: usize = 10;
const R_MAX: usize = 6;
const N_MAX: u64 = 15;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn nv(coeffs: &[(i64, i64)]) -> RatPoly {
    RatPoly::new(Variable::index(), coeffs.iter().map(|&(a, b)| rat(a, b)).collect())
}

fn centered(r: usize, coeffs: &[(i64, i64)]) -> RatPoly {
    RatPoly::new(Variable::centered(r), coeffs.iter().map(|&(a, b)| rat(a, b)).collect())
}

/// `sum a_k (n + shift)^k`, in `n`.
fn in_shift(shift: Rational, terms: &[(i64, u32)]) -> RatPoly {
    let base = RatPoly::linear(Variable::index(), shift);
    terms.iter().fold(RatPoly::zero(Variable::index()), |acc, &(a, k)| &acc + &base.pow(k).scale(&rat_int(a)))
}

/// Brute-force table `bf[m][r][n]` of exact integers.
struct Oracle {
    values: Vec<Vec<Vec<BigInt>>>,
}

impl Oracle {
    fn new(m_max: usize, r_max: usize, n_max: u64) -> Self {
        let values = (0..=m_max)
            .map(|m| (0..=r_max).map(|r| (0..=n_max).map(|n| hyper_sum_bruteforce(m, r, n)).collect()).collect())
            .collect();
        Oracle { values }
    }

    fn get(&self, m: usize, r: usize, n: u64) -> Rational {
        rat_int(self.values[m][r][n as usize].clone())
    }
}

fn criterion_1() -> Outcome {
    let started = Instant::now();
    let e = Engine::new();
    let g5 = e.faulhaber_det(5, 7).map_err(|x| x.to_string())?.poly;
    let g6 = e.faulhaber_det(6, 7).map_err(|x| x.to_string())?.poly;
    let want5 = centered(7, &[(7, 16), (0, 1), (-35, 198), (0, 1), (1, 99)]);
    let want6 = centered(7, &[(0, 1), (6419, 10296), (0, 1), (-49, 429), (0, 1), (2, 429)]);
    ensure(g5 == want5, || format!("G_5^(7) = {g5}"))?;
    ensure(g6 == want6, || format!("G_6^(7) = {g6}"))?;
    let half = rat(7, 2);
    let s5 = (&s1_poly(7) * &in_shift(half.clone(), &[(16, 4), (-280, 2), (693, 0)])).scale(&rat(1, 1584));
    let s6 = (&s1_poly(7) * &in_shift(half, &[(48, 5), (-1176, 3), (6419, 1)])).scale(&rat(1, 10296));
    let got5 = e.hyper_sum_det(5, 7).map_err(|x| x.to_string())?.poly;
    let got6 = e.hyper_sum_det(6, 7).map_err(|x| x.to_string())?.poly;
    ensure(got5 == s5, || "S_5^(7) factored display differs".into())?;
    ensure(got6 == s6, || "S_6^(7) factored display differs".into())?;
    // the expanded displays also agree with brute force
    for n in 0..=12u64 {
        ensure(got5.eval(&rat_int(n)) == rat_int(hyper_sum_bruteforce(5, 7, n)), || format!("S_5^(7)({n})"))?;
        ensure(got6.eval(&rat_int(n)) == rat_int(hyper_sum_bruteforce(6, 7, n)), || format!("S_6^(7)({n})"))?;
    }
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("G_5^(7), G_6^(7), S_5^(7), S_6^(7) exact in {elapsed:?}"))
}

fn criterion_2() -> Outcome {
    let e = Engine::new();
    let s7 = centered(1, &[(17, 2048), (0, 1), (-31, 384), (0, 1), (49, 192), (0, 1), (-7, 24), (0, 1), (1, 8)]);
    let s8 = centered(1, &[(0, 1), (127, 3840), (0, 1), (-31, 144), (0, 1), (49, 120), (0, 1), (-1, 3), (0, 1), (1, 9)]);
    for (m, want) in [(7usize, s7), (8, s8)] {
        let got = e.faulhaber_r1(m).map_err(|x| x.to_string())?;
        ensure(got.poly == want, || format!("S_{m} in N: {}", got.poly))?;
        let at = |n: i64| got.poly.eval(&(rat_int(n) + rat(1, 2)));
        ensure(at(1).is_one(), || format!("S_{m}(1) = {}", at(1)))?;
        let two = rat_int(1 + (BigInt::from(2) << (m - 1)));
        ensure(at(2) == two, || format!("S_{m}(2) = {}", at(2)))?;
    }
    Ok("S_7, S_8 in N = n + 1/2 exact; values at n = 1, 2 correct".into())
}

fn criterion_3() -> Outcome {
    let e = Engine::new();
    let lhs = &e.hyper_sum_det(5, 4).map_err(|x| x.to_string())?.poly
        - &e.hyper_sum_det(5, 3).map_err(|x| x.to_string())?.poly.scale(&rat(1, 2));
    let front = [(0, 1), (1, 1), (2, 1), (3, 1), (3, 2)]
        .iter()
        .fold(RatPoly::one(Variable::index()), |acc, &(a, b)| &acc * &nv(&[(a, 1), (b, 1)]))
        .scale(&rat(1, 240));
    let centered_bracket = &(&in_shift(rat(3, 2), &[(1, 4)]).scale(&rat(5, 126))
        - &in_shift(rat(3, 2), &[(1, 2)]).scale(&rat(5, 252)))
        - &RatPoly::constant(Variable::index(), rat(859, 2016));
    let u = nv(&[(0, 1), (3, 1), (1, 1)]);
    let product_bracket =
        &(&u.pow(2).scale(&rat(5, 126)) + &u.scale(&rat(10, 63))) - &RatPoly::constant(Variable::index(), rat(17, 63));
    for (name, bracket) in [("N-bracket", centered_bracket), ("n(n+3)-bracket", product_bracket)] {
        let diff = &lhs - &(&front * &bracket);
        ensure(diff.is_zero(), || format!("{name}: difference {diff}"))?;
    }
    let residual = e.coffey_residual(3, 3, PowerParity::Odd).map_err(|x| x.to_string())?;
    ensure(residual.is_zero(), || format!("odd-exponent relation residual {residual}"))?;
    Ok("S_5^(4) - S_5^(3)/2 identity: difference is the zero polynomial (both brackets)".into())
}

fn criterion_4() -> Outcome {
    let started = Instant::now();
    let e = Engine::new();
    let oracle = Oracle::new(M_MAX, R_MAX, N_MAX);
    let mut scalar = 0usize;
    let mut coefficients = 0usize;
    for m in 1..=M_MAX {
        for r in 1..=R_MAX {
            let polys: Vec<(Method, RatPoly)> = Method::FORMULAS
                .iter()
                .map(|&method| e.hyper_sum(m, r, method).map(|h| (method, h.poly)).map_err(|x| x.to_string()))
                .collect::<Result<_, _>>()?;
            let (first, base) = &polys[0];
            for (method, p) in &polys[1..] {
                coefficients += m + r + 1;
                ensure(p.coeffs() == base.coeffs(), || {
                    format!("(m={m}, r={r}) {} vs {} differ", first.name(), method.name())
                })?;
            }
            for (method, p) in &polys {
                for n in 0..=N_MAX {
                    scalar += 1;
                    ensure(p.eval(&rat_int(n)) == oracle.get(m, r, n), || {
                        format!("(m={m}, r={r}, n={n}) {} disagrees with brute force", method.name())
                    })?;
                }
            }
        }
    }
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} (m, r) cells, {coefficients} coefficient comparisons across routes, {scalar} values vs brute force, {elapsed:?}",
        M_MAX * R_MAX
    ))
}

fn criterion_5() -> Outcome {
    let e = Engine::new();
    for m in 1..=M_MAX {
        for r in 1..=R_MAX {
            let g = e.faulhaber_det(m, r).map_err(|x| x.to_string())?.poly;
            let want_parity = if m % 2 == 1 { Parity::Even } else { Parity::Odd };
            ensure(g.parity() == want_parity, || format!("(m={m}, r={r}) parity {:?}", g.parity()))?;
            let support = g.support();
            ensure(support.len() == m.div_ceil(2), || format!("(m={m}, r={r}) {} nonzero coefficients", support.len()))?;
            ensure(g.degree() == Some(m - 1), || format!("(m={m}, r={r}) degree {:?}", g.degree()))?;
            let signs: Vec<bool> = support.iter().rev().map(|&k| g.coeff(k).is_positive()).collect();
            ensure(signs[0], || format!("(m={m}, r={r}) leading coefficient not positive"))?;
            ensure(signs.windows(2).all(|w| w[0] != w[1]), || format!("(m={m}, r={r}) signs do not alternate"))?;
            // S = S_1 G and S_1 has leading coefficient 1/(r+1)!, so lead(G) = (r+1)! lead(S)
            let s = e.hyper_sum(m, r, Method::QForm).map_err(|x| x.to_string())?.poly;
            let forced = s.leading() * rat_int(factorial(r as u64 + 1));
            let closed = Rational::new(factorial(r as u64 + 1) * factorial(m as u64), factorial((m + r) as u64));
            ensure(g.leading() == forced && forced == closed, || {
                format!("(m={m}, r={r}) leading {} forced {forced} closed {closed}", g.leading())
            })?;
            let rec = e.faulhaber_rec(m, r).map_err(|x| x.to_string())?.poly;
            ensure(rec == g, || format!("(m={m}, r={r}) recurrence form differs from determinant form"))?;
        }
    }
    Ok(format!("{} Faulhaber forms: count, parity, alternation, leading coefficient", M_MAX * R_MAX))
}

fn criterion_6() -> Outcome {
    let e = Engine::new();
    let t = e.tables();
    let oracle = Oracle::new(2 * M_MAX + 2, R_MAX + 1, N_MAX);
    let s = |m: usize, r: usize, n: u64| oracle.get(m, r, n);
    let b = |j: usize| t.bernoulli(j);
    let mut counts = [0usize; 10];

    for m in 1..=M_MAX {
        for r in 1..=R_MAX {
            let (mi, ri) = (m as i64, r as i64);
            for n in 0..=N_MAX {
                let ni = rat_int(n);
                // (rec)
                let rhs = ((&ni + rat_int(ri)) * s(m, r, n) - s(m + 1, r, n)) / rat_int(ri);
                ensure(s(m, r + 1, n) == rhs, || format!("rec (m={m}, r={r}, n={n})"))?;
                counts[0] += 1;
                // (lm:1)
                if m >= 2 {
                    let mut rhs = rat_int(mi) * (&ni + rat(ri, 2)) * s(m - 1, r, n);
                    for k in 1..=m - 2 {
                        rhs -= rat_int(binomial(m as u64, k as i64) * ri) * b(m - k) * s(k, r, n);
                    }
                    ensure(rat_int(mi + ri) * s(m, r, n) == rhs, || format!("lm:1 (m={m}, r={r}, n={n})"))?;
                    counts[1] += 1;
                }
                // (lm:2), with m + 1 in the role of the top index
                let big = m + 1;
                let mut rhs = s(big, r, n) + rat(big as i64, 2) * s(m, r, n);
                for k in 1..=big - 2 {
                    rhs += rat_int(binomial(big as u64, k as i64)) * b(big - k) * s(k, r, n);
                }
                ensure(rat_int(big as i64) * s(m, r + 1, n) == rhs, || format!("lm:2 (m={m}, r={r}, n={n})"))?;
                counts[2] += 1;
                // (A2)
                let lhs = (1..=n).fold(Rational::zero(), |acc, j| acc + rat_int(j) * s(m, r - 1, j));
                ensure(lhs == rat_int(n + 1) * s(m, r, n) - s(m, r + 1, n), || format!("A2 (m={m}, r={r}, n={n})"))?;
                counts[3] += 1;
                // odd exponent 2m - 1 and even exponent 2m
                let odd = 2 * m - 1;
                let mut rhs = rat(1, 2) * s(odd, r, n);
                for k in 1..=m {
                    rhs += rat_int(binomial(2 * m as u64, 2 * k as i64)) * b(2 * m - 2 * k) * s(2 * k, r, n) / rat_int(2 * mi);
                }
                ensure(s(odd, r + 1, n) == rhs, || format!("odd-exponent relation (m={m}, r={r}, n={n})"))?;
                counts[4] += 1;
                let even = 2 * m;
                let mut rhs = rat(1, 2) * s(even, r, n);
                for k in 1..=m + 1 {
                    rhs += rat_int(binomial(2 * m as u64 + 1, 2 * k as i64 - 1)) * b(2 * m + 2 - 2 * k) * s(2 * k - 1, r, n)
                        / rat_int(2 * mi + 1);
                }
                ensure(s(even, r + 1, n) == rhs, || format!("even-exponent relation (m={m}, r={r}, n={n})"))?;
                counts[5] += 1;
            }
            // coefficient formulas
            let c1 = e.coeff_c(m, r, 1).map_err(|x| x.to_string())?;
            ensure(c1 == e.coeff_c1_reduced(m, r), || format!("c^1 reduced (m={m}, r={r})"))?;
            let top = e.coeff_c(m, r, m + r).map_err(|x| x.to_string())?;
            ensure(top == Rational::new(factorial(m as u64), factorial((m + r) as u64)), || format!("c^(m+r) (m={m}, r={r})"))?;
            counts[6] += 2;
        }
    }
    // the polynomial-level identities also vanish symbolically
    for m in 1..=5 {
        for r in 1..=R_MAX {
            for parity in [PowerParity::Odd, PowerParity::Even] {
                let res = e.coffey_residual(m, r, parity).map_err(|x| x.to_string())?;
                ensure(res.is_zero(), || format!("{parity:?} residual (m={m}, r={r}) = {res}"))?;
                counts[4] += 1;
            }
        }
    }
    // q_{r,i}(n) = [r+n+1, i+n+1]_{n+1}
    for r in 0..=R_MAX {
        for i in 0..=r {
            let q = e.q_poly(r, i).map_err(|x| x.to_string())?;
            for n in 0..=10i64 {
                let want = r_stirling1(r as i64 + n + 1, i as i64 + n + 1, n as usize + 1).map_err(|x| x.to_string())?;
                ensure(q.eval(&rat_int(n)) == rat_int(want), || format!("q vs r-Stirling (r={r}, i={i}, n={n})"))?;
                counts[7] += 1;
            }
        }
    }
    // det H_m^(0) = (-1)^(m-1) 2^(rising m-1) N^(m-1)
    for m in 1..=12usize {
        let h = build_h(m, 0, t).map_err(|x| x.to_string())?;
        let sign = if (m - 1) % 2 == 0 { 1 } else { -1 };
        let want = RatPoly::monomial(Variable::centered(0), rat_int(rising_factorial(2, m as u64 - 1) * sign), m - 1);
        ensure(h.det() == want, || format!("det H_{m}^(0)"))?;
        counts[8] += 1;
    }
    // the grid runner sees the same thing
    let report = hypersum::run_grid(&e, &hypersum::GridSpec::new(M_MAX, R_MAX, N_MAX));
    ensure(report.passed(), || format!("grid runner: {} failures", report.failures))?;
    counts[9] = report.checks;
    Ok(format!(
        "rec {}, lm:1 {}, lm:2 {}, A2 {}, parity relations {}, c-coefficients {}, q/r-Stirling {}, det H^(0) {}, grid {} checks; 0 failures",
        counts[0], counts[1], counts[2], counts[3], counts[4], counts[6], counts[7], counts[8], counts[9]
    ))
}

/// Laplace expansion along the first row.
fn cofactor_det(rows: &[Vec<RatPoly>], var: Variable) -> RatPoly {
    let n = rows.len();
    if n == 0 {
        return RatPoly::one(var);
    }
    let mut acc = RatPoly::zero(var);
    for j in 0..n {
        if rows[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<RatPoly>> = rows[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, v)| v.clone()).collect())
            .collect();
        let term = &rows[0][j] * &cofactor_det(&minor, var);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

fn criterion_7() -> Outcome {
    let var = Variable::centered(0);
    let mut rng = StdRng::seed_from_u64(0x4e55);
    for trial in 0..100 {
        let order = rng.gen_range(0..=6usize);
        let rows: Vec<Vec<RatPoly>> = (0..order)
            .map(|i| {
                (0..order)
                    .map(|j| {
                        if j > i + 1 {
                            RatPoly::zero(var)
                        } else {
                            let deg = rng.gen_range(0..=2usize);
                            let coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-5..=5)).collect();
                            RatPoly::from_ints(var, &coeffs)
                        }
                    })
                    .collect()
            })
            .collect();
        let oracle = cofactor_det(&rows, var);
        let h = HessenbergMatrix::from_rows(rows, RatPoly::one(var)).map_err(|x| x.to_string())?;
        ensure(h.det() == oracle, || format!("random trial {trial} (order {order})"))?;
    }
    let e = Engine::new();
    for m in 1..=7 {
        for r in 0..=4 {
            let h = build_h(m, r, e.tables()).map_err(|x| x.to_string())?;
            let oracle = cofactor_det(h.rows(), Variable::centered(r));
            ensure(h.det() == oracle, || format!("build_h({m}, {r})"))?;
        }
    }
    Ok("100 random polynomial Hessenberg matrices and build_h(m <= 7, r <= 4) match cofactor expansion".into())
}

fn run_cli(args: &[&str]) -> Result<(i32, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_hypersum"))
        .args(args)
        .env_remove("HYPERSUM_CACHE_DIR")
        .output()
        .map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned()))
}

fn criterion_8() -> Outcome {
    let (code, _) = run_cli(&["verify"])?;
    ensure(code == 0, || format!("verify exited {code}"))?;
    let (code, text) = run_cli(&["eval", "--m", "3", "--r", "1", "--n", "3"])?;
    ensure(code == 0 && text == "36\n", || format!("eval printed {text:?} (exit {code})"))?;

    let parse = |text: &str| serde_json::from_str::<Value>(text).map_err(|e| e.to_string());
    let (_, text) = run_cli(&["poly", "--m", "5", "--r", "7", "--var", "N", "--format", "json"])?;
    let p: RatPoly = serde_json::from_str(&text).map_err(|e| format!("poly json: {e}"))?;
    ensure(p.var() == Variable::centered(7) && p.degree() == Some(12), || "poly json frame".into())?;

    let (_, text) = run_cli(&["eval", "--m", "4", "--r", "2", "--n", "5", "--format", "json"])?;
    let v = parse(&text)?;
    let value: RationalJson = serde_json::from_value(v["value"].clone()).map_err(|e| format!("eval json: {e}"))?;
    ensure(value.0 == rat(1449, 1), || format!("eval json value {}", value.0))?;

    let (_, text) = run_cli(&["det", "--m", "5", "--r", "7", "--format", "json"])?;
    let det: RatPoly = serde_json::from_str(&text).map_err(|e| format!("det json: {e}"))?;
    ensure(det == centered(7, &[(10395, 2), (0, 1), (-2100, 1), (0, 1), (120, 1)]), || format!("det json {det}"))?;
    let entries = parse(&text)?["entries"].as_array().cloned().unwrap_or_default();
    ensure(entries.len() == 16, || "det json entries".into())?;
    for entry in entries {
        serde_json::from_value::<RatPoly>(entry).map_err(|e| format!("det entry: {e}"))?;
    }

    let (_, text) = run_cli(&["table", "--max-m", "2", "--max-r", "2", "--n", "3", "--format", "json"])?;
    for row in parse(&text)?["rows"].as_array().cloned().unwrap_or_default() {
        serde_json::from_value::<RationalJson>(row["value"].clone()).map_err(|e| format!("table json: {e}"))?;
    }

    let (code, text) = run_cli(&["verify", "--max-m", "2", "--max-r", "1", "--max-n", "3", "--format", "json"])?;
    let v = parse(&text)?;
    ensure(code == 0 && v["status"] == "pass", || "small verify json".into())?;
    ensure(v["cells"].as_array().map(Vec::len) == Some(6), || "small verify should have 6 cells".into())?;
    Ok("verify exits 0, eval prints 36, poly/eval/det/table/verify JSON parse into their schemas".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("golden Faulhaber forms at r = 7", criterion_1),
        ("golden power sums in N = n + 1/2", criterion_2),
        ("golden iterated-sum difference identity", criterion_3),
        ("five-way equivalence", criterion_4),
        ("Faulhaber form structure", criterion_5),
        ("identity suite", criterion_6),
        ("determinant oracle", criterion_7),
        ("CLI contract", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("[PASS] criterion {}: {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] criterion {}: {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
