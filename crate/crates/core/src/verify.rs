//! Cross-verification sweeps behind `kfib verify`.
//!
//! Each suite evaluates independent cells (in parallel) and collects them in
//! a fixed order, so a report depends only on its options.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::Serialize;

use crate::binomial::binom;
use crate::certified::CertifiedReal;
use crate::closed_forms::{
    gsum, kfib_binomial, kfib_howard_cooper_erroneous, kfib_ordinary, kfib_ordinary_alt,
    kfib_ordinary_unchecked,
};
use crate::decimal::certified_strings;
use crate::error::Result;
use crate::sequence::{count_compositions, kfib_order_k1, kfib_table, KIndex};
use crate::series::{self, Series};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cell {
    /// Which identity or engine the cell checks.
    pub check: String,
    pub k: i64,
    pub n: i64,
    pub pass: bool,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub cells: Vec<Cell>,
    pub failures: usize,
}

impl VerifyReport {
    pub fn new(suite: Suite, cells: Vec<Cell>) -> Self {
        let failures = cells.iter().filter(|c| !c.pass).count();
        VerifyReport {
            suite: suite.to_string(),
            cells,
            failures,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn failed_cells(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(|c| !c.pass)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Engines,
    Identities,
    Series,
    Erratum,
}

impl Suite {
    pub const ALL: [Suite; 4] = [
        Suite::Engines,
        Suite::Identities,
        Suite::Series,
        Suite::Erratum,
    ];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Engines => "engines",
            Suite::Identities => "identities",
            Suite::Series => "series",
            Suite::Erratum => "erratum",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub k_max: u32,
    pub n_max: u32,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            k_max: 6,
            n_max: 200,
        }
    }
}

fn cell(
    check: &str,
    k: i64,
    n: i64,
    expected: impl ToString,
    actual: impl ToString,
    pass: bool,
) -> Cell {
    Cell {
        check: check.to_string(),
        k,
        n,
        pass,
        expected: expected.to_string(),
        actual: actual.to_string(),
    }
}

fn eq_cell(check: &str, k: i64, n: i64, expected: &BigInt, actual: Result<BigInt>) -> Cell {
    match actual {
        Ok(v) => cell(check, k, n, expected, &v, v == *expected),
        Err(e) => cell(check, k, n, expected, format!("error: {e}"), false),
    }
}

fn certified_text(x: &CertifiedReal) -> String {
    let (v, b) = certified_strings(x);
    format!("{v} ± {b}")
}

fn orders(opts: &VerifyOptions) -> Vec<KIndex> {
    (2..=opts.k_max.max(2) as i64)
        .map(|k| KIndex::new(k).expect("k >= 2"))
        .collect()
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> VerifyReport {
    let cells = match suite {
        Suite::Engines => engines(opts),
        Suite::Identities => identities(opts),
        Suite::Series => series_checks(opts),
        Suite::Erratum => erratum(opts),
    };
    VerifyReport::new(suite, cells)
}

/// Every engine against the order-k recurrence.
fn engines(opts: &VerifyOptions) -> Vec<Cell> {
    let n_max = opts.n_max as usize;
    orders(opts)
        .into_par_iter()
        .flat_map_iter(|k| {
            let table = kfib_table(k, n_max);
            let kk = k.as_i64();
            (0..=n_max)
                .flat_map(|n| {
                    let expected = &table.values()[n];
                    let ni = n as i64;
                    let mut row = vec![eq_cell(
                        "recurrence-k1",
                        kk,
                        ni,
                        expected,
                        Ok(kfib_order_k1(k, n)),
                    )];
                    if ni >= kk {
                        row.push(eq_cell("binomial", kk, ni, expected, kfib_binomial(k, ni)));
                        if ni != 2 * kk - 1 {
                            row.push(eq_cell("ordinary", kk, ni, expected, kfib_ordinary(k, ni)));
                        }
                        row.push(eq_cell(
                            "ordinary-alt",
                            kk,
                            ni,
                            expected,
                            kfib_ordinary_alt(k, ni),
                        ));
                    }
                    row
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Binomial identities, initial segments, the composition oracle and the
/// truncated-sum recurrence.
fn identities(opts: &VerifyOptions) -> Vec<Cell> {
    let mut cells: Vec<Cell> = (-50..=50i64)
        .into_par_iter()
        .flat_map_iter(|a| {
            (-50..=50i64).flat_map(move |b| {
                let lhs = binom(a, b);
                let mut row = Vec::with_capacity(2);
                if (a, b) != (0, 0) {
                    let rhs = binom(a - 1, b - 1) + binom(a - 1, b);
                    row.push(cell("pascal", a, b, &rhs, &lhs, lhs == rhs));
                }
                let odd = if b <= a && a < 0 { b - 1 } else { b }.rem_euclid(2) == 1;
                let reflected = binom(b - a - 1, b);
                let rhs = if odd { -reflected } else { reflected };
                row.push(cell("reflection", a, b, &rhs, &lhs, lhs == rhs));
                row
            })
        })
        .collect();

    let ks = orders(opts);
    for &k in &ks {
        let kk = k.as_i64();
        let table = kfib_table(k, 2 * kk as usize);
        for n in kk..2 * kk {
            let expected = BigInt::one() << (n - kk) as u64;
            cells.push(eq_cell(
                "initial-segment",
                kk,
                n,
                &expected,
                Ok(table.values()[n as usize].clone()),
            ));
        }
        let expected = (BigInt::one() << kk as u64) - 1;
        cells.push(eq_cell(
            "initial-segment",
            kk,
            2 * kk,
            &expected,
            Ok(table.values()[2 * kk as usize].clone()),
        ));
    }

    let comp_cells: Vec<Cell> = ks
        .par_iter()
        .filter(|k| k.get() <= 5)
        .flat_map_iter(|&k| {
            let kk = k.as_i64();
            let n_top = opts.n_max.min(22) as i64;
            let table = kfib_table(k, (n_top + kk) as usize);
            (1..=n_top)
                .map(move |n| {
                    let expected = &table.values()[(n + kk - 1) as usize];
                    eq_cell(
                        "compositions",
                        kk,
                        n,
                        expected,
                        count_compositions(k, n as u64),
                    )
                })
                .collect::<Vec<_>>()
        })
        .collect();
    cells.extend(comp_cells);

    let g_cells: Vec<Cell> = ks
        .par_iter()
        .flat_map_iter(|&k| {
            let kk = k.as_i64();
            let n_max = opts.n_max.max(2) as i64;
            let table = kfib_table(k, (n_max + 2 * kk + 1) as usize);
            let g: Vec<Result<BigInt>> = (0..=n_max + kk + 1).map(|n| gsum(k, n)).collect();
            let mut row = Vec::new();
            for n in 2..=n_max {
                let expected = &table.values()[(n + kk - 2) as usize];
                row.push(eq_cell(
                    "gsum-equals-fib",
                    kk,
                    n,
                    expected,
                    g[n as usize].clone(),
                ));
                if let (Ok(a), Ok(b), Ok(c)) = (
                    &g[(n + kk + 1) as usize],
                    &g[(n + kk) as usize],
                    &g[n as usize],
                ) {
                    let rhs = 2 * b - c;
                    row.push(cell("gsum-recurrence", kk, n, &rhs, a, *a == rhs));
                }
            }
            for n in 2..=kk + 2 {
                let expected = if n <= kk + 1 {
                    BigInt::one() << (n - 2) as u64
                } else {
                    (BigInt::one() << kk as u64) - 1
                };
                row.push(eq_cell("gsum-initial", kk, n, &expected, gsum(k, n)));
            }
            row
        })
        .collect();
    cells.extend(g_cells);
    cells
}

const SERIES_TOL_DENOM: u64 = 1_000_000_000_000;
const REFERENCE_BITS: u32 = 128;

fn series_tol() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(SERIES_TOL_DENOM))
}

fn series_label(s: &Series) -> (String, i64) {
    match *s {
        Series::RhoPower { n } => ("rho-power".into(), n as i64),
        Series::Hermite { a } => ("hermite".into(), a),
        Series::Asymptotic { n } => ("asymptotic".into(), n as i64),
    }
}

/// Tail-bound soundness at every truncation `0..=horizon`.
fn tail_cell(series: Series, k: KIndex, horizon: usize) -> Cell {
    let (name, param) = series_label(&series);
    let check = format!("tail-soundness:{name}");
    let limit = match series.reference_limit(k, REFERENCE_BITS) {
        Ok(l) => l,
        Err(e) => {
            return cell(
                &check,
                k.as_i64(),
                param,
                "reference",
                format!("error: {e}"),
                false,
            )
        }
    };
    let first_bad = (0..=horizon).find(|&count| match series::partial_sum(series, k, count) {
        Ok(p) => (&p.value - limit.approx()).abs() - limit.err() > p.tail_bound,
        Err(_) => true,
    });
    let actual = match first_bad {
        None => format!("sound for 0..={horizon} terms"),
        Some(l) => format!("unsound at {l} terms"),
    };
    cell(
        &check,
        k.as_i64(),
        param,
        certified_text(&limit),
        actual,
        first_bad.is_none(),
    )
}

fn agreement_cell(
    check: &str,
    k: KIndex,
    param: i64,
    reference: Result<CertifiedReal>,
    value: Result<CertifiedReal>,
) -> Cell {
    match (reference, value) {
        (Ok(r), Ok(v)) => cell(
            check,
            k.as_i64(),
            param,
            certified_text(&r),
            certified_text(&v),
            r.overlaps(&v),
        ),
        (r, v) => {
            let show = |x: Result<CertifiedReal>| {
                x.map_or_else(|e| format!("error: {e}"), |c| certified_text(&c))
            };
            cell(check, k.as_i64(), param, show(r), show(v), false)
        }
    }
}

fn series_checks(opts: &VerifyOptions) -> Vec<Cell> {
    let ks: Vec<KIndex> = orders(opts).into_iter().filter(|k| k.get() <= 5).collect();
    let n_cap = opts.n_max as u64;
    let mut jobs: Vec<(KIndex, Series, &'static str)> = Vec::new();
    for &k in &ks {
        for n in [1u64, 3] {
            jobs.push((k, Series::RhoPower { n }, "tail"));
        }
        for a in -3..=3 {
            jobs.push((k, Series::Hermite { a }, "tail"));
            jobs.push((k, Series::Hermite { a }, "hermite-sum"));
        }
        for n in [0u64, 2, 5, 10, 20].into_iter().filter(|&n| n <= n_cap) {
            jobs.push((k, Series::Asymptotic { n }, "tail"));
            jobs.push((k, Series::Asymptotic { n }, "asymptotic-series"));
        }
        for n in [1u64, 2, 5] {
            jobs.push((k, Series::RhoPower { n }, "rho-power"));
        }
    }
    let mut cells: Vec<Cell> = jobs
        .into_par_iter()
        .map(|(k, s, what)| {
            let (_, param) = series_label(&s);
            match what {
                "tail" => tail_cell(s, k, 40),
                check => agreement_cell(
                    check,
                    k,
                    param,
                    s.reference_limit(k, REFERENCE_BITS),
                    series::adaptive(s, k, &series_tol()).map(|p| p.to_certified()),
                ),
            }
        })
        .collect();

    let trunc: Vec<Cell> = ks
        .par_iter()
        .flat_map_iter(|&k| {
            let kk = k.as_i64();
            (2..=opts.n_max.min(100) as i64)
                .map(move |n| {
                    let terms = ((n - 1) / (kk + 1) + 1) as usize;
                    let expected = gsum(k, n);
                    let actual = series::thm3_partial(k, n as u64, terms);
                    match (expected, actual) {
                        (Ok(e), Ok(p)) => {
                            let pass = p.value == BigRational::from_integer(e.clone());
                            cell("asymptotic-truncation", kk, n, &e, &p.value, pass)
                        }
                        (e, p) => cell(
                            "asymptotic-truncation",
                            kk,
                            n,
                            format!("{e:?}"),
                            format!("{p:?}"),
                            false,
                        ),
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect();
    cells.extend(trunc);
    cells
}

/// The over-long summation range: it must agree with the corrected one for
/// `k = 2` and must diverge at the witness `(k, n) = (5, 7)`.
fn erratum(opts: &VerifyOptions) -> Vec<Cell> {
    let n_max = opts.n_max as i64;
    let mut cells: Vec<Cell> = orders(opts)
        .into_par_iter()
        .flat_map_iter(|k| {
            let kk = k.as_i64();
            let table = kfib_table(k, n_max.max(2 * kk) as usize);
            let mut row = Vec::new();
            for n in kk..=n_max {
                let truth = &table.values()[n as usize];
                let wrong = match kfib_howard_cooper_erroneous(k, n) {
                    Ok(w) => w,
                    Err(e) => {
                        row.push(cell(
                            "erroneous-range",
                            kk,
                            n,
                            truth,
                            format!("error: {e}"),
                            false,
                        ));
                        continue;
                    }
                };
                let agrees = wrong.to_integer().as_ref() == Some(truth);
                if kk == 2 {
                    row.push(cell("k2-agreement", kk, n, truth, &wrong, agrees));
                } else if !agrees {
                    row.push(cell("divergence", kk, n, truth, &wrong, true));
                }
            }
            // Informational: the guarded index n = 2k - 1, evaluated anyway.
            let n = 2 * kk - 1;
            let raw = kfib_ordinary_unchecked(k, n);
            row.push(cell(
                "excluded-index",
                kk,
                n,
                &table.values()[n as usize],
                &raw,
                true,
            ));
            row
        })
        .collect();

    let k5 = KIndex::new(5).expect("5 >= 2");
    let witness = kfib_howard_cooper_erroneous(k5, 7);
    let correct = kfib_ordinary(k5, 7);
    cells.push(match (&witness, &correct) {
        (Ok(w), Ok(c)) => cell("witness", 5, 7, c, w, w.to_integer().as_ref() != Some(c)),
        _ => cell(
            "witness",
            5,
            7,
            format!("{correct:?}"),
            format!("{witness:?}"),
            false,
        ),
    });
    cells
}
