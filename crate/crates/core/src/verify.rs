//! Numeric verification suites: the log-concavity inequality for bounded
//! table counts, the Stirling sandwich for `ω(n) = nⁿ/n!`, the desk-scale
//! concavification of `ln T` with its quality bound, coefficient-limit
//! convergence, and the generating-function upper bound.

use crate::bignum::{ln_hp, ratio_to_f64};
use crate::count::{count_tables_with_budget, knomial, ln_count};
use crate::simplex::{Lp, LpOutcome};
use crate::tables::{BoundsMatrix, Cap, MarginPair};
use crate::{count, maxent, par, tg, Error, Result, DEFAULT_STATE_BUDGET};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Log-domain slack used by every inequality check in this module.
pub const LOG_SLACK: f64 = 1e-9;

/// `ω(n) = nⁿ/n!` with `0⁰ = 1`, exact, plus a log view.
#[derive(Debug, Clone)]
pub struct OmegaValue {
    pub n: u64,
    pub value: BigRational,
    pub log: f64,
}

pub fn omega(n: u64) -> OmegaValue {
    let value = omega_rational(n);
    let log = ratio_to_f64(&ln_hp(&value, 96));
    OmegaValue { n, value, log }
}

fn omega_rational(n: u64) -> BigRational {
    if n == 0 {
        return BigRational::one();
    }
    let power = BigUint::from(n).pow(n as u32);
    BigRational::new(BigInt::from(power), BigInt::from(crate::bignum::factorial(n)))
}

/// `Ω(V) = Σ ω(v)` over the entries of a vector or matrix, exact.
pub fn omega_sum(entries: &[u64]) -> BigRational {
    entries.iter().map(|&v| omega_rational(v)).sum()
}

fn ln_hp_f64(x: &BigRational) -> f64 {
    ratio_to_f64(&ln_hp(x, 128))
}

// ---------------------------------------------------------------------------
// Stirling sandwich
// ---------------------------------------------------------------------------

/// `n - ln√(2πn) - ln(e/√(2π)) ≤ ln ω(n) ≤ n - ln√(2πn)`, checked for
/// `n = 1..=n_max`. Exact rationals drive the small range; a running
/// log-factorial takes over where `n!` outgrows practical exactness checks.
#[derive(Debug, Clone, Serialize)]
pub struct StirlingReport {
    pub n_max: u64,
    /// Smallest value of `upper_bound - ln ω(n)` seen (can touch zero only
    /// in the n→∞ limit).
    pub min_upper_slack: f64,
    /// Smallest value of `ln ω(n) - lower_bound` seen (zero at `n = 1`).
    pub min_lower_slack: f64,
    pub pass: bool,
}

pub fn stirling_check(n_max: u64) -> Result<StirlingReport> {
    if n_max < 1 {
        return Err(Error::Domain("n_max must be >= 1".into()));
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let correction = 1.0 - (two_pi).sqrt().ln(); // ln(e/sqrt(2π))
    let mut log_fact = 0.0f64;
    let mut min_upper = f64::INFINITY;
    let mut min_lower = f64::INFINITY;
    for n in 1..=n_max {
        let nf = n as f64;
        log_fact += nf.ln();
        let ln_omega = nf * nf.ln() - log_fact;
        if n <= 170 {
            // cross-check the log-domain accumulation against the exact rational
            let exact = ln_hp_f64(&omega_rational(n));
            if (exact - ln_omega).abs() > 1e-9 {
                return Err(Error::Domain(format!(
                    "log-domain omega diverged from the exact value at n={n}"
                )));
            }
        }
        let upper = nf - (two_pi * nf).sqrt().ln();
        let lower = upper - correction;
        min_upper = min_upper.min(upper - ln_omega);
        min_lower = min_lower.min(ln_omega - lower);
    }
    // 1e-10 absolute slack absorbs f64 accumulation; the n=1 lower bound is
    // exactly tight.
    let pass = min_upper >= -1e-10 && min_lower >= -1e-10;
    Ok(StirlingReport { n_max, min_upper_slack: min_upper, min_lower_slack: min_lower, pass })
}

// ---------------------------------------------------------------------------
// Log-concavity inequality for bounded counts
// ---------------------------------------------------------------------------

/// A convex combination of margin pairs over a common cap matrix.
#[derive(Debug, Clone)]
pub struct BmInstance {
    /// Convex weights, exact rationals summing to 1.
    pub weights: Vec<BigRational>,
    pub row_margins: Vec<Vec<u64>>,
    pub col_margins: Vec<Vec<u64>>,
    pub bounds: BoundsMatrix,
}

#[derive(Debug, Clone, Serialize)]
pub struct BmReport {
    pub lhs_log: f64,
    pub rhs_log: f64,
    /// Some component count is zero, making the right side vacuous.
    pub degenerate: bool,
    pub holds: bool,
    pub combined_r: Vec<u64>,
    pub combined_c: Vec<u64>,
}

/// Checks the table-count log-concavity inequality
/// `ω(|K|)·T_K(R,C) / (Ω(R,C̃)·Ω(K)) ≥ Π_t [T_K(Rᵗ,Cᵗ) / min(Ω(Rᵗ,C̃ᵗ), Ω(K))]^{α_t}`
/// in log domain, with exact counts and 128-bit logarithms of the exact
/// rational correction factors. `Ω(R,C̃)` is `Ω` of the concatenated vector,
/// i.e. `Ω(R) + Ω(C̃)`: the inequality arises by substituting the stacked
/// margin vector `(R, C̃)` into the unbounded-count form, so the row and
/// complement-column corrections add rather than multiply.
pub fn bm_check(inst: &BmInstance) -> Result<BmReport> {
    bm_check_with_budget(inst, DEFAULT_STATE_BUDGET)
}

pub fn bm_check_with_budget(inst: &BmInstance, budget: u64) -> Result<BmReport> {
    let p = inst.weights.len();
    if p == 0 || inst.row_margins.len() != p || inst.col_margins.len() != p {
        return Err(Error::Domain("weights and margin pairs must align".into()));
    }
    let wsum: BigRational = inst.weights.iter().cloned().sum();
    if wsum != BigRational::one() || inst.weights.iter().any(|w| w.is_negative()) {
        return Err(Error::Domain("weights must be nonnegative and sum to 1 exactly".into()));
    }
    let (m, n) = (inst.bounds.m(), inst.bounds.n());
    let caps: Vec<u64> = {
        let mut v = Vec::with_capacity(m * n);
        for i in 0..m {
            for j in 0..n {
                match inst.bounds.get(i, j) {
                    Cap::Finite(k) => v.push(k),
                    Cap::Unbounded => {
                        return Err(Error::Domain("the inequality needs finite caps".into()))
                    }
                }
            }
        }
        v
    };
    let total0: u64 = inst.row_margins[0].iter().sum();
    for t in 0..p {
        if inst.row_margins[t].len() != m || inst.col_margins[t].len() != n {
            return Err(Error::Domain(format!("margin pair {t} has the wrong shape")));
        }
        let rt: u64 = inst.row_margins[t].iter().sum();
        let ct: u64 = inst.col_margins[t].iter().sum();
        if rt != total0 || ct != total0 {
            return Err(Error::Domain("all margin pairs must share one total".into()));
        }
    }
    // combined margins must be integral for the exact count
    let combine = |vectors: &[Vec<u64>], len: usize| -> Result<Vec<u64>> {
        (0..len)
            .map(|idx| {
                let sum: BigRational = vectors
                    .iter()
                    .zip(&inst.weights)
                    .map(|(v, w)| BigRational::from_integer(BigInt::from(v[idx])) * w)
                    .sum();
                if sum.is_integer() {
                    Ok(sum.to_integer().to_u64().unwrap())
                } else {
                    Err(Error::Domain(format!("combined margin entry {sum} is not an integer")))
                }
            })
            .collect()
    };
    let combined_r = combine(&inst.row_margins, m)?;
    let combined_c = combine(&inst.col_margins, n)?;

    let col_sums: Vec<u64> = (0..n).map(|j| (0..m).map(|i| caps[i * n + j]).sum()).collect();
    let c_tilde: Vec<u64> = combined_c
        .iter()
        .zip(&col_sums)
        .map(|(&cj, &s)| {
            s.checked_sub(cj).ok_or_else(|| {
                Error::Domain(format!("combined column margin {cj} exceeds the cap column sum {s}"))
            })
        })
        .collect::<Result<_>>()?;

    let k_total: u64 = caps.iter().sum();
    let omega_k = omega_rational(k_total);
    let omega_sum_k = omega_sum(&caps);
    let count_combined = count_tables_with_budget(
        &MarginPair::from_ints(&combined_r, &combined_c)?,
        &inst.bounds,
        budget,
    )?;
    let lhs_log = if count_combined.is_zero() {
        f64::NEG_INFINITY
    } else {
        let stacked = omega_sum(&combined_r) + omega_sum(&c_tilde);
        ln_hp_f64(&omega_k) + ln_hp_f64(&count::ln_arg(&count_combined))
            - ln_hp_f64(&stacked)
            - ln_hp_f64(&omega_sum_k)
    };

    let mut rhs_log = 0.0f64;
    let mut degenerate = false;
    for t in 0..p {
        let count_t = count_tables_with_budget(
            &MarginPair::from_ints(&inst.row_margins[t], &inst.col_margins[t])?,
            &inst.bounds,
            budget,
        )?;
        if count_t.is_zero() {
            degenerate = true;
            rhs_log = f64::NEG_INFINITY;
            break;
        }
        let c_tilde_t: Option<Vec<u64>> = inst.col_margins[t]
            .iter()
            .zip(&col_sums)
            .map(|(&cj, &s)| s.checked_sub(cj))
            .collect();
        let c_tilde_t = c_tilde_t.expect("count > 0 forces margins under the column cap sums");
        let factor = (omega_sum(&inst.row_margins[t]) + omega_sum(&c_tilde_t)).min(omega_sum_k.clone());
        let weight = ratio_to_f64(&inst.weights[t]);
        rhs_log += weight * (ln_hp_f64(&count::ln_arg(&count_t)) - ln_hp_f64(&factor));
    }

    let holds = rhs_log == f64::NEG_INFINITY || lhs_log >= rhs_log - LOG_SLACK;
    Ok(BmReport { lhs_log, rhs_log, degenerate, holds, combined_r, combined_c })
}

/// Outcome of a seeded randomized trial suite.
#[derive(Debug, Clone, Serialize)]
pub struct BmTrialsReport {
    pub seed: u64,
    pub trials: usize,
    pub violations: usize,
    pub degenerate: usize,
    pub min_margin: f64,
    pub pass: bool,
}

/// Runs seeded random desk-scale instances through [`bm_check`]. Each trial
/// draws caps, builds margin pairs from randomly filled tables (so component
/// counts are positive), and picks rational weights whose combination lands
/// on integer margins (rejection-sampled). Trials are independent and run in
/// parallel; the per-trial RNG stream makes the suite order-independent.
pub fn bm_trials(seed: u64, trials: usize) -> Result<BmTrialsReport> {
    let reports: Vec<Result<BmReport>> = par::map_collect((0..trials).collect(), |t| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t as u64 + 1);
        let inst = random_bm_instance(&mut rng);
        bm_check(&inst)
    });
    let mut violations = 0;
    let mut degenerate = 0;
    let mut min_margin = f64::INFINITY;
    for rep in reports {
        let rep = rep?;
        if rep.degenerate {
            degenerate += 1;
            continue;
        }
        let margin = rep.lhs_log - rep.rhs_log;
        min_margin = min_margin.min(margin);
        if !rep.holds {
            violations += 1;
        }
    }
    Ok(BmTrialsReport { seed, trials, violations, degenerate, min_margin, pass: violations == 0 })
}

fn random_bm_instance(rng: &mut ChaCha8Rng) -> BmInstance {
    loop {
        let m = rng.random_range(1..=3usize);
        let n = rng.random_range(1..=3usize);
        let bounds = if rng.random_bool(0.5) {
            BoundsMatrix::uniform(m, n, Cap::Finite(rng.random_range(1..=3u64)))
        } else {
            BoundsMatrix::from_rows(
                (0..m).map(|_| (0..n).map(|_| Cap::Finite(rng.random_range(0..=3u64))).collect()).collect(),
            )
            .expect("nonempty shape")
        };
        let cap_total: u64 =
            (0..m).map(|i| (0..n).map(|j| bounds.get(i, j).finite().unwrap()).sum::<u64>()).sum();
        if cap_total == 0 {
            continue;
        }
        let total = rng.random_range(1..=cap_total.min(6));
        let p = rng.random_range(1..=3usize);
        let menu: &[&[(i64, i64)]] = match p {
            1 => &[&[(1, 1)]],
            2 => &[&[(1, 2), (1, 2)], &[(1, 4), (3, 4)], &[(1, 3), (2, 3)]],
            _ => &[&[(1, 3), (1, 3), (1, 3)], &[(1, 2), (1, 4), (1, 4)], &[(1, 2), (1, 3), (1, 6)]],
        };
        for _ in 0..64 {
            let weights: Vec<BigRational> = menu
                .choose(rng)
                .unwrap()
                .iter()
                .map(|&(num, den)| BigRational::new(BigInt::from(num), BigInt::from(den)))
                .collect();
            let mut row_margins = Vec::with_capacity(p);
            let mut col_margins = Vec::with_capacity(p);
            for _ in 0..p {
                let (r, c) = random_table_margins(rng, &bounds, total);
                row_margins.push(r);
                col_margins.push(c);
            }
            let inst = BmInstance { weights, row_margins, col_margins, bounds: bounds.clone() };
            if bm_combined_is_integral(&inst) {
                return inst;
            }
        }
    }
}

fn bm_combined_is_integral(inst: &BmInstance) -> bool {
    let check = |vectors: &[Vec<u64>], len: usize| -> bool {
        (0..len).all(|idx| {
            let sum: BigRational = vectors
                .iter()
                .zip(&inst.weights)
                .map(|(v, w)| BigRational::from_integer(BigInt::from(v[idx])) * w)
                .sum();
            sum.is_integer()
        })
    };
    check(&inst.row_margins, inst.bounds.m()) && check(&inst.col_margins, inst.bounds.n())
}

/// Margins of a random table with the given total, filled unit by unit into
/// cells with spare cap. The table itself witnesses a positive count.
fn random_table_margins(rng: &mut ChaCha8Rng, bounds: &BoundsMatrix, total: u64) -> (Vec<u64>, Vec<u64>) {
    let (m, n) = (bounds.m(), bounds.n());
    let mut cells = vec![0u64; m * n];
    for _ in 0..total {
        let open: Vec<usize> = (0..m * n)
            .filter(|&idx| cells[idx] < bounds.get(idx / n, idx % n).finite().unwrap())
            .collect();
        let idx = *open.choose(rng).expect("total <= cap sum");
        cells[idx] += 1;
    }
    let r: Vec<u64> = (0..m).map(|i| (0..n).map(|j| cells[i * n + j]).sum()).collect();
    let c: Vec<u64> = (0..n).map(|j| (0..m).map(|i| cells[i * n + j]).sum()).collect();
    (r, c)
}

// ---------------------------------------------------------------------------
// Concavification of ln T over margin space
// ---------------------------------------------------------------------------

/// The least concave majorant of `ln T_K` over margin space, evaluated by a
/// linear program over the explicit set of feasible margin pairs.
#[derive(Debug, Clone)]
pub struct Concavification {
    /// Optimal value; `-∞` when the target margins lie outside the convex
    /// hull of feasible margin pairs.
    pub value: f64,
    /// Optimal decomposition: positive weights with their margin pairs.
    pub support: Vec<(f64, Vec<u64>, Vec<u64>)>,
    pub vertex_count: usize,
}

/// Enumerated margin-pair vertices with their exact counts, reusable across
/// targets over the same cap matrix.
pub struct ConcavifyContext {
    bounds: BoundsMatrix,
    vertices: Vec<(Vec<u64>, Vec<u64>)>,
    ln_counts_hp: Vec<BigRational>,
    ln_counts: Vec<f64>,
}

pub const DEFAULT_VERTEX_CAP: usize = 5000;

impl ConcavifyContext {
    /// Enumerates all margin pairs `(R', C')` dominated by the cap line sums
    /// with `T_K(R', C') > 0`, counting each exactly. Errors out (budget)
    /// past `max_vertices` feasible pairs.
    pub fn new(bounds: &BoundsMatrix, max_vertices: usize) -> Result<Self> {
        let (m, n) = (bounds.m(), bounds.n());
        for i in 0..m {
            for j in 0..n {
                match bounds.get(i, j) {
                    Cap::Finite(k) if k >= 1 => {}
                    _ => {
                        return Err(Error::Domain(
                            "concavification needs finite caps >= 1".into(),
                        ))
                    }
                }
            }
        }
        let row_caps: Vec<u64> = (0..m).map(|i| bounds.row_cap_sum(i).finite().unwrap()).collect();
        let col_caps: Vec<u64> = (0..n).map(|j| bounds.col_cap_sum(j).finite().unwrap()).collect();
        let total_cap: u64 = row_caps.iter().sum();

        // candidate row/column vectors bucketed by total
        let rows_by_total = bounded_vectors_by_total(&row_caps, total_cap);
        let cols_by_total = bounded_vectors_by_total(&col_caps, total_cap);
        let mut candidates: Vec<(Vec<u64>, Vec<u64>)> = Vec::new();
        for (total, rows) in rows_by_total.iter().enumerate() {
            let cols = &cols_by_total[total];
            if rows.is_empty() || cols.is_empty() {
                continue;
            }
            for r in rows {
                for c in cols {
                    candidates.push((r.clone(), c.clone()));
                }
            }
            if candidates.len() > max_vertices.saturating_mul(64) {
                return Err(Error::BudgetExceeded {
                    used: candidates.len() as u64,
                    budget: max_vertices as u64,
                });
            }
        }
        let counted = par::map_collect(candidates, |(r, c)| {
            let margins = MarginPair::from_ints(&r, &c).expect("totals match by construction");
            let count = count_tables_with_budget(&margins, bounds, DEFAULT_STATE_BUDGET);
            (r, c, count)
        });
        let mut vertices = Vec::new();
        let mut ln_counts_hp = Vec::new();
        let mut ln_counts = Vec::new();
        for (r, c, count) in counted {
            let count = count?;
            if count.is_zero() {
                continue;
            }
            ln_counts.push(ln_count(&count));
            ln_counts_hp.push(ln_hp(&count::ln_arg(&count), 100));
            vertices.push((r, c));
            if vertices.len() > max_vertices {
                return Err(Error::BudgetExceeded {
                    used: vertices.len() as u64,
                    budget: max_vertices as u64,
                });
            }
        }
        Ok(ConcavifyContext { bounds: bounds.clone(), vertices, ln_counts_hp, ln_counts })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Solves `max Σ α_v ln T_v` over weights with `Σ α_v = 1` and
    /// `Σ α_v (R_v, C_v) = (R, C)`, by exact-rational simplex. Objective
    /// coefficients are the 100-bit roundings of the exact `ln T_v` (about 30
    /// significant digits), so pivoting never faces inexact data.
    pub fn concavify(&self, margins: &MarginPair) -> Result<Concavification> {
        let (m, n) = (self.bounds.m(), self.bounds.n());
        if margins.m() != m || margins.n() != n {
            return Err(Error::Domain("margins shape does not match the context bounds".into()));
        }
        let rat = |x: f64| BigRational::from_float(x).expect("finite margin");
        let mut b: Vec<BigRational> = Vec::with_capacity(1 + m + n);
        b.push(BigRational::one());
        b.extend(margins.r().iter().map(|&x| rat(x)));
        b.extend(margins.c().iter().map(|&x| rat(x)));
        let mut a: Vec<Vec<BigRational>> = vec![Vec::with_capacity(self.vertices.len()); 1 + m + n];
        for (r, c) in &self.vertices {
            a[0].push(BigRational::one());
            for (i, &ri) in r.iter().enumerate() {
                a[1 + i].push(BigRational::from_integer(BigInt::from(ri)));
            }
            for (j, &cj) in c.iter().enumerate() {
                a[1 + m + j].push(BigRational::from_integer(BigInt::from(cj)));
            }
        }
        match Lp::new(a, b).solve_max(&self.ln_counts_hp) {
            LpOutcome::Infeasible => Ok(Concavification {
                value: f64::NEG_INFINITY,
                support: Vec::new(),
                vertex_count: self.vertices.len(),
            }),
            LpOutcome::Unbounded => {
                Err(Error::Domain("concavification program cannot be unbounded".into()))
            }
            LpOutcome::Optimal { solution, .. } => {
                let mut support = Vec::new();
                let mut value = 0.0;
                for (v, alpha) in solution.iter().enumerate() {
                    if alpha.is_zero() {
                        continue;
                    }
                    let weight = ratio_to_f64(alpha);
                    value += weight * self.ln_counts[v];
                    support.push((weight, self.vertices[v].0.clone(), self.vertices[v].1.clone()));
                }
                Ok(Concavification { value, support, vertex_count: self.vertices.len() })
            }
        }
    }
}

/// Vectors `v` with `0 ≤ v_i ≤ caps_i`, bucketed by `Σ v`.
fn bounded_vectors_by_total(caps: &[u64], max_total: u64) -> Vec<Vec<Vec<u64>>> {
    let mut buckets: Vec<Vec<Vec<u64>>> = vec![Vec::new(); max_total as usize + 1];
    let mut current = vec![0u64; caps.len()];
    fn rec(caps: &[u64], idx: usize, sum: u64, current: &mut Vec<u64>, buckets: &mut Vec<Vec<Vec<u64>>>) {
        if idx == caps.len() {
            buckets[sum as usize].push(current.clone());
            return;
        }
        for v in 0..=caps[idx] {
            current[idx] = v;
            rec(caps, idx + 1, sum + v, current, buckets);
        }
        current[idx] = 0;
    }
    rec(caps, 0, 0, &mut current, &mut buckets);
    buckets
}

/// One-shot concavification at the default vertex cap.
pub fn concavify_log_count(margins: &MarginPair, bounds: &BoundsMatrix) -> Result<Concavification> {
    ConcavifyContext::new(bounds, DEFAULT_VERTEX_CAP)?.concavify(margins)
}

// ---------------------------------------------------------------------------
// Concavification quality bound
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct FqualityReport {
    pub f_value: f64,
    pub ln_count: f64,
    /// The Stirling-derived allowance
    /// `-ln√(2π|K|) + Σ ln√(2π r_i) + Σ ln√(2π c̃_j) + (m+n)·ln(e/√(2π))`.
    pub heart: f64,
    pub slack: f64,
    pub holds: bool,
}

/// Checks `f(R,C) - ln T_K(R,C) ≤ ♥` for strictly positive `R` and `C̃`.
pub fn fquality_check(margins: &MarginPair, bounds: &BoundsMatrix) -> Result<FqualityReport> {
    fquality_check_in(&ConcavifyContext::new(bounds, DEFAULT_VERTEX_CAP)?, margins)
}

pub fn fquality_check_in(ctx: &ConcavifyContext, margins: &MarginPair) -> Result<FqualityReport> {
    let bounds = &ctx.bounds;
    let (r, c) = margins.integer_margins()?;
    if r.iter().any(|&ri| ri == 0) {
        return Err(Error::Domain("the quality bound needs strictly positive row margins".into()));
    }
    let c_tilde: Vec<u64> = c
        .iter()
        .enumerate()
        .map(|(j, &cj)| {
            let s = bounds.col_cap_sum(j).finite().expect("finite caps checked by the context");
            s.checked_sub(cj)
                .filter(|&v| v > 0)
                .ok_or_else(|| Error::Domain(format!("column {j} complement margin must be positive")))
        })
        .collect::<Result<_>>()?;
    let count = count_tables_with_budget(margins, bounds, DEFAULT_STATE_BUDGET)?;
    if count.is_zero() {
        return Err(Error::Domain("the quality bound compares against a positive count".into()));
    }
    let ln_t = ln_count(&count);
    let f_value = ctx.concavify(margins)?.value;
    let two_pi = 2.0 * std::f64::consts::PI;
    let k_total: u64 = (0..bounds.m())
        .map(|i| bounds.row_cap_sum(i).finite().unwrap())
        .sum();
    let mut heart = -(two_pi * k_total as f64).sqrt().ln();
    for &ri in &r {
        heart += (two_pi * ri as f64).sqrt().ln();
    }
    for &ct in &c_tilde {
        heart += (two_pi * ct as f64).sqrt().ln();
    }
    heart += (bounds.m() + bounds.n()) as f64 * (1.0 - two_pi.sqrt().ln());
    let slack = heart - (f_value - ln_t);
    Ok(FqualityReport { f_value, ln_count: ln_t, heart, slack, holds: slack >= -LOG_SLACK })
}

// ---------------------------------------------------------------------------
// Coefficient-limit convergence
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct KnomialLimitReport {
    pub n: u64,
    pub r: u64,
    pub entries: Vec<(u64, f64)>,
    pub limit: f64,
    pub decreasing_ok: bool,
    pub fit_a: f64,
    pub bound_ok: bool,
    pub pass: bool,
}

/// Convergence of `(1/s)·ln (sn sr)_κ` to `n·H^max_κ(r/n)`: the error must
/// eventually decrease and fit an `A·ln(s)/s` envelope (fitted on the first
/// half of the scale list, checked with 25% headroom on the second).
pub fn knomial_limit_check(n: u64, r: u64, kappa: Cap, s_list: &[u64]) -> Result<KnomialLimitReport> {
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    if let Cap::Finite(k) = kappa {
        if r > n * k {
            return Err(Error::Domain(format!("r = {r} exceeds n*kappa = {}", n * k)));
        }
    }
    if s_list.windows(2).any(|w| w[0] >= w[1]) || s_list.is_empty() || s_list[0] == 0 {
        return Err(Error::Domain("s values must be positive and ascending".into()));
    }
    let limit = n as f64 * tg::hmax(r as f64 / n as f64, kappa)?;
    let entries: Vec<(u64, f64)> = s_list
        .iter()
        .map(|&s| {
            let coeff = knomial(s * n, s * r, kappa);
            (s, (ln_count(&coeff) / s as f64 - limit).abs())
        })
        .collect();
    let all_tiny = entries.iter().all(|&(_, e)| e < 1e-14);
    let tail = entries.len() / 2;
    let decreasing_ok =
        all_tiny || entries[tail..].windows(2).all(|w| w[1].1 < w[0].1);
    let fit: Vec<&(u64, f64)> =
        entries.iter().filter(|(s, _)| *s >= 2).take(entries.len().div_ceil(2)).collect();
    let fit_a = fit
        .iter()
        .map(|(s, e)| e * *s as f64 / (*s as f64).ln())
        .fold(0.0f64, f64::max);
    let bound_ok = all_tiny
        || entries
            .iter()
            .filter(|(s, _)| *s >= 2)
            .all(|&(s, e)| e <= 1.25 * fit_a * (s as f64).ln() / s as f64 + 1e-12);
    Ok(KnomialLimitReport {
        n,
        r,
        entries,
        limit,
        decreasing_ok,
        fit_a,
        bound_ok,
        pass: decreasing_ok && bound_ok,
    })
}

// ---------------------------------------------------------------------------
// Generating-function upper bound on cloned counts
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct UpperBoundReport {
    pub limit: f64,
    /// `(s, (1/s²)·ln count, deficit)` per clone factor reached.
    pub entries: Vec<(u64, f64, f64)>,
    pub bounded_ok: bool,
    pub deficits_decreasing: bool,
    /// Set when a later clone factor blew the state budget; earlier entries
    /// still report.
    pub partial: Option<String>,
    pub pass: bool,
}

/// `(1/s²)·ln T_κ(R⁽ˢ⁾,C⁽ˢ⁾) ≤ entropy_limit` per clone factor, with the
/// deficit shrinking as `s` grows.
pub fn upper_bound_check(
    margins: &MarginPair,
    kappa: Cap,
    s_list: &[u64],
    budget: u64,
) -> Result<UpperBoundReport> {
    if s_list.is_empty() || s_list[0] == 0 || s_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("s values must be positive and ascending".into()));
    }
    let limit = maxent::entropy_limit(margins, kappa)?;
    let mut entries = Vec::new();
    let mut partial = None;
    for &s in s_list {
        match count::count_cloned_with_budget(margins, kappa, s as usize, budget) {
            Ok(count) => {
                let normalized = ln_count(&count) / (s * s) as f64;
                entries.push((s, normalized, limit - normalized));
            }
            Err(Error::BudgetExceeded { used, budget }) => {
                partial = Some(format!("s = {s} needs more than {budget} states (hit {used})"));
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let bounded_ok = entries.iter().all(|&(_, v, _)| v <= limit + LOG_SLACK);
    let deficits_decreasing = entries.windows(2).all(|w| w[1].2 < w[0].2);
    let pass = bounded_ok && deficits_decreasing && !entries.is_empty();
    Ok(UpperBoundReport { limit, entries, bounded_ok, deficits_decreasing, partial, pass })
}
