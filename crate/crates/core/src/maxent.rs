//! Convex-dual computation of the entropy maximum over the bounded
//! transportation polytope.
//!
//! The dual objective is
//! `ψ(t,s) = -Σ r_i t_i - Σ c_j s_j + Σ_ij ln(1 + e^{θ_ij} + … + e^{k_ij θ_ij})`
//! with `θ_ij = t_i + s_j`. It is strictly convex up to the shift gauge
//! `t → t+a, s → s-a`, and its minimum equals the maximum of the per-cell
//! entropy sum `Σ H^max_{k_ij}(z_ij)` over tables `Z` in the polytope; the
//! optimizer is recovered cellwise as the truncated-geometric mean at
//! `q_ij = e^{θ_ij}`. Minimization proceeds by alternating row and column
//! sweeps: with one side fixed, each line's dual solves a monotone scalar
//! equation (margin = sum of cell means) by bisection.

use crate::tables::{BoundsMatrix, Cap, MarginPair};
use crate::tg;
use crate::{par, Error, Result};

/// Dual variables `(t, s)`; finite entries only (lines whose duals would
/// diverge are removed by [`preprocess`]).
#[derive(Debug, Clone, PartialEq)]
pub struct DualPoint {
    pub t: Vec<f64>,
    pub s: Vec<f64>,
}

/// A solved instance.
#[derive(Debug, Clone)]
pub struct MaxEntSolution {
    /// The optimal table, full `m×n` shape (forced lines filled back in).
    pub z: Vec<Vec<f64>>,
    /// Maximum of the per-cell entropy sum (the primal value), in nats.
    pub value: f64,
    /// Dual variables of the reduced (preprocessed) problem.
    pub dual: DualPoint,
    /// `ψ` at the returned duals — the dual certificate; `value` matches it
    /// up to `gap`.
    pub psi_value: f64,
    /// Max margin violation of `z` against the reduced margins.
    pub residual: f64,
    /// `|value - psi_value|`.
    pub gap: f64,
    /// Row/column indices of the full problem kept after preprocessing.
    pub kept_rows: Vec<usize>,
    pub kept_cols: Vec<usize>,
    /// Sweeps used.
    pub sweeps: usize,
    /// `ψ` after each sweep (non-increasing).
    pub psi_trace: Vec<f64>,
}

/// Solver knobs; `tol` is the max margin violation of the recovered table.
#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_sweeps: usize,
    pub start: Option<DualPoint>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { tol: 1e-9, max_sweeps: 100_000, start: None }
    }
}

/// Preprocessed problem: forced lines removed, margins adjusted.
#[derive(Debug, Clone)]
pub struct Reduced {
    pub kept_rows: Vec<usize>,
    pub kept_cols: Vec<usize>,
    pub margins: Option<MarginPair>,
    pub bounds: Option<BoundsMatrix>,
    /// Entries of removed lines: `(i, j, value)` in full-problem indices.
    pub forced: Vec<(usize, usize, f64)>,
}

/// Removes rows and columns whose entries are forced (margin 0, or margin
/// equal to the line's cap sum), subtracting forced mass from the opposite
/// margins, until stable. Forced entries contribute zero entropy and their
/// duals would diverge.
pub fn preprocess(margins: &MarginPair, bounds: &BoundsMatrix) -> Result<Reduced> {
    if !bounds.matches(margins) {
        return Err(Error::Domain("bounds shape does not match margins".into()));
    }
    let (m, n) = (margins.m(), margins.n());
    let mut r: Vec<f64> = margins.r().to_vec();
    let mut c: Vec<f64> = margins.c().to_vec();
    let mut row_active = vec![true; m];
    let mut col_active = vec![true; n];
    let mut forced: Vec<(usize, usize, f64)> = Vec::new();
    let tol = 1e-12;

    loop {
        let mut changed = false;
        for i in 0..m {
            if !row_active[i] {
                continue;
            }
            let cap_sum: Cap = {
                let mut s = 0u64;
                let mut fin = true;
                for j in 0..n {
                    if col_active[j] {
                        match bounds.get(i, j) {
                            Cap::Finite(k) => s += k,
                            Cap::Unbounded => fin = false,
                        }
                    }
                }
                if fin {
                    Cap::Finite(s)
                } else {
                    Cap::Unbounded
                }
            };
            if r[i].abs() <= tol {
                row_active[i] = false;
                for j in 0..n {
                    if col_active[j] {
                        forced.push((i, j, 0.0));
                    }
                }
                changed = true;
            } else if let Cap::Finite(s) = cap_sum {
                if (r[i] - s as f64).abs() <= tol {
                    row_active[i] = false;
                    for j in 0..n {
                        if col_active[j] {
                            let k = bounds.get(i, j).finite().unwrap() as f64;
                            forced.push((i, j, k));
                            c[j] -= k;
                            if c[j] < -1e-9 {
                                return Err(Error::Infeasible(format!(
                                    "column {j} margin driven negative by forced rows"
                                )));
                            }
                            c[j] = c[j].max(0.0);
                        }
                    }
                    changed = true;
                }
            }
        }
        for j in 0..n {
            if !col_active[j] {
                continue;
            }
            let cap_sum: Cap = {
                let mut s = 0u64;
                let mut fin = true;
                for i in 0..m {
                    if row_active[i] {
                        match bounds.get(i, j) {
                            Cap::Finite(k) => s += k,
                            Cap::Unbounded => fin = false,
                        }
                    }
                }
                if fin {
                    Cap::Finite(s)
                } else {
                    Cap::Unbounded
                }
            };
            if c[j].abs() <= tol {
                col_active[j] = false;
                for i in 0..m {
                    if row_active[i] {
                        forced.push((i, j, 0.0));
                    }
                }
                changed = true;
            } else if let Cap::Finite(s) = cap_sum {
                if (c[j] - s as f64).abs() <= tol {
                    col_active[j] = false;
                    for i in 0..m {
                        if row_active[i] {
                            let k = bounds.get(i, j).finite().unwrap() as f64;
                            forced.push((i, j, k));
                            r[i] -= k;
                            if r[i] < -1e-9 {
                                return Err(Error::Infeasible(format!(
                                    "row {i} margin driven negative by forced columns"
                                )));
                            }
                            r[i] = r[i].max(0.0);
                        }
                    }
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }

    let kept_rows: Vec<usize> = (0..m).filter(|&i| row_active[i]).collect();
    let kept_cols: Vec<usize> = (0..n).filter(|&j| col_active[j]).collect();
    if kept_rows.is_empty() || kept_cols.is_empty() {
        let leftover: f64 = r.iter().enumerate().filter(|(i, _)| row_active[*i]).map(|(_, v)| v).sum();
        if leftover.abs() > 1e-9 {
            return Err(Error::Infeasible("margins remain after all lines were forced".into()));
        }
        return Ok(Reduced { kept_rows: vec![], kept_cols: vec![], margins: None, bounds: None, forced });
    }
    let red_r: Vec<f64> = kept_rows.iter().map(|&i| r[i]).collect();
    let red_c: Vec<f64> = kept_cols.iter().map(|&j| c[j]).collect();
    let red_b = BoundsMatrix::from_rows(
        kept_rows
            .iter()
            .map(|&i| kept_cols.iter().map(|&j| bounds.get(i, j)).collect())
            .collect(),
    )?;
    let red_m = MarginPair::new(red_r, red_c)?;
    Ok(Reduced { kept_rows, kept_cols, margins: Some(red_m), bounds: Some(red_b), forced })
}

/// The dual objective `ψ` at a point, with per-cell log partitions evaluated
/// in a log-sum-exp-stable form. Total on its domain (`+∞` where an unbounded
/// cell has `θ_ij ≥ 0`).
pub fn psi(point: &DualPoint, margins: &MarginPair, bounds: &BoundsMatrix) -> f64 {
    let mut value = 0.0;
    for (ti, ri) in point.t.iter().zip(margins.r()) {
        value -= ri * ti;
    }
    for (sj, cj) in point.s.iter().zip(margins.c()) {
        value -= cj * sj;
    }
    for (i, ti) in point.t.iter().enumerate() {
        for (j, sj) in point.s.iter().enumerate() {
            value += tg::log_partition(ti + sj, bounds.get(i, j));
        }
    }
    value
}

/// Line solve: find `t` such that `Σ_j mean(t + s_j; k_j) = target`, by
/// bisection on `[-40, 40]` to width `1e-13`. The sum is strictly increasing
/// in `t`; unbounded cells push the sum to `+∞` as `t + s_j → 0⁻`, which the
/// bisection avoids automatically. If the root sits outside the bracket the
/// end is returned and the outer loop reports non-convergence.
fn solve_line(target: f64, others: &[f64], caps: &[Cap]) -> f64 {
    let line_sum = |t: f64| -> f64 {
        let mut sum = 0.0;
        for (sj, &cap) in others.iter().zip(caps) {
            sum += tg::mean_theta(t + sj, cap);
            if sum.is_infinite() {
                return f64::INFINITY;
            }
        }
        sum
    };
    let mut lo = -40.0f64;
    let mut hi = 40.0f64;
    if line_sum(lo) >= target {
        return lo;
    }
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if line_sum(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Minimizes `ψ` by alternating row and column sweeps and recovers the
/// optimal table. Margins may be real; feasibility is checked exactly up
/// front (max-flow on integers, rational max-flow otherwise), and forced
/// lines are removed by [`preprocess`]. Fails with a residual-history
/// diagnostic when the margins only touch a lower-dimensional face of the
/// polytope (interior duals then diverge).
pub fn solve_dual(margins: &MarginPair, bounds: &BoundsMatrix, tol: f64) -> Result<MaxEntSolution> {
    solve_dual_opts(margins, bounds, &SolveOptions { tol, ..SolveOptions::default() })
}

pub fn solve_dual_opts(
    margins: &MarginPair,
    bounds: &BoundsMatrix,
    opts: &SolveOptions,
) -> Result<MaxEntSolution> {
    if !bounds.matches(margins) {
        return Err(Error::Domain("bounds shape does not match margins".into()));
    }
    let feasible = if margins.is_integer() {
        crate::tables::feasible(margins, bounds)?
    } else {
        crate::tables::feasible_real(margins, bounds)
    };
    if !feasible {
        return Err(Error::Infeasible("no table satisfies the margins under these bounds".into()));
    }
    let reduced = preprocess(margins, bounds)?;
    let (m, n) = (margins.m(), margins.n());
    let mut z_full = vec![vec![0.0; n]; m];
    for &(i, j, v) in &reduced.forced {
        z_full[i][j] = v;
    }
    let (red_m, red_b) = match (&reduced.margins, &reduced.bounds) {
        (Some(mm), Some(bb)) => (mm, bb),
        _ => {
            return Ok(MaxEntSolution {
                z: z_full,
                value: 0.0,
                dual: DualPoint { t: vec![], s: vec![] },
                psi_value: 0.0,
                residual: 0.0,
                gap: 0.0,
                kept_rows: reduced.kept_rows,
                kept_cols: reduced.kept_cols,
                sweeps: 0,
                psi_trace: vec![],
            })
        }
    };
    let (rm, rn) = (red_m.m(), red_m.n());
    let r = red_m.r().to_vec();
    let c = red_m.c().to_vec();
    let row_caps: Vec<Vec<Cap>> =
        (0..rm).map(|i| (0..rn).map(|j| red_b.get(i, j)).collect()).collect();
    let col_caps: Vec<Vec<Cap>> =
        (0..rn).map(|j| (0..rm).map(|i| red_b.get(i, j)).collect()).collect();

    // init: per-row truncated-geometric dual at the row's average cell mass
    let (mut t, mut s) = match &opts.start {
        Some(p) => {
            if p.t.len() != rm || p.s.len() != rn {
                return Err(Error::Domain("start point shape mismatch".into()));
            }
            (p.t.clone(), p.s.clone())
        }
        None => {
            let t: Vec<f64> = (0..rm)
                .map(|i| match red_b.uniform_cap() {
                    Some(cap) => tg::solve_tg(r[i] / rn as f64, cap)
                        .map(|p| if p.q > 0.0 && p.q.is_finite() { p.q.ln() } else { 0.0 })
                        .unwrap_or(0.0)
                        .clamp(-40.0, 40.0),
                    None => 0.0,
                })
                .collect();
            (t, vec![0.0; rn])
        }
    };

    let mut psi_trace = Vec::new();
    let mut residuals_tail = Vec::new();
    let mut sweeps = 0;
    let mut residual = f64::INFINITY;
    const PAR_LINES: usize = 64;
    while sweeps < opts.max_sweeps {
        sweeps += 1;
        t = par::map_indices(rm, PAR_LINES, |i| solve_line(r[i], &s, &row_caps[i]));
        s = par::map_indices(rn, PAR_LINES, |j| solve_line(c[j], &t, &col_caps[j]));
        // gauge: mean of t pinned to zero
        let shift = t.iter().sum::<f64>() / rm as f64;
        for ti in &mut t {
            *ti -= shift;
        }
        for sj in &mut s {
            *sj += shift;
        }
        let point = DualPoint { t: t.clone(), s: s.clone() };
        psi_trace.push(psi(&point, red_m, red_b));

        residual = 0.0f64;
        for (i, &ri) in r.iter().enumerate() {
            let row: f64 = (0..rn).map(|j| tg::mean_theta(t[i] + s[j], row_caps[i][j])).sum();
            residual = residual.max((row - ri).abs());
        }
        for (j, &cj) in c.iter().enumerate() {
            let col: f64 = (0..rm).map(|i| tg::mean_theta(t[i] + s[j], row_caps[i][j])).sum();
            residual = residual.max((col - cj).abs());
        }
        residuals_tail.push(residual);
        if residuals_tail.len() > 32 {
            residuals_tail.remove(0);
        }
        if residual < opts.tol {
            break;
        }
    }
    if residual >= opts.tol {
        return Err(Error::NoConvergence { sweeps, residuals: residuals_tail });
    }

    // recover the table and evaluate both routes to the optimum
    let mut value = 0.0;
    for (li, &gi) in reduced.kept_rows.iter().enumerate() {
        for (lj, &gj) in reduced.kept_cols.iter().enumerate() {
            let cap = row_caps[li][lj];
            let zij = tg::mean_theta(t[li] + s[lj], cap);
            z_full[gi][gj] = zij;
            value += tg::hmax(zij.min(cap.as_f64()), cap)?;
        }
    }
    let dual = DualPoint { t, s };
    let psi_value = psi(&dual, red_m, red_b);
    Ok(MaxEntSolution {
        z: z_full,
        value,
        gap: (value - psi_value).abs(),
        psi_value,
        residual,
        dual,
        kept_rows: reduced.kept_rows,
        kept_cols: reduced.kept_cols,
        sweeps,
        psi_trace,
    })
}

/// Max of `Σ H^max_κ(z_ij)` over the uniformly capped polytope — the
/// normalized log-asymptotic of the cloned table counts.
pub fn entropy_limit(margins: &MarginPair, kappa: Cap) -> Result<f64> {
    let bounds = BoundsMatrix::uniform(margins.m(), margins.n(), kappa);
    Ok(solve_dual(margins, &bounds, 1e-9)?.value)
}

/// `ln inf_{x,y>0} G(x,y)/(x^R y^C)` for the table generating function `G`:
/// the minimized dual objective. Upper-bounds `ln` of the exact count; equals
/// [`entropy_limit`] when the caps are uniform.
pub fn gf_log_bound(margins: &MarginPair, bounds: &BoundsMatrix) -> Result<f64> {
    Ok(solve_dual(margins, bounds, 1e-9)?.psi_value)
}

/// Log-asymptotic of the independence-heuristic estimate:
/// `-mn·H(N/mn) + n·Σ_i H(r_i/n) + m·Σ_j H(c_j/m)` with `H = H^max_κ`.
pub fn indep_log_limit(margins: &MarginPair, kappa: Cap) -> Result<f64> {
    let (m, n) = (margins.m() as f64, margins.n() as f64);
    let kf = kappa.as_f64();
    let total = margins.total();
    if total / (m * n) > kf || margins.r().iter().any(|&ri| ri / n > kf)
        || margins.c().iter().any(|&cj| cj / m > kf)
    {
        return Err(Error::Domain("margins exceed the support of the capped table".into()));
    }
    let mut value = -m * n * tg::hmax(total / (m * n), kappa)?;
    for &ri in margins.r() {
        value += n * tg::hmax(ri / n, kappa)?;
    }
    for &cj in margins.c() {
        value += m * tg::hmax(cj / m, kappa)?;
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mp(r: &[f64], c: &[f64]) -> MarginPair {
        MarginPair::new(r.to_vec(), c.to_vec()).unwrap()
    }

    #[test]
    fn psi_examples() {
        // zero duals, uniform caps: every exponential is 1
        let m = mp(&[1.0, 1.0], &[1.0, 1.0]);
        let b = BoundsMatrix::uniform(2, 2, Cap::Finite(2));
        let zero = DualPoint { t: vec![0.0; 2], s: vec![0.0; 2] };
        assert!((psi(&zero, &m, &b) - 4.0 * 3f64.ln()).abs() < 1e-12);

        let m1 = mp(&[1.0], &[1.0]);
        let b1 = BoundsMatrix::uniform(1, 1, Cap::Finite(2));
        let zero1 = DualPoint { t: vec![0.0], s: vec![0.0] };
        assert!((psi(&zero1, &m1, &b1) - 3f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn psi_shift_invariance() {
        let m = mp(&[2.0, 1.0], &[1.0, 2.0]);
        let b = BoundsMatrix::uniform(2, 2, Cap::Finite(3));
        let p = DualPoint { t: vec![0.3, -0.4], s: vec![0.1, 0.7] };
        let base = psi(&p, &m, &b);
        for a in [-1.5, 0.2, 3.0] {
            let shifted = DualPoint {
                t: p.t.iter().map(|v| v + a).collect(),
                s: p.s.iter().map(|v| v - a).collect(),
            };
            assert!((psi(&shifted, &m, &b) - base).abs() < 1e-9);
        }
    }

    #[test]
    fn constant_margins_give_uniform_table() {
        for k in [1u64, 2, 5] {
            let kf = k as f64;
            let m = mp(&[kf, kf], &[kf, kf]);
            let b = BoundsMatrix::uniform(2, 2, Cap::Finite(k));
            // margins kappa per line on a 2-col table: mean kappa/2 per cell
            let sol = solve_dual(&m, &b, 1e-10).unwrap();
            for row in &sol.z {
                for &z in row {
                    assert!((z - kf / 2.0).abs() < 1e-8);
                }
            }
            assert!((sol.value - 4.0 * (kf + 1.0).ln()).abs() < 1e-8);
            assert!(sol.gap < 1e-8);
        }
    }

    #[test]
    fn preprocess_removes_forced_lines() {
        // row 0 is zero, row 1 saturates its cap sum; the forced removals
        // cascade until every line is pinned
        let m = mp(&[0.0, 6.0, 2.0], &[2.0, 4.0, 2.0]);
        let b = BoundsMatrix::uniform(3, 3, Cap::Finite(2));
        let red = preprocess(&m, &b).unwrap();
        assert!(red.kept_rows.is_empty() && red.kept_cols.is_empty());
        let sol = solve_dual(&m, &b, 1e-9).unwrap();
        assert_eq!(
            sol.z,
            vec![vec![0.0, 0.0, 0.0], vec![2.0, 2.0, 2.0], vec![0.0, 2.0, 0.0]]
        );
        assert_eq!(sol.value, 0.0);
    }

    #[test]
    fn fully_forced_instance_is_trivial() {
        let m = mp(&[0.0, 2.0], &[1.0, 1.0]);
        let b = BoundsMatrix::uniform(2, 2, Cap::Finite(1));
        let sol = solve_dual(&m, &b, 1e-9).unwrap();
        assert_eq!(sol.z, vec![vec![0.0, 0.0], vec![1.0, 1.0]]);
        assert_eq!(sol.value, 0.0);
    }

    #[test]
    fn face_only_margins_are_diagnosed() {
        // feasible, but only with z11 = 2 pinned at the cap: no interior point
        let m = mp(&[3.0, 1.0], &[3.0, 1.0]);
        let b = BoundsMatrix::uniform(2, 2, Cap::Finite(2));
        match solve_dual_opts(&m, &b, &SolveOptions { max_sweeps: 3000, ..Default::default() }) {
            Err(Error::NoConvergence { residuals, .. }) => {
                assert!(!residuals.is_empty());
            }
            other => panic!("expected a non-convergence diagnostic, got {other:?}"),
        }
    }

    #[test]
    fn infeasible_margins_rejected_up_front() {
        let m = mp(&[2.0, 0.0], &[0.0, 2.0]);
        let b = BoundsMatrix::uniform(2, 2, Cap::Finite(1));
        assert!(matches!(solve_dual(&m, &b, 1e-9), Err(Error::Infeasible(_))));
    }

    #[test]
    fn entropy_limit_constant_margins() {
        let v = entropy_limit(&mp(&[1.0, 1.0], &[1.0, 1.0]), Cap::Finite(1)).unwrap();
        assert!((v - 4.0 * std::f64::consts::LN_2).abs() < 1e-8);
        let v = entropy_limit(&mp(&[2.0, 2.0], &[2.0, 2.0]), Cap::Unbounded).unwrap();
        assert!((v - 8.0 * std::f64::consts::LN_2).abs() < 1e-8);
    }

    #[test]
    fn gf_log_bound_single_cell() {
        // 1x1, margin 1, cap 2: inf over u of (1+u+u^2)/u sits at u=1, value ln 3
        let v = gf_log_bound(&mp(&[1.0], &[1.0]), &BoundsMatrix::uniform(1, 1, Cap::Finite(2))).unwrap();
        assert!((v - 3f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn gf_log_bound_equals_entropy_limit_for_uniform_caps() {
        let m = mp(&[3.0, 1.0], &[2.0, 2.0]);
        let b = BoundsMatrix::uniform(2, 2, Cap::Finite(2));
        let lhs = gf_log_bound(&m, &b).unwrap();
        let rhs = entropy_limit(&m, Cap::Finite(2)).unwrap();
        assert!((lhs - rhs).abs() < 1e-8);
    }

    #[test]
    fn indep_log_limit_cases() {
        let v = indep_log_limit(&mp(&[1.0, 1.0], &[1.0, 1.0]), Cap::Finite(1)).unwrap();
        assert!((v - 4.0 * std::f64::consts::LN_2).abs() < 1e-12);
        // constant margins: equals the entropy limit exactly
        let m = mp(&[3.0, 3.0], &[2.0, 2.0, 2.0]);
        let a = indep_log_limit(&m, Cap::Finite(2)).unwrap();
        let b = entropy_limit(&m, Cap::Finite(2)).unwrap();
        assert!((a - b).abs() < 1e-8);
        assert!(indep_log_limit(&mp(&[3.0, 1.0], &[2.0, 2.0]), Cap::Finite(1)).is_err());
    }

    #[test]
    fn monotone_psi_and_gauge_restart() {
        let m = mp(&[3.0, 1.0], &[2.0, 2.0]);
        let b = BoundsMatrix::uniform(2, 2, Cap::Finite(2));
        let sol = solve_dual(&m, &b, 1e-10).unwrap();
        for w in sol.psi_trace.windows(2) {
            assert!(w[1] <= w[0] + 1e-12, "psi increased: {} -> {}", w[0], w[1]);
        }
        // restart from a gauge-shifted copy of the optimum: same table
        let shifted = DualPoint {
            t: sol.dual.t.iter().map(|v| v + 2.5).collect(),
            s: sol.dual.s.iter().map(|v| v - 2.5).collect(),
        };
        let resolved = solve_dual_opts(
            &m,
            &b,
            &SolveOptions { tol: 1e-10, start: Some(shifted), ..Default::default() },
        )
        .unwrap();
        for (za, zb) in sol.z.iter().flatten().zip(resolved.z.iter().flatten()) {
            assert!((za - zb).abs() < 1e-8);
        }
    }

    #[test]
    fn complement_symmetry_of_entropy_limit() {
        let k = 3u64;
        let m = mp(&[2.0, 1.0], &[1.5, 1.5]);
        let (rm, rn) = (2.0, 2.0);
        let comp = mp(
            &m.r().iter().map(|ri| rn * k as f64 - ri).collect::<Vec<_>>(),
            &m.c().iter().map(|cj| rm * k as f64 - cj).collect::<Vec<_>>(),
        );
        let a = entropy_limit(&m, Cap::Finite(k)).unwrap();
        let b = entropy_limit(&comp, Cap::Finite(k)).unwrap();
        assert!((a - b).abs() < 1e-7, "{a} vs {b}");
    }
}
