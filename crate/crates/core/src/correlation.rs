//! Correlation-sign analysis for margin events.
//!
//! The central quantity is the gap between the entropy log-asymptotic of the
//! table count and the log-asymptotic of the independence-heuristic estimate.
//! A positive gap means the row- and column-margin events are asymptotically
//! positively correlated (the heuristic undercounts); a negative gap means
//! the opposite. For caps `κ ≥ 2`, sufficiently sparse margins are positively
//! correlated; mid-range margins flip the sign, and the scan operation maps
//! the transition boundaries.

use crate::tables::{Cap, MarginPair};
use crate::tg;
use crate::{maxent, par, Error, Result};
use serde::Serialize;

/// Sign of a gap at the `1e-9` tolerance band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GapSign {
    Positive,
    Negative,
    Zero,
}

pub const SIGN_TOL: f64 = 1e-9;

impl GapSign {
    pub fn of(gap: f64) -> GapSign {
        if gap.abs() < SIGN_TOL {
            GapSign::Zero
        } else if gap > 0.0 {
            GapSign::Positive
        } else {
            GapSign::Negative
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrelationReport {
    pub gap: f64,
    pub sign: GapSign,
    /// Whether the sparsity hypothesis `(max r)(max c) < δ*·κ·N` holds, with
    /// `δ*` the curvature convexity radius (finite `κ ≥ 2` only).
    pub hypothesis_ok: bool,
    /// Strict inequality is expected exactly when neither margin is constant.
    pub strict_expected: bool,
    pub entropy_limit: f64,
    pub indep_log_limit: f64,
}

fn is_constant(v: &[f64]) -> bool {
    let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    hi - lo <= 1e-12 * hi.abs().max(1.0)
}

/// `entropy_limit - indep_log_limit` with sign classification and the
/// sparsity-hypothesis flag.
pub fn correlation_gap(margins: &MarginPair, kappa: Cap) -> Result<CorrelationReport> {
    let entropy = maxent::entropy_limit(margins, kappa)?;
    let indep = maxent::indep_log_limit(margins, kappa)?;
    let gap = entropy - indep;
    let hypothesis_ok = match kappa {
        Cap::Finite(k) if k >= 2 => {
            let delta = tg::convexity_radius(k)?;
            sparsity_hypothesis(margins, k, delta)
        }
        _ => false,
    };
    Ok(CorrelationReport {
        gap,
        sign: GapSign::of(gap),
        hypothesis_ok,
        strict_expected: !is_constant(margins.r()) && !is_constant(margins.c()),
        entropy_limit: entropy,
        indep_log_limit: indep,
    })
}

fn sparsity_hypothesis(margins: &MarginPair, kappa: u64, delta: f64) -> bool {
    let max_r = margins.r().iter().cloned().fold(0.0, f64::max);
    let max_c = margins.c().iter().cloned().fold(0.0, f64::max);
    max_r * max_c < delta * kappa as f64 * margins.total()
}

/// Entropy-loss comparison: learning the column profile costs at least as
/// much surprise without row knowledge as with it. Defined only when the
/// rank-1 table fits under the cap.
#[derive(Debug, Clone, Serialize)]
pub struct HlossReport {
    /// `m·J(N/m)` — entropy lost when rows are unknown.
    pub lhs: f64,
    /// `Σ_i J(r_i)` — entropy lost with rows known.
    pub rhs: f64,
    pub margin: f64,
    pub holds: bool,
    /// Equality is expected when the column profile is uniform or the rows
    /// are constant.
    pub equality_expected: bool,
}

pub fn hloss_inequality_check(margins: &MarginPair, kappa: Cap) -> Result<HlossReport> {
    let total = margins.total();
    if total <= 0.0 {
        return Err(Error::Domain("margins must have positive total".into()));
    }
    let kf = kappa.as_f64();
    let (m, n) = (margins.m() as f64, margins.n() as f64);
    // admissibility: the rank-1 table must fit under the cap
    for (i, &ri) in margins.r().iter().enumerate() {
        for (j, &cj) in margins.c().iter().enumerate() {
            if ri * cj / total > kf * (1.0 + 1e-12) {
                return Err(Error::Domain(format!(
                    "rank-1 entry ({i},{j}) = {} exceeds the cap {kf}",
                    ri * cj / total
                )));
            }
        }
    }
    if margins.r().iter().any(|&ri| ri / n > kf) || margins.c().iter().any(|&cj| cj / m > kf) {
        return Err(Error::Domain("a margin exceeds its line's cap sum".into()));
    }
    let alpha: Vec<f64> = margins.c().iter().map(|&cj| cj / total).collect();
    let lhs = m * tg::entropy_loss(total / m, &alpha, kappa)?;
    let mut rhs = 0.0;
    for &ri in margins.r() {
        rhs += tg::entropy_loss(ri, &alpha, kappa)?;
    }
    let margin = lhs - rhs;
    Ok(HlossReport {
        lhs,
        rhs,
        margin,
        holds: margin >= -SIGN_TOL,
        equality_expected: is_constant(margins.c()) || is_constant(margins.r()),
    })
}

/// Full positive-correlation check for finite `κ ≥ 2`: verifies the sparsity
/// hypothesis at the supplied `δ` (default: the curvature convexity radius),
/// runs the entropy-loss inequality and the gap computation, and checks the
/// two-step chain `entropy_limit ≥ Σ_ij H(r_i c_j/N) ≥ indep_log_limit`.
#[derive(Debug, Clone, Serialize)]
pub struct AttractionReport {
    pub delta: f64,
    pub hypothesis_ok: bool,
    pub hloss: Option<HlossReport>,
    pub correlation: Option<CorrelationReport>,
    /// `(entropy_limit, rank-1 plug-in, indep_log_limit)`.
    pub chain: Option<(f64, f64, f64)>,
    pub chain_ok: bool,
}

pub fn attraction_check(
    margins: &MarginPair,
    kappa: u64,
    delta: Option<f64>,
) -> Result<AttractionReport> {
    if kappa < 2 {
        return Err(Error::Domain("attraction check requires kappa >= 2".into()));
    }
    let delta = match delta {
        Some(d) => d,
        None => tg::convexity_radius(kappa)?,
    };
    let hypothesis_ok = sparsity_hypothesis(margins, kappa, delta);
    if !hypothesis_ok {
        return Ok(AttractionReport {
            delta,
            hypothesis_ok,
            hloss: None,
            correlation: None,
            chain: None,
            chain_ok: false,
        });
    }
    let cap = Cap::Finite(kappa);
    let hloss = hloss_inequality_check(margins, cap)?;
    let correlation = correlation_gap(margins, cap)?;
    let total = margins.total();
    let mut plugin = 0.0;
    for &ri in margins.r() {
        for &cj in margins.c() {
            plugin += tg::hmax((ri * cj / total).min(kappa as f64), cap)?;
        }
    }
    let chain_ok = correlation.entropy_limit >= plugin - SIGN_TOL
        && plugin >= correlation.indep_log_limit - SIGN_TOL;
    let chain = Some((correlation.entropy_limit, plugin, correlation.indep_log_limit));
    Ok(AttractionReport {
        delta,
        hypothesis_ok,
        hloss: Some(hloss),
        correlation: Some(correlation),
        chain,
        chain_ok,
    })
}

/// One grid point of a margin scan.
#[derive(Debug, Clone, Serialize)]
pub struct ScanPoint {
    pub gamma: f64,
    /// `None` when the margins at this `γ` are inadmissible.
    pub gap: Option<f64>,
    pub sign: Option<GapSign>,
}

/// Scan output: gaps along the `γ` grid and the refined intervals where the
/// gap is negative.
#[derive(Debug, Clone, Serialize)]
pub struct ScanResult {
    pub kappa: u64,
    pub eps: f64,
    pub n: usize,
    pub points: Vec<ScanPoint>,
    /// `(start, end)` intervals with negative gap; interior endpoints are
    /// bisected to `|Δγ| < 1e-4`, range-clipped endpoints are left as-is.
    pub negative_intervals: Vec<(f64, f64)>,
}

fn scan_margins(gamma: f64, eps: f64, n: usize) -> Result<MarginPair> {
    let v: Vec<f64> = (0..n).map(|i| gamma + i as f64 * eps).collect();
    MarginPair::new(v.clone(), v)
}

fn scan_gap(gamma: f64, eps: f64, n: usize, kappa: u64) -> Option<f64> {
    if gamma <= 0.0 {
        return None;
    }
    let margins = scan_margins(gamma, eps, n).ok()?;
    let kf = kappa as f64;
    if margins.r().iter().any(|&ri| ri > n as f64 * kf) {
        return None;
    }
    let entropy = maxent::entropy_limit(&margins, Cap::Finite(kappa)).ok()?;
    let indep = maxent::indep_log_limit(&margins, Cap::Finite(kappa)).ok()?;
    Some(entropy - indep)
}

/// Scans margins `R = C = (γ, γ+ε, …, γ+(n-1)ε)` over a `γ` grid, computing
/// the correlation gap at each admissible point and bisecting sign changes
/// between adjacent grid points. Grid points evaluate independently (and in
/// parallel); results merge in `γ` order.
pub fn margin_scan(
    kappa: u64,
    eps: f64,
    n: usize,
    gamma_range: (f64, f64),
    gamma_step: f64,
) -> Result<ScanResult> {
    if kappa == 0 || n == 0 {
        return Err(Error::Domain("kappa and n must be positive".into()));
    }
    if !(gamma_step > 0.0) || gamma_range.1 < gamma_range.0 {
        return Err(Error::Domain("bad gamma range or step".into()));
    }
    let count = ((gamma_range.1 - gamma_range.0) / gamma_step).round() as usize + 1;
    let gammas: Vec<f64> = (0..count).map(|i| gamma_range.0 + i as f64 * gamma_step).collect();
    let gaps = par::map_collect(gammas.clone(), |g| scan_gap(g, eps, n, kappa));
    let points: Vec<ScanPoint> = gammas
        .iter()
        .zip(&gaps)
        .map(|(&gamma, &gap)| ScanPoint { gamma, gap, sign: gap.map(GapSign::of) })
        .collect();
    if points.iter().all(|p| p.gap.is_none()) {
        return Err(Error::Domain("no admissible gamma in the scanned range".into()));
    }

    // locate sign changes between adjacent admissible points; the zero band
    // keeps solver-level noise on flat scans from minting spurious crossings
    let is_neg = |g: f64| g < -SIGN_TOL;
    let mut crossings: Vec<f64> = Vec::new();
    for w in points.windows(2) {
        if let (Some(a), Some(b)) = (w[0].gap, w[1].gap) {
            if is_neg(a) != is_neg(b) {
                let mut lo = w[0].gamma;
                let mut hi = w[1].gamma;
                let neg_low = is_neg(a);
                while hi - lo > 1e-4 {
                    let mid = 0.5 * (lo + hi);
                    match scan_gap(mid, eps, n, kappa) {
                        Some(g) if is_neg(g) == neg_low => lo = mid,
                        Some(_) => hi = mid,
                        None => break,
                    }
                }
                crossings.push(0.5 * (lo + hi));
            }
        }
    }
    // assemble negative intervals from the sign pattern and the crossings
    let mut negative_intervals = Vec::new();
    let mut open: Option<f64> = None;
    let mut cross_iter = crossings.into_iter();
    let mut prev_sign: Option<bool> = None; // true = negative
    for p in &points {
        let Some(g) = p.gap else { continue };
        let neg = is_neg(g);
        match (prev_sign, neg) {
            (None, true) => open = Some(p.gamma), // negative from the range edge
            (Some(false), true) => open = cross_iter.next(),
            (Some(true), false) => {
                let end = cross_iter.next().unwrap_or(p.gamma);
                negative_intervals.push((open.take().unwrap_or(gamma_range.0), end));
            }
            _ => {}
        }
        prev_sign = Some(neg);
    }
    if let Some(start) = open {
        negative_intervals.push((start, points.iter().rev().find_map(|p| p.gap.map(|_| p.gamma)).unwrap()));
    }
    Ok(ScanResult { kappa, eps, n, points, negative_intervals })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mp(r: &[f64], c: &[f64]) -> MarginPair {
        MarginPair::new(r.to_vec(), c.to_vec()).unwrap()
    }

    #[test]
    fn constant_margins_have_zero_gap() {
        for kappa in [Cap::Finite(1), Cap::Finite(2), Cap::Unbounded] {
            let rep = correlation_gap(&mp(&[2.0, 2.0], &[2.0, 2.0]), kappa).unwrap();
            assert_eq!(rep.sign, GapSign::Zero, "gap {} for {kappa:?}", rep.gap);
            assert!(!rep.strict_expected);
        }
    }

    #[test]
    fn sparse_nonconstant_margins_attract() {
        // genuinely sparse: under the kappa = 2 curvature radius
        let rep = correlation_gap(&mp(&[0.05, 0.1], &[0.05, 0.1]), Cap::Finite(2)).unwrap();
        assert!(rep.hypothesis_ok, "hypothesis should hold for tiny margins");
        assert_eq!(rep.sign, GapSign::Positive, "gap {}", rep.gap);
        assert!(rep.strict_expected);
    }

    #[test]
    fn moderately_sparse_margins_already_repel() {
        // margins (1,2) sit well outside the kappa = 2 sparsity regime; the
        // paper-scale scans put them inside the negative-correlation band
        let rep = correlation_gap(&mp(&[1.0, 2.0], &[1.0, 2.0]), Cap::Finite(2)).unwrap();
        assert!(!rep.hypothesis_ok);
        assert_eq!(rep.sign, GapSign::Negative, "gap {}", rep.gap);
    }

    #[test]
    fn midrange_margins_repel() {
        let rep = correlation_gap(&mp(&[2.0, 2.02], &[2.0, 2.02]), Cap::Finite(2)).unwrap();
        assert_eq!(rep.sign, GapSign::Negative, "gap {}", rep.gap);
    }

    #[test]
    fn gap_symmetries() {
        let m = mp(&[1.0, 2.0], &[0.5, 1.5, 1.0]);
        let a = correlation_gap(&m, Cap::Finite(2)).unwrap().gap;
        let b = correlation_gap(&m.transpose(), Cap::Finite(2)).unwrap().gap;
        assert!((a - b).abs() < 1e-7);
        // complement: entries -> kappa - entry flips margins to (n k - r, m k - c)
        let k = 2.0;
        let comp = mp(
            &m.r().iter().map(|ri| 3.0 * k - ri).collect::<Vec<_>>(),
            &m.c().iter().map(|cj| 2.0 * k - cj).collect::<Vec<_>>(),
        );
        let c = correlation_gap(&comp, Cap::Finite(2)).unwrap().gap;
        assert!((a - c).abs() < 1e-7, "{a} vs {c}");
    }

    #[test]
    fn hloss_equality_cases() {
        // uniform column profile
        let rep = hloss_inequality_check(&mp(&[1.0, 3.0], &[2.0, 2.0]), Cap::Finite(2)).unwrap();
        assert!(rep.equality_expected);
        assert!(rep.lhs.abs() < 1e-10 && rep.rhs.abs() < 1e-10);
        // constant rows
        let rep = hloss_inequality_check(&mp(&[2.0, 2.0], &[3.0, 1.0]), Cap::Finite(2)).unwrap();
        assert!(rep.equality_expected);
        assert!(rep.margin.abs() < 1e-10);
        assert!(rep.holds);
    }

    #[test]
    fn hloss_strict_for_sparse_nonconstant() {
        let rep = hloss_inequality_check(&mp(&[0.05, 0.1], &[0.05, 0.1]), Cap::Finite(2)).unwrap();
        assert!(rep.holds);
        assert!(!rep.equality_expected);
        assert!(rep.margin > 1e-9, "expected a strict margin, got {}", rep.margin);
    }

    #[test]
    fn hloss_rejects_oversized_rank1() {
        // rank-1 entry 16/5 > 2
        assert!(hloss_inequality_check(&mp(&[4.0, 1.0], &[4.0, 1.0]), Cap::Finite(2)).is_err());
    }

    #[test]
    fn attraction_holds_under_the_default_radius() {
        let rep = attraction_check(&mp(&[0.05, 0.1], &[0.05, 0.1]), 2, None).unwrap();
        assert!(rep.hypothesis_ok);
        assert!(rep.chain_ok);
        let corr = rep.correlation.unwrap();
        assert_eq!(corr.sign, GapSign::Positive);
        assert!(rep.hloss.unwrap().holds);
    }

    #[test]
    fn attraction_with_inflated_delta_reports_chain_failure() {
        // delta = 0.9 admits margins (1,2), far beyond any valid sparsity
        // constant for kappa = 2, and the conclusion chain breaks there
        let rep = attraction_check(&mp(&[1.0, 2.0], &[1.0, 2.0]), 2, Some(0.9)).unwrap();
        assert!(rep.hypothesis_ok); // 2*2 = 4 < 0.9*2*3 = 5.4
        assert!(!rep.chain_ok);
        assert_eq!(rep.correlation.unwrap().sign, GapSign::Negative);
    }

    #[test]
    fn attraction_rejects_kappa_one() {
        assert!(attraction_check(&mp(&[1.0, 2.0], &[1.0, 2.0]), 1, None).is_err());
    }

    #[test]
    fn attraction_constant_margins_reach_equality() {
        let rep = attraction_check(&mp(&[1.0, 1.0], &[1.0, 1.0]), 2, Some(0.9)).unwrap();
        assert!(rep.hypothesis_ok);
        assert!(rep.chain_ok);
        let corr = rep.correlation.unwrap();
        assert_eq!(corr.sign, GapSign::Zero);
    }

    #[test]
    fn scan_with_zero_eps_is_flat() {
        let scan = margin_scan(2, 0.0, 3, (0.5, 3.5), 0.5).unwrap();
        assert!(scan.negative_intervals.is_empty());
        for p in &scan.points {
            assert_eq!(p.sign, Some(GapSign::Zero));
        }
    }

    #[test]
    fn scan_marks_inadmissible_points() {
        let scan = margin_scan(2, 0.02, 2, (-0.5, 1.0), 0.5).unwrap();
        assert!(scan.points[0].gap.is_none());
        assert!(scan.points.last().unwrap().gap.is_some());
    }
}
