//! The truncated geometric family `TG(x;κ)`: the maximum-entropy distribution
//! on `{0,…,κ}` with mean `x`, with point masses `Pr[X=t] = p·q^t`.
//!
//! Parameters solve `p·(1+q+…+q^κ) = 1` and `p·(q+2q²+…+κq^κ) = x`. Closed
//! forms exist only for `κ=1` (`q = x/(1-x)`) and `κ=∞` (`q = x/(x+1)`); the
//! general case is solved by bisection on the strictly increasing map
//! `q ↦ mean`. For `x > κ/2` the complement symmetry `q(κ-x) = 1/q(x)` reduces
//! everything to `q ∈ [0,1]`, which keeps the geometric sums stable.

use crate::tables::Cap;
use crate::{Error, Result};

/// Parameters of `TG(x;κ)`. The boundary `x = κ` is represented by the
/// sentinel `(p, q) = (0, ∞)` (all mass on `κ`); callers must branch on
/// [`TgParams::is_saturated`] before using `p`/`q` in formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TgParams {
    pub kappa: Cap,
    pub x: f64,
    pub p: f64,
    pub q: f64,
}

impl TgParams {
    pub fn is_saturated(&self) -> bool {
        self.q.is_infinite()
    }

    /// Residuals of the two defining equations, evaluated by direct summation
    /// at the stored `(p, q)` (complement algebra only where the direct sums
    /// would overflow).
    pub fn residuals(&self) -> (f64, f64) {
        match self.kappa {
            Cap::Unbounded => {
                // p(1 + q + q^2 + ...) = p/(1-q); mean = q/(1-q)
                let e1 = self.p / (1.0 - self.q) - 1.0;
                let e2 = self.p * self.q / ((1.0 - self.q) * (1.0 - self.q)) - self.x;
                (e1, e2)
            }
            Cap::Finite(k) => {
                if self.is_saturated() {
                    return (0.0, 0.0);
                }
                if self.q <= 1.0 || (k as f64) * self.q.ln() < 600.0 {
                    let (s, a, _) = power_sums_raw(self.q, k);
                    (self.p * s - 1.0, self.p * a - self.x)
                } else {
                    // q too large to sum directly; use the complement identities
                    // p·S(q) = p~·S(q~), p·A(q) = κ·p~·S(q~) - p~·A(q~)
                    let qr = 1.0 / self.q;
                    let pr = self.p * self.q.powi(k as i32); // may be inf*0; recompute below
                    let _ = pr;
                    let (s, a, _) = power_sums_raw(qr, k);
                    let ptilde = 1.0 / s;
                    (ptilde * s - 1.0, k as f64 * ptilde * s - ptilde * a - self.x)
                }
            }
        }
    }
}

/// `(Σ q^t, Σ t·q^t, Σ t²·q^t)` for `t = 0..=k`, by direct accumulation.
fn power_sums_raw(q: f64, k: u64) -> (f64, f64, f64) {
    let mut s = 0.0;
    let mut a = 0.0;
    let mut b = 0.0;
    let mut qt = 1.0;
    for t in 0..=k {
        let tf = t as f64;
        s += qt;
        a += tf * qt;
        b += tf * tf * qt;
        qt *= q;
    }
    (s, a, b)
}

/// Power sums for `q ∈ [0, 1]`: direct accumulation up to `k = 64`, closed
/// forms via `expm1` beyond, and a series expansion around `q = 1` where the
/// closed forms cancel.
pub(crate) fn power_sums(q: f64, k: u64) -> (f64, f64, f64) {
    debug_assert!((0.0..=1.0 + 1e-12).contains(&q));
    if k <= 64 {
        return power_sums_raw(q, k);
    }
    let kf = k as f64;
    if (1.0 - q).abs() < 1e-6 {
        // second-order expansion in h = q - 1 with Faulhaber power sums
        let h = q - 1.0;
        let t1 = kf * (kf + 1.0) / 2.0;
        let t2 = kf * (kf + 1.0) * (2.0 * kf + 1.0) / 6.0;
        let t3 = t1 * t1;
        let t4 = (3.0 * kf * kf + 3.0 * kf - 1.0) * t2 / 5.0;
        let s = (kf + 1.0) + h * t1 + h * h * (t2 - t1) / 2.0;
        let a = t1 + h * t2 + h * h * (t3 - t2) / 2.0;
        let b = t2 + h * t3 + h * h * (t4 - t3) / 2.0;
        return (s, a, b);
    }
    let l = q.ln(); // < 0
    let em = |y: f64| y.exp_m1();
    let s = em((kf + 1.0) * l) / em(l);
    let u = q.powf(kf);
    let d = 1.0 - q;
    let a = q * (1.0 - (kf + 1.0) * u + kf * q * u) / (d * d);
    let b = q
        * ((1.0 + q) - (kf + 1.0) * (kf + 1.0) * u + (2.0 * kf * kf + 2.0 * kf - 1.0) * q * u
            - kf * kf * q * q * u)
        / (d * d * d);
    (s, a, b)
}

/// Mean of the distribution with weights `q^t` on `0..=k`; `q` may exceed 1,
/// handled through the complement.
pub(crate) fn mean_capped(q: f64, cap: Cap) -> f64 {
    match cap {
        Cap::Unbounded => {
            debug_assert!(q < 1.0);
            q / (1.0 - q)
        }
        Cap::Finite(0) => 0.0,
        Cap::Finite(k) => {
            if q <= 1.0 {
                let (s, a, _) = power_sums(q, k);
                a / s
            } else {
                let (s, a, _) = power_sums(1.0 / q, k);
                k as f64 - a / s
            }
        }
    }
}

/// Mean as a function of `θ = ln q`, stable for either sign of `θ`.
/// Unbounded caps require `θ < 0`; at or above 0 the mean is `+∞`.
pub(crate) fn mean_theta(theta: f64, cap: Cap) -> f64 {
    match cap {
        Cap::Unbounded => {
            if theta >= 0.0 {
                f64::INFINITY
            } else {
                // q/(1-q) = 1/(e^{-θ} - 1)
                1.0 / (-theta).exp_m1()
            }
        }
        Cap::Finite(0) => 0.0,
        Cap::Finite(k) => {
            if theta <= 0.0 {
                let (s, a, _) = power_sums(theta.exp(), k);
                a / s
            } else {
                let (s, a, _) = power_sums((-theta).exp(), k);
                k as f64 - a / s
            }
        }
    }
}

/// `ln Σ_{t=0..cap} e^{tθ}`, the per-cell log partition function. For finite
/// caps and `θ > 0` the leading term `kθ` is factored out; unbounded caps
/// return `+∞` at `θ ≥ 0`.
pub(crate) fn log_partition(theta: f64, cap: Cap) -> f64 {
    match cap {
        Cap::Unbounded => {
            if theta >= 0.0 {
                f64::INFINITY
            } else {
                -(-theta.exp()).ln_1p()
            }
        }
        Cap::Finite(0) => 0.0,
        Cap::Finite(k) => {
            if theta <= 0.0 {
                let (s, _, _) = power_sums(theta.exp(), k);
                s.ln()
            } else {
                let (s, _, _) = power_sums((-theta).exp(), k);
                k as f64 * theta + s.ln()
            }
        }
    }
}

fn check_domain(x: f64, kappa: Cap) -> Result<()> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::Domain(format!("mean {x} is not a nonnegative real")));
    }
    if let Cap::Finite(k) = kappa {
        if x > k as f64 {
            return Err(Error::Domain(format!("mean {x} exceeds the cap {k}")));
        }
    }
    Ok(())
}

/// Solves for the `TG(x;κ)` parameters. Bisection runs on the reduced side
/// `x ≤ κ/2` (where `q ∈ [0,1]`), 200 iterations max, stopping at interval
/// width `1e-14`; means above `κ/2` map back through `q ↦ 1/q`.
pub fn solve_tg(x: f64, kappa: Cap) -> Result<TgParams> {
    check_domain(x, kappa)?;
    match kappa {
        Cap::Unbounded => Ok(TgParams { kappa, x, p: 1.0 / (x + 1.0), q: x / (x + 1.0) }),
        Cap::Finite(k) => {
            let kf = k as f64;
            if x == 0.0 {
                return Ok(TgParams { kappa, x, p: 1.0, q: 0.0 });
            }
            if x == kf {
                return Ok(TgParams { kappa, x, p: 0.0, q: f64::INFINITY });
            }
            if x == kf / 2.0 {
                return Ok(TgParams { kappa, x, p: 1.0 / (kf + 1.0), q: 1.0 });
            }
            let reduced = x.min(kf - x);
            let mut lo = 0.0f64;
            let mut hi = 1.0f64;
            for _ in 0..200 {
                if hi - lo < 1e-14 {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                if mean_capped(mid, kappa) < reduced {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let q = 0.5 * (lo + hi);
            let (s, _, _) = power_sums(q, k);
            let p = 1.0 / s;
            if x <= kf / 2.0 {
                Ok(TgParams { kappa, x, p, q })
            } else {
                Ok(TgParams { kappa, x, p: p * q.powi(k as i32), q: 1.0 / q })
            }
        }
    }
}

/// Entropy of `TG(x;κ)` in nats: `-(ln p + x ln q)`, with `H(0) = H(κ) = 0`.
/// Lies in `[0, ln(κ+1)]` for finite `κ`, peaking at the uniform midpoint.
pub fn hmax(x: f64, kappa: Cap) -> Result<f64> {
    check_domain(x, kappa)?;
    match kappa {
        Cap::Unbounded => {
            if x == 0.0 {
                return Ok(0.0);
            }
            let q = x / (x + 1.0);
            Ok((x + 1.0).ln() - x * q.ln())
        }
        Cap::Finite(k) => {
            let kf = k as f64;
            if x == 0.0 || x == kf {
                return Ok(0.0);
            }
            // complement symmetry: H(x) = H(κ-x); evaluate on the q<=1 side
            let reduced = x.min(kf - x);
            let params = solve_tg(reduced, kappa)?;
            if params.q == 0.0 {
                return Ok(0.0);
            }
            Ok(-(params.p.ln() + reduced * params.q.ln()))
        }
    }
}

/// `d/dx` of [`hmax`]: `-ln q(x;κ)`. Diverges at the domain boundary, which
/// is rejected.
pub fn hmax_deriv(x: f64, kappa: Cap) -> Result<f64> {
    check_domain(x, kappa)?;
    if x == 0.0 {
        return Err(Error::Domain("derivative diverges at x = 0".into()));
    }
    if let Cap::Finite(k) = kappa {
        if x == k as f64 {
            return Err(Error::Domain("derivative diverges at x = kappa".into()));
        }
        let kf = k as f64;
        let reduced = x.min(kf - x);
        let q = solve_tg(reduced, kappa)?.q;
        return Ok(if x <= kf / 2.0 { -q.ln() } else { q.ln() });
    }
    let q = x / (x + 1.0);
    Ok(-q.ln())
}

/// Variance of `TG(x;κ)`, from the power sums at the reduced parameter.
fn variance(x: f64, kappa: Cap) -> Result<f64> {
    match kappa {
        Cap::Unbounded => {
            let q = x / (x + 1.0);
            Ok(q / ((1.0 - q) * (1.0 - q)))
        }
        Cap::Finite(k) => {
            let kf = k as f64;
            let reduced = x.min(kf - x);
            let q = solve_tg(reduced, kappa)?.q;
            let (s, a, b) = power_sums(q, k);
            Ok((b * s - a * a) / (s * s))
        }
    }
}

/// The curvature function `x²·(d²/dx²) hmax = -x²·q'(x)/q(x)`, with `q'`
/// from implicit differentiation of the mean as a rational function of `q`
/// (`dx/dq = (BS - A²)/(qS²)`, so `q'/q = S²/(BS - A²)`), never from
/// differencing `q(x)`. The singularity at `x = 0` is removable; near 0 the
/// series is `-x + x² + O(x³)`.
pub fn phi(x: f64, kappa: Cap) -> Result<f64> {
    check_domain(x, kappa)?;
    if let Cap::Finite(k) = kappa {
        if x >= k as f64 {
            return Err(Error::Domain(format!("phi needs x < kappa, got x = {x}")));
        }
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(-x * x / variance(x, kappa)?)
}

/// Entropy lost when a row of sum `r` is repartitioned from uniform column
/// shares to the profile `α`: `n·hmax(r/n) - Σ_j hmax(r·α_j)`.
pub fn entropy_loss(r: f64, alpha: &[f64], kappa: Cap) -> Result<f64> {
    if alpha.is_empty() {
        return Err(Error::Domain("alpha must be nonempty".into()));
    }
    if let Some(a) = alpha.iter().find(|a| !a.is_finite() || **a < -1e-12) {
        return Err(Error::Domain(format!("alpha entry {a} is negative")));
    }
    let total: f64 = alpha.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::Domain(format!("alpha sums to {total}, not 1")));
    }
    if !r.is_finite() || r < 0.0 {
        return Err(Error::Domain(format!("r = {r} is not a nonnegative real")));
    }
    if r == 0.0 {
        return Ok(0.0);
    }
    let n = alpha.len() as f64;
    let kf = kappa.as_f64();
    if r / n > kf * (1.0 + 1e-12) {
        return Err(Error::Domain(format!("r/n = {} exceeds kappa", r / n)));
    }
    let mut sum = 0.0;
    for &aj in alpha {
        let arg = r * aj.max(0.0);
        if arg > kf * (1.0 + 1e-12) {
            return Err(Error::Domain(format!("r*alpha_j = {arg} exceeds kappa")));
        }
        sum += hmax(arg.min(kf), kappa)?;
    }
    Ok(n * hmax((r / n).min(kf), kappa)? - sum)
}

/// Largest `δ* ∈ (0,1)` such that the second central difference of [`phi`]
/// (step `h = κ·1e-4`) stays positive on `(0, δ*κ]`; the first sign change is
/// bracketed on the scan grid and then bisected. Returns 0 when convexity
/// fails from the start (the `κ = 1` curvature is concave everywhere).
pub fn convexity_radius(kappa: u64) -> Result<f64> {
    if kappa == 0 {
        return Err(Error::Domain("kappa must be >= 1".into()));
    }
    let cap = Cap::Finite(kappa);
    let kf = kappa as f64;
    let h = kf * 1e-4;
    let second = |x: f64| -> f64 {
        let left = phi(x - h, cap).unwrap_or(f64::NAN);
        let mid = phi(x, cap).unwrap_or(f64::NAN);
        let right = phi(x + h, cap).unwrap_or(f64::NAN);
        left - 2.0 * mid + right
    };
    let steps = 9_998usize; // x = h .. just below kappa - h
    let mut prev = h;
    if second(prev) <= 0.0 {
        return Ok(0.0);
    }
    for t in 2..=steps {
        let x = t as f64 * h;
        if x + h >= kf {
            break;
        }
        if second(x) <= 0.0 {
            // bisect the sign change in (prev, x)
            let mut lo = prev;
            let mut hi = x;
            while hi - lo > kf * 1e-7 {
                let mid = 0.5 * (lo + hi);
                if second(mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Ok(lo / kf);
        }
        prev = x;
    }
    Ok(prev / kf)
}

#[cfg(test)]
mod tests {
    use super::*;

    const KAPPAS: [Cap; 5] =
        [Cap::Finite(1), Cap::Finite(2), Cap::Finite(3), Cap::Finite(10), Cap::Unbounded];

    fn grid(cap: Cap, points: usize) -> Vec<f64> {
        // interior grid plus the lower boundary
        let hi = match cap {
            Cap::Finite(k) => k as f64,
            Cap::Unbounded => 50.0,
        };
        (0..points).map(|i| hi * (i as f64 + 0.5) / (points as f64 + 1.0)).collect()
    }

    #[test]
    fn solve_tg_examples() {
        for k in [1u64, 2, 5] {
            let p = solve_tg(k as f64 / 2.0, Cap::Finite(k)).unwrap();
            assert!((p.q - 1.0).abs() < 1e-12);
            assert!((p.p - 1.0 / (k as f64 + 1.0)).abs() < 1e-12);
        }
        // closed forms: q(x;1) = x/(1-x), q(x;inf) = x/(x+1)
        let p = solve_tg(0.25, Cap::Finite(1)).unwrap();
        assert!((p.q - 1.0 / 3.0).abs() < 1e-13);
        assert!((p.p - 0.75).abs() < 1e-13);

        let p = solve_tg(2.0, Cap::Unbounded).unwrap();
        assert!((p.q - 2.0 / 3.0).abs() < 1e-15);
        assert!((p.p - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn solve_tg_boundaries() {
        let p = solve_tg(0.0, Cap::Finite(3)).unwrap();
        assert_eq!((p.p, p.q), (1.0, 0.0));
        let p = solve_tg(3.0, Cap::Finite(3)).unwrap();
        assert!(p.is_saturated());
        assert_eq!(p.p, 0.0);
        assert!(solve_tg(3.1, Cap::Finite(3)).is_err());
        assert!(solve_tg(-0.1, Cap::Unbounded).is_err());
    }

    #[test]
    fn residual_grid_is_tight() {
        for cap in KAPPAS {
            for x in grid(cap, 200) {
                let params = solve_tg(x, cap).unwrap();
                let (e1, e2) = params.residuals();
                assert!(e1.abs() < 1e-10, "eq1 residual {e1} at x={x} cap={cap:?}");
                assert!(e2.abs() < 1e-10, "eq2 residual {e2} at x={x} cap={cap:?}");
            }
        }
    }

    #[test]
    fn closed_forms_match() {
        for i in 1..100 {
            let x = i as f64 / 100.0;
            let p = solve_tg(x, Cap::Finite(1)).unwrap();
            assert!((p.q - x / (1.0 - x)).abs() < 1e-12 * (1.0 + p.q));
            let h = hmax(x, Cap::Finite(1)).unwrap();
            let closed = -x * x.ln() - (1.0 - x) * (1.0 - x).ln();
            assert!((h - closed).abs() < 1e-12);

            let x = i as f64 / 10.0;
            let p = solve_tg(x, Cap::Unbounded).unwrap();
            assert!((p.q - x / (x + 1.0)).abs() < 1e-14);
            let h = hmax(x, Cap::Unbounded).unwrap();
            let closed = (x + 1.0) * (x + 1.0).ln() - x * x.ln();
            assert!((h - closed).abs() < 1e-12);
        }
    }

    #[test]
    fn hmax_examples() {
        assert!((hmax(0.5, Cap::Finite(1)).unwrap() - std::f64::consts::LN_2).abs() < 1e-12);
        for k in [1u64, 2, 4, 9] {
            let h = hmax(k as f64 / 2.0, Cap::Finite(k)).unwrap();
            assert!((h - (k as f64 + 1.0).ln()).abs() < 1e-12);
        }
        assert!((hmax(1.0, Cap::Unbounded).unwrap() - 2.0 * std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn complement_symmetry() {
        for k in [2u64, 3, 10] {
            let kf = k as f64;
            for i in 1..20 {
                let x = kf * i as f64 / 20.0;
                let a = solve_tg(x, Cap::Finite(k)).unwrap();
                let b = solve_tg(kf - x, Cap::Finite(k)).unwrap();
                if !a.is_saturated() && b.q > 0.0 {
                    assert!((a.q * b.q - 1.0).abs() < 1e-10, "q({x})*q({}) != 1", kf - x);
                }
                let ha = hmax(x, Cap::Finite(k)).unwrap();
                let hb = hmax(kf - x, Cap::Finite(k)).unwrap();
                assert!((ha - hb).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn strict_concavity_on_grid() {
        for cap in KAPPAS {
            let xs = grid(cap, 24);
            for (ai, &a) in xs.iter().enumerate() {
                for &b in &xs[ai + 1..] {
                    if (a - b).abs() <= 1e-3 {
                        continue;
                    }
                    for t in [0.25, 0.5, 0.75] {
                        let mid = t * a + (1.0 - t) * b;
                        let lhs = hmax(mid, cap).unwrap();
                        let rhs = t * hmax(a, cap).unwrap() + (1.0 - t) * hmax(b, cap).unwrap();
                        assert!(lhs > rhs + 1e-12, "concavity fails at {a},{b},{t} cap={cap:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn hmax_is_the_entropy_maximum() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(20260810);
        for _ in 0..200 {
            let k = *[1u64, 2, 3, 5].choose(&mut rng).unwrap();
            // random distribution on {0..k}
            let mut w: Vec<f64> = (0..=k).map(|_| rng.random::<f64>().max(1e-12)).collect();
            let tot: f64 = w.iter().sum();
            for v in &mut w {
                *v /= tot;
            }
            let mean: f64 = w.iter().enumerate().map(|(t, p)| t as f64 * p).sum();
            let entropy: f64 = -w.iter().map(|p| p * p.ln()).sum::<f64>();
            let bound = hmax(mean, Cap::Finite(k)).unwrap();
            assert!(entropy <= bound + 1e-12, "entropy {entropy} above bound {bound}");
        }
    }

    #[test]
    fn deriv_examples_and_finite_differences() {
        assert_eq!(hmax_deriv(1.0, Cap::Finite(2)).unwrap(), 0.0);
        assert!((hmax_deriv(0.25, Cap::Finite(1)).unwrap() - 3f64.ln()).abs() < 1e-12);
        assert!((hmax_deriv(1.0, Cap::Unbounded).unwrap() - 2f64.ln()).abs() < 1e-13);
        assert!(hmax_deriv(0.0, Cap::Finite(2)).is_err());
        assert!(hmax_deriv(2.0, Cap::Finite(2)).is_err());

        let step = 1e-5;
        for cap in KAPPAS {
            for x in grid(cap, 40) {
                if x - step <= 0.0 || x + step >= cap.as_f64() {
                    continue;
                }
                let fd = (hmax(x + step, cap).unwrap() - hmax(x - step, cap).unwrap()) / (2.0 * step);
                let d = hmax_deriv(x, cap).unwrap();
                assert!((fd - d).abs() < 1e-6, "fd {fd} vs {d} at x={x} cap={cap:?}");
            }
        }
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi(0.0, Cap::Finite(2)).unwrap(), 0.0);
        // closed forms: phi(x;1) = -x/(1-x), phi(x;inf) = -x/(1+x)
        assert!((phi(0.5, Cap::Finite(1)).unwrap() + 1.0).abs() < 1e-11);
        assert!((phi(1.0, Cap::Unbounded).unwrap() + 0.5).abs() < 1e-12);
        assert!(phi(2.0, Cap::Finite(2)).is_err());
    }

    #[test]
    fn phi_matches_hmax_curvature() {
        // phi = x^2 * H''; compare against a second central difference of hmax
        let h = 1e-4;
        for cap in [Cap::Finite(2), Cap::Finite(3), Cap::Finite(10)] {
            let kf = cap.as_f64();
            for i in 1..19 {
                let x = kf * (0.05 + 0.9 * i as f64 / 19.0);
                let dd = (hmax(x + h, cap).unwrap() - 2.0 * hmax(x, cap).unwrap()
                    + hmax(x - h, cap).unwrap())
                    / (h * h);
                let expect = x * x * dd;
                let got = phi(x, cap).unwrap();
                assert!(
                    (got - expect).abs() < 1e-5 * expect.abs().max(1e-3),
                    "phi {got} vs fd {expect} at x={x} cap={cap:?}"
                );
            }
        }
    }

    #[test]
    fn phi_series_bound_near_zero() {
        for k in [2u64, 3, 5, 10] {
            for i in 1..=50 {
                let x = 0.05 * i as f64 / 50.0;
                let v = phi(x, Cap::Finite(k)).unwrap();
                assert!(
                    (v + x - x * x).abs() <= 10.0 * x * x * x,
                    "series bound fails at x={x} k={k}: {v}"
                );
            }
        }
    }

    #[test]
    fn entropy_loss_cases() {
        // uniform profile: no loss
        for n in [2usize, 3, 5] {
            let alpha = vec![1.0 / n as f64; n];
            for r in [0.0, 0.5, 1.0, 1.9] {
                let j = entropy_loss(r, &alpha, Cap::Finite(2)).unwrap();
                assert!(j.abs() < 1e-12, "uniform alpha J({r}) = {j}");
            }
        }
        // a zero share drops its term
        let j = entropy_loss(1.5, &[1.0, 0.0], Cap::Unbounded).unwrap();
        let direct = 2.0 * hmax(0.75, Cap::Unbounded).unwrap() - hmax(1.5, Cap::Unbounded).unwrap();
        assert!((j - direct).abs() < 1e-12);
        // general case agrees with direct composition
        let j = entropy_loss(1.0, &[0.75, 0.25], Cap::Finite(2)).unwrap();
        let direct = 2.0 * hmax(0.5, Cap::Finite(2)).unwrap()
            - hmax(0.75, Cap::Finite(2)).unwrap()
            - hmax(0.25, Cap::Finite(2)).unwrap();
        assert!((j - direct).abs() < 1e-12);
        // domain rejection
        assert!(entropy_loss(4.0, &[1.0, 0.0], Cap::Finite(2)).is_err());
    }

    #[test]
    fn convexity_radius_signs() {
        assert_eq!(convexity_radius(1).unwrap(), 0.0);
        for k in [2u64, 3, 5, 10] {
            let d = convexity_radius(k).unwrap();
            assert!(d > 0.0 && d < 1.0, "radius {d} for kappa {k}");
        }
    }
}
