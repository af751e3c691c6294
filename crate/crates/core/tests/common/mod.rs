//! Shared independent oracles for the integration and acceptance suites.
//! Everything here is deliberately naive: exhaustive enumeration and
//! derivative-free searches that share no code path with the library
//! implementations they check.

use bounded_tables::{BoundsMatrix, Cap, MarginPair};
use num_bigint::BigUint;
use num_traits::Zero;

/// Exhaustive table count: fills the matrix cell by cell, rows first,
/// tracking column residuals. No memoization, no column DP.
pub fn brute_force_count(r: &[u64], c: &[u64], cap_at: &dyn Fn(usize, usize) -> u64) -> BigUint {
    fn rec(
        r: &[u64],
        cap_at: &dyn Fn(usize, usize) -> u64,
        i: usize,
        j: usize,
        row_left: u64,
        col_left: &mut Vec<u64>,
        total: &mut BigUint,
    ) {
        let n = col_left.len();
        if i == r.len() {
            *total += 1u32;
            return;
        }
        if j == n {
            if row_left == 0 {
                let next_left = if i + 1 < r.len() { r[i + 1] } else { 0 };
                rec(r, cap_at, i + 1, 0, next_left, col_left, total);
            }
            return;
        }
        let hi = row_left.min(col_left[j]).min(cap_at(i, j));
        for a in 0..=hi {
            col_left[j] -= a;
            rec(r, cap_at, i, j + 1, row_left - a, col_left, total);
            col_left[j] += a;
        }
    }
    if r.iter().sum::<u64>() != c.iter().sum::<u64>() {
        return BigUint::zero();
    }
    let mut col_left = c.to_vec();
    let mut total = BigUint::zero();
    let first_left = if r.is_empty() { 0 } else { r[0] };
    rec(r, cap_at, 0, 0, first_left, &mut col_left, &mut total);
    total
}

pub fn brute_force_count_uniform(r: &[u64], c: &[u64], kappa: Cap) -> BigUint {
    brute_force_count(r, c, &|i, j| kappa.min_with(r[i].min(c[j])))
}

/// All nonnegative integer vectors of the given length and sum.
pub fn compositions(total: u64, len: usize) -> Vec<Vec<u64>> {
    fn rec(total: u64, len: usize, current: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if len == 1 {
            current.push(total);
            out.push(current.clone());
            current.pop();
            return;
        }
        for v in 0..=total {
            current.push(v);
            rec(total - v, len - 1, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, len, &mut Vec::new(), &mut out);
    out
}

/// Entropy of the truncated geometric family, recomputed here from scratch by
/// a fine golden-section solve of the mean equation, for oracle use only.
fn oracle_hmax(x: f64, kappa: u64) -> f64 {
    let kf = kappa as f64;
    if x <= 0.0 || x >= kf {
        return 0.0;
    }
    // find q > 0 with sum(t q^t)/sum(q^t) = x by bisection on a wide bracket
    let mean = |q: f64| -> f64 {
        let mut s = 0.0;
        let mut a = 0.0;
        let mut qt = 1.0;
        for t in 0..=kappa {
            s += qt;
            a += t as f64 * qt;
            qt *= q;
        }
        a / s
    };
    let (mut lo, mut hi) = (0.0f64, 1e9f64);
    for _ in 0..500 {
        let mid = 0.5 * (lo + hi);
        if mean(mid) < x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let q = 0.5 * (lo + hi);
    let mut probs = Vec::new();
    let mut qt = 1.0;
    let mut s = 0.0;
    for _ in 0..=kappa {
        probs.push(qt);
        s += qt;
        qt *= q;
    }
    -probs.iter().map(|w| (w / s) * (w / s).ln()).sum::<f64>()
}

/// Oracle for the 2x2 uniform-cap entropy maximum: one free cell, scanned on
/// a fine grid and refined by golden section. Returns (value, table).
pub fn grid_max_entropy_2x2(r: &[f64], c: &[f64], kappa: u64) -> (f64, [[f64; 2]; 2]) {
    let kf = kappa as f64;
    let lo = (c[0] - r[1]).max(r[0] - kf).max(c[0] - kf).max(0.0);
    let hi = r[0].min(c[0]).min(kf).min(kf + c[0] - r[1]);
    assert!(hi >= lo, "infeasible 2x2 oracle instance");
    let table = |w: f64| [[w, r[0] - w], [c[0] - w, r[1] - c[0] + w]];
    let score = |w: f64| -> f64 {
        table(w).iter().flatten().map(|&z| oracle_hmax(z.clamp(0.0, kf), kappa)).sum()
    };
    // coarse scan
    let mut best_w = lo;
    let mut best = f64::NEG_INFINITY;
    for i in 0..=2000 {
        let w = lo + (hi - lo) * i as f64 / 2000.0;
        let v = score(w);
        if v > best {
            best = v;
            best_w = w;
        }
    }
    // golden-section refinement around the best grid point
    let step = (hi - lo) / 2000.0;
    let (mut a, mut b) = ((best_w - step).max(lo), (best_w + step).min(hi));
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let x1 = b - phi * (b - a);
        let x2 = a + phi * (b - a);
        if score(x1) < score(x2) {
            a = x1;
        } else {
            b = x2;
        }
    }
    let w = 0.5 * (a + b);
    (score(w), table(w))
}

/// Oracle for the generating-function bound on a 2x2 instance with arbitrary
/// caps: coordinate-wise golden-section descent of
/// `ln G(x,y) - R·ln x - C·ln y` over log-variables with `x_1` gauge-fixed.
pub fn grid_gf_bound_2x2(r: &[f64], c: &[f64], caps: [[u64; 2]; 2]) -> f64 {
    let objective = |v: &[f64; 3]| -> f64 {
        let lx = [0.0, v[0]];
        let ly = [v[1], v[2]];
        let mut total = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let theta = lx[i] + ly[j];
                // ln(1 + e^theta + ... + e^{k theta}), stable on both sides
                let k = caps[i][j];
                let m = theta.max(0.0) * k as f64;
                let sum: f64 = (0..=k).map(|a| (a as f64 * theta - m).exp()).sum();
                total += m + sum.ln();
            }
        }
        total - r[1] * v[0] - c[0] * v[1] - c[1] * v[2]
    };
    let mut v = [0.0f64; 3];
    for _ in 0..400 {
        for idx in 0..3 {
            let (mut a, mut b) = (v[idx] - 8.0, v[idx] + 8.0);
            let phi = (5f64.sqrt() - 1.0) / 2.0;
            for _ in 0..120 {
                let x1 = b - phi * (b - a);
                let x2 = a + phi * (b - a);
                let mut va = v;
                va[idx] = x1;
                let mut vb = v;
                vb[idx] = x2;
                if objective(&va) > objective(&vb) {
                    a = x1;
                } else {
                    b = x2;
                }
            }
            v[idx] = 0.5 * (a + b);
        }
    }
    objective(&v)
}

pub fn uniform_instance(r: &[u64], c: &[u64], kappa: Cap) -> (MarginPair, BoundsMatrix) {
    let margins = MarginPair::from_ints(r, c).unwrap();
    let bounds = BoundsMatrix::uniform(r.len(), c.len(), kappa);
    (margins, bounds)
}
