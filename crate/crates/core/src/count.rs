//! Exact arbitrary-precision counting: bounded contingency tables, the
//! coefficients of `(1+x+…+x^κ)^n`, and the independence-heuristic estimate.

use crate::bignum::{self, binomial, factorial};
use crate::tables::{BoundsMatrix, Cap, MarginPair};
use crate::{Error, Result, DEFAULT_STATE_BUDGET};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashMap;

pub type BigCount = BigUint;

/// Coefficient of `x^r` in `(1+x+…+x^κ)^n`, exact. Out-of-range `r` (above
/// `n·κ` for finite `κ`) has coefficient zero and returns zero. The unbounded
/// case is the stars-and-bars binomial `C(r+n-1, r)`.
pub fn knomial(n: u64, r: u64, kappa: Cap) -> BigCount {
    let k = match kappa {
        Cap::Unbounded => {
            if n == 0 {
                return if r == 0 { BigUint::one() } else { BigUint::zero() };
            }
            return binomial(r + n - 1, r);
        }
        Cap::Finite(k) => k,
    };
    match n.checked_mul(k) {
        Some(max) if r <= max => {}
        _ => return BigUint::zero(),
    }
    // Exploit symmetry: coefficient of r equals coefficient of n*k - r.
    let r = r.min(n * k - r) as usize;
    let mut coeffs: Vec<BigUint> = vec![BigUint::one()];
    for _ in 0..n {
        // multiply by (1 + x + ... + x^k), truncated at degree r:
        // new[d] = prefix[d+1] - prefix[d-k] over the old coefficients
        let deg = (coeffs.len() - 1 + k as usize).min(r);
        let mut prefix: Vec<BigUint> = Vec::with_capacity(coeffs.len() + 1);
        prefix.push(BigUint::zero());
        for c in &coeffs {
            let last = prefix.last().unwrap().clone();
            prefix.push(last + c);
        }
        let total = prefix.last().unwrap().clone();
        let upto = |d: usize| -> &BigUint {
            if d >= prefix.len() {
                &total
            } else {
                &prefix[d]
            }
        };
        let mut next: Vec<BigUint> = Vec::with_capacity(deg + 1);
        for d in 0..=deg {
            let hi = upto(d + 1).clone();
            let lo = upto(d.saturating_sub(k as usize));
            next.push(hi - lo);
        }
        coeffs = next;
    }
    coeffs.get(r).cloned().unwrap_or_else(BigUint::zero)
}

/// Exact count of tables with the given margins and caps, by dynamic
/// programming over columns with the residual row-sum vector as state.
pub fn count_tables(margins: &MarginPair, bounds: &BoundsMatrix) -> Result<BigCount> {
    count_tables_with_budget(margins, bounds, DEFAULT_STATE_BUDGET)
}

pub fn count_tables_with_budget(
    margins: &MarginPair,
    bounds: &BoundsMatrix,
    budget: u64,
) -> Result<BigCount> {
    if !bounds.matches(margins) {
        return Err(Error::Domain("bounds shape does not match margins".into()));
    }
    let (r, c) = margins.integer_margins()?;
    let (m, n) = (r.len(), c.len());
    let caps = bounds.effective_caps(&r, &c); // row-major, finite

    // suffix cap sums per row: capacity available in columns j..
    let mut suffix = vec![vec![0u64; n + 1]; m];
    for i in 0..m {
        for j in (0..n).rev() {
            suffix[i][j] = suffix[i][j + 1] + caps[i * n + j];
        }
    }
    if (0..m).any(|i| r[i] > suffix[i][0]) {
        return Ok(BigUint::zero());
    }

    let mut states: HashMap<Vec<u64>, BigUint> = HashMap::new();
    states.insert(r.clone(), BigUint::one());
    let mut used: u64 = 1;

    for j in 0..n {
        let kcol: Vec<u64> = (0..m).map(|i| caps[i * n + j]).collect();
        let mut next: HashMap<Vec<u64>, BigUint> = HashMap::new();
        for (res, ways) in &states {
            let mut fill = Vec::with_capacity(m);
            column_fills(res, &kcol, c[j], &suffix, j, &mut fill, &mut |fill| {
                let new_res: Vec<u64> = res.iter().zip(fill).map(|(a, b)| a - b).collect();
                *next.entry(new_res).or_default() += ways;
            });
        }
        used += next.len() as u64;
        if used > budget {
            return Err(Error::BudgetExceeded { used, budget });
        }
        states = next;
    }
    Ok(states.remove(&vec![0u64; m]).unwrap_or_else(BigUint::zero))
}

/// Enumerates all fills of one column: vectors `a` with `Σ a_i = need`,
/// `0 ≤ a_i ≤ min(kcol_i, res_i)`, and each leftover residual still coverable
/// by the later columns. Prunes a branch as soon as the remaining rows cannot
/// absorb the remaining column sum.
fn column_fills(
    res: &[u64],
    kcol: &[u64],
    need: u64,
    suffix: &[Vec<u64>],
    j: usize,
    fill: &mut Vec<u64>,
    out: &mut impl FnMut(&[u64]),
) {
    let i = fill.len();
    if i == res.len() {
        if need == 0 {
            out(fill);
        }
        return;
    }
    let later: u64 = res[i + 1..]
        .iter()
        .zip(&kcol[i + 1..])
        .map(|(&re, &kc)| re.min(kc))
        .sum();
    let hi = need.min(res[i]).min(kcol[i]);
    let lo = need.saturating_sub(later).max(res[i].saturating_sub(suffix[i][j + 1]));
    if lo > hi {
        return;
    }
    for a in lo..=hi {
        fill.push(a);
        column_fills(res, kcol, need - a, suffix, j, fill, out);
        fill.pop();
    }
}

/// Exact count of the `s`-fold cloned instance under a uniform cap.
///
/// Equals `count_tables` applied to the cloned margins, but exploits the row
/// exchangeability of uniform caps: the completion count from a residual
/// vector depends only on its multiset, so states are canonicalized by
/// sorting and column fills are enumerated per residual-value group with a
/// multinomial weight. This reaches clone factors whose raw residual-vector
/// state space would blow the budget.
pub fn count_cloned(margins: &MarginPair, kappa: Cap, s: usize) -> Result<BigCount> {
    count_cloned_with_budget(margins, kappa, s, DEFAULT_STATE_BUDGET)
}

pub fn count_cloned_with_budget(
    margins: &MarginPair,
    kappa: Cap,
    s: usize,
    budget: u64,
) -> Result<BigCount> {
    if s == 0 {
        return Err(Error::Domain("clone factor s must be >= 1".into()));
    }
    let (r, c) = margins.integer_margins()?;
    let mut rows: Vec<u64> = r.iter().map(|&x| x * s as u64).collect::<Vec<_>>().repeat(s);
    let cols: Vec<u64> = c.iter().map(|&x| x * s as u64).collect::<Vec<_>>().repeat(s);
    rows.sort_unstable_by(|a, b| b.cmp(a));
    let mut counter = ClonedCounter {
        cols,
        kappa,
        memo: HashMap::new(),
        budget,
        fact: (0..=rows.len() as u64).map(factorial).collect(),
    };
    counter.run(rows)
}

struct ClonedCounter {
    cols: Vec<u64>,
    kappa: Cap,
    memo: HashMap<(usize, Vec<u64>), BigUint>,
    budget: u64,
    fact: Vec<BigUint>,
}

impl ClonedCounter {
    fn run(&mut self, rows: Vec<u64>) -> Result<BigCount> {
        if let Cap::Finite(k) = self.kappa {
            let cap_all = k.checked_mul(self.cols.len() as u64);
            if rows.iter().any(|&ri| cap_all.map_or(false, |cap| ri > cap)) {
                return Ok(BigUint::zero());
            }
            if self.cols.iter().any(|&cj| cj > k * rows.len() as u64) {
                return Ok(BigUint::zero());
            }
        }
        self.count(0, rows)
    }

    fn count(&mut self, j: usize, res: Vec<u64>) -> Result<BigCount> {
        if j == self.cols.len() {
            debug_assert!(res.iter().all(|&x| x == 0));
            return Ok(BigUint::one());
        }
        if let Some(hit) = self.memo.get(&(j, res.clone())) {
            return Ok(hit.clone());
        }
        // residual-value groups of the (descending) sorted residual vector
        let mut groups: Vec<(u64, usize)> = Vec::new();
        for &v in &res {
            match groups.last_mut() {
                Some((gv, count)) if *gv == v => *count += 1,
                _ => groups.push((v, 1)),
            }
        }
        let remaining_cols = (self.cols.len() - j - 1) as u64;
        let per_row_after = match self.kappa {
            Cap::Finite(k) => k.checked_mul(remaining_cols),
            Cap::Unbounded => None, // no per-row limit
        };
        let bounds: Vec<(u64, u64)> = groups
            .iter()
            .map(|&(v, _)| {
                let amax = self.kappa.min_with(v);
                let amin = per_row_after.map_or(0, |cap| v.saturating_sub(cap));
                (amin, amax)
            })
            .collect();
        // column mass obtainable from groups g.. (for pruning)
        let mut max_suffix = vec![0u64; groups.len() + 1];
        let mut min_suffix = vec![0u64; groups.len() + 1];
        for g in (0..groups.len()).rev() {
            max_suffix[g] = max_suffix[g + 1] + bounds[g].1 * groups[g].1 as u64;
            min_suffix[g] = min_suffix[g + 1] + bounds[g].0 * groups[g].1 as u64;
        }

        let mut ctx = FillCtx {
            j,
            groups,
            bounds,
            max_suffix,
            min_suffix,
            parts: Vec::new(),
            total: BigUint::zero(),
            rows: res.len(),
        };
        self.fill_group(&mut ctx, 0, self.cols[j], BigUint::one())?;
        let total = ctx.total;
        self.memo.insert((j, res), total.clone());
        if self.memo.len() as u64 > self.budget {
            return Err(Error::BudgetExceeded { used: self.memo.len() as u64, budget: self.budget });
        }
        Ok(total)
    }

    /// Distributes the remaining column mass over residual groups `g..`.
    /// `ways` carries the running multinomial weight: entering a group
    /// multiplies by `n_g!`, fixing `t` rows at one amount divides by `t!`.
    fn fill_group(&mut self, ctx: &mut FillCtx, g: usize, need: u64, ways: BigUint) -> Result<()> {
        if g == ctx.groups.len() {
            if need == 0 {
                let mut next: Vec<u64> = Vec::with_capacity(ctx.rows);
                for &(gi, a, t) in &ctx.parts {
                    let v = ctx.groups[gi].0;
                    for _ in 0..t {
                        next.push(v - a);
                    }
                }
                next.sort_unstable_by(|a, b| b.cmp(a));
                let sub = self.count(ctx.j + 1, next)?;
                ctx.total += ways * sub;
            }
            return Ok(());
        }
        if need > ctx.max_suffix[g] || need < ctx.min_suffix[g] {
            return Ok(());
        }
        let amax = ctx.bounds[g].1;
        let n_g = ctx.groups[g].1;
        let ways = ways * &self.fact[n_g];
        self.fill_amount(ctx, g, amax, n_g, need, ways)
    }

    /// Chooses how many of the group's `left` unassigned rows receive amount
    /// `a`, walking `a` downward; at `a == amin` the remaining rows are forced.
    fn fill_amount(
        &mut self,
        ctx: &mut FillCtx,
        g: usize,
        a: u64,
        left: usize,
        need: u64,
        ways: BigUint,
    ) -> Result<()> {
        let amin = ctx.bounds[g].0;
        if a == amin {
            let cost = amin * left as u64;
            if cost <= need
                && need - cost >= ctx.min_suffix[g + 1]
                && need - cost <= ctx.max_suffix[g + 1]
            {
                if left > 0 {
                    ctx.parts.push((g, amin, left));
                }
                let w = ways / &self.fact[left];
                self.fill_group(ctx, g + 1, need - cost, w)?;
                if left > 0 {
                    ctx.parts.pop();
                }
            }
            return Ok(());
        }
        let tmax = ((need.saturating_sub(ctx.min_suffix[g + 1] + amin * left as u64)) / (a - amin))
            .min(left as u64) as usize;
        for t in 0..=tmax {
            let cost = a * t as u64;
            let left2 = left - t;
            // rows still unassigned in this group can contribute at most a-1 each
            if need - cost > (a - 1) * left2 as u64 + ctx.max_suffix[g + 1] {
                continue;
            }
            if t > 0 {
                ctx.parts.push((g, a, t));
            }
            let w = ways.clone() / &self.fact[t];
            self.fill_amount(ctx, g, a - 1, left2, need - cost, w)?;
            if t > 0 {
                ctx.parts.pop();
            }
        }
        Ok(())
    }
}

struct FillCtx {
    j: usize,
    groups: Vec<(u64, usize)>,  // (residual value, row count)
    bounds: Vec<(u64, u64)>,    // (amin, amax) per group
    max_suffix: Vec<u64>,
    min_suffix: Vec<u64>,
    parts: Vec<(usize, u64, usize)>, // (group, amount, rows)
    total: BigUint,
    rows: usize,
}

/// Exact rational with an out-of-support flag and a log view computed from
/// big-integer bit lengths (never by converting the ratio to a double first).
#[derive(Debug, Clone, PartialEq)]
pub struct BigRatio {
    value: BigRational,
    out_of_support: bool,
}

impl BigRatio {
    pub fn zero_out_of_support() -> Self {
        BigRatio { value: BigRational::zero(), out_of_support: true }
    }

    pub fn from_counts(numer: BigUint, denom: BigUint) -> Self {
        assert!(!denom.is_zero(), "BigRatio denominator must be positive");
        BigRatio {
            value: BigRational::new(BigInt::from(numer), BigInt::from(denom)),
            out_of_support: false,
        }
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn out_of_support(&self) -> bool {
        self.out_of_support
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    /// Natural log; `-∞` for zero.
    pub fn ln(&self) -> f64 {
        if self.value.is_zero() {
            return f64::NEG_INFINITY;
        }
        bignum::ln_ratio(&self.value)
    }

    pub fn to_f64(&self) -> f64 {
        bignum::ratio_to_f64(&self.value)
    }
}

impl std::fmt::Display for BigRatio {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.value.numer(), self.value.denom())
    }
}

/// Independence-heuristic estimate for the count of tables with entries in
/// `{0,…,κ}`: the count of all matrices with total `N`, discounted by the
/// probabilities of hitting the row and the column margins as if those events
/// were independent. Margins outside the support give zero with a flag.
pub fn indep_estimate(margins: &MarginPair, kappa: Cap) -> Result<BigRatio> {
    let (r, c) = margins.integer_margins()?;
    let (m, n) = (r.len() as u64, c.len() as u64);
    let total: u64 = r.iter().sum();
    if let Cap::Finite(k) = kappa {
        let row_max = n.checked_mul(k);
        let col_max = m.checked_mul(k);
        let r_bad = r.iter().any(|&ri| row_max.map_or(false, |mx| ri > mx));
        let c_bad = c.iter().any(|&cj| col_max.map_or(false, |mx| cj > mx));
        if r_bad || c_bad {
            return Ok(BigRatio::zero_out_of_support());
        }
    }
    let mut numer = BigUint::one();
    for &ri in &r {
        numer *= knomial(n, ri, kappa);
    }
    for &cj in &c {
        numer *= knomial(m, cj, kappa);
    }
    let denom = knomial(m * n, total, kappa);
    if denom.is_zero() {
        return Err(Error::Domain(format!("total {total} exceeds the support of a {m}x{n} table")));
    }
    Ok(BigRatio::from_counts(numer, denom))
}

/// Convenience: `ln` of a count, tolerating zero.
pub fn ln_count(count: &BigCount) -> f64 {
    bignum::ln_biguint(count)
}

/// A count as an exact rational, for the high-precision log routines.
pub(crate) fn ln_arg(count: &BigCount) -> BigRational {
    BigRational::from_integer(BigInt::from(count.clone()))
}
