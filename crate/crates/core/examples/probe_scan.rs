use bounded_tables::{correlation, maxent, Cap, MarginPair};

fn oracle_hmax(x: f64, kappa: u64) -> f64 {
    let kf = kappa as f64;
    if x <= 0.0 || x >= kf { return 0.0; }
    let mean = |q: f64| -> f64 {
        let (mut s, mut a, mut qt) = (0.0, 0.0, 1.0);
        for t in 0..=kappa { s += qt; a += t as f64 * qt; qt *= q; }
        a / s
    };
    let (mut lo, mut hi) = (0.0f64, 1e9f64);
    for _ in 0..500 { let mid = 0.5*(lo+hi); if mean(mid) < x { lo = mid } else { hi = mid } }
    let q = 0.5*(lo+hi);
    let mut probs = Vec::new(); let mut qt = 1.0; let mut s = 0.0;
    for _ in 0..=kappa { probs.push(qt); s += qt; qt *= q; }
    -probs.iter().map(|w| (w/s)*(w/s).ln()).sum::<f64>()
}

fn oracle_gap_n2(gamma: f64, eps: f64, kappa: u64) -> f64 {
    // entropy limit by fine grid over the single free cell + golden section
    let r = [gamma, gamma + eps];
    let kf = kappa as f64;
    let lo = (r[0] - r[1]).max(r[0] - kf).max(0.0);
    let hi = r[0].min(kf).min(kf + r[0] - r[1]);
    let table = |w: f64| [[w, r[0]-w], [r[0]-w, r[1]-r[0]+w]];
    let score = |w: f64| table(w).iter().flatten().map(|&z| oracle_hmax(z.clamp(0.0,kf), kappa)).sum::<f64>();
    let (mut best, mut bw) = (f64::NEG_INFINITY, lo);
    for i in 0..=4000 { let w = lo + (hi-lo)*i as f64/4000.0; let v = score(w); if v > best { best = v; bw = w; } }
    let (mut a, mut b) = ((bw-(hi-lo)/4000.0).max(lo), (bw+(hi-lo)/4000.0).min(hi));
    let phi = (5f64.sqrt()-1.0)/2.0;
    for _ in 0..200 { let x1 = b - phi*(b-a); let x2 = a + phi*(b-a); if score(x1) < score(x2) { a = x1 } else { b = x2 } }
    let ent = score(0.5*(a+b));
    let n = 2.0; let total = r[0]+r[1];
    let indep = -n*n*oracle_hmax(total/(n*n), kappa)
        + n*(oracle_hmax(r[0]/n, kappa)+oracle_hmax(r[1]/n, kappa))
        + n*(oracle_hmax(r[0]/n, kappa)+oracle_hmax(r[1]/n, kappa));
    ent - indep
}

fn main() {
    for gamma in [2.8, 3.0, 3.1, 3.2, 3.3, 3.4] {
        let m = MarginPair::new(vec![gamma, gamma+0.1], vec![gamma, gamma+0.1]).unwrap();
        let lib = maxent::entropy_limit(&m, Cap::Finite(10)).unwrap()
            - maxent::indep_log_limit(&m, Cap::Finite(10)).unwrap();
        println!("gamma={gamma:.2}: lib gap={lib:+.6e} oracle gap={:+.6e}", oracle_gap_n2(gamma, 0.1, 10));
    }
    for n in 2..=5usize {
        let nf = n as f64;
        let scan = correlation::margin_scan(10, 0.1, n, (0.5*nf, 9.7*nf), 0.25*nf).unwrap();
        println!("kappa=10 n={n}: intervals {:?} (paper rough: ({}, {}))",
            scan.negative_intervals, 1.5*nf, 8.5*nf);
    }
    for n in 2..=5usize {
        let nf = n as f64;
        let scan = correlation::margin_scan(2, 0.02, n, (0.03*nf, 1.97*nf), 0.06*nf).unwrap();
        println!("kappa=2 n={n}: intervals {:?} (paper rough: ({}, {}))",
            scan.negative_intervals, 0.09*nf, 1.89*nf);
    }
}
