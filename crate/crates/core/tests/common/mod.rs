//! Independent oracles: brute-force sums and composite Gauss–Legendre
//! quadrature, written without the library's distribution or quadrature code.

#![allow(dead_code)]

use uvmethod::distributions::{FamilyKind, FamilyParam};
use uvmethod::estimators::{v_component, Direction, ThresholdRule};

/// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration.
pub fn gauss_legendre(order: usize) -> Vec<(f64, f64)> {
    let n = order as f64;
    (0..order)
        .map(|i| {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=order {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// Composite rule: `panels` equal panels on `[a, b]`, `order` points each.
pub fn composite_nodes(a: f64, b: f64, panels: usize, order: usize) -> Vec<(f64, f64)> {
    if b <= a {
        return Vec::new();
    }
    let gl = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let lo = a + p as f64 * h;
        for &(x, w) in &gl {
            out.push((lo + 0.5 * h * (x + 1.0), 0.5 * h * w));
        }
    }
    out
}

/// Point/weight pairs whose weighted sums approximate `E g(X)` for one
/// observation. Discrete laws: the support up to where the remaining mass is
/// below `1e-14` (pmf by recursion). Continuous laws: quadrature split at `A`.
pub fn expectation_nodes(fam: &FamilyParam, a: f64) -> Vec<(f64, f64)> {
    let t = fam.theta();
    match fam.kind() {
        FamilyKind::Poisson => {
            let mut out = Vec::new();
            let mut p = (-t).exp();
            let mut total = 0.0;
            let mut x = 0u64;
            loop {
                out.push((x as f64, p));
                total += p;
                x += 1;
                p *= t / x as f64;
                if x as f64 > t && 1.0 - total <= 1e-14 && p < 1e-16 {
                    break;
                }
            }
            out
        }
        FamilyKind::Geometric => {
            let mut out = Vec::new();
            let mut p = 1.0 - t;
            let mut x = 0u64;
            // remaining mass after x is t^{x+1}
            loop {
                out.push((x as f64, p));
                if t.powi(x as i32 + 1) <= 1e-14 {
                    break;
                }
                x += 1;
                p *= t;
            }
            out
        }
        FamilyKind::Exponential => {
            let head_panels = ((a / (4.0 * t)).ceil() as usize).max(1);
            let mut nodes = composite_nodes(0.0, a, head_panels, 12);
            nodes.extend(composite_nodes(a, a + 44.0 * t, 11, 12));
            nodes.into_iter().map(|(x, w)| (x, w * (-x / t).exp() / t)).collect()
        }
        FamilyKind::UniformScale => {
            let mut nodes = composite_nodes(0.0, a.min(t), 1, 8);
            nodes.extend(composite_nodes(a, t, 1, 8));
            nodes.into_iter().map(|(x, w)| (x, w / t)).collect()
        }
    }
}

/// Per-unit estimand scale, written out independently of the library.
pub fn scale(fam: &FamilyParam) -> f64 {
    let t = fam.theta();
    match fam.kind() {
        FamilyKind::Geometric => t / (1.0 - t),
        _ => t,
    }
}

pub fn fires(rule: &ThresholdRule, x: f64) -> bool {
    match rule.direction() {
        Direction::AtMost => x <= rule.threshold(),
        Direction::GreaterThan => x > rule.threshold(),
    }
}

pub fn in_b(kind: FamilyKind, rule: &ThresholdRule, xs: &[f64]) -> bool {
    let a = rule.threshold();
    if kind.is_discrete() {
        xs.iter().all(|&x| x >= a.floor() + 1.0)
    } else {
        xs.iter().all(|&x| x > a)
    }
}

/// `Σ over the product grid of g(x) Π w_j`.
pub fn nested_sum(grids: &[Vec<(f64, f64)>], g: &mut dyn FnMut(&[f64]) -> f64) -> f64 {
    fn rec(grids: &[Vec<(f64, f64)>], depth: usize, xs: &mut Vec<f64>, w: f64, g: &mut dyn FnMut(&[f64]) -> f64) -> f64 {
        if depth == grids.len() {
            return w * g(xs);
        }
        let mut acc = 0.0;
        for &(x, wx) in &grids[depth] {
            xs.push(x);
            acc += rec(grids, depth + 1, xs, w * wx, g);
            xs.pop();
        }
        acc
    }
    rec(grids, 0, &mut Vec::with_capacity(grids.len()), 1.0, g)
}

fn grids(fams: &[FamilyParam], rule: &ThresholdRule) -> Vec<Vec<(f64, f64)>> {
    fams.iter().map(|f| expectation_nodes(f, rule.threshold())).collect()
}

fn v_sum(kind: FamilyKind, rule: &ThresholdRule, xs: &[f64]) -> f64 {
    xs.iter().map(|&x| v_component(kind, rule, x).unwrap()).sum()
}

/// Brute-force `E[(V(X) − S)²]` over the full n-dimensional law.
pub fn brute_risk_v(fams: &[FamilyParam], rule: &ThresholdRule) -> f64 {
    let kind = fams[0].kind();
    let scales: Vec<f64> = fams.iter().map(scale).collect();
    nested_sum(&grids(fams, rule), &mut |xs| {
        let s: f64 = xs.iter().zip(&scales).filter(|(&x, _)| fires(rule, x)).map(|(_, &c)| c).sum();
        (v_sum(kind, rule, xs) - s).powi(2)
    })
}

/// Brute-force `E[(V*(X) − S)²]`.
pub fn brute_risk_v_star(fams: &[FamilyParam], rule: &ThresholdRule) -> f64 {
    let kind = fams[0].kind();
    let scales: Vec<f64> = fams.iter().map(scale).collect();
    nested_sum(&grids(fams, rule), &mut |xs| {
        let s: f64 = xs.iter().zip(&scales).filter(|(&x, _)| fires(rule, x)).map(|(_, &c)| c).sum();
        let v = if in_b(kind, rule, xs) { 0.0 } else { v_sum(kind, rule, xs) };
        (v - s).powi(2)
    })
}

/// Brute-force `E[V² · 1_B]`.
pub fn brute_improvement(fams: &[FamilyParam], rule: &ThresholdRule) -> f64 {
    let kind = fams[0].kind();
    nested_sum(&grids(fams, rule), &mut |xs| {
        if in_b(kind, rule, xs) {
            v_sum(kind, rule, xs).powi(2)
        } else {
            0.0
        }
    })
}

/// Poisson improvement by enumerating which components sit exactly at `m`.
pub fn subset_improvement(thetas: &[f64], a: f64) -> f64 {
    let m = a.floor() as u64 + 1;
    let (p, r): (Vec<f64>, Vec<f64>) = thetas
        .iter()
        .map(|&t| {
            let mut pmf = (-t).exp();
            for k in 1..=m {
                pmf *= t / k as f64;
            }
            // upper tail summed directly
            let mut tail = 0.0;
            let mut q = pmf;
            let mut k = m;
            loop {
                k += 1;
                q *= t / k as f64;
                tail += q;
                if k as f64 > t && q < 1e-300_f64.max(tail * 1e-18) {
                    break;
                }
            }
            (pmf, tail)
        })
        .unzip();
    let n = thetas.len();
    let mut total = 0.0;
    for mask in 1u32..(1 << n) {
        let size = mask.count_ones() as f64;
        let mut prob = 1.0;
        for j in 0..n {
            prob *= if mask & (1 << j) != 0 { p[j] } else { r[j] };
        }
        total += size * size * prob;
    }
    (m * m) as f64 * total
}

/// Oracle expectations `(E V, E S)` for one observation.
pub fn unbiasedness_pair(fam: &FamilyParam, rule: &ThresholdRule) -> (f64, f64) {
    let nodes = expectation_nodes(fam, rule.threshold());
    let ev: f64 = nodes.iter().map(|&(x, w)| v_component(fam.kind(), rule, x).unwrap() * w).sum();
    let es: f64 = nodes.iter().filter(|(x, _)| fires(rule, *x)).map(|&(_, w)| scale(fam) * w).sum();
    (ev, es)
}

/// Families and parameters exercised by the property suites.
pub fn design_grid(kind: FamilyKind, a: f64) -> Vec<FamilyParam> {
    let m = a.floor() + 1.0;
    let thetas: Vec<f64> = match kind {
        FamilyKind::Poisson => vec![0.5, 1.0, 2.0, m, 5.0, 10.0],
        FamilyKind::Geometric => vec![0.1, 0.5, 0.9],
        FamilyKind::Exponential => vec![0.5, 1.0, 3.0],
        FamilyKind::UniformScale => vec![0.5, 2.0, 10.0],
    };
    thetas.into_iter().map(|t| FamilyParam::new(kind, t).unwrap()).collect()
}

pub const THRESHOLDS: [f64; 5] = [0.0, 1.0, 2.5, 3.0, 9.0];

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}
