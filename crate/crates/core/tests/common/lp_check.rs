//! Independent checks for LP solutions: a vertex-enumeration oracle for tiny
//! problems and an optimality certificate built from the problem data.

use h2chain_core::lp::{LpProblem, LpSolution, Sense};
use rand::rngs::StdRng;
use rand::Rng;

/// Random LP with finite bounds on every column and a feasible point built in.
pub fn random_lp(rng: &mut StdRng, n: usize, m: usize) -> LpProblem {
    let mut p = LpProblem::new();
    let mut x0 = Vec::new();
    for j in 0..n {
        let lo = rng.gen_range(-5.0..0.0f64).round();
        let hi = lo + rng.gen_range(0.5..10.0f64);
        p.add_column(format!("x{j}"), rng.gen_range(-5.0..5.0), lo, hi);
        x0.push(rng.gen_range(lo..hi));
    }
    for i in 0..m {
        let mut coeffs: Vec<(usize, f64)> = Vec::new();
        for j in 0..n {
            if rng.gen_bool(0.8) {
                coeffs.push((j, rng.gen_range(-3.0..3.0)));
            }
        }
        let act: f64 = coeffs.iter().map(|&(j, a)| a * x0[j]).sum();
        let (sense, rhs) = match rng.gen_range(0..3) {
            0 => (Sense::Le, act + rng.gen_range(0.0..2.0)),
            1 => (Sense::Ge, act - rng.gen_range(0.0..2.0)),
            _ => (Sense::Eq, act),
        };
        p.add_row(format!("r{i}"), coeffs, sense, rhs);
    }
    p
}

/// Dense solve of a square system by Gaussian elimination with partial
/// pivoting; `None` when (nearly) singular.
pub fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for c in 0..n {
        let piv = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[piv][c].abs() < 1e-9 {
            return None;
        }
        a.swap(c, piv);
        b.swap(c, piv);
        for r in 0..n {
            if r != c {
                let f = a[r][c] / a[c][c];
                for k in c..n {
                    a[r][k] -= f * a[c][k];
                }
                b[r] -= f * b[c];
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

pub fn feasible(p: &LpProblem, x: &[f64], tol: f64) -> bool {
    let bounds = p.columns.iter().zip(x).all(|(c, &v)| v >= c.lower - tol && v <= c.upper + tol);
    bounds
        && p.rows.iter().all(|r| {
            let act: f64 = r.coeffs.iter().map(|&(j, a)| a * x[j]).sum();
            match r.sense {
                Sense::Le => act <= r.rhs + tol,
                Sense::Ge => act >= r.rhs - tol,
                Sense::Eq => (act - r.rhs).abs() <= tol,
            }
        })
}

/// Minimum over all vertices: every choice of n linearly independent
/// constraints (rows or bounds) taken as equalities.
pub fn vertex_oracle(p: &LpProblem) -> Option<f64> {
    let n = p.columns.len();
    let mut planes: Vec<(Vec<f64>, f64)> = Vec::new();
    for r in &p.rows {
        let mut a = vec![0.0; n];
        for &(j, v) in &r.coeffs {
            a[j] += v;
        }
        planes.push((a, r.rhs));
    }
    for (j, c) in p.columns.iter().enumerate() {
        for b in [c.lower, c.upper] {
            let mut a = vec![0.0; n];
            a[j] = 1.0;
            planes.push((a, b));
        }
    }
    let mut best: Option<f64> = None;
    let k = planes.len();
    let mut pick: Vec<usize> = (0..n).collect();
    loop {
        let a = pick.iter().map(|&i| planes[i].0.clone()).collect();
        let b = pick.iter().map(|&i| planes[i].1).collect();
        if let Some(x) = solve_dense(a, b) {
            if feasible(p, &x, 1e-9) {
                let obj: f64 = p.columns.iter().zip(&x).map(|(c, v)| c.cost * v).sum();
                best = Some(best.map_or(obj, |b: f64| b.min(obj)));
            }
        }
        // next n-combination of k planes
        let mut i = n;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if pick[i] < k - n + i {
                pick[i] += 1;
                for t in i + 1..n {
                    pick[t] = pick[t - 1] + 1;
                }
                break;
            }
        }
    }
}

pub struct Check {
    pub gap: f64,
    pub slackness: f64,
    pub sign: f64,
}

/// Optimality certificate recomputed from the problem data alone.
pub fn certificate(p: &LpProblem, sol: &LpSolution) -> Check {
    let x = &sol.primal;
    let y = &sol.duals;
    let mut d: Vec<f64> = p.columns.iter().map(|c| c.cost).collect();
    let mut dual_obj = 0.0;
    let mut slackness = 0.0f64;
    let mut sign = 0.0f64;
    for (i, r) in p.rows.iter().enumerate() {
        let act: f64 = r.coeffs.iter().map(|&(j, a)| a * x[j]).sum();
        for &(j, a) in &r.coeffs {
            d[j] -= y[i] * a;
        }
        dual_obj += y[i] * r.rhs;
        slackness = slackness.max((y[i] * (act - r.rhs)).abs());
        sign = sign.max(match r.sense {
            Sense::Le => y[i],
            Sense::Ge => -y[i],
            Sense::Eq => 0.0,
        });
    }
    for (j, c) in p.columns.iter().enumerate() {
        if d[j] > 0.0 {
            dual_obj += d[j] * c.lower;
            slackness = slackness.max((d[j] * (x[j] - c.lower)).abs());
        } else {
            dual_obj += d[j] * c.upper;
            slackness = slackness.max((d[j] * (c.upper - x[j])).abs());
        }
    }
    let primal: f64 = p.columns.iter().zip(x).map(|(c, v)| c.cost * v).sum();
    Check {
        gap: (primal - dual_obj).abs() / (1.0 + primal.abs()),
        slackness,
        sign,
    }
}
