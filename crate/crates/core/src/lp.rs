//! Bounded-variable revised simplex with exact dual values.
//!
//! Problems are stated as `min c'x` subject to sparse rows `a_i x {<=,=,>=} b_i`
//! and column bounds `l <= x <= u` (either side may be infinite). Internally
//! every row gets a logical variable `r_i = a_i x` whose bounds encode the
//! sense, so the working system is `A x - r = 0` and the all-logical basis
//! `-I` is always a valid starting point.
//!
//! The basis inverse is kept as a dense column-major matrix with product-form
//! rank-one updates. That is the right trade for the instance sizes here (a
//! few thousand rows at most) and keeps the dual values exact up to the
//! refinement tolerances.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::{self, Write};

use crate::math::abs;

const INF: f64 = f64::INFINITY;
/// Entries of the basis inverse and of transformed columns below this are
/// round-off and get dropped to keep both sparse.
const DROP: f64 = 1e-14;

/// Row sense.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub cost: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub name: String,
    pub coeffs: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

/// A minimization LP with bounded columns and sparse rows.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LpProblem {
    pub columns: Vec<Column>,
    pub rows: Vec<Row>,
}

impl LpProblem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn add_column(&mut self, name: impl Into<String>, cost: f64, lower: f64, upper: f64) -> usize {
        self.columns.push(Column {
            name: name.into(),
            cost,
            lower,
            upper,
        });
        self.columns.len() - 1
    }

    pub fn add_row(
        &mut self,
        name: impl Into<String>,
        coeffs: impl IntoIterator<Item = (usize, f64)>,
        sense: Sense,
        rhs: f64,
    ) -> usize {
        self.rows.push(Row {
            name: name.into(),
            coeffs: coeffs.into_iter().collect(),
            sense,
            rhs,
        });
        self.rows.len() - 1
    }

    /// Checks the structural invariants: ordered finite-sided bounds, finite
    /// costs and right-hand sides, valid column references.
    pub fn check(&self) -> Result<(), LpError> {
        for (j, c) in self.columns.iter().enumerate() {
            if !c.cost.is_finite() {
                return Err(LpError::IllFormed(format!("column {j} ({}) has non-finite cost", c.name)));
            }
            if c.lower.is_nan() || c.upper.is_nan() || c.lower > c.upper || c.lower == INF || c.upper == -INF {
                return Err(LpError::IllFormed(format!(
                    "column {j} ({}) has invalid bounds [{}, {}]",
                    c.name, c.lower, c.upper
                )));
            }
        }
        for (i, r) in self.rows.iter().enumerate() {
            if !r.rhs.is_finite() {
                return Err(LpError::IllFormed(format!("row {i} ({}) has non-finite rhs", r.name)));
            }
            for &(j, v) in &r.coeffs {
                if j >= self.columns.len() {
                    return Err(LpError::IllFormed(format!("row {i} ({}) references column {j}", r.name)));
                }
                if !v.is_finite() {
                    return Err(LpError::IllFormed(format!("row {i} ({}) has non-finite coefficient", r.name)));
                }
            }
        }
        Ok(())
    }

    /// Row activities `a_i x`.
    pub fn activities(&self, x: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|r| r.coeffs.iter().map(|&(j, v)| v * x[j]).sum())
            .collect()
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        self.columns.iter().zip(x).map(|(c, v)| c.cost * v).sum()
    }

    /// Renders the problem in CPLEX LP text format for cross-checking with
    /// external solvers. Names are sanitized to `[A-Za-z0-9_]`.
    pub fn to_lp_format(&self) -> String {
        fn name(s: &str, fallback: &str, idx: usize) -> String {
            let mut out: String = s
                .chars()
                .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
                .collect();
            if out.is_empty() || out.starts_with(|c: char| c.is_ascii_digit()) {
                out = format!("{fallback}{idx}_{out}");
            }
            out
        }
        fn term(out: &mut String, first: &mut bool, coef: f64, var: &str) {
            if *first {
                let _ = write!(out, " {coef:e} {var}");
                *first = false;
            } else if coef < 0.0 {
                let _ = write!(out, " - {:e} {var}", -coef);
            } else {
                let _ = write!(out, " + {coef:e} {var}");
            }
        }
        let names: Vec<String> = self.columns.iter().enumerate().map(|(j, c)| name(&c.name, "x", j)).collect();
        let mut out = String::from("\\ generated by h2chain-core\nMinimize\n obj:");
        let mut first = true;
        for (j, c) in self.columns.iter().enumerate() {
            if c.cost != 0.0 {
                term(&mut out, &mut first, c.cost, &names[j]);
            }
        }
        if first {
            out.push_str(" 0");
        }
        out.push_str("\nSubject To\n");
        for (i, r) in self.rows.iter().enumerate() {
            let _ = write!(out, " {}:", name(&r.name, "c", i));
            let mut first = true;
            for &(j, v) in &r.coeffs {
                term(&mut out, &mut first, v, &names[j]);
            }
            if first {
                out.push_str(" 0");
            }
            let op = match r.sense {
                Sense::Le => "<=",
                Sense::Eq => "=",
                Sense::Ge => ">=",
            };
            let _ = writeln!(out, " {op} {:e}", r.rhs);
        }
        out.push_str("Bounds\n");
        for (j, c) in self.columns.iter().enumerate() {
            let n = &names[j];
            match (c.lower.is_finite(), c.upper.is_finite()) {
                (true, true) if c.lower == c.upper => {
                    let _ = writeln!(out, " {n} = {:e}", c.lower);
                }
                (true, true) => {
                    let _ = writeln!(out, " {:e} <= {n} <= {:e}", c.lower, c.upper);
                }
                (true, false) => {
                    let _ = writeln!(out, " {n} >= {:e}", c.lower);
                }
                (false, true) => {
                    let _ = writeln!(out, " -inf <= {n} <= {:e}", c.upper);
                }
                (false, false) => {
                    let _ = writeln!(out, " {n} free");
                }
            }
        }
        out.push_str("End\n");
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solver result. `duals[i]` is the derivative of the optimal objective with
/// respect to `rows[i].rhs`; `reduced_costs[j]` is `c_j - y'a_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub primal: Vec<f64>,
    pub duals: Vec<f64>,
    pub reduced_costs: Vec<f64>,
    pub objective_value: f64,
    pub iterations: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpError {
    IllFormed(String),
    /// Residual targets could not be met after refinement; the instance
    /// probably needs rescaling.
    NumericalFailure(String),
    IterationLimit(usize),
    /// Parametric analysis needs an equality row.
    NotAnEqualityRow(usize),
}

impl fmt::Display for LpError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LpError::IllFormed(m) => write!(f, "ill-formed LP: {m}"),
            LpError::NumericalFailure(m) => write!(f, "numerical failure: {m}"),
            LpError::IterationLimit(n) => write!(f, "iteration limit of {n} reached"),
            LpError::NotAnEqualityRow(i) => write!(f, "row {i} is not an equality row"),
        }
    }
}

impl core::error::Error for LpError {}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Primal and dual feasibility tolerance.
    pub feasibility_tol: f64,
    /// Smallest admissible pivot magnitude.
    pub pivot_tol: f64,
    pub max_iterations: usize,
    /// Consecutive degenerate pivots before switching to Bland's rule.
    pub bland_after: usize,
    /// Iterations between full refreshes of duals and basic values.
    pub refresh_every: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            feasibility_tol: 1e-8,
            pivot_tol: 1e-10,
            max_iterations: 200_000,
            bland_after: 60,
            refresh_every: 80,
        }
    }
}

/// Optimality residuals of a solution, all in the problem's own units.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Residuals {
    /// Largest bound or row violation.
    pub primal: f64,
    /// Largest reduced-cost or row-dual sign violation.
    pub dual: f64,
    /// `|primal objective - dual objective|`.
    pub gap: f64,
    /// Largest `|dual * slack|` over rows and `|d_j * (x_j - bound)|` over columns.
    pub complementarity: f64,
    pub dual_objective: f64,
}

/// Recomputes every optimality residual of `sol` from scratch.
pub fn residuals(p: &LpProblem, sol: &LpSolution) -> Residuals {
    let x = &sol.primal;
    let y = &sol.duals;
    let act = p.activities(x);
    let mut res = Residuals::default();
    for (j, c) in p.columns.iter().enumerate() {
        res.primal = res.primal.max(c.lower - x[j]).max(x[j] - c.upper);
    }
    let mut dual_obj = 0.0;
    for (i, r) in p.rows.iter().enumerate() {
        let viol = match r.sense {
            Sense::Le => act[i] - r.rhs,
            Sense::Ge => r.rhs - act[i],
            Sense::Eq => abs(act[i] - r.rhs),
        };
        res.primal = res.primal.max(viol);
        let dual_viol = match r.sense {
            Sense::Le => y[i],
            Sense::Ge => -y[i],
            Sense::Eq => 0.0,
        };
        res.dual = res.dual.max(dual_viol);
        res.complementarity = res.complementarity.max(abs(y[i] * (act[i] - r.rhs)));
        dual_obj += y[i] * r.rhs;
    }
    // reduced costs against the reported duals
    let mut d: Vec<f64> = p.columns.iter().map(|c| c.cost).collect();
    for (i, r) in p.rows.iter().enumerate() {
        for &(j, v) in &r.coeffs {
            d[j] -= y[i] * v;
        }
    }
    for (j, c) in p.columns.iter().enumerate() {
        let dj = d[j];
        // Dual objective picks whichever finite bound prices the reduced cost.
        if dj > 0.0 {
            if c.lower.is_finite() {
                dual_obj += dj * c.lower;
                res.complementarity = res.complementarity.max(abs(dj * (x[j] - c.lower)));
            } else {
                res.dual = res.dual.max(dj);
            }
        } else if dj < 0.0 {
            if c.upper.is_finite() {
                dual_obj += dj * c.upper;
                res.complementarity = res.complementarity.max(abs(dj * (c.upper - x[j])));
            } else {
                res.dual = res.dual.max(-dj);
            }
        }
    }
    res.dual_objective = dual_obj;
    res.gap = abs(sol.objective_value - dual_obj);
    res
}

pub fn solve(p: &LpProblem) -> Result<LpSolution, LpError> {
    solve_with(p, &SolverOptions::default())
}

pub fn solve_with(p: &LpProblem, opts: &SolverOptions) -> Result<LpSolution, LpError> {
    p.check()?;
    let mut s = Simplex::new(p, opts);
    let status = s.run()?;
    Ok(s.solution(p, status))
}

/// One linear piece of the optimal value as a function of one equality
/// row's right-hand side.
#[derive(Debug, Clone, PartialEq)]
pub struct RhsSegment {
    pub rhs_start: f64,
    pub rhs_end: f64,
    /// Constant dual value (slope of the optimal objective) on the piece.
    pub dual: f64,
    pub primal_start: Vec<f64>,
    pub primal_end: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParametricPath {
    pub initial: LpSolution,
    pub segments: Vec<RhsSegment>,
    /// True when the path stopped because larger right-hand sides are
    /// infeasible rather than because `target` was reached.
    pub exhausted: bool,
}

/// Solves `p` and then traces the optimal objective as the right-hand side
/// of equality row `row` grows from its stated value up to `target`,
/// following the optimal basis with dual simplex pivots. Zero-length pieces
/// are dropped.
pub fn parametric_rhs(
    p: &LpProblem,
    row: usize,
    target: f64,
    opts: &SolverOptions,
) -> Result<ParametricPath, LpError> {
    p.check()?;
    if row >= p.rows.len() || p.rows[row].sense != Sense::Eq {
        return Err(LpError::NotAnEqualityRow(row));
    }
    let mut s = Simplex::new(p, opts);
    let status = s.run()?;
    let initial = s.solution(p, status);
    if status != LpStatus::Optimal {
        return Ok(ParametricPath {
            initial,
            segments: Vec::new(),
            exhausted: status == LpStatus::Infeasible,
        });
    }
    let (segments, exhausted) = s.trace_rhs(row, target)?;
    Ok(ParametricPath {
        initial,
        segments,
        exhausted,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Basic,
    Lower,
    Upper,
    /// Nonbasic free variable held at zero.
    Zero,
}

struct Simplex<'a> {
    opts: &'a SolverOptions,
    m: usize,
    n: usize,
    col_ptr: Vec<usize>,
    col_row: Vec<usize>,
    col_val: Vec<f64>,
    cost: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    x: Vec<f64>,
    state: Vec<State>,
    head: Vec<usize>,
    /// Column-major `m x m` basis inverse.
    binv: Vec<f64>,
    weights: Vec<f64>,
    iterations: usize,
    since_refresh: usize,
}

enum PhaseOutcome {
    Optimal,
    Infeasible,
    Unbounded,
}

impl<'a> Simplex<'a> {
    fn new(p: &LpProblem, opts: &'a SolverOptions) -> Self {
        let m = p.rows.len();
        let n = p.columns.len();
        let mut counts = vec![0usize; n + 1];
        for r in &p.rows {
            for &(j, _) in &r.coeffs {
                counts[j + 1] += 1;
            }
        }
        for j in 0..n {
            counts[j + 1] += counts[j];
        }
        let col_ptr = counts.clone();
        let mut fill = counts;
        let nnz = col_ptr[n];
        let mut col_row = vec![0usize; nnz];
        let mut col_val = vec![0.0; nnz];
        for (i, r) in p.rows.iter().enumerate() {
            for &(j, v) in &r.coeffs {
                let k = fill[j];
                col_row[k] = i;
                col_val[k] = v;
                fill[j] += 1;
            }
        }
        let mut cost = Vec::with_capacity(n + m);
        let mut lower = Vec::with_capacity(n + m);
        let mut upper = Vec::with_capacity(n + m);
        for c in &p.columns {
            cost.push(c.cost);
            lower.push(c.lower);
            upper.push(c.upper);
        }
        for r in &p.rows {
            cost.push(0.0);
            let (l, u) = match r.sense {
                Sense::Le => (-INF, r.rhs),
                Sense::Ge => (r.rhs, INF),
                Sense::Eq => (r.rhs, r.rhs),
            };
            lower.push(l);
            upper.push(u);
        }
        let mut x = vec![0.0; n + m];
        let mut state = vec![State::Basic; n + m];
        for j in 0..n {
            let (st, v) = nonbasic_start(lower[j], upper[j]);
            state[j] = st;
            x[j] = v;
        }
        let head: Vec<usize> = (n..n + m).collect();
        let mut binv = vec![0.0; m * m];
        for i in 0..m {
            binv[i * m + i] = -1.0;
        }
        let mut s = Self {
            opts,
            m,
            n,
            col_ptr,
            col_row,
            col_val,
            cost,
            lower,
            upper,
            x,
            state,
            head,
            binv,
            weights: vec![1.0; n + m],
            iterations: 0,
            since_refresh: 0,
        };
        s.recompute_basics();
        s
    }

    fn for_col(&self, j: usize, mut f: impl FnMut(usize, f64)) {
        if j < self.n {
            for k in self.col_ptr[j]..self.col_ptr[j + 1] {
                f(self.col_row[k], self.col_val[k]);
            }
        } else {
            f(j - self.n, -1.0);
        }
    }

    fn col_dot(&self, j: usize, y: &[f64]) -> f64 {
        let mut s = 0.0;
        self.for_col(j, |i, v| s += v * y[i]);
        s
    }

    /// `out = B^-1 a_j`.
    fn ftran(&self, j: usize, out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        let m = self.m;
        self.for_col(j, |i, v| {
            let col = &self.binv[i * m..(i + 1) * m];
            for (o, b) in out.iter_mut().zip(col) {
                *o += v * b;
            }
        });
        for o in out.iter_mut() {
            if abs(*o) < DROP {
                *o = 0.0;
            }
        }
    }

    /// `y' = c_B' B^-1`.
    fn btran(&self, cb: &[f64], y: &mut [f64]) {
        let m = self.m;
        let nz: Vec<(usize, f64)> = cb.iter().copied().enumerate().filter(|&(_, c)| c != 0.0).collect();
        for k in 0..m {
            let col = &self.binv[k * m..(k + 1) * m];
            y[k] = nz.iter().map(|&(i, c)| col[i] * c).sum();
        }
    }

    fn binv_row(&self, r: usize, out: &mut [f64]) {
        let m = self.m;
        for k in 0..m {
            out[k] = self.binv[k * m + r];
        }
    }

    fn update_inverse(&mut self, r: usize, alpha: &[f64]) {
        let m = self.m;
        let piv = alpha[r];
        let nz: Vec<usize> = (0..m).filter(|&i| i != r && alpha[i] != 0.0).collect();
        for k in 0..m {
            let col = &mut self.binv[k * m..(k + 1) * m];
            let br = col[r];
            if br == 0.0 {
                continue;
            }
            let t = br / piv;
            if abs(t) < DROP {
                col[r] = 0.0;
                continue;
            }
            col[r] = t;
            for &i in &nz {
                col[i] -= alpha[i] * t;
            }
        }
    }

    fn recompute_basics(&mut self) {
        let m = self.m;
        let mut v = vec![0.0; m];
        for j in 0..self.n + m {
            if self.state[j] != State::Basic && self.x[j] != 0.0 {
                let xj = self.x[j];
                self.for_col(j, |i, a| v[i] += a * xj);
            }
        }
        let mut xb = vec![0.0; m];
        for k in 0..m {
            if v[k] == 0.0 {
                continue;
            }
            let col = &self.binv[k * m..(k + 1) * m];
            for (o, b) in xb.iter_mut().zip(col) {
                *o -= b * v[k];
            }
        }
        for (i, &j) in self.head.iter().enumerate() {
            self.x[j] = xb[i];
        }
    }

    /// Rebuilds the basis inverse from scratch by Gauss-Jordan elimination
    /// with partial pivoting.
    fn reinvert(&mut self) -> Result<(), LpError> {
        let m = self.m;
        if m == 0 {
            return Ok(());
        }
        // row-major dense B augmented on the right by I
        let w = 2 * m;
        let mut a = vec![0.0; m * w];
        for (c, &j) in self.head.iter().enumerate() {
            self.for_col(j, |i, v| a[i * w + c] = v);
        }
        for i in 0..m {
            a[i * w + m + i] = 1.0;
        }
        for c in 0..m {
            let mut best = c;
            let mut bv = abs(a[c * w + c]);
            for r in c + 1..m {
                let v = abs(a[r * w + c]);
                if v > bv {
                    bv = v;
                    best = r;
                }
            }
            if bv < 1e-13 {
                return Err(LpError::NumericalFailure(String::from("singular basis on reinversion")));
            }
            if best != c {
                for k in 0..w {
                    a.swap(c * w + k, best * w + k);
                }
            }
            let piv = a[c * w + c];
            for k in 0..w {
                a[c * w + k] /= piv;
            }
            let pivot_row: Vec<(usize, f64)> =
                (c..w).map(|k| (k, a[c * w + k])).filter(|&(_, v)| v != 0.0).collect();
            for r in 0..m {
                if r == c {
                    continue;
                }
                let f = a[r * w + c];
                if f != 0.0 {
                    let row = &mut a[r * w..(r + 1) * w];
                    for &(k, v) in &pivot_row {
                        row[k] -= f * v;
                    }
                }
            }
        }
        // B^-1 rows are basis positions; store column-major
        for i in 0..m {
            for k in 0..m {
                self.binv[k * m + i] = a[i * w + m + k];
            }
        }
        Ok(())
    }

    fn infeasibility(&self, j: usize) -> f64 {
        let tol = self.opts.feasibility_tol;
        let v = self.x[j];
        if v < self.lower[j] - tol {
            -1.0
        } else if v > self.upper[j] + tol {
            1.0
        } else {
            0.0
        }
    }

    fn phase_costs(&self, phase1: bool) -> Vec<f64> {
        self.head
            .iter()
            .map(|&j| if phase1 { self.infeasibility(j) } else { self.cost[j] })
            .collect()
    }

    fn reduced_costs(&self, phase1: bool, y: &[f64]) -> Vec<f64> {
        (0..self.n + self.m)
            .map(|j| {
                if self.state[j] == State::Basic {
                    0.0
                } else {
                    let c = if phase1 { 0.0 } else { self.cost[j] };
                    c - self.col_dot(j, y)
                }
            })
            .collect()
    }

    fn is_candidate(&self, j: usize, d: f64) -> bool {
        let tol = self.opts.feasibility_tol;
        match self.state[j] {
            State::Basic => false,
            State::Lower => d < -tol && self.upper[j] > self.lower[j],
            State::Upper => d > tol && self.upper[j] > self.lower[j],
            State::Zero => abs(d) > tol,
        }
    }

    fn run(&mut self) -> Result<LpStatus, LpError> {
        // A first pass on slightly relaxed bounds breaks the ties that make
        // highly degenerate models stall; later rounds clean up exactly.
        let saved = self.perturb();
        if let Ok(PhaseOutcome::Optimal) = self.primal(true) {
            let _ = self.primal(false);
        }
        self.restore(saved);
        for _ in 0..4 {
            match self.primal(true)? {
                PhaseOutcome::Infeasible => return Ok(LpStatus::Infeasible),
                PhaseOutcome::Unbounded => {
                    return Err(LpError::NumericalFailure(String::from("unbounded phase one")))
                }
                PhaseOutcome::Optimal => {}
            }
            match self.primal(false)? {
                PhaseOutcome::Unbounded => return Ok(LpStatus::Unbounded),
                PhaseOutcome::Infeasible => continue,
                PhaseOutcome::Optimal => {}
            }
            if self.polish()? {
                return Ok(LpStatus::Optimal);
            }
        }
        Err(LpError::NumericalFailure(String::from(
            "residual targets not met after refinement",
        )))
    }

    fn perturb(&mut self) -> (Vec<f64>, Vec<f64>) {
        let saved = (self.lower.clone(), self.upper.clone());
        let mut seed: u64 = 0x9e37_79b9_7f4a_7c15;
        for j in 0..self.n + self.m {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            let u = 0.5 + 0.5 * (seed >> 11) as f64 / (1u64 << 53) as f64;
            if self.lower[j].is_finite() {
                self.lower[j] -= 1e-7 * (1.0 + abs(self.lower[j])) * u;
            }
            if self.upper[j].is_finite() {
                self.upper[j] += 1e-7 * (1.0 + abs(self.upper[j])) * u;
            }
            self.snap(j);
        }
        self.recompute_basics();
        saved
    }

    fn restore(&mut self, saved: (Vec<f64>, Vec<f64>)) {
        self.lower = saved.0;
        self.upper = saved.1;
        for j in 0..self.n + self.m {
            self.snap(j);
        }
        self.recompute_basics();
        self.weights.iter_mut().for_each(|w| *w = 1.0);
    }

    /// Puts a nonbasic variable back on the bound its state names.
    fn snap(&mut self, j: usize) {
        match self.state[j] {
            State::Lower => self.x[j] = self.lower[j],
            State::Upper => self.x[j] = self.upper[j],
            State::Zero | State::Basic => {}
        }
    }

    /// Re-derives basic values and duals from a fresh inverse and reports
    /// whether the basis is still primal and dual feasible.
    fn polish(&mut self) -> Result<bool, LpError> {
        self.reinvert()?;
        self.recompute_basics();
        let tol = self.opts.feasibility_tol;
        for &j in &self.head {
            if self.x[j] < self.lower[j] - tol || self.x[j] > self.upper[j] + tol {
                return Ok(false);
            }
        }
        let cb = self.phase_costs(false);
        let mut y = vec![0.0; self.m];
        self.btran(&cb, &mut y);
        let d = self.reduced_costs(false, &y);
        Ok(!(0..self.n + self.m).any(|j| self.is_candidate(j, d[j])))
    }

    fn primal(&mut self, phase1: bool) -> Result<PhaseOutcome, LpError> {
        let m = self.m;
        let nt = self.n + m;
        let tol = self.opts.feasibility_tol;
        let mut y = vec![0.0; m];
        let mut alpha = vec![0.0; m];
        let mut rho = vec![0.0; m];
        let mut d: Vec<f64> = Vec::new();
        let mut cb_cur: Vec<f64> = Vec::new();
        let mut fresh = true;
        let mut degenerate_run = 0usize;
        self.weights.iter_mut().for_each(|w| *w = 1.0);
        loop {
            if self.iterations >= self.opts.max_iterations {
                return Err(LpError::IterationLimit(self.iterations));
            }
            if fresh || self.since_refresh >= self.opts.refresh_every {
                if self.since_refresh >= self.opts.refresh_every {
                    self.recompute_basics();
                    self.since_refresh = 0;
                }
                let cb = self.phase_costs(phase1);
                if phase1 && cb.iter().all(|&c| c == 0.0) {
                    return Ok(PhaseOutcome::Optimal);
                }
                self.btran(&cb, &mut y);
                d = self.reduced_costs(phase1, &y);
                cb_cur = cb;
                fresh = false;
            } else if phase1 {
                // infeasibility costs change in few positions per pivot;
                // correct y row by row unless too many moved
                let cb = self.phase_costs(true);
                if cb.iter().all(|&c| c == 0.0) {
                    return Ok(PhaseOutcome::Optimal);
                }
                let moved: Vec<usize> = (0..m).filter(|&i| cb[i] != cb_cur[i]).collect();
                if moved.len() * 8 > m {
                    self.btran(&cb, &mut y);
                } else {
                    for &i in &moved {
                        self.binv_row(i, &mut rho);
                        let delta = cb[i] - cb_cur[i];
                        for k in 0..m {
                            y[k] += delta * rho[k];
                        }
                    }
                }
                d = self.reduced_costs(true, &y);
                cb_cur = cb;
            }
            let bland = degenerate_run >= self.opts.bland_after;
            // pricing
            let mut q = usize::MAX;
            let mut best = 0.0;
            for j in 0..nt {
                if !self.is_candidate(j, d[j]) {
                    continue;
                }
                if bland {
                    q = j;
                    break;
                }
                let score = d[j] * d[j] / self.weights[j];
                if score > best {
                    best = score;
                    q = j;
                }
            }
            if q == usize::MAX {
                if phase1 {
                    return Ok(PhaseOutcome::Infeasible);
                }
                return Ok(PhaseOutcome::Optimal);
            }
            let dir = if d[q] < 0.0 {
                1.0
            } else if d[q] > 0.0 {
                -1.0
            } else {
                unreachable!()
            };
            self.ftran(q, &mut alpha);

            // Harris two-pass ratio test; basic i moves by -dir*alpha_i per unit step.
            let mut tmax = INF;
            for i in 0..m {
                let a = alpha[i];
                if abs(a) <= self.opts.pivot_tol {
                    continue;
                }
                let j = self.head[i];
                let delta = -dir * a;
                let v = self.x[j];
                let lim = if delta < 0.0 {
                    if v > self.upper[j] + tol {
                        (v - self.upper[j]) / -delta
                    } else if v >= self.lower[j] - tol {
                        (v - self.lower[j] + tol) / -delta
                    } else {
                        INF
                    }
                } else if v < self.lower[j] - tol {
                    (self.lower[j] - v) / delta
                } else if v <= self.upper[j] + tol {
                    (self.upper[j] + tol - v) / delta
                } else {
                    INF
                };
                if lim < tmax {
                    tmax = lim;
                }
            }
            let range = self.upper[q] - self.lower[q];
            let mut leave = usize::MAX;
            let mut leave_ratio = INF;
            let mut leave_to_upper = false;
            if tmax < INF {
                let mut cands: Vec<(usize, f64, bool, f64)> = Vec::new();
                for i in 0..m {
                    let a = alpha[i];
                    if abs(a) <= self.opts.pivot_tol {
                        continue;
                    }
                    let j = self.head[i];
                    let delta = -dir * a;
                    let v = self.x[j];
                    let (ratio, to_upper) = if delta < 0.0 {
                        if v > self.upper[j] + tol {
                            ((v - self.upper[j]) / -delta, true)
                        } else if v >= self.lower[j] - tol {
                            (((v - self.lower[j]) / -delta).max(0.0), false)
                        } else {
                            continue;
                        }
                    } else if v < self.lower[j] - tol {
                        ((self.lower[j] - v) / delta, false)
                    } else if v <= self.upper[j] + tol {
                        (((self.upper[j] - v) / delta).max(0.0), true)
                    } else {
                        continue;
                    };
                    if ratio <= tmax {
                        cands.push((i, ratio, to_upper, abs(a)));
                    }
                }
                let best_a = cands.iter().fold(0.0f64, |b, c| b.max(c.3));
                for &(i, ratio, to_upper, a) in &cands {
                    let better = if bland {
                        // smallest ratio, then smallest index, among pivots
                        // that are not tiny relative to the best one
                        a >= 1e-2 * best_a
                            && (leave == usize::MAX
                                || ratio < leave_ratio
                                || (ratio == leave_ratio && self.head[i] < self.head[leave]))
                    } else {
                        a == best_a && leave == usize::MAX
                    };
                    if better {
                        leave = i;
                        leave_ratio = ratio;
                        leave_to_upper = to_upper;
                    }
                }
            }
            let flip = range.is_finite() && range <= leave_ratio;
            if leave == usize::MAX && !flip {
                if phase1 {
                    return Err(LpError::NumericalFailure(String::from("phase one ray")));
                }
                return Ok(PhaseOutcome::Unbounded);
            }
            let step = if flip { range } else { leave_ratio };
            if step <= 1e-12 {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            self.iterations += 1;
            self.since_refresh += 1;
            // primal update
            self.x[q] += dir * step;
            for i in 0..m {
                if alpha[i] != 0.0 {
                    let j = self.head[i];
                    self.x[j] -= dir * alpha[i] * step;
                }
            }
            if flip {
                if dir > 0.0 {
                    self.state[q] = State::Upper;
                    self.x[q] = self.upper[q];
                } else {
                    self.state[q] = State::Lower;
                    self.x[q] = self.lower[q];
                }
                continue;
            }
            let r = leave;
            let p = self.head[r];
            // pivot row for dual and weight updates
            self.binv_row(r, &mut rho);
            let arq = alpha[r];
            let theta_d = d[q] / arq;
            let wq = self.weights[q];
            for j in 0..nt {
                if self.state[j] == State::Basic || j == q {
                    continue;
                }
                let arj = self.col_dot(j, &rho);
                if arj == 0.0 {
                    continue;
                }
                if !phase1 {
                    d[j] -= theta_d * arj;
                }
                let ratio = arj / arq;
                let w = ratio * ratio * wq;
                if w > self.weights[j] {
                    self.weights[j] = w;
                }
            }
            self.weights[p] = (wq / (arq * arq)).max(1.0);
            for k in 0..m {
                y[k] += theta_d * rho[k];
            }
            if phase1 {
                cb_cur[r] = 0.0;
            } else {
                d[p] = -theta_d;
                d[q] = 0.0;
            }
            if leave_to_upper {
                self.state[p] = State::Upper;
                self.x[p] = self.upper[p];
            } else {
                self.state[p] = State::Lower;
                self.x[p] = self.lower[p];
            }
            if !self.x[p].is_finite() {
                // a free variable cannot leave at a bound
                self.state[p] = State::Zero;
                self.x[p] = 0.0;
            }
            self.state[q] = State::Basic;
            self.head[r] = q;
            self.update_inverse(r, &alpha);
        }
    }

    fn solution(&mut self, p: &LpProblem, status: LpStatus) -> LpSolution {
        let m = self.m;
        let n = self.n;
        let cb = self.phase_costs(false);
        let mut y = vec![0.0; m];
        self.btran(&cb, &mut y);
        let d = self.reduced_costs(false, &y);
        let primal: Vec<f64> = self.x[..n].to_vec();
        let reduced_costs: Vec<f64> = (0..n)
            .map(|j| if self.state[j] == State::Basic { 0.0 } else { d[j] })
            .collect();
        let objective_value = if status == LpStatus::Optimal { p.objective(&primal) } else { 0.0 };
        LpSolution {
            status,
            primal,
            duals: y,
            reduced_costs,
            objective_value,
            iterations: self.iterations,
        }
    }

    fn trace_rhs(&mut self, row: usize, target: f64) -> Result<(Vec<RhsSegment>, bool), LpError> {
        let m = self.m;
        let n = self.n;
        let tol = self.opts.feasibility_tol;
        let lv = n + row;
        let mut segments = Vec::new();
        let mut alpha = vec![0.0; m];
        let mut rho = vec![0.0; m];
        let mut y = vec![0.0; m];
        let mut t = self.lower[lv];
        let mut pivots = 0usize;
        let mut stalled = 0usize;
        let mut fresh_y = true;
        loop {
            let bland = stalled > self.opts.bland_after;
            if pivots > self.opts.max_iterations {
                return Err(LpError::IterationLimit(pivots));
            }
            if t >= target {
                return Ok((segments, false));
            }
            if fresh_y {
                let cb = self.phase_costs(false);
                self.btran(&cb, &mut y);
                fresh_y = false;
            }
            let mut d = self.reduced_costs(false, &y);
            d[lv] = if self.state[lv] == State::Basic { 0.0 } else { y[row] };

            // The parametric logical must be nonbasic before stepping; if it
            // is basic it leaves at its (rising) lower bound.
            let (r, to_upper) = if self.state[lv] == State::Basic {
                let r = self.head.iter().position(|&j| j == lv).unwrap_or(0);
                (r, false)
            } else {
                // direction of basic values per unit increase of the logical
                self.ftran(lv, &mut alpha);
                let mut step = INF;
                for i in 0..m {
                    let a = alpha[i];
                    if abs(a) <= self.opts.pivot_tol {
                        continue;
                    }
                    let j = self.head[i];
                    let lim = if a < 0.0 {
                        (self.upper[j] - self.x[j]) / -a
                    } else {
                        (self.x[j] - self.lower[j]) / a
                    };
                    step = step.min(lim.max(0.0));
                }
                let mut r = usize::MAX;
                let mut to_upper = false;
                let mut best_a = 0.0;
                if step < INF {
                    for i in 0..m {
                        let a = alpha[i];
                        if abs(a) <= self.opts.pivot_tol {
                            continue;
                        }
                        let j = self.head[i];
                        let lim = if a < 0.0 {
                            (self.upper[j] - self.x[j]) / -a
                        } else {
                            (self.x[j] - self.lower[j]) / a
                        };
                        if lim.max(0.0) > step + 1e-12 * (1.0 + step) {
                            continue;
                        }
                        let better = if bland {
                            r == usize::MAX || j < self.head[r]
                        } else {
                            abs(a) > best_a
                        };
                        if better {
                            best_a = abs(a);
                            r = i;
                            to_upper = a < 0.0;
                        }
                    }
                }
                let end = if target.is_finite() { step.min(target - t) } else { step };
                if !end.is_finite() {
                    return Err(LpError::NumericalFailure(String::from("unbounded parametric ray")));
                }
                let start_x = self.x[..n].to_vec();
                for i in 0..m {
                    if alpha[i] != 0.0 {
                        let j = self.head[i];
                        self.x[j] -= alpha[i] * end;
                    }
                }
                t += end;
                self.lower[lv] = t;
                self.upper[lv] = t;
                self.x[lv] = t;
                if end > 1e-12 * (1.0 + abs(t)) {
                    stalled = 0;
                    segments.push(RhsSegment {
                        rhs_start: t - end,
                        rhs_end: t,
                        dual: y[row],
                        primal_start: start_x,
                        primal_end: self.x[..n].to_vec(),
                    });
                }
                if t >= target || r == usize::MAX {
                    return Ok((segments, false));
                }
                (r, to_upper)
            };

            // dual ratio test on pivot row r
            let p = self.head[r];
            self.binv_row(r, &mut rho);
            let mut tmin = INF;
            let mut row_alpha = vec![0.0; n + m];
            for j in 0..n + m {
                if self.state[j] == State::Basic || j == lv || self.upper[j] <= self.lower[j] {
                    continue;
                }
                let a = self.col_dot(j, &rho);
                row_alpha[j] = a;
                if abs(a) <= self.opts.pivot_tol {
                    continue;
                }
                let eligible = match (self.state[j], to_upper) {
                    (State::Lower, true) => a > 0.0,
                    (State::Upper, true) => a < 0.0,
                    (State::Lower, false) => a < 0.0,
                    (State::Upper, false) => a > 0.0,
                    (State::Zero, _) => true,
                    (State::Basic, _) => false,
                };
                if !eligible {
                    continue;
                }
                let slack = if bland { 0.0 } else { tol };
                let ratio = (abs(d[j]) + slack) / abs(a);
                if ratio < tmin {
                    tmin = ratio;
                }
            }
            let mut q = usize::MAX;
            let mut best_a = 0.0;
            for j in 0..n + m {
                let a = row_alpha[j];
                if a == 0.0 || abs(a) <= self.opts.pivot_tol || self.state[j] == State::Basic {
                    continue;
                }
                let eligible = match (self.state[j], to_upper) {
                    (State::Lower, true) => a > 0.0,
                    (State::Upper, true) => a < 0.0,
                    (State::Lower, false) => a < 0.0,
                    (State::Upper, false) => a > 0.0,
                    (State::Zero, _) => true,
                    (State::Basic, _) => false,
                };
                if !eligible {
                    continue;
                }
                if abs(d[j]) / abs(a) > tmin {
                    continue;
                }
                if bland {
                    if q == usize::MAX {
                        q = j;
                    }
                } else if abs(a) > best_a {
                    best_a = abs(a);
                    q = j;
                }
            }
            if q == usize::MAX {
                // no entering candidate: larger right-hand sides are infeasible
                return Ok((segments, true));
            }
            self.ftran(q, &mut alpha);
            if abs(alpha[r]) <= self.opts.pivot_tol {
                return Err(LpError::NumericalFailure(String::from("tiny parametric pivot")));
            }
            if to_upper {
                self.state[p] = State::Upper;
                self.x[p] = self.upper[p];
            } else {
                self.state[p] = State::Lower;
                self.x[p] = self.lower[p];
            }
            let theta_d = d[q] / row_alpha[q];
            for k in 0..m {
                y[k] += theta_d * rho[k];
            }
            self.state[q] = State::Basic;
            self.head[r] = q;
            self.update_inverse(r, &alpha);
            pivots += 1;
            stalled += 1;
            self.iterations += 1;
            self.recompute_basics();
            if pivots % self.opts.refresh_every == 0 {
                fresh_y = true;
            }
            if pivots % 200 == 0 {
                self.reinvert()?;
                self.recompute_basics();
            }
        }
    }
}

fn nonbasic_start(l: f64, u: f64) -> (State, f64) {
    if l.is_finite() {
        (State::Lower, l)
    } else if u.is_finite() {
        (State::Upper, u)
    } else {
        (State::Zero, 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_sound(p: &LpProblem, sol: &LpSolution) {
        let r = residuals(p, sol);
        let scale = 1.0 + abs(sol.objective_value);
        assert!(r.primal <= 1e-8 * scale, "primal residual {r:?}");
        assert!(r.dual <= 1e-8 * scale, "dual residual {r:?}");
        assert!(r.gap <= 1e-8 * scale, "gap {r:?}");
    }

    #[test]
    fn single_lower_bound_row() {
        let mut p = LpProblem::new();
        let x = p.add_column("x", 1.0, 0.0, 10.0);
        p.add_row("floor", vec![(x, 1.0)], Sense::Ge, 3.0);
        let s = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!(abs(s.primal[0] - 3.0) < 1e-12);
        assert!(abs(s.duals[0] - 1.0) < 1e-12);
        assert_sound(&p, &s);
    }

    #[test]
    fn facet_optimum_satisfies_strong_duality() {
        let mut p = LpProblem::new();
        let x = p.add_column("x", -1.0, 0.0, 1.0);
        let y = p.add_column("y", -1.0, 0.0, 1.0);
        p.add_row("cap", vec![(x, 1.0), (y, 1.0)], Sense::Le, 1.0);
        let s = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!(abs(s.objective_value + 1.0) < 1e-12);
        assert_sound(&p, &s);
    }

    #[test]
    fn empty_problem_is_optimal_at_zero() {
        let s = solve(&LpProblem::new()).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.objective_value, 0.0);
    }

    #[test]
    fn detects_infeasibility() {
        let mut p = LpProblem::new();
        let x = p.add_column("x", 1.0, 0.0, 1.0);
        p.add_row("r", vec![(x, 1.0)], Sense::Ge, 2.0);
        assert_eq!(solve(&p).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn detects_unboundedness() {
        let mut p = LpProblem::new();
        let x = p.add_column("x", -1.0, 0.0, INF);
        let y = p.add_column("y", 0.0, 0.0, INF);
        p.add_row("r", vec![(x, 1.0), (y, -1.0)], Sense::Le, 1.0);
        assert_eq!(solve(&p).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn free_columns_and_equalities() {
        // min x + 2y, x - y = 1, x + y >= 3, x, y free
        let mut p = LpProblem::new();
        let x = p.add_column("x", 1.0, -INF, INF);
        let y = p.add_column("y", 2.0, -INF, INF);
        p.add_row("e", vec![(x, 1.0), (y, -1.0)], Sense::Eq, 1.0);
        p.add_row("g", vec![(x, 1.0), (y, 1.0)], Sense::Ge, 3.0);
        let s = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert!(abs(s.primal[0] - 2.0) < 1e-10 && abs(s.primal[1] - 1.0) < 1e-10);
        assert_sound(&p, &s);
    }

    #[test]
    fn rejects_ill_formed_bounds() {
        let mut p = LpProblem::new();
        p.add_column("x", 1.0, 2.0, 1.0);
        assert!(matches!(solve(&p), Err(LpError::IllFormed(_))));
    }

    #[test]
    fn parametric_path_matches_pointwise_duals() {
        // min x + 3y, x + y = b, x <= 2: slope 1 up to b = 2, then 3.
        let mut p = LpProblem::new();
        let x = p.add_column("x", 1.0, 0.0, 2.0);
        let y = p.add_column("y", 3.0, 0.0, INF);
        p.add_row("b", vec![(x, 1.0), (y, 1.0)], Sense::Eq, 0.5);
        let path = parametric_rhs(&p, 0, 5.0, &SolverOptions::default()).unwrap();
        assert_eq!(path.segments.len(), 2);
        assert!(abs(path.segments[0].dual - 1.0) < 1e-12);
        assert!(abs(path.segments[0].rhs_end - 2.0) < 1e-12);
        assert!(abs(path.segments[1].dual - 3.0) < 1e-12);
        assert!(abs(path.segments[1].rhs_end - 5.0) < 1e-12);
        assert!(!path.exhausted);
    }

    #[test]
    fn parametric_path_reports_exhaustion() {
        let mut p = LpProblem::new();
        let x = p.add_column("x", 1.0, 0.0, 2.0);
        let y = p.add_column("y", 3.0, 0.0, 1.0);
        p.add_row("b", vec![(x, 1.0), (y, 1.0)], Sense::Eq, 0.0);
        let path = parametric_rhs(&p, 0, 10.0, &SolverOptions::default()).unwrap();
        assert!(path.exhausted);
        let last = path.segments.last().unwrap();
        assert!(abs(last.rhs_end - 3.0) < 1e-12);
    }

    #[test]
    fn lp_format_lists_every_section() {
        let mut p = LpProblem::new();
        let x = p.add_column("cap el", 2.0, 0.0, INF);
        p.add_row("demand", vec![(x, 1.0)], Sense::Ge, 1.0);
        let text = p.to_lp_format();
        for key in ["Minimize", "Subject To", "Bounds", "End", "cap_el", "demand:"] {
            assert!(text.contains(key), "{key} missing from\n{text}");
        }
    }
}
