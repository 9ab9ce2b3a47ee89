//! Dense phase-1 simplex for linear feasibility:
//! does `A x = b`, with a chosen subset of variables constrained nonnegative,
//! have a solution?
//!
//! Free variables are split into differences of nonnegatives, rows are sign-
//! and scale-normalized, and an artificial basis is driven to zero cost under
//! Bland's rule, which makes the pivot sequence deterministic and cycle-free.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub feasible: bool,
    /// A feasible point in the ORIGINAL variables, when one exists.
    pub witness: Option<Vec<f64>>,
}

const MAX_PIVOTS: usize = 200_000;

/// Feasibility of `a x = b` with `x[i] >= 0` exactly where `nonneg[i]`.
pub fn lp_feasible(
    a: &[Vec<f64>],
    b: &[f64],
    nonneg: &[bool],
    tol_lp: f64,
) -> Result<LpSolution> {
    let m = a.len();
    if b.len() != m {
        return Err(Error::DimensionMismatch("lp right-hand side".into()));
    }
    let n = nonneg.len();
    for row in a {
        if row.len() != n {
            return Err(Error::DimensionMismatch("lp row length".into()));
        }
        if row.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("lp coefficient".into()));
        }
    }
    if b.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("lp right-hand side".into()));
    }
    // Rows whose coefficients and right-hand side are all negligible at the
    // system's global magnitude are satisfied by every candidate to within
    // the feasibility tolerance. They must be dropped here: the per-row
    // normalization below would otherwise blow pure roundoff up into O(1)
    // constraints and poison the feasibility answer.
    let global = a
        .iter()
        .flatten()
        .chain(b.iter())
        .fold(0.0f64, |acc, x| acc.max(x.abs()));
    let floor = global * tol_lp;
    let active: Vec<usize> = (0..m)
        .filter(|&r| a[r].iter().fold(b[r].abs(), |acc, x| acc.max(x.abs())) > floor)
        .collect();
    let m = active.len();
    if m == 0 {
        return Ok(LpSolution { feasible: true, witness: Some(vec![0.0; n]) });
    }

    // Split free variables x_i = u_i - v_i; column map records the origin.
    // cols: for each original i -> u column; free ones also get a v column.
    let mut col_of_u = vec![0usize; n];
    let mut col_of_v = vec![usize::MAX; n];
    let mut ncols = 0usize;
    for i in 0..n {
        col_of_u[i] = ncols;
        ncols += 1;
        if !nonneg[i] {
            col_of_v[i] = ncols;
            ncols += 1;
        }
    }

    // Tableau: m rows, ncols structural + m artificial + 1 rhs.
    let total = ncols + m;
    let mut t = vec![vec![0.0f64; total + 1]; m];
    for (r, &src) in active.iter().enumerate() {
        let flip = if b[src] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            let v = flip * a[src][i];
            t[r][col_of_u[i]] = v;
            if col_of_v[i] != usize::MAX {
                t[r][col_of_v[i]] = -v;
            }
        }
        t[r][total] = flip * b[src];
        // row scaling to unit max magnitude keeps the tolerance meaningful
        let mx = t[r][..total].iter().fold(t[r][total].abs(), |acc, x| acc.max(x.abs()));
        if mx > 0.0 {
            for x in t[r].iter_mut() {
                *x /= mx;
            }
        }
        t[r][ncols + r] = 1.0; // artificial, after scaling so it stays 1
    }

    // Phase-1 objective: minimize sum of artificials. Reduced-cost row for
    // the starting artificial basis: z_j = sum of rows (for structural j),
    // cost_j = -sum_r t[r][j]; rhs cost = -sum_r rhs.
    let mut cost = vec![0.0f64; total + 1];
    for r in 0..m {
        for j in 0..=total {
            cost[j] -= t[r][j];
        }
    }
    for r in 0..m {
        cost[ncols + r] = 0.0;
    }
    let mut basis: Vec<usize> = (0..m).map(|r| ncols + r).collect();

    let mut pivots = 0usize;
    loop {
        // Bland: first column with negative reduced cost
        let Some(enter) = (0..total).find(|&j| cost[j] < -tol_lp) else {
            break;
        };
        // ratio test; Bland tie-break on smallest basis variable index
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for r in 0..m {
            if t[r][enter] > tol_lp {
                let ratio = t[r][total] / t[r][enter];
                let better = ratio < best - 1e-15
                    || ((ratio - best).abs() <= 1e-15
                        && leave.map(|l| basis[r] < basis[l]).unwrap_or(true));
                if better {
                    best = ratio;
                    leave = Some(r);
                }
            }
        }
        let Some(lr) = leave else {
            // phase-1 objective is bounded below by 0, so an unbounded ray
            // here is a numerical breakdown
            return Err(Error::NumericalFailure("phase-1 simplex lost boundedness".into()));
        };
        // pivot
        let piv = t[lr][enter];
        for j in 0..=total {
            t[lr][j] /= piv;
        }
        for r in 0..m {
            if r != lr && t[r][enter] != 0.0 {
                let f = t[r][enter];
                for j in 0..=total {
                    t[r][j] -= f * t[lr][j];
                }
            }
        }
        if cost[enter] != 0.0 {
            let f = cost[enter];
            for j in 0..=total {
                cost[j] -= f * t[lr][j];
            }
        }
        basis[lr] = enter;
        pivots += 1;
        if pivots > MAX_PIVOTS {
            return Err(Error::NumericalFailure("simplex pivot budget exhausted".into()));
        }
    }

    // optimum value = -cost[rhs]
    let objective = -cost[total];
    if objective > tol_lp * (m as f64).sqrt().max(1.0) {
        return Ok(LpSolution { feasible: false, witness: None });
    }

    let mut y = vec![0.0f64; total];
    for r in 0..m {
        if basis[r] < total {
            y[basis[r]] = t[r][total];
        }
    }
    let mut x = vec![0.0f64; n];
    for i in 0..n {
        x[i] = y[col_of_u[i]];
        if col_of_v[i] != usize::MAX {
            x[i] -= y[col_of_v[i]];
        } else if x[i] < 0.0 {
            x[i] = 0.0; // clip tolerance-level negativity on nonneg vars
        }
    }
    Ok(LpSolution { feasible: true, witness: Some(x) })
}

/// Is the conic hull of the (realified) generator list pointed, i.e. does it
/// contain no line? Equivalent to: no convex combination of the nonzero
/// generators vanishes.
pub fn lp_pointed(gens: &[Vec<f64>], tol_lp: f64) -> Result<bool> {
    let nz: Vec<&Vec<f64>> = gens
        .iter()
        .filter(|g| g.iter().any(|x| x.abs() > 0.0))
        .collect();
    if nz.is_empty() {
        return Ok(true);
    }
    let d = nz[0].len();
    if nz.iter().any(|g| g.len() != d) {
        return Err(Error::DimensionMismatch("generator lengths".into()));
    }
    // rows: sum_k nu_k g_k = 0 (d rows), sum_k nu_k = 1
    let m = nz.len();
    let mut a = vec![vec![0.0f64; m]; d + 1];
    for (k, g) in nz.iter().enumerate() {
        for (r, &val) in g.iter().enumerate() {
            a[r][k] = val;
        }
        a[d][k] = 1.0;
    }
    let mut b = vec![0.0f64; d + 1];
    b[d] = 1.0;
    let sol = lp_feasible(&a, &b, &vec![true; m], tol_lp)?;
    Ok(!sol.feasible)
}
