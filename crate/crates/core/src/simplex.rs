//! Self-contained dense simplex with Bland's rule, sized for the
//! differential-correction subproblems (a few thousand constraints, a
//! few dozen variables).  Infeasibility of the slack start is repaired
//! by the classic single-artificial phase.

use crate::error::{Error, Result};

const EPS: f64 = 1e-10;

fn do_pivot(t: &mut [Vec<f64>], z: &mut [f64], basis: &mut [usize], r: usize, col: usize) {
    let piv = t[r][col];
    let inv = 1.0 / piv;
    for v in t[r].iter_mut() {
        *v *= inv;
    }
    let row = t[r].clone();
    for (i, ti) in t.iter_mut().enumerate() {
        if i == r {
            continue;
        }
        let f = ti[col];
        if f != 0.0 {
            for (tv, rv) in ti.iter_mut().zip(row.iter()) {
                *tv -= f * rv;
            }
        }
    }
    let f = z[col];
    if f != 0.0 {
        for (zv, rv) in z.iter_mut().zip(row.iter()) {
            *zv -= f * rv;
        }
    }
    basis[r] = col;
}

/// Bland's rule loop on the current objective row; `allowed` bars the
/// artificial column from re-entering in phase 2.
fn optimize(
    t: &mut [Vec<f64>],
    z: &mut [f64],
    basis: &mut [usize],
    ncols: usize,
    allowed: usize,
    phase1: bool,
) -> Result<()> {
    let m = t.len();
    let max_pivots = 400 * (m + ncols);
    // steepest-cost entering while progress lasts; Bland's rule takes
    // over as soon as the objective stalls, which keeps the iteration
    // cycle-free without paying Bland's zigzag everywhere
    let mut bland = false;
    let mut last_obj = f64::INFINITY;
    let mut stalled = 0usize;
    for _ in 0..max_pivots {
        let obj = -z[ncols];
        if obj < last_obj - 1e-13 * (1.0 + obj.abs()) {
            stalled = 0;
            last_obj = obj;
        } else {
            stalled += 1;
            if stalled > 40 {
                bland = true;
            }
        }
        let zscale = z[..allowed].iter().fold(1.0_f64, |a, &v| a.max(v.abs()));
        let col = if bland {
            // smallest index with negative reduced cost
            (0..allowed).find(|&j| z[j] < -1e-9 * zscale)
        } else {
            (0..allowed)
                .filter(|&j| z[j] < -1e-9 * zscale)
                .min_by(|&a, &b| z[a].partial_cmp(&z[b]).unwrap())
        };
        let Some(col) = col else {
            return Ok(());
        };
        // leaving: minimum ratio, ties to the smallest basis index.
        // pivot elements are admitted relative to the column scale: a
        // pivot of 1e-9 under entries of 1e3 means elimination growth
        // of 1e12, which destroys the tableau
        let colmax = (0..m).fold(0.0_f64, |a, i| a.max(t[i][col].abs()));
        let pivot_floor = (1e-9 * colmax).max(EPS);
        let mut best: Option<(usize, f64)> = None;
        for i in 0..m {
            if t[i][col] > pivot_floor {
                let ratio = t[i][ncols].max(0.0) / t[i][col];
                match best {
                    None => best = Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < br - EPS || (ratio < br + EPS && basis[i] < basis[bi]) {
                            best = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((r, _)) = best else {
            if phase1 {
                // the phase-1 objective is bounded below by zero; a
                // descent ray is roundoff noise once feasibility holds
                return Ok(());
            }
            return Err(Error::Infeasible("unbounded".into()));
        };
        do_pivot(t, z, basis, r, col);
    }
    Err(Error::Infeasible("pivot limit reached".into()))
}

/// min c.y subject to A y <= b, y >= 0, for problems with many rows
/// and few variables: solved through the dual (few rows, many columns),
/// whose slack reduced costs at optimality are the primal solution.
pub fn solve_lp_tall(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Result<Vec<f64>> {
    let m = a.len();
    let ns = c.len();
    // dual: min b.u  s.t.  -A^T u <= c,  u >= 0
    let mut at = vec![vec![0.0_f64; m]; ns];
    for (i, row) in a.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            at[j][i] = -v;
        }
    }
    let (_, slack_costs) = simplex_core(b, &at, c)?;
    Ok(slack_costs)
}

/// min c.y  subject to  A y <= b,  y >= 0.
pub fn solve_lp(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Result<Vec<f64>> {
    simplex_core(c, a, b).map(|(y, _)| y)
}

/// Returns the optimizer together with the final reduced costs on the
/// slack columns (the dual multipliers of the rows).
fn simplex_core(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let m = a.len();
    let ns = c.len();
    assert_eq!(b.len(), m);
    // columns: structural | slack | one artificial | rhs
    let art = ns + m;
    let ncols = ns + m + 1;
    let mut t = vec![vec![0.0_f64; ncols + 1]; m];
    let mut basis = vec![0_usize; m];
    let mut worst: Option<(usize, f64)> = None;
    for i in 0..m {
        for j in 0..ns {
            t[i][j] = a[i][j];
        }
        t[i][ns + i] = 1.0;
        t[i][ncols] = b[i];
        basis[i] = ns + i;
        if b[i] < 0.0 {
            t[i][art] = -1.0;
            match worst {
                Some((_, w)) if b[i] >= w => {}
                _ => worst = Some((i, b[i])),
            }
        }
    }

    // phase 1: drive the single artificial to zero
    if let Some((r0, _)) = worst {
        let mut z1 = vec![0.0; ncols + 1];
        z1[art] = 1.0;
        do_pivot(&mut t, &mut z1, &mut basis, r0, art);
        optimize(&mut t, &mut z1, &mut basis, ncols, ncols, true)?;
        let infeas = -z1[ncols];
        if infeas > 1e-7 {
            return Err(Error::Infeasible(format!(
                "phase 1 ended at {infeas:.3e}"
            )));
        }
        // pivot the artificial out if it is still basic at level zero
        if let Some(r) = (0..m).find(|&i| basis[i] == art) {
            if let Some(col) = (0..ns + m).find(|&j| t[r][j].abs() > EPS) {
                let mut zdummy = vec![0.0; ncols + 1];
                do_pivot(&mut t, &mut zdummy, &mut basis, r, col);
            }
        }
    }

    // phase 2 on the real objective, artificial barred
    let mut z2 = vec![0.0; ncols + 1];
    z2[..ns].copy_from_slice(c);
    for i in 0..m {
        let f = z2[basis[i]];
        if f != 0.0 {
            let row = t[i].clone();
            for (zv, rv) in z2.iter_mut().zip(row.iter()) {
                *zv -= f * rv;
            }
        }
    }
    optimize(&mut t, &mut z2, &mut basis, ncols, ns + m, false)?;

    let mut y = vec![0.0; ns];
    for i in 0..m {
        if basis[i] < ns {
            y[basis[i]] = t[i][ncols].max(0.0);
        }
    }
    let duals: Vec<f64> = (0..m).map(|i| z2[ns + i].max(0.0)).collect();
    Ok((y, duals))
}
