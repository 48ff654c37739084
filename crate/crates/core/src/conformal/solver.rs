//! The Schwarz-Christoffel parameter problem: find prevertices and
//! differential zeros so that every polygon side length matches its
//! target.  Solved by damped Gauss-Newton over ordering-preserving
//! coordinates (log-gaps, softmax fractions inside pinned brackets),
//! with finite-difference Jacobians and parameter continuation for the
//! deeper deformations.

use super::{
    family_labels, family_layout, normalize_scale, segment_integral, DifferentialZeros,
    HyperellipticData, MarkerKind, PolygonFamily, PolygonMap, PolygonSpec, SideTarget,
};
use crate::elliptic::{modulus_from_t, x_map};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Convergence target for the normalized residual vector.
const NEWTON_TOL: f64 = 5e-11;
/// Contracted accuracy of the solved side lengths.
const SIDE_TOL: f64 = 1e-8;

/// The time-like quantum t: fixed in forward constructions, unknown in
/// inverse design.
#[derive(Debug, Clone, Copy)]
pub enum TVar {
    Fixed(f64),
    Unknown { init: f64 },
}

/// One quantization/shape condition on the developed polygon.
#[derive(Debug, Clone)]
pub enum Condition {
    /// s * L_side = target(t), s the bottom normalizer 2/L_bottom.
    Side { side: usize, target: SideTarget },
    /// s * sum c_i L_i = alpha (signed horizontal relations).
    LinComb { terms: Vec<(usize, f64)>, alpha: f64 },
    /// Developed position of the conjugate zero equals the target.
    BranchValue { target: Complex64 },
    /// The two unbounded tails of the wrap side have equal developed
    /// length (pins the point at infinity to the top-wall midpoint,
    /// fixing the last Moebius degree of freedom without forcing any
    /// prevertex value).
    WrapBalance,
}

/// Zero pair variable for the branched-octagon family.
#[derive(Debug, Clone, Copy)]
pub enum PairVar {
    Fixed { re: f64, im: f64 },
    Unknown { re: f64, im: f64 },
}

/// A full parameter problem over one marker template.
#[derive(Debug, Clone)]
pub struct ParamProblem {
    pub kinds: Vec<MarkerKind>,
    /// (marker index, pinned value); must cover indices 0, 1, 2.
    pub pinned: Vec<(usize, f64)>,
    /// free marker indices with initial positions.
    pub free: Vec<usize>,
    pub free_init: Vec<f64>,
    pub t: TVar,
    pub pair: Option<PairVar>,
    pub conditions: Vec<Condition>,
}

/// Solver output: the marker chain, curve data with normalized scale,
/// recovered t, optional zero pair, and the final residual norm.
#[derive(Debug, Clone)]
pub struct SolvedPolygon {
    pub markers: Vec<f64>,
    pub t: f64,
    pub pair: Option<(f64, f64)>,
    pub hd: HyperellipticData,
    pub residual: f64,
}

struct Run {
    idx: Vec<usize>,
    lo: f64,
    hi: Option<f64>,
}

struct Coder {
    runs: Vec<Run>,
    t_unknown: bool,
    t_init: f64,
    pair_unknown: bool,
    pair_init: (f64, f64),
}

impl Coder {
    fn new(p: &ParamProblem) -> Result<Self> {
        let n = p.kinds.len();
        let mut value = vec![f64::NAN; n];
        for &(i, v) in &p.pinned {
            value[i] = v;
        }
        for (&i, &v) in p.free.iter().zip(p.free_init.iter()) {
            value[i] = v;
        }
        if value.iter().any(|v| v.is_nan()) {
            return Err(Error::Domain("marker neither pinned nor free".into()));
        }
        // group free indices into maximal consecutive runs
        let mut runs: Vec<Run> = Vec::new();
        let free_set: Vec<bool> = (0..n).map(|i| p.free.contains(&i)).collect();
        let mut i = 0;
        while i < n {
            if free_set[i] {
                let start = i;
                while i < n && free_set[i] {
                    i += 1;
                }
                if start == 0 && i == n {
                    return Err(Error::Domain("at least one marker must be pinned".into()));
                }
                let lo = if start == 0 { f64::NAN } else { value[start - 1] };
                let hi = if i < n { Some(value[i]) } else { None };
                runs.push(Run {
                    idx: (start..i).collect(),
                    lo,
                    hi,
                });
            } else {
                i += 1;
            }
        }
        let (t_unknown, t_init) = match p.t {
            TVar::Fixed(t) => (false, t),
            TVar::Unknown { init } => (true, init),
        };
        let (pair_unknown, pair_init) = match p.pair {
            None => (false, (0.0, 0.0)),
            Some(PairVar::Fixed { re, im }) => (false, (re, im)),
            Some(PairVar::Unknown { re, im }) => (true, (re, im)),
        };
        Ok(Coder {
            runs,
            t_unknown,
            t_init,
            pair_unknown,
            pair_init,
        })
    }

    fn encode(&self, p: &ParamProblem) -> Vec<f64> {
        let mut lam = Vec::new();
        let value_of = |i: usize| -> f64 {
            if let Some(k) = p.free.iter().position(|&j| j == i) {
                p.free_init[k]
            } else {
                p.pinned.iter().find(|&&(j, _)| j == i).unwrap().1
            }
        };
        for run in &self.runs {
            match run.hi {
                Some(hi) if run.lo.is_nan() => {
                    // leading run: descend from the pin above
                    let mut prev = hi;
                    for &i in run.idx.iter().rev() {
                        let v = value_of(i);
                        lam.push((prev - v).max(1e-12).ln());
                        prev = v;
                    }
                }
                None => {
                    let mut prev = run.lo;
                    for &i in &run.idx {
                        let v = value_of(i);
                        lam.push((v - prev).max(1e-12).ln());
                        prev = v;
                    }
                }
                Some(hi) => {
                    // k markers, k+1 gaps; coordinates are log of the first
                    // k gaps relative to the last
                    let mut pts = vec![run.lo];
                    pts.extend(run.idx.iter().map(|&i| value_of(i)));
                    pts.push(hi);
                    let last_gap = (pts[pts.len() - 1] - pts[pts.len() - 2]).max(1e-12);
                    for w in pts.windows(2).take(run.idx.len()) {
                        lam.push(((w[1] - w[0]).max(1e-12) / last_gap).ln());
                    }
                }
            }
        }
        if self.t_unknown {
            lam.push(self.t_init.ln());
        }
        if self.pair_unknown {
            lam.push(self.pair_init.0);
            lam.push(self.pair_init.1.max(1e-9).ln());
        }
        lam
    }

    /// -> (marker values for free indices in order, t, pair)
    fn decode(&self, lam: &[f64]) -> (Vec<f64>, f64, (f64, f64)) {
        let mut vals = Vec::new();
        let mut k = 0;
        for run in &self.runs {
            match run.hi {
                Some(hi) if run.lo.is_nan() => {
                    let mut prev = hi;
                    let mut rev = Vec::with_capacity(run.idx.len());
                    for _ in &run.idx {
                        prev -= lam[k].exp();
                        k += 1;
                        rev.push(prev);
                    }
                    rev.reverse();
                    vals.extend(rev);
                }
                None => {
                    let mut prev = run.lo;
                    for _ in &run.idx {
                        prev += lam[k].exp();
                        k += 1;
                        vals.push(prev);
                    }
                }
                Some(hi) => {
                    let m = run.idx.len();
                    let mut gaps: Vec<f64> = (0..m).map(|j| lam[k + j].exp()).collect();
                    gaps.push(1.0);
                    k += m;
                    let total: f64 = gaps.iter().sum();
                    let mut acc = run.lo;
                    for g in gaps.iter().take(m) {
                        acc += (hi - run.lo) * g / total;
                        vals.push(acc);
                    }
                }
            }
        }
        let t = if self.t_unknown {
            let t = lam[k].exp();
            k += 1;
            t
        } else {
            self.t_init
        };
        let pair = if self.pair_unknown {
            (lam[k], lam[k + 1].exp())
        } else {
            self.pair_init
        };
        (vals, t, pair)
    }
}

fn assemble(
    p: &ParamProblem,
    free_vals: &[f64],
    pair: (f64, f64),
) -> Result<(Vec<f64>, HyperellipticData)> {
    let n = p.kinds.len();
    let mut value = vec![0.0; n];
    for &(i, v) in &p.pinned {
        value[i] = v;
    }
    for (&i, &v) in p.free.iter().zip(free_vals.iter()) {
        value[i] = v;
    }
    let mut branch = Vec::new();
    let mut zeros = Vec::new();
    for (i, kind) in p.kinds.iter().enumerate() {
        match kind {
            MarkerKind::Branch => branch.push(value[i]),
            MarkerKind::Zero => zeros.push(value[i]),
        }
    }
    let z = if p.pair.is_some() {
        DifferentialZeros::ConjugatePair {
            re: pair.0,
            im: pair.1,
        }
    } else {
        DifferentialZeros::Real(zeros)
    };
    let hd = HyperellipticData::new(branch, z, 1.0)?;
    Ok((value, hd))
}

fn residuals(p: &ParamProblem, lam: &[f64], coder: &Coder) -> Result<Vec<f64>> {
    let (free_vals, t, pair) = coder.decode(lam);
    let (markers, hd) = assemble(p, &free_vals, pair)?;
    let mut lengths = vec![f64::NAN; markers.len() - 1];
    let mut need: Vec<usize> = vec![1]; // bottom normalizer
    for c in &p.conditions {
        match c {
            Condition::Side { side, .. } => need.push(*side),
            Condition::LinComb { terms, .. } => need.extend(terms.iter().map(|t| t.0)),
            Condition::BranchValue { .. } | Condition::WrapBalance => {}
        }
    }
    need.sort_unstable();
    need.dedup();
    for &j in &need {
        lengths[j] = segment_integral(&hd, markers[j], markers[j + 1])?;
    }
    let s = 2.0 / lengths[1];
    if !s.is_finite() || s <= 0.0 {
        return Err(Error::NoConvergence {
            what: "degenerate bottom side".into(),
            residual: lengths[1],
        });
    }
    let mut r = Vec::new();
    for c in &p.conditions {
        match c {
            Condition::Side { side, target } => {
                let want = target.length(t);
                r.push((s * lengths[*side] - want) / (1.0 + want.abs()));
            }
            Condition::LinComb { terms, alpha } => {
                let got: f64 = terms.iter().map(|&(j, c)| c * lengths[j]).sum();
                r.push((s * got - alpha) / (1.0 + alpha.abs()));
            }
            Condition::BranchValue { target } => {
                let mut hd2 = hd.clone();
                normalize_scale(&mut hd2)?;
                let pm = PolygonMap::build(hd2)?;
                let pos = pm.position_c(Complex64::new(pair.0, pair.1))?;
                let scale = 1.0 + target.norm();
                r.push((pos.re - target.re) / scale);
                r.push((pos.im - target.im) / scale);
            }
            Condition::WrapBalance => {
                let right = super::wrap_right(&hd)?;
                let left = super::wrap_left(&hd)?;
                r.push(s * (right - left) / 2.0);
            }
        }
    }
    Ok(r)
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Damped Gauss-Newton on the encoded coordinates.
pub fn solve_parameter_problem(p: &ParamProblem) -> Result<SolvedPolygon> {
    let coder = Coder::new(p)?;
    let mut lam = coder.encode(p);
    let mut r = residuals(p, &lam, &coder)?;
    let mut rn = norm2(&r);
    let mut stall = 0;
    for _iter in 0..140 {
        if r.iter().all(|x| x.abs() < NEWTON_TOL) {
            break;
        }
        // forward-difference Jacobian
        let mrows = r.len();
        let ncols = lam.len();
        let mut jac = DMatrix::<f64>::zeros(mrows, ncols);
        for j in 0..ncols {
            let step = 1e-7 * (1.0 + lam[j].abs());
            let mut lp = lam.clone();
            lp[j] += step;
            let rp = match residuals(p, &lp, &coder) {
                Ok(v) => v,
                Err(_) => {
                    lp[j] = lam[j] - step;
                    residuals(p, &lp, &coder)?
                }
            };
            let sign = if lp[j] > lam[j] { 1.0 } else { -1.0 };
            for i in 0..mrows {
                jac[(i, j)] = sign * (rp[i] - r[i]) / step;
            }
        }
        let rhs = DVector::from_column_slice(&r);
        let svd = jac.svd(true, true);
        let delta = svd
            .solve(&rhs, 1e-13)
            .map_err(|e| Error::NoConvergence {
                what: format!("Jacobian solve: {e}"),
                residual: rn,
            })?;
        let mut accepted = false;
        let mut alpha = 1.0;
        for _ in 0..14 {
            let trial: Vec<f64> = lam
                .iter()
                .zip(delta.iter())
                .map(|(l, d)| l - alpha * d)
                .collect();
            if let Ok(rt) = residuals(p, &trial, &coder) {
                let rtn = norm2(&rt);
                if rtn < rn * (1.0 - 1e-4 * alpha) || rtn < NEWTON_TOL {
                    lam = trial;
                    r = rt;
                    rn = rtn;
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if std::env::var_os("TRIBAND_SOLVER_TRACE").is_some() {
            let (fv, tt, pp) = coder.decode(&lam);
            eprintln!(
                "iter {_iter}: |r| = {rn:.3e}, r = {:?}, free = {fv:?}, t = {tt:.4}, pair = {pp:?}",
                r.iter().map(|v| format!("{v:.2e}")).collect::<Vec<_>>()
            );
        }
        if !accepted {
            stall += 1;
            if stall >= 3 {
                return Err(Error::NoConvergence {
                    what: "parameter problem stalled".into(),
                    residual: rn,
                });
            }
        } else {
            stall = 0;
        }
    }
    if !r.iter().all(|x| x.abs() < 100.0 * NEWTON_TOL) {
        return Err(Error::NoConvergence {
            what: "parameter problem did not reach tolerance".into(),
            residual: rn,
        });
    }
    let (free_vals, t, pair) = coder.decode(&lam);
    let (markers, mut hd) = assemble(p, &free_vals, pair)?;
    normalize_scale(&mut hd)?;
    Ok(SolvedPolygon {
        markers,
        t,
        pair: if p.pair.is_some() { Some(pair) } else { None },
        hd,
        residual: rn,
    })
}

/// Forward solution of the parameter problem for one polygon spec.
#[derive(Debug, Clone)]
pub struct ScSolution {
    pub spec: PolygonSpec,
    pub hd: HyperellipticData,
    /// polygon corner label -> real prevertex, in boundary order
    pub prevertex_labels: Vec<(String, f64)>,
    pub markers: Vec<f64>,
    pub residual: f64,
}

/// Right-wall abscissae of the plain rectangle of height `quanta * t`
/// in its natural coordinates: x(1 + i v t | i quanta t).  Used both
/// for the forward gauge pins and for initial guesses.
fn plain_wall(quanta: f64, t: f64, vs: &[f64]) -> Result<Vec<f64>> {
    let md = modulus_from_t(quanta * t)?;
    vs.iter()
        .map(|&v| {
            Ok(if v >= quanta {
                md.kinv
            } else {
                x_map(Complex64::new(1.0, v * t), &md).re
            })
        })
        .collect()
}

fn forward_conditions(spec: &PolygonSpec) -> Vec<Condition> {
    let (_, targets) = family_layout(spec);
    let mut conds: Vec<Condition> = targets
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != 1)
        .map(|(j, &target)| Condition::Side { side: j, target })
        .collect();
    if spec.family == PolygonFamily::BranchedOctagon {
        conds.push(Condition::BranchValue { target: spec.c() });
    }
    conds
}

/// Forward constructions pin only the bottom corners (e2, e3) = (-1, 1)
/// and fix the last Moebius degree of freedom with the wrap-balance
/// condition.  Pinning a third prevertex value instead can make deep
/// deformations unrepresentable: the point at infinity gets pushed off
/// the top wall and a marker escapes to infinity.
fn forward_problem(
    spec: &PolygonSpec,
    free_init: Vec<f64>,
    pair: Option<PairVar>,
) -> Result<ParamProblem> {
    let (kinds, _) = family_layout(spec);
    let mut free: Vec<usize> = vec![0];
    free.extend(3..kinds.len());
    let mut conditions = forward_conditions(spec);
    conditions.push(Condition::WrapBalance);
    Ok(ParamProblem {
        kinds,
        pinned: vec![(1, -1.0), (2, 1.0)],
        free,
        free_init,
        t: TVar::Fixed(spec.t),
        pair,
        conditions,
    })
}

/// Find the abscissa on a vertical wall side whose developed height is y.
pub fn find_height_on_side(pm: &PolygonMap, lo: f64, hi: f64, y: f64) -> Result<f64> {
    let ylo = pm.position(lo + 1e-12 * (hi - lo))?.im;
    let yhi = pm.position(hi - 1e-12 * (hi - lo))?.im;
    let increasing = yhi > ylo;
    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        let ym = pm.position(mid)?.im;
        if (ym < y) == increasing {
            a = mid;
        } else {
            b = mid;
        }
        if (b - a).abs() < 1e-15 * (1.0 + mid.abs()) {
            break;
        }
    }
    Ok(0.5 * (a + b))
}

fn spread(lo: f64, hi: f64, fracs: &[f64]) -> Vec<f64> {
    fracs.iter().map(|f| lo + (hi - lo) * f).collect()
}

fn initial_guess(spec: &PolygonSpec) -> Result<Vec<f64>> {
    let t = spec.t;
    let n = spec.n as f64;
    let m = spec.m as f64;
    let quanta = spec.wall_quanta() as f64;
    let e1 = -modulus_from_t(quanta * t)?.kinv;
    let mut g = vec![e1];
    match spec.family {
        PolygonFamily::Rect => g.extend(plain_wall(n, t, &[n])?),
        PolygonFamily::SlitRect => {
            g.extend(plain_wall(n, t, &[(m - 0.3).max(0.05), m, m + 0.3, n])?);
        }
        PolygonFamily::TwoSlitRect => {
            let base = sc_solve_forward(&PolygonSpec::slit_rect(t, spec.n, spec.m, spec.h1)?)?;
            let bm = &base.markers;
            let pm = PolygonMap::build(base.hd.clone())?;
            let x_mid = find_height_on_side(&pm, bm[5], bm[6], (m + 1.0) * t)?;
            let x_hi = find_height_on_side(&pm, bm[5], bm[6], (m + 1.3).min(n - 0.05) * t)?;
            let d = (x_hi - x_mid).abs().max(1e-6 * (bm[6] - bm[5]));
            g = vec![
                bm[0],
                bm[3],
                bm[4],
                bm[5],
                x_mid - 0.3 * d,
                x_mid,
                x_mid + 0.3 * d,
                bm[6],
            ];
        }
        PolygonFamily::BranchedOctagon => {
            g.extend(plain_wall(
                n - 1.0,
                t,
                &[m + 0.5, m + 0.62, m + 0.75, m + 0.87, n - 1.0],
            )?);
        }
        PolygonFamily::DecagonPlus => {
            let base = sc_solve_forward(&PolygonSpec::slit_rect(t, spec.n - 1, spec.m, spec.h1)?)?;
            let bm = &base.markers;
            let s = spread(bm[3], bm[4], &[0.0, 0.25, 0.5, 0.75, 1.0]);
            g = vec![bm[0], s[0], s[1], s[2], s[3], s[4], bm[5], bm[6]];
        }
        PolygonFamily::DecagonMinus => {
            let base =
                sc_solve_forward(&PolygonSpec::slit_rect(t, spec.n - 1, spec.m + 1, spec.h1)?)?;
            let bm = &base.markers;
            let s = spread(bm[4], bm[5], &[0.0, 0.25, 0.5, 0.75]);
            g = vec![bm[0], bm[3], s[0], s[1], s[2], s[3], bm[5], bm[6]];
        }
    }
    Ok(g)
}

fn pair_guess(markers_init: &[f64]) -> PairVar {
    // markers_init holds the free markers [e1, e4..e8]; zeros start
    // midway inside the fake band bracket (e5, e6)
    let a = 0.5 * (markers_init[2] + markers_init[3]);
    let b = 0.25 * (markers_init[3] - markers_init[2]).max(1e-8);
    PairVar::Fixed { re: a, im: b }
}

fn free_values(markers: &[f64]) -> Vec<f64> {
    // forward free set: marker 0 plus everything from index 3 on
    let mut v = vec![markers[0]];
    v.extend_from_slice(&markers[3..]);
    v
}

fn attempt_forward(spec: &PolygonSpec, init: Vec<f64>) -> Result<SolvedPolygon> {
    if spec.family == PolygonFamily::BranchedOctagon {
        // stage 1: shape-only solve with the zero pair frozen
        let frozen = pair_guess(&init);
        let mut prob = forward_problem(spec, init, Some(frozen))?;
        prob.conditions
            .retain(|c| !matches!(c, Condition::BranchValue { .. }));
        let stage1 = solve_parameter_problem(&prob)?;
        // stage 2: walk the branch value from wherever stage 1 landed
        // to the requested c
        let (a0, b0) = stage1.pair.expect("octagon carries a pair");
        let pm = PolygonMap::build(stage1.hd.clone())?;
        let c0 = pm.position_c(Complex64::new(a0, b0))?;
        let c1 = spec.c();
        let mut cur_init: Vec<f64> = free_values(&stage1.markers);
        let mut cur_pair = (a0, b0);
        let mut theta = 0.0f64;
        let mut step = 1.0f64;
        let mut last = None;
        while theta < 1.0 {
            let th = (theta + step).min(1.0);
            let c = c0 + (c1 - c0) * th;
            let mut sp = *spec;
            sp.c_re = c.re;
            sp.c_im = c.im;
            let prob = forward_problem(
                &sp,
                cur_init.clone(),
                Some(PairVar::Unknown {
                    re: cur_pair.0,
                    im: cur_pair.1,
                }),
            )?;
            match solve_parameter_problem(&prob) {
                Ok(sol) => {
                    theta = th;
                    cur_init = free_values(&sol.markers);
                    cur_pair = sol.pair.unwrap();
                    last = Some(sol);
                    step = (step * 2.0).min(1.0 - theta + 1e-16);
                }
                Err(e) => {
                    step *= 0.5;
                    if step < 1e-3 {
                        return Err(e);
                    }
                }
            }
        }
        last.ok_or_else(|| Error::NoConvergence {
            what: "octagon continuation made no progress".into(),
            residual: f64::NAN,
        })
    } else {
        solve_parameter_problem(&forward_problem(spec, init, None)?)
    }
}

/// Parameter continuation in the slit abscissae: walk from a shallow
/// slit toward the requested one, reusing each solution as the next
/// initial guess.
fn continuation_path(spec: &PolygonSpec) -> Option<Vec<PolygonSpec>> {
    let ease = |h: f64| -> Vec<f64> {
        if h >= 0.55 {
            return vec![h];
        }
        let mut hs = Vec::new();
        let steps = (((0.6 - h) / 0.35).ceil() as usize).max(1);
        for k in 1..=steps {
            hs.push(0.6 + (h - 0.6) * k as f64 / steps as f64);
        }
        hs
    };
    match spec.family {
        PolygonFamily::SlitRect => {
            let hs = ease(spec.h);
            if hs.len() <= 1 {
                return None;
            }
            Some(
                hs.iter()
                    .map(|&h| {
                        let mut s = *spec;
                        s.h = h;
                        s
                    })
                    .collect(),
            )
        }
        PolygonFamily::TwoSlitRect | PolygonFamily::DecagonPlus | PolygonFamily::DecagonMinus => {
            let hs = ease(spec.h2);
            if hs.len() <= 1 {
                return None;
            }
            Some(
                hs.iter()
                    .map(|&h2| {
                        let mut s = *spec;
                        s.h2 = h2.max(s.h1);
                        s
                    })
                    .collect(),
            )
        }
        _ => None,
    }
}

/// Solve the forward Schwarz-Christoffel parameter problem: prevertices
/// (branchpoints) and numerator zeros such that every side of the
/// developed polygon matches its target to 1e-8, with the Moebius gauge
/// fixed by pinning three prevertices to -1, 0, 1.
pub fn sc_solve_forward(spec: &PolygonSpec) -> Result<ScSolution> {
    spec.validate()?;
    let init = initial_guess(spec)?;
    let solved = match attempt_forward(spec, init) {
        Ok(s) => s,
        Err(first_err) => {
            let Some(path) = continuation_path(spec) else {
                return Err(first_err);
            };
            let mut cur: Option<SolvedPolygon> = None;
            for step_spec in &path {
                let init = match &cur {
                    Some(s) => free_values(&s.markers),
                    None => initial_guess(step_spec)?,
                };
                cur = Some(attempt_forward(step_spec, init)?);
            }
            cur.expect("continuation path nonempty")
        }
    };
    // contract check: recompute all side lengths against targets
    let (_, targets) = family_layout(spec);
    let mut worst = 0.0f64;
    for (j, target) in targets.iter().enumerate() {
        let want = target.length(spec.t);
        // the scale is normalized, so the integral is the true length
        let got = segment_integral(&solved.hd, solved.markers[j], solved.markers[j + 1])?;
        worst = worst.max((got - want).abs() / (1.0 + want.abs()));
    }
    if worst > SIDE_TOL {
        return Err(Error::NoConvergence {
            what: format!("side residual {worst:.3e} above contract"),
            residual: worst,
        });
    }
    let labels = family_labels(spec.family)
        .into_iter()
        .map(String::from)
        .zip(solved.markers.iter().copied())
        .map(|(l, x)| (l, x))
        .collect();
    Ok(ScSolution {
        spec: *spec,
        hd: solved.hd,
        prevertex_labels: labels,
        markers: solved.markers,
        residual: solved.residual,
    })
}
