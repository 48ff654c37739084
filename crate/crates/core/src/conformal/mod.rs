//! Hyperelliptic curves with real branchpoints, abelian integrals with
//! endpoint singularities, and Schwarz-Christoffel maps onto the
//! rectilinear polygon families used by the solution constructions.
//!
//! The differential is `dzeta = C P(x) dx / w`, `w^2 = prod (x - e_i)`,
//! with `deg P <= g - 1` so dzeta is holomorphic on the curve.  On the
//! real axis `w` is taken as the product of principal square roots
//! continued from the upper half plane: positive on the rightmost
//! unbounded interval and rotating by `i` at each branchpoint crossing.
//! Images of real intervals under `zeta` are therefore alternately
//! horizontal and vertical segments, which is exactly the
//! Schwarz-Christoffel picture with all prevertex exponents -1/2 and
//! numerator-zero exponents +1.

mod solver;

pub use solver::{
    find_height_on_side, sc_solve_forward, solve_parameter_problem, Condition, PairVar,
    ParamProblem, ScSolution, SolvedPolygon, TVar,
};

use crate::error::{Error, Result};
use crate::quad::{adaptive, adaptive_complex};
use num_complex::Complex64;

/// Quadrature tolerance for abelian integrals (relative).
const QUAD_TOL: f64 = 1e-13;

/// Zeros of the differential numerator P: either g-1 real roots, or a
/// single conjugate pair (x-a)^2 + b^2 (genus 3 with interior branching).
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum DifferentialZeros {
    Real(Vec<f64>),
    ConjugatePair { re: f64, im: f64 },
}

/// Hyperelliptic curve data plus a (real, signed) differential scale.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct HyperellipticData {
    /// sorted, 2g+2 distinct reals
    pub branchpoints: Vec<f64>,
    pub zeros: DifferentialZeros,
    pub scale: f64,
}

impl HyperellipticData {
    pub fn new(branchpoints: Vec<f64>, zeros: DifferentialZeros, scale: f64) -> Result<Self> {
        let hd = HyperellipticData {
            branchpoints,
            zeros,
            scale,
        };
        hd.validate()?;
        Ok(hd)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.branchpoints.len();
        if n < 4 || n % 2 != 0 || n > 8 {
            return Err(Error::Domain(format!(
                "need 2g+2 branchpoints with genus in 1..=3, got {n}"
            )));
        }
        for w in self.branchpoints.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::Domain(
                    "branchpoints must be strictly increasing".into(),
                ));
            }
        }
        let g = self.genus();
        let zero_count = match &self.zeros {
            DifferentialZeros::Real(v) => v.len(),
            DifferentialZeros::ConjugatePair { im, .. } => {
                if *im <= 0.0 {
                    return Err(Error::Domain("conjugate pair needs positive height".into()));
                }
                2
            }
        };
        if zero_count != g - 1 {
            return Err(Error::Domain(format!(
                "numerator degree must be g-1 = {}, got {zero_count}",
                g - 1
            )));
        }
        if self.scale == 0.0 || !self.scale.is_finite() {
            return Err(Error::Domain("scale must be nonzero and finite".into()));
        }
        Ok(())
    }

    pub fn genus(&self) -> usize {
        self.branchpoints.len() / 2 - 1
    }

    /// Differential numerator P(x) (monic).
    pub fn numerator(&self, x: f64) -> f64 {
        match &self.zeros {
            DifferentialZeros::Real(v) => v.iter().fold(1.0, |acc, z| acc * (x - z)),
            DifferentialZeros::ConjugatePair { re, im } => (x - re) * (x - re) + im * im,
        }
    }

    pub fn numerator_c(&self, x: Complex64) -> Complex64 {
        match &self.zeros {
            DifferentialZeros::Real(v) => v
                .iter()
                .fold(Complex64::new(1.0, 0.0), |acc, z| acc * (x - z)),
            DifferentialZeros::ConjugatePair { re, im } => {
                (x - re) * (x - re) + Complex64::new(im * im, 0.0)
            }
        }
    }

    /// Real zeros of P, sorted (empty for a conjugate pair).
    pub fn real_zeros(&self) -> Vec<f64> {
        match &self.zeros {
            DifferentialZeros::Real(v) => {
                let mut v = v.clone();
                v.sort_by(|a, b| a.partial_cmp(b).unwrap());
                v
            }
            DifferentialZeros::ConjugatePair { .. } => Vec::new(),
        }
    }

    /// sqrt of |prod (x - e_i)| skipping one factor.  Exact hits on a
    /// branchpoint (quadrature nodes can round onto one) are floored so
    /// the integrable singularity never becomes 0 * inf.
    fn sqrt_abs_prod(&self, x: f64, skip: Option<usize>) -> f64 {
        let mut acc = 1.0;
        for (i, &e) in self.branchpoints.iter().enumerate() {
            if Some(i) == skip {
                continue;
            }
            acc *= (x - e).abs().max(1e-280);
        }
        acc.sqrt()
    }

    /// w continued from the upper half plane (principal square roots).
    pub fn w_complex(&self, x: Complex64) -> Complex64 {
        self.branchpoints
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, &e| acc * (x - e).sqrt())
    }

    fn branch_index(&self, x: f64) -> Option<usize> {
        self.branchpoints.iter().position(|&e| e == x)
    }

    /// Number of branchpoints strictly left of x.
    fn count_left(&self, x: f64) -> usize {
        self.branchpoints.iter().filter(|&&e| e < x).count()
    }
}

/// (-i)^k
fn neg_i_pow(k: usize) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// Value of the differential density C P(x)/w~(x) at a real point, with
/// the sheet convention w~ > 0 on the rightmost unbounded interval and
/// the sign alternating across each branchpoint.
pub fn differential_at(hd: &HyperellipticData, x: f64) -> Result<f64> {
    if hd.branch_index(x).is_some() {
        return Err(Error::SingularPoint(x));
    }
    let n = hd.branchpoints.len();
    let sheet = if (n - hd.count_left(x)) % 2 == 0 {
        1.0
    } else {
        -1.0
    };
    Ok(hd.scale * hd.numerator(x) / (sheet * hd.sqrt_abs_prod(x, None)))
}

/// Arc-length style abelian integral over [a, b]:
/// ∫ |C P(x)| / sqrt|prod (x-e_i)| dx, with square-root substitutions
/// absorbing branchpoint endpoints.  (a, b) must contain no branchpoint
/// in its interior; endpoints may be branchpoints.
pub fn segment_integral(hd: &HyperellipticData, a: f64, b: f64) -> Result<f64> {
    if !(a <= b) {
        return Err(Error::Domain(format!(
            "segment endpoints out of order: {a} > {b}"
        )));
    }
    if a == b {
        return Ok(0.0);
    }
    for &e in &hd.branchpoints {
        if e > a && e < b {
            return Err(Error::Domain(format!(
                "branchpoint {e} interior to segment [{a}, {b}]"
            )));
        }
    }
    let cmag = hd.scale.abs();
    // square-root substitutions reach across the whole segment so no
    // plain panel ever places nodes next to a singular endpoint
    let sub_from_a = |ia: usize, hi: f64| {
        let smax = (hi - a).sqrt();
        let mut f = |s: f64| {
            let x = a + s * s;
            2.0 * cmag * hd.numerator(x).abs() / hd.sqrt_abs_prod(x, Some(ia))
        };
        adaptive(&mut f, 0.0, smax, QUAD_TOL)
    };
    let sub_from_b = |ib: usize, lo: f64| {
        let smax = (b - lo).sqrt();
        let mut f = |s: f64| {
            let x = b - s * s;
            2.0 * cmag * hd.numerator(x).abs() / hd.sqrt_abs_prod(x, Some(ib))
        };
        adaptive(&mut f, 0.0, smax, QUAD_TOL)
    };
    let total = match (hd.branch_index(a), hd.branch_index(b)) {
        (Some(ia), Some(ib)) => {
            let mid = 0.5 * (a + b);
            sub_from_a(ia, mid) + sub_from_b(ib, mid)
        }
        (Some(ia), None) => sub_from_a(ia, b),
        (None, Some(ib)) => sub_from_b(ib, a),
        (None, None) => {
            let mut f = |x: f64| cmag * hd.numerator(x).abs() / hd.sqrt_abs_prod(x, None);
            adaptive(&mut f, a, b, QUAD_TOL)
        }
    };
    Ok(total)
}

/// The two unbounded pieces (e_max, +inf) and (-inf, e_min) joined
/// through infinity (the wrap gap of the band system).
pub fn wrap_integral(hd: &HyperellipticData) -> Result<f64> {
    let emin = hd.branchpoints[0];
    let emax = *hd.branchpoints.last().unwrap();
    let l = (emax - emin).max(1.0);
    let cmag = hd.scale.abs();
    let mut total = segment_integral(hd, emax, emax + l)?;
    total += segment_integral(hd, emin - l, emin)?;
    // far tails via x = point +- l/v^2
    let mut fr = |v: f64| {
        let x = emax + l / (v * v);
        cmag * hd.numerator(x).abs() / hd.sqrt_abs_prod(x, None) * 2.0 * l / (v * v * v)
    };
    total += adaptive(&mut fr, 0.0, 1.0, QUAD_TOL);
    let mut fl = |v: f64| {
        let x = emin - l / (v * v);
        cmag * hd.numerator(x).abs() / hd.sqrt_abs_prod(x, None) * 2.0 * l / (v * v * v)
    };
    total += adaptive(&mut fl, 0.0, 1.0, QUAD_TOL);
    Ok(total)
}

/// Segment integrals over a list of intervals, in order.
pub fn period_vector(hd: &HyperellipticData, intervals: &[(f64, f64)]) -> Result<Vec<f64>> {
    intervals
        .iter()
        .map(|&(a, b)| segment_integral(hd, a, b))
        .collect()
}

/// Signed closure of dzeta around the whole real axis: the complex sum
/// of all side vectors including the wrap; zero for a holomorphic
/// differential (numerical check used by the tests and the solver).
pub fn period_closure(hd: &HyperellipticData) -> Result<Complex64> {
    let pm = PolygonMap::build(hd.clone())?;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..pm.markers.len() - 1 {
        acc += pm.side_vector(j)?;
    }
    // wrap through infinity: direction on (e_max, inf) and (-inf, e_min)
    acc += pm.dir_right * wrap_right(&pm.hd)?;
    acc += pm.dir_left * wrap_left(&pm.hd)?;
    Ok(acc)
}

pub(crate) fn wrap_right(hd: &HyperellipticData) -> Result<f64> {
    let emax = *hd.branchpoints.last().unwrap();
    let l = (emax - hd.branchpoints[0]).max(1.0);
    let cmag = hd.scale.abs();
    let mut total = segment_integral(hd, emax, emax + l)?;
    let mut fr = |v: f64| {
        let x = emax + l / (v * v);
        cmag * hd.numerator(x).abs() / hd.sqrt_abs_prod(x, None) * 2.0 * l / (v * v * v)
    };
    total += adaptive(&mut fr, 0.0, 1.0, QUAD_TOL);
    Ok(total)
}

pub(crate) fn wrap_left(hd: &HyperellipticData) -> Result<f64> {
    let emin = hd.branchpoints[0];
    let l = (*hd.branchpoints.last().unwrap() - emin).max(1.0);
    let cmag = hd.scale.abs();
    let mut total = segment_integral(hd, emin - l, emin)?;
    let mut fl = |v: f64| {
        let x = emin - l / (v * v);
        cmag * hd.numerator(x).abs() / hd.sqrt_abs_prod(x, None) * 2.0 * l / (v * v * v)
    };
    total += adaptive(&mut fl, 0.0, 1.0, QUAD_TOL);
    Ok(total)
}

/// The developed polygon: cumulative positions of all boundary markers
/// (branchpoints and real numerator zeros), anchored so the second
/// branchpoint sits at -1 + 0i and the following gap maps rightward.
/// With the scale normalized by the solver this places the polygon in
/// rectangle coordinates: width-2 horizontal sides, heights in units t.
#[derive(Debug, Clone)]
pub struct PolygonMap {
    pub hd: HyperellipticData,
    markers: Vec<f64>,
    corner_pos: Vec<Complex64>,
    dirs: Vec<Complex64>,
    dir_left: Complex64,
    dir_right: Complex64,
}

impl PolygonMap {
    pub fn build(hd: HyperellipticData) -> Result<Self> {
        hd.validate()?;
        let mut markers: Vec<f64> = hd.branchpoints.clone();
        markers.extend(hd.real_zeros());
        markers.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let nb = hd.branchpoints.len();
        let sgn_scale = hd.scale.signum();
        let mut dirs = Vec::with_capacity(markers.len() - 1);
        for j in 0..markers.len() - 1 {
            let mid = 0.5 * (markers[j] + markers[j + 1]);
            let k = nb - hd.count_left(mid);
            let d = sgn_scale * hd.numerator(mid).signum();
            dirs.push(neg_i_pow(k) * d);
        }
        let dir_right = {
            let x = markers.last().unwrap() + 1.0;
            Complex64::new(sgn_scale * hd.numerator(x).signum(), 0.0)
        };
        let dir_left = {
            let x = markers[0] - 1.0;
            neg_i_pow(nb) * sgn_scale * hd.numerator(x).signum()
        };
        // anchor: second branchpoint at -1 (the bottom-left rectangle corner)
        let anchor_val = hd.branchpoints[1];
        let anchor_idx = markers
            .iter()
            .position(|&m| m == anchor_val)
            .expect("branchpoint present in markers");
        let mut lengths = Vec::with_capacity(markers.len() - 1);
        for j in 0..markers.len() - 1 {
            lengths.push(segment_integral(&hd, markers[j], markers[j + 1])?);
        }
        let mut corner_pos = vec![Complex64::new(0.0, 0.0); markers.len()];
        corner_pos[anchor_idx] = Complex64::new(-1.0, 0.0);
        for j in anchor_idx..markers.len() - 1 {
            corner_pos[j + 1] = corner_pos[j] + dirs[j] * lengths[j];
        }
        for j in (0..anchor_idx).rev() {
            corner_pos[j] = corner_pos[j + 1] - dirs[j] * lengths[j];
        }
        Ok(PolygonMap {
            hd,
            markers,
            corner_pos,
            dirs,
            dir_left,
            dir_right,
        })
    }

    pub fn markers(&self) -> &[f64] {
        &self.markers
    }

    pub fn corner_positions(&self) -> &[Complex64] {
        &self.corner_pos
    }

    /// Position of the j-th marker in polygon coordinates.
    pub fn corner(&self, j: usize) -> Complex64 {
        self.corner_pos[j]
    }

    pub fn side_vector(&self, j: usize) -> Result<Complex64> {
        Ok(self.dirs[j] * segment_integral(&self.hd, self.markers[j], self.markers[j + 1])?)
    }

    /// Polygon position of a real boundary point.
    pub fn position(&self, x: f64) -> Result<Complex64> {
        let m = &self.markers;
        if x < m[0] {
            return Ok(self.corner_pos[0] - self.dir_left * segment_integral(&self.hd, x, m[0])?);
        }
        if x > *m.last().unwrap() {
            let last = m.len() - 1;
            return Ok(self.corner_pos[last]
                + self.dir_right * segment_integral(&self.hd, m[last], x)?);
        }
        if let Some(j) = m.iter().position(|&v| v == x) {
            return Ok(self.corner_pos[j]);
        }
        let j = m.iter().filter(|&&v| v < x).count() - 1;
        // integrate from the nearer marker
        if x - m[j] <= m[j + 1] - x {
            Ok(self.corner_pos[j] + self.dirs[j] * segment_integral(&self.hd, m[j], x)?)
        } else {
            Ok(self.corner_pos[j + 1] - self.dirs[j] * segment_integral(&self.hd, x, m[j + 1])?)
        }
    }

    /// Polygon position of a point in the closed upper half plane:
    /// real-axis position of a safe base point plus a straight complex
    /// leg of the integral of dzeta.
    pub fn position_c(&self, z: Complex64) -> Result<Complex64> {
        if z.im.abs() < 1e-14 * (1.0 + z.norm()) {
            return self.position(z.re);
        }
        if z.im < 0.0 {
            return Err(Error::Domain(format!(
                "polygon position needs Im z >= 0, got {z}"
            )));
        }
        // base point: midpoint of the marker interval containing Re z
        let m = &self.markers;
        let x0 = if z.re < m[0] {
            m[0] - (1.0 + (z.re - m[0]).abs())
        } else if z.re > *m.last().unwrap() {
            m.last().unwrap() + (1.0 + (z.re - m.last().unwrap()).abs())
        } else {
            let j = m.iter().filter(|&&v| v < z.re).count().clamp(1, m.len() - 1) - 1;
            0.5 * (m[j] + m[j + 1])
        };
        let base = self.position(x0)?;
        let hd = &self.hd;
        let mut f = |xi: Complex64| hd.scale * hd.numerator_c(xi) / hd.w_complex(xi);
        let leg = adaptive_complex(&mut f, Complex64::new(x0, 0.0), z, QUAD_TOL);
        Ok(base + leg)
    }
}

/// Abelian integral from a branchpoint anchor to x along a path in the
/// closed upper half plane: `zeta(x)` with `zeta(anchor) = 0`.
pub fn map_to_polygon(hd: &HyperellipticData, x: Complex64, anchor: f64) -> Result<Complex64> {
    if hd.branch_index(anchor).is_none() {
        return Err(Error::Domain(format!(
            "anchor {anchor} is not a branchpoint"
        )));
    }
    let pm = PolygonMap::build(hd.clone())?;
    Ok(pm.position_c(x)? - pm.position(anchor)?)
}

/// The rectilinear polygon families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum PolygonFamily {
    Rect,
    SlitRect,
    TwoSlitRect,
    BranchedOctagon,
    DecagonPlus,
    DecagonMinus,
}

/// Parameters of one polygon: the quantum t, degree n, slit level m,
/// slit abscissae h/h1/h2, and the interior branchpoint c (octagon).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PolygonSpec {
    pub family: PolygonFamily,
    pub t: f64,
    pub n: u32,
    pub m: u32,
    pub h: f64,
    pub h1: f64,
    pub h2: f64,
    pub c_re: f64,
    pub c_im: f64,
}

impl PolygonSpec {
    pub fn rect(t: f64, n: u32) -> Result<Self> {
        Self::build(PolygonFamily::Rect, t, n, 0, 0.0, 0.0, 0.0, 0.0, 0.0)
    }
    pub fn slit_rect(t: f64, n: u32, m: u32, h: f64) -> Result<Self> {
        Self::build(PolygonFamily::SlitRect, t, n, m, h, 0.0, 0.0, 0.0, 0.0)
    }
    pub fn two_slit(t: f64, n: u32, m: u32, h1: f64, h2: f64) -> Result<Self> {
        Self::build(PolygonFamily::TwoSlitRect, t, n, m, 0.0, h1, h2, 0.0, 0.0)
    }
    pub fn octagon(t: f64, n: u32, m: u32, c: Complex64) -> Result<Self> {
        Self::build(PolygonFamily::BranchedOctagon, t, n, m, 0.0, 0.0, 0.0, c.re, c.im)
    }
    pub fn decagon_plus(t: f64, n: u32, m: u32, h1: f64, h2: f64) -> Result<Self> {
        Self::build(PolygonFamily::DecagonPlus, t, n, m, 0.0, h1, h2, 0.0, 0.0)
    }
    pub fn decagon_minus(t: f64, n: u32, m: u32, h1: f64, h2: f64) -> Result<Self> {
        Self::build(PolygonFamily::DecagonMinus, t, n, m, 0.0, h1, h2, 0.0, 0.0)
    }

    #[allow(clippy::too_many_arguments)]
    fn build(
        family: PolygonFamily,
        t: f64,
        n: u32,
        m: u32,
        h: f64,
        h1: f64,
        h2: f64,
        c_re: f64,
        c_im: f64,
    ) -> Result<Self> {
        let spec = PolygonSpec {
            family,
            t,
            n,
            m,
            h,
            h1,
            h2,
            c_re,
            c_im,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn c(&self) -> Complex64 {
        Complex64::new(self.c_re, self.c_im)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t > 0.0) {
            return Err(Error::Domain(format!("t must be positive, got {}", self.t)));
        }
        let (n, m) = (self.n, self.m);
        let in_open = |v: f64| v > -1.0 && v < 1.0;
        match self.family {
            PolygonFamily::Rect => {
                if n < 1 {
                    return Err(Error::Domain("Rect needs n >= 1".into()));
                }
            }
            PolygonFamily::SlitRect => {
                if n < 2 || m < 1 || m > n - 1 {
                    return Err(Error::Domain(format!(
                        "SlitRect needs m in 1..=n-1, got n = {n}, m = {m}"
                    )));
                }
                if !in_open(self.h) {
                    return Err(Error::Domain(format!("h must be in (-1,1), got {}", self.h)));
                }
            }
            PolygonFamily::TwoSlitRect => {
                if n < 3 || m < 1 || m > n - 2 {
                    return Err(Error::Domain(format!(
                        "TwoSlitRect needs m in 1..=n-2, got n = {n}, m = {m}"
                    )));
                }
                if !in_open(self.h1) || !in_open(self.h2) {
                    return Err(Error::Domain("h1, h2 must be in (-1,1)".into()));
                }
            }
            PolygonFamily::BranchedOctagon => {
                if n < 3 || m < 1 || m > n - 2 {
                    return Err(Error::Domain(format!(
                        "BranchedOctagon needs m in 1..=n-2, got n = {n}, m = {m}"
                    )));
                }
                let (lo, hi) = (m as f64 * self.t, (m + 1) as f64 * self.t);
                if !(in_open(self.c_re) && self.c_im > lo && self.c_im < hi) {
                    return Err(Error::Domain(format!(
                        "branchpoint c must lie inside (-1,1) x ({lo},{hi}), got {} + {} i",
                        self.c_re, self.c_im
                    )));
                }
            }
            PolygonFamily::DecagonPlus => {
                if n < 3 || m < 1 || m > n - 2 {
                    return Err(Error::Domain(format!(
                        "DecagonPlus needs m in 1..=n-2, got n = {n}, m = {m}"
                    )));
                }
                if !(in_open(self.h1) && in_open(self.h2) && self.h1 <= self.h2) {
                    return Err(Error::Domain(format!(
                        "need -1 < h1 <= h2 < 1, got h1 = {}, h2 = {}",
                        self.h1, self.h2
                    )));
                }
            }
            PolygonFamily::DecagonMinus => {
                if n < 3 || m > n - 3 {
                    return Err(Error::Domain(format!(
                        "DecagonMinus needs m in 0..=n-3, got n = {n}, m = {m}"
                    )));
                }
                if !(in_open(self.h1) && in_open(self.h2) && self.h1 <= self.h2) {
                    return Err(Error::Domain(format!(
                        "need -1 < h1 <= h2 < 1, got h1 = {}, h2 = {}",
                        self.h1, self.h2
                    )));
                }
            }
        }
        Ok(())
    }

    /// Height of the main rectangle in units of t (n or n-1).
    pub fn wall_quanta(&self) -> u32 {
        match self.family {
            PolygonFamily::Rect | PolygonFamily::SlitRect | PolygonFamily::TwoSlitRect => self.n,
            _ => self.n - 1,
        }
    }
}

/// Marker kinds along the real axis, in increasing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarkerKind {
    Branch,
    Zero,
}

/// One polygon side target: horizontal lengths in absolute units,
/// vertical lengths in units of t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SideTarget {
    Horizontal(f64),
    Vertical(f64),
}

impl SideTarget {
    pub fn length(&self, t: f64) -> f64 {
        match self {
            SideTarget::Horizontal(a) => *a,
            SideTarget::Vertical(q) => q * t,
        }
    }
}

/// Boundary markers of the family (kinds, in axis order) and the
/// bounded side targets between consecutive markers.  The wrap side
/// through infinity (always horizontal of length 2) is omitted.
pub fn family_layout(spec: &PolygonSpec) -> (Vec<MarkerKind>, Vec<SideTarget>) {
    use MarkerKind::{Branch as B, Zero as Z};
    use SideTarget::{Horizontal as H, Vertical as V};
    let n = spec.n as f64;
    let m = spec.m as f64;
    match spec.family {
        PolygonFamily::Rect => (vec![B, B, B, B], vec![V(n), H(2.0), V(n)]),
        PolygonFamily::SlitRect => (
            vec![B, B, B, B, Z, B, B],
            vec![
                V(n),
                H(2.0),
                V(m),
                H(1.0 - spec.h),
                H(1.0 - spec.h),
                V(n - m),
            ],
        ),
        PolygonFamily::TwoSlitRect => (
            vec![B, B, B, B, Z, B, B, Z, B, B],
            vec![
                V(n),
                H(2.0),
                V(m),
                H(1.0 - spec.h1),
                H(1.0 - spec.h1),
                V(1.0),
                H(1.0 - spec.h2),
                H(1.0 - spec.h2),
                V(n - m - 1.0),
            ],
        ),
        PolygonFamily::BranchedOctagon => (
            vec![B, B, B, B, B, B, B, B],
            vec![
                V(n - 1.0),
                H(2.0),
                V(m + 1.0),
                H(2.0),
                V(1.0),
                H(2.0),
                V(n - m - 1.0),
            ],
        ),
        PolygonFamily::DecagonPlus => (
            vec![B, B, B, B, B, B, Z, Z, B, B],
            vec![
                V(n - 1.0),
                H(2.0),
                V(m + 1.0),
                H(2.0),
                V(1.0),
                H(1.0 + spec.h2),
                H(spec.h2 - spec.h1),
                H(1.0 - spec.h1),
                V(n - m - 1.0),
            ],
        ),
        PolygonFamily::DecagonMinus => (
            vec![B, B, B, B, Z, Z, B, B, B, B],
            vec![
                V(n - 1.0),
                H(2.0),
                V(m + 1.0),
                H(1.0 - spec.h1),
                H(spec.h2 - spec.h1),
                H(1.0 + spec.h2),
                V(1.0),
                H(2.0),
                V(n - m - 1.0),
            ],
        ),
    }
}

/// Corner labels for `sc_solve_forward` diagnostics, in marker order.
pub fn family_labels(family: PolygonFamily) -> Vec<&'static str> {
    match family {
        PolygonFamily::Rect => vec!["F", "A", "B", "E"],
        PolygonFamily::SlitRect => vec!["F", "A", "B", "C", "D", "C'", "E"],
        PolygonFamily::TwoSlitRect => {
            vec!["F", "A", "B", "C1", "D1", "C1'", "C2", "D2", "C2'", "E"]
        }
        PolygonFamily::BranchedOctagon => vec!["F", "A", "B", "P3", "P4", "P1", "P2", "E"],
        PolygonFamily::DecagonPlus => {
            vec!["F", "A", "B", "P3", "P4", "P1", "G", "D", "C'", "E"]
        }
        PolygonFamily::DecagonMinus => {
            vec!["F", "A", "B", "C", "D", "G", "P4", "P1", "P2", "E"]
        }
    }
}

/// Normalize the differential scale so the bottom gap (between the
/// second and third branchpoints) maps to the segment from -1 to +1:
/// length two, oriented rightward.
pub fn normalize_scale(hd: &mut HyperellipticData) -> Result<()> {
    hd.scale = 1.0;
    let e = (hd.branchpoints[1], hd.branchpoints[2]);
    let raw = segment_integral(hd, e.0, e.1)?;
    if !(raw > 0.0) || !raw.is_finite() {
        return Err(Error::NoConvergence {
            what: "normalize_scale: degenerate bottom side".into(),
            residual: raw,
        });
    }
    let g = hd.genus();
    let mid = 0.5 * (e.0 + e.1);
    let sign_bottom = hd.numerator(mid).signum() * if g % 2 == 0 { 1.0 } else { -1.0 };
    hd.scale = sign_bottom * 2.0 / raw;
    Ok(())
}
