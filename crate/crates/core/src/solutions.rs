//! The six solution families for the three-band problem: forward
//! construction from polygon parameters, evaluation through the
//! composition `x -> sn(K * position(x))`, family classification by
//! topological class, and inverse design from a given band system.

use crate::bands::{BandSystem, Interval};
use crate::conformal::{
    family_layout, find_height_on_side, sc_solve_forward, solve_parameter_problem, Condition,
    DifferentialZeros, HyperellipticData, PairVar, ParamProblem, PolygonFamily, PolygonMap,
    PolygonSpec, SideTarget, SolvedPolygon, TVar,
};
use crate::elliptic::{is_infinite, modulus_from_t, x_map, EllipticModulus};
use crate::error::{Error, Result};
use crate::verify;
use num_complex::Complex64;

/// The six solution families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum FilterFamily {
    Genus1Zolotarev,
    Genus2Stiefel,
    Genus3TwoSlit,
    Genus3Octagon,
    Genus3DecagonPlus,
    Genus3DecagonMinus,
}

impl FilterFamily {
    pub const ALL: [FilterFamily; 6] = [
        FilterFamily::Genus1Zolotarev,
        FilterFamily::Genus2Stiefel,
        FilterFamily::Genus3TwoSlit,
        FilterFamily::Genus3Octagon,
        FilterFamily::Genus3DecagonPlus,
        FilterFamily::Genus3DecagonMinus,
    ];

    pub fn genus(&self) -> usize {
        match self {
            FilterFamily::Genus1Zolotarev => 1,
            FilterFamily::Genus2Stiefel => 2,
            _ => 3,
        }
    }

    /// Declared topological class: parities of gap zero counts.
    pub fn sigma(&self, n: u32) -> [u8; 3] {
        match self {
            FilterFamily::Genus1Zolotarev
            | FilterFamily::Genus2Stiefel
            | FilterFamily::Genus3TwoSlit => [1, 0, ((n + 1) % 2) as u8],
            _ => [1, 1, (n % 2) as u8],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FilterFamily::Genus1Zolotarev => "Genus1Zolotarev",
            FilterFamily::Genus2Stiefel => "Genus2Stiefel",
            FilterFamily::Genus3TwoSlit => "Genus3TwoSlit",
            FilterFamily::Genus3Octagon => "Genus3Octagon",
            FilterFamily::Genus3DecagonPlus => "Genus3DecagonPlus",
            FilterFamily::Genus3DecagonMinus => "Genus3DecagonMinus",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        FilterFamily::ALL
            .iter()
            .copied()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Domain(format!("unknown family '{s}'")))
    }

    fn polygon_family(&self) -> PolygonFamily {
        match self {
            FilterFamily::Genus1Zolotarev => PolygonFamily::Rect,
            FilterFamily::Genus2Stiefel => PolygonFamily::SlitRect,
            FilterFamily::Genus3TwoSlit => PolygonFamily::TwoSlitRect,
            FilterFamily::Genus3Octagon => PolygonFamily::BranchedOctagon,
            FilterFamily::Genus3DecagonPlus => PolygonFamily::DecagonPlus,
            FilterFamily::Genus3DecagonMinus => PolygonFamily::DecagonMinus,
        }
    }
}

/// Family-specific continuous parameters of the forward construction.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum FamilyExtras {
    /// passband split heights, m <= v1 < v2 <= m+1
    Genus1 { v1: f64, v2: f64 },
    /// slit abscissa and the twofold passband choice v in [m-1, m+1]
    Genus2 { h: f64, v: f64 },
    TwoSlit { h1: f64, h2: f64 },
    Octagon { c_re: f64, c_im: f64 },
    Decagon { h1: f64, h2: f64 },
}

/// Everything needed to evaluate R(x): the curve with its normalized
/// differential, the modulus, and the bookkeeping of the family.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FilterSolution {
    pub family: FilterFamily,
    pub n: u32,
    pub m: u32,
    pub modulus: EllipticModulus,
    pub hd: HyperellipticData,
    /// value of the raw solution at the anchor branchpoint (first
    /// prevertex): one of +-1, +-kinv
    pub anchor_value: f64,
    /// rectangle phase offset A(e) for that anchor, in u-units
    pub phase_re: f64,
    pub phase_im: f64,
    pub sigma: [u8; 3],
    pub mu: f64,
}

impl FilterSolution {
    /// 2k/(k+1): multiplying the raw values by this yields the
    /// equiripple approximation of the band indicator.
    pub fn scale(&self) -> f64 {
        let k = self.modulus.k();
        2.0 * k / (k + 1.0)
    }

    pub fn evaluator(&self) -> Result<SolutionEvaluator> {
        SolutionEvaluator::new(self)
    }
}

/// Cached polygon development for repeated evaluation.
pub struct SolutionEvaluator {
    pub map: PolygonMap,
    pub modulus: EllipticModulus,
}

impl SolutionEvaluator {
    pub fn new(sol: &FilterSolution) -> Result<Self> {
        Ok(SolutionEvaluator {
            map: PolygonMap::build(sol.hd.clone())?,
            modulus: sol.modulus,
        })
    }

    /// Raw solution value: sn(K * position(x)); poles come back as
    /// +-infinity.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let pos = self.map.position(x)?;
        let v = x_map(pos, &self.modulus);
        if is_infinite(v) {
            return Ok(f64::INFINITY);
        }
        Ok(v.re)
    }

    pub fn eval_complex(&self, x: Complex64) -> Result<Complex64> {
        Ok(x_map(self.map.position_c(x)?, &self.modulus))
    }
}

/// One-shot evaluation; builds the polygon development each call, so
/// prefer `FilterSolution::evaluator` in loops.
pub fn eval_solution(sol: &FilterSolution, x: f64) -> Result<f64> {
    sol.evaluator()?.eval(x)
}

/// Rectangle offset A(e) for an anchor value in {+1, -1, +kinv, -kinv}:
/// +-1 maps to +-1 and +-kinv to +-1 + tau (u-units).
pub fn phase_shift(anchor_value: f64, md: &EllipticModulus) -> Result<Complex64> {
    let tol = 1e-7 * (1.0 + md.kinv);
    if (anchor_value - 1.0).abs() < tol {
        Ok(Complex64::new(1.0, 0.0))
    } else if (anchor_value + 1.0).abs() < tol {
        Ok(Complex64::new(-1.0, 0.0))
    } else if (anchor_value - md.kinv).abs() < tol {
        Ok(Complex64::new(1.0, md.t))
    } else if (anchor_value + md.kinv).abs() < tol {
        Ok(Complex64::new(-1.0, md.t))
    } else {
        Err(Error::Domain(format!(
            "anchor value {anchor_value} not in {{+-1, +-{}}}",
            md.kinv
        )))
    }
}

fn polygon_spec(family: FilterFamily, t: f64, n: u32, m: u32, extras: &FamilyExtras) -> Result<PolygonSpec> {
    match (family, extras) {
        (FilterFamily::Genus1Zolotarev, FamilyExtras::Genus1 { .. }) => PolygonSpec::rect(t, n),
        (FilterFamily::Genus2Stiefel, FamilyExtras::Genus2 { h, .. }) => {
            PolygonSpec::slit_rect(t, n, m, *h)
        }
        (FilterFamily::Genus3TwoSlit, FamilyExtras::TwoSlit { h1, h2 }) => {
            PolygonSpec::two_slit(t, n, m, *h1, *h2)
        }
        (FilterFamily::Genus3Octagon, FamilyExtras::Octagon { c_re, c_im }) => {
            PolygonSpec::octagon(t, n, m, Complex64::new(*c_re, *c_im))
        }
        (FilterFamily::Genus3DecagonPlus, FamilyExtras::Decagon { h1, h2 }) => {
            PolygonSpec::decagon_plus(t, n, m, *h1, *h2)
        }
        (FilterFamily::Genus3DecagonMinus, FamilyExtras::Decagon { h1, h2 }) => {
            PolygonSpec::decagon_minus(t, n, m, *h1, *h2)
        }
        _ => Err(Error::Domain(format!(
            "extras {extras:?} do not match family {family:?}"
        ))),
    }
}

/// Band system of a solved polygon: stopband = left wall, passbands =
/// the two right-wall arcs of the family, with the Stiefel v-choice
/// carving the passband endpoint inside a wall when v is fractional.
fn bands_of(
    family: FilterFamily,
    sol_markers: &[f64],
    hd: &HyperellipticData,
    t: f64,
    n: u32,
    m: u32,
    extras: &FamilyExtras,
) -> Result<BandSystem> {
    let pm = PolygonMap::build(hd.clone())?;
    let mk = sol_markers;
    let (eminus, e1, e2) = match family {
        FilterFamily::Genus1Zolotarev => {
            let FamilyExtras::Genus1 { v1, v2 } = extras else {
                unreachable!()
            };
            let x1 = find_height_on_side(&pm, mk[2], mk[3], v1 * t)?;
            let x2 = find_height_on_side(&pm, mk[2], mk[3], v2 * t)?;
            (
                Interval::new(mk[0], mk[1]),
                Interval::new(mk[2], x1),
                Interval::new(x2, mk[3]),
            )
        }
        FilterFamily::Genus2Stiefel => {
            let FamilyExtras::Genus2 { v, .. } = extras else {
                unreachable!()
            };
            if *v >= m as f64 {
                let x2 = find_height_on_side(&pm, mk[5], mk[6], v * t)?;
                (
                    Interval::new(mk[0], mk[1]),
                    Interval::new(mk[2], mk[3]),
                    Interval::new(x2, mk[6]),
                )
            } else {
                let x1 = find_height_on_side(&pm, mk[2], mk[3], v * t)?;
                (
                    Interval::new(mk[0], mk[1]),
                    Interval::new(mk[2], x1),
                    Interval::new(mk[5], mk[6]),
                )
            }
        }
        FilterFamily::Genus3TwoSlit => (
            Interval::new(mk[0], mk[1]),
            Interval::new(mk[2], mk[3]),
            Interval::new(mk[8], mk[9]),
        ),
        FilterFamily::Genus3Octagon => (
            Interval::new(mk[0], mk[1]),
            Interval::new(mk[2], mk[3]),
            Interval::new(mk[6], mk[7]),
        ),
        FilterFamily::Genus3DecagonPlus | FilterFamily::Genus3DecagonMinus => (
            Interval::new(mk[0], mk[1]),
            Interval::new(mk[2], mk[3]),
            Interval::new(mk[8], mk[9]),
        ),
    };
    let _ = n;
    BandSystem::new(eminus, e1, e2)
}

fn anchor_data(
    hd: &HyperellipticData,
    md: &EllipticModulus,
) -> Result<(f64, Complex64)> {
    // the anchor is the first prevertex (corner F at the top of the
    // left wall); its value determines the phase offset
    let pm = PolygonMap::build(hd.clone())?;
    let pos = pm.corner(0);
    let v = x_map(pos, md);
    if is_infinite(v) || v.im.abs() > 1e-8 * (1.0 + v.norm()) {
        return Err(Error::NoConvergence {
            what: "anchor value not real".into(),
            residual: v.im.abs(),
        });
    }
    let offset = phase_shift(v.re, md)?;
    Ok((v.re, offset))
}

/// Build one solution family at the given polygon parameters; returns
/// the solution together with its band system.
pub fn forward_construct(
    family: FilterFamily,
    t: f64,
    n: u32,
    m: u32,
    extras: FamilyExtras,
) -> Result<(FilterSolution, BandSystem)> {
    validate_extras(family, t, n, m, &extras)?;
    let spec = polygon_spec(family, t, n, m, &extras)?;
    let sc = sc_solve_forward(&spec)?;
    let md = modulus_from_t(t)?;
    let bands = bands_of(family, &sc.markers, &sc.hd, t, n, m, &extras)?;
    let (anchor_value, offset) = anchor_data(&sc.hd, &md)?;
    let k = md.k();
    let sol = FilterSolution {
        family,
        n,
        m,
        modulus: md,
        hd: sc.hd,
        anchor_value,
        phase_re: offset.re,
        phase_im: offset.im,
        sigma: family.sigma(n),
        mu: (1.0 - k) / (1.0 + k),
    };
    Ok((sol, bands))
}

fn validate_extras(
    family: FilterFamily,
    t: f64,
    n: u32,
    m: u32,
    extras: &FamilyExtras,
) -> Result<()> {
    let _ = t;
    match (family, extras) {
        (FilterFamily::Genus1Zolotarev, FamilyExtras::Genus1 { v1, v2 }) => {
            if m >= n {
                return Err(Error::Domain(format!("m must be in [0, n-1], got {m}")));
            }
            if !(m as f64 <= *v1 && v1 < v2 && *v2 <= m as f64 + 1.0) {
                return Err(Error::Domain(format!(
                    "need m <= v1 < v2 <= m+1, got v1 = {v1}, v2 = {v2}"
                )));
            }
            if *v1 == 0.0 || *v2 == n as f64 {
                return Err(Error::Domain(
                    "split at the wall corner collapses a passband".into(),
                ));
            }
        }
        (FilterFamily::Genus2Stiefel, FamilyExtras::Genus2 { v, .. }) => {
            if !(*v >= m as f64 - 1.0 && *v <= m as f64 + 1.0) {
                return Err(Error::Domain(format!(
                    "v must lie in [m-1, m+1], got {v}"
                )));
            }
            if *v <= 0.0 || *v >= n as f64 {
                return Err(Error::Domain(
                    "v at the wall corner collapses a passband".into(),
                ));
            }
        }
        _ => {}
    }
    Ok(())
}

/// Candidate families for a band system and class, best first: the
/// genus-2 family dominates, then the others by genus distance.
pub fn classify(bands: &BandSystem, n: u32, sigma: [u8; 3]) -> Result<Vec<FilterFamily>> {
    let _ = bands;
    let parity: u8 = (sigma[0] + sigma[1] + sigma[2]) % 2;
    if parity != (n % 2) as u8 {
        return Err(Error::Domain(format!(
            "class {sigma:?} violates the parity constraint for degree {n}"
        )));
    }
    let norm = [sigma[0] % 2, sigma[1] % 2, sigma[2] % 2];
    if norm == [1, 0, ((n + 1) % 2) as u8] {
        Ok(vec![
            FilterFamily::Genus2Stiefel,
            FilterFamily::Genus1Zolotarev,
            FilterFamily::Genus3TwoSlit,
        ])
    } else if norm == [1, 1, (n % 2) as u8] {
        Ok(vec![
            FilterFamily::Genus3Octagon,
            FilterFamily::Genus3DecagonPlus,
            FilterFamily::Genus3DecagonMinus,
        ])
    } else {
        Ok(Vec::new())
    }
}

/// Recovered parameters of a designed solution.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RecoveredParams {
    pub t: f64,
    pub m: u32,
    pub extras: FamilyExtras,
}

#[derive(Debug, Clone)]
pub struct DesignOutcome {
    pub solution: FilterSolution,
    pub family: FilterFamily,
    pub recovered: RecoveredParams,
    pub report: verify::VerificationReport,
    /// residual diagnostics of every attempt, converged or not
    pub attempts: Vec<(String, f64)>,
}

/// Estimate of the quantum t from the genus-1 (two-band) reduction:
/// aspect ratio of the rectangle on (b1, b2, b3, b6) divided by n.
fn genus1_t_estimate(bands: &BandSystem, n: u32) -> Result<f64> {
    let e = bands.endpoints();
    let hd = HyperellipticData::new(
        vec![e[0], e[1], e[2], e[5]],
        DifferentialZeros::Real(vec![]),
        1.0,
    )?;
    let bottom = crate::conformal::segment_integral(&hd, e[1], e[2])?;
    let right = crate::conformal::segment_integral(&hd, e[2], e[5])?;
    Ok(2.0 * right / (bottom * n as f64))
}

struct DesignBinding {
    family: FilterFamily,
    m: u32,
    /// pinned marker indices -> band endpoint slot (0..6)
    pins: Vec<(usize, usize)>,
    free: Vec<usize>,
    /// initial fractions of the free markers across their bracket
    fractions: Vec<f64>,
    conditions: Vec<Condition>,
    pair: bool,
    /// for the Stiefel v <= m variant the first passband endpoint b4 is
    /// interior to a wall rather than a prevertex
    variant_b: bool,
}

fn design_bindings(family: FilterFamily, n: u32, m: u32) -> Vec<DesignBinding> {
    use Condition::{LinComb, Side};
    use SideTarget::{Horizontal as H, Vertical as V};
    let nf = n as f64;
    let mf = m as f64;
    match family {
        FilterFamily::Genus1Zolotarev => Vec::new(),
        FilterFamily::Genus2Stiefel => vec![
            DesignBinding {
                family,
                m,
                pins: vec![(0, 0), (1, 1), (2, 2), (3, 3), (6, 5)],
                free: vec![4, 5],
                fractions: vec![0.25, 0.5],
                conditions: vec![
                    Side { side: 0, target: V(nf) },
                    Side { side: 2, target: V(mf) },
                    Side { side: 5, target: V(nf - mf) },
                    LinComb { terms: vec![(3, 1.0), (4, -1.0)], alpha: 0.0 },
                ],
                pair: false,
                variant_b: false,
            },
            DesignBinding {
                family,
                m,
                pins: vec![(0, 0), (1, 1), (2, 2), (5, 4), (6, 5)],
                free: vec![3, 4],
                fractions: vec![0.5, 0.75],
                conditions: vec![
                    Side { side: 0, target: V(nf) },
                    Side { side: 2, target: V(mf) },
                    Side { side: 5, target: V(nf - mf) },
                    LinComb { terms: vec![(3, 1.0), (4, -1.0)], alpha: 0.0 },
                ],
                pair: false,
                variant_b: true,
            },
        ],
        FilterFamily::Genus3TwoSlit => vec![DesignBinding {
            family,
            m,
            pins: vec![(0, 0), (1, 1), (2, 2), (3, 3), (8, 4), (9, 5)],
            free: vec![4, 5, 6, 7],
            fractions: vec![0.2, 0.4, 0.6, 0.8],
            conditions: vec![
                Side { side: 0, target: V(nf) },
                Side { side: 2, target: V(mf) },
                Side { side: 5, target: V(1.0) },
                Side { side: 8, target: V(nf - mf - 1.0) },
                LinComb { terms: vec![(3, 1.0), (4, -1.0)], alpha: 0.0 },
                LinComb { terms: vec![(6, 1.0), (7, -1.0)], alpha: 0.0 },
            ],
            pair: false,
            variant_b: false,
        }],
        FilterFamily::Genus3Octagon => vec![DesignBinding {
            family,
            m,
            pins: vec![(0, 0), (1, 1), (2, 2), (3, 3), (6, 4), (7, 5)],
            free: vec![4, 5],
            fractions: vec![0.4, 0.6],
            conditions: vec![
                Side { side: 0, target: V(nf - 1.0) },
                Side { side: 2, target: V(mf + 1.0) },
                Side { side: 3, target: H(2.0) },
                Side { side: 4, target: V(1.0) },
                Side { side: 5, target: H(2.0) },
                Side { side: 6, target: V(nf - mf - 1.0) },
            ],
            pair: true,
            variant_b: false,
        }],
        FilterFamily::Genus3DecagonPlus => vec![DesignBinding {
            family,
            m,
            pins: vec![(0, 0), (1, 1), (2, 2), (3, 3), (8, 4), (9, 5)],
            free: vec![4, 5, 6, 7],
            fractions: vec![0.2, 0.4, 0.6, 0.8],
            conditions: vec![
                Side { side: 0, target: V(nf - 1.0) },
                Side { side: 2, target: V(mf + 1.0) },
                Side { side: 3, target: H(2.0) },
                Side { side: 4, target: V(1.0) },
                Side { side: 8, target: V(nf - mf - 1.0) },
                LinComb { terms: vec![(5, 1.0), (6, -1.0), (7, 1.0)], alpha: 2.0 },
            ],
            pair: false,
            variant_b: false,
        }],
        FilterFamily::Genus3DecagonMinus => vec![DesignBinding {
            family,
            m,
            pins: vec![(0, 0), (1, 1), (2, 2), (3, 3), (8, 4), (9, 5)],
            free: vec![4, 5, 6, 7],
            fractions: vec![0.2, 0.4, 0.6, 0.8],
            conditions: vec![
                Side { side: 0, target: V(nf - 1.0) },
                Side { side: 2, target: V(mf + 1.0) },
                Side { side: 6, target: V(1.0) },
                Side { side: 7, target: H(2.0) },
                Side { side: 8, target: V(nf - mf - 1.0) },
                LinComb { terms: vec![(3, 1.0), (4, -1.0), (5, 1.0)], alpha: 2.0 },
            ],
            pair: false,
            variant_b: false,
        }],
    }
}

/// Height (in units of t) of a point x on the vertical wall between
/// two markers.
fn wall_height(pm: &PolygonMap, x: f64, t: f64) -> Result<f64> {
    Ok(pm.position(x)?.im / t)
}

fn genus1_design(
    bands: &BandSystem,
    n: u32,
    attempts: &mut Vec<(String, f64)>,
) -> Result<(FilterSolution, RecoveredParams)> {
    let e = bands.endpoints();
    let t = genus1_t_estimate(bands, n)?;
    let md = modulus_from_t(t)?;
    let mut hd = HyperellipticData::new(
        vec![e[0], e[1], e[2], e[5]],
        DifferentialZeros::Real(vec![]),
        1.0,
    )?;
    crate::conformal::normalize_scale(&mut hd)?;
    let pm = PolygonMap::build(hd.clone())?;
    // left wall must develop to height n t as well (aspect consistency)
    let left = pm.corner(0).im / t;
    if (left - n as f64).abs() > 1e-7 * n as f64 {
        attempts.push(("Genus1Zolotarev aspect".into(), (left - n as f64).abs()));
        return Err(Error::NoConvergence {
            what: "genus-1 aspect mismatch".into(),
            residual: (left - n as f64).abs(),
        });
    }
    let v1 = wall_height(&pm, e[3], t)?;
    let v2 = wall_height(&pm, e[4], t)?;
    let m = v1.floor();
    let fits = m >= 0.0
        && v1 >= m - 1e-9
        && v2 > v1
        && v2 <= m + 1.0 + 1e-9
        && v1 > 1e-9
        && v2 < n as f64 - 1e-9;
    if !fits {
        attempts.push((
            "Genus1Zolotarev split".into(),
            (v2 - v1 - 1.0).max(v2 - m - 1.0).max(0.0),
        ));
        return Err(Error::NoConvergence {
            what: format!("lacuna straddles a quantum corner: v1 = {v1}, v2 = {v2}"),
            residual: v2 - v1,
        });
    }
    let (anchor_value, offset) = anchor_data(&hd, &md)?;
    let k = md.k();
    let sol = FilterSolution {
        family: FilterFamily::Genus1Zolotarev,
        n,
        m: m as u32,
        modulus: md,
        hd,
        anchor_value,
        phase_re: offset.re,
        phase_im: offset.im,
        sigma: FilterFamily::Genus1Zolotarev.sigma(n),
        mu: (1.0 - k) / (1.0 + k),
    };
    let rec = RecoveredParams {
        t,
        m: m as u32,
        extras: FamilyExtras::Genus1 { v1, v2 },
    };
    Ok((sol, rec))
}

fn recovered_extras(
    binding: &DesignBinding,
    solved: &SolvedPolygon,
    bands: &BandSystem,
    n: u32,
) -> Result<FamilyExtras> {
    let t = solved.t;
    let markers = &solved.markers;
    let hd = &solved.hd;
    let m = binding.m as f64;
    let scaled = |a: f64, b: f64| -> Result<f64> {
        Ok(crate::conformal::segment_integral(hd, a, b)?)
    };
    match binding.family {
        FilterFamily::Genus2Stiefel => {
            let pm = PolygonMap::build(hd.clone())?;
            let span = bands.e2plus.hi - bands.eminus.lo;
            let (h, v);
            if binding.variant_b {
                // the first passband ends inside the lower wall piece:
                // its prevertex must sit beyond the band endpoint
                if markers[3] < bands.e1plus.hi - 1e-9 * span {
                    return Err(Error::NoConvergence {
                        what: "slit mouth entered the first passband".into(),
                        residual: bands.e1plus.hi - markers[3],
                    });
                }
                h = 1.0 - scaled(markers[3], markers[4])?;
                v = wall_height(&pm, bands.e1plus.hi, t)?;
                if !(v >= m - 1.0 - 1e-7 && v <= m + 1e-7) {
                    return Err(Error::NoConvergence {
                        what: format!("recovered v = {v} outside [m-1, m]"),
                        residual: v - m,
                    });
                }
            } else {
                if markers[5] > bands.e2plus.lo + 1e-9 * span {
                    return Err(Error::NoConvergence {
                        what: "slit mouth entered the second passband".into(),
                        residual: markers[5] - bands.e2plus.lo,
                    });
                }
                h = 1.0 - scaled(markers[3], markers[4])?;
                v = wall_height(&pm, bands.e2plus.lo, t)?;
                if !(v >= m - 1e-7 && v <= m + 1.0 + 1e-7) {
                    return Err(Error::NoConvergence {
                        what: format!("recovered v = {v} outside [m, m+1]"),
                        residual: v - m,
                    });
                }
            }
            let _ = n;
            Ok(FamilyExtras::Genus2 { h, v })
        }
        FilterFamily::Genus3TwoSlit => {
            let h1 = 1.0 - scaled(markers[3], markers[4])?;
            let h2 = 1.0 - scaled(markers[6], markers[7])?;
            Ok(FamilyExtras::TwoSlit { h1, h2 })
        }
        FilterFamily::Genus3Octagon => {
            let (a, b) = solved.pair.expect("octagon pair");
            let pm = PolygonMap::build(hd.clone())?;
            let c = pm.position_c(Complex64::new(a, b))?;
            Ok(FamilyExtras::Octagon { c_re: c.re, c_im: c.im })
        }
        FilterFamily::Genus3DecagonPlus => {
            let h2 = scaled(markers[5], markers[6])? - 1.0;
            let h1 = 1.0 - scaled(markers[7], markers[8])?;
            Ok(FamilyExtras::Decagon { h1, h2 })
        }
        FilterFamily::Genus3DecagonMinus => {
            let h1 = 1.0 - scaled(markers[3], markers[4])?;
            let h2 = scaled(markers[5], markers[6])? - 1.0;
            Ok(FamilyExtras::Decagon { h1, h2 })
        }
        FilterFamily::Genus1Zolotarev => unreachable!(),
    }
}

/// Inverse design: find the family and Ansatz parameters whose solution
/// has the given bands and class.  Candidates are attempted in the
/// classification order; the first one whose solution verifies with
/// 2n+2 alternation points wins.
pub fn design(bands: &BandSystem, n: u32, sigma: [u8; 3]) -> Result<DesignOutcome> {
    let candidates = classify(bands, n, sigma)?;
    if candidates.is_empty() {
        return Err(Error::NoSolutionFound(vec![(
            format!("no family carries class {sigma:?}"),
            f64::NAN,
        )]));
    }
    let e = bands.endpoints();
    let t_est = genus1_t_estimate(bands, n)?;
    let mut attempts: Vec<(String, f64)> = Vec::new();

    for family in candidates {
        if family == FilterFamily::Genus1Zolotarev {
            match genus1_design(bands, n, &mut attempts) {
                Ok((sol, rec)) => {
                    if let Some(out) = finish_design(sol, rec, bands, n, &mut attempts)? {
                        return Ok(out);
                    }
                }
                Err(_) => continue,
            }
            continue;
        }
        // admissible slit levels, nearest to the height estimate first
        let (kinds, _) = family_layout(&dummy_spec(family, n));
        let m_range: Vec<u32> = match family {
            FilterFamily::Genus2Stiefel => (1..n).collect(),
            FilterFamily::Genus3TwoSlit => (1..n.saturating_sub(1)).collect(),
            FilterFamily::Genus3Octagon | FilterFamily::Genus3DecagonPlus => {
                (1..n.saturating_sub(1)).collect()
            }
            FilterFamily::Genus3DecagonMinus => (0..n.saturating_sub(2)).collect(),
            FilterFamily::Genus1Zolotarev => unreachable!(),
        };
        let mut ms = m_range;
        // height of the first passband end in quanta, from the estimate
        let v4_est = genus1_height_estimate(bands, e[3], t_est).unwrap_or(1.0);
        let m_hat = match family {
            FilterFamily::Genus2Stiefel | FilterFamily::Genus3TwoSlit => v4_est,
            _ => v4_est - 1.0,
        };
        ms.sort_by(|a, b| {
            (*a as f64 - m_hat)
                .abs()
                .partial_cmp(&(*b as f64 - m_hat).abs())
                .unwrap()
        });
        for m in ms {
            for binding in design_bindings(family, n, m) {
                let label = format!("{} m={}{}", family.name(), m, if binding.variant_b { " v<=m" } else { "" });
                let problem = binding_problem(&binding, &kinds, bands, t_est);
                match solve_parameter_problem(&problem) {
                    Ok(solved) => {
                        match design_solution(&binding, &solved, bands, n) {
                            Ok((sol, rec)) => {
                                attempts.push((label.clone(), solved.residual));
                                if let Some(out) =
                                    finish_design(sol, rec, bands, n, &mut attempts)?
                                {
                                    return Ok(out);
                                }
                            }
                            Err(err) => attempts.push((format!("{label}: {err}"), solved.residual)),
                        }
                    }
                    Err(err) => {
                        let residual = match err {
                            Error::NoConvergence { residual, .. } => residual,
                            _ => f64::NAN,
                        };
                        attempts.push((label, residual));
                    }
                }
            }
        }
    }
    Err(Error::NoSolutionFound(attempts))
}

fn dummy_spec(family: FilterFamily, n: u32) -> PolygonSpec {
    // only the marker template is read from this spec
    let pf = family.polygon_family();
    PolygonSpec {
        family: pf,
        t: 1.0,
        n,
        m: 1,
        h: 0.0,
        h1: 0.0,
        h2: 0.0,
        c_re: 0.0,
        c_im: 1.5,
    }
}

fn genus1_height_estimate(bands: &BandSystem, x: f64, t: f64) -> Result<f64> {
    let e = bands.endpoints();
    let mut hd = HyperellipticData::new(
        vec![e[0], e[1], e[2], e[5]],
        DifferentialZeros::Real(vec![]),
        1.0,
    )?;
    crate::conformal::normalize_scale(&mut hd)?;
    let pm = PolygonMap::build(hd)?;
    wall_height(&pm, x, t)
}

fn binding_problem(
    binding: &DesignBinding,
    kinds: &[crate::conformal::MarkerKind],
    bands: &BandSystem,
    t_est: f64,
) -> ParamProblem {
    let e = bands.endpoints();
    let pinned: Vec<(usize, f64)> = binding.pins.iter().map(|&(i, s)| (i, e[s])).collect();
    // bracket of the free run: the pinned values surrounding it
    let lo = pinned
        .iter()
        .filter(|(i, _)| *i < binding.free[0])
        .map(|&(_, v)| v)
        .fold(f64::NEG_INFINITY, f64::max);
    let hi = pinned
        .iter()
        .filter(|(i, _)| *i > *binding.free.last().unwrap())
        .map(|&(_, v)| v)
        .fold(f64::INFINITY, f64::min);
    let free_init: Vec<f64> = binding
        .fractions
        .iter()
        .map(|f| lo + (hi - lo) * f)
        .collect();
    let pair = if binding.pair {
        Some(PairVar::Unknown {
            re: 0.5 * (lo + hi),
            im: 0.05 * (hi - lo),
        })
    } else {
        None
    };
    ParamProblem {
        kinds: kinds.to_vec(),
        pinned,
        free: binding.free.clone(),
        free_init,
        t: TVar::Unknown { init: t_est },
        pair,
        conditions: binding.conditions.clone(),
    }
}

fn design_solution(
    binding: &DesignBinding,
    solved: &SolvedPolygon,
    bands: &BandSystem,
    n: u32,
) -> Result<(FilterSolution, RecoveredParams)> {
    let md = modulus_from_t(solved.t)?;
    let extras = recovered_extras(binding, solved, bands, n)?;
    let (anchor_value, offset) = anchor_data(&solved.hd, &md)?;
    let k = md.k();
    let sol = FilterSolution {
        family: binding.family,
        n,
        m: binding.m,
        modulus: md,
        hd: solved.hd.clone(),
        anchor_value,
        phase_re: offset.re,
        phase_im: offset.im,
        sigma: binding.family.sigma(n),
        mu: (1.0 - k) / (1.0 + k),
    };
    let rec = RecoveredParams {
        t: solved.t,
        m: binding.m,
        extras,
    };
    Ok((sol, rec))
}

fn finish_design(
    sol: FilterSolution,
    rec: RecoveredParams,
    bands: &BandSystem,
    n: u32,
    attempts: &mut Vec<(String, f64)>,
) -> Result<Option<DesignOutcome>> {
    let ev = sol.evaluator()?;
    let scale = sol.scale();
    let f = |x: f64| ev.eval(x).unwrap_or(f64::INFINITY);
    let report = match verify::full_report(&f, scale, bands, n as usize, &sol.modulus, 128) {
        Ok(r) => r,
        Err(err) => {
            attempts.push((format!("{} verification: {err}", sol.family.name()), f64::NAN));
            return Ok(None);
        }
    };
    if report.alternation_count != 2 * n as usize + 2 {
        attempts.push((
            format!(
                "{} alternation count {} != {}",
                sol.family.name(),
                report.alternation_count,
                2 * n + 2
            ),
            f64::NAN,
        ));
        return Ok(None);
    }
    let family = sol.family;
    Ok(Some(DesignOutcome {
        solution: sol,
        family,
        recovered: rec,
        report,
        attempts: attempts.clone(),
    }))
}

/// t from a segment aspect; exposed for tests of the estimate.
pub fn t_estimate_for(bands: &BandSystem, n: u32) -> Result<f64> {
    genus1_t_estimate(bands, n)
}
