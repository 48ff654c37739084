//! Real rational functions in coefficient form.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// A real rational function p(x)/q(x) stored as monomial coefficients,
/// lowest degree first.  The denominator is normalized so its largest
/// coefficient has magnitude 1.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RationalFunction {
    pub numerator: Vec<f64>,
    pub denominator: Vec<f64>,
}

fn trim(mut c: Vec<f64>, tol: f64) -> Vec<f64> {
    let scale = c.iter().fold(0.0_f64, |a, &v| a.max(v.abs()));
    while c.len() > 1 && c.last().map_or(false, |&v| v.abs() <= tol * scale) {
        c.pop();
    }
    c
}

pub fn poly_eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

pub fn poly_eval_c(c: &[f64], x: Complex64) -> Complex64 {
    c.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &ci| acc * x + ci)
}

pub fn poly_deriv(c: &[f64]) -> Vec<f64> {
    if c.len() <= 1 {
        return vec![0.0];
    }
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(i, &ci)| i as f64 * ci)
        .collect()
}

pub fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn poly_sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0))
        .collect()
}

/// All complex roots of a real polynomial via the companion matrix.
pub fn poly_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let c = trim(coeffs.to_vec(), 1e-12);
    let deg = c.len() - 1;
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = c[deg];
    if lead.abs() < 1e-300 {
        return Err(Error::IllConditioned {
            what: "poly_roots: vanishing leading coefficient".into(),
            residual: lead.abs(),
        });
    }
    let mut m = DMatrix::<f64>::zeros(deg, deg);
    for i in 0..deg {
        m[(i, deg - 1)] = -c[i] / lead;
        if i > 0 {
            m[(i, i - 1)] = 1.0;
        }
    }
    let eig = m.complex_eigenvalues();
    Ok(eig.iter().copied().collect())
}

impl RationalFunction {
    pub fn new(numerator: Vec<f64>, denominator: Vec<f64>) -> Result<Self> {
        let num = trim(numerator, 1e-14);
        let den = trim(denominator, 1e-14);
        let dmax = den.iter().fold(0.0_f64, |a, &v| a.max(v.abs()));
        if dmax == 0.0 {
            return Err(Error::Domain("zero denominator polynomial".into()));
        }
        Ok(RationalFunction {
            numerator: num.iter().map(|v| v / dmax).collect(),
            denominator: den.iter().map(|v| v / dmax).collect(),
        })
    }

    /// max(deg p, deg q) after normalization.
    pub fn degree(&self) -> usize {
        (self.numerator.len() - 1).max(self.denominator.len() - 1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let q = poly_eval(&self.denominator, x);
        let p = poly_eval(&self.numerator, x);
        if q == 0.0 {
            return if p == 0.0 { f64::NAN } else { f64::INFINITY };
        }
        p / q
    }

    pub fn eval_c(&self, x: Complex64) -> Complex64 {
        poly_eval_c(&self.numerator, x) / poly_eval_c(&self.denominator, x)
    }

    /// Value at the point at infinity (ratio of top coefficients; infinite
    /// when the numerator dominates).
    pub fn eval_at_infinity(&self) -> f64 {
        let dp = self.numerator.len() - 1;
        let dq = self.denominator.len() - 1;
        if dp > dq {
            f64::INFINITY * self.numerator[dp].signum() * self.denominator[dq].signum()
        } else if dp < dq {
            0.0
        } else {
            self.numerator[dp] / self.denominator[dq]
        }
    }

    /// Numerator of the derivative: p'q - pq'.
    pub fn deriv_numerator(&self) -> Vec<f64> {
        let pd = poly_deriv(&self.numerator);
        let qd = poly_deriv(&self.denominator);
        trim(
            poly_sub(
                &poly_mul(&pd, &self.denominator),
                &poly_mul(&self.numerator, &qd),
            ),
            1e-11,
        )
    }

    /// Finite poles (denominator roots).
    pub fn poles(&self) -> Result<Vec<Complex64>> {
        poly_roots(&self.denominator)
    }

    /// Checks that numerator and denominator share no root within `tol`.
    pub fn is_coprime(&self, tol: f64) -> bool {
        let pr = match poly_roots(&self.numerator) {
            Ok(r) => r,
            Err(_) => return false,
        };
        let qr = match poly_roots(&self.denominator) {
            Ok(r) => r,
            Err(_) => return false,
        };
        for a in &pr {
            for b in &qr {
                if (a - b).norm() < tol {
                    return false;
                }
            }
        }
        true
    }
}

/// Least-squares rational fit of degree n through weighted samples,
/// linearized as p(x) - y q(x) = 0 and solved by SVD for the smallest
/// singular vector.  Samples are affinely mapped to [-1,1] internally;
/// returned coefficients are in the original variable.
pub fn fit_rational(samples: &[(f64, f64)], n: usize) -> Result<(RationalFunction, f64)> {
    if samples.len() < 2 * n + 2 {
        return Err(Error::Domain(format!(
            "need at least {} samples for a degree-{} fit, got {}",
            2 * n + 2,
            n,
            samples.len()
        )));
    }
    let lo = samples.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let hi = samples
        .iter()
        .map(|s| s.0)
        .fold(f64::NEG_INFINITY, f64::max);
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo).max(1e-300);
    let yscale = samples
        .iter()
        .map(|s| s.1.abs())
        .fold(0.0_f64, f64::max)
        .max(1.0);

    let rows = samples.len();
    let cols = 2 * (n + 1);
    let mut m = DMatrix::<f64>::zeros(rows, cols);
    for (r, &(x, y)) in samples.iter().enumerate() {
        let s = (x - mid) / half;
        let mut pw = 1.0;
        for j in 0..=n {
            m[(r, j)] = pw;
            m[(r, n + 1 + j)] = -(y / yscale) * pw;
            pw *= s;
        }
    }
    let svd = m.svd(false, true);
    let vt = svd.v_t.as_ref().expect("svd computed with vectors");
    let last = vt.nrows() - 1;
    let v: DVector<f64> = vt.row(last).transpose();
    let ps: Vec<f64> = (0..=n).map(|j| v[j] * yscale).collect();
    let qs: Vec<f64> = (0..=n).map(|j| v[n + 1 + j]).collect();

    // undo the affine map s = (x - mid)/half by binomial expansion
    let unmap = |c: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; c.len()];
        // basis: s^j = ((x - mid)/half)^j
        let mut basis = vec![1.0];
        for (j, &cj) in c.iter().enumerate() {
            if j > 0 {
                // multiply basis by (x - mid)/half
                let mut nb = vec![0.0; basis.len() + 1];
                for (i, &bi) in basis.iter().enumerate() {
                    nb[i + 1] += bi / half;
                    nb[i] -= bi * mid / half;
                }
                basis = nb;
            }
            for (i, &bi) in basis.iter().enumerate() {
                out[i] += cj * bi;
            }
        }
        out
    };
    let rf = RationalFunction::new(unmap(&ps), unmap(&qs))?;
    let resid = samples
        .iter()
        .map(|&(x, y)| {
            let v = rf.eval(x);
            (v - y).abs() / (1.0 + y.abs())
        })
        .fold(0.0_f64, f64::max);
    Ok((rf, resid))
}
