//! Gauss-Legendre panels with adaptive bisection refinement.

use std::sync::OnceLock;

const GL_N: usize = 64;

/// Nodes and weights of the 64-point Gauss-Legendre rule on [-1, 1],
/// found by Newton iteration on the Legendre recurrence.
fn gl64() -> &'static (Vec<f64>, Vec<f64>) {
    static CACHE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    CACHE.get_or_init(|| {
        let n = GL_N;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre(n, x);
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (nodes, weights)
    })
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

pub fn gl_panel<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> f64 {
    let (nodes, weights) = gl64();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(weights.iter()) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

/// Integrate f over [a, b]: one 64-point panel, then bisection passes
/// until two successive refinements agree to `rel_tol`.
pub fn adaptive<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, rel_tol: f64) -> f64 {
    fn step<F: FnMut(f64) -> f64>(
        f: &mut F,
        a: f64,
        b: f64,
        whole: f64,
        rel_tol: f64,
        depth: usize,
        scale: f64,
    ) -> f64 {
        let mid = 0.5 * (a + b);
        let left = gl_panel(f, a, mid);
        let right = gl_panel(f, mid, b);
        let refined = left + right;
        if (refined - whole).abs() <= rel_tol * scale || depth >= 14 {
            return refined;
        }
        step(f, a, mid, left, rel_tol, depth + 1, scale)
            + step(f, mid, b, right, rel_tol, depth + 1, scale)
    }
    if a == b {
        return 0.0;
    }
    let whole = gl_panel(f, a, b);
    let scale = whole.abs().max(1e-300);
    step(f, a, b, whole, rel_tol, 0, scale)
}

/// Same on a straight segment in the complex plane.
pub fn adaptive_complex<F: FnMut(num_complex::Complex64) -> num_complex::Complex64>(
    f: &mut F,
    a: num_complex::Complex64,
    b: num_complex::Complex64,
    rel_tol: f64,
) -> num_complex::Complex64 {
    use num_complex::Complex64;
    fn panel<F: FnMut(Complex64) -> Complex64>(f: &mut F, a: Complex64, b: Complex64) -> Complex64 {
        let (nodes, weights) = gl64();
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in nodes.iter().zip(weights.iter()) {
            acc += *w * f(mid + half * *x);
        }
        acc * half
    }
    fn step<F: FnMut(Complex64) -> Complex64>(
        f: &mut F,
        a: Complex64,
        b: Complex64,
        whole: Complex64,
        rel_tol: f64,
        depth: usize,
        scale: f64,
    ) -> Complex64 {
        let mid = 0.5 * (a + b);
        let left = panel(f, a, mid);
        let right = panel(f, mid, b);
        let refined = left + right;
        if (refined - whole).norm() <= rel_tol * scale || depth >= 14 {
            return refined;
        }
        step(f, a, mid, left, rel_tol, depth + 1, scale)
            + step(f, mid, b, right, rel_tol, depth + 1, scale)
    }
    let whole = panel(f, a, b);
    let scale = whole.norm().max(1e-300);
    step(f, a, b, whole, rel_tol, 0, scale)
}
