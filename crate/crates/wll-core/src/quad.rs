//! Gauss-Legendre quadrature nodes and complex path integrals.

use num_complex::Complex64;

/// Nodes and weights of n-point Gauss-Legendre quadrature on [-1, 1],
/// by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for k in 0..n.div_ceil(2) {
        // Chebyshev-like initial guess
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let (mut p, mut dp) = legendre(n, x);
        for _ in 0..100 {
            let dx = -p / dp;
            x += dx;
            let r = legendre(n, x);
            p = r.0;
            dp = r.1;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[k] = -x;
        nodes[n - 1 - k] = x;
        weights[k] = w;
        weights[n - 1 - k] = w;
    }
    (nodes, weights)
}

/// (P_n(x), P_n'(x)) via the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Integral of f along the straight segment [a, b] in C.
pub fn integrate_segment(
    f: &mut dyn FnMut(Complex64) -> Complex64,
    a: Complex64,
    b: Complex64,
    n: usize,
) -> Complex64 {
    let (nodes, weights) = gauss_legendre(n);
    let mid = (a + b) * 0.5;
    let half = (b - a) * 0.5;
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in nodes.iter().zip(&weights) {
        acc += f(mid + half * *x) * *w;
    }
    acc * half
}

/// Integral of f along a polyline path.
pub fn integrate_polyline(
    f: &mut dyn FnMut(Complex64) -> Complex64,
    path: &[Complex64],
    n_per_segment: usize,
) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for w in path.windows(2) {
        acc += integrate_segment(f, w[0], w[1], n_per_segment);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exactness() {
        // 8-point rule integrates degree-15 polynomials exactly
        let (nodes, weights) = gauss_legendre(8);
        let integral: f64 = nodes
            .iter()
            .zip(&weights)
            .map(|(x, w)| w * x.powi(14))
            .sum();
        assert!((integral - 2.0 / 15.0).abs() < 1e-14);
        let odd: f64 = nodes
            .iter()
            .zip(&weights)
            .map(|(x, w)| w * x.powi(7))
            .sum();
        assert!(odd.abs() < 1e-15);
    }

    #[test]
    fn closed_loop_residue() {
        // loop around the unit square centered at 0: integral of 1/z is 2 pi i
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let path = [c(1.0, -1.0), c(1.0, 1.0), c(-1.0, 1.0), c(-1.0, -1.0), c(1.0, -1.0)];
        let mut f = |z: Complex64| z.inv();
        let val = integrate_polyline(&mut f, &path, 64);
        let expect = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
        assert!((val - expect).norm() < 1e-12);
    }
}
