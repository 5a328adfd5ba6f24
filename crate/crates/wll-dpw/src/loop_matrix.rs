//! Matrices of Laurent polynomials in the loop parameter, twisted by the
//! involution A -> D A D^{-1} with D = diag(-I4, I_{2m-4}): block-diagonal
//! parts live in even powers, off-diagonal parts in odd powers.

use nalgebra::DMatrix;
use num_complex::Complex64;

type C = Complex64;
pub type CMat = DMatrix<C>;

/// gamma(lambda) = sum_k coeffs[k] lambda^{k_min + k}.
#[derive(Clone, Debug)]
pub struct LoopMatrix {
    pub k_min: i32,
    pub coeffs: Vec<CMat>,
}

impl LoopMatrix {
    pub fn dim(&self) -> usize {
        self.coeffs[0].nrows()
    }

    pub fn k_max(&self) -> i32 {
        self.k_min + self.coeffs.len() as i32 - 1
    }

    pub fn identity(dim: usize) -> Self {
        LoopMatrix {
            k_min: 0,
            coeffs: vec![CMat::identity(dim, dim)],
        }
    }

    pub fn coeff(&self, k: i32) -> CMat {
        let dim = self.dim();
        if k < self.k_min || k > self.k_max() {
            CMat::zeros(dim, dim)
        } else {
            self.coeffs[(k - self.k_min) as usize].clone()
        }
    }

    /// Drop zero leading/trailing coefficients.
    pub fn trim(mut self) -> Self {
        let is_zero = |m: &CMat| m.iter().all(|v| v.norm() == 0.0);
        while self.coeffs.len() > 1 && is_zero(self.coeffs.last().unwrap()) {
            self.coeffs.pop();
        }
        while self.coeffs.len() > 1 && is_zero(&self.coeffs[0]) {
            self.coeffs.remove(0);
            self.k_min += 1;
        }
        self
    }

    pub fn mul(&self, r: &LoopMatrix) -> LoopMatrix {
        let dim = self.dim();
        let k_min = self.k_min + r.k_min;
        let len = self.coeffs.len() + r.coeffs.len() - 1;
        let mut coeffs = vec![CMat::zeros(dim, dim); len];
        for (a, ca) in self.coeffs.iter().enumerate() {
            for (b, cb) in r.coeffs.iter().enumerate() {
                coeffs[a + b] += ca * cb;
            }
        }
        LoopMatrix { k_min, coeffs }
    }

    pub fn eval(&self, lambda: C) -> CMat {
        let dim = self.dim();
        let mut acc = CMat::zeros(dim, dim);
        for (k, c) in self.coeffs.iter().enumerate() {
            let p = lambda.powi(self.k_min + k as i32);
            acc += c.scale(1.0) * C::from(p);
        }
        acc
    }

    /// Largest coefficient magnitude, for residual scaling.
    pub fn sup_norm(&self) -> f64 {
        self.coeffs
            .iter()
            .flat_map(|m| m.iter())
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    /// Twisting defect: block-diagonal entries of odd coefficients and
    /// off-diagonal entries of even coefficients (all must vanish).
    pub fn twist_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (idx, c) in self.coeffs.iter().enumerate() {
            let k = self.k_min + idx as i32;
            let odd = k.rem_euclid(2) == 1;
            for r in 0..self.dim() {
                for s in 0..self.dim() {
                    let off = (r < 4) != (s < 4);
                    if off != odd {
                        worst = worst.max(c[(r, s)].norm());
                    }
                }
            }
        }
        worst
    }

    /// Reality defect of the Laurent coefficients: a loop is real-valued on
    /// the unit circle iff coeff(-k) = conj(coeff(k)) for all k.
    pub fn reality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for k in self.k_min..=self.k_max() {
            let a = self.coeff(k);
            let b = self.coeff(-k).map(|v| v.conj());
            worst = worst.max((a - b).iter().map(|v| v.norm()).fold(0.0, f64::max));
        }
        worst
    }

    /// Membership defect max over sampled unit-circle points of
    /// ||gamma^t I gamma - I||.
    pub fn group_defect(&self, n_samples: usize) -> f64 {
        let dim = self.dim();
        let metric = lorentz_metric(dim);
        let mut worst: f64 = 0.0;
        for s in 0..n_samples {
            let lambda = C::from_polar(1.0, 2.0 * std::f64::consts::PI * s as f64 / n_samples as f64 + 0.37);
            let g = self.eval(lambda);
            let d = g.transpose() * &metric * &g - &metric;
            worst = worst.max(d.iter().map(|v| v.norm()).fold(0.0, f64::max));
        }
        worst
    }
}

pub fn lorentz_metric(dim: usize) -> CMat {
    let mut m = CMat::identity(dim, dim);
    m[(0, 0)] = C::new(-1.0, 0.0);
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laurent_multiplication() {
        let dim = 6;
        let mut a0 = CMat::identity(dim, dim);
        a0[(0, 1)] = C::new(2.0, 0.0);
        let a = LoopMatrix {
            k_min: -1,
            coeffs: vec![a0.clone(), CMat::identity(dim, dim)],
        };
        let b = LoopMatrix::identity(dim);
        let p = a.mul(&b);
        assert_eq!(p.k_min, -1);
        let l = C::from_polar(1.0, 0.3);
        let diff = p.eval(l) - a.eval(l);
        assert!(diff.iter().map(|v| v.norm()).fold(0.0, f64::max) < 1e-14);
    }

    #[test]
    fn reality_detects_conjugate_symmetry() {
        let dim = 6;
        let mut c1 = CMat::zeros(dim, dim);
        c1[(0, 4)] = C::new(1.0, 2.0);
        let cm1 = c1.map(|v| v.conj());
        let real_loop = LoopMatrix {
            k_min: -1,
            coeffs: vec![cm1, CMat::identity(dim, dim), c1.clone()],
        };
        assert!(real_loop.reality_defect() < 1e-15);
        let not_real = LoopMatrix {
            k_min: -1,
            coeffs: vec![c1.clone(), CMat::identity(dim, dim), c1],
        };
        assert!(not_real.reality_defect() > 1.0);
    }
}
