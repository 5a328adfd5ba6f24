//! Bivariate polynomials and rational functions in (z, zbar) with complex
//! coefficients, for closed-form surfaces. Derivatives are symbolic; only
//! evaluation is floating point.

use num_complex::Complex64;

type C = Complex64;

fn czero() -> C {
    C::new(0.0, 0.0)
}

/// coeffs[a][b] is the coefficient of z^a zbar^b.
#[derive(Clone, Debug, PartialEq)]
pub struct BiPoly {
    pub coeffs: Vec<Vec<C>>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly {
            coeffs: vec![vec![czero()]],
        }
    }

    pub fn constant(c: C) -> Self {
        BiPoly {
            coeffs: vec![vec![c]],
        }
    }

    pub fn one() -> Self {
        Self::constant(C::new(1.0, 0.0))
    }

    /// c * z^a * zbar^b
    pub fn monomial(c: C, a: usize, b: usize) -> Self {
        let mut coeffs = vec![vec![czero(); b + 1]; a + 1];
        coeffs[a][b] = c;
        BiPoly { coeffs }
    }

    pub fn var_z() -> Self {
        Self::monomial(C::new(1.0, 0.0), 1, 0)
    }

    pub fn var_zbar() -> Self {
        Self::monomial(C::new(1.0, 0.0), 0, 1)
    }

    pub fn deg_z(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn deg_zbar(&self) -> usize {
        self.coeffs[0].len() - 1
    }

    fn get(&self, a: usize, b: usize) -> C {
        self.coeffs
            .get(a)
            .and_then(|row| row.get(b))
            .copied()
            .unwrap_or_else(czero)
    }

    pub fn add(&self, r: &Self) -> Self {
        let da = self.deg_z().max(r.deg_z());
        let db = self.deg_zbar().max(r.deg_zbar());
        let mut coeffs = vec![vec![czero(); db + 1]; da + 1];
        for (a, row) in coeffs.iter_mut().enumerate() {
            for (b, v) in row.iter_mut().enumerate() {
                *v = self.get(a, b) + r.get(a, b);
            }
        }
        BiPoly { coeffs }
    }

    pub fn sub(&self, r: &Self) -> Self {
        self.add(&r.scale(C::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: C) -> Self {
        BiPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|row| row.iter().map(|v| v * c).collect())
                .collect(),
        }
    }

    pub fn mul(&self, r: &Self) -> Self {
        let da = self.deg_z() + r.deg_z();
        let db = self.deg_zbar() + r.deg_zbar();
        let mut coeffs = vec![vec![czero(); db + 1]; da + 1];
        for (a1, row1) in self.coeffs.iter().enumerate() {
            for (b1, v1) in row1.iter().enumerate() {
                if v1.norm_sqr() == 0.0 {
                    continue;
                }
                for (a2, row2) in r.coeffs.iter().enumerate() {
                    for (b2, v2) in row2.iter().enumerate() {
                        coeffs[a1 + a2][b1 + b2] += v1 * v2;
                    }
                }
            }
        }
        BiPoly { coeffs }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn d_z(&self) -> Self {
        if self.deg_z() == 0 {
            return Self::zero();
        }
        let mut coeffs = vec![vec![czero(); self.deg_zbar() + 1]; self.deg_z()];
        for a in 1..=self.deg_z() {
            for b in 0..=self.deg_zbar() {
                coeffs[a - 1][b] = self.get(a, b) * a as f64;
            }
        }
        BiPoly { coeffs }
    }

    pub fn d_zbar(&self) -> Self {
        if self.deg_zbar() == 0 {
            return Self::zero();
        }
        let mut coeffs = vec![vec![czero(); self.deg_zbar()]; self.deg_z() + 1];
        for a in 0..=self.deg_z() {
            for b in 1..=self.deg_zbar() {
                coeffs[a][b - 1] = self.get(a, b) * b as f64;
            }
        }
        BiPoly { coeffs }
    }

    /// Evaluate with zbar = conj(z).
    pub fn eval(&self, z: C) -> C {
        let zb = z.conj();
        // Horner in z of Horner-in-zbar rows
        let mut acc = czero();
        for row in self.coeffs.iter().rev() {
            let mut racc = czero();
            for c in row.iter().rev() {
                racc = racc * zb + c;
            }
            acc = acc * z + racc;
        }
        acc
    }

    /// Substitute z -> c z (and zbar -> conj(c) zbar).
    pub fn scale_var(&self, c: C) -> Self {
        let mut out = self.clone();
        for (a, row) in out.coeffs.iter_mut().enumerate() {
            for (b, v) in row.iter_mut().enumerate() {
                *v *= c.powu(a as u32) * c.conj().powu(b as u32);
            }
        }
        out
    }

    /// Coefficient reversal: z^a zbar^b -> z^{A-a} zbar^{B-b} where (A, B)
    /// are the bidegrees; this is z^A zbar^B * self(1/z, 1/zbar).
    fn reversed(&self) -> Self {
        let da = self.deg_z();
        let db = self.deg_zbar();
        let mut coeffs = vec![vec![czero(); db + 1]; da + 1];
        for a in 0..=da {
            for b in 0..=db {
                coeffs[da - a][db - b] = self.get(a, b);
            }
        }
        BiPoly { coeffs }
    }
}

/// Rational function num / den^den_pow. Keeping the denominator as a power
/// of a fixed base keeps repeated quotient-rule derivatives from exploding.
#[derive(Clone, Debug)]
pub struct BiRat {
    pub num: BiPoly,
    pub den: BiPoly,
    pub den_pow: u32,
}

impl BiRat {
    pub fn from_poly(num: BiPoly) -> Self {
        BiRat {
            num,
            den: BiPoly::one(),
            den_pow: 1,
        }
    }

    pub fn new(num: BiPoly, den: BiPoly) -> Self {
        BiRat {
            num,
            den,
            den_pow: 1,
        }
    }

    pub fn d_z(&self) -> Self {
        // (n / d^p)' = (n' d - p n d') / d^{p+1}
        let p = self.den_pow as f64;
        let num = self
            .num
            .d_z()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.d_z()).scale(C::new(p, 0.0)));
        BiRat {
            num,
            den: self.den.clone(),
            den_pow: self.den_pow + 1,
        }
    }

    pub fn d_zbar(&self) -> Self {
        let p = self.den_pow as f64;
        let num = self
            .num
            .d_zbar()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.d_zbar()).scale(C::new(p, 0.0)));
        BiRat {
            num,
            den: self.den.clone(),
            den_pow: self.den_pow + 1,
        }
    }

    pub fn eval(&self, z: C) -> C {
        self.num.eval(z) / self.den.eval(z).powu(self.den_pow)
    }

    pub fn scale_var(&self, c: C) -> Self {
        BiRat {
            num: self.num.scale_var(c),
            den: self.den.scale_var(c),
            den_pow: self.den_pow,
        }
    }

    /// The chart substitution z -> 1/w: returns the same function of the new
    /// coordinate w, again as a rational function. Requires den_pow = 1
    /// (apply before differentiating).
    pub fn invert_chart(&self) -> Self {
        assert_eq!(self.den_pow, 1, "invert before differentiating");
        let (an, bn) = (self.num.deg_z() as i64, self.num.deg_zbar() as i64);
        let (ad, bd) = (self.den.deg_z() as i64, self.den.deg_zbar() as i64);
        // num(1/w) = rev(num) / w^an wbar^bn, den(1/w) = rev(den) / w^ad wbar^bd
        // f = rev(num) * w^{ad-an} wbar^{bd-bn} / rev(den)
        let mut num = self.num.reversed();
        let mut den = self.den.reversed();
        let sa = ad - an;
        let sb = bd - bn;
        let one = C::new(1.0, 0.0);
        if sa >= 0 {
            num = num.mul(&BiPoly::monomial(one, sa as usize, 0));
        } else {
            den = den.mul(&BiPoly::monomial(one, (-sa) as usize, 0));
        }
        if sb >= 0 {
            num = num.mul(&BiPoly::monomial(one, 0, sb as usize));
        } else {
            den = den.mul(&BiPoly::monomial(one, 0, (-sb) as usize));
        }
        BiRat {
            num,
            den,
            den_pow: 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn derivative_of_monomial() {
        // d/dz (z^2 zbar) = 2 z zbar
        let p = BiPoly::monomial(c(1.0, 0.0), 2, 1);
        let d = p.d_z();
        let z = c(0.7, -0.3);
        assert!((d.eval(z) - 2.0 * z * z.conj()).norm() < 1e-14);
    }

    #[test]
    fn quotient_rule() {
        // f = z zbar / (1 + z zbar): f_z = zbar / (1+z zbar)^2
        let u = BiPoly::monomial(c(1.0, 0.0), 1, 1);
        let den = BiPoly::one().add(&u);
        let f = BiRat::new(u.clone(), den.clone());
        let fz = f.d_z();
        let z = c(0.4, 0.2);
        let expect = z.conj() / (c(1.0, 0.0) + z * z.conj()).powu(2);
        assert!((fz.eval(z) - expect).norm() < 1e-14);
    }

    #[test]
    fn chart_inversion() {
        // f = (1 - z zbar)/(1 + z zbar); f(1/w) = (w wbar - 1)/(w wbar + 1)
        let u = BiPoly::monomial(c(1.0, 0.0), 1, 1);
        let f = BiRat::new(BiPoly::one().sub(&u), BiPoly::one().add(&u));
        let g = f.invert_chart();
        let w = c(0.5, 0.1);
        let expect = f.eval(w.inv());
        assert!((g.eval(w) - expect).norm() < 1e-13);
    }

    #[test]
    fn scale_var_matches() {
        let p = BiPoly::monomial(c(1.0, 0.0), 2, 1).add(&BiPoly::var_z());
        let f = BiRat::from_poly(p);
        let g = f.scale_var(c(2.0, 0.0));
        let z = c(0.3, -0.6);
        assert!((g.eval(z) - f.eval(2.0 * z)).norm() < 1e-13);
    }
}
