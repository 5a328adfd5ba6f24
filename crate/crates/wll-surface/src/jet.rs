//! Truncated bivariate Taylor jets at a point: the coefficient algebra in
//! (dz, dzbar) up to a tracked total order. All derived surface quantities
//! (lift, Hopf differential, covariant derivatives) are computed in this
//! algebra, so differentiation is exact given exact input partials.

use num_complex::Complex64;

type C = Complex64;

/// Largest total order carried anywhere (y needs order 5).
pub const MAX_ORD: usize = 5;
const W: usize = MAX_ORD + 1;

/// c[a][b] is the Taylor coefficient of dz^a dzbar^b; coefficients with
/// a + b > ord are not meaningful.
#[derive(Clone, Copy, Debug)]
pub struct Jet {
    pub ord: usize,
    c: [[C; W]; W],
}

fn czero() -> C {
    C::new(0.0, 0.0)
}

impl Jet {
    pub fn constant(v: C, ord: usize) -> Self {
        let mut c = [[czero(); W]; W];
        c[0][0] = v;
        Jet { ord, c }
    }

    pub fn zero(ord: usize) -> Self {
        Self::constant(czero(), ord)
    }

    /// Build from a partial-derivative table: table[a][b] = d^{a+b} f /
    /// dz^a dzbar^b evaluated at the point.
    pub fn from_partials(table: &[Vec<C>], ord: usize) -> Self {
        assert!(ord <= MAX_ORD);
        let mut c = [[czero(); W]; W];
        let mut fact = [1.0f64; W];
        for k in 1..W {
            fact[k] = fact[k - 1] * k as f64;
        }
        for (a, row) in table.iter().enumerate().take(W) {
            for (b, v) in row.iter().enumerate().take(W) {
                if a + b <= ord {
                    c[a][b] = v / (fact[a] * fact[b]);
                }
            }
        }
        Jet { ord, c }
    }

    /// Value of the a,b partial derivative (requires a + b <= ord).
    pub fn partial(&self, a: usize, b: usize) -> C {
        assert!(a + b <= self.ord, "partial ({a},{b}) beyond jet order {}", self.ord);
        let mut fact = [1.0f64; W];
        for k in 1..W {
            fact[k] = fact[k - 1] * k as f64;
        }
        self.c[a][b] * fact[a] * fact[b]
    }

    pub fn value(&self) -> C {
        self.c[0][0]
    }

    pub fn add(&self, r: &Jet) -> Jet {
        let ord = self.ord.min(r.ord);
        let mut c = [[czero(); W]; W];
        for a in 0..W {
            for b in 0..W {
                if a + b <= ord {
                    c[a][b] = self.c[a][b] + r.c[a][b];
                }
            }
        }
        Jet { ord, c }
    }

    pub fn sub(&self, r: &Jet) -> Jet {
        self.add(&r.scale(C::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C) -> Jet {
        let mut out = *self;
        for row in out.c.iter_mut() {
            for v in row.iter_mut() {
                *v *= s;
            }
        }
        out
    }

    pub fn mul(&self, r: &Jet) -> Jet {
        let ord = self.ord.min(r.ord);
        let mut c = [[czero(); W]; W];
        for a1 in 0..W {
            for b1 in 0..W {
                if a1 + b1 > ord || self.c[a1][b1].norm_sqr() == 0.0 {
                    continue;
                }
                for a2 in 0..(W - a1) {
                    for b2 in 0..(W - b1) {
                        if a1 + b1 + a2 + b2 <= ord {
                            c[a1 + a2][b1 + b2] += self.c[a1][b1] * r.c[a2][b2];
                        }
                    }
                }
            }
        }
        Jet { ord, c }
    }

    /// Multiplicative inverse (constant term must be nonzero).
    pub fn inv(&self) -> Jet {
        let v0 = self.c[0][0];
        assert!(v0.norm() > 0.0, "jet inverse of zero constant term");
        let mut x = Jet::constant(v0.inv(), self.ord);
        // Newton: x <- x (2 - f x), doubling correct order each step
        let two = Jet::constant(C::new(2.0, 0.0), self.ord);
        for _ in 0..4 {
            x = x.mul(&two.sub(&self.mul(&x)));
        }
        x
    }

    /// Inverse square root f^{-1/2}, principal branch from the constant term.
    pub fn inv_sqrt(&self) -> Jet {
        let v0 = self.c[0][0];
        assert!(v0.norm() > 0.0);
        let mut g = Jet::constant(v0.sqrt().inv(), self.ord);
        let three = Jet::constant(C::new(3.0, 0.0), self.ord);
        let half = C::new(0.5, 0.0);
        for _ in 0..4 {
            // g <- g (3 - f g^2) / 2
            g = g.mul(&three.sub(&self.mul(&g.mul(&g)))).scale(half);
        }
        g
    }

    /// d/dz as a jet of one lower order.
    pub fn d_z(&self) -> Jet {
        assert!(self.ord >= 1, "cannot differentiate an order-0 jet");
        let mut c = [[czero(); W]; W];
        for a in 0..W - 1 {
            for b in 0..W {
                if a + 1 + b <= self.ord {
                    c[a][b] = self.c[a + 1][b] * (a + 1) as f64;
                }
            }
        }
        Jet { ord: self.ord - 1, c }
    }

    pub fn d_zbar(&self) -> Jet {
        assert!(self.ord >= 1);
        let mut c = [[czero(); W]; W];
        for a in 0..W {
            for b in 0..W - 1 {
                if a + b < self.ord {
                    c[a][b] = self.c[a][b + 1] * (b + 1) as f64;
                }
            }
        }
        Jet { ord: self.ord - 1, c }
    }

    /// Jet of the conjugated field: coefficients conjugate and transpose,
    /// since d^a_z d^b_zbar conj(f) = conj(d^b_z d^a_zbar f).
    pub fn conj_field(&self) -> Jet {
        let mut c = [[czero(); W]; W];
        for a in 0..W {
            for b in 0..W {
                c[a][b] = self.c[b][a].conj();
            }
        }
        Jet { ord: self.ord, c }
    }
}

/// Small dense vectors and matrices of jets.
pub type JetVec = Vec<Jet>;

pub fn jv_add(a: &JetVec, b: &JetVec) -> JetVec {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

pub fn jv_sub(a: &JetVec, b: &JetVec) -> JetVec {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

pub fn jv_scale(a: &JetVec, s: &Jet) -> JetVec {
    a.iter().map(|x| x.mul(s)).collect()
}

pub fn jv_dz(a: &JetVec) -> JetVec {
    a.iter().map(|x| x.d_z()).collect()
}

pub fn jv_dzbar(a: &JetVec) -> JetVec {
    a.iter().map(|x| x.d_zbar()).collect()
}

pub fn jv_conj(a: &JetVec) -> JetVec {
    a.iter().map(|x| x.conj_field()).collect()
}

/// Bilinear Lorentz pairing of jet vectors (no conjugation), metric
/// diag(-1, 1, ..., 1).
pub fn jv_lorentz(a: &JetVec, b: &JetVec) -> Jet {
    let mut acc = a[0].mul(&b[0]).scale(C::new(-1.0, 0.0));
    for k in 1..a.len() {
        acc = acc.add(&a[k].mul(&b[k]));
    }
    acc
}

/// Bilinear Euclidean dot product of jet vectors.
pub fn jv_dot(a: &JetVec, b: &JetVec) -> Jet {
    let mut acc = Jet::zero(a[0].ord.min(b[0].ord));
    for (x, y) in a.iter().zip(b) {
        acc = acc.add(&x.mul(y));
    }
    acc
}

/// Solve a small linear system with jet entries by Gaussian elimination
/// (pivot by constant-term magnitude).
pub fn jet_solve(a: &[Vec<Jet>], rhs: &[Jet]) -> Vec<Jet> {
    let n = a.len();
    let mut m: Vec<Vec<Jet>> = a.to_vec();
    let mut r: Vec<Jet> = rhs.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| {
                m[perm[i]][col]
                    .value()
                    .norm()
                    .partial_cmp(&m[perm[j]][col].value().norm())
                    .unwrap()
            })
            .unwrap();
        perm.swap(col, piv);
        let p = perm[col];
        let inv = m[p][col].inv();
        for i in (col + 1)..n {
            let q = perm[i];
            let f = m[q][col].mul(&inv);
            for k in col..n {
                let v = m[q][k].sub(&f.mul(&m[p][k]));
                m[q][k] = v;
            }
            let v = r[q].sub(&f.mul(&r[p]));
            r[q] = v;
        }
    }
    let ord = rhs[0].ord;
    let mut x = vec![Jet::zero(ord); n];
    for col in (0..n).rev() {
        let p = perm[col];
        let mut acc = r[p];
        for k in (col + 1)..n {
            acc = acc.sub(&m[p][k].mul(&x[k]));
        }
        x[col] = acc.mul(&m[p][col].inv());
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn sample_jet() -> Jet {
        // f = 1 + 2 dz + (1+i) dzbar + dz dzbar (exact low-order jet)
        let table = vec![
            vec![c(1.0, 0.0), c(1.0, 1.0), c(0.0, 0.0)],
            vec![c(2.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        ];
        Jet::from_partials(&table, 4)
    }

    #[test]
    fn inverse_is_two_sided() {
        let f = sample_jet();
        let g = f.inv();
        let p = f.mul(&g);
        assert!((p.value() - c(1.0, 0.0)).norm() < 1e-14);
        for a in 0..=4usize {
            for b in 0..=(4 - a) {
                if a + b > 0 {
                    assert!(p.partial(a, b).norm() < 1e-12, "({a},{b})");
                }
            }
        }
    }

    #[test]
    fn inv_sqrt_squares_back() {
        let f = sample_jet();
        let g = f.inv_sqrt();
        let p = f.mul(&g.mul(&g));
        assert!((p.value() - c(1.0, 0.0)).norm() < 1e-13);
        assert!(p.partial(1, 1).norm() < 1e-12);
    }

    #[test]
    fn derivative_shifts_coefficients() {
        let f = sample_jet();
        let fz = f.d_z();
        assert!((fz.value() - c(2.0, 0.0)).norm() < 1e-15);
        assert!((fz.partial(0, 1) - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn conj_field_swaps_indices() {
        let f = sample_jet();
        let g = f.conj_field();
        assert!((g.partial(1, 0) - c(1.0, -1.0)).norm() < 1e-15);
        assert!((g.partial(0, 1) - c(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn jet_linear_solve() {
        let f = sample_jet();
        let a = vec![
            vec![f, Jet::constant(c(1.0, 0.0), 4)],
            vec![Jet::constant(c(0.0, 1.0), 4), f.inv()],
        ];
        let rhs = vec![f.mul(&f), Jet::constant(c(3.0, 0.0), 4)];
        let x = jet_solve(&a, &rhs);
        // check A x = rhs at several coefficients
        for row in 0..2 {
            let lhs = a[row][0].mul(&x[0]).add(&a[row][1].mul(&x[1]));
            for p in 0..=2usize {
                for q in 0..=(2 - p) {
                    assert!(
                        (lhs.partial(p, q) - rhs[row].partial(p, q)).norm() < 1e-10,
                        "row {row} ({p},{q})"
                    );
                }
            }
        }
    }
}
