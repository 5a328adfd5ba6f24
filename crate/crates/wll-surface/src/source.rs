//! Surface sources: closed-form maps into S^{n+2} that can produce exact
//! partial-derivative tables at a point.

use crate::bivar::{BiPoly, BiRat};
use num_complex::Complex64;

type C = Complex64;

/// A conformally immersed map y from a plane chart into the unit sphere of
/// R^{n+3}, able to report all partials d^a_z d^b_zbar y up to a requested
/// total order.
pub trait SurfaceMap {
    /// Ambient dimension n+3.
    fn ambient_dim(&self) -> usize;
    /// table[a][b] = vector of component partials at z; entries present for
    /// a + b <= max_total.
    fn partials(&self, z: C, max_total: usize) -> Vec<Vec<Vec<C>>>;
}

/// Componentwise rational closed form; partial derivatives precomputed
/// symbolically up to a fixed total order.
pub struct RationalSurface {
    comps: Vec<BiRat>,
    /// table[a][b][k] = d^a_z d^b_zbar of component k
    derivs: Vec<Vec<Vec<BiRat>>>,
    max_total: usize,
}

impl RationalSurface {
    pub fn new(comps: Vec<BiRat>, max_total: usize) -> Self {
        let mut derivs: Vec<Vec<Vec<BiRat>>> = Vec::with_capacity(max_total + 1);
        for a in 0..=max_total {
            let mut row = Vec::new();
            for b in 0..=(max_total - a) {
                let entry: Vec<BiRat> = if a == 0 && b == 0 {
                    comps.clone()
                } else if b == 0 {
                    derivs[a - 1][0].iter().map(|f| f.d_z()).collect()
                } else {
                    let prev: &Vec<BiRat> = row.last().expect("b >= 1");
                    prev.iter().map(|f| f.d_zbar()).collect()
                };
                row.push(entry);
            }
            derivs.push(row);
        }
        RationalSurface {
            comps,
            derivs,
            max_total,
        }
    }

    pub fn components(&self) -> &[BiRat] {
        &self.comps
    }

    /// The same surface in the chart w with z = 1/w.
    pub fn invert_chart(&self) -> Self {
        let comps = self.comps.iter().map(|f| f.invert_chart()).collect();
        RationalSurface::new(comps, self.max_total)
    }

    /// The same surface re-parameterized by z = c w.
    pub fn scale_chart(&self, c: C) -> Self {
        let comps = self.comps.iter().map(|f| f.scale_var(c)).collect();
        RationalSurface::new(comps, self.max_total)
    }

    pub fn eval(&self, z: C) -> Vec<f64> {
        self.comps.iter().map(|f| f.eval(z).re).collect()
    }
}

impl SurfaceMap for RationalSurface {
    fn ambient_dim(&self) -> usize {
        self.comps.len()
    }

    fn partials(&self, z: C, max_total: usize) -> Vec<Vec<Vec<C>>> {
        assert!(max_total <= self.max_total);
        let mut out = Vec::with_capacity(max_total + 1);
        for a in 0..=max_total {
            let mut row = Vec::new();
            for b in 0..=(max_total - a) {
                row.push(self.derivs[a][b].iter().map(|f| f.eval(z)).collect());
            }
            out.push(row);
        }
        out
    }
}

/// The round two-sphere inside S^{n+2} (first three coordinates the unit
/// sphere in stereographic coordinates, the rest zero). Totally umbilic:
/// kappa = 0.
pub fn round_sphere(ambient_dim: usize, max_total: usize) -> RationalSurface {
    let one = BiPoly::one();
    let u = BiPoly::monomial(C::new(1.0, 0.0), 1, 1); // z zbar
    let den = one.add(&u);
    let x = BiPoly::var_z().add(&BiPoly::var_zbar()); // z + zbar
    let y = BiPoly::var_z()
        .sub(&BiPoly::var_zbar())
        .scale(C::new(0.0, -1.0)); // -i (z - zbar)
    let zc = one.sub(&u);
    let mut comps = vec![
        BiRat::new(x, den.clone()),
        BiRat::new(y, den.clone()),
        BiRat::new(zc, den.clone()),
    ];
    while comps.len() < ambient_dim {
        comps.push(BiRat::from_poly(BiPoly::zero()));
    }
    RationalSurface::new(comps, max_total)
}

/// The explicit totally isotropic Willmore two-sphere in S^6: the closed
/// form of the pipeline oracle, as a rational surface for a fixed unit
/// modulus lambda.
pub fn example_surface(lambda: C, max_total: usize) -> RationalSurface {
    let comp = example_components(lambda);
    RationalSurface::new(comp, max_total)
}

fn example_components(lambda: C) -> Vec<BiRat> {
    let one = C::new(1.0, 0.0);
    let i = C::new(0.0, 1.0);
    let li = lambda.inv();
    let u = |k: usize, c: f64| BiPoly::monomial(C::new(c, 0.0), k, k); // c (z zbar)^k
    // q = 1 + r^2 + 5 r^4/4 + 4 r^6/9 + r^8/36
    let q = u(0, 1.0)
        .add(&u(1, 1.0))
        .add(&u(2, 5.0 / 4.0))
        .add(&u(3, 4.0 / 9.0))
        .add(&u(4, 1.0 / 36.0));
    // x0 = 1 - r^2 - 3 r^4/4 + 4 r^6/9 - r^8/36
    let x0 = u(0, 1.0)
        .add(&u(1, -1.0))
        .add(&u(2, -3.0 / 4.0))
        .add(&u(3, 4.0 / 9.0))
        .add(&u(4, -1.0 / 36.0));
    // common factors
    let zc = BiPoly::var_z();
    let zb = BiPoly::var_zbar();
    let f169 = u(0, 1.0).add(&u(3, 1.0 / 9.0)); // 1 + r^6/9
    let f112 = u(0, 1.0).add(&u(2, -1.0 / 12.0)); // 1 - r^4/12
    let f43 = u(1, 0.5).add(&u(2, 2.0 / 3.0)); // r^2/2 (1 + 4 r^2/3)
    // x1 = -i (z - zbar)(1 + r^6/9)
    let x1 = zc.sub(&zb).mul(&f169).scale(-i);
    // x2 = (z + zbar)(1 + r^6/9)
    let x2 = zc.add(&zb).mul(&f169);
    // z^2, zbar^2
    let z2 = BiPoly::monomial(one, 2, 0);
    let zb2 = BiPoly::monomial(one, 0, 2);
    // x3 = -i (li z^2 - lambda zbar^2)(1 - r^4/12)
    let x3 = z2.scale(li).sub(&zb2.scale(lambda)).mul(&f112).scale(-i);
    // x4 = (li z^2 + lambda zbar^2)(1 - r^4/12)
    let x4 = z2.scale(li).add(&zb2.scale(lambda)).mul(&f112);
    // x5 = -i (li z - lambda zbar) r^2/2 (1 + 4 r^2/3)
    let x5 = zc.scale(li).sub(&zb.scale(lambda)).mul(&f43).scale(-i);
    // x6 = (li z + lambda zbar) r^2/2 (1 + 4 r^2/3)
    let x6 = zc.scale(li).add(&zb.scale(lambda)).mul(&f43);
    [x0, x1, x2, x3, x4, x5, x6]
        .into_iter()
        .map(|n| BiRat::new(n, q.clone()))
        .collect()
}

/// Closed-form evaluation of the example at (z, lambda); a Euclidean unit
/// vector in R^7.
pub fn closed_form_example(z: C, lambda: C) -> [f64; 7] {
    let comps = example_components(lambda);
    let mut out = [0.0; 7];
    for (k, f) in comps.iter().enumerate() {
        out[k] = f.eval(z).re;
    }
    out
}

/// Flat rectangular torus in S^3 subset S^{n+2}:
/// y(u,v) = (a cos(u/a), a sin(u/a), b cos(v/b), b sin(v/b), 0, ...) with
/// a^2 + b^2 = 1, in the conformal chart z = u + iv. The square case
/// a = b = 1/sqrt(2) is minimal in S^3 (hence Willmore); rectangular cases
/// are genuine surfaces that are not Willmore.
pub struct FlatTorus {
    pub a: f64,
    pub b: f64,
    pub ambient_dim: usize,
}

impl FlatTorus {
    pub fn new(a: f64, ambient_dim: usize) -> Self {
        assert!(a > 0.0 && a < 1.0);
        FlatTorus {
            a,
            b: (1.0 - a * a).sqrt(),
            ambient_dim,
        }
    }

    /// d^j/du^j of (a cos(u/a), a sin(u/a)) type pairs: trig cycling with a
    /// 1/a factor per derivative.
    fn uv_partial(&self, u: f64, v: f64, ju: usize, jv: usize) -> Vec<C> {
        let mut out = vec![C::new(0.0, 0.0); self.ambient_dim];
        let cycle = |r: f64, t: f64, j: usize, phase: f64| -> f64 {
            // d^j/dt^j of r cos(t/r + phase)
            let scale = r.powi(1 - j as i32);
            match j % 4 {
                0 => scale * (t / r + phase).cos(),
                1 => -scale * (t / r + phase).sin(),
                2 => -scale * (t / r + phase).cos(),
                _ => scale * (t / r + phase).sin(),
            }
        };
        let half_pi = std::f64::consts::FRAC_PI_2;
        if jv == 0 {
            out[0] = C::new(cycle(self.a, u, ju, 0.0), 0.0);
            out[1] = C::new(cycle(self.a, u, ju, -half_pi), 0.0); // sin = cos(x - pi/2)
        }
        if ju == 0 {
            out[2] = C::new(cycle(self.b, v, jv, 0.0), 0.0);
            out[3] = C::new(cycle(self.b, v, jv, -half_pi), 0.0);
        }
        out
    }
}

impl SurfaceMap for FlatTorus {
    fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    fn partials(&self, z: C, max_total: usize) -> Vec<Vec<Vec<C>>> {
        // convert d^a_z d^b_zbar = 2^{-(a+b)} (d_u - i d_v)^a (d_u + i d_v)^b
        let (u, v) = (z.re, z.im);
        let dim = self.ambient_dim;
        let binom = |n: usize, k: usize| -> f64 {
            let mut acc = 1.0;
            for j in 0..k {
                acc = acc * (n - j) as f64 / (j + 1) as f64;
            }
            acc
        };
        let i = C::new(0.0, 1.0);
        let mut out = Vec::with_capacity(max_total + 1);
        for a in 0..=max_total {
            let mut row = Vec::new();
            for b in 0..=(max_total - a) {
                let mut acc = vec![C::new(0.0, 0.0); dim];
                for s in 0..=a {
                    for t in 0..=b {
                        let coeff = binom(a, s)
                            * binom(b, t)
                            * 0.5f64.powi((a + b) as i32);
                        let phase = (-i).powu((a - s) as u32) * i.powu((b - t) as u32);
                        let part = self.uv_partial(u, v, s + t, (a - s) + (b - t));
                        for (k, p) in part.iter().enumerate() {
                            acc[k] += coeff * phase * p;
                        }
                    }
                }
                row.push(acc);
            }
            out.push(row);
        }
        out
    }
}
