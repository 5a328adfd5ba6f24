//! The meromorphic loop frame F_- solving F_-^{-1} dF_- = lambda^{-1} eta dz,
//! F_-(z0) = e, by iterated integrals. For polynomial potentials this is
//! exact over Q(i): eta takes values in a nilpotent span, so the series
//! terminates, and the Maurer-Cartan and group-membership identities are
//! checked as exact polynomial identities.

use crate::errors::DpwError;
use crate::loop_matrix::{CMat, LoopMatrix};
use nalgebra::DMatrix;
use num_complex::Complex64;
use wll_core::mat::Mat;
use wll_core::minkowski::MetricSignature;
use wll_core::poly::Poly;
use wll_core::potential::{eta_minus_one, eta_minus_one_poly, NormalizedPotential};
use wll_core::scalar::{FieldElem, GaussRational};

type C = Complex64;
type PMat = Mat<Poly<GaussRational>>;

/// Exact frame: F_- = sum_k lambda^{-k} terms[k](z), terms[0] = identity.
pub struct ExactFrame {
    pub m: usize,
    pub z0: GaussRational,
    pub terms: Vec<PMat>,
}

/// Hard cap on the lambda window; the series must terminate well before this
/// for potentials valued in a nilpotent part.
fn window_cap(m: usize) -> usize {
    4 * m + 4
}

fn integrate_from(p: &Poly<GaussRational>, z0: &GaussRational) -> Poly<GaussRational> {
    // antiderivative vanishing at z0
    let anti = p.integral();
    let at_z0 = anti.eval(z0);
    anti - Poly::constant(at_z0)
}

/// Integrate a polynomial potential from the base point z0 (not a pole).
pub fn integrate_potential(
    potential: &NormalizedPotential,
    z0: &GaussRational,
) -> Result<ExactFrame, DpwError> {
    let eta = eta_minus_one_poly(potential).ok_or_else(|| {
        DpwError::NonPolynomial(
            "exact integration needs polynomial entries; use the numeric path integrator".into(),
        )
    })?;
    let m = potential.m;
    let n = 2 * m;
    let mut terms: Vec<PMat> = vec![Mat::from_fn(n, n, |r, c| {
        if r == c {
            Poly::one()
        } else {
            Poly::zero()
        }
    })];
    loop {
        let prev = terms.last().unwrap();
        let prod = prev * &eta;
        let next: PMat = Mat::from_fn(n, n, |r, c| integrate_from(&prod[(r, c)], z0));
        if next.is_zero() {
            break;
        }
        terms.push(next);
        if terms.len() > window_cap(m) {
            return Err(DpwError::NonTerminating(terms.len()));
        }
    }
    Ok(ExactFrame {
        m,
        z0: z0.clone(),
        terms,
    })
}

impl ExactFrame {
    /// Window depth K: F_- has powers lambda^{-K} .. lambda^0.
    pub fn depth(&self) -> usize {
        self.terms.len() - 1
    }

    /// Exact Maurer-Cartan check: d/dz terms[k] = terms[k-1] * eta for all k,
    /// as polynomial identities, together with the initial condition.
    pub fn maurer_cartan_is_exact(&self, potential: &NormalizedPotential) -> bool {
        let Some(eta) = eta_minus_one_poly(potential) else {
            return false;
        };
        let n = 2 * self.m;
        for k in 1..self.terms.len() {
            let lhs: PMat = Mat::from_fn(n, n, |r, c| self.terms[k][(r, c)].derivative());
            let rhs = &self.terms[k - 1] * &eta;
            if lhs != rhs {
                return false;
            }
            // initial condition terms[k](z0) = 0
            for r in 0..n {
                for c in 0..n {
                    if !self.terms[k][(r, c)].eval(&self.z0).is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Exact group membership: sum_{a+b=k} terms[a]^t I terms[b] = delta_{k0} I.
    pub fn membership_is_exact(&self) -> bool {
        let n = 2 * self.m;
        let sig: Mat<GaussRational> = MetricSignature::lorentz(n).matrix();
        let metric: PMat = Mat::from_fn(n, n, |r, c| Poly::constant(sig[(r, c)].clone()));
        let kmax = self.depth();
        for k in 0..=(2 * kmax) {
            let mut acc: PMat = Mat::zeros(n, n);
            for a in 0..=kmax.min(k) {
                let b = k - a;
                if b > kmax {
                    continue;
                }
                acc = acc + &(&self.terms[a].transpose() * &metric) * &self.terms[b];
            }
            let expect: PMat = if k == 0 {
                metric.clone()
            } else {
                Mat::zeros(n, n)
            };
            if acc != expect {
                return false;
            }
        }
        true
    }

    /// Exact twisting: terms[k] is block-diagonal for even k, off-diagonal
    /// for odd k.
    pub fn twisting_is_exact(&self) -> bool {
        let n = 2 * self.m;
        for (k, t) in self.terms.iter().enumerate() {
            let odd = k % 2 == 1;
            for r in 0..n {
                for c in 0..n {
                    let off = (r < 4) != (c < 4);
                    if off != odd && !t[(r, c)].is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Evaluate to a numeric Laurent loop at z.
    pub fn eval(&self, z: C) -> LoopMatrix {
        let n = 2 * self.m;
        let depth = self.depth();
        let mut coeffs: Vec<CMat> = Vec::with_capacity(depth + 1);
        // lambda^{-depth} first
        for k in (0..=depth).rev() {
            let mut c = DMatrix::zeros(n, n);
            for r in 0..n {
                for s in 0..n {
                    c[(r, s)] = self.terms[k][(r, s)].eval_c64(z);
                }
            }
            coeffs.push(c);
        }
        LoopMatrix {
            k_min: -(depth as i32),
            coeffs,
        }
        .trim()
    }
}

/// Numeric fallback for rational (meromorphic) potentials: integrate the
/// triangular coefficient system dP_k = P_{k-1} eta dz along the straight
/// segment z0 -> z with classical RK4, after checking the segment stays away
/// from every pole.
pub fn integrate_numeric(
    potential: &NormalizedPotential,
    z0: C,
    z: C,
    steps: usize,
) -> Result<LoopMatrix, DpwError> {
    let min_pole_dist = 1e-3;
    for pole in &potential.poles {
        if segment_distance(z0, z, *pole) < min_pole_dist {
            return Err(DpwError::PoleOnPath(format!(
                "pole near {pole} within {min_pole_dist} of the integration path"
            )));
        }
    }
    let m = potential.m;
    let n = 2 * m;
    let eta_rf = eta_minus_one(potential);
    let eta_at = |w: C| -> CMat {
        let mut out = DMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                out[(r, c)] = eta_rf[(r, c)].eval_c64(w);
            }
        }
        out
    };
    let cap = window_cap(m);
    // state: P_1..P_cap (P_0 = I constant)
    let mut state: Vec<CMat> = vec![DMatrix::zeros(n, n); cap];
    let h = (z - z0) / steps as f64;
    let ident: CMat = DMatrix::identity(n, n);
    let deriv = |w: C, st: &Vec<CMat>| -> Vec<CMat> {
        let e = eta_at(w);
        let mut d: Vec<CMat> = Vec::with_capacity(cap);
        for k in 0..cap {
            let prev: &CMat = if k == 0 { &ident } else { &st[k - 1] };
            d.push(prev * &e);
        }
        d
    };
    let add_scaled = |a: &Vec<CMat>, b: &Vec<CMat>, s: C| -> Vec<CMat> {
        a.iter()
            .zip(b)
            .map(|(x, y)| x + &y.map(|v| v * s))
            .collect()
    };
    for step in 0..steps {
        let w = z0 + h * step as f64;
        let k1 = deriv(w, &state);
        let k2 = deriv(w + h * 0.5, &add_scaled(&state, &k1, h * 0.5));
        let k3 = deriv(w + h * 0.5, &add_scaled(&state, &k2, h * 0.5));
        let k4 = deriv(w + h, &add_scaled(&state, &k3, h));
        for k in 0..cap {
            state[k] += (&k1[k] + &k2[k].map(|v| v * 2.0) + &k3[k].map(|v| v * 2.0) + &k4[k])
                .map(|v| v * (h / 6.0));
        }
    }
    // assemble lambda^{-k} coefficients, trimming negligible tails
    let scale = state
        .iter()
        .flat_map(|mat| mat.iter())
        .map(|v| v.norm())
        .fold(1.0, f64::max);
    let mut depth = 0;
    for (k, p) in state.iter().enumerate() {
        if p.iter().map(|v| v.norm()).fold(0.0, f64::max) > 1e-12 * scale {
            depth = k + 1;
        }
    }
    if depth == cap {
        return Err(DpwError::NonTerminating(cap));
    }
    let mut coeffs = Vec::with_capacity(depth + 1);
    for k in (0..=depth).rev() {
        if k == 0 {
            coeffs.push(DMatrix::identity(n, n));
        } else {
            coeffs.push(state[k - 1].clone());
        }
    }
    Ok(LoopMatrix {
        k_min: -(depth as i32),
        coeffs,
    })
}

fn segment_distance(a: C, b: C, p: C) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).re * ab.re + (p - a).im * ab.im) / len2;
    let t = t.clamp(0.0, 1.0);
    (a + ab * t - p).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use wll_core::potential::example_potential;
    use wll_core::scalar::Scalar;

    #[test]
    fn example_frame_is_exact_with_small_window() {
        let p = example_potential();
        let f = integrate_potential(&p, &GaussRational::from_int(0)).unwrap();
        // all-kind-ii potentials live over the height-2 element as well
        assert_eq!(f.depth(), 2, "window depth {}", f.depth());
        assert!(f.maurer_cartan_is_exact(&p));
        assert!(f.membership_is_exact());
        assert!(f.twisting_is_exact());
    }

    #[test]
    fn frame_value_is_identity_at_base_point(){
        let p = example_potential();
        let f = integrate_potential(&p, &GaussRational::from_int(0)).unwrap();
        let at0 = f.eval(C::new(0.0, 0.0));
        let id = LoopMatrix::identity(8);
        let diff = at0.eval(C::new(1.0, 0.0)) - id.eval(C::new(1.0, 0.0));
        assert!(diff.iter().map(|v| v.norm()).fold(0.0, f64::max) < 1e-15);
    }

    #[test]
    fn numeric_integration_matches_exact() {
        let p = example_potential();
        let f = integrate_potential(&p, &GaussRational::from_int(0)).unwrap();
        let z = C::new(0.8, -0.5);
        let exact = f.eval(z);
        let numeric = integrate_numeric(&p, C::new(0.0, 0.0), z, 200).unwrap();
        assert_eq!(exact.k_min, numeric.k_min);
        for k in exact.k_min..=exact.k_max() {
            let d = exact.coeff(k) - numeric.coeff(k);
            let err = d.iter().map(|v| v.norm()).fold(0.0, f64::max);
            assert!(err < 1e-9, "coefficient {k} differs by {err}");
        }
    }

    #[test]
    fn constant_nilpotent_potential_gives_exponential() {
        // eta constant: F_- = exp(lambda^{-1} N z), a finite sum
        use wll_core::potential::{assemble, ColumnPair, RF};
        let pair = ColumnPair::KindI {
            h1: RF::one(),
            h1hat: RF::zero(),
            h3: RF::zero(),
            h3hat: RF::zero(),
        };
        let p = assemble(vec![pair]).unwrap();
        let f = integrate_potential(&p, &GaussRational::from_int(0)).unwrap();
        // N^2 has a z^2/2 coefficient etc.; window depth is the nilpotency order
        assert!(f.depth() >= 1 && f.depth() <= 3);
        assert!(f.maurer_cartan_is_exact(&p));
        assert!(f.membership_is_exact());
    }
}
