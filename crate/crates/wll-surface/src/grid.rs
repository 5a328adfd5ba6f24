//! Sampled-surface input: a uniform complex grid of sphere points (for
//! instance the CSV output of the construction pipeline), differentiated by
//! high-order finite differences so the same jet analysis applies.
//!
//! Derivative weights come from Fornberg's algorithm on a 9-point stencil
//! per axis, so derivatives up to total order 5 keep useful accuracy; the
//! residual floors are far above the closed-form path and the tolerances
//! used by callers must reflect that.

use crate::source::SurfaceMap;
use num_complex::Complex64;

type C = Complex64;

/// Finite-difference weights for derivative order m on the given nodes,
/// evaluated at x0 (Fornberg).
pub fn fd_weights(x0: f64, nodes: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    // w[k][j]: weight of node j for the k-th derivative
    let mut w = vec![vec![0.0; n]; m + 1];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    w[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    w[k][i] = c1 * (k as f64 * w[k - 1][i - 1] - c5 * w[k][i - 1]) / c2;
                }
                w[0][i] = -c1 * c5 * w[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                w[k][j] = (c4 * w[k][j] - k as f64 * w[k - 1][j]) / c3;
            }
            w[0][j] = c4 * w[0][j] / c3;
        }
        c1 = c2;
    }
    w
}

/// A rectangular grid of sphere samples y(z) over z = z0 + (a + i b) h,
/// a = 0..nu, b = 0..nv.
pub struct GridSurface {
    pub z0: C,
    pub h: f64,
    pub nu: usize,
    pub nv: usize,
    pub dim: usize,
    /// samples[b * nu + a][k]
    pub samples: Vec<Vec<f64>>,
}

pub const STENCIL: usize = 9;

impl GridSurface {
    /// Grid points at which full stencils exist.
    pub fn interior(&self) -> Vec<C> {
        let half = STENCIL / 2;
        let mut out = Vec::new();
        for b in half..(self.nv.saturating_sub(half)) {
            for a in half..(self.nu.saturating_sub(half)) {
                out.push(self.z0 + C::new(a as f64 * self.h, b as f64 * self.h));
            }
        }
        out
    }

    fn index_of(&self, z: C) -> (usize, usize) {
        let a = ((z.re - self.z0.re) / self.h).round() as usize;
        let b = ((z.im - self.z0.im) / self.h).round() as usize;
        (a, b)
    }
}

impl SurfaceMap for GridSurface {
    fn ambient_dim(&self) -> usize {
        self.dim
    }

    fn partials(&self, z: C, max_total: usize) -> Vec<Vec<Vec<C>>> {
        let (a0, b0) = self.index_of(z);
        let half = STENCIL / 2;
        assert!(
            a0 >= half && a0 + half < self.nu && b0 >= half && b0 + half < self.nv,
            "stencil outside grid at ({a0},{b0})"
        );
        let offsets: Vec<f64> = (0..STENCIL).map(|k| (k as f64 - half as f64) * self.h).collect();
        let wu = fd_weights(0.0, &offsets, max_total);
        // mixed u,v partials of all components on the stencil patch
        let mut uv: Vec<Vec<Vec<f64>>> = vec![vec![vec![0.0; self.dim]; max_total + 1]; max_total + 1];
        for (ju, row) in uv.iter_mut().enumerate() {
            for (jv, comp) in row.iter_mut().enumerate() {
                if ju + jv > max_total {
                    continue;
                }
                for (su, wu_s) in wu[ju].iter().enumerate() {
                    if *wu_s == 0.0 {
                        continue;
                    }
                    for (sv, wv_s) in wu[jv].iter().enumerate() {
                        if *wv_s == 0.0 {
                            continue;
                        }
                        let idx = (b0 + sv - half) * self.nu + (a0 + su - half);
                        for k in 0..self.dim {
                            comp[k] += wu_s * wv_s * self.samples[idx][k];
                        }
                    }
                }
            }
        }
        // convert to d_z^a d_zbar^b
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
                let mut acc = vec![C::new(0.0, 0.0); self.dim];
                for s in 0..=a {
                    for t in 0..=b {
                        let coeff = binom(a, s) * binom(b, t) * 0.5f64.powi((a + b) as i32);
                        let phase = (-i).powu((a - s) as u32) * i.powu((b - t) as u32);
                        let part = &uv[s + t][(a - s) + (b - t)];
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
