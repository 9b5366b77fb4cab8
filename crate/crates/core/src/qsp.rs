//! Single-ancilla phase factors that realize a real trigonometric polynomial
//! `f` as `Pr[ancilla = 0] - Pr[ancilla = 1]`.
//!
//! The circuit acting on the ancilla, for a controlled unitary with
//! eigenphase `x`, is in time order
//!
//! ```text
//! Rz(phi_L) Ry(theta_L) | D_1 | Rz(phi_{L-1}) Ry(theta_{L-1}) | D_2 | ... | D_L | Rz(phi_0) Ry(theta_0) | Rz(omega)
//! ```
//!
//! where odd `D_k` apply `U` controlled on `|1>` and even `D_k` apply `U^dagger`
//! controlled on `|0>`. Both are `diag(1, e^{ix})` up to a global phase, so
//! the ancilla amplitudes are polynomials `P(w), Q(w)` of degree `L` in
//! `w = e^{ix}` and the synthesis reduces to finding such a pair with
//! `|P|^2 = (1 + f) / 2`, `|Q|^2 = (1 - f) / 2`, then peeling it into layers.

use nalgebra::Schur;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64, ONE, ZERO};
use crate::sign::{grid, TrigPolynomial};

#[derive(Clone, Debug, Serialize)]
pub struct PhaseFactors {
    pub omega: f64,
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
    /// Worst reconstruction error on the verification grid.
    pub residual: f64,
}

/// `Rz(a) = diag(e^{-ia/2}, e^{ia/2})`.
#[inline]
pub fn rz(a: f64, s: [C64; 2]) -> [C64; 2] {
    [s[0] * C64::from_polar(1.0, -a / 2.0), s[1] * C64::from_polar(1.0, a / 2.0)]
}

/// `Ry(b) = exp(-i b Y / 2)`.
#[inline]
pub fn ry(b: f64, s: [C64; 2]) -> [C64; 2] {
    let (sn, cs) = (b / 2.0).sin_cos();
    [s[0] * cs - s[1] * sn, s[0] * sn + s[1] * cs]
}

impl PhaseFactors {
    pub fn order(&self) -> usize {
        self.theta.len() - 1
    }

    /// Ancilla amplitudes after the full circuit when the controlled unitary
    /// acts as the phase `e^{ix}`.
    pub fn ancilla_amplitudes(&self, x: f64) -> [C64; 2] {
        let l = self.order();
        let up = C64::from_polar(1.0, x);
        let down = up.conj();
        let mut s = ry(self.theta[l], rz(self.phi[l], [ONE, ZERO]));
        for k in 1..=l {
            if k % 2 == 1 {
                s[1] *= up;
            } else {
                s[0] *= down;
            }
            let layer = l - k;
            s = ry(self.theta[layer], rz(self.phi[layer], s));
        }
        rz(self.omega, s)
    }

    /// [`Self::ancilla_amplitudes`] for many phases, with the fixed rotations
    /// evaluated once.
    pub fn ancilla_amplitudes_batch(&self, xs: &[f64]) -> Vec<[C64; 2]> {
        let l = self.order();
        let layers: Vec<[[C64; 2]; 2]> = (0..=l)
            .map(|k| {
                let a = ry(self.theta[k], rz(self.phi[k], [ONE, ZERO]));
                let b = ry(self.theta[k], rz(self.phi[k], [ZERO, ONE]));
                [[a[0], b[0]], [a[1], b[1]]]
            })
            .collect();
        let apply = |m: &[[C64; 2]; 2], s: [C64; 2]| [m[0][0] * s[0] + m[0][1] * s[1], m[1][0] * s[0] + m[1][1] * s[1]];
        xs.iter()
            .map(|&x| {
                let up = C64::from_polar(1.0, x);
                let down = up.conj();
                let mut s = apply(&layers[l], [ONE, ZERO]);
                for k in 1..=l {
                    if k % 2 == 1 {
                        s[1] *= up;
                    } else {
                        s[0] *= down;
                    }
                    s = apply(&layers[l - k], s);
                }
                rz(self.omega, s)
            })
            .collect()
    }

    /// `Pr[0] - Pr[1]` of the ancilla.
    pub fn reconstruct(&self, x: f64) -> f64 {
        let [a, b] = self.ancilla_amplitudes(x);
        a.norm_sqr() - b.norm_sqr()
    }

    /// Number of controlled applications in the circuit.
    pub fn controlled_ops(&self) -> usize {
        self.order()
    }

    fn to_vector(&self) -> Vec<f64> {
        let mut v = vec![self.omega];
        v.extend(&self.theta);
        v.extend(&self.phi);
        v
    }

    fn from_vector(v: &[f64], l: usize) -> Self {
        PhaseFactors {
            omega: v[0],
            theta: v[1..l + 2].to_vec(),
            phi: v[l + 2..2 * l + 3].to_vec(),
            residual: f64::NAN,
        }
    }
}

/// Worst `|reconstruct - f|` over `points` equally spaced samples.
pub fn reconstruction_error(factors: &PhaseFactors, f: &TrigPolynomial, points: usize) -> f64 {
    grid(points).map(|x| (factors.reconstruct(x) - f.eval(x)).abs()).fold(0.0, f64::max)
}

/// Phase factors whose reconstruction matches `f` within `tol` on a grid of
/// `4 L` points (at least 64).
///
/// `f` must be real with `|f| <= 1`. The factor pair comes from the roots of
/// `(1 +- f) / 2`; if layer peeling leaves a residual above `tol` the angles
/// are polished by damped least squares before giving up.
pub fn find_phase_factors(f: &TrigPolynomial, tol: f64) -> Result<PhaseFactors> {
    if !f.is_real(1e-12) {
        return Err(Error::Invalid("phase factors need a real polynomial".into()));
    }
    let l = f.order();
    let points = (4 * l).max(64);
    let sup = f.sup_abs(points.max(16 * l));
    if sup > 1.0 + 1e-12 {
        return Err(Error::Invalid(format!("polynomial exceeds one in magnitude ({sup})")));
    }
    let mut plus = vec![ZERO; 2 * l + 1];
    let mut minus = vec![ZERO; 2 * l + 1];
    for (k, c) in f.coeffs().iter().enumerate() {
        plus[k] = c / 2.0;
        minus[k] = -c / 2.0;
    }
    plus[l] += 0.5;
    minus[l] += 0.5;
    let p = spectral_factor(&plus)?;
    let q = spectral_factor(&minus)?;
    let mut factors = peel(pad(p, l + 1), pad(q, l + 1));
    factors.residual = reconstruction_error(&factors, f, points);
    if factors.residual > tol {
        factors = polish(factors, f, points);
    }
    if factors.residual > tol || !factors.residual.is_finite() {
        return Err(Error::PhaseFactors { residual: factors.residual, tol });
    }
    Ok(factors)
}

fn pad(mut v: Vec<C64>, len: usize) -> Vec<C64> {
    v.resize(len, ZERO);
    v
}

/// Polynomial `p(w)` of degree at most `L` with `|p(e^{ix})|^2 = A(x)` for a
/// nonnegative Laurent polynomial given by coefficients `a_{-L} .. a_L`.
pub fn spectral_factor(a: &[C64]) -> Result<Vec<C64>> {
    let l = a.len() / 2;
    let scale = a.iter().fold(0.0f64, |m, c| m.max(c.norm()));
    if scale == 0.0 {
        return Ok(vec![ZERO]);
    }
    let mut d = l;
    while d > 0 && a[l + d].norm() <= 1e-15 * scale {
        d -= 1;
    }
    if d == 0 {
        return Ok(vec![C64::new(a[l].re.max(0.0).sqrt(), 0.0)]);
    }
    // q(w) = w^d A(w), degree 2d with leading coefficient a_d.
    let q: Vec<C64> = (0..=2 * d).map(|k| a[l + k - d]).collect();
    let roots = select_roots(&polynomial_roots(&q)?, d, &q);

    let n = (4 * d + 4).next_power_of_two();
    let mut values: Vec<C64> = Vec::with_capacity(n);
    let mut num = 0.0;
    let mut den = 0.0;
    for x in grid(n) {
        let w = C64::from_polar(1.0, x);
        let prod: C64 = roots.iter().map(|r| w - r).product();
        let target: f64 = (0..=2 * d).map(|k| q[k] * w.powi(k as i32 - d as i32)).sum::<C64>().re;
        let m2 = prod.norm_sqr();
        num += target * m2;
        den += m2 * m2;
        values.push(prod);
    }
    let c = (num / den).max(0.0).sqrt();
    let mut planner = FftPlanner::<f64>::new();
    planner.plan_fft_forward(n).process(&mut values);
    Ok(values.iter().take(d + 1).map(|v| v * (c / n as f64)).collect())
}

/// Roots of `sum_k q_k w^k` as eigenvalues of the companion matrix.
fn polynomial_roots(q: &[C64]) -> Result<Vec<C64>> {
    let deg = q.len() - 1;
    let lead = q[deg];
    let mut comp = CMatrix::zeros(deg, deg);
    for j in 0..deg {
        comp[(0, j)] = -q[deg - 1 - j] / lead;
    }
    for i in 1..deg {
        comp[(i, i - 1)] = ONE;
    }
    let schur = Schur::try_new(comp, f64::EPSILON, 0).ok_or(crate::error::Error::Eigen)?;
    let (_, t) = schur.unpack();
    Ok((0..deg).map(|i| t[(i, i)]).collect())
}

fn horner(q: &[C64], w: C64) -> (C64, C64) {
    let mut val = ZERO;
    let mut der = ZERO;
    for &c in q.iter().rev() {
        der = der * w + val;
        val = val * w + c;
    }
    (val, der)
}

/// Picks the `d` roots of the factor: all roots strictly inside the unit
/// disk, plus one representative per pair of roots that sit on the circle.
fn select_roots(roots: &[C64], d: usize, q: &[C64]) -> Vec<C64> {
    const NEAR: f64 = 1e-6;
    let mut inside: Vec<C64> = Vec::new();
    let mut circle: Vec<C64> = Vec::new();
    for &r in roots {
        let m = r.norm();
        if (m - 1.0).abs() < NEAR {
            circle.push(r);
        } else if m < 1.0 {
            inside.push(r);
        }
    }
    for r in inside.iter_mut() {
        for _ in 0..3 {
            let (v, dv) = horner(q, *r);
            if dv.norm() == 0.0 {
                break;
            }
            let step = v / dv;
            if !step.is_finite() || step.norm() > 1e-6 {
                break;
            }
            *r -= step;
        }
    }
    circle.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
    let merged: Vec<C64> = if circle.len() % 2 == 0 {
        circle.chunks(2).map(|pair| {
            let m = (pair[0] + pair[1]) / 2.0;
            m / m.norm()
        })
        .collect()
    } else {
        Vec::new()
    };
    if inside.len() + merged.len() == d {
        inside.extend(merged);
        inside
    } else {
        let mut all = roots.to_vec();
        all.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
        all.truncate(d);
        all
    }
}

/// Angles of `Rz(a) Ry(b)` whose first column is parallel to `u`.
fn column_angles(u: [C64; 2]) -> (f64, f64) {
    let b = 2.0 * u[1].norm().atan2(u[0].norm());
    let a = if u[0].norm() > 0.0 && u[1].norm() > 0.0 { u[1].arg() - u[0].arg() } else { 0.0 };
    (a, b)
}

fn rotation_columns(a: f64, b: f64) -> ([C64; 2], [C64; 2]) {
    (rz(a, ry(b, [ONE, ZERO])), rz(a, ry(b, [ZERO, ONE])))
}

/// Layer stripping of `(P, Q)` into the circuit angles.
fn peel(mut p: Vec<C64>, mut q: Vec<C64>) -> PhaseFactors {
    let l = p.len() - 1;
    let mut pairs: Vec<(f64, f64)> = Vec::with_capacity(l + 1);
    for deg in (1..=l).rev() {
        let low = [p[0], q[0]];
        let high = [p[deg], q[deg]];
        let low_norm = (low[0].norm_sqr() + low[1].norm_sqr()).sqrt();
        let high_norm = (high[0].norm_sqr() + high[1].norm_sqr()).sqrt();
        let (a, b) = if low_norm >= high_norm {
            column_angles(low)
        } else {
            column_angles([-high[1].conj(), high[0].conj()])
        };
        let (m1, m2) = rotation_columns(a, b);
        let mut np = vec![ZERO; deg];
        let mut nq = vec![ZERO; deg];
        for k in 0..=deg {
            let first = m1[0].conj() * p[k] + m1[1].conj() * q[k];
            let second = m2[0].conj() * p[k] + m2[1].conj() * q[k];
            if k < deg {
                np[k] = first;
            }
            if k > 0 {
                nq[k - 1] = second;
            }
        }
        p = np;
        q = nq;
        pairs.push((a, b));
    }
    pairs.push(column_angles([p[0], q[0]]));
    // pairs[s] = (Rz angle, Ry angle) of step s: step 0 gives (omega, theta_0),
    // step s >= 1 gives (phi_{s-1}, theta_s); phi_L is a global phase.
    let omega = pairs[0].0;
    let theta = pairs.iter().map(|&(_, b)| b).collect();
    let mut phi: Vec<f64> = pairs.iter().skip(1).map(|&(a, _)| a).collect();
    phi.push(0.0);
    PhaseFactors { omega, theta, phi, residual: f64::NAN }
}

/// Damped Gauss-Newton on the angles against samples of `f`.
fn polish(start: PhaseFactors, f: &TrigPolynomial, points: usize) -> PhaseFactors {
    let l = start.order();
    let xs: Vec<f64> = grid(points.max(4 * (l + 1))).collect();
    let target: Vec<f64> = xs.iter().map(|&x| f.eval(x)).collect();
    let residuals = |v: &[f64]| -> Vec<f64> {
        let pf = PhaseFactors::from_vector(v, l);
        xs.iter().zip(&target).map(|(&x, &t)| pf.reconstruct(x) - t).collect()
    };
    let worst = |r: &[f64]| r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut v = start.to_vector();
    if v.iter().any(|a| !a.is_finite()) {
        v = vec![0.1; 2 * l + 3];
    }
    let np = v.len();
    let mut r = residuals(&v);
    let mut cost: f64 = r.iter().map(|x| x * x).sum();
    let mut lambda = 1e-3;
    let h = 1e-7;
    for _ in 0..200 {
        if worst(&r) < 1e-13 {
            break;
        }
        let mut jac = nalgebra::DMatrix::<f64>::zeros(xs.len(), np);
        for k in 0..np {
            let mut vp = v.clone();
            let mut vm = v.clone();
            vp[k] += h;
            vm[k] -= h;
            let rp = residuals(&vp);
            let rm = residuals(&vm);
            for i in 0..xs.len() {
                jac[(i, k)] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        let jt = jac.transpose();
        let jtj = &jt * &jac;
        let g = &jt * nalgebra::DVector::from_vec(r.clone());
        let mut improved = false;
        for _ in 0..12 {
            let mut a = jtj.clone();
            for k in 0..np {
                a[(k, k)] += lambda * (1.0 + jtj[(k, k)]);
            }
            let Some(step) = a.cholesky().map(|c| c.solve(&g)) else {
                lambda *= 10.0;
                continue;
            };
            let trial: Vec<f64> = v.iter().zip(step.iter()).map(|(a, s)| a - s).collect();
            let rt = residuals(&trial);
            let ct: f64 = rt.iter().map(|x| x * x).sum();
            if ct < cost {
                v = trial;
                r = rt;
                cost = ct;
                lambda = (lambda / 3.0).max(1e-15);
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    let mut pf = PhaseFactors::from_vector(&v, l);
    pf.residual = reconstruction_error(&pf, f, points);
    pf
}
