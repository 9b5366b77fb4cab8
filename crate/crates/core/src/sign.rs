//! Trigonometric polynomials and the smooth sign approximation that drives
//! every phase-search round.

use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{C64, ZERO};

/// Orders above this are rejected rather than synthesized.
pub const MAX_ORDER: usize = 20_000;

/// `f(x) = sum_{j=-L}^{L} c_j e^{ijx}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigPolynomial {
    order: usize,
    coeffs: Vec<C64>,
}

impl TrigPolynomial {
    /// Coefficients listed from `c_{-L}` to `c_L`.
    pub fn new(coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.len() % 2 == 0 {
            return Err(Error::Invalid("coefficient list must have odd length".into()));
        }
        Ok(TrigPolynomial { order: coeffs.len() / 2, coeffs })
    }

    /// `sum_j b_j sin(j x)` for `j = 1..=b.len()`.
    pub fn from_sine_series(b: &[f64]) -> Self {
        let order = b.len();
        let mut coeffs = vec![ZERO; 2 * order + 1];
        for (k, &bj) in b.iter().enumerate() {
            let j = k + 1;
            coeffs[order + j] = C64::new(0.0, -bj / 2.0);
            coeffs[order - j] = C64::new(0.0, bj / 2.0);
        }
        TrigPolynomial { order, coeffs }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn coefficient(&self, j: i64) -> C64 {
        let idx = j + self.order as i64;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            ZERO
        } else {
            self.coeffs[idx as usize]
        }
    }

    pub fn eval_complex(&self, x: f64) -> C64 {
        // Powers of e^{ix} by recurrence, renormalized every 64 steps.
        let step = C64::from_polar(1.0, x);
        let mut w = C64::from_polar(1.0, -(self.order as f64) * x);
        let mut sum = C64::new(0.0, 0.0);
        for (k, c) in self.coeffs.iter().enumerate() {
            if k % 64 == 63 {
                w = C64::from_polar(1.0, (k as f64 - self.order as f64) * x);
            }
            sum += c * w;
            w *= step;
        }
        sum
    }

    /// Real value of a real polynomial.
    pub fn eval(&self, x: f64) -> f64 {
        let z = self.eval_complex(x);
        debug_assert!(z.im.abs() <= 1e-9, "imaginary residue {}", z.im);
        z.re
    }

    pub fn one_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// `c_{-j} = conj(c_j)` for all `j`.
    pub fn is_real(&self, tol: f64) -> bool {
        let l = self.order as i64;
        (0..=l).all(|j| (self.coefficient(-j) - self.coefficient(j).conj()).norm() <= tol)
    }

    /// `c_{-j} = -c_j` for all `j`.
    pub fn is_odd(&self, tol: f64) -> bool {
        let l = self.order as i64;
        (0..=l).all(|j| (self.coefficient(-j) + self.coefficient(j)).norm() <= tol)
    }

    /// Largest `|f|` over `points` equally spaced samples of the period.
    pub fn sup_abs(&self, points: usize) -> f64 {
        grid(points).map(|x| self.eval(x).abs()).fold(0.0, f64::max)
    }

    pub fn scaled(&self, s: f64) -> Self {
        TrigPolynomial { order: self.order, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }
}

/// `points` equally spaced angles in `[0, 2 pi)`.
pub fn grid(points: usize) -> impl Iterator<Item = f64> {
    let step = 2.0 * std::f64::consts::PI / points as f64;
    (0..points).map(move |m| m as f64 * step)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SignParams {
    /// Half-width of the excluded band around 0 and pi.
    pub kappa: f64,
    /// Uniform error allowed outside the excluded bands.
    pub epsilon: f64,
}

#[derive(Clone, Debug)]
pub struct SignApproximation {
    pub params: SignParams,
    pub poly: TrigPolynomial,
    /// Steepness of the error-function profile.
    pub steepness: f64,
    /// Sum of discarded coefficient magnitudes.
    pub truncation_tail: f64,
    /// Factor applied after truncation to keep `|f| < 1`.
    pub scale: f64,
}

impl SignApproximation {
    pub fn order(&self) -> usize {
        self.poly.order()
    }
}

/// Steepness `k` for which `erf(k sin x)` is within `epsilon / 2` of the sign
/// of `sin x` whenever `|sin x| >= sin(kappa)`.
pub fn steepness(params: SignParams) -> f64 {
    2f64.sqrt() * (2.0 / params.epsilon).ln().sqrt() / params.kappa.sin()
}

/// Odd real polynomial with `|f - 1| <= epsilon` on `(kappa, pi - kappa)`,
/// `|f + 1| <= epsilon` on `(-pi + kappa, -kappa)` and `|f| < 1` everywhere.
///
/// The profile `erf(k sin x)` is sampled and transformed; the series is cut at
/// the smallest order whose discarded mass is at most `epsilon / 4`, then
/// shrunk by `1 + tail + epsilon / 8` so the truncated series stays strictly
/// inside `[-1, 1]`. Profile error, tail and shrink together stay below
/// `epsilon`.
pub fn approx_sign(params: SignParams) -> Result<SignApproximation> {
    let SignParams { kappa, epsilon } = params;
    if !(kappa > 0.0 && kappa < std::f64::consts::FRAC_PI_2) {
        return Err(Error::Invalid(format!("kappa must lie in (0, pi/2), got {kappa}")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Invalid(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let k = steepness(params);
    let budget = epsilon / 4.0;
    let mut planner = FftPlanner::<f64>::new();
    let mut n = 1024usize;
    loop {
        let mut buf: Vec<C64> = grid(n).map(|x| C64::new(libm::erf(k * x.sin()), 0.0)).collect();
        planner.plan_fft_forward(n).process(&mut buf);
        let half = n / 2;
        // Sine coefficient magnitudes |c_j| for j = 1..half; |c_{-j}| is equal.
        let mags: Vec<f64> = (1..half).map(|j| (buf[j].im / n as f64).abs()).collect();
        let mut tail = 0.0;
        let mut order = half - 1;
        for j in (1..half).rev() {
            let next = tail + 2.0 * mags[j - 1];
            if next > budget {
                order = j;
                break;
            }
            tail = next;
        }
        if order > MAX_ORDER {
            return Err(Error::OrderCap(MAX_ORDER));
        }
        if order * 8 > n {
            n *= 2;
            continue;
        }
        let scale = 1.0 / (1.0 + tail + epsilon / 8.0);
        let b: Vec<f64> = (1..=order)
            .map(|j| if j % 2 == 1 { -2.0 * buf[j].im / n as f64 * scale } else { 0.0 })
            .collect();
        let poly = TrigPolynomial::from_sine_series(&b);
        return Ok(SignApproximation { params, poly, steepness: k, truncation_tail: tail, scale });
    }
}

/// Worst deviation from the sign function over `points` samples of the
/// region where the approximation is constrained.
pub fn sign_deviation(approx: &SignApproximation, points: usize) -> f64 {
    let kappa = approx.params.kappa;
    let pi = std::f64::consts::PI;
    let mut worst: f64 = 0.0;
    for m in 0..points {
        let x = kappa + (pi - 2.0 * kappa) * (m as f64 + 0.5) / points as f64;
        worst = worst.max((approx.poly.eval(x) - 1.0).abs());
        worst = worst.max((approx.poly.eval(-x) + 1.0).abs());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sine_series_evaluates_like_sine() {
        let p = TrigPolynomial::from_sine_series(&[1.0, 0.0, 0.25]);
        for x in grid(37) {
            let want = x.sin() + 0.25 * (3.0 * x).sin();
            assert!((p.eval(x) - want).abs() < 1e-14);
        }
        assert!(p.is_odd(0.0) && p.is_real(0.0));
    }

    #[test]
    fn steepness_meets_profile_error() {
        let params = SignParams { kappa: 0.2, epsilon: 1e-5 };
        let k = steepness(params);
        assert!(1.0 - libm::erf(k * params.kappa.sin()) <= params.epsilon / 2.0);
    }

    #[test]
    fn sign_approximation_bounded_and_accurate() {
        let params = SignParams { kappa: 0.4, epsilon: 1e-3 };
        let a = approx_sign(params).unwrap();
        assert!(a.order() % 2 == 1);
        assert!(a.poly.is_odd(0.0) && a.poly.is_real(0.0));
        assert!(sign_deviation(&a, 2000) <= params.epsilon);
        assert!(a.poly.sup_abs(16 * a.order()) < 1.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(approx_sign(SignParams { kappa: 0.0, epsilon: 0.1 }).is_err());
        assert!(approx_sign(SignParams { kappa: 2.0, epsilon: 0.1 }).is_err());
        assert!(approx_sign(SignParams { kappa: 0.3, epsilon: 0.0 }).is_err());
    }
}
