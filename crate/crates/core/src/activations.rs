//! Activation functions with derivatives, derivative bounds, and Gaussian
//! slope/curvature moments.
//!
//! For an activation `φ` and `g ~ N(0,1)` the moments
//! `μ(σ) = E[φ'(σg)]` and `γ(σ) = E[φ''(σg)]` are the average slope and
//! curvature of `φ` under a Gaussian input of scale `σ`. Activations fall
//! into classes by the sign pattern of these moments over all `σ > 0`:
//! both nonzero (softplus), slope nonzero but curvature identically zero
//! (sigmoid, erf, tanh, whose `φ''` is odd), or slope identically zero
//! (quadratic). The local-convergence constants in [`crate::optimizer`]
//! depend on this classification.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use num_traits::Float;

const FRAC_2_SQRT_PI: f64 = 1.128_379_167_095_512_6;

#[derive(Debug, Clone, PartialEq)]
pub enum ActivationError {
    /// The requested derivative does not exist (relu at 0, or any second
    /// derivative of relu).
    Unsupported { activation: String, what: String },
    /// Negative `σ`, bad shape parameter, or an unparseable label.
    InvalidArgument(String),
}

impl core::fmt::Display for ActivationError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ActivationError::Unsupported { activation, what } => {
                write!(f, "{what} is not supported for activation {activation}")
            }
            ActivationError::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
        }
    }
}

impl core::error::Error for ActivationError {}

/// An activation function `φ` together with its first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Activation {
    /// `φ(z) = z²`
    Quadratic,
    /// `φ(z) = (1/b) log(1 + e^{bz})`, `b > 0`
    Softplus { b: f64 },
    /// `φ(z) = 1 / (1 + e^{-bz})`, `b > 0`
    Sigmoid { b: f64 },
    /// `φ(z) = (2/√π) ∫₀ᶻ e^{-t²/2} dt`
    Erf,
    /// `φ(z) = tanh(z)`
    Tanh,
    /// `φ(z) = max(0, z)`; kept for plotting parity only. Not differentiable
    /// at 0, so it is rejected by every derivative-based path.
    Relu,
}

/// Moment classes over a `σ`-grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentClass {
    /// `μ` and `γ` both bounded away from zero on the grid.
    NonzeroSlopeNonzeroCurvature,
    /// `μ` nonzero, `γ` identically zero.
    NonzeroSlopeZeroCurvature,
    /// `μ` identically zero.
    ZeroSlope,
    Unclassified,
}

/// `μ(σ)`, `γ(σ)`, and the accumulated quadrature error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentPair {
    pub mu: f64,
    pub gamma: f64,
    pub sigma: f64,
    pub quadrature_error_estimate: f64,
}

/// Numerically stable logistic function.
#[inline]
fn logistic(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + Float::exp(-t))
    } else {
        let e = Float::exp(t);
        e / (1.0 + e)
    }
}

/// Stable `log(1 + e^t)`.
#[inline]
fn log1p_exp(t: f64) -> f64 {
    t.max(0.0) + Float::ln_1p(Float::exp(-Float::abs(t)))
}

impl Activation {
    pub fn value(&self, z: f64) -> f64 {
        match *self {
            Activation::Quadratic => z * z,
            Activation::Softplus { b } => log1p_exp(b * z) / b,
            Activation::Sigmoid { b } => logistic(b * z),
            Activation::Erf => core::f64::consts::SQRT_2 * libm::erf(z / core::f64::consts::SQRT_2),
            Activation::Tanh => Float::tanh(z),
            Activation::Relu => z.max(0.0),
        }
    }

    pub fn deriv(&self, z: f64) -> Result<f64, ActivationError> {
        Ok(match *self {
            Activation::Quadratic => 2.0 * z,
            Activation::Softplus { b } => logistic(b * z),
            Activation::Sigmoid { b } => {
                let s = logistic(b * z);
                b * s * (1.0 - s)
            }
            Activation::Erf => FRAC_2_SQRT_PI * Float::exp(-0.5 * z * z),
            Activation::Tanh => {
                let t = Float::tanh(z);
                1.0 - t * t
            }
            Activation::Relu => {
                if z == 0.0 {
                    return Err(self.unsupported("derivative at 0"));
                }
                if z > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
        })
    }

    pub fn deriv2(&self, z: f64) -> Result<f64, ActivationError> {
        Ok(match *self {
            Activation::Quadratic => 2.0,
            Activation::Softplus { b } => {
                let s = logistic(b * z);
                b * s * (1.0 - s)
            }
            Activation::Sigmoid { b } => {
                let s = logistic(b * z);
                b * b * s * (1.0 - s) * (1.0 - 2.0 * s)
            }
            Activation::Erf => -FRAC_2_SQRT_PI * z * Float::exp(-0.5 * z * z),
            Activation::Tanh => {
                let t = Float::tanh(z);
                -2.0 * t * (1.0 - t * t)
            }
            Activation::Relu => return Err(self.unsupported("second derivative")),
        })
    }

    /// `φ`, `φ'`, or `φ''` by derivative order.
    pub fn eval(&self, z: f64, order: u8) -> Result<f64, ActivationError> {
        match order {
            0 => Ok(self.value(z)),
            1 => self.deriv(z),
            2 => self.deriv2(z),
            _ => Err(ActivationError::InvalidArgument(format!("derivative order {order}"))),
        }
    }

    /// Uniform bound `B` on `|φ'|`, if one exists.
    pub fn deriv1_bound(&self) -> Option<f64> {
        match *self {
            Activation::Quadratic => None,
            Activation::Softplus { .. } => Some(1.0),
            Activation::Sigmoid { b } => Some(b / 4.0),
            Activation::Erf => Some(FRAC_2_SQRT_PI),
            Activation::Tanh => Some(1.0),
            Activation::Relu => Some(1.0),
        }
    }

    /// Uniform bound `L` on `|φ''|`, if one exists.
    pub fn deriv2_bound(&self) -> Option<f64> {
        match *self {
            Activation::Quadratic => Some(2.0),
            Activation::Softplus { b } => Some(b / 4.0),
            // max of s(1-s)(1-2s) over s in [0,1] is 1/(6√3).
            Activation::Sigmoid { b } => Some(b * b / (6.0 * 3.0f64.sqrt())),
            Activation::Erf => Some(FRAC_2_SQRT_PI * Float::exp(-0.5)),
            Activation::Tanh => Some(4.0 / (3.0 * 3.0f64.sqrt())),
            Activation::Relu => None,
        }
    }

    /// Twice differentiable everywhere?
    pub fn is_smooth(&self) -> bool {
        !matches!(self, Activation::Relu)
    }

    fn unsupported(&self, what: &str) -> ActivationError {
        ActivationError::Unsupported { activation: self.label(), what: what.to_string() }
    }

    /// Canonical label, also accepted by [`Activation::parse`].
    pub fn label(&self) -> String {
        match *self {
            Activation::Quadratic => "quad".to_string(),
            Activation::Softplus { b } => format!("softplus:{b}"),
            Activation::Sigmoid { b } => format!("sigmoid:{b}"),
            Activation::Erf => "erf".to_string(),
            Activation::Tanh => "tanh".to_string(),
            Activation::Relu => "relu".to_string(),
        }
    }

    /// Parse `quad | softplus:b | sigmoid:b | erf | tanh | relu`.
    pub fn parse(s: &str) -> Result<Activation, ActivationError> {
        let bad = |msg: &str| ActivationError::InvalidArgument(format!("activation '{s}': {msg}"));
        let parse_b = |arg: Option<&str>| -> Result<f64, ActivationError> {
            let raw = arg.ok_or_else(|| bad("missing shape parameter b"))?;
            let b: f64 = raw.parse().map_err(|_| bad("b is not a number"))?;
            if !b.is_finite() || b <= 0.0 {
                return Err(bad("b must be a positive decimal"));
            }
            Ok(b)
        };
        let mut parts = s.splitn(2, ':');
        let head = parts.next().unwrap_or("");
        let arg = parts.next();
        match head {
            "quad" | "quadratic" => Ok(Activation::Quadratic),
            "softplus" => Ok(Activation::Softplus { b: parse_b(arg)? }),
            "sigmoid" => Ok(Activation::Sigmoid { b: parse_b(arg)? }),
            "erf" => Ok(Activation::Erf),
            "tanh" => Ok(Activation::Tanh),
            "relu" => Ok(Activation::Relu),
            _ => Err(bad("unknown activation")),
        }
    }

    /// `μ(σ) = E[φ'(σg)]` and `γ(σ) = E[φ''(σg)]` for `g ~ N(0,1)`.
    pub fn gaussian_moments(&self, sigma: f64) -> Result<MomentPair, ActivationError> {
        self.gaussian_moments_with_tolerance(sigma, 1e-13)
    }

    /// Moments with an explicit quadrature tolerance (absolute, per moment).
    pub fn gaussian_moments_with_tolerance(
        &self,
        sigma: f64,
        tol: f64,
    ) -> Result<MomentPair, ActivationError> {
        if !self.is_smooth() {
            return Err(self.unsupported("Gaussian moments"));
        }
        if !(sigma >= 0.0) || !sigma.is_finite() {
            return Err(ActivationError::InvalidArgument(format!("sigma = {sigma}")));
        }
        if sigma == 0.0 {
            return Ok(MomentPair {
                mu: self.deriv(0.0)?,
                gamma: self.deriv2(0.0)?,
                sigma,
                quadrature_error_estimate: 0.0,
            });
        }
        let (mu, err_mu) = gaussian_expectation(|z| self.deriv(z).unwrap_or(0.0), sigma, tol);
        let (gamma, err_gamma) = gaussian_expectation(|z| self.deriv2(z).unwrap_or(0.0), sigma, tol);
        Ok(MomentPair { mu, gamma, sigma, quadrature_error_estimate: err_mu.max(err_gamma) })
    }

    /// Moment class over a grid of positive `σ` values.
    ///
    /// A moment counts as zero when it stays within [`MOMENT_ZERO_TOL`] of
    /// zero across the whole grid, and as nonzero when it exceeds the
    /// tolerance across the whole grid; mixed behavior is unclassified.
    pub fn classify(&self, sigma_grid: &[f64]) -> Result<MomentClass, ActivationError> {
        if sigma_grid.is_empty() {
            return Err(ActivationError::InvalidArgument("empty sigma grid".into()));
        }
        if sigma_grid.iter().any(|&s| !(s > 0.0)) {
            return Err(ActivationError::InvalidArgument("sigma grid must be positive".into()));
        }
        let moments: Vec<MomentPair> =
            sigma_grid.iter().map(|&s| self.gaussian_moments(s)).collect::<Result<_, _>>()?;
        let mu_all_zero = moments.iter().all(|m| Float::abs(m.mu) <= MOMENT_ZERO_TOL);
        let mu_all_nonzero = moments.iter().all(|m| Float::abs(m.mu) > MOMENT_ZERO_TOL);
        let gamma_all_zero = moments.iter().all(|m| Float::abs(m.gamma) <= MOMENT_ZERO_TOL);
        let gamma_all_nonzero = moments.iter().all(|m| Float::abs(m.gamma) > MOMENT_ZERO_TOL);
        Ok(if mu_all_zero {
            MomentClass::ZeroSlope
        } else if mu_all_nonzero && gamma_all_nonzero {
            MomentClass::NonzeroSlopeNonzeroCurvature
        } else if mu_all_nonzero && gamma_all_zero {
            MomentClass::NonzeroSlopeZeroCurvature
        } else {
            MomentClass::Unclassified
        })
    }
}

impl core::fmt::Display for Activation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl core::str::FromStr for Activation {
    type Err = ActivationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Activation::parse(s)
    }
}

/// Threshold below which a moment counts as zero in [`Activation::classify`];
/// an order above the quadrature tolerance.
pub const MOMENT_ZERO_TOL: f64 = 1e-8;

/// `E[h(σ g)]` for `g ~ N(0,1)` by adaptive Gauss-Kronrod quadrature over
/// `[-14σ, 14σ]` against the Gaussian density. The tail beyond `14σ`
/// contributes less than `1e-43` of the density mass, far below the
/// tolerance for the bounded-growth integrands used here. Returns the
/// estimate along with an accumulated error bound.
///
/// Adaptive bisection is what makes kinked integrands work: logistic-family
/// activations concentrate their curvature in a window of width `1/b` that
/// a fixed global rule under-resolves.
pub fn gaussian_expectation(h: impl Fn(f64) -> f64, sigma: f64, tol: f64) -> (f64, f64) {
    let density = |z: f64| {
        Float::exp(-0.5 * (z / sigma) * (z / sigma))
            / (sigma * (2.0 * core::f64::consts::PI).sqrt())
    };
    let f = |z: f64| h(z) * density(z);
    let limit = 14.0 * sigma;
    adaptive_gauss_kronrod(&f, -limit, limit, tol)
}

// Gauss-Kronrod (G7, K15) nodes and weights on [-1, 1].
const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_17,
    0.207_784_955_007_898_47,
    0.0,
];
const GK_WEIGHTS_K: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const GK_WEIGHTS_G: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(mid);
    let mut kronrod = GK_WEIGHTS_K[7] * fc;
    let mut gauss = GK_WEIGHTS_G[3] * fc;
    for i in 0..7 {
        let x = half * GK_NODES[i];
        let fsum = f(mid - x) + f(mid + x);
        kronrod += GK_WEIGHTS_K[i] * fsum;
        if i % 2 == 1 {
            gauss += GK_WEIGHTS_G[i / 2] * fsum;
        }
    }
    kronrod *= half;
    gauss *= half;
    (kronrod, Float::abs(kronrod - gauss))
}

/// Simple stack-based adaptive bisection; returns `(integral, error_bound)`.
fn adaptive_gauss_kronrod(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let mut stack: Vec<(f64, f64)> = Vec::new();
    stack.push((a, b));
    let mut total = 0.0;
    let mut total_err = 0.0;
    let mut splits = 0usize;
    while let Some((lo, hi)) = stack.pop() {
        let (val, e) = gk15(f, lo, hi);
        let local_tol = tol * (hi - lo) / (b - a);
        if e <= local_tol || hi - lo < 1e-14 * (b - a) || splits > 20_000 {
            total += val;
            total_err += e;
        } else {
            splits += 1;
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid));
            stack.push((mid, hi));
        }
    }
    (total, total_err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::CounterRng;
    use alloc::vec;

    const SMOOTH: [Activation; 5] = [
        Activation::Quadratic,
        Activation::Softplus { b: 10.0 },
        Activation::Sigmoid { b: 4.0 },
        Activation::Erf,
        Activation::Tanh,
    ];

    #[test]
    fn pointwise_values() {
        assert_eq!(Activation::Quadratic.eval(2.0, 0).unwrap(), 4.0);
        assert_eq!(Activation::Quadratic.eval(3.0, 1).unwrap(), 6.0);
        let sp = Activation::Softplus { b: 10.0 };
        assert!((sp.value(0.0) - 2.0f64.ln() / 10.0).abs() < 1e-15);
        assert_eq!(Activation::Relu.value(-3.0), 0.0);
        assert_eq!(Activation::Relu.value(3.0), 3.0);
    }

    #[test]
    fn relu_derivative_rules() {
        assert_eq!(Activation::Relu.deriv(1.0).unwrap(), 1.0);
        assert_eq!(Activation::Relu.deriv(-1.0).unwrap(), 0.0);
        assert!(Activation::Relu.deriv(0.0).is_err());
        assert!(Activation::Relu.deriv2(5.0).is_err());
        assert!(Activation::Relu.gaussian_moments(1.0).is_err());
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let mut rng = CounterRng::new(2024, 0);
        let h = 1e-5;
        for act in SMOOTH {
            for _ in 0..100 {
                let z = 20.0 * rng.uniform() - 10.0;
                let d1 = act.deriv(z).unwrap();
                let fd1 = (act.value(z + h) - act.value(z - h)) / (2.0 * h);
                assert!(
                    (d1 - fd1).abs() <= 1e-6 * d1.abs().max(1.0),
                    "{act} d1 at {z}: {d1} vs {fd1}"
                );
                let d2 = act.deriv2(z).unwrap();
                let fd2 = (act.deriv(z + h).unwrap() - act.deriv(z - h).unwrap()) / (2.0 * h);
                assert!(
                    (d2 - fd2).abs() <= 1e-6 * d2.abs().max(1.0),
                    "{act} d2 at {z}: {d2} vs {fd2}"
                );
            }
        }
    }

    #[test]
    fn derivative_bounds_hold_on_grid() {
        for act in SMOOTH {
            let b = act.deriv1_bound();
            let l = act.deriv2_bound();
            for i in 0..2001 {
                let z = -10.0 + i as f64 * 0.01;
                if let Some(b) = b {
                    assert!(act.deriv(z).unwrap().abs() <= b * (1.0 + 1e-12), "{act} B at {z}");
                }
                if let Some(l) = l {
                    assert!(act.deriv2(z).unwrap().abs() <= l * (1.0 + 1e-12), "{act} L at {z}");
                }
            }
        }
    }

    #[test]
    fn quadratic_moments_are_analytic() {
        for sigma in [0.3, 1.0, 2.5] {
            let m = Activation::Quadratic.gaussian_moments(sigma).unwrap();
            assert!(m.mu.abs() < 1e-12, "mu {}", m.mu);
            assert!((m.gamma - 2.0).abs() < 1e-12, "gamma {}", m.gamma);
        }
    }

    #[test]
    fn erf_slope_moment_matches_closed_form() {
        // E[(2/√π) e^{-σ²g²/2}] = 2 / √(π (1 + σ²)).
        for sigma in [0.25, 0.5, 1.0, 2.0, 5.0] {
            let m = Activation::Erf.gaussian_moments(sigma).unwrap();
            let expect = 2.0 / (core::f64::consts::PI * (1.0 + sigma * sigma)).sqrt();
            assert!((m.mu - expect).abs() < 1e-11, "sigma {sigma}: {} vs {expect}", m.mu);
        }
    }

    #[test]
    fn odd_curvature_activations_have_zero_gamma() {
        for act in [Activation::Sigmoid { b: 4.0 }, Activation::Erf, Activation::Tanh] {
            for sigma in [0.5, 1.0, 2.0, 5.0] {
                let m = act.gaussian_moments(sigma).unwrap();
                assert!(m.gamma.abs() <= 1e-10, "{act} sigma {sigma}: gamma {}", m.gamma);
            }
        }
    }

    #[test]
    fn moments_match_monte_carlo() {
        // Independent oracle: 10^6-draw Monte Carlo, agreement within 3
        // standard errors.
        let act = Activation::Softplus { b: 4.0 };
        let sigma = 1.0;
        let n = 1_000_000usize;
        let mut rng = CounterRng::new(77, 0);
        let (mut mu_sum, mut mu_sq, mut ga_sum, mut ga_sq) = (0.0, 0.0, 0.0, 0.0);
        for _ in 0..n {
            let z = sigma * rng.gaussian();
            let d1 = act.deriv(z).unwrap();
            let d2 = act.deriv2(z).unwrap();
            mu_sum += d1;
            mu_sq += d1 * d1;
            ga_sum += d2;
            ga_sq += d2 * d2;
        }
        let nf = n as f64;
        let mc_mu = mu_sum / nf;
        let mc_ga = ga_sum / nf;
        let se_mu = ((mu_sq / nf - mc_mu * mc_mu) / nf).sqrt();
        let se_ga = ((ga_sq / nf - mc_ga * mc_ga) / nf).sqrt();
        let m = act.gaussian_moments(sigma).unwrap();
        assert!(m.mu > 0.0 && m.gamma > 0.0);
        assert!((m.mu - mc_mu).abs() <= 3.0 * se_mu, "mu {} vs MC {mc_mu} (se {se_mu})", m.mu);
        assert!(
            (m.gamma - mc_ga).abs() <= 3.0 * se_ga,
            "gamma {} vs MC {mc_ga} (se {se_ga})",
            m.gamma
        );
    }

    #[test]
    fn two_quadrature_budgets_agree() {
        for act in SMOOTH {
            for sigma in [0.25, 0.5, 1.0, 2.0, 3.5, 5.0] {
                let coarse = act.gaussian_moments_with_tolerance(sigma, 1e-11).unwrap();
                let fine = act.gaussian_moments_with_tolerance(sigma, 1e-14).unwrap();
                assert!(
                    (coarse.mu - fine.mu).abs() <= 1e-10,
                    "{act} sigma {sigma}: mu {} vs {}",
                    coarse.mu,
                    fine.mu
                );
                assert!(
                    (coarse.gamma - fine.gamma).abs() <= 1e-10,
                    "{act} sigma {sigma}: gamma {} vs {}",
                    coarse.gamma,
                    fine.gamma
                );
            }
        }
    }

    #[test]
    fn increasing_activations_have_positive_slope_moment() {
        let grid = [0.25, 0.5, 1.0, 2.0, 5.0];
        for act in [
            Activation::Softplus { b: 10.0 },
            Activation::Sigmoid { b: 4.0 },
            Activation::Erf,
            Activation::Tanh,
        ] {
            for &sigma in &grid {
                assert!(act.gaussian_moments(sigma).unwrap().mu > 0.0, "{act} at {sigma}");
            }
        }
    }

    #[test]
    fn moment_classification() {
        let grid = vec![0.5, 1.0, 2.0];
        assert_eq!(
            Activation::Softplus { b: 4.0 }.classify(&grid).unwrap(),
            MomentClass::NonzeroSlopeNonzeroCurvature
        );
        assert_eq!(Activation::Erf.classify(&grid).unwrap(), MomentClass::NonzeroSlopeZeroCurvature);
        assert_eq!(Activation::Tanh.classify(&grid).unwrap(), MomentClass::NonzeroSlopeZeroCurvature);
        assert_eq!(
            Activation::Sigmoid { b: 4.0 }.classify(&grid).unwrap(),
            MomentClass::NonzeroSlopeZeroCurvature
        );
        assert_eq!(Activation::Quadratic.classify(&grid).unwrap(), MomentClass::ZeroSlope);
        assert!(Activation::Tanh.classify(&[]).is_err());
        assert!(Activation::Tanh.classify(&[-1.0]).is_err());
    }

    #[test]
    fn sigma_zero_and_negative() {
        let m = Activation::Tanh.gaussian_moments(0.0).unwrap();
        assert_eq!(m.mu, 1.0);
        assert_eq!(m.gamma, 0.0);
        assert!(Activation::Tanh.gaussian_moments(-1.0).is_err());
    }

    #[test]
    fn parse_round_trip() {
        for s in ["quad", "softplus:10", "softplus:4", "sigmoid:4", "erf", "tanh", "relu"] {
            let a = Activation::parse(s).unwrap();
            assert_eq!(a.label(), s);
        }
        assert!(Activation::parse("softplus").is_err());
        assert!(Activation::parse("softplus:-1").is_err());
        assert!(Activation::parse("softplus:x").is_err());
        assert!(Activation::parse("gelu").is_err());
    }
}
