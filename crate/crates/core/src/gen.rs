//! Synthetic dataset generation: planted (student-teacher) models and
//! random-label data, reproducible from a master seed.
//!
//! Inputs are always `xᵢ ~ N(0, I_d)`. Labels are either regenerated from
//! planted weights (`yᵢ = ⟨v*, φ(W*xᵢ)⟩`, provenance kept on the dataset)
//! or drawn i.i.d. `N(0,1)`. Independent counter streams keyed by the
//! master seed cover inputs, teacher weights, and labels, so changing one
//! piece of the configuration never reshuffles the others.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Float;

use crate::activations::Activation;
use crate::linalg::Matrix;
use crate::network::{forward, Dataset, NetworkError, NetworkParams, Planted};
use crate::rng::CounterRng;

#[derive(Debug, Clone, PartialEq)]
pub enum GenError {
    InvalidConfig(String),
    Network(NetworkError),
}

impl core::fmt::Display for GenError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            GenError::InvalidConfig(msg) => write!(f, "invalid generator config: {msg}"),
            GenError::Network(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for GenError {}

impl From<NetworkError> for GenError {
    fn from(e: NetworkError) -> Self {
        GenError::Network(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelKind {
    /// `yᵢ = ⟨v*, φ(W*xᵢ)⟩` with provenance attached.
    Planted,
    /// `yᵢ ~ N(0,1)`, independent of the inputs.
    GaussianRandom,
}

/// Teacher output-weight patterns.
#[derive(Debug, Clone, PartialEq)]
pub enum VStarKind {
    AllOne,
    AllNu(f64),
    /// `plus` entries `+1` followed by `minus` entries `-1`.
    MixedSign { plus: usize, minus: usize },
    Custom(Vec<f64>),
}

/// Teacher input-weight distributions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightScheme {
    /// i.i.d. `N(0,1)/√d` entries.
    GaussianOverSqrtD,
    /// Rows with uniform random direction and norm uniform in
    /// `[w_min, w_max]`; output weights with magnitude uniform in
    /// `[v_min, v_max]` and random sign.
    Bounded { v_min: f64, v_max: f64, w_min: f64, w_max: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorConfig {
    pub d: usize,
    pub n: usize,
    pub k: usize,
    pub label_kind: LabelKind,
    pub activation: Activation,
    pub weight_scheme: WeightScheme,
    pub v_star: VStarKind,
    pub master_seed: u64,
}

impl GeneratorConfig {
    pub fn planted(d: usize, n: usize, k: usize, activation: Activation, master_seed: u64) -> Self {
        GeneratorConfig {
            d,
            n,
            k,
            label_kind: LabelKind::Planted,
            activation,
            weight_scheme: WeightScheme::GaussianOverSqrtD,
            v_star: VStarKind::AllOne,
            master_seed,
        }
    }

    pub fn random_labels(d: usize, n: usize, master_seed: u64) -> Self {
        GeneratorConfig {
            d,
            n,
            k: 0,
            label_kind: LabelKind::GaussianRandom,
            activation: Activation::Quadratic,
            weight_scheme: WeightScheme::GaussianOverSqrtD,
            v_star: VStarKind::AllOne,
            master_seed,
        }
    }

    fn validate(&self) -> Result<(), GenError> {
        if self.d == 0 || self.n == 0 {
            return Err(GenError::InvalidConfig(format!("d = {}, n = {}", self.d, self.n)));
        }
        if matches!(self.label_kind, LabelKind::Planted) && self.k == 0 {
            return Err(GenError::InvalidConfig(String::from("planted labels need k ≥ 1")));
        }
        match &self.v_star {
            VStarKind::MixedSign { plus, minus } => {
                if plus + minus != self.k || *plus == 0 || *minus == 0 {
                    return Err(GenError::InvalidConfig(format!(
                        "mixed signs {plus}+{minus} must partition k = {}",
                        self.k
                    )));
                }
            }
            VStarKind::Custom(v) => {
                if v.len() != self.k {
                    return Err(GenError::InvalidConfig(String::from("custom v* length")));
                }
            }
            VStarKind::AllNu(nu) => {
                if !nu.is_finite() || *nu == 0.0 {
                    return Err(GenError::InvalidConfig(String::from("ν must be finite nonzero")));
                }
            }
            VStarKind::AllOne => {}
        }
        if let WeightScheme::Bounded { v_min, v_max, w_min, w_max } = self.weight_scheme {
            if !(0.0 < v_min && v_min <= v_max && 0.0 < w_min && w_min <= w_max) {
                return Err(GenError::InvalidConfig(String::from("bounds must satisfy 0 < min ≤ max")));
            }
        }
        Ok(())
    }
}

// Stream ids within a generator seed.
const STREAM_X: u64 = 1;
const STREAM_W: u64 = 2;
const STREAM_V: u64 = 3;
const STREAM_Y: u64 = 4;

/// Draw the teacher weights for `cfg` (planted configurations only).
pub fn generate_teacher(cfg: &GeneratorConfig) -> Result<NetworkParams, GenError> {
    cfg.validate()?;
    let mut rng_w = CounterRng::new(cfg.master_seed, STREAM_W);
    let mut rng_v = CounterRng::new(cfg.master_seed, STREAM_V);
    let w = match cfg.weight_scheme {
        WeightScheme::GaussianOverSqrtD => {
            let scale = 1.0 / (cfg.d as f64).sqrt();
            Matrix::from_fn(cfg.k, cfg.d, |_, _| rng_w.gaussian() * scale)
        }
        WeightScheme::Bounded { w_min, w_max, .. } => {
            let mut w = Matrix::zeros(cfg.k, cfg.d);
            for l in 0..cfg.k {
                let dir: Vec<f64> = (0..cfg.d).map(|_| rng_w.gaussian()).collect();
                let nrm = crate::linalg::norm2(&dir).max(f64::MIN_POSITIVE);
                let target = w_min + (w_max - w_min) * rng_w.uniform();
                for (j, x) in dir.iter().enumerate() {
                    *w.at_mut(l, j) = x / nrm * target;
                }
            }
            w
        }
    };
    let v: Vec<f64> = match &cfg.v_star {
        VStarKind::AllOne => alloc::vec![1.0; cfg.k],
        VStarKind::AllNu(nu) => alloc::vec![*nu; cfg.k],
        VStarKind::MixedSign { plus, .. } => {
            (0..cfg.k).map(|l| if l < *plus { 1.0 } else { -1.0 }).collect()
        }
        VStarKind::Custom(v) => v.clone(),
    };
    let v = match cfg.weight_scheme {
        WeightScheme::Bounded { v_min, v_max, .. } => v
            .iter()
            .map(|&s| {
                let mag = v_min + (v_max - v_min) * rng_v.uniform();
                let sign = if s == 0.0 { rng_v.rademacher() } else { s.signum() };
                sign * mag
            })
            .collect(),
        WeightScheme::GaussianOverSqrtD => v,
    };
    Ok(NetworkParams::new(v, w)?)
}

/// Generate a dataset according to `cfg`. Deterministic in the seed.
pub fn generate_dataset(cfg: &GeneratorConfig) -> Result<Dataset, GenError> {
    cfg.validate()?;
    let mut rng_x = CounterRng::new(cfg.master_seed, STREAM_X);
    let x = Matrix::from_fn(cfg.d, cfg.n, |_, _| rng_x.gaussian());
    match cfg.label_kind {
        LabelKind::Planted => {
            let teacher = generate_teacher(cfg)?;
            let y = forward(&teacher, &x, &cfg.activation)?;
            Ok(Dataset::new(x, y)?
                .with_planted(Planted { params: teacher, activation: cfg.activation })?)
        }
        LabelKind::GaussianRandom => {
            let mut rng_y = CounterRng::new(cfg.master_seed, STREAM_Y);
            let y: Vec<f64> = (0..cfg.n).map(|_| rng_y.gaussian()).collect();
            Ok(Dataset::new(x, y)?)
        }
    }
}
