//! JSON experiment configuration with a schema-version field.

use serde::{Deserialize, Serialize};
use shallow_landscape::activations::Activation;
use shallow_landscape::landscape::{FixedDim, OutputWeightPolicy, SweepConfig, TeacherWidth};
use shallow_landscape::optimizer::{GdConfig, StepSize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfigFile {
    pub schema_version: u32,
    pub n: usize,
    /// Exactly one of `fixed_d` / `fixed_k`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_k: Option<usize>,
    pub sweep: Vec<usize>,
    pub planted: bool,
    /// Teacher width for planted labels: "match" (student width),
    /// "input-rank" (width d, full-rank quadratic Gram), or a number.
    #[serde(default = "default_teacher")]
    pub teacher: String,
    /// Student output-weight policy: "rademacher" or "balanced".
    #[serde(default = "default_v_policy")]
    pub v_policy: String,
    pub weights_per_point: usize,
    pub inits_per_weight: usize,
    /// Activation label, e.g. `quad` or `softplus:10`.
    pub activation: String,
    /// Master seeds to pool; one table per seed, counts summed.
    pub master_seeds: Vec<u64>,
    pub gd: GdConfigFile,
    #[serde(default = "default_true")]
    pub train_v: bool,
}

fn default_true() -> bool {
    true
}

fn default_teacher() -> String {
    "match".to_string()
}

fn default_v_policy() -> String {
    "rademacher".to_string()
}

pub fn parse_v_policy(s: &str) -> Result<OutputWeightPolicy, String> {
    match s {
        "rademacher" => Ok(OutputWeightPolicy::Rademacher),
        "balanced" => Ok(OutputWeightPolicy::BalancedSigns),
        other => Err(format!("bad v policy '{other}' (rademacher | balanced)")),
    }
}

pub fn parse_teacher(s: &str) -> Result<TeacherWidth, String> {
    match s {
        "match" => Ok(TeacherWidth::MatchStudent),
        "input-rank" => Ok(TeacherWidth::InputRank),
        other => other
            .parse::<usize>()
            .map(TeacherWidth::Fixed)
            .map_err(|_| format!("bad teacher width '{other}' (match | input-rank | number)")),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GdConfigFile {
    /// `"auto"`, `"adaptive"`, or a positive number.
    pub step: String,
    pub max_iters: u64,
    pub loss_tol: f64,
    pub grad_tol: f64,
    #[serde(default)]
    pub record_every: u64,
    /// Stall-abort window in iterations (0 disables).
    #[serde(default)]
    pub stall_window: u64,
}

impl GdConfigFile {
    pub fn parse(&self) -> Result<GdConfig, String> {
        let step = parse_step(&self.step)?;
        if !(self.loss_tol > 0.0 && self.grad_tol > 0.0) {
            return Err("loss_tol and grad_tol must be positive".into());
        }
        Ok(GdConfig {
            step,
            max_iters: self.max_iters,
            loss_tol: self.loss_tol,
            grad_tol: self.grad_tol,
            record_every: self.record_every,
            stall_window: self.stall_window,
        })
    }

    pub fn from_core(cfg: &GdConfig) -> Self {
        let step = match cfg.step {
            StepSize::Auto => "auto".to_string(),
            StepSize::AdaptiveCurvature => "adaptive".to_string(),
            StepSize::Fixed(a) => format!("{a}"),
        };
        GdConfigFile {
            step,
            max_iters: cfg.max_iters,
            loss_tol: cfg.loss_tol,
            grad_tol: cfg.grad_tol,
            record_every: cfg.record_every,
            stall_window: cfg.stall_window,
        }
    }
}

pub fn parse_step(s: &str) -> Result<StepSize, String> {
    match s {
        "auto" => Ok(StepSize::Auto),
        "adaptive" => Ok(StepSize::AdaptiveCurvature),
        other => {
            let x: f64 = other.parse().map_err(|_| format!("bad step size '{other}'"))?;
            if !(x > 0.0) {
                return Err("step size must be positive".into());
            }
            Ok(StepSize::Fixed(x))
        }
    }
}

impl SweepConfigFile {
    /// Core sweep configs, one per master seed.
    pub fn to_core(&self) -> Result<Vec<SweepConfig>, String> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(format!(
                "schema version {} unsupported (expected {SCHEMA_VERSION})",
                self.schema_version
            ));
        }
        let fixed = match (self.fixed_d, self.fixed_k) {
            (Some(d), None) => FixedDim::D(d),
            (None, Some(k)) => FixedDim::K(k),
            _ => return Err("exactly one of fixed_d / fixed_k must be set".into()),
        };
        if self.master_seeds.is_empty() {
            return Err("at least one master seed".into());
        }
        let activation = Activation::parse(&self.activation).map_err(|e| e.to_string())?;
        let teacher = parse_teacher(&self.teacher)?;
        let v_policy = parse_v_policy(&self.v_policy)?;
        let gd = self.gd.parse()?;
        Ok(self
            .master_seeds
            .iter()
            .map(|&seed| SweepConfig {
                n: self.n,
                fixed,
                sweep: self.sweep.clone(),
                planted: self.planted,
                teacher,
                v_policy,
                weights_per_point: self.weights_per_point,
                inits_per_weight: self.inits_per_weight,
                activation,
                master_seed: seed,
                gd,
                train_v: self.train_v,
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_config_round_trip() {
        let json = r#"{
            "schema_version": 1,
            "n": 100,
            "fixed_d": 20,
            "sweep": [1,2,3,4],
            "planted": true,
            "weights_per_point": 10,
            "inits_per_weight": 10,
            "activation": "quad",
            "master_seeds": [1, 2],
            "gd": {"step": "adaptive", "max_iters": 5000, "loss_tol": 1e-10, "grad_tol": 1e-8},
            "train_v": true
        }"#;
        let file: SweepConfigFile = serde_json::from_str(json).unwrap();
        let cores = file.to_core().unwrap();
        assert_eq!(cores.len(), 2);
        assert_eq!(cores[0].master_seed, 1);
        assert_eq!(cores[1].master_seed, 2);
        assert!(matches!(cores[0].fixed, FixedDim::D(20)));
        assert!(matches!(cores[0].gd.step, StepSize::AdaptiveCurvature));
        // Serialize back.
        let again = serde_json::to_string(&file).unwrap();
        let reparsed: SweepConfigFile = serde_json::from_str(&again).unwrap();
        assert_eq!(reparsed.to_core().unwrap().len(), 2);
    }

    #[test]
    fn config_rejects_bad_fields() {
        let both = r#"{
            "schema_version": 1, "n": 10, "fixed_d": 2, "fixed_k": 3,
            "sweep": [1], "planted": true, "weights_per_point": 1,
            "inits_per_weight": 1, "activation": "quad", "master_seeds": [1],
            "gd": {"step": "auto", "max_iters": 10, "loss_tol": 1e-10, "grad_tol": 1e-8}
        }"#;
        let file: SweepConfigFile = serde_json::from_str(both).unwrap();
        assert!(file.to_core().is_err());
        assert!(parse_step("-1").is_err());
        assert!(parse_step("0.01").is_ok());
    }
}
