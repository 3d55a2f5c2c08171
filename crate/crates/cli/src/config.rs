//! Run configuration: TOML file, flag overrides, and resolution into library types.

use std::fs;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use hsvar::{Error, InitRule, LocalVolSpec, ModelSpec, Param, ParamMask, Result, StochVolSpec};
use serde::{Deserialize, Serialize};

use crate::args::{Command, CommonArgs};

pub const DEFAULT_CONFIDENCE: f64 = 0.99;
pub const DEFAULT_OUT_ROOT: &str = "hsvar-out";

/// Model parameters in flat form, as given by `--model` and the parameter flags.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelBlock {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub localvol: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stochvol: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b1: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Window {
    pub from: NaiveDate,
    pub to: NaiveDate,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseBlock {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v0: Option<f64>,
}

/// Both the on-disk config format and, once resolved, the echo written into
/// every report. Keys that do not apply to a command are dropped on resolution.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[serde(default)]
    pub model: ModelBlock,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub init: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub confidence: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stressed: Option<Window>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base: Option<BaseBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pnl_csv: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub free: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub drop_first: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lags: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub significance: Option<f64>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))
    }

    fn apply_common(&mut self, a: &CommonArgs) {
        set(&mut self.input, a.input.clone());
        set(&mut self.init, a.init.clone());
        set(&mut self.seed, a.seed);
        set(&mut self.out, a.out.clone());
        if let Some(m) = &a.model {
            let (lv, sv) = match m.split_once('+') {
                Some((lv, sv)) => (lv, Some(sv)),
                None => (m.as_str(), None),
            };
            self.model.localvol = Some(lv.trim().to_string());
            self.model.stochvol = Some(sv.unwrap_or("none").trim().to_string());
        }
        let mb = &mut self.model;
        set(&mut mb.sigma, a.sigma);
        set(&mut mb.alpha, a.alpha);
        set(&mut mb.beta, a.beta);
        set(&mut mb.lambda, a.lambda);
        set(&mut mb.a0, a.a0);
        set(&mut mb.a1, a.a1);
        set(&mut mb.b1, a.b1);
    }

    /// Merges the optional config file with the command's flags and fills
    /// every default, so the result fully determines the run.
    pub fn from_command(cmd: &Command) -> Result<Self> {
        let common = match cmd {
            Command::Extract(a) => &a.common,
            Command::Var(a) => &a.common,
            Command::Fit(a) => &a.common,
            Command::Diagnose(a) => &a.common,
        };
        let file = match &common.config {
            Some(p) => Self::load(p)?,
            None => Self::default(),
        };
        let mut cfg = Self {
            input: file.input,
            model: file.model,
            init: file.init,
            seed: file.seed,
            out: file.out,
            ..Self::default()
        };
        cfg.apply_common(common);
        cfg.init = Some(canonical_init(&parse_init(cfg.init.as_deref().unwrap_or("default"))?));
        cfg.seed.get_or_insert(0);
        match cmd {
            Command::Extract(_) => {}
            Command::Var(a) => {
                cfg.confidence = a.confidence.or(file.confidence).or(Some(DEFAULT_CONFIDENCE));
                let mut window = file.stressed;
                match (a.stressed_from, a.stressed_to) {
                    (Some(from), Some(to)) => window = Some(Window { from, to }),
                    (None, None) => {}
                    _ => {
                        return Err(Error::InvalidConfig(
                            "--stressed-from and --stressed-to must be given together".into(),
                        ))
                    }
                }
                cfg.stressed = window;
                let mut base = file.base.unwrap_or_default();
                set(&mut base.s0, a.base_s0);
                set(&mut base.v0, a.base_v0);
                cfg.base = (base != BaseBlock::default()).then_some(base);
                cfg.pnl_csv = Some(a.pnl_csv || file.pnl_csv.unwrap_or(false));
            }
            Command::Fit(a) => {
                cfg.free = match &a.free {
                    Some(list) => Some(list.split(',').map(|s| s.trim().to_string()).collect()),
                    None => file.free,
                };
                cfg.drop_first = Some(a.drop_first || file.drop_first.unwrap_or(false));
            }
            Command::Diagnose(a) => {
                cfg.lags = a.lags.or(file.lags).or(Some(hsvar::diagnostics::DEFAULT_LAGS));
                cfg.significance =
                    a.significance.or(file.significance).or(Some(hsvar::diagnostics::DEFAULT_SIGNIFICANCE));
            }
        }
        cfg.check_ranges()?;
        Ok(cfg)
    }

    fn check_ranges(&self) -> Result<()> {
        if let Some(c) = self.confidence {
            if !(c > 0.5 && c < 1.0) {
                return Err(Error::InvalidConfig(format!("confidence must lie in (0.5, 1), got {c}")));
            }
        }
        if let Some(w) = self.stressed {
            if w.from > w.to {
                return Err(Error::InvalidConfig(format!(
                    "stressed window starts after it ends: {} > {}",
                    w.from, w.to
                )));
            }
        }
        if let Some(s) = self.significance {
            if !(s > 0.0 && s < 1.0) {
                return Err(Error::InvalidConfig(format!("significance must lie in (0, 1), got {s}")));
            }
        }
        if self.lags == Some(0) {
            return Err(Error::InvalidConfig("lags must be at least 1".into()));
        }
        Ok(())
    }

    pub fn input_path(&self) -> Result<&Path> {
        self.input.as_deref().ok_or_else(|| Error::InvalidConfig("no input file; pass --input or set `input`".into()))
    }

    pub fn init_rule(&self) -> Result<InitRule<f64>> {
        parse_init(self.init.as_deref().unwrap_or("default"))
    }

    /// Builds the model. For a fit, missing filter parameters get starting
    /// values; otherwise every parameter the model uses must be given.
    /// The block is rewritten to hold exactly the values used.
    pub fn resolve_model(&mut self, for_fit: bool) -> Result<ModelSpec<f64>> {
        let mb = &self.model;
        let need = |v: Option<f64>, name: &str, start: f64| -> Result<f64> {
            match v {
                Some(x) => Ok(x),
                None if for_fit => Ok(start),
                None => Err(Error::InvalidConfig(format!("model parameter `{name}` is required"))),
            }
        };
        let lv_kind = mb
            .localvol
            .clone()
            .ok_or_else(|| Error::InvalidConfig("no model; pass --model or set `model.localvol`".into()))?;
        let sv_kind = mb.stochvol.clone().unwrap_or_else(|| "none".into());
        let sigma = mb.sigma.unwrap_or(1.0);
        let localvol = match lv_kind.as_str() {
            "constant" => LocalVolSpec::constant(sigma),
            "proportional" => LocalVolSpec::proportional(sigma),
            "displaced" => {
                let beta = mb.beta.ok_or_else(|| Error::InvalidConfig("model parameter `beta` is required".into()))?;
                LocalVolSpec::displaced(need(mb.alpha, "alpha", 0.5)?, beta, sigma)
            }
            other => {
                return Err(Error::InvalidConfig(format!(
                    "unknown local volatility `{other}` (expected constant, proportional or displaced)"
                )))
            }
        };
        let stochvol = match sv_kind.as_str() {
            "none" => StochVolSpec::None,
            "ewma" => StochVolSpec::ewma(need(mb.lambda, "lambda", 0.94)?),
            "garch" => {
                StochVolSpec::garch(need(mb.a0, "a0", 1e-6)?, need(mb.a1, "a1", 0.05)?, need(mb.b1, "b1", 0.90)?)
            }
            other => {
                return Err(Error::InvalidConfig(format!(
                    "unknown stochastic volatility `{other}` (expected none, ewma or garch)"
                )))
            }
        };
        let model = ModelSpec::new(localvol, stochvol);
        for p in Param::ALL {
            let given = match p {
                Param::Sigma => mb.sigma,
                Param::Alpha => mb.alpha,
                Param::Beta => mb.beta,
                Param::Lambda => mb.lambda,
                Param::A0 => mb.a0,
                Param::A1 => mb.a1,
                Param::B1 => mb.b1,
            };
            if given.is_some() && !p.applies_to(&model) {
                return Err(Error::InvalidConfig(format!(
                    "parameter `{}` does not apply to {}+{}",
                    p.name(),
                    lv_kind,
                    sv_kind
                )));
            }
        }
        model.validate()?;
        self.model = ModelBlock { localvol: Some(lv_kind), stochvol: Some(sv_kind), ..ModelBlock::default() };
        for p in Param::ALL.into_iter().filter(|p| p.applies_to(&model)) {
            let v = p.get(&model);
            let slot = match p {
                Param::Sigma => &mut self.model.sigma,
                Param::Alpha => &mut self.model.alpha,
                Param::Beta => &mut self.model.beta,
                Param::Lambda => &mut self.model.lambda,
                Param::A0 => &mut self.model.a0,
                Param::A1 => &mut self.model.a1,
                Param::B1 => &mut self.model.b1,
            };
            *slot = v;
        }
        Ok(model)
    }

    /// Free-parameter mask for a fit; fills the default list when none is set.
    pub fn resolve_free(&mut self, model: &ModelSpec<f64>) -> Result<ParamMask> {
        let mask = match &self.free {
            Some(names) => {
                let mut mask = ParamMask::none();
                for n in names {
                    let p = Param::parse(n).ok_or_else(|| Error::InvalidConfig(format!("unknown parameter `{n}`")))?;
                    mask = mask.with(p);
                }
                mask
            }
            None => ParamMask::default_for(model),
        };
        self.free = Some(mask.params().iter().map(|p| p.name().to_string()).collect());
        Ok(mask)
    }
}

fn set<T>(slot: &mut Option<T>, v: Option<T>) {
    if v.is_some() {
        *slot = v;
    }
}

pub fn parse_init(s: &str) -> Result<InitRule<f64>> {
    let bad = || {
        Error::InvalidConfig(format!(
            "bad init rule `{s}` (expected default, unconditional, sample-variance[:N] or fixed:V0)"
        ))
    };
    let (head, arg) = match s.split_once(':') {
        Some((h, a)) => (h.trim(), Some(a.trim())),
        None => (s.trim(), None),
    };
    match (head, arg) {
        ("default", None) => Ok(InitRule::Default),
        ("unconditional", None) => Ok(InitRule::Unconditional),
        ("sample-variance", None) => Ok(InitRule::SampleVariance { window: hsvar::volatility::DEFAULT_INIT_WINDOW }),
        ("sample-variance", Some(n)) => match n.parse() {
            Ok(window) if window > 0 => Ok(InitRule::SampleVariance { window }),
            _ => Err(bad()),
        },
        ("fixed", Some(v)) => match v.parse::<f64>() {
            Ok(v0) if v0 > 0.0 && v0.is_finite() => Ok(InitRule::FixedVol { v0 }),
            _ => Err(bad()),
        },
        _ => Err(bad()),
    }
}

pub fn canonical_init(rule: &InitRule<f64>) -> String {
    match rule {
        InitRule::Default => "default".into(),
        InitRule::Unconditional => "unconditional".into(),
        InitRule::SampleVariance { window } => format!("sample-variance:{window}"),
        InitRule::FixedVol { v0 } => format!("fixed:{v0:?}"),
    }
}
