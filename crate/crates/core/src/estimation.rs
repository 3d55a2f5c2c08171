//! Conditional quasi-maximum-likelihood for the local/stochastic volatility
//! model
//!
//! ```text
//! ℓ(θ, g) = -1/2 Σ_{k=1}^{N} [ ln v_{k-1}^2 + ln γ^2(S_{k-1}; θ) + ΔS_k^2 / (v_{k-1}^2 γ^2(S_{k-1}; θ)) ]
//! ```
//!
//! with `v` produced by the filter on `r_k = ΔS_k / γ(S_{k-1}; θ)`.
//!
//! The fit works in an unconstrained space: `σ` and `a0` on a log scale,
//! `α` through `tanh`, `λ` through the logistic map, and `(a1, b1)` through a
//! logistic persistence `a1 + b1 < 1` and a logistic share. Every iterate is
//! therefore a valid model. The starting volatility `v_0` follows the
//! [`InitRule`] and is not a free parameter.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optim::{minimize, BfgsOptions};
use crate::scalar::Scalar;
use crate::timeseries::PriceSeries;
use crate::volatility::{eval_gamma, filter_vol, InitRule, LocalVolSpec, ModelSpec, StochVolSpec};

/// Model parameters, in the fixed order used by gradients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    Sigma,
    Alpha,
    Beta,
    A0,
    A1,
    B1,
    Lambda,
}

impl Param {
    pub const ALL: [Param; 7] =
        [Param::Sigma, Param::Alpha, Param::Beta, Param::A0, Param::A1, Param::B1, Param::Lambda];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Param::Sigma => "sigma",
            Param::Alpha => "alpha",
            Param::Beta => "beta",
            Param::A0 => "a0",
            Param::A1 => "a1",
            Param::B1 => "b1",
            Param::Lambda => "lambda",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == s)
    }

    /// Whether the parameter exists in `model`.
    pub fn applies_to<T: Scalar>(self, model: &ModelSpec<T>) -> bool {
        match self {
            Param::Sigma => true,
            Param::Alpha | Param::Beta => matches!(model.localvol, LocalVolSpec::Displaced { .. }),
            Param::A0 | Param::A1 | Param::B1 => matches!(model.stochvol, StochVolSpec::Garch { .. }),
            Param::Lambda => matches!(model.stochvol, StochVolSpec::Ewma { .. }),
        }
    }

    pub fn get<T: Scalar>(self, model: &ModelSpec<T>) -> Option<T> {
        match (self, model.localvol, model.stochvol) {
            (Param::Sigma, lv, _) => Some(lv.sigma()),
            (Param::Alpha, LocalVolSpec::Displaced { alpha, .. }, _) => Some(alpha),
            (Param::Beta, LocalVolSpec::Displaced { beta, .. }, _) => Some(beta),
            (Param::A0, _, StochVolSpec::Garch { a0, .. }) => Some(a0),
            (Param::A1, _, StochVolSpec::Garch { a1, .. }) => Some(a1),
            (Param::B1, _, StochVolSpec::Garch { b1, .. }) => Some(b1),
            (Param::Lambda, _, StochVolSpec::Ewma { lambda }) => Some(lambda),
            _ => None,
        }
    }

    /// Copy of `model` with this parameter replaced; no-op if it does not apply.
    pub fn set<T: Scalar>(self, model: &ModelSpec<T>, value: T) -> ModelSpec<T> {
        let mut m = *model;
        match (self, &mut m.localvol, &mut m.stochvol) {
            (Param::Sigma, lv, _) => *lv = lv.with_sigma(value),
            (Param::Alpha, LocalVolSpec::Displaced { alpha, .. }, _) => *alpha = value,
            (Param::Beta, LocalVolSpec::Displaced { beta, .. }, _) => *beta = value,
            (Param::A0, _, StochVolSpec::Garch { a0, .. }) => *a0 = value,
            (Param::A1, _, StochVolSpec::Garch { a1, .. }) => *a1 = value,
            (Param::B1, _, StochVolSpec::Garch { b1, .. }) => *b1 = value,
            (Param::Lambda, _, StochVolSpec::Ewma { lambda }) => *lambda = value,
            _ => {}
        }
        m
    }
}

/// Selects which parameters the fit optimizes; the rest stay at the template.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ParamMask([bool; 7]);

impl ParamMask {
    pub fn none() -> Self {
        Self([false; 7])
    }

    pub fn of(params: &[Param]) -> Self {
        params.iter().fold(Self::none(), |m, p| m.with(*p))
    }

    pub fn with(mut self, p: Param) -> Self {
        self.0[p.index()] = true;
        self
    }

    pub fn contains(&self, p: Param) -> bool {
        self.0[p.index()]
    }

    pub fn params(&self) -> Vec<Param> {
        Param::ALL.into_iter().filter(|p| self.contains(*p)).collect()
    }

    /// Filter coefficients for GARCH/EWMA models, `σ` for purely local ones.
    pub fn default_for<T: Scalar>(model: &ModelSpec<T>) -> Self {
        match model.stochvol {
            StochVolSpec::Garch { .. } => Self::of(&[Param::A0, Param::A1, Param::B1]),
            StochVolSpec::Ewma { .. } => Self::of(&[Param::Lambda]),
            StochVolSpec::None => Self::of(&[Param::Sigma]),
        }
    }
}

/// Treatment of the first likelihood term, which depends on the initial `v_0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Conditioning {
    #[default]
    UseInitial,
    DropFirst,
}

impl Conditioning {
    fn skip(self) -> usize {
        match self {
            Conditioning::UseInitial => 0,
            Conditioning::DropFirst => 1,
        }
    }
}

fn step_gammas<T: Scalar>(series: &PriceSeries<T>, lv: &LocalVolSpec<T>) -> Result<Vec<T>> {
    let v = series.values();
    v[..v.len() - 1]
        .iter()
        .enumerate()
        .map(|(k, &x)| eval_gamma(lv, x).map_err(|_| Error::NonpositiveVolatility { x: x.as_f64(), index: Some(k) }))
        .collect()
}

/// Quasi-log-likelihood of `series` under `model`.
pub fn qmle_objective<T: Scalar>(
    series: &PriceSeries<T>,
    model: &ModelSpec<T>,
    init: InitRule<T>,
    conditioning: Conditioning,
) -> Result<T> {
    model.validate()?;
    let gammas = step_gammas(series, &model.localvol)?;
    let returns: Vec<T> = series.values().windows(2).zip(&gammas).map(|(w, g)| (w[1] - w[0]) / *g).collect();
    let path = filter_vol(&model.stochvol, &returns, init)?;
    let half = T::lit(0.5);
    let sum: T = returns
        .iter()
        .zip(&gammas)
        .zip(&path.values)
        .skip(conditioning.skip())
        .map(|((r, g), v)| {
            let h = *v * *v;
            h.ln() + (*g * *g).ln() + *r * *r / h
        })
        .sum();
    Ok(-half * sum)
}

/// Value and analytic gradient of [`qmle_objective`] with respect to every
/// parameter in [`Param::ALL`] order. Entries for parameters absent from the
/// model are zero.
///
/// Derivatives are propagated forward through the variance recursion.
pub fn qmle_gradient<T: Scalar>(
    series: &PriceSeries<T>,
    model: &ModelSpec<T>,
    init: InitRule<T>,
    conditioning: Conditioning,
) -> Result<(T, [T; 7])> {
    model.validate()?;
    let lv = model.localvol;
    let zero = T::zero();
    let two = T::lit(2.0);
    let n = series.len() - 1;
    let gammas = step_gammas(series, &lv)?;

    let mut r = Vec::with_capacity(n);
    let mut dr = Vec::with_capacity(n);
    let mut dlng = Vec::with_capacity(n);
    for (k, w) in series.values().windows(2).enumerate() {
        let g = gammas[k];
        let rk = (w[1] - w[0]) / g;
        let mut dg = [zero; 7];
        dg[..3].copy_from_slice(&lv.partials(w[0]));
        let dl: [T; 7] = dg.map(|d| d / g);
        r.push(rk);
        dr.push(dl.map(|d| -rk * d));
        dlng.push(dl);
    }

    // Starting variance and its derivatives.
    let (mut h, mut dh) = match model.stochvol {
        StochVolSpec::None => (T::one(), [zero; 7]),
        sv => {
            let h0 = init.initial_variance(&sv, &r)?;
            let mut d = [zero; 7];
            match init.resolve(&sv) {
                InitRule::Unconditional => {
                    if let StochVolSpec::Garch { a0, a1, b1 } = sv {
                        let gap = T::one() - a1 - b1;
                        d[Param::A0.index()] = T::one() / gap;
                        d[Param::A1.index()] = a0 / (gap * gap);
                        d[Param::B1.index()] = a0 / (gap * gap);
                    }
                }
                InitRule::SampleVariance { window } => {
                    let m = window.min(n);
                    let mf = T::from_usize_lossy(m);
                    for j in 0..m {
                        for p in 0..7 {
                            d[p] = d[p] + two * r[j] * dr[j][p] / mf;
                        }
                    }
                }
                InitRule::FixedVol { .. } | InitRule::Default => {}
            }
            (h0, d)
        }
    };

    let mut value = zero;
    let mut grad = [zero; 7];
    for j in 0..n {
        let (rj, drj) = (r[j], dr[j]);
        if j >= conditioning.skip() {
            value = value + h.ln() + two * gammas[j].ln() + rj * rj / h;
            for p in 0..7 {
                grad[p] = grad[p] + dh[p] / h + two * dlng[j][p] + (two * rj * drj[p] * h - rj * rj * dh[p]) / (h * h);
            }
        }
        let mut dnext = [zero; 7];
        let hnext = match model.stochvol {
            StochVolSpec::None => T::one(),
            StochVolSpec::Garch { a0, a1, b1 } => {
                for p in 0..7 {
                    dnext[p] = a1 * two * rj * drj[p] + b1 * dh[p];
                }
                dnext[Param::A0.index()] = dnext[Param::A0.index()] + T::one();
                dnext[Param::A1.index()] = dnext[Param::A1.index()] + rj * rj;
                dnext[Param::B1.index()] = dnext[Param::B1.index()] + h;
                a0 + a1 * rj * rj + b1 * h
            }
            StochVolSpec::Ewma { lambda } => {
                for p in 0..7 {
                    dnext[p] = (T::one() - lambda) * two * rj * drj[p] + lambda * dh[p];
                }
                dnext[Param::Lambda.index()] = dnext[Param::Lambda.index()] + h - rj * rj;
                (T::one() - lambda) * rj * rj + lambda * h
            }
        };
        h = hnext;
        dh = dnext;
    }
    let half = T::lit(0.5);
    Ok((-half * value, grad.map(|g| -half * g)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimOptions {
    pub max_iter: usize,
    pub xtol: f64,
    pub gtol: f64,
    /// Number of starting points, the first being the default start.
    pub n_starts: usize,
    /// Half-width of the uniform jitter applied in unconstrained coordinates.
    pub jitter: f64,
    pub seed: u64,
    /// Minimum series length accepted by the fit.
    pub min_len: usize,
    pub conditioning: Conditioning,
}

impl Default for OptimOptions {
    fn default() -> Self {
        Self {
            max_iter: 500,
            xtol: 1e-8,
            gtol: 1e-8,
            n_starts: 5,
            jitter: 0.5,
            seed: 0,
            min_len: 100,
            conditioning: Conditioning::UseInitial,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StartReport<T> {
    pub start: ModelSpec<T>,
    pub loglik: Option<T>,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QmleFit<T> {
    pub params: ModelSpec<T>,
    pub free: Vec<Param>,
    pub loglik: T,
    pub converged: bool,
    pub iterations: usize,
    /// `‖∇ℓ‖∞` in the unconstrained coordinates at the returned point.
    pub gradient_norm: T,
    pub starts: Vec<StartReport<T>>,
    pub message: Option<String>,
}

/// One unconstrained coordinate of the fit.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Coord {
    LogSigma,
    TanhAlpha,
    Beta,
    LogA0,
    LogitLambda,
    /// `a1 = (1 - b1)·logistic(u)` with `b1` fixed.
    A1Only,
    /// `b1 = (1 - a1)·logistic(u)` with `a1` fixed.
    B1Only,
    /// `a1 + b1 = logistic(u)`, paired with `Share`.
    Persistence,
    /// `a1 / (a1 + b1) = logistic(u)`, paired with `Persistence`.
    Share,
}

fn logistic<T: Scalar>(u: T) -> T {
    T::one() / (T::one() + (-u).exp())
}

fn logit<T: Scalar>(p: T) -> T {
    (p / (T::one() - p)).ln()
}

struct Layout<T> {
    coords: Vec<Coord>,
    template: ModelSpec<T>,
}

impl<T: Scalar> Layout<T> {
    fn new(template: ModelSpec<T>, mask: ParamMask) -> Result<Self> {
        for p in mask.params() {
            if !p.applies_to(&template) {
                return Err(Error::InvalidConfig(format!(
                    "parameter {} is not part of a {}/{} model",
                    p.name(),
                    template.localvol.kind_name(),
                    template.stochvol.kind_name()
                )));
            }
        }
        if mask.params().is_empty() {
            return Err(Error::InvalidConfig("no free parameters".into()));
        }
        let mut coords = Vec::new();
        if mask.contains(Param::Sigma) {
            coords.push(Coord::LogSigma);
        }
        if mask.contains(Param::Alpha) {
            coords.push(Coord::TanhAlpha);
        }
        if mask.contains(Param::Beta) {
            coords.push(Coord::Beta);
        }
        if mask.contains(Param::A0) {
            coords.push(Coord::LogA0);
        }
        match (mask.contains(Param::A1), mask.contains(Param::B1)) {
            (true, true) => coords.extend([Coord::Persistence, Coord::Share]),
            (true, false) => coords.push(Coord::A1Only),
            (false, true) => coords.push(Coord::B1Only),
            (false, false) => {}
        }
        if mask.contains(Param::Lambda) {
            coords.push(Coord::LogitLambda);
        }
        Ok(Self { coords, template })
    }

    fn get(&self, m: &ModelSpec<T>, p: Param) -> T {
        p.get(m).expect("parameter applies to the model")
    }

    fn encode(&self, m: &ModelSpec<T>) -> Result<Vec<T>> {
        m.validate()?;
        let (a1, b1) = (self.get_or_zero(m, Param::A1), self.get_or_zero(m, Param::B1));
        let u: Vec<T> = self
            .coords
            .iter()
            .map(|c| match c {
                Coord::LogSigma => self.get(m, Param::Sigma).ln(),
                Coord::TanhAlpha => self.get(m, Param::Alpha).atanh(),
                Coord::Beta => self.get(m, Param::Beta),
                Coord::LogA0 => self.get(m, Param::A0).ln(),
                Coord::LogitLambda => logit(self.get(m, Param::Lambda)),
                Coord::A1Only => logit(a1 / (T::one() - b1)),
                Coord::B1Only => logit(b1 / (T::one() - a1)),
                Coord::Persistence => logit(a1 + b1),
                Coord::Share => logit(a1 / (a1 + b1)),
            })
            .collect();
        if u.iter().all(|x| x.is_finite()) {
            Ok(u)
        } else {
            Err(Error::ConstraintViolation("free parameter on the boundary of its domain at the starting point".into()))
        }
    }

    fn get_or_zero(&self, m: &ModelSpec<T>, p: Param) -> T {
        p.get(m).unwrap_or_else(T::zero)
    }

    /// Model at `u` and, per coordinate, the derivative of every natural
    /// parameter with respect to it.
    fn decode(&self, u: &[T]) -> (ModelSpec<T>, Vec<[T; 7]>) {
        let zero = T::zero();
        let one = T::one();
        let mut m = self.template;
        let mut jac = vec![[zero; 7]; u.len()];
        let persistence = self.coords.iter().position(|c| *c == Coord::Persistence);
        let share = self.coords.iter().position(|c| *c == Coord::Share);
        for (i, c) in self.coords.iter().enumerate() {
            let x = u[i];
            match c {
                Coord::LogSigma => {
                    let s = x.exp();
                    m = Param::Sigma.set(&m, s);
                    jac[i][Param::Sigma.index()] = s;
                }
                Coord::TanhAlpha => {
                    let a = x.tanh();
                    m = Param::Alpha.set(&m, a);
                    jac[i][Param::Alpha.index()] = one - a * a;
                }
                Coord::Beta => {
                    m = Param::Beta.set(&m, x);
                    jac[i][Param::Beta.index()] = one;
                }
                Coord::LogA0 => {
                    let a0 = x.exp();
                    m = Param::A0.set(&m, a0);
                    jac[i][Param::A0.index()] = a0;
                }
                Coord::LogitLambda => {
                    let l = logistic(x);
                    m = Param::Lambda.set(&m, l);
                    jac[i][Param::Lambda.index()] = l * (one - l);
                }
                Coord::A1Only => {
                    let b1 = self.get(&self.template, Param::B1);
                    let l = logistic(x);
                    m = Param::A1.set(&m, (one - b1) * l);
                    jac[i][Param::A1.index()] = (one - b1) * l * (one - l);
                }
                Coord::B1Only => {
                    let a1 = self.get(&self.template, Param::A1);
                    let l = logistic(x);
                    m = Param::B1.set(&m, (one - a1) * l);
                    jac[i][Param::B1.index()] = (one - a1) * l * (one - l);
                }
                Coord::Persistence | Coord::Share => {}
            }
        }
        if let (Some(ip), Some(is)) = (persistence, share) {
            let p = logistic(u[ip]);
            let s = logistic(u[is]);
            let dp = p * (one - p);
            let ds = s * (one - s);
            m = Param::A1.set(&m, p * s);
            m = Param::B1.set(&m, p * (one - s));
            jac[ip][Param::A1.index()] = dp * s;
            jac[ip][Param::B1.index()] = dp * (one - s);
            jac[is][Param::A1.index()] = p * ds;
            jac[is][Param::B1.index()] = -p * ds;
        }
        (m, jac)
    }
}

fn sample_variance<T: Scalar>(x: &[T]) -> T {
    let n = T::from_usize_lossy(x.len());
    let m = x.iter().copied().sum::<T>() / n;
    x.iter().map(|v| (*v - m) * (*v - m)).sum::<T>() / n
}

/// Starting point: the template, with free GARCH coefficients moved to
/// `a0 = 0.1·var(r)`, `a1 = 0.05`, `b1 = 0.90` (kept inside `a1 + b1 < 1`).
fn default_start<T: Scalar>(series: &PriceSeries<T>, template: &ModelSpec<T>, mask: ParamMask) -> Result<ModelSpec<T>> {
    let mut m = *template;
    if let StochVolSpec::Garch { a1, b1, .. } = template.stochvol {
        if mask.contains(Param::A0) {
            let gammas = step_gammas(series, &template.localvol)?;
            let r: Vec<T> = series.values().windows(2).zip(&gammas).map(|(w, g)| (w[1] - w[0]) / *g).collect();
            let var = sample_variance(&r);
            if var > T::zero() {
                m = Param::A0.set(&m, T::lit(0.1) * var);
            }
        }
        match (mask.contains(Param::A1), mask.contains(Param::B1)) {
            (true, true) => {
                m = Param::A1.set(&m, T::lit(0.05));
                m = Param::B1.set(&m, T::lit(0.90));
            }
            (true, false) => {
                m = Param::A1.set(&m, T::lit(0.05).min(T::lit(0.5) * (T::one() - b1)));
            }
            (false, true) => {
                m = Param::B1.set(&m, T::lit(0.90).min(T::lit(0.9) * (T::one() - a1)));
            }
            (false, false) => {}
        }
    }
    Ok(m)
}

/// Maximizes the quasi-log-likelihood over the parameters selected by `free`,
/// starting from `template` (see [`OptimOptions`] for the multi-start policy).
pub fn fit_qmle<T: Scalar>(
    series: &PriceSeries<T>,
    template: &ModelSpec<T>,
    free: ParamMask,
    init: InitRule<T>,
    opts: &OptimOptions,
) -> Result<QmleFit<T>> {
    if series.len() < opts.min_len {
        return Err(Error::SeriesTooShort { needed: opts.min_len, got: series.len() });
    }
    template.validate()?;
    let layout = Layout::new(*template, free)?;
    let start = default_start(series, template, free)?;
    let u0 = layout.encode(&start)?;
    let cond = opts.conditioning;

    let flat = series.values().windows(2).all(|w| w[0] == w[1]);
    if flat {
        let loglik = qmle_objective(series, &start, init, cond).map_err(|e| numerical(&e, &start))?;
        return Ok(QmleFit {
            params: start,
            free: free.params(),
            loglik,
            converged: false,
            iterations: 0,
            gradient_norm: T::nan(),
            starts: vec![StartReport { start, loglik: Some(loglik), iterations: 0, converged: false }],
            message: Some("all price increments are zero; the likelihood is unbounded".into()),
        });
    }

    let objective = |u: &[T]| -> Option<(T, Vec<T>)> {
        let (m, jac) = layout.decode(u);
        let (val, g) = qmle_gradient(series, &m, init, cond).ok()?;
        let gu: Vec<T> = jac.iter().map(|col| col.iter().zip(&g).map(|(a, b)| *a * *b).sum::<T>()).collect();
        Some((-val, gu.into_iter().map(|x| -x).collect()))
    };

    match qmle_objective(series, &start, init, cond) {
        Ok(v) if v.is_finite() => {}
        Ok(_) => {
            return Err(numerical(
                &Error::NumericalFailure {
                    message: "non-finite likelihood at the starting point".into(),
                    params: vec![],
                },
                &start,
            ))
        }
        Err(
            e @ (Error::NonpositiveVolatility { .. }
            | Error::DenominatorTooSmall { .. }
            | Error::ConstraintViolation(_)),
        ) => return Err(e),
        Err(e) => return Err(numerical(&e, &start)),
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut starts_u = vec![u0.clone()];
    for _ in 1..opts.n_starts.max(1) {
        starts_u.push(u0.iter().map(|x| *x + T::lit(rng.random_range(-opts.jitter..=opts.jitter))).collect());
    }

    let bfgs = BfgsOptions { max_iter: opts.max_iter, xtol: opts.xtol, gtol: opts.gtol, ..BfgsOptions::default() };
    let mut reports = Vec::new();
    let mut best: Option<(T, Vec<T>, usize, bool)> = None;
    for su in &starts_u {
        let (start_model, _) = layout.decode(su);
        let run = minimize(&objective, su, &bfgs);
        match run {
            Some(res) => {
                let ll = -res.f;
                reports.push(StartReport {
                    start: start_model,
                    loglik: Some(ll),
                    iterations: res.iterations,
                    converged: res.converged,
                });
                if best.as_ref().is_none_or(|(b, ..)| ll > *b) {
                    best = Some((ll, res.x, res.iterations, res.converged));
                }
            }
            None => reports.push(StartReport { start: start_model, loglik: None, iterations: 0, converged: false }),
        }
    }

    let (_, u_best, iterations, converged) = best.ok_or_else(|| {
        numerical(
            &Error::NumericalFailure { message: "likelihood undefined at every starting point".into(), params: vec![] },
            &start,
        )
    })?;
    let (params, _) = layout.decode(&u_best);
    let loglik = qmle_objective(series, &params, init, cond).map_err(|e| numerical(&e, &params))?;
    if !loglik.is_finite() {
        return Err(numerical(
            &Error::NumericalFailure { message: "non-finite likelihood at the optimum".into(), params: vec![] },
            &params,
        ));
    }
    let (_, gu) = objective(&u_best).expect("objective defined at the optimum");
    let gradient_norm = gu.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    Ok(QmleFit {
        params,
        free: free.params(),
        loglik,
        converged,
        iterations,
        gradient_norm,
        starts: reports,
        message: None,
    })
}

fn numerical<T: Scalar>(e: &Error, at: &ModelSpec<T>) -> Error {
    let params = Param::ALL.into_iter().filter_map(|p| p.get(at)).map(|v| v.as_f64()).collect();
    Error::NumericalFailure { message: e.to_string(), params }
}
