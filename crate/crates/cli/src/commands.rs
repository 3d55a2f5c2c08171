use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use hsvar::innovations::write_volpath_csv;
use hsvar::risk::write_sorted_pnl_csv;
use hsvar::{
    diagnose, extract, fit_qmle, ingest_csv, simulate, simulate_stressed, var, Base, Conditioning, Error, ModelSpec,
    OptimOptions, PriceSeries, Result, ScenarioSet,
};
use serde_json::{json, Value};

use crate::args::Command;
use crate::config::{RunConfig, DEFAULT_OUT_ROOT};
use crate::report;

/// Everything a command needs once the configuration is resolved.
struct Run {
    command: &'static str,
    config: RunConfig,
    series: PriceSeries,
    model: ModelSpec,
    input_sha256: String,
    config_hash: String,
    out: PathBuf,
}

impl Run {
    fn prepare(cmd: &Command) -> Result<Self> {
        let mut config = RunConfig::from_command(cmd)?;
        let model = config.resolve_model(matches!(cmd, Command::Fit(_)))?;
        let path = config.input_path()?.to_path_buf();
        let bytes = fs::read(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let label = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let series = ingest_csv(bytes.as_slice(), &label)?;
        if let Command::Fit(_) = cmd {
            config.resolve_free(&model)?;
        }
        if let Some(w) = config.stressed {
            let (first, last) = (series.dates()[0], series.last_date());
            if w.from < first || w.to > last {
                return Err(Error::InvalidConfig(format!(
                    "stressed window {}..{} lies outside the series range {first}..{last}",
                    w.from, w.to
                )));
            }
        }
        let input_sha256 = report::sha256_hex(&bytes);
        let config_hash = {
            let hashed = RunConfig { out: None, ..config.clone() };
            let canon = json!({
                "command": cmd.name(),
                "config": report::to_value(&hashed)?,
                "input_sha256": input_sha256,
            });
            report::sha256_hex(canon.to_string().as_bytes())
        };
        let out = config.out.clone().unwrap_or_else(|| Path::new(DEFAULT_OUT_ROOT).join(&config_hash[..16]));
        config.out = Some(out.clone());
        fs::create_dir_all(&out).map_err(|e| Error::Io(format!("{}: {e}", out.display())))?;
        Ok(Self { command: cmd.name(), config, series, model, input_sha256, config_hash, out })
    }

    fn echo(&self) -> Result<Vec<(&'static str, Value)>> {
        Ok(vec![
            ("command", json!(self.command)),
            ("config", report::to_value(&self.config)?),
            ("config_hash", json!(self.config_hash)),
            ("input_sha256", json!(self.input_sha256)),
        ])
    }

    fn create(&self, name: &str) -> Result<(PathBuf, BufWriter<File>)> {
        let path = self.out.join(name);
        let file = File::create(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Ok((path, BufWriter::new(file)))
    }

    fn write_json(&self, name: &str, value: &Value) -> Result<PathBuf> {
        let (path, mut w) = self.create(name)?;
        w.write_all(report::render(value).as_bytes())?;
        w.flush()?;
        Ok(path)
    }

    fn write_with(&self, name: &str, f: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<PathBuf> {
        let (path, mut w) = self.create(name)?;
        f(&mut w)?;
        w.flush()?;
        Ok(path)
    }
}

/// Runs one subcommand and returns the files it wrote.
pub fn run(cmd: &Command) -> Result<Vec<PathBuf>> {
    let run = Run::prepare(cmd)?;
    match cmd {
        Command::Extract(_) => cmd_extract(&run),
        Command::Var(_) => cmd_var(&run),
        Command::Fit(_) => cmd_fit(&run),
        Command::Diagnose(_) => cmd_diagnose(&run),
    }
}

fn cmd_extract(run: &Run) -> Result<Vec<PathBuf>> {
    let (innov, path) = extract(&run.series, &run.model, run.config.init_rule()?)?;
    Ok(vec![
        run.write_with("innovations.csv", |w| innov.write_csv(w))?,
        run.write_with("volpath.csv", |w| write_volpath_csv(w, &run.series, &path))?,
    ])
}

fn cmd_var(run: &Run) -> Result<Vec<PathBuf>> {
    let cfg = &run.config;
    let confidence = cfg.confidence.expect("resolved");
    let base = cfg.base.unwrap_or_default();
    let scen: ScenarioSet = match cfg.stressed {
        Some(w) => {
            if base.v0.is_some() {
                return Err(Error::InvalidConfig("base v0 has no effect on stressed scenarios".into()));
            }
            let sub = run.series.window(w.from, w.to)?;
            let local = ModelSpec::local(run.model.localvol);
            let (innov, _) = extract(&sub, &local, run.config.init_rule()?)?;
            let mut scen = simulate_stressed(&innov, &sub, &run.model.localvol, base.s0.unwrap_or(run.series.last()))?;
            scen.model = Some(run.model);
            scen
        }
        None => {
            let (innov, path) = extract(&run.series, &run.model, run.config.init_rule()?)?;
            let mut b = Base::from_history(&run.series, &path);
            if let Some(s0) = base.s0 {
                b.s0 = s0;
            }
            if let Some(v0) = base.v0 {
                b.v0 = Some(v0);
            }
            simulate(&innov, &path, &run.series, b)?
        }
    };
    let rep = var(&scen, confidence)?;
    let mut files = vec![run.write_with("scenarios.csv", |w| scen.write_csv(w))?];
    if cfg.pnl_csv == Some(true) {
        files.push(run.write_with("pnl_sorted.csv", |w| write_sorted_pnl_csv(&scen, w))?);
    }
    let mut extra = run.echo()?;
    extra.push(("base", report::to_value(&scen.base)?));
    files.push(run.write_json("var_report.json", &report::envelope(&rep, extra)?)?);
    Ok(files)
}

fn cmd_fit(run: &Run) -> Result<Vec<PathBuf>> {
    let mut cfg = run.config.clone();
    let mask = cfg.resolve_free(&run.model)?;
    let opts = OptimOptions {
        seed: cfg.seed.unwrap_or(0),
        conditioning: if cfg.drop_first == Some(true) { Conditioning::DropFirst } else { Conditioning::UseInitial },
        ..OptimOptions::default()
    };
    let fit = fit_qmle(&run.series, &run.model, mask, cfg.init_rule()?, &opts)?;
    let value = report::envelope(&fit, run.echo()?)?;
    Ok(vec![run.write_json("fit_report.json", &value)?])
}

fn cmd_diagnose(run: &Run) -> Result<Vec<PathBuf>> {
    let cfg = &run.config;
    let (innov, _) = extract(&run.series, &run.model, cfg.init_rule()?)?;
    let rep = diagnose(&innov.values, cfg.lags.expect("resolved"), cfg.significance.expect("resolved"));
    let value = report::envelope(&rep, run.echo()?)?;
    Ok(vec![run.write_json("diagnostics.json", &value)?])
}
