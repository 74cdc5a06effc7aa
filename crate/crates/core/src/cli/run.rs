//! Command execution.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::ValueEnum;
use serde::Serialize;

use super::args::{Cli, Command, ModelArgs, ModelKind};
use super::config::ConfigFile;
use crate::classical::{energy_window, trapping_times, EnergyWindow, ModelSystem};
use crate::error::{Error, Result};
use crate::phasespace::{state_hash, wigner_angular, wigner_cartesian, GridMetadata, WignerGrid};
use crate::protocol::{
    harmonic_reference_tau, linear_grid, max_score, scan_tau_cached, scenario_compare,
    write_scan_csv, QuantumState, ReferenceState, StateFile, WindowPolicy,
};
use crate::simulate::{
    marginal_density, position_grid, run_protocol_with, write_rounds_csv, McOptions,
};
use crate::spectra::levels::first_index;
use crate::spectra::{SliceCache, SpectrumSlice};

/// Environment variable naming the slice cache directory.
pub const CACHE_ENV: &str = "DYNCERT_CACHE_DIR";
const DEFAULT_CACHE_DIR: &str = ".dyncert-cache";

/// Shared settings of one invocation.
pub struct Context {
    pub config: ConfigFile,
    pub cache: Option<SliceCache>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
}

impl Context {
    pub fn from_cli(cli: &Cli) -> Result<Self> {
        let config = match &cli.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let cache = if config.switch(cli.cache, "cache")? {
            let dir = config
                .pick(cli.cache_dir.clone(), "cache-dir")?
                .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR));
            Some(SliceCache::new(dir))
        } else {
            None
        };
        let out = config.pick(cli.out.clone(), "out")?;
        let workers = config
            .pick(cli.workers, "workers")?
            .map(|w| w.max(1) as usize);
        Ok(Self {
            config,
            cache,
            out,
            workers,
        })
    }

    fn slice(
        &self,
        model: ModelSystem,
        window: EnergyWindow,
        max_index: Option<usize>,
    ) -> Result<Arc<SpectrumSlice>> {
        let s = match &self.cache {
            Some(c) => c.get_or_build(model, window, max_index)?,
            None => SpectrumSlice::build_capped(model, window, max_index)?,
        };
        Ok(Arc::new(s))
    }

    /// Levels from the bottom of the spectrum up to index n_max.
    fn lowest(&self, model: ModelSystem, n_max: usize) -> Result<Arc<SpectrumSlice>> {
        let all = EnergyWindow::new(f64::NEG_INFINITY, f64::INFINITY)?;
        self.slice(model, all, Some(n_max))
    }

    /// `--nmax` truncation if given, else the classical window at τ.
    fn score_slice(
        &self,
        model: ModelSystem,
        tau: f64,
        nmax: Option<usize>,
    ) -> Result<Arc<SpectrumSlice>> {
        match nmax {
            Some(n) => self.lowest(model, n),
            None => self.slice(model, energy_window(&model, tau)?, None),
        }
    }

    fn model(&self, args: &ModelArgs) -> Result<ModelSystem> {
        let kind = match args.model {
            Some(k) => k,
            None => match self.config.raw("model") {
                Some(s) => ModelKind::from_str(s, true)
                    .map_err(|_| Error::InvalidParameter(format!("unknown model {s:?}")))?,
                None => ModelKind::Harmonic,
            },
        };
        let alpha = self.config.pick(args.alpha, "alpha")?;
        let lambda = self.config.pick(args.lambda, "lambda")?;
        let need = |v: Option<f64>, what: &str| {
            v.ok_or_else(|| {
                Error::InvalidParameter(format!("model {kind:?} requires --{what}").to_lowercase())
            })
        };
        let model = match kind {
            ModelKind::Harmonic => ModelSystem::Harmonic,
            ModelKind::Kerr => ModelSystem::Kerr {
                alpha: need(alpha, "alpha")?,
            },
            ModelKind::Pendulum => ModelSystem::Pendulum {
                alpha: need(alpha, "alpha")?,
            },
            ModelKind::Morse => ModelSystem::Morse {
                lambda: need(lambda, "lambda")?,
            },
            ModelKind::Well => ModelSystem::InfiniteWell,
        };
        model.validate()?;
        Ok(model)
    }

    fn emit_bytes(&self, bytes: &[u8]) -> Result<()> {
        match &self.out {
            Some(p) => {
                if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                    fs::create_dir_all(dir)?;
                }
                fs::write(p, bytes)?;
            }
            None => {
                use std::io::Write;
                std::io::stdout().write_all(bytes)?;
            }
        }
        Ok(())
    }

    fn emit_json<T: Serialize>(&self, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.emit_bytes(text.as_bytes())
    }

    /// Output directory for multi-file commands.
    fn out_dir(&self, default: &str) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from(default))
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

pub fn execute(cli: &Cli) -> Result<()> {
    let ctx = Context::from_cli(cli)?;
    if let Some(w) = ctx.workers {
        // Fails only if the global pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global();
    }
    match &cli.command {
        Command::Bounds {
            model,
            tau,
            points,
            e_max,
        } => cmd_bounds(&ctx, model, *tau, *points, *e_max),
        Command::Score {
            model,
            tau,
            nmax,
            scan,
            tau_min,
            tau_max,
            points,
            scenario,
            nhat,
        } => {
            let m = ctx.model(model)?;
            let nmax = ctx.config.pick(*nmax, "nmax")?;
            if *scenario || ctx.config.switch(false, "scenario")? {
                let nhat = ctx.config.pick(*nhat, "nhat")?.unwrap_or(6);
                ctx.emit_json(&scenario_compare(&m, nhat)?)
            } else if *scan || ctx.config.switch(false, "scan")? {
                cmd_scan(&ctx, m, *tau, nmax, *tau_min, *tau_max, *points)
            } else {
                let tau = ctx.config.pick(*tau, "tau")?.unwrap_or(1.0);
                let slice = ctx.score_slice(m, tau, nmax)?;
                ctx.emit_json(&max_score(slice, tau)?.record())
            }
        }
        Command::Simulate {
            model,
            state,
            tau,
            nmax,
            rounds,
            seed,
            audit,
            audit_rounds,
        } => cmd_simulate(
            &ctx,
            model,
            state.clone(),
            *tau,
            *nmax,
            *rounds,
            *seed,
            audit.clone(),
            *audit_rounds,
        ),
        Command::Wigner {
            model,
            state,
            tau,
            nmax,
            angular,
            q_points,
            p_points,
            p_max,
            m_max,
        } => {
            let m = ctx.model(model)?;
            let tau = ctx.config.pick(*tau, "tau")?.unwrap_or(1.0);
            let nmax = ctx.config.pick(*nmax, "nmax")?;
            let spec = ctx
                .config
                .pick(state.clone(), "state")?
                .unwrap_or_else(|| "psi6".into());
            let angular = ctx.config.switch(*angular, "angular")?;
            let st = resolve_state(&ctx, m, &spec, tau, nmax)?;
            let opts = WignerOptions {
                q_points: ctx.config.pick(*q_points, "q-points")?.unwrap_or(121),
                p_points: ctx.config.pick(*p_points, "p-points")?.unwrap_or(121),
                p_max: ctx.config.pick(*p_max, "p-max")?,
                m_max: ctx.config.pick(*m_max, "m-max")?,
            };
            let dir = ctx.out_dir("wigner-out");
            let summary = write_wigner_bundle(&dir, &st, tau, angular, &opts)?;
            print_json(&summary)
        }
        Command::MakeFigures { nmax } => {
            let nmax = ctx.config.pick(*nmax, "nmax")?.unwrap_or(200);
            let dir = ctx.out_dir("figures");
            let files = make_figures(&ctx, &dir, nmax)?;
            print_json(&serde_json::json!({ "directory": dir, "files": files }))
        }
    }
}

#[derive(Serialize)]
struct BoundsSample {
    energy: f64,
    #[serde(with = "crate::serde_ext")]
    dt_plus: f64,
    #[serde(with = "crate::serde_ext")]
    dt_minus: f64,
}

#[derive(Serialize)]
struct BoundsReport {
    model: ModelSystem,
    tau: f64,
    window: EnergyWindow,
    #[serde(with = "crate::serde_ext")]
    max_dt_plus: f64,
    #[serde(with = "crate::serde_ext")]
    min_dt_minus: f64,
    samples: Vec<BoundsSample>,
}

fn cmd_bounds(
    ctx: &Context,
    args: &ModelArgs,
    tau: Option<f64>,
    points: Option<usize>,
    e_max: Option<f64>,
) -> Result<()> {
    let model = ctx.model(args)?;
    let tau = ctx.config.pick(tau, "tau")?.unwrap_or(1.0);
    let points = ctx.config.pick(points, "points")?.unwrap_or(101).max(2);
    let window = energy_window(&model, tau)?;
    let top = if window.is_bounded() {
        window.e_max
    } else {
        ctx.config.pick(e_max, "e-max")?.unwrap_or(20.0)
    };
    if !(top > window.e_min) {
        return Err(Error::InvalidParameter(format!(
            "energy grid top {top} is below {}",
            window.e_min
        )));
    }
    let samples = linear_grid(window.e_min, top, points - 1)
        .into_iter()
        .map(|e| {
            let t = trapping_times(&model, e)?;
            Ok(BoundsSample {
                energy: e,
                dt_plus: t.dt_plus.value(),
                dt_minus: t.dt_minus.value(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_dt_plus = samples
        .iter()
        .map(|s| s.dt_plus)
        .fold(f64::NEG_INFINITY, f64::max);
    let min_dt_minus = samples
        .iter()
        .map(|s| s.dt_minus)
        .fold(f64::INFINITY, f64::min);
    ctx.emit_json(&BoundsReport {
        model,
        tau,
        window,
        max_dt_plus,
        min_dt_minus,
        samples,
    })
}

fn cmd_scan(
    ctx: &Context,
    model: ModelSystem,
    tau: Option<f64>,
    nmax: Option<usize>,
    tau_min: Option<f64>,
    tau_max: Option<f64>,
    points: Option<usize>,
) -> Result<()> {
    let (lo, hi) = model.tau_range();
    // Open lower end for the well: start one grid step above zero.
    let lo = if lo > 0.0 { lo } else { 1.0 / 30.0 };
    let lo = ctx
        .config
        .pick(tau_min, "tau-min")?
        .or(ctx.config.pick(tau, "tau")?)
        .unwrap_or(lo);
    let hi = ctx
        .config
        .pick(tau_max, "tau-max")?
        .unwrap_or(if hi.is_finite() { hi } else { 1.0 });
    if !(hi >= lo) {
        return Err(Error::InvalidParameter(format!(
            "empty scan range [{lo}, {hi}]"
        )));
    }
    let points = ctx.config.pick(points, "points")?.unwrap_or(30);
    let grid = linear_grid(lo, hi, points);
    let policy = WindowPolicy::FromTau { max_index: nmax };
    let pts = scan_tau_cached(&model, &grid, &policy, ctx.cache.as_ref());
    let mut buf = Vec::new();
    write_scan_csv(&mut buf, &pts)?;
    ctx.emit_bytes(&buf)
}

/// psi6 | psi4 | optimal | file:PATH on the model's levels.
pub fn resolve_state(
    ctx: &Context,
    model: ModelSystem,
    spec: &str,
    tau: f64,
    nmax: Option<usize>,
) -> Result<QuantumState> {
    if let Some(path) = spec.strip_prefix("file:") {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("cannot read state {path}: {e}")))?;
        let file: StateFile = serde_json::from_str(&text)?;
        let top = file.max_index().max(nmax.unwrap_or(0));
        return file.into_state(ctx.lowest(model, top)?);
    }
    if spec == "optimal" {
        return Ok(max_score(ctx.score_slice(model, tau, nmax)?, tau)?.state);
    }
    let kind: ReferenceState = spec.parse()?;
    let top = nmax.unwrap_or(first_index(&model) + kind.max_level());
    crate::protocol::reference_state(kind, ctx.lowest(model, top)?)
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    ctx: &Context,
    args: &ModelArgs,
    state: Option<String>,
    tau: Option<f64>,
    nmax: Option<usize>,
    rounds: Option<u64>,
    seed: Option<u64>,
    audit: Option<PathBuf>,
    audit_rounds: Option<u64>,
) -> Result<()> {
    let model = ctx.model(args)?;
    let tau = ctx.config.pick(tau, "tau")?.unwrap_or(1.0);
    let nmax = ctx.config.pick(nmax, "nmax")?;
    let spec = ctx
        .config
        .pick(state, "state")?
        .unwrap_or_else(|| "psi6".into());
    let rounds = ctx.config.pick(rounds, "rounds")?.unwrap_or(100_000);
    if rounds == 0 {
        return Err(Error::InvalidParameter("rounds must be positive".into()));
    }
    let seed = ctx.config.pick(seed, "seed")?.unwrap_or(0);
    let st = resolve_state(ctx, model, &spec, tau, nmax)?;
    let est = run_protocol_with(
        &st,
        tau,
        rounds,
        seed,
        McOptions {
            workers: ctx.workers,
        },
    )?;
    if let Some(path) = ctx.config.pick(audit, "audit")? {
        let n = ctx
            .config
            .pick(audit_rounds, "audit-rounds")?
            .unwrap_or(1000)
            .min(rounds);
        write_rounds_csv(fs::File::create(&path)?, &st, tau, n, seed)?;
    }
    ctx.emit_json(&est)
}

pub struct WignerOptions {
    pub q_points: usize,
    pub p_points: usize,
    pub p_max: Option<f64>,
    pub m_max: Option<i64>,
}

impl Default for WignerOptions {
    fn default() -> Self {
        Self {
            q_points: 121,
            p_points: 121,
            p_max: None,
            m_max: None,
        }
    }
}

#[derive(Serialize)]
pub struct WignerSummary {
    pub files: Vec<PathBuf>,
    pub min_value: f64,
    pub integral: f64,
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<PathBuf> {
    fs::write(path, bytes)?;
    Ok(path.to_path_buf())
}

/// wigner.csv, wigner.json and marginals.csv (positions × probing times).
pub fn write_wigner_bundle(
    dir: &Path,
    state: &QuantumState,
    tau: f64,
    angular: bool,
    opts: &WignerOptions,
) -> Result<WignerSummary> {
    let slice = state.slice();
    let model = *slice.model();
    if model.is_angular() && !angular {
        return Err(Error::Domain(format!("{model} needs --angular")));
    }
    if angular && !model.is_angular() {
        return Err(Error::ModelMismatch(format!(
            "--angular applies to the pendulum, not {model}"
        )));
    }
    let e_top = *slice.energies().last().expect("non-empty slice");
    let (grid, q_axis): (WignerGrid, Vec<f64>) = if angular {
        let phi = linear_grid(
            -std::f64::consts::PI,
            std::f64::consts::PI,
            opts.q_points.max(2) - 1,
        );
        let (e_floor, _) = model.energy_range();
        let alpha = model.alpha().unwrap_or(-1.0).abs();
        let m_max = opts
            .m_max
            .unwrap_or(((e_top - e_floor) / (4.0 * alpha)).sqrt().ceil() as i64 + 6);
        (wigner_angular(state, &phi, (-m_max, m_max))?, phi)
    } else {
        let support = position_grid(state, tau)?;
        let (lo, hi) = (support[0], support[support.len() - 1]);
        let (lo, hi) = match model {
            ModelSystem::Harmonic | ModelSystem::Kerr { .. } => {
                let r = (2.0 * (slice.indices().last().copied().unwrap_or(0) as f64 + 0.5)).sqrt()
                    + 2.5;
                (lo.max(-r), hi.min(r))
            }
            ModelSystem::Morse { .. } => (lo.max(-4.0), hi),
            _ => (lo, hi),
        };
        let q = linear_grid(lo, hi, opts.q_points.max(2) - 1);
        let mu = model.reduced_mass();
        let kinetic = match model {
            ModelSystem::Kerr { .. } => slice.indices().last().copied().unwrap_or(0) as f64 + 0.5,
            _ => e_top,
        };
        let p_max = opts
            .p_max
            .unwrap_or((2.0 * mu * kinetic.max(0.5)).sqrt() + 3.0);
        let p = linear_grid(-p_max, p_max, opts.p_points.max(2) - 1);
        (wigner_cartesian(state, &q, &p)?, q)
    };
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    let mut buf = Vec::new();
    grid.write_csv(&mut buf)?;
    files.push(write_file(&dir.join("wigner.csv"), &buf)?);
    let meta = GridMetadata {
        model,
        alpha: model.alpha(),
        tau: Some(tau),
        time: 0.0,
        kind: if angular {
            "angular".into()
        } else {
            "cartesian".into()
        },
        state_hash: state_hash(state),
    };
    files.push(write_file(
        &dir.join("wigner.json"),
        serde_json::to_string_pretty(&meta)?.as_bytes(),
    )?);
    let dens = (0..3)
        .map(|k| marginal_density(state, k, tau, &q_axis))
        .collect::<Result<Vec<_>>>()?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["q", "t0", "t1", "t2"])
        .map_err(|e| Error::Io(e.to_string()))?;
    for (i, q) in q_axis.iter().enumerate() {
        let row = [
            q.to_string(),
            dens[0].values()[i].to_string(),
            dens[1].values()[i].to_string(),
            dens[2].values()[i].to_string(),
        ];
        w.write_record(&row).map_err(|e| Error::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    files.push(write_file(&dir.join("marginals.csv"), &bytes)?);
    Ok(WignerSummary {
        files,
        min_value: grid.min(),
        integral: grid.integral(angular),
    })
}

fn write_rows<S: Serialize>(path: &Path, rows: &[S]) -> Result<PathBuf> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    write_file(path, &bytes)
}

#[derive(Serialize)]
struct ParamRow {
    parameter: f64,
    p3_max: Option<f64>,
    levels: Option<usize>,
    error: Option<String>,
}

#[derive(Serialize)]
struct ScenarioRow {
    alpha: f64,
    scenario: String,
    score: f64,
    tau: f64,
}

fn param_sweep(
    ctx: &Context,
    params: &[f64],
    tau: f64,
    cap: Option<usize>,
    make: impl Fn(f64) -> ModelSystem,
) -> Vec<ParamRow> {
    params
        .iter()
        .map(|&a| {
            let pt = &scan_tau_cached(
                &make(a),
                &[tau],
                &WindowPolicy::FromTau { max_index: cap },
                ctx.cache.as_ref(),
            )[0];
            ParamRow {
                parameter: a,
                p3_max: pt.p3_max,
                levels: pt.levels,
                error: pt.error.as_ref().map(|e| e.kind.clone()),
            }
        })
        .collect()
}

/// Curve and grid data for every figure, written under `dir`.
pub fn make_figures(ctx: &Context, dir: &Path, nmax: usize) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();

    // Maximum score against τ for the harmonic oscillator at fixed truncation.
    let harmonic = ctx.lowest(ModelSystem::Harmonic, nmax)?;
    let pts = scan_tau_cached(
        &ModelSystem::Harmonic,
        &linear_grid(0.75, 1.5, 60),
        &WindowPolicy::Fixed(harmonic),
        None,
    );
    let mut buf = Vec::new();
    write_scan_csv(&mut buf, &pts)?;
    files.push(write_file(&dir.join("harmonic_tau.csv"), &buf)?);

    // Anharmonicity curves at τ = 1 with windows from the classical bound.
    let kerr = param_sweep(ctx, &linear_grid(-0.05, 0.05, 40), 1.0, Some(nmax), |a| {
        ModelSystem::Kerr { alpha: a }
    });
    files.push(write_rows(&dir.join("kerr_alpha.csv"), &kerr)?);
    let pend = param_sweep(ctx, &linear_grid(-0.12, -0.005, 23), 1.0, None, |a| {
        ModelSystem::Pendulum { alpha: a }
    });
    files.push(write_rows(&dir.join("pendulum_alpha.csv"), &pend)?);
    let morse = param_sweep(ctx, &linear_grid(1.0, 30.0, 29), 1.0, None, |l| {
        ModelSystem::Morse { lambda: l }
    });
    files.push(write_rows(&dir.join("morse_lambda.csv"), &morse)?);

    // Infinite well against τ.
    let well = scan_tau_cached(
        &ModelSystem::InfiniteWell,
        &linear_grid(1.0 / 30.0, 1.0, 58),
        &WindowPolicy::FromTau { max_index: None },
        ctx.cache.as_ref(),
    );
    let mut buf = Vec::new();
    write_scan_csv(&mut buf, &well)?;
    files.push(write_file(&dir.join("well_tau.csv"), &buf)?);

    // Harmonic-approximation scenarios for the Kerr system.
    for n_hat in [6, 4] {
        let mut rows = Vec::new();
        for alpha in linear_grid(-0.02, 0.02, 8) {
            let c = scenario_compare(&ModelSystem::Kerr { alpha }, n_hat)?;
            for r in c.records {
                rows.push(ScenarioRow {
                    alpha,
                    scenario: serde_json::to_value(r.scenario)?
                        .as_str()
                        .unwrap_or_default()
                        .to_string(),
                    score: r.score,
                    tau: r.tau,
                });
            }
        }
        files.push(write_rows(
            &dir.join(format!("kerr_scenarios_n{n_hat}.csv")),
            &rows,
        )?);
    }

    // Phase-space grids.
    let psi6 = crate::protocol::reference_state(
        ReferenceState::Psi6,
        ctx.lowest(ModelSystem::Harmonic, 6)?,
    )?;
    let b = write_wigner_bundle(
        &dir.join("wigner_harmonic_psi6"),
        &psi6,
        1.0,
        false,
        &WignerOptions::default(),
    )?;
    files.extend(b.files);
    let tau4 = harmonic_reference_tau(ReferenceState::Psi4)?;
    let psi4 = crate::protocol::reference_state(
        ReferenceState::Psi4,
        ctx.lowest(ModelSystem::Harmonic, 4)?,
    )?;
    let b = write_wigner_bundle(
        &dir.join("wigner_harmonic_psi4"),
        &psi4,
        tau4,
        false,
        &WignerOptions::default(),
    )?;
    files.extend(b.files);
    let pend_model = ModelSystem::Pendulum { alpha: -0.02 };
    let opt = max_score(ctx.lowest(pend_model, 6)?, 1.0)?;
    let b = write_wigner_bundle(
        &dir.join("wigner_pendulum_n6"),
        &opt.state,
        1.0,
        true,
        &WignerOptions::default(),
    )?;
    files.extend(b.files);
    Ok(files)
}
