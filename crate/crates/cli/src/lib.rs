//! Orchestration behind the `frontlab` binary: each command runs the stages
//! it needs, writes their exports into the output directory and returns the
//! run summary.

pub mod config;
pub mod summary;

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use frontlab::evans::{evans_report_on, CoefficientFields, Contour};
use frontlab::export::{
    write_dispersion_csv, write_evans_csv, write_evans_json, write_manifolds_csv, write_profile_csv,
    write_resolvent_json, TrajectoryWriter,
};
use frontlab::model::{validate_hypotheses, HypothesisReport};
use frontlab::profile::{
    find_gamma_star_with, reconstruct_profile_with, speed_from_gamma, trace_manifold_with, FrontProfile, GridSpec,
    ShootingOptions, Side,
};
use frontlab::resolvent::{verify_bounds, ResolventOptions, StationaryFront};
use frontlab::spectrum::{dispersion_curves, spectral_gap, uniform_grid, AsymptoticSpectralData, End, SpectralGap};
use frontlab::timestepper::{
    measure_decay_rate, measure_level_set_speed_observed, smoothed_step, DecayOptions, SimState, SpeedOptions,
};
use frontlab::{ModelSpec, ValidatedModel};
use num_complex::Complex64;

pub use config::{Command, RunConfig};
use summary::{ResolventSummary, SimulationSummary, Summary};

pub const DEFAULT_SEED: u64 = 0x5eed;
pub const DEFAULT_OUTPUT: &str = "frontlab-out";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("structural hypotheses fail: {}", .0.failures().join("; "))]
    Hypothesis(Box<HypothesisReport>, Box<Summary>),
    #[error("{0}")]
    Library(#[from] frontlab::Error),
    #[error("output error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 1: configuration, inapplicable command or I/O; 2: hypothesis
    /// failure; 3: numerical failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Hypothesis(..) => 2,
            CliError::Library(frontlab::Error::Hypothesis(_)) => 2,
            CliError::Library(frontlab::Error::Unsupported(_)) => 1,
            CliError::Library(e) if e.is_numerical() => 3,
            _ => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Output files are collected as they are written.
struct Output {
    dir: PathBuf,
    files: Vec<String>,
}

impl Output {
    fn create(dir: &Path) -> CliResult<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    fn write(&mut self, name: &str, body: impl FnOnce(&mut BufWriter<File>) -> frontlab::Result<()>) -> CliResult<()> {
        let mut w = BufWriter::new(File::create(self.dir.join(name))?);
        body(&mut w)?;
        w.flush()?;
        self.files.push(name.to_string());
        Ok(())
    }
}

/// Everything computed so far; later stages reuse earlier results.
struct Session<'a> {
    cfg: &'a RunConfig,
    model: ValidatedModel,
    out: Output,
    summary: Summary,
    gamma: Option<f64>,
    front: Option<FrontProfile>,
}

impl<'a> Session<'a> {
    fn shooting(&self) -> ShootingOptions {
        ShootingOptions {
            epsilon: self.cfg.shooting.epsilon,
            gamma_tol: self.cfg.shooting.gamma_tol,
            ..ShootingOptions::default()
        }
    }

    fn gamma(&mut self) -> CliResult<f64> {
        if let Some(g) = self.gamma {
            return Ok(g);
        }
        let g = find_gamma_star_with(&self.model, &self.shooting())?;
        self.gamma = Some(g);
        self.summary.gamma_star = Some(g);
        self.summary.c_star = Some(speed_from_gamma(g, self.model.tau));
        Ok(g)
    }

    fn front(&mut self) -> CliResult<FrontProfile> {
        if let Some(f) = &self.front {
            return Ok(f.clone());
        }
        let gamma = self.gamma()?;
        let grid = GridSpec {
            half_length: self.cfg.grid.half_length,
            spacing: self.cfg.grid.spacing,
            ..GridSpec::default()
        };
        let front = reconstruct_profile_with(&self.model, gamma, &grid, &self.shooting())?;
        // the reconstruction polishes gamma; report the polished values
        self.summary.gamma_star = Some(front.gamma_star);
        self.summary.c_star = Some(front.c_star);
        self.gamma = Some(front.gamma_star);
        self.front = Some(front.clone());
        Ok(front)
    }

    fn c_star(&mut self) -> CliResult<f64> {
        self.gamma()?;
        Ok(self.summary.c_star.unwrap())
    }

    fn run_front(&mut self) -> CliResult<()> {
        let front = self.front()?;
        self.out.write("profile.csv", |w| write_profile_csv(w, &front))?;
        if !self.cfg.manifolds.gammas.is_empty() {
            let opts = ShootingOptions {
                epsilon: self.cfg.manifolds.epsilon,
                ..self.shooting()
            };
            let mut traces = Vec::new();
            for &g in &self.cfg.manifolds.gammas {
                for side in [Side::UnstableFromZero, Side::StableFromOne] {
                    traces.push(trace_manifold_with(&self.model, g, side, &opts)?);
                }
            }
            self.out.write("manifolds.csv", |w| write_manifolds_csv(w, &traces))?;
        }
        Ok(())
    }

    fn gap(&mut self) -> CliResult<(AsymptoticSpectralData, SpectralGap)> {
        let c = self.c_star()?;
        let data = AsymptoticSpectralData::from_model(&self.model, c)?;
        let gap = spectral_gap(&data);
        self.summary.chi0 = Some(gap.chi0);
        Ok((data, gap))
    }

    fn run_gap(&mut self) -> CliResult<()> {
        let (_, gap) = self.gap()?;
        self.out.write("gap.json", |w| json(w, &gap))
    }

    fn run_spectrum(&mut self) -> CliResult<()> {
        let (data, _) = self.gap()?;
        let s = &self.cfg.spectrum;
        let xi = uniform_grid(-s.xi_max, s.xi_max, s.xi_points);
        for end in End::BOTH {
            for curve in dispersion_curves(&data, end, &xi)? {
                let name = format!("dispersion_{}_{}.csv", end.name(), curve.branch);
                self.out
                    .write(&name, |w| write_dispersion_csv(w, std::slice::from_ref(&curve)))?;
            }
        }
        self.run_gap()
    }

    fn run_evans(&mut self) -> CliResult<()> {
        let front = self.front()?;
        self.gap()?;
        let fields = CoefficientFields::from_front(&self.model, &front)?;
        let region = self
            .cfg
            .evans
            .region
            .unwrap_or_else(|| frontlab::evans::stability_rectangle(&fields));
        let origin = Contour::Circle {
            center: Complex64::new(0.0, 0.0),
            radius: self.cfg.evans.origin_radius,
        };
        let report = evans_report_on(&fields, &front, &region, &origin)?;
        self.summary.winding_origin = Some(report.winding_origin);
        self.summary.winding_stability_region = Some(report.winding_stability_region);
        self.summary.melnikov_gamma = Some(report.melnikov_gamma);
        self.out.write("evans.json", |w| write_evans_json(w, &report))?;
        self.out.write("evans.csv", |w| write_evans_csv(w, &report))
    }

    fn run_resolvent(&mut self) -> CliResult<()> {
        let r = &self.cfg.resolvent;
        let front = StationaryFront::from_model(&self.model, r.dx, r.half_length)?;
        let opts = ResolventOptions {
            theta0: r.theta0,
            re_max: r.re_max,
            im_max: r.im_max,
            trials: r.trials,
            seed: self.summary.seed,
        };
        let report = verify_bounds(&front, &opts)?;
        self.summary.resolvent = Some(ResolventSummary {
            fitted_m: report.fitted_m,
            theta0: report.theta0,
            trials: report.trials,
            max_ratio_vuprime: report.max_ratio_vuprime,
            max_ratio_uell2: report.max_ratio_uell2,
            decay_slope: report.decay_slope,
        });
        self.out.write("resolvent.json", |w| write_resolvent_json(w, &report))
    }

    fn run_simulate(&mut self) -> CliResult<()> {
        let (_, gap) = self.gap()?;
        let c_star = self.c_star()?;
        let sim = &self.cfg.simulate;
        let d = SpeedOptions::for_model(&self.model);
        let speed_opts = SpeedOptions {
            half_length: sim.half_length.unwrap_or(d.half_length),
            points: sim.points.unwrap_or(d.points),
            horizon: sim.horizon.unwrap_or(d.horizon),
            ..d
        };
        let snapshot_every = sim.snapshot_every.unwrap_or(5.0);
        let mut state = SimState::new(
            &self.model,
            speed_opts.half_length,
            speed_opts.points,
            0.0,
            smoothed_step,
            |_| 0.0,
            None,
        )?;
        let path = self.out.dir.join("trajectory.csv");
        let mut traj = TrajectoryWriter::new(BufWriter::new(File::create(&path)?));
        let mut next_snapshot = 0.0;
        let speed = measure_level_set_speed_observed(&mut state, &self.model, &speed_opts, |s| {
            // observation times are multiples of the step, not exact
            if s.t >= next_snapshot - 0.5 * speed_opts.every {
                traj.snapshot(s)?;
                next_snapshot += snapshot_every;
            }
            Ok(())
        })?;
        traj.into_inner().flush()?;
        self.out.files.push("trajectory.csv".into());

        let spacing = sim
            .decay_spacing
            .unwrap_or(if self.model.tau == 0.0 { 0.05 } else { self.cfg.grid.spacing });
        let gamma = self.gamma()?;
        let decay_front = reconstruct_profile_with(
            &self.model,
            gamma,
            &GridSpec {
                half_length: self.cfg.grid.half_length,
                spacing,
                ..GridSpec::default()
            },
            &self.shooting(),
        )?;
        let dd = DecayOptions::default();
        let decay_opts = DecayOptions {
            amplitude: sim.perturbation.unwrap_or(dd.amplitude),
            horizon: sim.decay_horizon.unwrap_or(dd.horizon),
            ..dd
        };
        let decay = measure_decay_rate(&self.model, &decay_front, gap.chi0, &decay_opts)?;
        let summary = SimulationSummary {
            measured_speed: speed.speed,
            c_star,
            speed_relative_error: if c_star == 0.0 {
                speed.speed.abs()
            } else {
                (speed.speed / c_star - 1.0).abs()
            },
            decay_rate: decay.rate,
            noise_floor: decay.noise_floor,
            chi0: gap.chi0,
            heuristic_threshold: decay.heuristic_threshold,
            passes_heuristic: decay.passes_heuristic,
            note: "heuristic threshold 0.5 chi0: the nonlinear decay rate is not a proven quantity".into(),
        };
        self.out.write("simulation.json", |w| json(w, &summary))?;
        self.summary.simulation = Some(summary);
        Ok(())
    }
}

fn json<T: serde::Serialize>(w: &mut impl Write, value: &T) -> frontlab::Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)?;
    Ok(())
}

fn empty_summary(command: Command, seed: u64, report: HypothesisReport, config: RunConfig) -> Summary {
    Summary {
        command,
        seed,
        gamma_star: None,
        c_star: None,
        chi0: None,
        winding_origin: None,
        winding_stability_region: None,
        melnikov_gamma: None,
        hypothesis_report: report,
        simulation: None,
        resolvent: None,
        skipped: Vec::new(),
        files: Vec::new(),
        config,
    }
}

/// Runs `command` and writes its exports plus `summary.json` into `out`.
/// A hypothesis failure still writes the summary before returning the error.
pub fn run(command: Command, cfg: &RunConfig, seed: Option<u64>, out: Option<&Path>) -> CliResult<Summary> {
    cfg.check()?;
    let seed = seed.or(cfg.seed).unwrap_or(DEFAULT_SEED);
    let dir = out
        .map(Path::to_path_buf)
        .or_else(|| cfg.output.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT));
    // the recorded config reproduces this run; the output location is not
    // part of the result
    let mut recorded = cfg.clone();
    recorded.command = Some(command);
    recorded.seed = Some(seed);
    recorded.output = None;

    let spec: ModelSpec = cfg.model.to_model()?;
    let report = validate_hypotheses(&spec, cfg.shooting.hypothesis_grid)?;
    let mut out = Output::create(&dir)?;
    let mut summary = empty_summary(command, seed, report.clone(), recorded);
    if !report.passed() {
        summary.files.push("summary.json".into());
        out.write("summary.json", |w| json(w, &summary))?;
        return Err(CliError::Hypothesis(Box::new(report), Box::new(summary)));
    }
    let model = spec.validate_on(cfg.shooting.hypothesis_grid)?;
    let mut session = Session {
        cfg,
        model,
        out,
        summary,
        gamma: None,
        front: None,
    };
    match command {
        Command::Validate => {}
        Command::Front => session.run_front()?,
        Command::Gap => session.run_gap()?,
        Command::Spectrum => session.run_spectrum()?,
        Command::Evans => session.run_evans()?,
        Command::Resolvent => session.run_resolvent()?,
        Command::Simulate => session.run_simulate()?,
        Command::All => {
            session.run_front()?;
            session.run_spectrum()?;
            session.run_evans()?;
            match session.run_resolvent() {
                Err(CliError::Library(frontlab::Error::Unsupported(why))) => {
                    session.summary.skipped.push(format!("resolvent: {why}"));
                }
                other => other?,
            }
            session.run_simulate()?;
        }
    }
    let mut summary = session.summary;
    let mut out = session.out;
    summary.files = out.files.clone();
    summary.files.push("summary.json".into());
    out.write("summary.json", |w| json(w, &summary))?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use frontlab::config::{DampingConfig, ModelConfig};

    #[test]
    fn exit_codes_follow_error_class() {
        assert_eq!(CliError::Config("x".into()).exit_code(), 1);
        assert_eq!(CliError::Library(frontlab::Error::Unsupported("x".into())).exit_code(), 1);
        assert_eq!(CliError::Library(frontlab::Error::Singular(Complex64::new(0.0, 0.0))).exit_code(), 3);
        assert_eq!(
            CliError::Library(frontlab::Error::ContourThroughZero { min_abs: 0.0, floor: 1.0 }).exit_code(),
            3
        );
    }

    #[test]
    fn gap_command_records_speed_and_gap() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = RunConfig::new(ModelConfig::cubic(0.3, 1.0, DampingConfig::ConstantOne, 0.0));
        let s = run(Command::Gap, &cfg, None, Some(dir.path())).unwrap();
        assert!((s.gamma_star.unwrap() + 0.2828427).abs() < 1e-6);
        assert_eq!(s.chi0, Some(0.15));
        assert_eq!(s.seed, DEFAULT_SEED);
        assert_eq!(s.files, vec!["gap.json", "summary.json"]);
        assert_eq!(s.config.command, Some(Command::Gap));
        assert!(s.winding_origin.is_none() && s.simulation.is_none());
    }
}
