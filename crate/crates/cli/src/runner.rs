//! Scenario execution: evolve, reduce, measure, and write output files.

use rayon::prelude::*;
use sim_core::{
    concurrence_analytic, concurrence_mixed, dispersive_density, husimi_q, inversion,
    reduce_to_field, reduce_to_qubits, total_inversion, AtomPrep, Evolver, FieldState, GridSpec,
    JointDensity, ModelParams,
};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;
use thiserror::Error;

use crate::output::{self, Manifest};
use crate::scenario::{Engine, Scenario, ScenarioError};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("engine: {0}")]
    Engine(String),
    #[error("cannot write to {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl RunError {
    /// Process exit code: validation failures 2, runtime failures 3.
    pub fn exit_code(&self) -> u8 {
        match self {
            RunError::Scenario(_) => 2,
            RunError::Engine(_) | RunError::Io { .. } => 3,
        }
    }
}

fn engine_err(e: impl std::fmt::Display) -> RunError {
    RunError::Engine(e.to_string())
}

/// Written files, manifest last.
pub struct RunOutcome {
    pub files: Vec<PathBuf>,
    pub wall_time_ms: f64,
    pub warnings: Vec<String>,
}

/// One state source per engine, shared across time samples.
enum Source<'a> {
    Exact(Evolver),
    Dispersive {
        prep: &'a AtomPrep,
        field: &'a FieldState,
        params: &'a ModelParams,
        warned: AtomicBool,
    },
}

impl Source<'_> {
    fn density_at(&self, t: f64) -> Result<JointDensity, RunError> {
        match self {
            Source::Exact(evolver) => evolver.evolve_at(t).map_err(engine_err),
            Source::Dispersive {
                prep,
                field,
                params,
                warned,
            } => {
                let (rho, diagnostics) =
                    dispersive_density(prep, field, params, t).map_err(engine_err)?;
                if diagnostics.regime_warning {
                    warned.store(true, Ordering::Relaxed);
                }
                Ok(rho)
            }
        }
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, RunError> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|source| RunError::Io {
        path: path.clone(),
        source,
    })?;
    Ok(path)
}

/// Execute a validated scenario, writing one file per requested output plus
/// `manifest.json` into `out_dir`.
pub fn run_scenario(scenario: &Scenario, out_dir: &Path) -> Result<RunOutcome, RunError> {
    scenario.validate()?;
    let started = Instant::now();
    std::fs::create_dir_all(out_dir).map_err(|source| RunError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;

    let params = scenario.model_params();
    let prep = scenario.atom_prep();
    let field = scenario.field_state()?;
    // The scenario grid is dimensionless gamma1*t; the engine takes physical
    // time with the couplings as given.
    let time_scale = 1.0 / scenario.model.gamma1.abs();

    let source = match scenario.engine {
        Engine::Exact => Source::Exact(
            Evolver::new(&prep, &field, &params).map_err(engine_err)?,
        ),
        Engine::Dispersive => Source::Dispersive {
            prep: &prep,
            field: &field,
            params: &params,
            warned: AtomicBool::new(false),
        },
    };

    let mut files = Vec::new();
    let mut warnings = Vec::new();
    let gamma1_t = scenario.time.samples();

    if scenario.output.inversion || scenario.output.inversion_per_qubit {
        let rows: Vec<(f64, f64, f64)> = gamma1_t
            .par_iter()
            .map(|&g1t| {
                let rho = source.density_at(g1t * time_scale)?;
                Ok((
                    total_inversion(&rho),
                    inversion(&rho, 1),
                    inversion(&rho, 2),
                ))
            })
            .collect::<Result<_, RunError>>()?;
        if scenario.output.inversion {
            let values: Vec<f64> = rows.iter().map(|r| r.0).collect();
            files.push(write_file(
                out_dir,
                "inversion.csv",
                &output::time_series_csv(&gamma1_t, &values),
            )?);
        }
        if scenario.output.inversion_per_qubit {
            for (which, name) in [(1usize, "inversion_qubit1.csv"), (2, "inversion_qubit2.csv")] {
                let values: Vec<f64> = rows
                    .iter()
                    .map(|r| if which == 1 { r.1 } else { r.2 })
                    .collect();
                files.push(write_file(
                    out_dir,
                    name,
                    &output::time_series_csv(&gamma1_t, &values),
                )?);
            }
        }
    }

    if let Some(request) = &scenario.output.q_grid {
        let rho = source.density_at(request.at_time * time_scale)?;
        let field_density = reduce_to_field(&rho);
        let grid_spec = GridSpec::square(request.half_extent, request.points);
        let grid = husimi_q(&field_density, &grid_spec).map_err(engine_err)?;
        if grid.coverage_warning {
            warnings.push(format!(
                "q_grid: the grid captures only {:.4} of the state (half_extent {} may be too small)",
                grid.riemann_sum(),
                request.half_extent
            ));
        }
        files.push(write_file(out_dir, "q_grid.json", &output::q_grid_json(&grid))?);
    }

    if let Some(request) = &scenario.output.concurrence_surface {
        let thetas = request.theta_samples();
        let values: Vec<Vec<f64>> = match scenario.engine {
            Engine::Dispersive => gamma1_t
                .par_iter()
                .map(|&g1t| {
                    thetas
                        .iter()
                        .map(|&theta| {
                            concurrence_analytic(&params, &field, theta, g1t * time_scale)
                                .map_err(engine_err)
                        })
                        .collect()
                })
                .collect::<Result<_, RunError>>()?,
            Engine::Exact => {
                // One evolver per theta column, then transpose to time-major.
                let columns: Vec<Vec<f64>> = thetas
                    .par_iter()
                    .map(|&theta| {
                        let prep = AtomPrep::new(scenario.prep.theta1, theta);
                        let evolver = Evolver::new(&prep, &field, &params).map_err(engine_err)?;
                        gamma1_t
                            .iter()
                            .map(|&g1t| {
                                let rho = evolver.evolve_at(g1t * time_scale).map_err(engine_err)?;
                                let pair = reduce_to_qubits(&rho);
                                Ok(concurrence_mixed(&pair).map_err(engine_err)?.value)
                            })
                            .collect()
                    })
                    .collect::<Result<_, RunError>>()?;
                (0..gamma1_t.len())
                    .map(|ti| columns.iter().map(|col| col[ti]).collect())
                    .collect()
            }
        };
        files.push(write_file(
            out_dir,
            "concurrence_surface.csv",
            &output::surface_csv(&gamma1_t, &thetas, &values),
        )?);
    }

    if let Source::Dispersive { warned, .. } = &source {
        if warned.load(Ordering::Relaxed) {
            warnings.push(
                "the coupling ratio is outside the weak-partner regime; \
                 closed-form results are unreliable here"
                    .to_string(),
            );
        }
    }

    let wall_time_ms = started.elapsed().as_secs_f64() * 1e3;
    let manifest = Manifest {
        library_version: sim_core::VERSION,
        engine: scenario.engine,
        wall_time_ms,
        scenario,
        files: files
            .iter()
            .map(|p| {
                p.file_name()
                    .expect("written files always have names")
                    .to_string_lossy()
                    .into_owned()
            })
            .collect(),
    };
    files.push(write_file(
        out_dir,
        "manifest.json",
        &output::manifest_json(&manifest),
    )?);

    Ok(RunOutcome {
        files,
        wall_time_ms,
        warnings,
    })
}
