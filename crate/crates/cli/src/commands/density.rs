use ar1_tstat::montecarlo::{empirical_density, sample_functional, silverman_bandwidth, Functional, SimulationConfig};
use ar1_tstat::StudentLaw;
use serde::Serialize;

use crate::args::{SimulatedDensityArgs, StudentDensityArgs};
use crate::error::{CliError, CliResult};
use crate::grid::parse_reals;
use crate::manifest::RunRecord;
use crate::output::{emit, json_bytes, real, Format, Table};

#[derive(Debug, Serialize)]
struct StudentPoint {
    t: f64,
    pdf_closed: f64,
    pdf_integral: f64,
}

#[derive(Debug, Serialize)]
struct KdePoint {
    t: f64,
    kde: f64,
}

#[derive(Debug, Serialize)]
struct KdeDump {
    functional: Functional,
    bandwidth: f64,
    degenerate: usize,
    points: Vec<KdePoint>,
}

pub fn run_student(args: &StudentDensityArgs) -> CliResult<RunRecord> {
    let law = StudentLaw::new(args.dof)?;
    let grid = parse_reals("--t-grid", &args.t_grid)?;
    let points = grid
        .iter()
        .map(|&t| {
            Ok(StudentPoint {
                t,
                pdf_closed: law.density_closed(t),
                pdf_integral: law.density_integral(t)?,
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    let bytes = match args.format {
        Format::Json => json_bytes(&points)?,
        Format::Csv => {
            let mut table = Table::new(&["t", "pdf_closed", "pdf_integral"])?;
            for p in &points {
                table.row([real(p.t), real(p.pdf_closed), real(p.pdf_integral)])?;
            }
            table.into_bytes()?
        }
    };
    let outputs = emit(args.out.as_deref(), &bytes)?.into_iter().collect();
    Ok(RunRecord {
        outputs,
        ..RunRecord::default()
    })
}

pub fn run_simulated(args: &SimulatedDensityArgs, workers: usize) -> CliResult<RunRecord> {
    let params = args.model.params()?;
    let grid = parse_reals("--t-grid", &args.t_grid)?;
    let config = SimulationConfig::new(params, args.reps, args.seed, workers)?;
    let functional = Functional::from(args.functional);
    let samples = sample_functional(&config, functional);
    let finite = samples.finite();
    if finite.is_empty() {
        return Err(CliError::usage("simulation", "every replication was degenerate"));
    }
    let bandwidth = match args.bandwidth {
        Some(h) => h,
        None => silverman_bandwidth(&finite)?,
    };
    let density = empirical_density(&finite, &grid, bandwidth)?;
    let bytes = match args.format {
        Format::Json => json_bytes(&KdeDump {
            functional,
            bandwidth,
            degenerate: samples.degenerate(),
            points: grid
                .iter()
                .zip(&density)
                .map(|(&t, &kde)| KdePoint { t, kde })
                .collect(),
        })?,
        Format::Csv => {
            let mut table = Table::new(&["t", "kde"])?;
            for (t, d) in grid.iter().zip(&density) {
                table.row([real(*t), real(*d)])?;
            }
            table.into_bytes()?
        }
    };
    let outputs = emit(args.out.as_deref(), &bytes)?.into_iter().collect();
    Ok(RunRecord {
        params: Some(params),
        seed: Some(args.seed),
        replications: Some(args.reps),
        outputs,
    })
}
