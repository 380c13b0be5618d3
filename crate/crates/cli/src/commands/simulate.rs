use ar1_tstat::montecarlo::{
    ks_test_against, sample_functional, EmpiricalSummary, Functional, KsReport, ReferenceLaw, SimulationConfig,
};
use ar1_tstat::{moments, Ar1Params, StudentLaw};
use serde::Serialize;

use crate::args::SimulateArgs;
use crate::error::{CliError, CliResult};
use crate::manifest::RunRecord;
use crate::output::{emit, json_bytes, real, Format, Table};

#[derive(Debug, Serialize)]
pub struct SimulationReport {
    pub functional: Functional,
    pub params: Ar1Params,
    pub replications: usize,
    pub seed: u64,
    pub summary: EmpiricalSummary,
    pub ks: KsReport,
}

/// Nominal reference law for each functional: exact for the sample mean,
/// and the independent-sample law otherwise.
pub fn reference_law(functional: Functional, params: &Ar1Params) -> CliResult<ReferenceLaw> {
    let dof = (params.n() - 1) as f64;
    Ok(match functional {
        Functional::SampleMean => ReferenceLaw::Normal {
            mean: 0.0,
            sd: moments::var_scaled_sample_mean(params).sqrt(),
        },
        Functional::S2 => ReferenceLaw::ScaledChiSquare {
            dof,
            scale: params.stationary_variance() / dof,
        },
        Functional::TStat | Functional::ModifiedTStat => ReferenceLaw::Student(StudentLaw::new(dof)?),
    })
}

const HEADER: [&str; 17] = [
    "functional",
    "n",
    "rho",
    "sigma",
    "mu",
    "replications",
    "seed",
    "degenerate",
    "mean",
    "variance",
    "second_moment",
    "std_error_mean",
    "std_error_variance",
    "std_error_second_moment",
    "ks_reference",
    "ks_statistic",
    "ks_p_value",
];

pub fn run(args: &SimulateArgs, workers: usize) -> CliResult<RunRecord> {
    let params = args.model.params()?;
    let config = SimulationConfig::new(params, args.reps, args.seed, workers)?;
    let functional = Functional::from(args.functional);
    let samples = sample_functional(&config, functional);
    let finite = samples.finite();
    if finite.is_empty() {
        return Err(CliError::usage("simulation", "every replication was degenerate"));
    }
    let summary = samples.summary()?;
    let ks = ks_test_against(&finite, &reference_law(functional, &params)?)?;
    let report = SimulationReport {
        functional,
        params,
        replications: args.reps,
        seed: args.seed,
        summary,
        ks,
    };

    let mut outputs = Vec::new();
    if let Some(path) = &args.values {
        let mut table = Table::new(&["replication", "value"])?;
        for (i, v) in samples.values.iter().enumerate() {
            table.row([(i + 1).to_string(), real(*v)])?;
        }
        outputs.extend(emit(Some(path), &table.into_bytes()?)?);
    }

    let bytes = match args.format {
        Format::Json => json_bytes(&report)?,
        Format::Csv => {
            let s = &report.summary;
            let mut table = Table::new(&HEADER)?;
            table.row([
                functional.name().to_string(),
                params.n().to_string(),
                real(params.rho()),
                real(params.sigma()),
                real(params.mu()),
                args.reps.to_string(),
                args.seed.to_string(),
                s.degenerate.to_string(),
                real(s.mean),
                real(s.variance),
                real(s.second_moment),
                real(s.std_error_mean),
                real(s.std_error_variance),
                real(s.std_error_second_moment),
                report.ks.reference.clone(),
                real(report.ks.statistic),
                real(report.ks.p_value),
            ])?;
            table.into_bytes()?
        }
    };
    // Primary output goes first so the manifest sits next to it.
    let mut all: Vec<_> = emit(args.out.as_deref(), &bytes)?.into_iter().collect();
    all.append(&mut outputs);
    Ok(RunRecord {
        params: Some(params),
        seed: Some(args.seed),
        replications: Some(args.reps),
        outputs: all,
    })
}
