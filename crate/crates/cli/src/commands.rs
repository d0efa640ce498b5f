use std::path::Path;

use ppmm::bayes::{run_gibbs_with_progress, DrawField, McmcConfig, PhiPrior};
use ppmm::ingest::{
    load_codebook, load_population_aggregates, load_respondents, reduce_reference_marginals,
    reduce_reference_microdata, OutcomeMissingPolicy,
};
use ppmm::model::{phi_grid, ppmm_mle_analysis};
use ppmm::simulate::{
    coverage_experiment, demographic_template, extract_inputs, generate, CoverageOptions, PhiTruth,
    SimulationSpec,
};
use ppmm::summary::{posterior_rho, summarize};

use crate::args::{
    AggregateArgs, CoverageArgs, FitArgs, McmcArgs, MissingPolicyArg, SimulateArgs, TemplateArgs,
};
use crate::schema::{
    Coefficient, CoverageFile, Estimate, Posterior, ProbitInfo, ProxyInfo, ResultsFile, SampleInfo,
    Summary, TruthFile, COVERAGE_SCHEMA, RESULTS_SCHEMA, TRUTH_SCHEMA,
};
use crate::{CmdResult, Failure, Run, RHAT_FAILURE};

/// Points in the default ML φ grid (0, 0.05, …, 1).
const DEFAULT_GRID_POINTS: usize = 21;

fn policy(arg: MissingPolicyArg) -> OutcomeMissingPolicy {
    match arg {
        MissingPolicyArg::TreatAsZero => OutcomeMissingPolicy::TreatAsZero,
        MissingPolicyArg::DropRecord => OutcomeMissingPolicy::DropRecord,
    }
}

fn mcmc_config(
    args: &McmcArgs,
    seed: u64,
    prior: PhiPrior,
    threads: usize,
) -> CmdResult<McmcConfig> {
    let config = McmcConfig {
        iterations: args.iterations,
        burn_in: args.burn_in,
        chains: args.chains,
        seed,
        phi_prior: prior,
        thin: args.thin,
        threads,
    };
    config.validate()?;
    Ok(config)
}

fn csv_bytes(write: impl FnOnce(&mut Vec<u8>) -> ppmm::Result<()>) -> CmdResult<Vec<u8>> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    Ok(buf)
}

pub(crate) fn aggregate(a: &AggregateArgs, run: &mut Run) -> CmdResult<()> {
    run.input(&a.microdata);
    run.input(&a.codebook);
    let codebook = load_codebook(&a.codebook)?;
    let weight = a.weight_column.as_deref().or(codebook.weight.as_deref());
    let agg = if a.marginals_only {
        reduce_reference_marginals(&a.microdata, &codebook, weight)?
    } else {
        reduce_reference_microdata(&a.microdata, &codebook, weight)?
    };
    run.prepare_out_dir()?;
    let path = run.write("aggregates.toml", agg.to_toml_string())?;
    println!("aggregates: {}", path.display());
    println!("weight: {}", weight.unwrap_or("(none)"));
    let width = agg.columns.iter().map(|c| c.len()).max().unwrap_or(0);
    for (name, mean) in agg.columns.iter().zip(agg.mean_z.iter()) {
        println!("  {name:<width$}  {mean:.6}");
    }
    println!(
        "covariance condition number: {:.4e}",
        agg.condition_number()
    );
    Ok(())
}

fn label_of(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "wave".to_owned())
}

pub(crate) fn fit(a: &FitArgs, threads: usize, run: &mut Run) -> CmdResult<()> {
    run.input(&a.microdata);
    run.input(&a.codebook);
    run.input(&a.aggregates);
    let codebook = load_codebook(&a.codebook)?;
    let sample = load_respondents(&a.microdata, &codebook)?;
    let aggregates = load_population_aggregates(&a.aggregates, &codebook)?.with_pi(a.pi)?;
    let grid = a
        .phi
        .clone()
        .unwrap_or_else(|| phi_grid(DEFAULT_GRID_POINTS));
    let prior = match a.phi.as_deref() {
        Some([phi]) => PhiPrior::Fixed(*phi),
        _ => PhiPrior::Uniform01,
    };
    let config = if a.ml_only {
        None
    } else {
        Some(mcmc_config(&a.mcmc, a.seed, prior, threads)?)
    };
    let ml = ppmm_mle_analysis(&sample, &aggregates, &grid)?;
    if !ml.fit.converged {
        log::warn!(
            "probit fit stopped after {} iterations without converging",
            ml.fit.iterations
        );
    }
    run.prepare_out_dir()?;

    let posterior = match config {
        None => None,
        Some(config) => {
            let total = config.iterations * config.chains;
            let step = (total / 10).max(1);
            let done = std::sync::atomic::AtomicUsize::new(0);
            let report = |_chain: usize, _it: usize| {
                let n = done.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1;
                if n.is_multiple_of(step) {
                    log::info!("gibbs: {n}/{total} iterations");
                }
            };
            let draws = run_gibbs_with_progress(&sample, &aggregates, &config, Some(&report))?;
            run.write("draws.csv", csv_bytes(|b| draws.write_csv(b))?)?;
            let mu = summarize(&draws, DrawField::MuY)?;
            let rho = posterior_rho(&draws)?;
            Some(Posterior {
                phi_prior: match config.phi_prior {
                    PhiPrior::Uniform01 => "uniform".to_owned(),
                    PhiPrior::Fixed(phi) => phi.to_string(),
                },
                iterations: config.iterations,
                burn_in: config.burn_in,
                chains: config.chains,
                thin: config.thin,
                seed: config.seed,
                mu_y: Summary::from(&mu),
                rho1: Summary::from(&rho),
                clamped_draws: draws.clamp_count,
                draws_file: "draws.csv".to_owned(),
            })
        }
    };

    let se = ml.fit.cov_beta.diagonal();
    let results = ResultsFile {
        schema_version: RESULTS_SCHEMA.to_owned(),
        label: a.label.clone().unwrap_or_else(|| label_of(&a.microdata)),
        sample: SampleInfo {
            n: sample.n(),
            mean_y: sample.mean_y(),
            dropped_missing_y: sample.dropped_missing_y,
            dropped_missing_z: sample.dropped_missing_z,
            coerced_missing_y: sample.coerced_missing_y,
            columns: sample.column_names().to_vec(),
        },
        pi: aggregates.pi,
        probit: ProbitInfo {
            coefficients: sample
                .column_names()
                .iter()
                .enumerate()
                .map(|(j, name)| Coefficient {
                    name: name.clone(),
                    estimate: ml.fit.beta[j],
                    std_error: se[j].sqrt(),
                })
                .collect(),
            log_likelihood: ml.fit.log_likelihood,
            iterations: ml.fit.iterations,
            converged: ml.fit.converged,
        },
        proxy: ProxyInfo::from(&ml.moments),
        ml: ml.estimates.iter().map(Estimate::from).collect(),
        posterior,
    };
    run.write_json("results.json", &results)?;
    if let Some(p) = &results.posterior {
        if p.mu_y.rhat >= RHAT_FAILURE {
            return Err(Failure::Quality(format!(
                "split R-hat for mu_y is {:.3} (threshold {RHAT_FAILURE})",
                p.mu_y.rhat
            )));
        }
    }
    Ok(())
}

pub(crate) fn simulate(a: &SimulateArgs, run: &mut Run) -> CmdResult<()> {
    run.input(&a.spec);
    let mut spec = SimulationSpec::load(&a.spec)?;
    spec.seed = a.seed;
    let population = generate(&spec)?;
    let policy = policy(a.missing_y_policy);
    let (sample, aggregates) = extract_inputs(&population, policy)?;
    run.prepare_out_dir()?;
    run.write(
        "population.csv",
        csv_bytes(|b| population.write_population_csv(b))?,
    )?;
    run.write(
        "respondents.csv",
        csv_bytes(|b| population.write_respondents_csv(b))?,
    )?;
    run.write(
        "codebook.toml",
        population.codebook(policy).to_toml_string(),
    )?;
    run.write("aggregates.toml", aggregates.to_toml_string())?;
    let (w_proxy, w_latent) = population.selection_weights;
    let truth = TruthFile {
        schema_version: TRUTH_SCHEMA.to_owned(),
        seed: spec.seed,
        population_size: population.size(),
        respondents: population.respondent_count(),
        true_mu_y: population.true_mu_y,
        naive_mean: sample.mean_y(),
        realized_response_rate: population.realized_response_rate,
        pi: aggregates.pi,
        phi_true: spec.phi_true,
        proxy_strength: spec.proxy_strength(),
        selection_intercept: population.selection_intercept,
        selection_weight_proxy: w_proxy,
        selection_weight_latent: w_latent,
    };
    run.write_json("truth.json", &truth)?;
    Ok(())
}

pub(crate) fn parse_phi_truth(text: &str) -> CmdResult<PhiTruth> {
    if text.eq_ignore_ascii_case("uniform") {
        return Ok(PhiTruth::Uniform);
    }
    match text.parse::<f64>() {
        Ok(phi) if (0.0..=1.0).contains(&phi) => Ok(PhiTruth::Fixed(phi)),
        _ => Err(Failure::invalid(
            "config",
            format!("--phi-truth must be `uniform` or a number in [0, 1], got `{text}`"),
        )),
    }
}

pub(crate) fn coverage(a: &CoverageArgs, threads: usize, run: &mut Run) -> CmdResult<()> {
    run.input(&a.spec);
    let mut template = SimulationSpec::load(&a.spec)?;
    template.seed = a.seed;
    let phi_truth = parse_phi_truth(&a.phi_truth)?;
    let config = mcmc_config(&a.mcmc, a.seed, PhiPrior::Uniform01, 1)?;
    let options = CoverageOptions {
        phi_truth,
        missing_y_policy: policy(a.missing_y_policy),
        threads,
    };
    let report = coverage_experiment(&template, a.replications, &config, &options)?;
    run.prepare_out_dir()?;
    run.write("coverage.csv", csv_bytes(|b| report.write_csv(b))?)?;
    let file = CoverageFile {
        schema_version: COVERAGE_SCHEMA.to_owned(),
        replications: report.replications,
        phi_truth: match phi_truth {
            PhiTruth::Uniform => "uniform".to_owned(),
            PhiTruth::Fixed(phi) => phi.to_string(),
        },
        coverage: report.coverage,
        coverage_mcse: report.coverage_mcse,
        mean_width: report.mean_width,
        mean_width_mcse: report.mean_width_mcse,
        naive_bias: report.naive_bias,
        naive_bias_mcse: report.naive_bias_mcse,
        median_bias: report.median_bias,
        median_bias_mcse: report.median_bias_mcse,
        direction_rate: report.direction_rate,
        direction_rate_mcse: report.direction_rate_mcse,
        direction_eligible: report.direction_eligible,
        mean_rho: report.mean_rho,
        records_file: "coverage.csv".to_owned(),
    };
    run.write_json("coverage.json", &file)?;
    Ok(())
}

pub(crate) fn template(a: &TemplateArgs) -> CmdResult<String> {
    let mut spec = demographic_template(0).with_proxy_strength(a.proxy_strength)?;
    spec.population_size = a.population_size;
    spec.target_response_rate = a.response_rate;
    spec.phi_true = a.phi_true;
    spec.validate()?;
    Ok(spec.to_toml_string())
}
