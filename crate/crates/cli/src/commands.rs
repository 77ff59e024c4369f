use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};

use boolcv::black_box::Dataset;
use boolcv::curves::figure_curves;
use boolcv::error_theory::{
    enumerate_expected_errors, expected_rates_malpha, expected_rates_mbeta, simulate_errors, ErrorSummary,
    ENUMERATION_LIMIT,
};
use boolcv::estimators::{heuristic_noise_rate, EstimateSet};
use boolcv::knn::{MemorizerModel, OracleModel, TrainingPredictor, VotingConfig, VotingModel};
use boolcv::report::{self, ErrorRow, Source};
use boolcv::rng::{self, label};
use boolcv::selection::{default_k_grid, select as run_selection, Rule};
use boolcv::verify::{self, Fault, VerifyConfig};

use crate::args::{AnalyzeArgs, CurvesArgs, EstimateArgs, FaultArg, GenerateArgs, RuleArg, SelectArgs, VerifyArgs};
use crate::config::{join, RunConfig};
use crate::input::{self, noisy_outputs};

/// k used by the heuristic noise-rate estimate.
const HEURISTIC_K: usize = 3;

/// Writes the finished output in one go, to the file or to stdout.
fn emit(out: &Option<PathBuf>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => {
            io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

fn record_out(cfg: &mut RunConfig, out: &Option<PathBuf>) {
    let target = out.as_ref().map(|p| p.display().to_string());
    cfg.set("out", target.as_deref().unwrap_or("-"));
}

/// Summary lines go to stdout if the data went to a file, stderr otherwise.
fn say(out: &Option<PathBuf>, line: &str) {
    if out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
}

pub fn generate(a: &GenerateArgs) -> Result<bool> {
    let mut cfg = RunConfig::new("generate");
    let problem = input::build(&a.family, a.r, a.n, a.seed, &mut cfg)?;
    if !(0.0..=1.0).contains(&a.p) {
        bail!("--p must lie in [0, 1]");
    }
    cfg.set("p", a.p).set("seed", a.seed);
    record_out(&mut cfg, &a.out);
    let y = noisy_outputs(&problem.truth, a.p, a.seed);
    let mut buf = Vec::new();
    Dataset::new(problem.x, y)?.write(&mut buf, &cfg.comments())?;
    emit(&a.out, &buf)?;
    Ok(true)
}

pub fn curves(a: &CurvesArgs) -> Result<bool> {
    let mut cfg = RunConfig::new("curves");
    cfg.set("p_grid", "0:0.01:1");
    record_out(&mut cfg, &a.out);
    let mut buf = Vec::new();
    report::write_curves(&mut buf, &cfg.comments(), &figure_curves::<f64>()?)?;
    emit(&a.out, &buf)?;
    Ok(true)
}

pub fn verify(a: &VerifyArgs) -> Result<bool> {
    let mut cfg = RunConfig::new("verify");
    let fault = a.inject_fault.map(|FaultArg::InvertVote| Fault::InvertVote);
    cfg.set("trials", a.trials).set("seed", a.seed);
    cfg.set("inject_fault", if fault.is_some() { "invert-vote" } else { "none" });
    record_out(&mut cfg, &a.out);
    let vc = VerifyConfig { trials: a.trials, seed: a.seed, fault, ..Default::default() };
    let report = verify::run(&vc)?;
    for c in &report.checks {
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        println!("{verdict} theorem {:>2} [{}] {}: {}", c.theorem, c.method, c.name, c.statistic);
    }
    let failed: Vec<String> =
        report.theorem_verdicts().into_iter().filter(|(_, ok)| !ok).map(|(t, _)| t.to_string()).collect();
    println!("{}/{} theorems pass", report.passed_theorems(), verify::THEOREM_COUNT);
    if !failed.is_empty() {
        println!("failing: {}", failed.join(", "));
    }
    if let Some(path) = &a.out {
        let mut buf = Vec::new();
        report::write_checks(&mut buf, &cfg.comments(), &report)?;
        fs::write(path, buf).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(report.all_passed())
}

pub fn select(a: &SelectArgs) -> Result<bool> {
    let mut cfg = RunConfig::new("select");
    // A generated draw needs a noise rate up front; the heuristic only
    // makes sense for data that already exists.
    let draw_p = match (a.p, &a.source.dataset) {
        (Some(p), _) => p,
        (None, Some(_)) => 0.0,
        (None, None) => bail!("--estimate-p needs --dataset; a generated draw requires --p"),
    };
    let (x, y) = input::observed(&a.source, draw_p, a.seed, &mut cfg)?;
    let p = match a.p {
        Some(p) => {
            cfg.set("p", p);
            p
        }
        None => {
            let h = heuristic_noise_rate(&x, &y, HEURISTIC_K)?;
            cfg.set("p", format!("{h} (heuristic, k={HEURISTIC_K})"));
            say(&a.out, &format!("p = {h} (heuristic estimate, not a fitted value)"));
            h
        }
    };
    let k_grid = a.k_grid.clone().unwrap_or_else(|| default_k_grid(x.n_rows()));
    let t_grid = a.t_grid.clone().unwrap_or_else(|| vec![0.5]);
    let rule = match a.rule {
        RuleArg::Theorem2Bound => Rule::Theorem2Bound,
        RuleArg::Theorem3Independent => Rule::Theorem3Independent,
    };
    cfg.set("k_grid", join(&k_grid)).set("t_grid", join(&t_grid)).set("rule", rule);
    record_out(&mut cfg, &a.out);
    let result = run_selection(&x, &y, &p, &k_grid, &t_grid, rule)?;
    let mut buf = Vec::new();
    report::write_selection(&mut buf, &cfg.comments(), &result)?;
    emit(&a.out, &buf)?;
    let best = result.chosen_row();
    say(
        &a.out,
        &format!("chosen k={} t={} (rule {}, estimated E|e_c| = {})", best.k, best.t, rule, best.estimate(rule)),
    );
    Ok(true)
}

fn mc_row(s: &ErrorSummary, k: Option<usize>, t: Option<f64>) -> ErrorRow {
    ErrorRow {
        model: s.model.clone(),
        p: s.p,
        n: s.n,
        k,
        t,
        e_c: s.e_c.mean,
        e_t: s.e_t.mean,
        e_s: s.e_s.mean,
        source: Source::MonteCarlo,
        stderr: Some(s.e_c.stderr),
    }
}

pub fn analyze(a: &AnalyzeArgs) -> Result<bool> {
    let mut cfg = RunConfig::new("analyze");
    let problem = input::target(&a.source, a.seed, &mut cfg)?;
    if !(0.0..=1.0).contains(&a.p) {
        bail!("--p must lie in [0, 1]");
    }
    cfg.set("p", a.p).set("k_grid", join(&a.k_grid)).set("t", a.t);
    cfg.set("trials", a.trials).set("seed", a.seed);
    record_out(&mut cfg, &a.out);
    if a.trials == 0 {
        bail!("--trials must be at least 1");
    }
    let n = problem.x.n_rows();
    let (p, trials) = (a.p, a.trials);
    let stream = |model: u64| rng::derive(a.seed, &[label::ANALYZE, model]);

    let oracle = OracleModel::new(&problem.target, &p, &problem.x)?;
    let memorizer = MemorizerModel::new(n);
    let mut voters = Vec::new();
    for &k in &a.k_grid {
        voters.push(VotingModel::new(&problem.x, VotingConfig::new(k, a.t)?)?);
    }

    let mut rows = Vec::new();
    for (e, model) in [(expected_rates_malpha(&p, n)?, "m_alpha"), (expected_rates_mbeta(&p, n)?, "m_beta")] {
        rows.push(ErrorRow {
            model: model.into(),
            p,
            n,
            k: None,
            t: None,
            e_c: e.e_c,
            e_t: e.e_t,
            e_s: e.e_s,
            source: Source::ClosedForm,
            stderr: None,
        });
    }
    if n <= ENUMERATION_LIMIT {
        let mut models: Vec<(&dyn TrainingPredictor, Option<usize>)> = vec![(&oracle, None), (&memorizer, None)];
        models.extend(voters.iter().map(|v| (v as &dyn TrainingPredictor, Some(v.config().k()))));
        for (model, k) in models {
            let e = enumerate_expected_errors(model, &problem.truth, &p)?;
            rows.push(ErrorRow {
                model: model.name(),
                p,
                n,
                k,
                t: k.map(|_| a.t),
                e_c: e.e_c,
                e_t: e.e_t,
                e_s: e.e_s,
                source: Source::Enumeration,
                stderr: None,
            });
        }
    }
    rows.push(mc_row(&simulate_errors(&oracle, &problem.truth, p, trials, stream(0))?, None, None));
    rows.push(mc_row(&simulate_errors(&memorizer, &problem.truth, p, trials, stream(1))?, None, None));
    for (j, v) in voters.iter().enumerate() {
        let s = simulate_errors(v, &problem.truth, p, trials, stream(2 + j as u64))?;
        rows.push(mc_row(&s, Some(v.config().k()), Some(a.t)));
    }

    let mut buf = Vec::new();
    report::write_errors(&mut buf, &cfg.comments(), &rows)?;
    emit(&a.out, &buf)?;
    Ok(true)
}

pub fn estimate(a: &EstimateArgs) -> Result<bool> {
    let mut cfg = RunConfig::new("estimate");
    let (x, y) = input::observed(&a.source, a.p, a.seed, &mut cfg)?;
    cfg.set("p", a.p).set("k", a.k);
    record_out(&mut cfg, &a.out);
    let est = EstimateSet::compute(&x, &y, &a.p, a.k)?;
    let mut buf = Vec::new();
    report::write_estimates(&mut buf, &cfg.comments(), &est)?;
    emit(&a.out, &buf)?;
    say(&a.out, &format!("p' = {}", est.p_prime()?));
    Ok(true)
}
