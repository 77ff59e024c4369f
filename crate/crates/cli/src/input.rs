use std::str::FromStr;

use anyhow::{bail, Context, Result};

use boolcv::black_box::geometry::{balanced_chain, constant_chain, mixed_chains, Layout};
use boolcv::black_box::{paired_outputs, sample_inputs, Dataset, Family, TargetFunction};
use boolcv::rng::{self, label};
use boolcv::{BitMatrix, BitVector};

use crate::args::SourceArgs;
use crate::config::RunConfig;

/// Marker width for `mixed-chain`; keeps every k <= 26 inside one chain.
pub const MIXED_GAP: usize = 13;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    Function(Family),
    BalancedChain,
    ConstantChain,
    MixedChain,
}

impl FromStr for Generator {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "balanced-chain" => Generator::BalancedChain,
            "constant-chain" => Generator::ConstantChain,
            "mixed-chain" => Generator::MixedChain,
            _ => Generator::Function(s.parse().with_context(|| format!("unknown family {s:?}"))?),
        })
    }
}

/// Fixed inputs with their noise-free outputs.
pub struct Problem {
    pub x: BitMatrix,
    pub truth: BitVector,
    pub target: TargetFunction,
}

fn from_layout(l: Layout) -> Problem {
    Problem { truth: l.truth(), x: l.inputs, target: l.target }
}

pub fn build(family: &str, r: Option<usize>, n: Option<usize>, seed: u64, cfg: &mut RunConfig) -> Result<Problem> {
    let generator: Generator = family.parse()?;
    cfg.set("family", family);
    let problem = match generator {
        Generator::Function(f) => {
            let Some(r) = r else { bail!("--r is required for family {family}") };
            let n = match n {
                Some(n) => n,
                None if r <= 24 => 1 << r,
                None => bail!("--n is required when r > 24"),
            };
            let x = sample_inputs(r, n, rng::derive(seed, &[label::GENERATE]))?;
            let target = TargetFunction::from_family_on(&f, &x)?;
            let truth = target.evaluate_all(&x)?;
            Problem { x, truth, target }
        }
        chain => {
            if r.is_some() {
                bail!("--r is fixed by the layout for family {family}; omit it");
            }
            let Some(n) = n else { bail!("--n is required for family {family}") };
            match chain {
                Generator::BalancedChain => from_layout(balanced_chain(n)?),
                Generator::ConstantChain => from_layout(constant_chain(n, false)?),
                _ => {
                    if n < 2 {
                        bail!("mixed-chain needs n >= 2");
                    }
                    from_layout(mixed_chains(n / 2, n - n / 2, MIXED_GAP)?)
                }
            }
        }
    };
    cfg.set("r", problem.x.n_cols()).set("n", problem.x.n_rows());
    Ok(problem)
}

/// The single generated training draw `f(X) xor z`.
pub fn noisy_outputs(truth: &BitVector, p: f64, seed: u64) -> BitVector {
    paired_outputs(truth, p, rng::derive(seed, &[label::GENERATE]), 0).0
}

/// Inputs and observed outputs from a file, or from a generator at noise `p`.
pub fn observed(source: &SourceArgs, p: f64, seed: u64, cfg: &mut RunConfig) -> Result<(BitMatrix, BitVector)> {
    if let Some(path) = &source.dataset {
        let d = Dataset::load(path).with_context(|| format!("reading {}", path.display()))?;
        cfg.set("dataset", path.display()).set("r", d.r()).set("n", d.n());
        return Ok((d.inputs, d.outputs));
    }
    let family = source.family.as_deref().expect("clap requires a source");
    let problem = build(family, source.r, source.n, seed, cfg)?;
    cfg.set("seed", seed);
    let y = noisy_outputs(&problem.truth, p, seed);
    Ok((problem.x, y))
}

/// Inputs and the target function. A dataset's outputs are taken as `f`.
pub fn target(source: &SourceArgs, seed: u64, cfg: &mut RunConfig) -> Result<Problem> {
    if let Some(path) = &source.dataset {
        let d = Dataset::load(path).with_context(|| format!("reading {}", path.display()))?;
        cfg.set("dataset", path.display()).set("r", d.r()).set("n", d.n());
        let target = TargetFunction::from_pairs(d.r(), d.inputs.rows().iter().zip(d.outputs.iter()))
            .context("dataset outputs are used as f, so repeated inputs must agree")?;
        return Ok(Problem { x: d.inputs, truth: d.outputs, target });
    }
    let family = source.family.as_deref().expect("clap requires a source");
    build(family, source.r, source.n, seed, cfg)
}
