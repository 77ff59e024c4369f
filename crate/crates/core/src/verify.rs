//! A battery of checks, one group per theorem, each labelled by the method
//! used: closed form, exhaustive enumeration, or Monte Carlo against a
//! tolerance of `sigmas` standard errors.

use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::bits::{BitMatrix, BitVector};
use crate::black_box::geometry::{balanced_chain, constant_chain, mixed_chains, Layout};
use crate::black_box::{paired_outputs, repeat_input_bound, Family, InputDistribution, TargetFunction};
use crate::error::Result;
use crate::error_theory::{
    check_theorem6, combine_theorem3, enumerate_expected_errors, expected_rates_malpha, expected_rates_mbeta,
    simulate_errors, simulate_independent_processes,
};
use crate::knn::{
    count_ones, MemorizerModel, Neighborhoods, OracleModel, TrainingPredictor, VotingConfig, VotingModel,
};
use crate::rng::{self, label};
use crate::scalar::{exact, Scalar};
use crate::stability::{
    best_case_pk, flip_probability, instability_from_profiles, limit_stability_theorem10, limit_tau_i,
    limit_vote_one_prob, vote_one_prob, worst_case_pk, KSize, LimitVerdict, NeighborhoodProfile,
};
use crate::stats::{run_trials, Estimate};

pub const THEOREM_COUNT: u8 = 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    ClosedForm,
    Enumeration,
    MonteCarlo,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ClosedForm => "closed_form",
            Method::Enumeration => "enumeration",
            Method::MonteCarlo => "montecarlo",
        })
    }
}

/// Deliberate defects for checking that the battery notices them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Every voting model outputs the negation of its vote.
    InvertVote,
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub trials: usize,
    pub seed: u64,
    pub sigmas: f64,
    pub fault: Option<Fault>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { trials: 10_000, seed: 0, sigmas: 3.0, fault: None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub theorem: u8,
    pub method: Method,
    pub name: String,
    pub statistic: String,
    pub passed: bool,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    /// `(theorem, all of its checks passed)` for theorems 1 to 15.
    pub fn theorem_verdicts(&self) -> Vec<(u8, bool)> {
        (1..=THEOREM_COUNT).map(|t| (t, self.checks.iter().filter(|c| c.theorem == t).all(|c| c.passed))).collect()
    }

    pub fn passed_theorems(&self) -> usize {
        self.theorem_verdicts().iter().filter(|(_, ok)| *ok).count()
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// A voting model with the configured fault, if any, applied.
struct Voter<'a> {
    inner: &'a dyn TrainingPredictor,
    fault: Option<Fault>,
}

impl TrainingPredictor for Voter<'_> {
    fn name(&self) -> String {
        match self.fault {
            Some(Fault::InvertVote) => format!("{}_inverted", self.inner.name()),
            None => self.inner.name(),
        }
    }

    fn n(&self) -> usize {
        self.inner.n()
    }

    fn predict_training(&self, y: &BitVector) -> BitVector {
        let pred = self.inner.predict_training(y);
        match self.fault {
            Some(Fault::InvertVote) => pred.negate(),
            None => pred,
        }
    }
}

struct Battery<'a> {
    cfg: &'a VerifyConfig,
    checks: Vec<Check>,
}

/// Worst `|z|` over a group of Monte Carlo comparisons.
#[derive(Default)]
struct ZTracker {
    worst: f64,
    at: String,
}

impl ZTracker {
    fn add(&mut self, est: &Estimate, target: f64, label: impl fmt::Display) {
        let z = est.sigmas_from(target).abs();
        if z > self.worst || self.at.is_empty() {
            self.worst = z;
            self.at = format!("{label}: mean {:.6} vs {:.6}", est.mean, target);
        }
    }

    fn statistic(&self) -> String {
        format!("max |z| = {:.3} ({})", self.worst, self.at)
    }
}

fn parity_setting(r: usize) -> Result<(BitMatrix, TargetFunction, BitVector)> {
    let x = BitMatrix::all_inputs(r)?;
    let f = TargetFunction::from_family(&Family::Parity, r)?;
    let truth = f.evaluate_all(&x)?;
    Ok((x, f, truth))
}

fn poly(coeffs: &[i64], p: &BigRational) -> BigRational {
    coeffs.iter().enumerate().fold(BigRational::zero(), |acc, (i, &c)| acc + exact(c, 1) * p.powi(i))
}

/// `(p, rho, t)` triples whose `tau` sits at least 0.1 from `t`.
pub fn limit_triples() -> Vec<(f64, f64, f64)> {
    let mut out = Vec::new();
    for &p in &[0.05f64, 0.1, 0.2, 0.3, 0.4] {
        for &rho in &[0.0, 0.2, 0.4, 0.6, 0.8, 1.0] {
            for &t in &[0.3, 0.5, 0.7] {
                let tau = p + rho - 2.0 * p * rho;
                if (tau - t).abs() >= 0.1 {
                    out.push((p, rho, t));
                }
            }
        }
    }
    out
}

impl Battery<'_> {
    fn stream(&self, theorem: u64, sub: u64) -> u64 {
        rng::derive(self.cfg.seed, &[label::VERIFY, theorem, sub])
    }

    fn push(&mut self, theorem: u8, method: Method, name: &str, statistic: String, passed: bool) {
        self.checks.push(Check { theorem, method, name: name.to_string(), statistic, passed });
    }

    fn voting<'m>(&self, model: &'m dyn TrainingPredictor) -> Voter<'m> {
        Voter { inner: model, fault: self.cfg.fault }
    }

    fn theorem1(&mut self) -> Result<()> {
        let ns = [1usize, 2, 4, 8, 16, 32];
        let mut z = ZTracker::default();
        let mut ok = true;
        let mut exact_gap: f64 = 0.0;
        for r in 2..=4 {
            let d = InputDistribution::uniform(r)?;
            for &n in &ns {
                let bound: f64 = repeat_input_bound(r, n)?;
                let est = d
                    .estimate_miss_probability(n, self.cfg.trials, self.stream(1, (r * 100 + n) as u64))
                    .under_bernoulli_null(bound);
                ok &= est.within_sigmas(bound, self.cfg.sigmas);
                z.add(&est, bound, format!("r={r} n={n}"));
                exact_gap = exact_gap.max((d.expected_miss_probability(n) - bound).abs());
            }
        }
        self.push(1, Method::MonteCarlo, "uniform D: E(p*) equals the bound", z.statistic(), ok);
        self.push(
            1,
            Method::ClosedForm,
            "uniform D: direct sum equals the bound",
            format!("max |sum - bound| = {exact_gap:.3e}"),
            exact_gap <= 1e-12,
        );

        let mut worst = (f64::NEG_INFINITY, 0, 0);
        let mut first_violation = None;
        for r in 2..=4 {
            let d = InputDistribution::skewed(r, 0.9)?;
            for n in 1..=32 {
                let excess = d.expected_miss_probability(n) - repeat_input_bound::<f64>(r, n)?;
                if excess > worst.0 {
                    worst = (excess, r, n);
                }
                if excess > 1e-12 && first_violation.is_none() {
                    first_violation = Some((r, n));
                }
            }
        }
        let statistic = match first_violation {
            Some((r, n)) => {
                format!("bound exceeded from r={r} n={n}; largest excess {:.4} at r={} n={}", worst.0, worst.1, worst.2)
            }
            None => format!("largest sum - bound = {:.4e}", worst.0),
        };
        self.push(
            1,
            Method::ClosedForm,
            "skewed D (one point of mass 0.9): direct sum <= bound",
            statistic,
            first_violation.is_none(),
        );

        let mut ok = true;
        let mut worst = (f64::NEG_INFINITY, String::new());
        for r in 2..=4 {
            let d = InputDistribution::skewed(r, 0.9)?;
            for &n in &ns {
                let bound: f64 = repeat_input_bound(r, n)?;
                let est = d
                    .estimate_miss_probability(n, self.cfg.trials, self.stream(1, (1000 + r * 100 + n) as u64))
                    .under_bernoulli_null(bound);
                let excess = est.excess_sigmas(bound);
                ok &= excess <= self.cfg.sigmas;
                if excess > worst.0 {
                    worst = (excess, format!("r={r} n={n}: mean {:.6} vs bound {bound:.6}", est.mean));
                }
            }
        }
        self.push(
            1,
            Method::MonteCarlo,
            "skewed D: estimate <= bound",
            format!("largest (estimate - bound) / stderr = {:.3} ({})", worst.0, worst.1),
            ok,
        );
        Ok(())
    }

    fn theorem2(&mut self) -> Result<()> {
        let (x, _, truth) = parity_setting(6)?;
        let mut ok = true;
        let mut worst = f64::NEG_INFINITY;
        for k in [1, 3, 5] {
            let base = VotingModel::new(&x, VotingConfig::<f64>::majority(k)?)?;
            let model = self.voting(&base);
            let s = simulate_errors(&model, &truth, 0.2, self.cfg.trials, self.stream(2, k as u64))?;
            ok &= s.satisfies_bound(self.cfg.sigmas);
            worst = worst.max(s.bound_gap.excess_sigmas(0.0));
        }
        self.push(
            2,
            Method::MonteCarlo,
            "parity r=6, m_1/m_3/m_5: |e_c| <= |e_t| + |e_s|",
            format!("largest (|e_c| - |e_t| - |e_s|) / stderr = {worst:.3}"),
            ok,
        );

        let x = BitMatrix::all_inputs(3)?;
        let truth = TargetFunction::from_family(&Family::Majority, 3)?.evaluate_all(&x)?;
        let p = exact(1, 5);
        let mut ok = true;
        let mut slack = Vec::new();
        for k in [1, 3, 5] {
            let base = VotingModel::new(&x, VotingConfig::<BigRational>::majority(k)?)?;
            let model = self.voting(&base);
            let e = enumerate_expected_errors(&model, &truth, &p)?;
            let gap = e.e_t.clone() + e.e_s.clone() - e.e_c.clone();
            ok &= gap >= BigRational::zero();
            slack.push(format!("k={k}: {}", gap.approx()));
        }
        self.push(
            2,
            Method::Enumeration,
            "majority r=3, p=1/5: exact E|e_c| <= E|e_t| + E|e_s|",
            format!("bound slack {}", slack.join(", ")),
            ok,
        );
        Ok(())
    }

    fn theorem3(&mut self) -> Result<()> {
        let mut ok = true;
        let mut z = ZTracker::default();
        for (j, (pt, ps)) in [(0.1, 0.1), (0.1, 0.3), (0.3, 0.1), (0.3, 0.3)].into_iter().enumerate() {
            let est = simulate_independent_processes(100, pt, ps, self.cfg.trials, self.stream(3, j as u64))?;
            let target = combine_theorem3(&(100.0 * pt), &(100.0 * ps), 100)?;
            ok &= est.within_sigmas(target, self.cfg.sigmas);
            z.add(&est, target, format!("p_t={pt} p_s={ps}"));
        }
        self.push(3, Method::MonteCarlo, "independent e_t, e_s: |e_t xor e_s| matches", z.statistic(), ok);

        let mut ok = true;
        for i in 0..=20 {
            let p = exact(i, 20);
            for e in [expected_rates_malpha(&p, 50)?, expected_rates_mbeta(&p, 50)?] {
                ok &= combine_theorem3(&e.e_t, &e.e_s, 50)? == e.e_c;
            }
        }
        self.push(
            3,
            Method::ClosedForm,
            "m_alpha and m_beta: combination equals E|e_c| exactly",
            "21 rational p values".into(),
            ok,
        );
        Ok(())
    }

    fn theorem4(&mut self) -> Result<()> {
        let (x, f, truth) = parity_setting(6)?;
        let mut ok = true;
        let mut z = ZTracker::default();
        for (j, &p) in [0.1, 0.3, 0.7].iter().enumerate() {
            let model = OracleModel::new(&f, &p, &x)?;
            let s = simulate_errors(&model, &truth, p, self.cfg.trials, self.stream(4, j as u64))?;
            let target = 64.0 * p.min(1.0 - p);
            ok &= s.e_c.within_sigmas(target, self.cfg.sigmas) && s.e_s.mean == 0.0;
            z.add(&s.e_c, target, format!("p={p}"));
        }
        self.push(4, Method::MonteCarlo, "m_alpha: E|e_c| = n min(p, 1-p), e_s = 0", z.statistic(), ok);

        let (x, f, truth) = parity_setting(2)?;
        let mut ok = true;
        for (a, b) in [(1, 5), (1, 2), (4, 5)] {
            let p = exact(a, b);
            let model = OracleModel::new(&f, &p, &x)?;
            ok &= enumerate_expected_errors(&model, &truth, &p)? == expected_rates_malpha(&p, 4)?;
        }
        self.push(4, Method::Enumeration, "m_alpha: exact expectations match", "p in {1/5, 1/2, 4/5}".into(), ok);
        Ok(())
    }

    fn theorem5(&mut self) -> Result<()> {
        let truth = parity_setting(6)?.2;
        let mut ok = true;
        let mut z = ZTracker::default();
        for (j, &p) in [0.1, 0.3].iter().enumerate() {
            let s = simulate_errors(&MemorizerModel::new(64), &truth, p, self.cfg.trials, self.stream(5, j as u64))?;
            let target = 64.0 * 2.0 * p * (1.0 - p);
            ok &= s.e_c.within_sigmas(target, self.cfg.sigmas) && s.e_s.within_sigmas(target, self.cfg.sigmas);
            ok &= s.max_e_t == 0;
            z.add(&s.e_c, target, format!("e_c p={p}"));
            z.add(&s.e_s, target, format!("e_s p={p}"));
        }
        self.push(5, Method::MonteCarlo, "m_beta: E|e_c| = E|e_s| = 2np(1-p)", z.statistic(), ok);

        let truth = BitVector::from_bits(&[0, 1, 1, 0, 1]);
        let mut ok = true;
        for (a, b) in [(0, 1), (1, 10), (3, 10), (1, 2), (1, 1)] {
            let p = exact(a, b);
            ok &= enumerate_expected_errors(&MemorizerModel::new(5), &truth, &p)? == expected_rates_mbeta(&p, 5)?;
        }
        self.push(5, Method::Enumeration, "m_beta: exact expectations match", "n=5, five p values".into(), ok);
        Ok(())
    }

    fn theorem6(&mut self) -> Result<()> {
        let mut identity = true;
        let mut order = true;
        for i in 0..=100 {
            let c = check_theorem6(&exact(i, 100))?;
            identity &= c.residual.is_zero();
            order &= c.p_beta >= c.p_alpha && ((c.p_beta == c.p_alpha) == (i == 0 || i == 50 || i == 100));
        }
        self.push(
            6,
            Method::ClosedForm,
            "p_beta = 2 p_alpha - 2 p_alpha^2 on 101 rational points",
            "residual exactly zero".into(),
            identity,
        );
        self.push(
            6,
            Method::ClosedForm,
            "p_beta >= p_alpha, equal only at 0, 1/2, 1",
            "101 rational points".into(),
            order,
        );
        Ok(())
    }

    fn theorem7(&mut self) -> Result<()> {
        let (x, _, truth) = parity_setting(6)?;
        let base = VotingModel::new(&x, VotingConfig::<f64>::majority(1)?)?;
        let model = self.voting(&base);
        let s = simulate_errors(&model, &truth, 0.3, self.cfg.trials, self.stream(7, 0))?;
        self.push(
            7,
            Method::MonteCarlo,
            "m_1 on distinct rows: |e_t| = 0 on every draw",
            format!("largest |e_t| = {}", s.max_e_t),
            s.max_e_t == 0,
        );

        let x = BitMatrix::all_inputs(3)?;
        let base = VotingModel::new(&x, VotingConfig::<f64>::majority(1)?)?;
        let model = self.voting(&base);
        let mismatches = (0..1u64 << 8)
            .filter(|&code| {
                let y = BitVector::from_index(code, 8);
                model.predict_training(&y) != y
            })
            .count();
        self.push(
            7,
            Method::Enumeration,
            "m_1 reproduces every one of the 256 output vectors",
            format!("{mismatches} mismatches"),
            mismatches == 0,
        );
        Ok(())
    }

    fn chain_instability(&mut self, theorem: u8, layout: &Layout, p: f64, sub: u64) -> Result<(Estimate, f64)> {
        let truth = layout.truth();
        let base = VotingModel::new(&layout.inputs, VotingConfig::<f64>::majority(3)?)?;
        let profiles: Vec<NeighborhoodProfile> = (0..truth.len())
            .map(|i| NeighborhoodProfile::new(3, count_ones(&truth, base.neighborhoods().of(i))))
            .collect::<Result<_>>()?;
        let target = instability_from_profiles(&profiles, &p, &0.5)?.expected_instability;
        let model = self.voting(&base);
        let s = simulate_errors(&model, &truth, p, self.cfg.trials, self.stream(theorem as u64, sub))?;
        Ok((s.e_s, target))
    }

    fn theorem8(&mut self) -> Result<()> {
        let layout = constant_chain(300, false)?;
        let (est, _) = self.chain_instability(8, &layout, 0.1, 0)?;
        let target = 300.0 * flip_probability(&0.028);
        let mut z = ZTracker::default();
        z.add(&est, target, "n=300 p=0.1");
        self.push(
            8,
            Method::MonteCarlo,
            "unanimous 3-neighborhoods: E|e_s| = 2nP(1-P), P = 0.028",
            z.statistic(),
            est.within_sigmas(target, self.cfg.sigmas),
        );

        let mut ok = true;
        for i in 0..=20 {
            let p = exact(i, 20);
            ok &= best_case_pk(KSize::Finite(3), &p)? == poly(&[0, 0, 3, -2], &p);
            ok &= best_case_pk(KSize::Finite(5), &p)? == poly(&[0, 0, 0, 10, -15, 6], &p);
        }
        self.push(8, Method::ClosedForm, "P_3 and P_5 best-case polynomials", "21 rational p values".into(), ok);

        let mut ok = true;
        for i in 1..50 {
            let p = exact(i, 100);
            let mut prev = BigRational::from_integer(2.into());
            for k in (1..=15).step_by(2) {
                let pk = best_case_pk(KSize::Finite(k), &p)?;
                ok &= pk <= prev;
                prev = pk;
            }
            ok &= best_case_pk(KSize::Infinite, &p)?.is_zero();
        }
        self.push(
            8,
            Method::ClosedForm,
            "best case grows more stable with k, limit 0 for p < 1/2",
            "odd k <= 15, 49 p values".into(),
            ok,
        );
        Ok(())
    }

    fn theorem9(&mut self) -> Result<()> {
        let layout = balanced_chain(300)?;
        let (est, _) = self.chain_instability(9, &layout, 0.1, 0)?;
        let target = 300.0 * flip_probability(&0.172);
        let mut z = ZTracker::default();
        z.add(&est, target, "n=300 p=0.1");
        self.push(
            9,
            Method::MonteCarlo,
            "balanced 3-neighborhoods: E|e_s| = 2nP(1-P), P = 0.172",
            z.statistic(),
            est.within_sigmas(target, self.cfg.sigmas),
        );

        let mut ok = true;
        for i in 0..=20 {
            let p = exact(i, 20);
            ok &= worst_case_pk(KSize::Finite(3), &p)? == poly(&[0, 2, -3, 2], &p);
            ok &= worst_case_pk(KSize::Finite(5), &p)? == poly(&[0, 3, -9, 16, -15, 6], &p);
        }
        self.push(9, Method::ClosedForm, "P_3 and P_5 worst-case polynomials", "21 rational p values".into(), ok);

        let mut ok = true;
        for i in 1..50 {
            let p = exact(i, 100);
            for k in (3..=11).step_by(2) {
                let flips: Vec<BigRational> = (0..=k)
                    .map(|s| vote_one_prob(k, s, &p, &exact(1, 2)).map(|v| flip_probability(&v)))
                    .collect::<Result<_>>()?;
                let max = flips.iter().max().expect("nonempty");
                let min = flips.iter().min().expect("nonempty");
                ok &= flips[(k - 1) / 2] == *max && flips[k.div_ceil(2)] == *max;
                ok &= flips[0] == *min && flips[k] == *min;
            }
        }
        self.push(
            9,
            Method::ClosedForm,
            "flip rate is largest at s = (k +- 1)/2, smallest at s in {0, k}",
            "odd k <= 11, 49 p values".into(),
            ok,
        );
        Ok(())
    }

    /// Neighbor outputs i.i.d. with rate `tau`: the vote over `k` of them
    /// should approach the step at `t` as `k` grows.
    fn iid_convergence(&self, t: f64) -> Result<(bool, f64)> {
        let mut ok = true;
        let mut worst: f64 = 0.0;
        for &p in &[0.05f64, 0.1, 0.2, 0.3, 0.4] {
            for &pp in &[0.0, 0.1, 0.3, 0.7, 0.9, 1.0] {
                let tau = p + pp - 2.0 * p * pp;
                if (tau - t).abs() < 0.1 {
                    continue;
                }
                let prob = vote_one_prob(201, 0, &tau, &t)?;
                let step = if tau > t { 1.0 } else { 0.0 };
                worst = worst.max((prob - step).abs());
                ok &= (prob - step).abs() <= 0.05;
            }
        }
        Ok((ok, worst))
    }

    fn theorem10(&mut self) -> Result<()> {
        let mut ok = true;
        for a in 0..=20 {
            for b in 0..=20 {
                let v = limit_stability_theorem10(&exact(a, 20), &exact(b, 20), &exact(1, 2), &BigRational::zero())?;
                ok &= (v == LimitVerdict::UnstableBoundary) == (a == 10 || b == 10);
            }
        }
        self.push(
            10,
            Method::ClosedForm,
            "t = 1/2: unstable exactly when p = 1/2 or p' = 1/2",
            "441 rational (p, p') pairs".into(),
            ok,
        );
        let (ok, worst) = self.iid_convergence(0.5)?;
        self.push(
            10,
            Method::ClosedForm,
            "i.i.d. neighborhoods, k = 201: vote probability near the limit",
            format!("largest distance to step = {worst:.4}"),
            ok,
        );
        Ok(())
    }

    fn theorem11(&mut self) -> Result<()> {
        let mut ok = true;
        for t in [exact(1, 4), exact(34, 100), exact(3, 4)] {
            for a in 0..=20 {
                for b in 0..=20 {
                    let (p, pp) = (exact(a, 20), exact(b, 20));
                    let tau = limit_tau_i(&p, &pp)?;
                    let v = limit_stability_theorem10(&p, &pp, &t, &BigRational::zero())?;
                    ok &= (v == LimitVerdict::UnstableBoundary) == (tau == t);
                }
            }
        }
        self.push(
            11,
            Method::ClosedForm,
            "general t: unstable exactly when tau = t",
            "t in {1/4, 34/100, 3/4}".into(),
            ok,
        );
        let mut all = true;
        let mut worst: f64 = 0.0;
        for t in [0.3, 0.7] {
            let (ok, w) = self.iid_convergence(t)?;
            all &= ok;
            worst = worst.max(w);
        }
        self.push(
            11,
            Method::ClosedForm,
            "i.i.d. neighborhoods, t in {0.3, 0.7}, k = 201: near the limit",
            format!("largest distance to step = {worst:.4}"),
            all,
        );
        Ok(())
    }

    fn theorem12(&mut self) -> Result<()> {
        let mut ok = true;
        let mut worst: f64 = 0.0;
        let triples = limit_triples();
        for &(p, rho, t) in &triples {
            let k = 201;
            let s = (rho * k as f64).round() as usize;
            let prob = vote_one_prob(k, s, &p, &t)?;
            let limit = limit_vote_one_prob(&p, &rho, &t)?;
            worst = worst.max((prob - limit).abs());
            ok &= (prob - limit).abs() <= 0.05;
        }
        self.push(
            12,
            Method::ClosedForm,
            "per-instance vote probability at k = 201 near sign(tau_i - t) step",
            format!("{} triples, largest distance {worst:.4}", triples.len()),
            ok,
        );
        Ok(())
    }

    /// Per-instance means of `t_i` and raw `r_i` over noise draws.
    fn unbiasedness(&mut self) -> Result<()> {
        let x = BitMatrix::all_inputs(3)?;
        let truth = TargetFunction::from_family(&Family::Majority, 3)?.evaluate_all(&x)?;
        let (k, p) = (3, 0.2);
        let hoods = Neighborhoods::build(&x, k)?;
        let seed = self.stream(13, 0);
        let counts = run_trials(self.cfg.trials, |trial| {
            let (y, _) = paired_outputs(&truth, p, seed, trial);
            hoods.one_counts(&y).expect("lengths match")
        });
        let (mut ok_t, mut ok_r) = (true, true);
        let (mut zt, mut zr) = (ZTracker::default(), ZTracker::default());
        for i in 0..x.n_rows() {
            let rho = count_ones(&truth, hoods.of(i)) as f64 / k as f64;
            let tau = limit_tau_i(&p, &rho)?;
            let ts: Vec<f64> = counts.iter().map(|c| c[i] as f64 / k as f64).collect();
            let rs: Vec<f64> = ts.iter().map(|t| (t - p) / (1.0 - 2.0 * p)).collect();
            let (et, er) = (Estimate::from_samples(&ts), Estimate::from_samples(&rs));
            ok_t &= et.within_sigmas(tau, self.cfg.sigmas);
            ok_r &= er.within_sigmas(rho, self.cfg.sigmas);
            zt.add(&et, tau, format!("row {i}"));
            zr.add(&er, rho, format!("row {i}"));
        }
        self.push(13, Method::MonteCarlo, "t_i unbiased for tau_i (majority r=3, k=3, p=0.2)", zt.statistic(), ok_t);
        self.push(
            14,
            Method::MonteCarlo,
            "raw r_i unbiased for rho_i (majority r=3, k=3, p=0.2)",
            zr.statistic(),
            ok_r,
        );
        Ok(())
    }

    fn theorem15(&mut self) -> Result<()> {
        let layout = mixed_chains(150, 150, 3)?;
        let mut ok = true;
        let mut z = ZTracker::default();
        for (j, &p) in [0.1, 0.2, 0.3].iter().enumerate() {
            let (est, _) = self.chain_instability(15, &layout, p, j as u64)?;
            let target = 300.0
                * (2.0 * p - 4.0 * p.powi(2) + 12.0 * p.powi(3) - 26.0 * p.powi(4) + 24.0 * p.powi(5)
                    - 8.0 * p.powi(6));
            ok &= est.within_sigmas(target, self.cfg.sigmas);
            z.add(&est, target, format!("p={p}"));
        }
        self.push(15, Method::MonteCarlo, "half unanimous, half balanced: average-case E|e_s|", z.statistic(), ok);

        let shapes: Vec<NeighborhoodProfile> =
            (0..=3).map(|s| NeighborhoodProfile::new(3, s)).collect::<Result<_>>()?;
        let mut ok = true;
        for i in 0..=20 {
            let p = exact(i, 20);
            let r = instability_from_profiles(&shapes, &p, &exact(1, 2))?;
            ok &= r.expected_instability / exact(4, 1) == poly(&[0, 2, -4, 12, -26, 24, -8], &p);
        }
        self.push(
            15,
            Method::ClosedForm,
            "equal shape mix gives 2p - 4p^2 + 12p^3 - 26p^4 + 24p^5 - 8p^6",
            "21 rational p values".into(),
            ok,
        );
        Ok(())
    }
}

/// Runs every check. Failures are report content; only setup problems are
/// returned as errors.
pub fn run(cfg: &VerifyConfig) -> Result<VerifyReport> {
    if cfg.trials < 2 {
        return Err(crate::error::Error::config("verification needs at least 2 trials"));
    }
    let mut b = Battery { cfg, checks: Vec::new() };
    b.theorem1()?;
    b.theorem2()?;
    b.theorem3()?;
    b.theorem4()?;
    b.theorem5()?;
    b.theorem6()?;
    b.theorem7()?;
    b.theorem8()?;
    b.theorem9()?;
    b.theorem10()?;
    b.theorem11()?;
    b.theorem12()?;
    b.unbiasedness()?;
    b.theorem15()?;
    Ok(VerifyReport { checks: b.checks })
}
