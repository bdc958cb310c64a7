//! List learning on a finite instance set `0..n`: the one-inclusion list
//! predictor, its leave-one-out behaviour, the amplified PAC learner, and
//! uniform-convergence measurements for list classes.
//!
//! A task's distribution puts weight `w_x` on the pair `(x, target(x))`.
//! Every experiment uses one root seed; trial `t` draws from the ChaCha
//! stream `t`, so any trial can be replayed alone.

use std::collections::HashSet;

use itertools::Itertools;
use num_rational::BigRational;
use num_bigint::BigInt;
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::class::{HypothesisClass, Label};
use crate::dims::{ds_dimension, graph_dimension, DimensionResult, ListClass};
use crate::error::{Error, Result};
use crate::oig::{build_oig, orient_minmax};

/// Labeled examples `(instance, label)`.
pub type Sample = Vec<(usize, Label)>;

#[derive(Debug, Clone, PartialEq)]
pub struct ConceptTask {
    class: HypothesisClass,
    target: usize,
    weights: Vec<f64>,
    seed: u64,
}

/// Realizable task: instance `x` is drawn with probability proportional to
/// `weights[x]` and labeled by the class member at `target_index`.
pub fn make_task(c: &HypothesisClass, target_index: usize, weights: &[f64], seed: u64) -> Result<ConceptTask> {
    c.require_nonempty()?;
    if target_index >= c.len() {
        return Err(Error::InvalidParameter(format!(
            "target index {target_index} out of range for a class of {} members",
            c.len()
        )));
    }
    if weights.len() != c.n() {
        return Err(Error::InvalidParameter(format!("{} weights given for {} instances", weights.len(), c.n())));
    }
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::InvalidParameter("weights must be finite and nonnegative".into()));
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::InvalidParameter("weights are all zero".into()));
    }
    Ok(ConceptTask {
        class: c.clone(),
        target: target_index,
        weights: weights.iter().map(|w| w / total).collect(),
        seed,
    })
}

impl ConceptTask {
    pub fn class(&self) -> &HypothesisClass {
        &self.class
    }

    pub fn instances(&self) -> usize {
        self.class.n()
    }

    pub fn target(&self) -> &[Label] {
        &self.class.patterns()[self.target]
    }

    pub fn label(&self, x: usize) -> Label {
        self.target()[x]
    }

    /// Normalized instance weights.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `m` i.i.d. labeled draws.
    pub fn sample(&self, m: usize, rng: &mut ChaCha8Rng) -> Sample {
        let dist = WeightedIndex::new(&self.weights).expect("weights validated at construction");
        (0..m)
            .map(|_| {
                let x = dist.sample(rng);
                (x, self.label(x))
            })
            .collect()
    }

    /// `Pr[y ∉ h(x)]` under the task distribution, computed exactly.
    pub fn population_error(&self, h: &ListPredictor) -> f64 {
        (0..self.instances())
            .filter(|&x| !h.contains(x, self.label(x)))
            .map(|x| self.weights[x])
            .fold(0.0, |a, w| a + w)
    }
}

/// Random stream for trial `trial` of an experiment rooted at `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ListPredictor {
    /// Largest list emitted.
    pub ell: usize,
    /// Sorted label list per instance.
    pub lists: Vec<Vec<Label>>,
    pub provenance: String,
}

impl ListPredictor {
    pub fn new(lists: Vec<Vec<Label>>, provenance: impl Into<String>) -> Self {
        let lists: Vec<Vec<Label>> = lists.into_iter().map(|l| l.into_iter().sorted().dedup().collect()).collect();
        ListPredictor { ell: lists.iter().map(Vec::len).max().unwrap_or(0), lists, provenance: provenance.into() }
    }

    pub fn evaluate(&self, x: usize) -> &[Label] {
        &self.lists[x]
    }

    pub fn contains(&self, x: usize, y: Label) -> bool {
        self.lists[x].binary_search(&y).is_ok()
    }

    /// Fraction of the sample whose label is missing from the list.
    pub fn empirical_error(&self, sample: &[(usize, Label)]) -> f64 {
        if sample.is_empty() {
            return 0.0;
        }
        sample.iter().filter(|&&(x, y)| !self.contains(x, y)).count() as f64 / sample.len() as f64
    }
}

/// Source of the large list `μ` that makes samples list-realizable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ListProvider {
    /// Every label at every instance.
    FullAlphabet,
    /// Labels observed at each instance; unobserved instances get the full alphabet.
    SampleSupport,
    /// Fixed lists, validated against a size bound.
    UserSupplied { lists: Vec<Vec<Label>>, max_size: usize },
}

pub fn list_provider(kind: &ListProvider, task: &ConceptTask, sample: &[(usize, Label)]) -> Result<ListPredictor> {
    let n = task.instances();
    let k = task.class().k();
    let full: Vec<Label> = (0..k).collect();
    match kind {
        ListProvider::FullAlphabet => Ok(ListPredictor::new(vec![full; n], "full-alphabet")),
        ListProvider::SampleSupport => {
            let mut lists = vec![Vec::new(); n];
            for &(x, y) in sample {
                if x >= n || y >= k {
                    return Err(Error::InvalidParameter(format!("sample pair ({x}, {y}) out of range")));
                }
                lists[x].push(y);
            }
            for l in lists.iter_mut().filter(|l| l.is_empty()) {
                *l = full.clone();
            }
            Ok(ListPredictor::new(lists, "sample-support"))
        }
        ListProvider::UserSupplied { lists, max_size } => {
            if lists.len() != n {
                return Err(Error::InvalidParameter(format!("{} lists given for {n} instances", lists.len())));
            }
            for (x, l) in lists.iter().enumerate() {
                let distinct = l.iter().unique().count();
                if distinct == 0 || distinct > *max_size || l.iter().any(|&y| y >= k) {
                    return Err(Error::InvalidParameter(format!(
                        "list at instance {x} must hold 1..={max_size} labels below {k}"
                    )));
                }
            }
            Ok(ListPredictor::new(lists.clone(), "user-supplied"))
        }
    }
}

/// Pairs of the sample whose label lies in `μ`'s list.
pub fn filter_realizable(sample: &[(usize, Label)], mu: &ListPredictor) -> Sample {
    sample.iter().copied().filter(|&(x, y)| mu.contains(x, y)).collect()
}

/// One-inclusion list prediction at `x` from sample `s`.
///
/// Repeated instances are merged: in the restriction to a sequence with a
/// repeated point, the directions of the copies carry only singleton edges,
/// which never count towards an ℓ-outdegree, so the graph on distinct
/// instances has the same optimal orientations.
pub fn predict_one_inclusion(
    c: &HypothesisClass,
    mu: &ListPredictor,
    s: &[(usize, Label)],
    x: usize,
    ell: usize,
) -> Result<Vec<Label>> {
    c.require_nonempty()?;
    if ell == 0 {
        return Err(Error::InvalidParameter("list size ℓ must be at least 1".into()));
    }
    if x >= c.n() || s.iter().any(|&(xi, _)| xi >= c.n()) {
        return Err(Error::InvalidParameter("instance index out of range".into()));
    }
    let mut coords: Vec<usize> = Vec::new();
    let mut labels: Vec<Label> = Vec::new();
    for &(xi, yi) in s {
        match coords.iter().position(|&c| c == xi) {
            Some(p) if labels[p] != yi => {
                return Err(Error::Precondition(format!("instance {xi} carries two labels in the sample")));
            }
            Some(_) => {}
            None => {
                coords.push(xi);
                labels.push(yi);
            }
        }
    }
    if let Some(p) = coords.iter().position(|&c| c == x) {
        return Ok(vec![labels[p]]);
    }
    coords.push(x);
    let allowed = |p: &[Label]| coords.iter().zip(p).all(|(&ci, &l)| mu.contains(ci, l));
    let restricted = c.restrict(&coords)?;
    let h = HypothesisClass::new(
        coords.len(),
        c.k(),
        restricted.patterns().iter().filter(|p| allowed(p)).cloned().collect(),
    )?;
    let last = coords.len() - 1;
    let anchor = h
        .patterns()
        .iter()
        .position(|p| p[..last] == labels[..])
        .ok_or_else(|| Error::Precondition("sample is not realizable by the class and the list".into()))?;
    let g = build_oig(&h)?;
    let orientation = orient_minmax(&g, ell);
    let edge = g.edge_of(anchor, last);
    Ok(orientation.lists[edge].iter().map(|&v| h.patterns()[v][last]).collect())
}

/// Full predictor: one-inclusion prediction at every instance.
pub fn train_one_inclusion(
    c: &HypothesisClass,
    mu: &ListPredictor,
    s: &[(usize, Label)],
    ell: usize,
) -> Result<ListPredictor> {
    let lists = (0..c.n()).map(|x| predict_one_inclusion(c, mu, s, x, ell)).collect::<Result<Vec<_>>>()?;
    Ok(ListPredictor::new(lists, format!("one-inclusion(ℓ={ell}, m={})", s.len())))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub epsilon: f64,
    pub delta: f64,
    pub m: usize,
    pub trials: usize,
    pub seed: u64,
    pub ell: usize,
    /// Upper bound on the size of `μ`'s lists; defaults to the provider's.
    pub ell_prime: Option<usize>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let unit = |v: f64| v > 0.0 && v < 1.0;
        if !unit(self.epsilon) || !unit(self.delta) {
            return Err(Error::InvalidParameter("ε and δ must lie in (0, 1)".into()));
        }
        if self.m == 0 || self.trials == 0 || self.ell == 0 {
            return Err(Error::InvalidParameter("m, trials and ℓ must be positive".into()));
        }
        if self.ell_prime.is_some_and(|lp| lp < self.ell) {
            return Err(Error::InvalidParameter("ℓ′ must be at least ℓ".into()));
        }
        Ok(())
    }
}

/// `max(ln x, 1)`.
pub fn log_floor1(x: f64) -> f64 {
    x.ln().max(1.0)
}

/// `ℓ (e d)^{√d} ln(2m)`: the list size of the first-stage learner this
/// crate substitutes with a [`ListProvider`]; informational only.
pub fn theoretical_list_size(ell: usize, d: usize, m: usize) -> f64 {
    let d = d as f64;
    ell as f64 * (std::f64::consts::E * d).powf(d.sqrt()) * (2.0 * m as f64).ln()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LooReport {
    pub m: usize,
    pub trials: usize,
    pub errors: usize,
    pub empirical_error: f64,
    /// `errors / trials` exactly.
    #[serde(serialize_with = "rational_string")]
    pub empirical_ratio: BigRational,
    /// `40 ℓ d max(ln ℓ′, 1) / m`.
    pub bound: f64,
    pub d_used: usize,
    pub ell: usize,
    pub ell_prime_used: usize,
    /// Three binomial standard errors.
    pub margin: f64,
    pub pass: bool,
    pub theoretical_ell_prime: f64,
}

fn rational_string<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl LooReport {
    pub const CSV_HEADER: &'static str = "m,trials,ell,ellPrime,d,errors,empiricalError,margin,bound,pass";

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{:.6},{:.6},{:.6},{}",
            self.m,
            self.trials,
            self.ell,
            self.ell_prime_used,
            self.d_used,
            self.errors,
            self.empirical_error,
            self.margin,
            self.bound,
            self.pass
        )
    }
}

fn resolve_ell_prime(cfg: &ExperimentConfig, mu_size: usize) -> Result<usize> {
    match cfg.ell_prime {
        Some(lp) if lp < mu_size => Err(Error::InvalidParameter(format!(
            "provider emits lists of size {mu_size}, above ℓ′ = {lp}"
        ))),
        Some(lp) => Ok(lp),
        None => Ok(mu_size.max(cfg.ell)),
    }
}

/// Draws `m + 1` examples per trial, trains on the first `m` and records
/// whether the last label is missing from the prediction.
pub fn loo_experiment(task: &ConceptTask, provider: &ListProvider, cfg: &ExperimentConfig) -> Result<LooReport> {
    cfg.validate()?;
    let d = ds_dimension(task.class(), cfg.ell)?.value;
    let outcomes: Vec<Result<(bool, usize)>> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, t);
            let mut sample = task.sample(cfg.m + 1, &mut rng);
            let (x, y) = sample.pop().expect("m + 1 >= 1 draws");
            let mu = list_provider(provider, task, &sample)?;
            let pred = predict_one_inclusion(task.class(), &mu, &sample, x, cfg.ell)?;
            Ok((!pred.contains(&y), mu.ell))
        })
        .collect();
    let mut errors = 0;
    let mut mu_size = 0;
    for o in outcomes {
        let (miss, size) = o?;
        errors += usize::from(miss);
        mu_size = mu_size.max(size);
    }
    let ell_prime = resolve_ell_prime(cfg, mu_size)?;
    let p = errors as f64 / cfg.trials as f64;
    let margin = 3.0 * (p * (1.0 - p) / cfg.trials as f64).sqrt();
    let bound = 40.0 * cfg.ell as f64 * d as f64 * log_floor1(ell_prime as f64) / cfg.m as f64;
    Ok(LooReport {
        m: cfg.m,
        trials: cfg.trials,
        errors,
        empirical_error: p,
        empirical_ratio: BigRational::new(BigInt::from(errors), BigInt::from(cfg.trials)),
        bound,
        d_used: d,
        ell: cfg.ell,
        ell_prime_used: ell_prime,
        margin,
        pass: p + margin <= bound,
        theoretical_ell_prime: theoretical_list_size(cfg.ell, d, cfg.m),
    })
}

/// Multipliers of the chunk and validation sizes of the amplified learner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PacConstants {
    pub chunk: f64,
    pub validation: f64,
}

impl Default for PacConstants {
    fn default() -> Self {
        PacConstants { chunk: 160.0, validation: 32.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PacPlan {
    pub chunks: usize,
    pub chunk_size: usize,
    pub validation_size: usize,
    /// Minimum total sample size.
    pub required: usize,
}

/// `p = ⌈ln(2/δ)⌉` chunks of `⌈c₁ ℓ max(d,1) max(ln ℓ′,1) / ε⌉` examples and a
/// validation split of `⌈c₂ ln(2/δ) / ε + ln(p+1)⌉`.
pub fn pac_plan(ell: usize, d: usize, ell_prime: usize, epsilon: f64, delta: f64, constants: PacConstants) -> PacPlan {
    let l = (2.0 / delta).ln();
    let chunks = l.ceil().max(1.0) as usize;
    let chunk_size =
        (constants.chunk * ell as f64 * d.max(1) as f64 * log_floor1(ell_prime as f64) / epsilon).ceil() as usize;
    let validation_size = (constants.validation * l / epsilon + ((chunks + 1) as f64).ln()).ceil() as usize;
    PacPlan { chunks, chunk_size, validation_size, required: chunks.saturating_mul(chunk_size).saturating_add(validation_size) }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PacOutcome {
    pub predictor: ListPredictor,
    pub plan: PacPlan,
    /// Misses of each candidate on the validation split.
    pub validation_errors: Vec<usize>,
    pub chosen: usize,
    /// Exact population error of the chosen predictor.
    pub test_error: f64,
    pub ell_prime_used: usize,
}

/// Amplified learner on the sample `S` drawn from the task with `cfg.seed`
/// (size `cfg.m`): one-inclusion predictors on disjoint chunks, the one with
/// fewest validation misses wins (lowest chunk index on ties).
pub fn pac_learn(
    task: &ConceptTask,
    provider: &ListProvider,
    cfg: &ExperimentConfig,
    constants: PacConstants,
) -> Result<PacOutcome> {
    cfg.validate()?;
    let d = ds_dimension(task.class(), cfg.ell)?.value;
    pac_learn_with(task, provider, cfg, constants, d, &mut trial_rng(cfg.seed, 0))
}

fn pac_learn_with(
    task: &ConceptTask,
    provider: &ListProvider,
    cfg: &ExperimentConfig,
    constants: PacConstants,
    d: usize,
    rng: &mut ChaCha8Rng,
) -> Result<PacOutcome> {
    let full = task.sample(cfg.m, rng);
    let mu = list_provider(provider, task, &full)?;
    let ell_prime = resolve_ell_prime(cfg, mu.ell)?;
    let plan = pac_plan(cfg.ell, d, ell_prime, cfg.epsilon, cfg.delta, constants);
    if cfg.m < plan.required {
        return Err(Error::InvalidParameter(format!(
            "sample size {} is below the {} needed for {} chunks of {} and a validation split of {}",
            cfg.m, plan.required, plan.chunks, plan.chunk_size, plan.validation_size
        )));
    }
    let sample = filter_realizable(&full, &mu);
    let mut candidates = Vec::with_capacity(plan.chunks);
    for i in 0..plan.chunks {
        let lo = (i * plan.chunk_size).min(sample.len());
        let hi = ((i + 1) * plan.chunk_size).min(sample.len());
        candidates.push(train_one_inclusion(task.class(), &mu, &sample[lo..hi], cfg.ell)?);
    }
    let validation = &sample[(plan.chunks * plan.chunk_size).min(sample.len())..];
    let validation_errors: Vec<usize> = candidates
        .iter()
        .map(|h| validation.iter().filter(|&&(x, y)| !h.contains(x, y)).count())
        .collect();
    let chosen = validation_errors
        .iter()
        .enumerate()
        .min_by_key(|&(i, &e)| (e, i))
        .map(|(i, _)| i)
        .expect("at least one chunk");
    let mut predictor = candidates.swap_remove(chosen);
    predictor.provenance = format!("amplified one-inclusion, chunk {chosen} of {}", plan.chunks);
    let test_error = task.population_error(&predictor);
    Ok(PacOutcome { predictor, plan, validation_errors, chosen, test_error, ell_prime_used: ell_prime })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PacSummary {
    pub trials: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub mean_test_error: f64,
    pub plan: PacPlan,
}

/// Repeats [`pac_learn`] on independent streams and counts runs with
/// population error at most `ε`.
pub fn pac_experiment(
    task: &ConceptTask,
    provider: &ListProvider,
    cfg: &ExperimentConfig,
    constants: PacConstants,
) -> Result<PacSummary> {
    cfg.validate()?;
    let d = ds_dimension(task.class(), cfg.ell)?.value;
    let outcomes: Vec<PacOutcome> = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| pac_learn_with(task, provider, cfg, constants, d, &mut trial_rng(cfg.seed, t)))
        .collect::<Result<_>>()?;
    let successes = outcomes.iter().filter(|o| o.test_error <= cfg.epsilon).count();
    Ok(PacSummary {
        trials: cfg.trials,
        successes,
        success_rate: successes as f64 / cfg.trials as f64,
        mean_test_error: outcomes.iter().map(|o| o.test_error).sum::<f64>() / cfg.trials as f64,
        plan: outcomes[0].plan.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UcReport {
    pub m: usize,
    pub trials: usize,
    /// Mean over trials of `max_c |L_S(c) − L_D(c)|`.
    pub sup_deviation: f64,
    pub graph_dimension: usize,
}

/// Uniform deviation between empirical and population list losses of the
/// members of `c` on samples of size `cfg.m`.
pub fn uc_experiment(c: &ListClass, task: &ConceptTask, cfg: &ExperimentConfig, cap: u128) -> Result<UcReport> {
    if cfg.m == 0 || cfg.trials == 0 {
        return Err(Error::InvalidParameter("m and trials must be positive".into()));
    }
    if c.n() != task.instances() {
        return Err(Error::InvalidParameter("list class and task disagree on the instance count".into()));
    }
    let population: Vec<f64> = (0..c.len())
        .map(|j| {
            (0..c.n())
                .filter(|&x| !c.contains_label(j, x, task.label(x)))
                .map(|x| task.weights()[x])
                .sum()
        })
        .collect();
    let total: f64 = (0..cfg.trials as u64)
        .into_par_iter()
        .map(|t| {
            let sample = task.sample(cfg.m, &mut trial_rng(cfg.seed, t));
            (0..c.len())
                .map(|j| {
                    let misses = sample.iter().filter(|&&(x, y)| !c.contains_label(j, x, y)).count();
                    (misses as f64 / cfg.m as f64 - population[j]).abs()
                })
                .fold(0.0, f64::max)
        })
        .sum();
    Ok(UcReport {
        m: cfg.m,
        trials: cfg.trials,
        sup_deviation: total / cfg.trials as f64,
        graph_dimension: graph_dimension(c, cap)?.value,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProjectionBound {
    pub g: usize,
    pub ell: usize,
    /// `|∪_b A_b|`.
    pub lhs: u128,
    /// `(2ℓ)^g ℓ^g / (4 (2ℓ−1)^g)`.
    #[serde(serialize_with = "rational_string")]
    pub rhs: BigRational,
    pub holds: bool,
}

/// For a graph-shattering witness, counts the label vectors consistent with
/// at least one witness member on the shattered instances.
pub fn verify_projection_bound(c: &ListClass, witness: &DimensionResult, cap: u128) -> Result<ProjectionBound> {
    if !c.verify_graph_witness(witness) {
        return Err(Error::Verification("graph-shattering witness does not verify".into()));
    }
    let coords = witness.witness.indices();
    let g = coords.len();
    let members: Vec<usize> = match &witness.structure {
        crate::dims::Witness::Graph { members, .. } => members.clone(),
        _ => vec![0],
    };
    let work: u128 = members.len() as u128 * (c.ell() as u128).saturating_pow(g as u32);
    crate::class::check_cap("projection enumeration", work, cap)?;
    let mut union: HashSet<Vec<Label>> = HashSet::new();
    for &j in &members {
        let lists: Vec<Vec<Label>> = coords
            .iter()
            .map(|&x| (0..c.k()).filter(|&y| c.contains_label(j, x, y)).collect())
            .collect();
        union.extend(lists.into_iter().multi_cartesian_product());
        if g == 0 {
            union.insert(Vec::new());
        }
    }
    let ell = c.ell();
    let pow = |b: usize| BigInt::from(b).pow(g as u32);
    let rhs = BigRational::new(pow(2 * ell) * pow(ell), BigInt::from(4) * pow(2 * ell - 1));
    let lhs = union.len() as u128;
    Ok(ProjectionBound { g, ell, holds: BigRational::from_integer(BigInt::from(lhs)) >= rhs, lhs, rhs })
}
