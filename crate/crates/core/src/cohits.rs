//! Topic-seeded CO-HITS reinforcement over the expert collaboration graph.
//!
//! For each topic the authority vector `a` (expert positions) and hub
//! vector `h` (document positions) start from the topic weights of the
//! vector space model and are updated `k` times:
//!
//! ```text
//! a ← (1 − λx)·a + λx·((Mᵀ·h) ⊘ c_d)
//! h ← (1 − λd)·h + λd·((M·a) ⊘ c_x)      (uses the a just computed)
//! a, h ← a/‖a‖₂, h/‖h‖₂
//! ```
//!
//! `⊘` is element-wise division applied after the product. The final `a`,
//! read at expert positions, is one column of the reinforced expert-topic
//! matrix.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ecg::Ecg;
use crate::error::{Error, Result};
use crate::matrices::{Role, WeightMatrix};
use crate::sparse::CsrMatrix;
use crate::vocab::Vocabulary;

/// Vectors with an L2 norm at or below this are left as they are.
pub const NORM_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HubInit {
    /// L2-normalized document weights of the topic.
    #[default]
    Nvsm,
    /// 1 at every document position, not normalized.
    UniformDocs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AuthorityInit {
    /// L2-normalized expert weights of the topic.
    #[default]
    Nvsm,
    /// 1 at every expert position, not normalized.
    UniformExperts,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoHitsParams {
    pub lambda_x: f64,
    pub lambda_d: f64,
    pub iterations: usize,
    pub hub_init: HubInit,
    pub authority_init: AuthorityInit,
}

impl Default for CoHitsParams {
    fn default() -> Self {
        CoHitsParams {
            lambda_x: 1.0,
            lambda_d: 0.7,
            iterations: 5,
            hub_init: HubInit::Nvsm,
            authority_init: AuthorityInit::Nvsm,
        }
    }
}

impl CoHitsParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("lambda_x", self.lambda_x), ("lambda_d", self.lambda_d)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Config(format!("{name} must lie in [0, 1], got {v}")));
            }
        }
        if self.iterations == 0 {
            return Err(Error::Config("iterations must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationState {
    /// Authority scores, nonzero only at expert positions.
    pub authority: Vec<f64>,
    /// Hub scores, nonzero only at document positions.
    pub hub: Vec<f64>,
    pub iteration: usize,
}

impl IterationState {
    pub fn is_zero(&self) -> bool {
        self.authority.iter().chain(&self.hub).all(|&v| v == 0.0)
    }

    fn is_finite(&self) -> bool {
        self.authority
            .iter()
            .chain(&self.hub)
            .all(|v| v.is_finite())
    }
}

pub fn l2_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn l2_normalize(v: &[f64]) -> Vec<f64> {
    let norm = l2_norm(v);
    if norm > NORM_EPSILON {
        v.iter().map(|x| x / norm).collect()
    } else {
        v.to_vec()
    }
}

/// Initial state from per-expert and per-document topic weights.
pub fn seed_from_weights(
    expert_weights: &[f64],
    doc_weights: &[f64],
    ecg: &Ecg,
    params: &CoHitsParams,
) -> IterationState {
    let authority = match params.authority_init {
        AuthorityInit::Nvsm => l2_normalize(&ecg.embed_experts(expert_weights)),
        AuthorityInit::UniformExperts => ecg.embed_experts(&vec![1.0; ecg.num_experts()]),
    };
    let hub = match params.hub_init {
        HubInit::Nvsm => l2_normalize(&ecg.embed_documents(doc_weights)),
        HubInit::UniformDocs => ecg.embed_documents(&vec![1.0; ecg.num_documents()]),
    };
    IterationState {
        authority,
        hub,
        iteration: 0,
    }
}

/// Initial state for topic column `topic`.
pub fn seed(
    topic: usize,
    etopm: &WeightMatrix,
    dtopm: &WeightMatrix,
    ecg: &Ecg,
    params: &CoHitsParams,
) -> Result<IterationState> {
    if topic >= etopm.cols() || topic >= dtopm.cols() {
        return Err(Error::UnknownTopic(format!("#{topic}")));
    }
    check_dimensions(etopm, dtopm, ecg)?;
    Ok(seed_from_weights(
        &etopm.column(topic),
        &dtopm.column(topic),
        ecg,
        params,
    ))
}

/// Un-normalized authority update from the previous authority and hub.
pub fn update_authority(
    authority: &[f64],
    hub: &[f64],
    transpose: &CsrMatrix,
    c_d: &[f64],
    lambda_x: f64,
) -> Vec<f64> {
    let pulled = transpose.matvec(hub);
    authority
        .iter()
        .zip(&pulled)
        .zip(c_d)
        .map(|((&prev, &num), &den)| (1.0 - lambda_x) * prev + lambda_x * (num / den))
        .collect()
}

/// Un-normalized hub update from the previous hub and the new authority.
pub fn update_hub(
    hub: &[f64],
    authority: &[f64],
    adjacency: &CsrMatrix,
    c_x: &[f64],
    lambda_d: f64,
) -> Vec<f64> {
    let pushed = adjacency.matvec(authority);
    hub.iter()
        .zip(&pushed)
        .zip(c_x)
        .map(|((&prev, &num), &den)| (1.0 - lambda_d) * prev + lambda_d * (num / den))
        .collect()
}

/// One un-normalized update of both vectors.
pub fn step(
    state: &IterationState,
    adjacency: &CsrMatrix,
    transpose: &CsrMatrix,
    c_x: &[f64],
    c_d: &[f64],
    lambda_x: f64,
    lambda_d: f64,
) -> IterationState {
    let authority = update_authority(&state.authority, &state.hub, transpose, c_d, lambda_x);
    let hub = update_hub(&state.hub, &authority, adjacency, c_x, lambda_d);
    IterationState {
        authority,
        hub,
        iteration: state.iteration + 1,
    }
}

/// `k` rounds of step-then-normalize starting from `state`.
pub fn iterate(
    state: IterationState,
    ecg: &Ecg,
    params: &CoHitsParams,
) -> Result<IterationState, usize> {
    let (c_x, c_d) = ecg.count_vectors();
    let mut state = state;
    for _ in 0..params.iterations {
        let next = step(
            &state,
            ecg.adjacency(),
            ecg.adjacency_transpose(),
            c_x,
            c_d,
            params.lambda_x,
            params.lambda_d,
        );
        state = IterationState {
            authority: l2_normalize(&next.authority),
            hub: l2_normalize(&next.hub),
            iteration: next.iteration,
        };
        if !state.is_finite() {
            return Err(state.iteration);
        }
    }
    Ok(state)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicDiagnostics {
    pub topic: String,
    pub iterations: usize,
    pub zero_seed: bool,
    pub authority_norm: f64,
    pub hub_norm: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reinforcement {
    pub retopm: WeightMatrix,
    pub diagnostics: Vec<TopicDiagnostics>,
}

impl Reinforcement {
    pub fn zero_seed_count(&self) -> usize {
        self.diagnostics.iter().filter(|d| d.zero_seed).count()
    }

    /// One JSON object per topic, newline-terminated.
    pub fn diagnostics_jsonl(&self) -> String {
        let mut out = String::new();
        for d in &self.diagnostics {
            out.push_str(&serde_json::to_string(d).expect("diagnostics serialize"));
            out.push('\n');
        }
        out
    }
}

fn check_dimensions(etopm: &WeightMatrix, dtopm: &WeightMatrix, ecg: &Ecg) -> Result<()> {
    if etopm.rows() != ecg.num_experts() {
        return Err(Error::Dimension(format!(
            "ETopM has {} rows but the graph has {} experts",
            etopm.rows(),
            ecg.num_experts()
        )));
    }
    if dtopm.rows() != ecg.num_documents() {
        return Err(Error::Dimension(format!(
            "DTopM has {} rows but the graph has {} documents",
            dtopm.rows(),
            ecg.num_documents()
        )));
    }
    if etopm.cols() != dtopm.cols() {
        return Err(Error::Dimension(format!(
            "ETopM has {} topics but DTopM has {}",
            etopm.cols(),
            dtopm.cols()
        )));
    }
    Ok(())
}

/// Reinforce every topic on the current rayon pool.
pub fn reinforce(
    etopm: &WeightMatrix,
    dtopm: &WeightMatrix,
    ecg: &Ecg,
    topics: &Vocabulary,
    params: &CoHitsParams,
) -> Result<Reinforcement> {
    params.validate()?;
    check_dimensions(etopm, dtopm, ecg)?;
    if topics.len() != etopm.cols() {
        return Err(Error::Dimension(format!(
            "{} topic labels for {} columns",
            topics.len(),
            etopm.cols()
        )));
    }
    // topic-major copies so each column is a cheap row read
    let expert_cols = etopm.matrix().transpose();
    let doc_cols = dtopm.matrix().transpose();

    let results: Vec<(Vec<f64>, TopicDiagnostics)> = (0..topics.len())
        .into_par_iter()
        .map(|t| {
            let state = seed_from_weights(
                &expert_cols.row_dense(t),
                &doc_cols.row_dense(t),
                ecg,
                params,
            );
            let zero_seed = state.is_zero();
            let state = iterate(state, ecg, params).map_err(|iteration| Error::NonFinite {
                topic: topics.key(t).to_string(),
                iteration,
            })?;
            let diagnostics = TopicDiagnostics {
                topic: topics.key(t).to_string(),
                iterations: state.iteration,
                zero_seed,
                authority_norm: l2_norm(&state.authority),
                hub_norm: l2_norm(&state.hub),
            };
            Ok((ecg.project_experts(&state.authority), diagnostics))
        })
        .collect::<Result<_>>()?;

    let mut triplets = Vec::new();
    let mut diagnostics = Vec::with_capacity(results.len());
    for (t, (column, diag)) in results.into_iter().enumerate() {
        triplets.extend(column.into_iter().enumerate().map(|(x, v)| (x, t, v)));
        diagnostics.push(diag);
    }
    let matrix = CsrMatrix::from_triplets(ecg.num_experts(), topics.len(), triplets)?;
    Ok(Reinforcement {
        retopm: WeightMatrix::new(Role::RETopM, matrix),
        diagnostics,
    })
}

/// [`reinforce`] on a dedicated pool of `threads` workers.
pub fn reinforce_with_threads(
    etopm: &WeightMatrix,
    dtopm: &WeightMatrix,
    ecg: &Ecg,
    topics: &Vocabulary,
    params: &CoHitsParams,
    threads: usize,
) -> Result<Reinforcement> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    pool.install(|| reinforce(etopm, dtopm, ecg, topics, params))
}
