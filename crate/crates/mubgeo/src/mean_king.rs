//! Mean King tracking: Alice prepares a line state |P_j⟩, the King measures
//! particle 1 in an undisclosed MUB b, Alice measures in the line-state basis
//! and infers b from her outcome j' = (m̈', m₀').
//!
//! The post-measurement amplitude vanishes unless m₀'−m₀ = b(m̈−m̈') (Fourier
//! b) or m̈' = m̈ (CB), so any outcome with m̈' ≠ m̈ pins b uniquely. The
//! outcome j' = j is compatible with *every* alignment and is reported as
//! ambiguous rather than guessed.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::dapg::{all_lines, LineCoord};
use crate::entangled::line_state_closed;
use crate::linalg::{inner, StateVector};
use crate::mub::{all_bases, mub_state, BasisLabel};
use crate::prime_field::{FieldElem, PrimeDim};
use crate::{Error, TOL_SWEEP};

/// One protocol trial transcript.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeasurementRecord {
    pub prepared: LineCoord,
    pub king_basis: BasisLabel,
    pub king_outcome: FieldElem,
    pub alice_outcome: LineCoord,
}

/// Alice's conclusion about the King's alignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InferenceResult {
    Unique(BasisLabel),
    /// All listed alignments leave nonzero amplitude on the observed outcome.
    Ambiguous(Vec<BasisLabel>),
}

impl InferenceResult {
    pub fn to_json(&self) -> Value {
        match self {
            InferenceResult::Unique(b) => json!({ "kind": "unique", "b": b.label() }),
            InferenceResult::Ambiguous(bs) => json!({
                "kind": "ambiguous",
                "consistent": bs.iter().map(|b| b.label()).collect::<Vec<_>>(),
            }),
        }
    }
}

/// Unnormalized post-measurement state (|m,b⟩₁⟨b,m|₁ ⊗ 𝟙)|P_j⟩. Its squared
/// norm is the Born probability of the King seeing ω^m.
pub fn king_collapse(j: LineCoord, b: BasisLabel, m: FieldElem) -> StateVector {
    let dim = j.dim();
    let d = dim.du();
    let king = mub_state(m, b).vector;
    let p = line_state_closed(j).vector;
    // Contract particle 1, then re-attach |m,b⟩₁.
    let mut residual = vec![Complex64::new(0.0, 0.0); d];
    for n in 0..d {
        for n2 in 0..d {
            residual[n2] += king.amp(n).conj() * p.amp(n * d + n2);
        }
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); d * d];
    for n in 0..d {
        for n2 in 0..d {
            amps[n * d + n2] = king.amp(n) * residual[n2];
        }
    }
    StateVector::from_amps(dim, amps)
}

/// Born probabilities of Alice's outcomes, indexed by line index.
pub fn alice_distribution(collapsed: &StateVector) -> Result<Vec<f64>, Error> {
    let n2 = collapsed.norm_sq();
    if (n2 - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalized(n2));
    }
    let dim = collapsed.base();
    Ok(all_lines(dim)
        .into_iter()
        .map(|j| {
            inner(&line_state_closed(j).vector, collapsed)
                .unwrap()
                .norm_sqr()
        })
        .collect())
}

/// The zero-amplitude inference rule.
pub fn infer_alignment(j: LineCoord, j_prime: LineCoord) -> InferenceResult {
    let dim = j.dim();
    if j_prime == j {
        return InferenceResult::Ambiguous(all_bases(dim));
    }
    if j_prime.m_cb == j.m_cb {
        return InferenceResult::Unique(BasisLabel::Cb);
    }
    let b = (j_prime.m0 - j.m0) * (j.m_cb - j_prime.m_cb).inv().unwrap();
    InferenceResult::Unique(BasisLabel::Fourier(b))
}

/// One row of the exact protocol table.
#[derive(Debug, Clone)]
pub struct ProtocolRow {
    pub king_basis: BasisLabel,
    pub king_outcome: FieldElem,
    pub alice_outcome: LineCoord,
    /// Joint probability of (m, j') given the King measured in this basis.
    pub prob: f64,
    pub inference: InferenceResult,
}

/// Exact enumeration over every (b, m, j').
#[derive(Debug, Clone)]
pub struct ProtocolTable {
    pub prepared: LineCoord,
    pub rows: Vec<ProtocolRow>,
}

/// Enumerates the protocol exactly: for every King basis (CB plus all
/// Fourier b), every outcome m and every Alice outcome j', the joint
/// probability and the inference.
pub fn enumerate_protocol(dim: PrimeDim, j: LineCoord) -> ProtocolTable {
    let lines = all_lines(dim);
    let mut rows = Vec::new();
    for b in all_bases(dim) {
        for m in dim.elems() {
            let collapsed = king_collapse(j, b, m);
            let p_king = collapsed.norm_sq();
            let normalized = collapsed.normalized();
            let dist = alice_distribution(&normalized).unwrap();
            for jp in &lines {
                rows.push(ProtocolRow {
                    king_basis: b,
                    king_outcome: m,
                    alice_outcome: *jp,
                    prob: p_king * dist[jp.index()],
                    inference: infer_alignment(j, *jp),
                });
            }
        }
    }
    ProtocolTable { prepared: j, rows }
}

impl ProtocolTable {
    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .filter(|r| r.prob > TOL_SWEEP)
            .map(|r| {
                json!({
                    "b": r.king_basis.label(),
                    "m": r.king_outcome.value(),
                    "j_prime": [r.alice_outcome.m_cb.value(), r.alice_outcome.m0.value()],
                    "prob": r.prob,
                    "inference": r.inference.to_json(),
                })
            })
            .collect();
        json!({
            "j": [self.prepared.m_cb.value(), self.prepared.m0.value()],
            "exact_table": rows,
        })
    }
}

/// Monte-Carlo tallies. `mismatch` counts unique inferences that contradict
/// the true alignment and must be zero.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct TrialStats {
    pub trials: u64,
    pub success: u64,
    pub ambiguous: u64,
    pub mismatch: u64,
    /// Outcome frequencies keyed by (m, j'-index).
    pub outcome_counts: Vec<((u64, usize), u64)>,
}

/// Seeded Born-rule simulation of the protocol with a fixed King basis.
pub fn simulate(
    dim: PrimeDim,
    j: LineCoord,
    king_basis: BasisLabel,
    trials: u64,
    seed: u64,
) -> TrialStats {
    assert!(trials >= 1);
    let lines = all_lines(dim);
    // Exact per-m collapse distributions, computed once.
    let per_m: Vec<(f64, Vec<f64>)> = dim
        .elems()
        .map(|m| {
            let collapsed = king_collapse(j, king_basis, m);
            let p = collapsed.norm_sq();
            let dist = alice_distribution(&collapsed.normalized()).unwrap();
            (p, dist)
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts: std::collections::BTreeMap<(u64, usize), u64> = Default::default();
    let mut success = 0u64;
    let mut ambiguous = 0u64;
    let mut mismatch = 0u64;
    for _ in 0..trials {
        let m_idx = sample_index(&mut rng, per_m.iter().map(|(p, _)| *p));
        let jp_idx = sample_index(&mut rng, per_m[m_idx].1.iter().copied());
        *counts.entry((m_idx as u64, jp_idx)).or_insert(0) += 1;
        match infer_alignment(j, lines[jp_idx]) {
            InferenceResult::Ambiguous(_) => ambiguous += 1,
            InferenceResult::Unique(b) if b == king_basis => success += 1,
            InferenceResult::Unique(_) => mismatch += 1,
        }
    }
    TrialStats {
        trials,
        success,
        ambiguous,
        mismatch,
        outcome_counts: counts.into_iter().collect(),
    }
}

/// Inverse-CDF sampling over an exact probability table.
fn sample_index<R: Rng>(rng: &mut R, probs: impl Iterator<Item = f64>) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut last = 0;
    for (i, p) in probs.enumerate() {
        acc += p;
        last = i;
        if u < acc {
            return i;
        }
    }
    last
}
