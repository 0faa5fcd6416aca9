//! Two-particle states underpinned by the geometry: point product states
//! |A_α⟩ = |m,b⟩₁|m̃,b̃⟩₂, the balance state |ℛ⟩ = Σ_n|n⟩₁|n⟩₂, and the d²
//! maximally entangled line states |P_j⟩.
//!
//! Line states are built three ways — the geometric sum
//! (1/√d)(Σ_{α∈j}|A_α⟩ − |ℛ⟩), the closed amplitude form
//! δ_{n+n',2m̈} ω^{−(n−n')m₀}/√d, and an operator form through X̂, Ẑ and the
//! inversion — and their agreement is tested, not assumed.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::dapg::{all_lines, points_of, LineCoord, PointCoord};
use crate::linalg::{inner, inversion_op, tensor, PhaseAmp, StateVector};
use crate::mub::{all_bases, mub_state, tilde, x_op, z_op, BasisLabel};
use crate::prime_field::{FieldElem, PrimeDim};
use crate::{Error, TOL};

/// Product state |A_α⟩ underpinned by the point α = (m,b).
#[derive(Debug, Clone)]
pub struct PointState {
    pub point: PointCoord,
    pub vector: StateVector,
}

/// |A_α⟩ = |m,b⟩₁ ⊗ |m̃,b̃⟩₂. A CB point (n, b̈0) yields |n⟩₁|n⟩₂.
pub fn point_state(point: PointCoord) -> PointState {
    let first = mub_state(point.m, point.basis).vector;
    let (mt, bt) = tilde(point.m, point.basis);
    let second = mub_state(mt, bt).vector;
    PointState {
        point,
        vector: tensor(&first, &second).unwrap(),
    }
}

/// The unnormalized balance state |ℛ⟩ = Σ_n |n⟩₁|n⟩₂, norm √d.
#[derive(Debug, Clone)]
pub struct BalanceState {
    pub dim: PrimeDim,
    pub vector: StateVector,
}

pub fn balance_state(dim: PrimeDim) -> BalanceState {
    let d = dim.du();
    let mut exact = vec![PhaseAmp::Zero; d * d];
    for n in 0..d {
        exact[n * d + n] = PhaseAmp::one();
    }
    BalanceState {
        dim,
        vector: StateVector::from_exact(dim, exact),
    }
}

/// Maximally entangled line state |P_j⟩.
#[derive(Debug, Clone)]
pub struct LineState {
    pub line: LineCoord,
    pub vector: StateVector,
}

/// Geometric sum construction: (1/√d)(Σ_{α∈j}|A_α⟩ − |ℛ⟩). This is the
/// oracle for the closed form below.
pub fn line_state_sum(line: LineCoord) -> LineState {
    let dim = line.dim();
    let mut acc = balance_state(dim)
        .vector
        .scale(Complex64::new(-1.0, 0.0));
    for p in points_of(line) {
        acc = acc.add(&point_state(p).vector).unwrap();
    }
    let vector = acc.scale(Complex64::new(1.0 / (dim.d() as f64).sqrt(), 0.0));
    LineState { line, vector }
}

/// Closed form: amplitude on |n⟩₁|n'⟩₂ is δ_{n+n',2m̈} ω^{−(n−n')m₀} / √d.
pub fn line_state_closed(line: LineCoord) -> LineState {
    let dim = line.dim();
    let d = dim.du();
    let mut exact = vec![PhaseAmp::Zero; d * d];
    for n in 0..d as i64 {
        let n2 = (line.m_cb + line.m_cb - dim.elem(n)).vu();
        let k = -dim.elem(n - n2 as i64) * line.m0;
        exact[n as usize * d + n2] = PhaseAmp::scaled(k.value() as i64, 1, dim);
    }
    LineState {
        line,
        vector: StateVector::from_exact(dim, exact),
    }
}

/// Operator form: (ω^{2m̈m₀}/√d) Σ_n |n⟩₁ ⊗ X̂^{2m̈} Ẑ^{2m₀} 𝓘 |n⟩₂.
pub fn line_state_operator_form(line: LineCoord) -> LineState {
    let dim = line.dim();
    let d = dim.du();
    let op = x_op(dim)
        .pow((line.m_cb + line.m_cb).value())
        .matmul(&z_op(dim).pow((line.m0 + line.m0).value()))
        .unwrap()
        .matmul(&inversion_op(dim))
        .unwrap();
    let mut acc = StateVector::zero(dim, d * d);
    for n in 0..d {
        let e_n = StateVector::basis_vector(dim, d, n);
        let second = op.apply(&e_n).unwrap();
        acc = acc.add(&tensor(&e_n, &second).unwrap()).unwrap();
    }
    let prefactor = PhaseAmp::phase(
        ((line.m_cb + line.m_cb) * line.m0).value() as i64,
        dim,
    )
    .to_complex(dim)
        / Complex64::new((dim.d() as f64).sqrt(), 0.0);
    LineState {
        line,
        vector: acc.scale(prefactor),
    }
}

/// ⟨A_α|P_j⟩: magnitude 1/√d when α ∈ j, zero otherwise.
pub fn overlap_point_line(point: PointCoord, line: LineCoord) -> Complex64 {
    inner(&point_state(point).vector, &line_state_closed(line).vector).unwrap()
}

/// Particle-2 residual of projecting particle 1 of |P_j⟩ on ⟨b,m|, together
/// with the identified MUB decomposition.
#[derive(Debug, Clone)]
pub struct LeakyComponent {
    /// The unnormalized residual, norm 1/√d.
    pub residual: StateVector,
    /// Label of the particle-2 MUB state the residual is proportional to.
    pub m2: FieldElem,
    pub basis2: BasisLabel,
    /// Exponent k of the global phase ω^k relating residual·√d to the state.
    pub phase: FieldElem,
}

/// Contracts ⟨b,m|₁ with |P_j⟩ numerically, then identifies which particle-2
/// MUB state (and which d-th root-of-unity phase) the residual matches. The
/// contraction is the arbiter: a candidate counts only if it reproduces the
/// residual entrywise. The line-deviation Δ = m − m₀ − (b/2)(2m̈−1) predicts
/// the match (state |m̃+2Δ, b̃⟩, phase ω^{2m̈Δ}) and is tried first; an
/// exhaustive search over all d(d+1) candidates backs it up.
pub fn leaky_component(
    m: FieldElem,
    basis: BasisLabel,
    line: LineCoord,
) -> Result<LeakyComponent, Error> {
    let b = match basis {
        BasisLabel::Fourier(b) => b,
        BasisLabel::Cb => return Err(Error::WrongBasisKind),
    };
    let dim = m.dim();
    let d = dim.du();
    let bra = mub_state(m, basis).vector;
    let p = line_state_closed(line).vector;
    let mut amps = vec![Complex64::new(0.0, 0.0); d];
    for n in 0..d {
        for n2 in 0..d {
            amps[n2] += bra.amp(n).conj() * p.amp(n * d + n2);
        }
    }
    let residual = StateVector::from_amps(dim, amps);
    let scaled = residual.scale(Complex64::new((dim.d() as f64).sqrt(), 0.0));

    let matches = |m2: FieldElem, basis2: BasisLabel, k: FieldElem| -> bool {
        let phased = mub_state(m2, basis2)
            .vector
            .scale(PhaseAmp::phase(k.value() as i64, dim).to_complex(dim));
        scaled.max_diff(&phased) < TOL
    };

    let two_mcb_minus_1 = line.m_cb + line.m_cb - dim.elem(1);
    let delta = m - line.m0 - b * dim.half() * two_mcb_minus_1;
    let (mt, bt) = tilde(m, basis);
    let predicted = (mt + delta + delta, bt, (line.m_cb + line.m_cb) * delta);
    if matches(predicted.0, predicted.1, predicted.2) {
        return Ok(LeakyComponent {
            residual,
            m2: predicted.0,
            basis2: predicted.1,
            phase: predicted.2,
        });
    }
    for basis2 in all_bases(dim) {
        for m2 in dim.elems() {
            for k in dim.elems() {
                if matches(m2, basis2, k) {
                    return Ok(LeakyComponent {
                        residual,
                        m2,
                        basis2,
                        phase: k,
                    });
                }
            }
        }
    }
    Err(Error::NoMubMatch)
}

/// JSON export of the full line-state basis.
pub fn line_basis_json(dim: PrimeDim) -> Value {
    let states: Vec<Value> = all_lines(dim)
        .into_iter()
        .map(|j| {
            let s = line_state_closed(j);
            json!({
                "m_cb": j.m_cb.value(),
                "m0": j.m0.value(),
                "state": s.vector.to_json(),
            })
        })
        .collect();
    json!({ "d": dim.d(), "states": states })
}

/// Overlap table CSV: rows = points, columns = lines, entries |⟨A_α|P_j⟩|.
pub fn overlap_table_csv(dim: PrimeDim) -> String {
    let lines = all_lines(dim);
    let mut out = String::from("point");
    for j in &lines {
        out.push_str(&format!(",({},{})", j.m_cb, j.m0));
    }
    out.push('\n');
    for p in crate::dapg::all_points(dim) {
        out.push_str(&format!("({},{})", p.m, p.basis.label()));
        for j in &lines {
            out.push_str(&format!(",{:.6}", overlap_point_line(p, *j).norm()));
        }
        out.push('\n');
    }
    out
}
