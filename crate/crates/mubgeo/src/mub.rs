//! The d+1 mutually unbiased bases of a prime-dimensional qudit.
//!
//! The computational basis (CB) is the clock eigenbasis; the d Fourier-type
//! bases b = 0..d−1 are
//!
//! ```text
//! |m;b⟩ = (1/√d) Σ_n ω^{(b/2)·n(n−1) − n·m} |n⟩
//! ```
//!
//! with every exponent computed in ℤ_d via the modular half. The set is
//! closed under complex conjugation through the tilde map
//! (m,b) → (d−m, d−b).

use serde_json::{json, Value};

use crate::linalg::{OperatorMatrix, PhaseAmp, StateVector};
use crate::prime_field::{FieldElem, PrimeDim};
use crate::{Error, TOL_EXACT};

/// Basis label: the computational basis or one of the d Fourier-type bases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisLabel {
    Cb,
    Fourier(FieldElem),
}

impl BasisLabel {
    /// Column position in the geometry's array: CB leftmost, then b = 0..d−1.
    pub fn col(self) -> usize {
        match self {
            BasisLabel::Cb => 0,
            BasisLabel::Fourier(b) => b.vu() + 1,
        }
    }

    pub fn label(self) -> String {
        match self {
            BasisLabel::Cb => "CB".to_string(),
            BasisLabel::Fourier(b) => b.value().to_string(),
        }
    }
}

/// All d+1 basis labels in the fixed order [CB, 0, 1, …, d−1].
pub fn all_bases(dim: PrimeDim) -> Vec<BasisLabel> {
    let mut v = vec![BasisLabel::Cb];
    v.extend(dim.elems().map(BasisLabel::Fourier));
    v
}

/// A single MUB state |m;b⟩ with its exact vector.
#[derive(Debug, Clone)]
pub struct MubState {
    pub m: FieldElem,
    pub basis: BasisLabel,
    pub vector: StateVector,
}

/// Builds |m;b⟩. CB returns the unit vector e_m.
pub fn mub_state(m: FieldElem, basis: BasisLabel) -> MubState {
    let dim = m.dim();
    let d = dim.du();
    let vector = match basis {
        BasisLabel::Cb => StateVector::basis_vector(dim, d, m.vu()),
        BasisLabel::Fourier(b) => {
            let half = dim.half();
            let mut exact = Vec::with_capacity(d);
            for n in 0..d as i64 {
                let ne = dim.elem(n);
                // (b/2)·n(n−1) − n·m, all in Z_d
                let k = half * b * ne * dim.elem(n - 1) - ne * m;
                exact.push(PhaseAmp::scaled(k.value() as i64, 1, dim));
            }
            StateVector::from_exact(dim, exact)
        }
    };
    MubState { m, basis, vector }
}

/// The clock unitary Ẑ = diag(1, ω, ω², …).
pub fn z_op(dim: PrimeDim) -> OperatorMatrix {
    let d = dim.du();
    let mut exact = vec![PhaseAmp::Zero; d * d];
    for n in 0..d {
        exact[n * d + n] = PhaseAmp::phase(n as i64, dim);
    }
    OperatorMatrix::from_exact(dim, d, exact)
}

/// The cyclic shift unitary X̂: |n⟩ → |n+1 mod d⟩.
pub fn x_op(dim: PrimeDim) -> OperatorMatrix {
    let d = dim.du();
    let mut exact = vec![PhaseAmp::Zero; d * d];
    for n in 0..d {
        exact[((n + 1) % d) * d + n] = PhaseAmp::one();
    }
    OperatorMatrix::from_exact(dim, d, exact)
}

/// Checks X̂Ẑ^b|m;b⟩ = ω^m|m;b⟩ for a Fourier-basis state.
pub fn check_eigenrelation(state: &MubState) -> Result<bool, Error> {
    let b = match state.basis {
        BasisLabel::Fourier(b) => b,
        BasisLabel::Cb => return Err(Error::WrongBasisKind),
    };
    let dim = state.m.dim();
    let op = x_op(dim).matmul(&z_op(dim).pow(b.value()))?;
    let lhs = op.apply(&state.vector)?;
    let rhs = state
        .vector
        .scale(PhaseAmp::phase(state.m.value() as i64, dim).to_complex(dim));
    Ok(lhs.max_diff(&rhs) < TOL_EXACT)
}

/// The conjugation closure map: Fourier (m,b) → (d−m, d−b); identity on CB
/// (CB vectors are real).
pub fn tilde(m: FieldElem, basis: BasisLabel) -> (FieldElem, BasisLabel) {
    match basis {
        BasisLabel::Cb => (m, BasisLabel::Cb),
        BasisLabel::Fourier(b) => (-m, BasisLabel::Fourier(-b)),
    }
}

/// Full MUB table as JSON: {d, bases:[{label, states:[…]}]}.
pub fn mub_table_json(dim: PrimeDim) -> Value {
    let bases: Vec<Value> = all_bases(dim)
        .into_iter()
        .map(|basis| {
            let states: Vec<Value> = dim
                .elems()
                .map(|m| mub_state(m, basis).vector.to_json())
                .collect();
            json!({ "label": basis.label(), "states": states })
        })
        .collect();
    json!({ "d": dim.d(), "bases": bases })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::inner;
    use crate::TOL_SWEEP;
    use num_complex::Complex64;

    fn dim(d: u64) -> PrimeDim {
        PrimeDim::new(d).unwrap()
    }

    #[test]
    fn uniform_state_at_b0_m0() {
        let d3 = dim(3);
        let s = mub_state(d3.elem(0), BasisLabel::Fourier(d3.elem(0)));
        let r = 1.0 / 3f64.sqrt();
        for n in 0..3 {
            assert!((s.vector.amp(n) - Complex64::new(r, 0.0)).norm() < TOL_EXACT);
        }
    }

    #[test]
    fn cb_state_is_unit_vector() {
        let d3 = dim(3);
        let s = mub_state(d3.elem(1), BasisLabel::Cb);
        assert!((s.vector.amp(1).re - 1.0).abs() < TOL_EXACT);
        assert!(s.vector.amp(0).norm() < TOL_EXACT);
    }

    #[test]
    fn exponents_m1_b2_d3() {
        // (b/2)n(n−1) − nm with b=2, m=1, d=3: b/2 = 2·2 = 1, so the
        // exponents are {0·0−0, 1·0−1, 1·2−2} = {0, 2, 0}.
        let d3 = dim(3);
        let s = mub_state(d3.elem(1), BasisLabel::Fourier(d3.elem(2)));
        let e = s.vector.exact().unwrap();
        assert_eq!(e[0], PhaseAmp::scaled(0, 1, d3));
        assert_eq!(e[1], PhaseAmp::scaled(2, 1, d3));
        assert_eq!(e[2], PhaseAmp::scaled(0, 1, d3));
    }

    #[test]
    fn clock_and_shift() {
        let d3 = dim(3);
        let z = z_op(d3);
        let w = PhaseAmp::phase(1, d3).to_complex(d3);
        assert!((z.entry(1, 1) - w).norm() < TOL_EXACT);
        assert!((z.entry(2, 2) - w * w).norm() < TOL_EXACT);
        let x = x_op(d3);
        let id = OperatorMatrix::identity(d3, 3);
        assert!(x.pow(3).max_diff(&id) < TOL_EXACT);
        // Z X = w X Z, since (ZX)|n⟩ = ω^{n+1}|n+1⟩ = ω·(XZ)|n⟩
        let zx = z.matmul(&x).unwrap();
        let xz = x.matmul(&z).unwrap().scale(w);
        assert!(zx.max_diff(&xz) < TOL_EXACT);
    }

    #[test]
    fn eigenrelation_holds() {
        for d in [3u64, 7] {
            let dd = dim(d);
            for b in dd.elems() {
                for m in dd.elems() {
                    let s = mub_state(m, BasisLabel::Fourier(b));
                    assert!(check_eigenrelation(&s).unwrap(), "d={d} m={m} b={b}");
                }
            }
        }
    }

    #[test]
    fn eigenrelation_detects_perturbation() {
        let d3 = dim(3);
        let mut s = mub_state(d3.elem(1), BasisLabel::Fourier(d3.elem(1)));
        let mut amps = s.vector.amps().to_vec();
        amps[2] = -amps[2];
        s.vector = StateVector::from_amps(d3, amps);
        assert!(!check_eigenrelation(&s).unwrap());
    }

    #[test]
    fn eigenrelation_rejects_cb() {
        let d3 = dim(3);
        let s = mub_state(d3.elem(0), BasisLabel::Cb);
        assert_eq!(check_eigenrelation(&s), Err(Error::WrongBasisKind));
    }

    #[test]
    fn tilde_map() {
        let d3 = dim(3);
        let (m, b) = tilde(d3.elem(1), BasisLabel::Fourier(d3.elem(2)));
        assert_eq!(m.value(), 2);
        assert_eq!(b, BasisLabel::Fourier(d3.elem(1)));
        let (m, b) = tilde(d3.elem(0), BasisLabel::Fourier(d3.elem(0)));
        assert_eq!(m.value(), 0);
        assert_eq!(b, BasisLabel::Fourier(d3.elem(0)));
        let d5 = dim(5);
        assert_eq!(tilde(d5.elem(2), BasisLabel::Cb), (d5.elem(2), BasisLabel::Cb));
    }

    #[test]
    fn conjugation_closure_is_exact() {
        for d in [3u64, 5, 7] {
            let dd = dim(d);
            for b in dd.elems() {
                for m in dd.elems() {
                    let s = mub_state(m, BasisLabel::Fourier(b));
                    let (mt, bt) = tilde(m, BasisLabel::Fourier(b));
                    let t = mub_state(mt, bt);
                    assert_eq!(
                        s.vector.conj().exact().unwrap(),
                        t.vector.exact().unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn unbiasedness_pairs_d5() {
        let d5 = dim(5);
        let r = 1.0 / 5f64.sqrt();
        let bases = all_bases(d5);
        for (i, &b1) in bases.iter().enumerate() {
            for &b2 in &bases[i + 1..] {
                for m1 in d5.elems() {
                    for m2 in d5.elems() {
                        let v = mub_state(m1, b1).vector;
                        let w = mub_state(m2, b2).vector;
                        let ov = inner(&v, &w).unwrap().norm();
                        assert!((ov - r).abs() < TOL_SWEEP);
                    }
                }
            }
        }
    }

    #[test]
    fn completeness_per_basis() {
        let d5 = dim(5);
        let id = OperatorMatrix::identity(d5, 5);
        for basis in all_bases(d5) {
            let mut acc = OperatorMatrix::zeros(d5, 5);
            for m in d5.elems() {
                let v = mub_state(m, basis).vector;
                for i in 0..5 {
                    for j in 0..5 {
                        *acc.entry_mut(i, j) += v.amp(i) * v.amp(j).conj();
                    }
                }
            }
            assert!(acc.max_diff(&id) < TOL_SWEEP);
        }
    }
}
