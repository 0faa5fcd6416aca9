//! Relative / center-of-mass collective coordinates of a two-qudit system.
//!
//! The pair (n₁, n₂) maps bijectively to (n_r, n_c) = ((n₁−n₂)/2, (n₁+n₂)/2)
//! in ℤ_d; the basis-change permutation between the two orderings is the
//! single source of truth for everything built here. Collective MUB states
//! reuse the single-particle construction verbatim on each sector, and the
//! line states turn out to be collective *products*:
//! |P_(m̈,m₀)⟩ = |m̈;CB⟩_c ⊗ |2m₀;0⟩_r.

use crate::dapg::LineCoord;
use crate::linalg::{tensor, OperatorMatrix, PhaseAmp, StateVector};
use crate::mub::{mub_state, x_op, z_op, BasisLabel};
use crate::prime_field::{FieldElem, PrimeDim};
use crate::Error;

/// Collective index pair (n_r, n_c).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CollectiveIndex {
    pub n_r: FieldElem,
    pub n_c: FieldElem,
}

/// (n₁, n₂) → (n_r, n_c) = ((n₁−n₂)/2, (n₁+n₂)/2).
pub fn to_collective(n1: FieldElem, n2: FieldElem) -> CollectiveIndex {
    let half = n1.dim().half();
    CollectiveIndex {
        n_r: (n1 - n2) * half,
        n_c: (n1 + n2) * half,
    }
}

/// Inverse map: n₁ = n_r + n_c, n₂ = n_c − n_r.
pub fn from_collective(idx: CollectiveIndex) -> (FieldElem, FieldElem) {
    (idx.n_r + idx.n_c, idx.n_c - idx.n_r)
}

/// The d²×d² permutation mapping collective ordering (n_r slow) to particle
/// ordering (n₁ slow).
pub fn basis_change_matrix(dim: PrimeDim) -> OperatorMatrix {
    let d = dim.du();
    let n = d * d;
    let mut exact = vec![PhaseAmp::Zero; n * n];
    for n1 in dim.elems() {
        for n2 in dim.elems() {
            let idx = to_collective(n1, n2);
            let row = n1.vu() * d + n2.vu();
            let col = idx.n_r.vu() * d + idx.n_c.vu();
            exact[row * n + col] = PhaseAmp::one();
        }
    }
    OperatorMatrix::from_exact(dim, n, exact)
}

/// The collective clock and shift operators, in particle ordering.
pub struct CollectiveOps {
    pub z_r: OperatorMatrix,
    pub z_c: OperatorMatrix,
    pub x_r: OperatorMatrix,
    pub x_c: OperatorMatrix,
}

/// Z̄_r = Ẑ₁^{1/2}Ẑ₂^{−1/2}, Z̄_c = Ẑ₁^{1/2}Ẑ₂^{1/2},
/// X̄_r = X̂₁X̂₂^{−1}, X̄_c = X̂₁X̂₂; exponents through the modular half.
pub fn collective_ops(dim: PrimeDim) -> CollectiveOps {
    let h = dim.half().value();
    let z = z_op(dim);
    let x = x_op(dim);
    let z_h = z.pow(h);
    let z_mh = z.pow(dim.d() - h);
    let x_inv = x.pow(dim.d() - 1);
    CollectiveOps {
        z_r: z_h.kron(&z_mh).unwrap(),
        z_c: z_h.kron(&z_h).unwrap(),
        x_r: x.kron(&x_inv).unwrap(),
        x_c: x.kron(&x).unwrap(),
    }
}

/// Builds |m_r;b_r⟩_r ⊗ |m_c;b_c⟩_c in collective ordering (r slow), then
/// permutes to particle ordering.
pub fn collective_mub_product(
    m_r: FieldElem,
    b_r: BasisLabel,
    m_c: FieldElem,
    b_c: BasisLabel,
) -> Result<StateVector, Error> {
    let dim = m_r.dim();
    let r = mub_state(m_r, b_r).vector;
    let c = mub_state(m_c, b_c).vector;
    let coll = tensor(&r, &c)?;
    basis_change_matrix(dim).apply(&coll)
}

/// The line state as a collective product: |m̈;CB⟩_c ⊗ |2m₀;0⟩_r.
pub fn line_state_collective(line: LineCoord) -> StateVector {
    let dim = line.dim();
    collective_mub_product(
        line.m0 + line.m0,
        BasisLabel::Fourier(dim.elem(0)),
        line.m_cb,
        BasisLabel::Cb,
    )
    .unwrap()
}

/// The normalized balance state as the collective product |0;CB⟩_r|0;0⟩_c.
pub fn balance_in_collective(dim: PrimeDim) -> StateVector {
    collective_mub_product(
        dim.elem(0),
        BasisLabel::Cb,
        dim.elem(0),
        BasisLabel::Fourier(dim.elem(0)),
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dapg::all_lines;
    use crate::entangled::{balance_state, line_state_closed};
    use crate::linalg::partial_trace_first;
    use crate::{TOL_EXACT, TOL_SWEEP};
    use num_complex::Complex64;

    fn dim(d: u64) -> PrimeDim {
        PrimeDim::new(d).unwrap()
    }

    #[test]
    fn collective_index_examples() {
        let d3 = dim(3);
        let idx = to_collective(d3.elem(0), d3.elem(0));
        assert_eq!((idx.n_r.value(), idx.n_c.value()), (0, 0));
        // d=3: (1,2) → n_r = (1−2)·2 = 1, n_c = (1+2)·2 = 0
        let idx = to_collective(d3.elem(1), d3.elem(2));
        assert_eq!((idx.n_r.value(), idx.n_c.value()), (1, 0));
    }

    #[test]
    fn round_trip_bijection_d7() {
        let d7 = dim(7);
        for n1 in d7.elems() {
            for n2 in d7.elems() {
                assert_eq!(from_collective(to_collective(n1, n2)), (n1, n2));
            }
        }
    }

    #[test]
    fn basis_change_is_permutation() {
        for d in [3u64, 5] {
            let dd = dim(d);
            let u = basis_change_matrix(dd);
            let n = dd.du() * dd.du();
            for i in 0..n {
                let row_ones = (0..n).filter(|&j| u.entry(i, j).norm() > 0.5).count();
                let col_ones = (0..n).filter(|&j| u.entry(j, i).norm() > 0.5).count();
                assert_eq!((row_ones, col_ones), (1, 1));
            }
            let id = OperatorMatrix::identity(dd, n);
            assert!(u.matmul(&u.dagger()).unwrap().max_diff(&id) < TOL_EXACT);
        }
    }

    #[test]
    fn conjugation_maps_sector_clock_to_collective_op() {
        // U (Ẑ ⊗ 𝟙)_coll U† = Z̄_r, and Z̄_r·Z̄_c = Ẑ₁.
        let d5 = dim(5);
        let u = basis_change_matrix(d5);
        let ops = collective_ops(d5);
        let z = z_op(d5);
        let id = OperatorMatrix::identity(d5, 5);
        let z_sector_r = z.kron(&id).unwrap();
        let mapped = u.matmul(&z_sector_r).unwrap().matmul(&u.dagger()).unwrap();
        assert!(mapped.max_diff(&ops.z_r) < TOL_EXACT);
        let z1 = z.kron(&id).unwrap();
        assert!(ops.z_r.matmul(&ops.z_c).unwrap().max_diff(&z1) < TOL_EXACT);
    }

    #[test]
    fn collective_commutation_relations() {
        for d in [3u64, 5] {
            let dd = dim(d);
            let ops = collective_ops(dd);
            let w = PhaseAmp::phase(1, dd).to_complex(dd);
            // Z̄_s X̄_s = ω X̄_s Z̄_s within a sector, as for single-particle Z, X.
            for (x, z) in [(&ops.x_r, &ops.z_r), (&ops.x_c, &ops.z_c)] {
                let zx = z.matmul(x).unwrap();
                let xz = x.matmul(z).unwrap().scale(w);
                assert!(zx.max_diff(&xz) < TOL_EXACT);
            }
            for (x, z) in [(&ops.x_r, &ops.z_c), (&ops.x_c, &ops.z_r)] {
                let xz = x.matmul(z).unwrap();
                let zx = z.matmul(x).unwrap();
                assert!(xz.max_diff(&zx) < TOL_EXACT);
            }
            let n = dd.du() * dd.du();
            let id = OperatorMatrix::identity(dd, n);
            assert!(ops.z_r.pow(dd.d()).max_diff(&id) < TOL_EXACT);
            assert!(ops.z_c.pow(dd.d()).max_diff(&id) < TOL_EXACT);
        }
    }

    #[test]
    fn sector_eigenrelation_under_permutation() {
        // Z̄_r (U e_{n_r·d+n_c}) = ω^{n_r} (U e_{n_r·d+n_c})
        let d3 = dim(3);
        let u = basis_change_matrix(d3);
        let ops = collective_ops(d3);
        for n_r in 0..3 {
            for n_c in 0..3 {
                let e = StateVector::basis_vector(d3, 9, n_r * 3 + n_c);
                let v = u.apply(&e).unwrap();
                let lhs = ops.z_r.apply(&v).unwrap();
                let rhs = v.scale(PhaseAmp::phase(n_r as i64, d3).to_complex(d3));
                assert!(lhs.max_diff(&rhs) < TOL_EXACT);
            }
        }
    }

    #[test]
    fn product_for_equal_bases_entangled_otherwise() {
        let d3 = dim(3);
        let b0 = BasisLabel::Fourier(d3.elem(0));
        let b1 = BasisLabel::Fourier(d3.elem(1));
        // b_r = b_c: Schmidt rank 1 in particle coordinates.
        let v = collective_mub_product(d3.elem(1), b0, d3.elem(2), b0).unwrap();
        let rho = partial_trace_first(&v).unwrap();
        let purity = rho.matmul(&rho).unwrap().trace().re;
        assert!((purity - 1.0).abs() < TOL_SWEEP);
        // b_r ≠ b_c: maximally entangled.
        let v = collective_mub_product(d3.elem(1), b0, d3.elem(2), b1).unwrap();
        let rho = partial_trace_first(&v).unwrap();
        let target = OperatorMatrix::identity(d3, 3).scale(Complex64::new(1.0 / 3.0, 0.0));
        assert!(rho.max_diff(&target) < TOL_EXACT);
    }

    #[test]
    fn line_states_are_collective_products() {
        for d in [3u64, 5] {
            let dd = dim(d);
            for j in all_lines(dd) {
                let coll = line_state_collective(j);
                let closed = line_state_closed(j).vector;
                assert!(
                    coll.max_diff(&closed) < TOL_EXACT,
                    "d={d} j=({},{}) diff={}",
                    j.m_cb,
                    j.m0,
                    coll.max_diff(&closed)
                );
            }
        }
    }

    #[test]
    fn balance_collective_product() {
        for d in [3u64, 7] {
            let dd = dim(d);
            let v = balance_in_collective(dd);
            let r = balance_state(dd)
                .vector
                .scale(Complex64::new(1.0 / (d as f64).sqrt(), 0.0));
            assert!(v.max_diff(&r) < TOL_EXACT);
        }
    }

    #[test]
    fn collective_amplitude_reproduces_overlaps() {
        // ⟨A_(m,b)|P_j⟩ computed from the collective product equals the
        // direct overlap for every point/line pair.
        let d3 = dim(3);
        for j in all_lines(d3) {
            let coll = line_state_collective(j);
            for p in crate::dapg::all_points(d3) {
                let direct = crate::entangled::overlap_point_line(p, j);
                let via_coll = crate::linalg::inner(
                    &crate::entangled::point_state(p).vector,
                    &coll,
                )
                .unwrap();
                assert!((direct - via_coll).norm() < TOL_SWEEP);
            }
        }
    }
}
