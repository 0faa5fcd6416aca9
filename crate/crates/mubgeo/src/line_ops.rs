//! Single-particle operators underpinned by the geometry: the rank-1 MUB
//! projectors Â_{m,b} on points and the line operators P̂_j.
//!
//! Two independent routes to P̂_j are kept side by side: the incident-point
//! sum Σ_{α∈j} Â_α − 𝟙 and the closed form
//! ⟨n|P̂_j|n'⟩ = δ_{n+n',2m̈} ω^{−(n−n')m₀}. Their agreement is a standing
//! oracle test.

use serde_json::{json, Value};

use crate::dapg::{all_lines, points_of, LineCoord, PointCoord};
use crate::linalg::{OperatorMatrix, PhaseAmp};
use crate::mub::BasisLabel;
use crate::prime_field::PrimeDim;

/// Rank-1 projector Â_{m,b} = |m,b⟩⟨b,m| with exact entries.
#[derive(Debug, Clone)]
pub struct PointProjector {
    pub point: PointCoord,
    pub matrix: OperatorMatrix,
}

/// Builds Â_{m,b}. For a Fourier column the entries are
/// ⟨n|Â_{m,b}|n'⟩ = ω^{(n−n')[(b/2)(n+n'−1)−m]} / d; for CB, |m⟩⟨m|.
pub fn point_projector(point: PointCoord) -> PointProjector {
    let dim = point.m.dim();
    let d = dim.du();
    let matrix = match point.basis {
        BasisLabel::Cb => {
            let mut exact = vec![PhaseAmp::Zero; d * d];
            exact[point.m.vu() * d + point.m.vu()] = PhaseAmp::one();
            OperatorMatrix::from_exact(dim, d, exact)
        }
        BasisLabel::Fourier(b) => {
            let half = dim.half();
            let mut exact = Vec::with_capacity(d * d);
            for n in 0..d as i64 {
                for n2 in 0..d as i64 {
                    let k = dim.elem(n - n2)
                        * (half * b * dim.elem(n + n2 - 1) - point.m);
                    exact.push(PhaseAmp::scaled(k.value() as i64, 2, dim));
                }
            }
            OperatorMatrix::from_exact(dim, d, exact)
        }
    };
    PointProjector { point, matrix }
}

/// Unitary, Hermitian line operator P̂_j.
#[derive(Debug, Clone)]
pub struct LineOperator {
    pub line: LineCoord,
    pub matrix: OperatorMatrix,
}

/// Closed form: one root-of-unity entry per row, at n' = 2m̈ − n.
pub fn line_operator_closed(line: LineCoord) -> LineOperator {
    let dim = line.dim();
    let d = dim.du();
    let mut exact = vec![PhaseAmp::Zero; d * d];
    for n in 0..d as i64 {
        let n2 = (line.m_cb + line.m_cb - dim.elem(n)).vu() as i64;
        let k = -dim.elem(n - n2) * line.m0;
        exact[n as usize * d + n2 as usize] = PhaseAmp::scaled(k.value() as i64, 0, dim);
    }
    LineOperator {
        line,
        matrix: OperatorMatrix::from_exact(dim, d, exact),
    }
}

/// Independent oracle: Σ over the line's d+1 point projectors minus the
/// identity. Entries are accumulated in floats.
pub fn line_operator_sum(line: LineCoord) -> LineOperator {
    let dim = line.dim();
    let d = dim.du();
    let mut acc = OperatorMatrix::identity(dim, d).scale((-1.0).into());
    for p in points_of(line) {
        acc = acc.add(&point_projector(p).matrix).unwrap();
    }
    LineOperator { line, matrix: acc }
}

/// JSON export of all line operators keyed by line index.
pub fn line_operators_json(dim: PrimeDim) -> Value {
    let ops: Vec<Value> = all_lines(dim)
        .into_iter()
        .map(|j| {
            json!({
                "index": j.index(),
                "m_cb": j.m_cb.value(),
                "m0": j.m0.value(),
                "matrix": line_operator_closed(j).matrix.to_json(),
            })
        })
        .collect();
    json!({ "d": dim.d(), "line_operators": ops })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dapg::line_row;
    use crate::mub::all_bases;
    use crate::prime_field::FieldElem;
    use crate::{TOL_EXACT, TOL_SWEEP};

    fn dim(d: u64) -> PrimeDim {
        PrimeDim::new(d).unwrap()
    }

    fn fourier(b: FieldElem) -> BasisLabel {
        BasisLabel::Fourier(b)
    }

    #[test]
    fn printed_matrices_d3() {
        let d3 = dim(3);
        let w = |k: i64| PhaseAmp::scaled(k, 2, d3);

        // Â_{(1,CB)} = diag(0,1,0)
        let a = point_projector(PointCoord::new(d3.elem(1), BasisLabel::Cb));
        let e = a.matrix.exact().unwrap();
        assert_eq!(e[4], PhaseAmp::one());
        assert!(e.iter().enumerate().all(|(i, &p)| i == 4 || p.is_zero()));

        // Â_{(2,0)} = (1/3)[[1,w2,w],[w,1,w2],[w2,w,1]]
        let a = point_projector(PointCoord::new(d3.elem(2), fourier(d3.elem(0))));
        let expect = [0, 2, 1, 1, 0, 2, 2, 1, 0].map(w);
        assert_eq!(a.matrix.exact().unwrap(), expect);

        // Â_{(1,1)} = (1/3)[[1,w,w],[w2,1,1],[w2,1,1]]
        let a = point_projector(PointCoord::new(d3.elem(1), fourier(d3.elem(1))));
        let expect = [0, 1, 1, 2, 0, 0, 2, 0, 0].map(w);
        assert_eq!(a.matrix.exact().unwrap(), expect);

        // Â_{(0,2)} = (1/3)[[1,1,w],[1,1,w],[w2,w2,1]]
        let a = point_projector(PointCoord::new(d3.elem(0), fourier(d3.elem(2))));
        let expect = [0, 0, 1, 0, 0, 1, 2, 2, 0].map(w);
        assert_eq!(a.matrix.exact().unwrap(), expect);

        // P̂_{(1,2)} = [[0,0,w],[0,1,0],[w2,0,0]]
        let p = line_operator_closed(LineCoord::new(d3.elem(1), d3.elem(2)));
        let e = p.matrix.exact().unwrap();
        assert_eq!(e[2], PhaseAmp::scaled(1, 0, d3));
        assert_eq!(e[4], PhaseAmp::scaled(0, 0, d3));
        assert_eq!(e[6], PhaseAmp::scaled(2, 0, d3));
        assert!(e
            .iter()
            .enumerate()
            .all(|(i, &p)| matches!(i, 2 | 4 | 6) || p.is_zero()));
    }

    #[test]
    fn projector_properties() {
        for d in [3u64, 5] {
            let dd = dim(d);
            for b in all_bases(dd) {
                for m in dd.elems() {
                    let a = point_projector(PointCoord::new(m, b)).matrix;
                    assert!(a.matmul(&a).unwrap().max_diff(&a) < TOL_EXACT);
                    assert!((a.trace().re - 1.0).abs() < TOL_EXACT);
                    assert!(a.is_hermitian(TOL_EXACT));
                }
            }
        }
    }

    #[test]
    fn line_operator_zero_line_is_inversion() {
        for d in [3u64, 5, 7] {
            let dd = dim(d);
            let p = line_operator_closed(LineCoord::new(dd.elem(0), dd.elem(0)));
            assert!(p.matrix.max_diff(&crate::linalg::inversion_op(dd)) < TOL_EXACT);
        }
    }

    #[test]
    fn line_operator_unitary_hermitian() {
        for d in [3u64, 5] {
            let dd = dim(d);
            for j in all_lines(dd) {
                let p = line_operator_closed(j).matrix;
                assert!(p.is_unitary(TOL_EXACT));
                assert!(p.is_hermitian(TOL_EXACT));
            }
        }
    }

    #[test]
    fn oracle_equivalence() {
        for d in [3u64, 5] {
            let dd = dim(d);
            for j in all_lines(dd) {
                let sum = line_operator_sum(j).matrix;
                let closed = line_operator_closed(j).matrix;
                assert!(
                    sum.max_diff(&closed) < TOL_SWEEP,
                    "d={d} j=({},{})",
                    j.m_cb,
                    j.m0
                );
            }
        }
    }

    #[test]
    fn shared_matrix_elements_on_line() {
        // Points on one line agree on entries with n+n' = 2m̈, n ≠ n'.
        for d in [3u64, 5] {
            let dd = dim(d);
            for j in all_lines(dd) {
                let target = (j.m_cb + j.m_cb).value() as i64;
                let projs: Vec<_> = dd
                    .elems()
                    .map(|b| {
                        point_projector(PointCoord::new(
                            line_row(j, fourier(b)),
                            fourier(b),
                        ))
                    })
                    .collect();
                for n in 0..dd.du() as i64 {
                    for n2 in 0..dd.du() as i64 {
                        if n == n2 || dd.elem(n + n2).value() as i64 != target % dd.d() as i64 {
                            continue;
                        }
                        let first = projs[0].matrix.exact_entry(n as usize, n2 as usize);
                        for pr in &projs[1..] {
                            assert_eq!(
                                pr.matrix.exact_entry(n as usize, n2 as usize),
                                first
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn off_line_entries_cancel() {
        // For n ≠ n', n+n' ≠ 2m̈ the Fourier projector entries sum to zero
        // (the CB projector and the identity are diagonal).
        let d5 = dim(5);
        for j in all_lines(d5) {
            let sum = line_operator_sum(j).matrix;
            let target = (j.m_cb + j.m_cb).value();
            for n in 0..5usize {
                for n2 in 0..5usize {
                    if n != n2 && d5.elem((n + n2) as i64).value() != target {
                        assert!(sum.entry(n, n2).norm() < TOL_SWEEP);
                    }
                }
            }
        }
    }

    #[test]
    fn column_projectors_sum_to_identity() {
        let d5 = dim(5);
        let id = OperatorMatrix::identity(d5, 5);
        for b in all_bases(d5) {
            let mut acc = OperatorMatrix::zeros(d5, 5);
            for m in d5.elems() {
                acc = acc
                    .add(&point_projector(PointCoord::new(m, b)).matrix)
                    .unwrap();
            }
            assert!(acc.max_diff(&id) < TOL_SWEEP);
        }
    }
}
