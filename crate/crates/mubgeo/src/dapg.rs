//! The dual affine plane geometry (DAPG) realization: d(d+1) points arranged
//! in a d × (d+1) array of rows m and columns b (CB leftmost), d² lines.
//!
//! A line j = (m̈, m₀) is the point set picked out by the row equation
//!
//! ```text
//! m(b) = (b/2)(2m̈ − 1) + m₀  (mod d),    m(CB) = m̈.
//! ```
//!
//! Canonical indices are a choice of this crate (the abstract geometry has no
//! preferred numbering): point index = col·d + m, line index = m̈·d + m₀.

use serde_json::{json, Value};

use crate::mub::{all_bases, BasisLabel};
use crate::prime_field::{FieldElem, PrimeDim};

/// Geometry point α = (m, b).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PointCoord {
    pub m: FieldElem,
    pub basis: BasisLabel,
}

impl PointCoord {
    pub fn new(m: FieldElem, basis: BasisLabel) -> Self {
        PointCoord { m, basis }
    }

    /// Canonical index in [0, d(d+1)).
    pub fn index(self) -> usize {
        self.basis.col() * self.m.dim().du() + self.m.vu()
    }
}

/// Geometry line j = (m̈, m₀).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LineCoord {
    pub m_cb: FieldElem,
    pub m0: FieldElem,
}

impl LineCoord {
    pub fn new(m_cb: FieldElem, m0: FieldElem) -> Self {
        LineCoord { m_cb, m0 }
    }

    /// Canonical index in [0, d²).
    pub fn index(self) -> usize {
        self.m_cb.vu() * self.m_cb.dim().du() + self.m0.vu()
    }

    pub fn dim(self) -> PrimeDim {
        self.m_cb.dim()
    }
}

/// All d² lines in canonical index order.
pub fn all_lines(dim: PrimeDim) -> Vec<LineCoord> {
    let mut v = Vec::with_capacity(dim.du() * dim.du());
    for m_cb in dim.elems() {
        for m0 in dim.elems() {
            v.push(LineCoord::new(m_cb, m0));
        }
    }
    v
}

/// All d(d+1) points in canonical index order.
pub fn all_points(dim: PrimeDim) -> Vec<PointCoord> {
    let mut v = Vec::with_capacity(dim.du() * (dim.du() + 1));
    for basis in all_bases(dim) {
        for m in dim.elems() {
            v.push(PointCoord::new(m, basis));
        }
    }
    v
}

/// The row the line occupies in the given column.
pub fn line_row(line: LineCoord, basis: BasisLabel) -> FieldElem {
    match basis {
        BasisLabel::Cb => line.m_cb,
        BasisLabel::Fourier(b) => {
            let dim = line.dim();
            let two_mcb_minus_1 = line.m_cb + line.m_cb - dim.elem(1);
            line.m0 + b * dim.half() * two_mcb_minus_1
        }
    }
}

/// True iff the point lies on the line.
pub fn incident(point: PointCoord, line: LineCoord) -> bool {
    point.m == line_row(line, point.basis)
}

/// The d+1 points of a line, one per column, in column order.
pub fn points_of(line: LineCoord) -> Vec<PointCoord> {
    all_bases(line.dim())
        .into_iter()
        .map(|b| PointCoord::new(line_row(line, b), b))
        .collect()
}

/// The d lines through a point, obtained by solving the row equation for the
/// free parameter.
pub fn lines_through(point: PointCoord) -> Vec<LineCoord> {
    let dim = point.m.dim();
    match point.basis {
        // CB fixes m̈; m₀ runs free.
        BasisLabel::Cb => dim
            .elems()
            .map(|m0| LineCoord::new(point.m, m0))
            .collect(),
        // A Fourier column fixes m₀ as a function of m̈.
        BasisLabel::Fourier(b) => dim
            .elems()
            .map(|m_cb| {
                let two_mcb_minus_1 = m_cb + m_cb - dim.elem(1);
                let m0 = point.m - b * dim.half() * two_mcb_minus_1;
                LineCoord::new(m_cb, m0)
            })
            .collect(),
    }
}

/// The full point × line incidence table with the column equivalence classes.
#[derive(Debug, Clone)]
pub struct IncidenceStructure {
    dim: PrimeDim,
    /// Row-major [point_index][line_index] booleans.
    membership: Vec<bool>,
    points: Vec<PointCoord>,
    lines: Vec<LineCoord>,
}

/// Builds the incidence table from the row equation.
pub fn build_incidence(dim: PrimeDim) -> IncidenceStructure {
    let points = all_points(dim);
    let lines = all_lines(dim);
    let n_lines = lines.len();
    let mut membership = vec![false; points.len() * n_lines];
    for p in &points {
        for l in &lines {
            membership[p.index() * n_lines + l.index()] = incident(*p, *l);
        }
    }
    IncidenceStructure {
        dim,
        membership,
        points,
        lines,
    }
}

impl IncidenceStructure {
    pub fn dim(&self) -> PrimeDim {
        self.dim
    }

    pub fn n_points(&self) -> usize {
        self.points.len()
    }

    pub fn n_lines(&self) -> usize {
        self.lines.len()
    }

    pub fn points(&self) -> &[PointCoord] {
        &self.points
    }

    pub fn lines(&self) -> &[LineCoord] {
        &self.lines
    }

    pub fn is_incident(&self, point: usize, line: usize) -> bool {
        self.membership[point * self.n_lines() + line]
    }

    /// Flips one incidence bit; used by mutation tests and the CLI's
    /// corrupted-fixture mode.
    pub fn corrupt(&mut self, point: usize, line: usize) {
        let n = self.n_lines();
        self.membership[point * n + line] = !self.membership[point * n + line];
    }

    pub fn line_points(&self, line: usize) -> Vec<usize> {
        (0..self.n_points())
            .filter(|&p| self.is_incident(p, line))
            .collect()
    }

    pub fn point_lines(&self, point: usize) -> Vec<usize> {
        (0..self.n_lines())
            .filter(|&l| self.is_incident(point, l))
            .collect()
    }

    /// Column classes R_α: points sharing a basis column.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let d = self.dim.du();
        (0..d + 1)
            .map(|col| (col * d..(col + 1) * d).collect())
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let points: Vec<Value> = self
            .points
            .iter()
            .map(|p| {
                json!({
                    "index": p.index(),
                    "m": p.m.value(),
                    "basis": p.basis.label(),
                })
            })
            .collect();
        let lines: Vec<Value> = self
            .lines
            .iter()
            .map(|l| {
                json!({
                    "index": l.index(),
                    "m_cb": l.m_cb.value(),
                    "m0": l.m0.value(),
                    "points": self.line_points(l.index()),
                })
            })
            .collect();
        json!({ "d": self.dim.d(), "points": points, "lines": lines })
    }

    /// Incidence matrix as CSV, one row per point.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("point");
        for l in 0..self.n_lines() {
            out.push_str(&format!(",L{l}"));
        }
        out.push('\n');
        for p in 0..self.n_points() {
            out.push_str(&format!("{p}"));
            for l in 0..self.n_lines() {
                out.push_str(if self.is_incident(p, l) { ",1" } else { ",0" });
            }
            out.push('\n');
        }
        out
    }
}

/// Pass/fail result for one DAPG axiom.
#[derive(Debug, Clone, serde::Serialize)]
pub struct AxiomResult {
    pub axiom: char,
    pub pass: bool,
    pub counterexample: Option<String>,
}

/// Report over all five axioms.
#[derive(Debug, Clone, serde::Serialize)]
pub struct AxiomReport {
    pub d: u64,
    pub results: Vec<AxiomResult>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }
}

/// Exhaustively verifies DAPG axioms (a)–(e) against the incidence table.
pub fn check_axioms(inc: &IncidenceStructure) -> AxiomReport {
    let d = inc.dim().du();
    let mut results = Vec::new();

    // (a) counts: d² lines, d(d+1) points.
    let a_pass = inc.n_lines() == d * d && inc.n_points() == d * (d + 1);
    results.push(AxiomResult {
        axiom: 'a',
        pass: a_pass,
        counterexample: (!a_pass).then(|| {
            format!(
                "expected {} lines and {} points, found {} and {}",
                d * d,
                d * (d + 1),
                inc.n_lines(),
                inc.n_points()
            )
        }),
    });

    // (b) two points on a line determine it uniquely; distinct lines share
    // exactly one point.
    let mut b_fail = None;
    'b: for l1 in 0..inc.n_lines() {
        for l2 in l1 + 1..inc.n_lines() {
            let shared = inc
                .line_points(l1)
                .iter()
                .filter(|&&p| inc.is_incident(p, l2))
                .count();
            if shared != 1 {
                b_fail = Some(format!("lines {l1} and {l2} share {shared} points"));
                break 'b;
            }
        }
    }
    results.push(AxiomResult {
        axiom: 'b',
        pass: b_fail.is_none(),
        counterexample: b_fail,
    });

    // (c) each point on d lines; each line holds d+1 points.
    let mut c_fail = None;
    for p in 0..inc.n_points() {
        let deg = inc.point_lines(p).len();
        if deg != d {
            c_fail = Some(format!("point {p} lies on {deg} lines, expected {d}"));
            break;
        }
    }
    if c_fail.is_none() {
        for l in 0..inc.n_lines() {
            let size = inc.line_points(l).len();
            if size != d + 1 {
                c_fail = Some(format!("line {l} holds {size} points, expected {}", d + 1));
                break;
            }
        }
    }
    results.push(AxiomResult {
        axiom: 'c',
        pass: c_fail.is_none(),
        counterexample: c_fail,
    });

    // (d) columns are disjoint classes covering all points; no two class
    // members share a line.
    let mut d_fail = None;
    let classes = inc.classes();
    let covered: usize = classes.iter().map(|c| c.len()).sum();
    if covered != inc.n_points() {
        d_fail = Some(format!("classes cover {covered} of {} points", inc.n_points()));
    }
    'd: for class in &classes {
        for (i, &p1) in class.iter().enumerate() {
            for &p2 in &class[i + 1..] {
                if inc
                    .point_lines(p1)
                    .iter()
                    .any(|&l| inc.is_incident(p2, l))
                {
                    d_fail = Some(format!("class members {p1} and {p2} share a line"));
                    break 'd;
                }
            }
        }
    }
    results.push(AxiomResult {
        axiom: 'd',
        pass: d_fail.is_none(),
        counterexample: d_fail,
    });

    // (e) any two points from different classes share exactly one line.
    let mut e_fail = None;
    'e: for (ci, class1) in classes.iter().enumerate() {
        for class2 in &classes[ci + 1..] {
            for &p1 in class1 {
                for &p2 in class2 {
                    let shared = inc
                        .point_lines(p1)
                        .iter()
                        .filter(|&&l| inc.is_incident(p2, l))
                        .count();
                    if shared != 1 {
                        e_fail =
                            Some(format!("points {p1} and {p2} share {shared} lines"));
                        break 'e;
                    }
                }
            }
        }
    }
    results.push(AxiomResult {
        axiom: 'e',
        pass: e_fail.is_none(),
        counterexample: e_fail,
    });

    AxiomReport {
        d: inc.dim().d(),
        results,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(d: u64) -> PrimeDim {
        PrimeDim::new(d).unwrap()
    }

    #[test]
    fn worked_line_d3() {
        // Line (m̈=1, m₀=2) holds (1,CB), (2,0), (1,1), (0,2).
        let d3 = dim(3);
        let j = LineCoord::new(d3.elem(1), d3.elem(2));
        assert_eq!(line_row(j, BasisLabel::Cb).value(), 1);
        assert_eq!(line_row(j, BasisLabel::Fourier(d3.elem(0))).value(), 2);
        assert_eq!(line_row(j, BasisLabel::Fourier(d3.elem(1))).value(), 1);
        assert_eq!(line_row(j, BasisLabel::Fourier(d3.elem(2))).value(), 0);
    }

    #[test]
    fn row_at_b0_is_m0() {
        for d in [3u64, 5, 7] {
            let dd = dim(d);
            for j in all_lines(dd) {
                assert_eq!(line_row(j, BasisLabel::Fourier(dd.elem(0))), j.m0);
            }
        }
    }

    #[test]
    fn incidence_examples_d3() {
        let d3 = dim(3);
        let j = LineCoord::new(d3.elem(1), d3.elem(2));
        assert!(incident(PointCoord::new(d3.elem(1), BasisLabel::Cb), j));
        assert!(!incident(
            PointCoord::new(d3.elem(0), BasisLabel::Fourier(d3.elem(0))),
            j
        ));
        for m_cb in d3.elems() {
            let l = LineCoord::new(m_cb, d3.elem(2));
            assert!(incident(
                PointCoord::new(d3.elem(2), BasisLabel::Fourier(d3.elem(0))),
                l
            ));
        }
    }

    #[test]
    fn lines_through_cb_point() {
        let d3 = dim(3);
        let p = PointCoord::new(d3.elem(1), BasisLabel::Cb);
        let ls = lines_through(p);
        assert_eq!(ls.len(), 3);
        for (m0, l) in d3.elems().zip(&ls) {
            assert_eq!(*l, LineCoord::new(d3.elem(1), m0));
        }
    }

    #[test]
    fn lines_through_matches_incidence() {
        for d in [3u64, 5, 7] {
            let dd = dim(d);
            let inc = build_incidence(dd);
            for p in all_points(dd) {
                let ls = lines_through(p);
                assert_eq!(ls.len(), dd.du());
                for l in &ls {
                    assert!(incident(p, *l));
                    assert!(inc.is_incident(p.index(), l.index()));
                }
            }
        }
    }

    #[test]
    fn two_points_determine_one_line() {
        let d3 = dim(3);
        let p1 = PointCoord::new(d3.elem(1), BasisLabel::Cb);
        let p2 = PointCoord::new(d3.elem(2), BasisLabel::Fourier(d3.elem(0)));
        let common: Vec<_> = lines_through(p1)
            .into_iter()
            .filter(|l| lines_through(p2).contains(l))
            .collect();
        assert_eq!(common, vec![LineCoord::new(d3.elem(1), d3.elem(2))]);
    }

    #[test]
    fn counts() {
        let inc = build_incidence(dim(3));
        assert_eq!(inc.n_points(), 12);
        assert_eq!(inc.n_lines(), 9);
        for l in 0..9 {
            assert_eq!(inc.line_points(l).len(), 4);
        }
        let inc = build_incidence(dim(5));
        assert_eq!(inc.n_points(), 30);
        assert_eq!(inc.n_lines(), 25);
    }

    #[test]
    fn axioms_pass() {
        for d in [3u64, 7] {
            let report = check_axioms(&build_incidence(dim(d)));
            assert!(report.all_pass(), "{report:?}");
        }
    }

    #[test]
    fn mutated_table_fails_with_counterexample() {
        let mut inc = build_incidence(dim(3));
        inc.corrupt(0, 0);
        let report = check_axioms(&inc);
        assert!(!report.all_pass());
        assert!(report
            .results
            .iter()
            .any(|r| !r.pass && r.counterexample.is_some()));
    }

    #[test]
    fn double_counting() {
        for d in [3u64, 5, 7, 11, 13] {
            let dd = dim(d);
            let inc = build_incidence(dd);
            let du = dd.du();
            let point_sum: usize = (0..inc.n_points()).map(|p| inc.point_lines(p).len()).sum();
            let line_sum: usize = (0..inc.n_lines()).map(|l| inc.line_points(l).len()).sum();
            assert_eq!(point_sum, du * du * (du + 1));
            assert_eq!(line_sum, du * du * (du + 1));
        }
    }

    #[test]
    fn degenerate_slope_line_is_valid() {
        // When m̈ = half(d), 2m̈−1 = 0 and every Fourier row equals m₀.
        let d5 = dim(5);
        let j = LineCoord::new(d5.half(), d5.elem(4));
        for b in d5.elems() {
            assert_eq!(line_row(j, BasisLabel::Fourier(b)), d5.elem(4));
        }
        // Still d+1 distinct points since the columns differ.
        let pts = points_of(j);
        assert_eq!(pts.len(), 6);
        let mut idx: Vec<_> = pts.iter().map(|p| p.index()).collect();
        idx.dedup();
        assert_eq!(idx.len(), 6);
    }
}
