//! Verification suites: each check sweeps one identity of the construction
//! exhaustively at its pinned tolerance and reports the worst error seen,
//! with a counterexample on failure. The CLI's `verify` subcommand is a thin
//! shell over this module.

use num_complex::Complex64;
use serde::Serialize;

use crate::collective::{
    balance_in_collective, collective_mub_product, collective_ops, from_collective,
    line_state_collective, to_collective,
};
use crate::dapg::{all_lines, all_points, build_incidence, check_axioms, incident, lines_through};
use crate::entangled::{
    balance_state, leaky_component, line_state_closed, line_state_operator_form, line_state_sum,
    overlap_point_line, point_state,
};
use crate::linalg::{inner, partial_trace_first, partial_trace_second, OperatorMatrix, PhaseAmp,
    StateVector};
use crate::line_ops::{line_operator_closed, line_operator_sum, point_projector};
use crate::mean_king::{enumerate_protocol, infer_alignment, king_collapse, simulate,
    InferenceResult};
use crate::mub::{all_bases, check_eigenrelation, mub_state, tilde, BasisLabel};
use crate::prime_field::PrimeDim;
use crate::{TOL_EXACT, TOL_SWEEP};

/// Named verification suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Mub,
    Geometry,
    LineOps,
    Entangled,
    Collective,
    Mkp,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Option<Suite> {
        Some(match s {
            "mub" => Suite::Mub,
            "geometry" => Suite::Geometry,
            "lineops" => Suite::LineOps,
            "entangled" => Suite::Entangled,
            "collective" => Suite::Collective,
            "mkp" => Suite::Mkp,
            "all" => Suite::All,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Mub => "mub",
            Suite::Geometry => "geometry",
            Suite::LineOps => "lineops",
            Suite::Entangled => "entangled",
            Suite::Collective => "collective",
            Suite::Mkp => "mkp",
            Suite::All => "all",
        }
    }
}

/// One verified identity.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub id: String,
    /// The identity being swept, stated mathematically.
    pub property: String,
    pub tolerance: f64,
    pub max_error: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

/// Machine-readable suite outcome; `pass` iff every check passed.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub d: u64,
    pub suite: String,
    pub checks: Vec<Check>,
    pub pass: bool,
}

struct Sweep {
    id: &'static str,
    property: &'static str,
    tolerance: f64,
    max_error: f64,
    counterexample: Option<String>,
}

impl Sweep {
    fn new(id: &'static str, property: &'static str, tolerance: f64) -> Self {
        Sweep {
            id,
            property,
            tolerance,
            max_error: 0.0,
            counterexample: None,
        }
    }

    fn record(&mut self, err: f64, site: impl FnOnce() -> String) {
        if err > self.max_error {
            self.max_error = err;
            if err > self.tolerance {
                self.counterexample = Some(site());
            }
        }
    }

    fn fail(&mut self, site: String) {
        self.max_error = f64::INFINITY;
        self.counterexample = Some(site);
    }

    fn finish(self) -> Check {
        let pass = self.max_error <= self.tolerance;
        Check {
            id: self.id.to_string(),
            property: self.property.to_string(),
            tolerance: self.tolerance,
            max_error: self.max_error,
            pass,
            counterexample: if pass { None } else { self.counterexample },
        }
    }
}

/// Runs a suite for one dimension.
pub fn run_suite(dim: PrimeDim, suite: Suite) -> VerifyReport {
    let checks = match suite {
        Suite::Mub => mub_checks(dim),
        Suite::Geometry => geometry_checks(dim, false),
        Suite::LineOps => lineops_checks(dim),
        Suite::Entangled => entangled_checks(dim),
        Suite::Collective => collective_checks(dim),
        Suite::Mkp => mkp_checks(dim),
        Suite::All => {
            let mut all = mub_checks(dim);
            all.extend(geometry_checks(dim, false));
            all.extend(lineops_checks(dim));
            all.extend(entangled_checks(dim));
            all.extend(collective_checks(dim));
            all.extend(mkp_checks(dim));
            all
        }
    };
    let pass = checks.iter().all(|c| c.pass);
    VerifyReport {
        d: dim.d(),
        suite: suite.name().to_string(),
        checks,
        pass,
    }
}

/// Like [`run_suite`] but flips one incidence bit first; exercises the
/// failure path end to end.
pub fn run_geometry_corrupted(dim: PrimeDim) -> VerifyReport {
    let checks = geometry_checks(dim, true);
    let pass = checks.iter().all(|c| c.pass);
    VerifyReport {
        d: dim.d(),
        suite: "geometry".to_string(),
        checks,
        pass,
    }
}

fn mub_checks(dim: PrimeDim) -> Vec<Check> {
    let mut out = Vec::new();
    let bases = all_bases(dim);
    let states: Vec<Vec<StateVector>> = bases
        .iter()
        .map(|&b| dim.elems().map(|m| mub_state(m, b).vector).collect())
        .collect();
    let r = 1.0 / (dim.d() as f64).sqrt();

    let mut sweep = Sweep::new(
        "mub_unbiasedness",
        "|<m;b|m';b'>| = 1/sqrt(d) for all b != b', including CB",
        TOL_SWEEP,
    );
    for (i, si) in states.iter().enumerate() {
        for (k, sk) in states.iter().enumerate().skip(i + 1) {
            for (mi, v) in si.iter().enumerate() {
                for (mk, w) in sk.iter().enumerate() {
                    let err = (inner(v, w).unwrap().norm() - r).abs();
                    sweep.record(err, || {
                        format!("b={} m={mi} vs b'={} m'={mk}", bases[i].label(), bases[k].label())
                    });
                }
            }
        }
    }
    out.push(sweep.finish());

    let mut sweep = Sweep::new(
        "mub_orthonormality",
        "<m;b|m';b> = delta(m,m') within each basis",
        TOL_SWEEP,
    );
    for (bi, si) in states.iter().enumerate() {
        for (mi, v) in si.iter().enumerate() {
            for (mk, w) in si.iter().enumerate() {
                let expect = if mi == mk { 1.0 } else { 0.0 };
                let err = (inner(v, w).unwrap() - Complex64::new(expect, 0.0)).norm();
                sweep.record(err, || format!("b={} m={mi} m'={mk}", bases[bi].label()));
            }
        }
    }
    out.push(sweep.finish());

    let mut sweep = Sweep::new(
        "mub_eigenrelation",
        "X Z^b |m;b> = w^m |m;b>",
        TOL_EXACT,
    );
    for b in dim.elems() {
        for m in dim.elems() {
            let s = mub_state(m, BasisLabel::Fourier(b));
            if !check_eigenrelation(&s).unwrap() {
                sweep.fail(format!("b={b} m={m}"));
            }
        }
    }
    out.push(sweep.finish());

    let mut sweep = Sweep::new(
        "mub_conjugation_closure",
        "conj|m;b> = |d-m; d-b>, exact in phase form",
        0.0,
    );
    for b in dim.elems() {
        for m in dim.elems() {
            let s = mub_state(m, BasisLabel::Fourier(b)).vector.conj();
            let (mt, bt) = tilde(m, BasisLabel::Fourier(b));
            let t = mub_state(mt, bt).vector;
            if s.exact() != t.exact() {
                sweep.fail(format!("b={b} m={m}"));
            }
        }
    }
    out.push(sweep.finish());

    let mut sweep = Sweep::new(
        "mub_completeness",
        "sum_m |m;b><b;m| = identity for every b",
        TOL_SWEEP,
    );
    let d = dim.du();
    let id = OperatorMatrix::identity(dim, d);
    for (bi, si) in states.iter().enumerate() {
        let mut acc = OperatorMatrix::zeros(dim, d);
        for v in si {
            for i in 0..d {
                for j in 0..d {
                    *acc.entry_mut(i, j) += v.amp(i) * v.amp(j).conj();
                }
            }
        }
        sweep.record(acc.max_diff(&id), || format!("b={}", bases[bi].label()));
    }
    out.push(sweep.finish());

    out
}

fn geometry_checks(dim: PrimeDim, corrupt: bool) -> Vec<Check> {
    let mut inc = build_incidence(dim);
    if corrupt {
        inc.corrupt(0, 0);
    }
    let report = check_axioms(&inc);
    let mut out = Vec::new();
    let descriptions = [
        "d^2 lines and d(d+1) points",
        "two points determine a line; two lines share exactly one point",
        "point degree d; line size d+1",
        "columns partition the points; class members never share a line",
        "points of different classes share exactly one line",
    ];
    for (res, desc) in report.results.iter().zip(descriptions) {
        let mut sweep = Sweep::new(
            match res.axiom {
                'a' => "dapg_axiom_a",
                'b' => "dapg_axiom_b",
                'c' => "dapg_axiom_c",
                'd' => "dapg_axiom_d",
                _ => "dapg_axiom_e",
            },
            desc,
            0.0,
        );
        if !res.pass {
            sweep.fail(res.counterexample.clone().unwrap_or_default());
        }
        out.push(sweep.finish());
    }

    let mut sweep = Sweep::new(
        "dapg_lines_through",
        "solved pencil of each point agrees with the incidence table",
        0.0,
    );
    for p in all_points(dim) {
        let ls = lines_through(p);
        if ls.len() != dim.du() || !ls.iter().all(|l| incident(p, *l)) {
            sweep.fail(format!("point ({},{})", p.m, p.basis.label()));
        }
    }
    out.push(sweep.finish());

    out
}

fn lineops_checks(dim: PrimeDim) -> Vec<Check> {
    let mut out = Vec::new();
    let d = dim.du();

    let mut sweep = Sweep::new(
        "lineop_oracle",
        "sum over incident projectors minus identity = closed-form line operator",
        TOL_SWEEP,
    );
    for j in all_lines(dim) {
        let err = line_operator_sum(j)
            .matrix
            .max_diff(&line_operator_closed(j).matrix);
        sweep.record(err, || format!("j=({},{})", j.m_cb, j.m0));
    }
    out.push(sweep.finish());

    let mut sweep = Sweep::new(
        "lineop_unitary_hermitian",
        "every line operator is unitary and Hermitian",
        TOL_SWEEP,
    );
    for j in all_lines(dim) {
        let p = line_operator_closed(j).matrix;
        let err = p
            .matmul(&p.dagger())
            .unwrap()
            .max_diff(&OperatorMatrix::identity(dim, d))
            .max(p.max_diff(&p.dagger()));
        sweep.record(err, || format!("j=({},{})", j.m_cb, j.m0));
    }
    out.push(sweep.finish());

    let mut sweep = Sweep::new(
        "projector_idempotent",
        "A^2 = A, tr A = 1, A Hermitian for every point projector",
        TOL_EXACT,
    );
    for p in all_points(dim) {
        let a = point_projector(p).matrix;
        let err = a
            .matmul(&a)
            .unwrap()
            .max_diff(&a)
            .max((a.trace().re - 1.0).abs())
            .max(a.max_diff(&a.dagger()));
        sweep.record(err, || format!("point ({},{})", p.m, p.basis.label()));
    }
    out.push(sweep.finish());

    let mut sweep = Sweep::new(
        "projector_column_resolution",
        "sum_m A_(m,b) = identity for every column b",
        TOL_SWEEP,
    );
    let id = OperatorMatrix::identity(dim, d);
    for b in all_bases(dim) {
        let mut acc = OperatorMatrix::zeros(dim, d);
        for m in dim.elems() {
            acc = acc
                .add(&point_projector(crate::dapg::PointCoord::new(m, b)).matrix)
                .unwrap();
        }
        sweep.record(acc.max_diff(&id), || format!("b={}", b.label()));
    }
    out.push(sweep.finish());

    if dim.d() == 3 {
        let mut sweep = Sweep::new(
            "lineop_d3_fixture",
            "the d=3 worked matrices for A_(1,CB), A_(2,0), A_(1,1), A_(0,2), P_(1,2)",
            0.0,
        );
        if !d3_fixture_ok(dim) {
            sweep.fail("d=3 fixture mismatch".to_string());
        }
        out.push(sweep.finish());
    }

    out
}

fn d3_fixture_ok(dim: PrimeDim) -> bool {
    use crate::dapg::{LineCoord, PointCoord};
    let w = |k: i64| PhaseAmp::scaled(k, 2, dim);
    let fixtures: [(i64, Option<i64>, [i64; 9]); 3] = [
        (2, Some(0), [0, 2, 1, 1, 0, 2, 2, 1, 0]),
        (1, Some(1), [0, 1, 1, 2, 0, 0, 2, 0, 0]),
        (0, Some(2), [0, 0, 1, 0, 0, 1, 2, 2, 0]),
    ];
    for (m, b, ks) in fixtures {
        let basis = BasisLabel::Fourier(dim.elem(b.unwrap()));
        let a = point_projector(PointCoord::new(dim.elem(m), basis));
        let expect: Vec<PhaseAmp> = ks.iter().map(|&k| w(k)).collect();
        if a.matrix.exact() != Some(&expect[..]) {
            return false;
        }
    }
    let a = point_projector(PointCoord::new(dim.elem(1), BasisLabel::Cb));
    let e = a.matrix.exact().unwrap();
    if e[4] != PhaseAmp::one() || e.iter().enumerate().any(|(i, p)| i != 4 && !p.is_zero()) {
        return false;
    }
    let p = line_operator_closed(LineCoord::new(dim.elem(1), dim.elem(2)));
    let e = p.matrix.exact().unwrap();
    e[2] == PhaseAmp::scaled(1, 0, dim)
        && e[4] == PhaseAmp::scaled(0, 0, dim)
        && e[6] == PhaseAmp::scaled(2, 0, dim)
        && e.iter()
            .enumerate()
            .all(|(i, p)| matches!(i, 2 | 4 | 6) || p.is_zero())
}

fn entangled_checks(dim: PrimeDim) -> Vec<Check> {
    let mut out = Vec::new();
    let d = dim.du();
    let n = d * d;
    let r = 1.0 / (dim.d() as f64).sqrt();
    let line_states: Vec<StateVector> = all_lines(dim)
        .into_iter()
        .map(|j| line_state_closed(j).vector)
        .collect();

    let mut sweep = Sweep::new(
        "balance_formula",
        "sum_m |A_(m,b)> = sum_n |n>|n> for every column b",
        TOL_EXACT,
    );
    let bal = balance_state(dim).vector;
    for b in all_bases(dim) {
        let mut acc = StateVector::zero(dim, n);
        for m in dim.elems() {
            acc = acc
                .add(&point_state(crate::dapg::PointCoord::new(m, b)).vector)
                .unwrap();
        }
        sweep.record(acc.max_diff(&bal), || format!("b={}", b.label()));
    }
    out.push(sweep.finish());

    let mut sweep = Sweep::new(
        "line_state_cross_construction",
        "geometric sum = closed amplitude form = shift/clock operator form",
        TOL_EXACT,
    );
    for j in all_lines(dim) {
        let closed = &line_states[j.index()];
        let err = line_state_sum(j)
            .vector
            .max_diff(closed)
            .max(line_state_operator_form(j).vector.max_diff(closed));
        sweep.record(err, || format!("j=({},{})", j.m_cb, j.m0));
    }
    out.push(sweep.finish());

    let mut sweep = Sweep::new(
        "line_basis_gram",
        "<P_j|P_j'> = delta(j,j')",
        TOL_SWEEP,
    );
    for (i, a) in line_states.iter().enumerate() {
        for (k, b) in line_states.iter().enumerate() {
            let expect = if i == k { 1.0 } else { 0.0 };
            let err = (inner(a, b).unwrap() - Complex64::new(expect, 0.0)).norm();
            sweep.record(err, || format!("j={i} j'={k}"));
        }
    }
    out.push(sweep.finish());

    let mut sweep = Sweep::new(
        "line_basis_completeness",
        "sum_j |P_j><P_j| = identity on the d^2 space",
        TOL_SWEEP,
    );
    let mut acc = OperatorMatrix::zeros(dim, n);
    for v in &line_states {
        for i in 0..n {
            for k in 0..n {
                *acc.entry_mut(i, k) += v.amp(i) * v.amp(k).conj();
            }
        }
    }
    sweep.record(acc.max_diff(&OperatorMatrix::identity(dim, n)), String::new);
    out.push(sweep.finish());

    let mut sweep = Sweep::new(
        "line_state_max_entanglement",
        "partial trace of every |P_j> over either particle = identity/d",
        TOL_EXACT,
    );
    let target = OperatorMatrix::identity(dim, d).scale(Complex64::new(1.0 / d as f64, 0.0));
    for j in all_lines(dim) {
        let v = &line_states[j.index()];
        let err = partial_trace_first(v)
            .unwrap()
            .max_diff(&target)
            .max(partial_trace_second(v).unwrap().max_diff(&target));
        sweep.record(err, || format!("j=({},{})", j.m_cb, j.m0));
    }
    out.push(sweep.finish());

    let mut sweep = Sweep::new(
        "overlap_relation",
        "|<A_a|P_j>| = 1/sqrt(d) iff the point lies on the line, else 0",
        TOL_SWEEP,
    );
    for j in all_lines(dim) {
        for p in all_points(dim) {
            let ov = overlap_point_line(p, j).norm();
            let expect = if incident(p, j) { r } else { 0.0 };
            sweep.record((ov - expect).abs(), || {
                format!("point ({},{}) line ({},{})", p.m, p.basis.label(), j.m_cb, j.m0)
            });
        }
    }
    out.push(sweep.finish());

    let mut sweep = Sweep::new(
        "leaky_particle",
        "|<b,m|_1 P_j>|^2 = 1/d and the residual is one particle-2 MUB state \
         up to a d-th root of unity",
        TOL_SWEEP,
    );
    for j in all_lines(dim) {
        for b in dim.elems() {
            for m in dim.elems() {
                match leaky_component(m, BasisLabel::Fourier(b), j) {
                    Ok(lc) => {
                        let err = (lc.residual.norm_sq() - 1.0 / dim.d() as f64).abs();
                        sweep.record(err, || {
                            format!("m={m} b={b} j=({},{})", j.m_cb, j.m0)
                        });
                    }
                    Err(_) => sweep.fail(format!(
                        "no MUB match for m={m} b={b} j=({},{})",
                        j.m_cb, j.m0
                    )),
                }
            }
        }
    }
    out.push(sweep.finish());

    out
}

fn collective_checks(dim: PrimeDim) -> Vec<Check> {
    let mut out = Vec::new();
    let n = dim.du() * dim.du();

    let mut sweep = Sweep::new(
        "collective_bijection",
        "(n1,n2) <-> (n_r,n_c) round-trips over all pairs",
        0.0,
    );
    for n1 in dim.elems() {
        for n2 in dim.elems() {
            if from_collective(to_collective(n1, n2)) != (n1, n2) {
                sweep.fail(format!("(n1,n2)=({n1},{n2})"));
            }
        }
    }
    out.push(sweep.finish());

    let mut sweep = Sweep::new(
        "collective_commutation",
        "Zs Xs = w Xs Zs within a sector; cross-sector operators commute",
        TOL_EXACT,
    );
    let ops = collective_ops(dim);
    let w = PhaseAmp::phase(1, dim).to_complex(dim);
    for (name, x, z, phase) in [
        ("r", &ops.x_r, &ops.z_r, w),
        ("c", &ops.x_c, &ops.z_c, w),
        ("rc", &ops.x_r, &ops.z_c, Complex64::new(1.0, 0.0)),
        ("cr", &ops.x_c, &ops.z_r, Complex64::new(1.0, 0.0)),
    ] {
        let lhs = z.matmul(x).unwrap();
        let rhs = x.matmul(z).unwrap().scale(phase);
        sweep.record(lhs.max_diff(&rhs), || format!("sector pair {name}"));
    }
    let id = OperatorMatrix::identity(dim, n);
    sweep.record(ops.z_r.pow(dim.d()).max_diff(&id), || "Z_r^d".to_string());
    sweep.record(ops.z_c.pow(dim.d()).max_diff(&id), || "Z_c^d".to_string());
    out.push(sweep.finish());

    let mut sweep = Sweep::new(
        "collective_product_identity",
        "|m_cb;CB>_c x |2m0;0>_r permuted to particle order = |P_j>, phase-free",
        TOL_EXACT,
    );
    for j in all_lines(dim) {
        let coll = line_state_collective(j);
        let closed = line_state_closed(j).vector;
        let err = coll.max_diff(&closed);
        sweep.record(err, || {
            let phase = inner(&closed, &coll).unwrap();
            format!(
                "j=({},{}): relative phase {:.6}+{:.6}i",
                j.m_cb, j.m0, phase.re, phase.im
            )
        });
    }
    out.push(sweep.finish());

    let mut sweep = Sweep::new(
        "collective_balance",
        "normalized balance state = |0;CB>_r |0;0>_c",
        TOL_EXACT,
    );
    let bal = balance_state(dim)
        .vector
        .scale(Complex64::new(1.0 / (dim.d() as f64).sqrt(), 0.0));
    sweep.record(balance_in_collective(dim).max_diff(&bal), String::new);
    out.push(sweep.finish());

    let mut sweep = Sweep::new(
        "collective_entanglement",
        "collective products with b_r != b_c are maximally entangled",
        TOL_EXACT,
    );
    let target = OperatorMatrix::identity(dim, dim.du())
        .scale(Complex64::new(1.0 / dim.d() as f64, 0.0));
    let bases = all_bases(dim);
    for &br in &bases {
        for &bc in &bases {
            if br == bc {
                continue;
            }
            for mr in dim.elems() {
                for mc in dim.elems() {
                    let v = collective_mub_product(mr, br, mc, bc).unwrap();
                    let err = partial_trace_first(&v).unwrap().max_diff(&target);
                    sweep.record(err, || {
                        format!("b_r={} b_c={} m_r={mr} m_c={mc}", br.label(), bc.label())
                    });
                }
            }
        }
    }
    out.push(sweep.finish());

    out
}

fn mkp_checks(dim: PrimeDim) -> Vec<Check> {
    let mut out = Vec::new();
    let lines = all_lines(dim);
    let line_states: Vec<StateVector> = lines
        .iter()
        .map(|j| line_state_closed(*j).vector)
        .collect();

    let mut delta = Sweep::new(
        "mkp_delta_relation",
        "Alice amplitude vanishes unless m0'-m0 = b(mcb-mcb') (Fourier) or mcb'=mcb (CB)",
        TOL_EXACT,
    );
    let mut sound = Sweep::new(
        "mkp_inference_soundness",
        "a unique inference is never contradicted by a nonzero amplitude",
        0.0,
    );
    let mut ambiguity = Sweep::new(
        "mkp_ambiguity_probability",
        "the outcome j'=j carries total probability 1/d for every Fourier basis",
        TOL_SWEEP,
    );
    for &j in &lines {
        for b in all_bases(dim) {
            let mut amb_total = 0.0;
            for m in dim.elems() {
                let collapsed = king_collapse(j, b, m);
                for &jp in &lines {
                    let amp = inner(&line_states[jp.index()], &collapsed).unwrap();
                    let supported = match b {
                        BasisLabel::Cb => jp.m_cb == j.m_cb,
                        BasisLabel::Fourier(bf) => {
                            (jp.m0 - j.m0) == bf * (j.m_cb - jp.m_cb)
                        }
                    };
                    if supported {
                        // magnitude 1/d against the unnormalized collapse
                        delta.record((amp.norm() - 1.0 / dim.d() as f64).abs(), || {
                            format!(
                                "j=({},{}) b={} m={m} j'=({},{})",
                                j.m_cb, j.m0, b.label(), jp.m_cb, jp.m0
                            )
                        });
                    } else {
                        delta.record(amp.norm(), || {
                            format!(
                                "j=({},{}) b={} m={m} j'=({},{})",
                                j.m_cb, j.m0, b.label(), jp.m_cb, jp.m0
                            )
                        });
                        if amp.norm() > TOL_EXACT {
                            sound.fail(format!(
                                "unsupported outcome with amplitude {} at j'=({},{})",
                                amp.norm(), jp.m_cb, jp.m0
                            ));
                        }
                    }
                    if amp.norm() > TOL_EXACT {
                        // inference must be either ambiguous or name b
                        match infer_alignment(j, jp) {
                            InferenceResult::Unique(bi) if bi != b => sound.fail(format!(
                                "inference {} contradicts basis {} at j'=({},{})",
                                bi.label(), b.label(), jp.m_cb, jp.m0
                            )),
                            _ => {}
                        }
                    }
                    if jp == j {
                        amb_total += amp.norm_sqr();
                    }
                }
            }
            if matches!(b, BasisLabel::Fourier(_)) {
                ambiguity.record((amb_total - 1.0 / dim.d() as f64).abs(), || {
                    format!("j=({},{}) b={}", j.m_cb, j.m0, b.label())
                });
            }
        }
    }
    out.push(delta.finish());
    out.push(sound.finish());
    out.push(ambiguity.finish());

    let mut sweep = Sweep::new(
        "mkp_enumeration_consistency",
        "per-basis joint probabilities sum to 1 and mismatches never occur",
        TOL_SWEEP,
    );
    let j = lines[lines.len() / 2];
    let table = enumerate_protocol(dim, j);
    for b in all_bases(dim) {
        let total: f64 = table
            .rows
            .iter()
            .filter(|row| row.king_basis == b)
            .map(|row| row.prob)
            .sum();
        sweep.record((total - 1.0).abs(), || format!("b={}", b.label()));
    }
    out.push(sweep.finish());

    let mut sweep = Sweep::new(
        "mkp_monte_carlo",
        "seeded simulation matches the exact success rate (d-1)/d within 3 sigma",
        0.0,
    );
    let trials = 20_000u64;
    let b = BasisLabel::Fourier(dim.elem(1));
    let stats = simulate(dim, j, b, trials, 0xA11CE);
    if stats.mismatch != 0 {
        sweep.fail(format!("{} mismatches", stats.mismatch));
    }
    let p = (dim.d() - 1) as f64 / dim.d() as f64;
    let sigma = (p * (1.0 - p) / trials as f64).sqrt();
    let rate = stats.success as f64 / trials as f64;
    if (rate - p).abs() > 3.0 * sigma {
        sweep.fail(format!("success rate {rate} vs expected {p}"));
    }
    out.push(sweep.finish());

    out
}
