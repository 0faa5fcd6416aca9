//! Dense complex vectors and matrices over dimensions d and d², plus the
//! exact amplitude type.
//!
//! Every amplitude produced by the constructions in this crate has the exact
//! form ω^k · d^(−s/2) with ω = exp(2πi/d) (the quadratic exponent n(n−1) is
//! always even, so all phases are integer powers of ω). [`PhaseAmp`] carries
//! that form alongside the complex doubles; equality checks prefer the exact
//! representation and fall back to a tolerance.
//!
//! Index convention, fixed globally: a two-particle component (n₁, n₂) sits
//! at index n₁·d + n₂ (particle 1 is the slow index).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::prime_field::PrimeDim;
use crate::{Error, TOL};

/// Exactly 0 or ω^k · d^(−s/2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseAmp {
    Zero,
    Phase { k: u64, s: u32 },
}

impl PhaseAmp {
    /// ω^k with no scale factor.
    pub fn phase(k: i64, dim: PrimeDim) -> Self {
        PhaseAmp::Phase {
            k: dim.elem(k).value(),
            s: 0,
        }
    }

    /// ω^k · d^(−s/2).
    pub fn scaled(k: i64, s: u32, dim: PrimeDim) -> Self {
        PhaseAmp::Phase {
            k: dim.elem(k).value(),
            s,
        }
    }

    pub fn one() -> Self {
        PhaseAmp::Phase { k: 0, s: 0 }
    }

    pub fn is_zero(self) -> bool {
        matches!(self, PhaseAmp::Zero)
    }

    /// Product of two exact amplitudes: phases add mod d, scales add.
    pub fn mul(self, other: PhaseAmp, dim: PrimeDim) -> PhaseAmp {
        match (self, other) {
            (PhaseAmp::Phase { k: k1, s: s1 }, PhaseAmp::Phase { k: k2, s: s2 }) => {
                PhaseAmp::Phase {
                    k: (k1 + k2) % dim.d(),
                    s: s1 + s2,
                }
            }
            _ => PhaseAmp::Zero,
        }
    }

    pub fn conj(self, dim: PrimeDim) -> PhaseAmp {
        match self {
            PhaseAmp::Zero => PhaseAmp::Zero,
            PhaseAmp::Phase { k, s } => PhaseAmp::Phase {
                k: (dim.d() - k) % dim.d(),
                s,
            },
        }
    }

    pub fn to_complex(self, dim: PrimeDim) -> Complex64 {
        match self {
            PhaseAmp::Zero => Complex64::new(0.0, 0.0),
            PhaseAmp::Phase { k, s } => {
                let arg = 2.0 * PI * k as f64 / dim.d() as f64;
                let modulus = (dim.d() as f64).powf(-(s as f64) / 2.0);
                Complex64::from_polar(modulus, arg)
            }
        }
    }

    pub fn to_json(self) -> Value {
        match self {
            PhaseAmp::Zero => Value::Null,
            PhaseAmp::Phase { k, s } => json!({ "k": k, "s": s }),
        }
    }
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

/// Dense complex vector of dimension d or d² over a base prime dimension.
#[derive(Debug, Clone)]
pub struct StateVector {
    base: PrimeDim,
    amps: Vec<Complex64>,
    exact: Option<Vec<PhaseAmp>>,
}

impl StateVector {
    pub fn from_amps(base: PrimeDim, amps: Vec<Complex64>) -> Self {
        StateVector {
            base,
            amps,
            exact: None,
        }
    }

    /// Builds from exact amplitudes; the complex array is derived.
    pub fn from_exact(base: PrimeDim, exact: Vec<PhaseAmp>) -> Self {
        let amps = exact.iter().map(|p| p.to_complex(base)).collect();
        StateVector {
            base,
            amps,
            exact: Some(exact),
        }
    }

    pub fn zero(base: PrimeDim, dim: usize) -> Self {
        StateVector {
            base,
            amps: vec![Complex64::new(0.0, 0.0); dim],
            exact: None,
        }
    }

    /// Unit vector |index⟩ of the given total dimension.
    pub fn basis_vector(base: PrimeDim, dim: usize, index: usize) -> Self {
        let mut exact = vec![PhaseAmp::Zero; dim];
        exact[index] = PhaseAmp::one();
        Self::from_exact(base, exact)
    }

    pub fn base(&self) -> PrimeDim {
        self.base
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amp(&self, i: usize) -> Complex64 {
        self.amps[i]
    }

    pub fn exact(&self) -> Option<&[PhaseAmp]> {
        self.exact.as_deref()
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(&self, c: Complex64) -> StateVector {
        StateVector {
            base: self.base,
            amps: self.amps.iter().map(|a| a * c).collect(),
            exact: None,
        }
    }

    pub fn add(&self, other: &StateVector) -> Result<StateVector, Error> {
        if self.dim() != other.dim() || self.base != other.base {
            return Err(Error::DimMismatch);
        }
        Ok(StateVector {
            base: self.base,
            amps: self
                .amps
                .iter()
                .zip(&other.amps)
                .map(|(a, b)| a + b)
                .collect(),
            exact: None,
        })
    }

    pub fn sub(&self, other: &StateVector) -> Result<StateVector, Error> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn normalized(&self) -> StateVector {
        self.scale(Complex64::new(1.0 / self.norm(), 0.0))
    }

    pub fn conj(&self) -> StateVector {
        StateVector {
            base: self.base,
            amps: self.amps.iter().map(|a| a.conj()).collect(),
            exact: self
                .exact
                .as_ref()
                .map(|e| e.iter().map(|p| p.conj(self.base)).collect()),
        }
    }

    /// Max absolute entrywise difference.
    pub fn max_diff(&self, other: &StateVector) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Exact comparison when both carry exact amplitudes, else entrywise
    /// tolerance (default [`TOL`]).
    pub fn approx_eq(&self, other: &StateVector, tol: Option<f64>) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        if let (Some(a), Some(b)) = (&self.exact, &other.exact) {
            return a == b;
        }
        self.max_diff(other) < tol.unwrap_or(TOL)
    }

    pub fn to_json(&self) -> Value {
        let mut obj = json!({
            "dim": self.dim(),
            "amps": self.amps.iter().map(|&z| complex_json(z)).collect::<Vec<_>>(),
        });
        if let Some(e) = &self.exact {
            obj["exact"] = Value::Array(e.iter().map(|p| p.to_json()).collect());
        }
        obj
    }
}

/// ⟨a|b⟩, conjugate-linear in the first argument.
pub fn inner(a: &StateVector, b: &StateVector) -> Result<Complex64, Error> {
    if a.dim() != b.dim() || a.base() != b.base() {
        return Err(Error::DimMismatch);
    }
    Ok(a.amps
        .iter()
        .zip(&b.amps)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// |a⟩ ⊗ |b⟩ with component ordering index(n₁,n₂) = n₁·dim(b) + n₂.
pub fn tensor(a: &StateVector, b: &StateVector) -> Result<StateVector, Error> {
    if a.base() != b.base() {
        return Err(Error::DimMismatch);
    }
    let base = a.base();
    let mut amps = Vec::with_capacity(a.dim() * b.dim());
    for x in &a.amps {
        for y in &b.amps {
            amps.push(x * y);
        }
    }
    let exact = match (&a.exact, &b.exact) {
        (Some(ea), Some(eb)) => {
            let mut e = Vec::with_capacity(ea.len() * eb.len());
            for &x in ea {
                for &y in eb {
                    e.push(x.mul(y, base));
                }
            }
            Some(e)
        }
        _ => None,
    };
    Ok(StateVector {
        base,
        amps,
        exact,
    })
}

/// Traces out particle 1 (the slow index) of a pure state over d².
pub fn partial_trace_first(v: &StateVector) -> Result<OperatorMatrix, Error> {
    let d = v.base().du();
    if v.dim() != d * d {
        return Err(Error::NotSquareDim(v.dim()));
    }
    let mut rho = OperatorMatrix::zeros(v.base(), d);
    for n1 in 0..d {
        for i in 0..d {
            for j in 0..d {
                let z = v.amp(n1 * d + i) * v.amp(n1 * d + j).conj();
                *rho.entry_mut(i, j) += z;
            }
        }
    }
    Ok(rho)
}

/// Traces out particle 2 (the fast index) of a pure state over d².
pub fn partial_trace_second(v: &StateVector) -> Result<OperatorMatrix, Error> {
    let d = v.base().du();
    if v.dim() != d * d {
        return Err(Error::NotSquareDim(v.dim()));
    }
    let mut rho = OperatorMatrix::zeros(v.base(), d);
    for n2 in 0..d {
        for i in 0..d {
            for j in 0..d {
                let z = v.amp(i * d + n2) * v.amp(j * d + n2).conj();
                *rho.entry_mut(i, j) += z;
            }
        }
    }
    Ok(rho)
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    base: PrimeDim,
    dim: usize,
    entries: Vec<Complex64>,
    exact: Option<Vec<PhaseAmp>>,
}

impl OperatorMatrix {
    pub fn zeros(base: PrimeDim, dim: usize) -> Self {
        OperatorMatrix {
            base,
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
            exact: None,
        }
    }

    pub fn identity(base: PrimeDim, dim: usize) -> Self {
        let mut exact = vec![PhaseAmp::Zero; dim * dim];
        for i in 0..dim {
            exact[i * dim + i] = PhaseAmp::one();
        }
        Self::from_exact(base, dim, exact)
    }

    pub fn from_exact(base: PrimeDim, dim: usize, exact: Vec<PhaseAmp>) -> Self {
        assert_eq!(exact.len(), dim * dim);
        let entries = exact.iter().map(|p| p.to_complex(base)).collect();
        OperatorMatrix {
            base,
            dim,
            entries,
            exact: Some(exact),
        }
    }

    pub fn base(&self) -> PrimeDim {
        self.base
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    pub fn entry_mut(&mut self, i: usize, j: usize) -> &mut Complex64 {
        self.exact = None;
        &mut self.entries[i * self.dim + j]
    }

    pub fn exact(&self) -> Option<&[PhaseAmp]> {
        self.exact.as_deref()
    }

    pub fn exact_entry(&self, i: usize, j: usize) -> Option<PhaseAmp> {
        self.exact.as_ref().map(|e| e[i * self.dim + j])
    }

    /// Standard matrix-vector product.
    pub fn apply(&self, v: &StateVector) -> Result<StateVector, Error> {
        if v.dim() != self.dim || v.base() != self.base {
            return Err(Error::DimMismatch);
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); self.dim];
        for i in 0..self.dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..self.dim {
                acc += self.entry(i, j) * v.amp(j);
            }
            amps[i] = acc;
        }
        Ok(StateVector::from_amps(self.base, amps))
    }

    pub fn matmul(&self, other: &OperatorMatrix) -> Result<OperatorMatrix, Error> {
        if self.dim != other.dim || self.base != other.base {
            return Err(Error::DimMismatch);
        }
        let mut out = OperatorMatrix::zeros(self.base, self.dim);
        for i in 0..self.dim {
            for k in 0..self.dim {
                let a = self.entry(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..self.dim {
                    out.entries[i * self.dim + j] += a * other.entry(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn dagger(&self) -> OperatorMatrix {
        let mut out = OperatorMatrix::zeros(self.base, self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.entries[j * self.dim + i] = self.entry(i, j).conj();
            }
        }
        out.exact = self.exact.as_ref().map(|e| {
            let mut t = vec![PhaseAmp::Zero; self.dim * self.dim];
            for i in 0..self.dim {
                for j in 0..self.dim {
                    t[j * self.dim + i] = e[i * self.dim + j].conj(self.base);
                }
            }
            t
        });
        out
    }

    pub fn add(&self, other: &OperatorMatrix) -> Result<OperatorMatrix, Error> {
        if self.dim != other.dim || self.base != other.base {
            return Err(Error::DimMismatch);
        }
        let mut out = OperatorMatrix::zeros(self.base, self.dim);
        for (o, (a, b)) in out
            .entries
            .iter_mut()
            .zip(self.entries.iter().zip(&other.entries))
        {
            *o = a + b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &OperatorMatrix) -> Result<OperatorMatrix, Error> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> OperatorMatrix {
        OperatorMatrix {
            base: self.base,
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * c).collect(),
            exact: None,
        }
    }

    /// Integer matrix power (dim is tiny, repeated multiplication is fine).
    pub fn pow(&self, e: u64) -> OperatorMatrix {
        let mut out = OperatorMatrix::identity(self.base, self.dim);
        for _ in 0..e {
            out = out.matmul(self).unwrap();
        }
        out
    }

    /// A ⊗ B over the fixed index convention.
    pub fn kron(&self, other: &OperatorMatrix) -> Result<OperatorMatrix, Error> {
        if self.base != other.base {
            return Err(Error::DimMismatch);
        }
        let d1 = self.dim;
        let d2 = other.dim;
        let dim = d1 * d2;
        let mut out = OperatorMatrix::zeros(self.base, dim);
        for i1 in 0..d1 {
            for j1 in 0..d1 {
                let a = self.entry(i1, j1);
                for i2 in 0..d2 {
                    for j2 in 0..d2 {
                        out.entries[(i1 * d2 + i2) * dim + (j1 * d2 + j2)] =
                            a * other.entry(i2, j2);
                    }
                }
            }
        }
        if let (Some(ea), Some(eb)) = (&self.exact, &other.exact) {
            let mut e = vec![PhaseAmp::Zero; dim * dim];
            for i1 in 0..d1 {
                for j1 in 0..d1 {
                    let a = ea[i1 * d1 + j1];
                    for i2 in 0..d2 {
                        for j2 in 0..d2 {
                            e[(i1 * d2 + i2) * dim + (j1 * d2 + j2)] =
                                a.mul(eb[i2 * d2 + j2], self.base);
                        }
                    }
                }
            }
            out.exact = Some(e);
        }
        Ok(out)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.entry(i, i)).sum()
    }

    pub fn max_diff(&self, other: &OperatorMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &OperatorMatrix, tol: Option<f64>) -> bool {
        if self.dim != other.dim {
            return false;
        }
        if let (Some(a), Some(b)) = (&self.exact, &other.exact) {
            return a == b;
        }
        self.max_diff(other) < tol.unwrap_or(TOL)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_diff(&self.dagger()) < tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.matmul(&self.dagger())
            .unwrap()
            .max_diff(&OperatorMatrix::identity(self.base, self.dim))
            < tol
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = (0..self.dim)
            .map(|i| {
                Value::Array((0..self.dim).map(|j| complex_json(self.entry(i, j))).collect())
            })
            .collect();
        let mut obj = json!({ "dim": self.dim, "entries": rows });
        if let Some(e) = &self.exact {
            let erows: Vec<Value> = (0..self.dim)
                .map(|i| {
                    Value::Array((0..self.dim).map(|j| e[i * self.dim + j].to_json()).collect())
                })
                .collect();
            obj["exact"] = Value::Array(erows);
        }
        obj
    }
}

/// The inversion permutation 𝓘: |n⟩ → |d−n mod d⟩.
pub fn inversion_op(dim: PrimeDim) -> OperatorMatrix {
    let d = dim.du();
    let mut exact = vec![PhaseAmp::Zero; d * d];
    for n in 0..d {
        let t = (d - n) % d;
        exact[t * d + n] = PhaseAmp::one();
    }
    OperatorMatrix::from_exact(dim, d, exact)
}
