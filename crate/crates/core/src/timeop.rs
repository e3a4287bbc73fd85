//! Time-dependent operators: the piecewise-analytic Hamiltonians assembled by
//! the system model and arbitrary closures used by the effective models.

use num_complex::Complex;

use crate::algebra::{Operator, SparseOp};
use crate::scalar::{cis, Real};

/// A Hermitian operator-valued function of time.
pub trait TimeOperator<T: Real>: Sync {
    fn dim(&self) -> usize;

    /// Writes `H(t)` into `out` as a coordinate list (duplicates add).
    fn fill(&self, t: T, out: &mut SparseOp<T>);

    /// Largest angular frequency scale present (rad per unit time).
    fn frequency_scale(&self) -> T;

    /// Times at which `H(t)` is discontinuous.
    fn breakpoints(&self) -> Vec<T> {
        Vec::new()
    }

    fn at(&self, t: T) -> Operator<T> {
        let mut sp = SparseOp::new(self.dim());
        self.fill(t, &mut sp);
        sp.to_dense()
    }
}

/// Scalar time profile multiplying one operator term.
#[derive(Debug, Clone, PartialEq)]
pub enum Envelope<T> {
    Constant(T),
    /// `amplitude * cos(frequency * t)`
    Cosine { amplitude: T, frequency: T },
    /// `amplitude * cos^2(frequency * t)`
    CosineSquared { amplitude: T, frequency: T },
    /// `offset + amplitude * cos(frequency * t)`
    OffsetCosine { offset: T, amplitude: T, frequency: T },
    /// `amplitude` inside any half-open window `[start, end)`, zero elsewhere.
    Windows { amplitude: T, windows: Vec<(T, T)> },
    /// `sum_k a_k exp(i f_k t)`
    Phasors(Vec<(Complex<T>, T)>),
}

impl<T: Real> Envelope<T> {
    pub fn value(&self, t: T) -> Complex<T> {
        let real = |x: T| Complex::new(x, T::zero());
        match self {
            Envelope::Constant(a) => real(*a),
            Envelope::Cosine { amplitude, frequency } => real(*amplitude * (*frequency * t).cos()),
            Envelope::CosineSquared { amplitude, frequency } => {
                let c = (*frequency * t).cos();
                real(*amplitude * c * c)
            }
            Envelope::OffsetCosine { offset, amplitude, frequency } => {
                real(*offset + *amplitude * (*frequency * t).cos())
            }
            Envelope::Windows { amplitude, windows } => {
                if windows.iter().any(|&(a, b)| t >= a && t < b) {
                    real(*amplitude)
                } else {
                    real(T::zero())
                }
            }
            Envelope::Phasors(list) => {
                list.iter().fold(real(T::zero()), |acc, &(a, f)| acc + a * cis(f * t))
            }
        }
    }

    fn magnitude_bound(&self) -> T {
        match self {
            Envelope::Constant(a) => a.abs(),
            Envelope::Cosine { amplitude, .. }
            | Envelope::CosineSquared { amplitude, .. }
            | Envelope::Windows { amplitude, .. } => amplitude.abs(),
            Envelope::OffsetCosine { offset, amplitude, .. } => offset.abs() + amplitude.abs(),
            Envelope::Phasors(list) => list.iter().map(|(a, _)| a.norm()).sum(),
        }
    }

    fn max_frequency(&self) -> T {
        match self {
            Envelope::Constant(_) | Envelope::Windows { .. } => T::zero(),
            Envelope::Cosine { frequency, .. } | Envelope::OffsetCosine { frequency, .. } => frequency.abs(),
            Envelope::CosineSquared { frequency, .. } => frequency.abs() + frequency.abs(),
            Envelope::Phasors(list) => list.iter().fold(T::zero(), |m, (_, f)| m.max(f.abs())),
        }
    }

    fn breakpoints(&self) -> Vec<T> {
        match self {
            Envelope::Windows { windows, .. } => windows.iter().flat_map(|&(a, b)| [a, b]).collect(),
            _ => Vec::new(),
        }
    }
}

/// `c(t) A (+ conj(c(t)) A^dagger)` with `c(t) = envelope(t) e^{i phase_rate t}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term<T> {
    pub envelope: Envelope<T>,
    pub phase_rate: T,
    op: SparseOp<T>,
    op_dagger: Option<SparseOp<T>>,
}

impl<T: Real> Term<T> {
    /// A term that is its own Hermitian partner (real envelope, Hermitian `op`).
    pub fn hermitian(envelope: Envelope<T>, op: &Operator<T>) -> Self {
        Self { envelope, phase_rate: T::zero(), op: SparseOp::from_dense(op), op_dagger: None }
    }

    /// `c(t) A + H.c.`
    pub fn with_conjugate(envelope: Envelope<T>, phase_rate: T, op: &Operator<T>) -> Self {
        let op = SparseOp::from_dense(op);
        let op_dagger = Some(op.dagger());
        Self { envelope, phase_rate, op, op_dagger }
    }

    pub fn coefficient(&self, t: T) -> Complex<T> {
        let c = self.envelope.value(t);
        if self.phase_rate == T::zero() {
            c
        } else {
            c * cis(self.phase_rate * t)
        }
    }

    fn restrict(&self, map: &[Option<usize>], dim: usize) -> Self {
        let restrict_sp = |sp: &SparseOp<T>| {
            let mut out = SparseOp::new(dim);
            for &(r, c, v) in sp.entries() {
                if let (Some(r), Some(c)) = (map[r], map[c]) {
                    out.push(r, c, v);
                }
            }
            out
        };
        Self {
            envelope: self.envelope.clone(),
            phase_rate: self.phase_rate,
            op: restrict_sp(&self.op),
            op_dagger: self.op_dagger.as_ref().map(restrict_sp),
        }
    }
}

/// Static part plus a list of time-dependent terms.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian<T> {
    dim: usize,
    static_part: SparseOp<T>,
    terms: Vec<Term<T>>,
}

impl<T: Real> Hamiltonian<T> {
    pub fn new(dim: usize) -> Self {
        Self { dim, static_part: SparseOp::new(dim), terms: Vec::new() }
    }

    pub fn add_static(&mut self, op: &Operator<T>) {
        assert_eq!(op.dim(), self.dim, "static term dimension");
        self.static_part.push_dense(op, Complex::new(T::one(), T::zero()));
    }

    pub fn add_term(&mut self, term: Term<T>) {
        assert_eq!(term.op.dim(), self.dim, "term dimension");
        self.terms.push(term);
    }

    pub fn terms(&self) -> &[Term<T>] {
        &self.terms
    }

    pub fn static_operator(&self) -> Operator<T> {
        self.static_part.to_dense()
    }

    /// Restriction to a subset of basis states; couplings leaving the subset
    /// are discarded.
    pub fn restrict(&self, keep: &[usize]) -> Self {
        let mut map = vec![None; self.dim];
        for (k, &i) in keep.iter().enumerate() {
            map[i] = Some(k);
        }
        let dim = keep.len();
        let mut static_part = SparseOp::new(dim);
        for &(r, c, v) in self.static_part.entries() {
            if let (Some(r), Some(c)) = (map[r], map[c]) {
                static_part.push(r, c, v);
            }
        }
        Self { dim, static_part, terms: self.terms.iter().map(|t| t.restrict(&map, dim)).collect() }
    }
}

fn sparse_max_abs<T: Real>(sp: &SparseOp<T>) -> T {
    sp.to_dense().max_abs()
}

impl<T: Real> TimeOperator<T> for Hamiltonian<T> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn fill(&self, t: T, out: &mut SparseOp<T>) {
        out.clear();
        let one = Complex::new(T::one(), T::zero());
        out.push_scaled(&self.static_part, one);
        for term in &self.terms {
            let c = term.coefficient(t);
            if c.re == T::zero() && c.im == T::zero() {
                continue;
            }
            out.push_scaled(&term.op, c);
            if let Some(dag) = &term.op_dagger {
                out.push_scaled(dag, c.conj());
            }
        }
    }

    fn frequency_scale(&self) -> T {
        let mut scale = sparse_max_abs(&self.static_part);
        for term in &self.terms {
            let weight = sparse_max_abs(&term.op);
            scale = scale
                .max(term.envelope.magnitude_bound() * weight)
                .max(term.envelope.max_frequency())
                .max(term.phase_rate.abs());
        }
        scale
    }

    fn breakpoints(&self) -> Vec<T> {
        let mut bp: Vec<T> = self.terms.iter().flat_map(|t| t.envelope.breakpoints()).collect();
        bp.sort_by(|a, b| a.partial_cmp(b).unwrap());
        bp.dedup();
        bp
    }
}

/// Closure-backed time operator.
pub struct FnOperator<F> {
    dim: usize,
    frequency_scale: f64,
    f: F,
}

impl<F> FnOperator<F> {
    pub fn new(dim: usize, frequency_scale: f64, f: F) -> Self {
        Self { dim, frequency_scale, f }
    }
}

impl<T, F> TimeOperator<T> for FnOperator<F>
where
    T: Real,
    F: Fn(T) -> Operator<T> + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn fill(&self, t: T, out: &mut SparseOp<T>) {
        out.clear();
        out.push_dense(&(self.f)(t), Complex::new(T::one(), T::zero()));
    }

    fn frequency_scale(&self) -> T {
        T::lit(self.frequency_scale)
    }

    fn at(&self, t: T) -> Operator<T> {
        (self.f)(t)
    }
}

/// Subset of basis states kept by a truncated propagation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    full_dim: usize,
    keep: Vec<usize>,
}

impl Subspace {
    pub fn new(full_dim: usize, keep: Vec<usize>) -> Self {
        Self { full_dim, keep }
    }

    pub fn full(full_dim: usize) -> Self {
        Self { full_dim, keep: (0..full_dim).collect() }
    }

    pub fn dim(&self) -> usize {
        self.keep.len()
    }

    pub fn full_dim(&self) -> usize {
        self.full_dim
    }

    pub fn kept(&self) -> &[usize] {
        &self.keep
    }

    pub fn is_full(&self) -> bool {
        self.keep.len() == self.full_dim
    }

    /// Drops amplitudes outside the subspace; returns them as the discarded weight.
    pub fn project<T: Real>(&self, full: &[Complex<T>]) -> (Vec<Complex<T>>, T) {
        let kept: Vec<Complex<T>> = self.keep.iter().map(|&i| full[i]).collect();
        let total: T = full.iter().map(|a| a.norm_sqr()).sum();
        let retained: T = kept.iter().map(|a| a.norm_sqr()).sum();
        (kept, total - retained)
    }

    pub fn lift<T: Real>(&self, reduced: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut full = vec![Complex::new(T::zero(), T::zero()); self.full_dim];
        for (&i, &a) in self.keep.iter().zip(reduced) {
            full[i] = a;
        }
        full
    }

    pub fn lift_operator<T: Real>(&self, reduced: &Operator<T>) -> Operator<T> {
        let mut full = Operator::zeros(self.full_dim);
        for (r, &i) in self.keep.iter().enumerate() {
            for (c, &j) in self.keep.iter().enumerate() {
                full[(i, j)] = reduced[(r, c)];
            }
        }
        full
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn envelope_values() {
        let e = Envelope::Cosine { amplitude: 2.0, frequency: 1.0 };
        assert!((e.value(std::f64::consts::FRAC_PI_2).re).abs() < 1e-15);
        let w = Envelope::Windows { amplitude: 3.0, windows: vec![(1.0, 2.0)] };
        assert_eq!(w.value(0.5).re, 0.0);
        assert_eq!(w.value(1.0).re, 3.0);
        assert_eq!(w.value(2.0).re, 0.0);
        assert_eq!(w.breakpoints(), vec![1.0, 2.0]);
        let p = Envelope::Phasors(vec![(Complex64::new(1.0, 0.0), 2.0), (Complex64::new(1.0, 0.0), -2.0)]);
        assert!((p.value(0.3).re - 2.0 * (0.6f64).cos()).abs() < 1e-15);
    }

    #[test]
    fn conjugate_term_is_hermitian() {
        let mut op = Operator::<f64>::zeros(2);
        op[(0, 1)] = Complex64::new(0.5, 0.0);
        let mut h = Hamiltonian::new(2);
        h.add_term(Term::with_conjugate(Envelope::Constant(1.0), 0.7, &op));
        for k in 0..10 {
            let m = h.at(k as f64 * 0.37);
            assert!(m.is_hermitian(1e-15));
        }
        assert!((h.frequency_scale() - 0.7).abs() < 1e-15);
    }

    #[test]
    fn restriction_drops_outside_couplings() {
        let mut op = Operator::<f64>::zeros(3);
        op[(0, 1)] = Complex64::new(1.0, 0.0);
        op[(1, 2)] = Complex64::new(1.0, 0.0);
        let mut h = Hamiltonian::new(3);
        h.add_term(Term::with_conjugate(Envelope::Constant(1.0), 0.0, &op));
        let r = h.restrict(&[0, 1]);
        let m = r.at(0.0);
        assert_eq!(m.dim(), 2);
        assert_eq!(m[(0, 1)], Complex64::new(1.0, 0.0));
        assert_eq!(m[(1, 1)], Complex64::new(0.0, 0.0));
    }
}
