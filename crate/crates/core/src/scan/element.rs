use std::ops::Deref;

use crate::error::{shape_err, Error, Result};
use crate::numeric::Real;

/// One recurrence step `(a_t, x_t)` of width `D`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanElement<F = f64> {
    a: Vec<F>,
    x: Vec<F>,
}

impl<F: Real> ScanElement<F> {
    pub fn new(a: Vec<F>, x: Vec<F>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidArgument("scan element width must be >= 1".into()));
        }
        if a.len() != x.len() {
            return shape_err(format!("decay has width {}, input has width {}", a.len(), x.len()));
        }
        if a.iter().chain(&x).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("scan element entries must be finite".into()));
        }
        Ok(Self { a, x })
    }

    /// Builds an element without validation. Callers guarantee equal widths.
    pub(crate) fn from_parts(a: Vec<F>, x: Vec<F>) -> Self {
        debug_assert_eq!(a.len(), x.len());
        Self { a, x }
    }

    pub fn a(&self) -> &[F] {
        &self.a
    }

    pub fn x(&self) -> &[F] {
        &self.x
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn into_parts(self) -> (Vec<F>, Vec<F>) {
        (self.a, self.x)
    }

    /// Applies the step's affine map to a state: `a * h + x`.
    pub fn apply(&self, h: &[F]) -> Vec<F> {
        self.a
            .iter()
            .zip(&self.x)
            .zip(h)
            .map(|((&a, &x), &h)| a * h + x)
            .collect()
    }

    /// `self = self . earlier` (self is the later step).
    pub(crate) fn absorb_earlier(&mut self, earlier: &Self) {
        for ((a, x), (&ea, &ex)) in self.a.iter_mut().zip(self.x.iter_mut()).zip(earlier.a.iter().zip(&earlier.x)) {
            *x = *a * ex + *x;
            *a = *a * ea;
        }
    }

    pub(crate) fn identity_unchecked(dim: usize) -> Self {
        Self { a: vec![F::one(); dim], x: vec![F::zero(); dim] }
    }
}

/// Combines two steps into the single step that applies `earlier` first and
/// `later` second.
pub fn compose_elements<F: Real>(later: &ScanElement<F>, earlier: &ScanElement<F>) -> Result<ScanElement<F>> {
    if later.dim() != earlier.dim() {
        return shape_err(format!("cannot compose widths {} and {}", later.dim(), earlier.dim()));
    }
    let mut out = later.clone();
    out.absorb_earlier(earlier);
    Ok(out)
}

/// The neutral step `(1, 0)` of width `dim`.
pub fn identity_element<F: Real>(dim: usize) -> Result<ScanElement<F>> {
    if dim == 0 {
        return Err(Error::InvalidArgument("identity width must be >= 1".into()));
    }
    Ok(ScanElement::identity_unchecked(dim))
}

/// A recurrent state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct HiddenState<F = f64>(pub Vec<F>);

impl<F: Real> HiddenState<F> {
    pub fn zeros(dim: usize) -> Self {
        Self(vec![F::zero(); dim])
    }

    pub fn l2_norm(&self) -> F {
        self.0.iter().fold(F::zero(), |acc, &v| acc + v * v).sqrt()
    }
}

impl<F> Deref for HiddenState<F> {
    type Target = [F];

    fn deref(&self) -> &[F] {
        &self.0
    }
}

impl<F> AsRef<[F]> for HiddenState<F> {
    fn as_ref(&self) -> &[F] {
        &self.0
    }
}

/// A full recurrence problem: the steps and the initial state.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanSequence<F = f64> {
    elements: Vec<ScanElement<F>>,
    h0: HiddenState<F>,
}

impl<F: Real> ScanSequence<F> {
    pub fn new(elements: Vec<ScanElement<F>>, h0: HiddenState<F>) -> Result<Self> {
        let Some(first) = elements.first() else {
            return Err(Error::InvalidArgument("sequence length must be >= 1".into()));
        };
        let dim = first.dim();
        if let Some((t, e)) = elements.iter().enumerate().find(|(_, e)| e.dim() != dim) {
            return shape_err(format!("element {t} has width {}, expected {dim}", e.dim()));
        }
        if h0.len() != dim {
            return shape_err(format!("initial state has width {}, expected {dim}", h0.len()));
        }
        if h0.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("initial state must be finite".into()));
        }
        Ok(Self { elements, h0 })
    }

    /// Builds a sequence from row-major decay and input rows.
    pub fn from_rows(a: Vec<Vec<F>>, x: Vec<Vec<F>>, h0: Vec<F>) -> Result<Self> {
        if a.len() != x.len() {
            return shape_err(format!("{} decay rows but {} input rows", a.len(), x.len()));
        }
        let elements = a.into_iter().zip(x).map(|(a, x)| ScanElement::new(a, x)).collect::<Result<Vec<_>>>()?;
        Self::new(elements, HiddenState(h0))
    }

    pub fn elements(&self) -> &[ScanElement<F>] {
        &self.elements
    }

    pub fn h0(&self) -> &HiddenState<F> {
        &self.h0
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.h0.len()
    }
}
