//! Interchangeable ways of producing the spectrum of the order-`2r`
//! intertwinor on a bundle, registered by name.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::closedform::{ClosedFormError, SpectralParams};
use crate::exact::ExactScalar;
use crate::ktype_graph::{build_graph, enumerate_ktypes, GraphError};
use crate::recursion::{solve, RecursionError};
use crate::weights::KTypeId;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Recursion(#[from] RecursionError),
    #[error(transparent)]
    ClosedForm(#[from] ClosedFormError),
    #[error("unknown method `{0}`")]
    UnknownMethod(String),
}

impl SpectrumError {
    /// True when the failure is a genuine singularity of the evaluation
    /// (a pole of a transition quantity or of a Gamma factor) rather than
    /// bad input.
    pub fn is_singular(&self) -> bool {
        matches!(
            self,
            SpectrumError::Recursion(RecursionError::PoleEncountered { .. })
                | SpectrumError::ClosedForm(ClosedFormError::GammaPole { .. })
                | SpectrumError::ClosedForm(ClosedFormError::NumericDomain(_))
                | SpectrumError::ClosedForm(ClosedFormError::ZeroDenominator)
        )
    }
}

/// A spectral value: exact, or a float from the log-Gamma route.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectralValue {
    Exact(ExactScalar),
    Approx(f64),
}

impl SpectralValue {
    pub fn as_exact(&self) -> Option<&ExactScalar> {
        match self {
            SpectralValue::Exact(v) => Some(v),
            SpectralValue::Approx(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            SpectralValue::Exact(v) => v.to_f64(),
            SpectralValue::Approx(v) => *v,
        }
    }
}

impl fmt::Display for SpectralValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralValue::Exact(v) => write!(f, "{v}"),
            SpectralValue::Approx(v) => write!(f, "{v:.17e}"),
        }
    }
}

impl Serialize for SpectralValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumRow {
    pub node: KTypeId,
    pub mu: SpectralValue,
}

/// Produces `μ` on every K-type with `j ≤ jmax`, normalized to 1 on the
/// base node, in enumeration order.
pub trait SpectrumMethod: Send + Sync {
    fn name(&self) -> &'static str;

    fn spectrum(
        &self,
        n: u32,
        k: u32,
        r: &ExactScalar,
        jmax: u32,
    ) -> Result<Vec<SpectrumRow>, SpectrumError>;
}

/// Propagation over the K-type graph.
#[derive(Debug, Clone, Copy, Default)]
pub struct RecursionMethod;

impl SpectrumMethod for RecursionMethod {
    fn name(&self) -> &'static str {
        "recursion"
    }

    fn spectrum(
        &self,
        n: u32,
        k: u32,
        r: &ExactScalar,
        jmax: u32,
    ) -> Result<Vec<SpectrumRow>, SpectrumError> {
        let graph = build_graph(n, k, jmax)?;
        let table = solve(&graph, r)?;
        Ok(table
            .entries()
            .iter()
            .map(|(node, mu)| SpectrumRow {
                node: *node,
                mu: SpectralValue::Exact(mu.clone()),
            })
            .collect())
    }
}

/// Exact telescoped Gamma ratios; needs `2r ∈ ℤ`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ClosedFormMethod;

impl SpectrumMethod for ClosedFormMethod {
    fn name(&self) -> &'static str {
        "closedform"
    }

    fn spectrum(
        &self,
        n: u32,
        k: u32,
        r: &ExactScalar,
        jmax: u32,
    ) -> Result<Vec<SpectrumRow>, SpectrumError> {
        let params = SpectralParams::new(n, k, r.clone())?;
        enumerate_ktypes(n, k, jmax)?
            .into_iter()
            .map(|node| {
                Ok(SpectrumRow {
                    node,
                    mu: SpectralValue::Exact(params.z(&node)?),
                })
            })
            .collect()
    }
}

/// Floating-point log-Gamma evaluation of the closed forms; any `r` away
/// from Gamma poles.
#[derive(Debug, Clone, Copy, Default)]
pub struct NumericMethod;

impl SpectrumMethod for NumericMethod {
    fn name(&self) -> &'static str {
        "numeric"
    }

    fn spectrum(
        &self,
        n: u32,
        k: u32,
        r: &ExactScalar,
        jmax: u32,
    ) -> Result<Vec<SpectrumRow>, SpectrumError> {
        let params = SpectralParams::new(n, k, r.clone())?;
        enumerate_ktypes(n, k, jmax)?
            .into_iter()
            .map(|node| {
                Ok(SpectrumRow {
                    node,
                    mu: SpectralValue::Approx(params.z_numeric(&node)?),
                })
            })
            .collect()
    }
}

#[derive(Clone, Default)]
pub struct MethodRegistry {
    methods: BTreeMap<&'static str, Arc<dyn SpectrumMethod>>,
}

impl MethodRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, method: Arc<dyn SpectrumMethod>) {
        self.methods.insert(method.name(), method);
    }

    pub fn builtin() -> Self {
        let mut reg = Self::new();
        reg.register(Arc::new(RecursionMethod));
        reg.register(Arc::new(ClosedFormMethod));
        reg.register(Arc::new(NumericMethod));
        reg
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn SpectrumMethod>, SpectrumError> {
        self.methods
            .get(name)
            .cloned()
            .ok_or_else(|| SpectrumError::UnknownMethod(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.methods.keys().copied()
    }
}
