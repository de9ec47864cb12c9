//! Emitted-sample containers.

use crate::method::Method;

/// A materialized sample plus run metadata.
///
/// Without-replacement samples hold distinct items; with-replacement
/// samples are expanded, so an item drawn with multiplicity m appears m
/// times. Reservoir samples carry no order guarantee; sequential samples
/// are in stream order.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleResult<T> {
    pub items: Vec<T>,
    pub method: Method,
    /// Stream elements processed to produce this sample.
    pub items_processed: u64,
    /// Cumulative weight processed (0 for unweighted methods).
    pub weight_processed: f64,
}

impl<T> SampleResult<T> {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

/// One selection emitted by a sequential sampler.
///
/// `multiplicity` exceeds 1 when a with-replacement method selects the
/// same stream element for several consecutive draws; a streaming
/// consumer cannot rewind, so the repeat count is carried explicitly.
#[derive(Debug, Clone, PartialEq)]
pub struct Emission<T> {
    pub item: T,
    /// 0-based position in the stream.
    pub position: u64,
    pub multiplicity: u64,
}
