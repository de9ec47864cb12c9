//! Single-pass sampling from data streams.
//!
//! Two families of samplers cover streams of unknown and known size:
//!
//! * [`reservoir`] keeps a fixed-size sample that is valid for the stream
//!   seen so far, with no prior knowledge of the total; samplers over
//!   disjoint partitions can be merged.
//! * [`sequential`] adapts an iterator whose total element count (or
//!   total weight) is known, computing skip lengths on the fly and
//!   emitting selections in stream order with O(1) state; partition
//!   samples can be combined.
//!
//! Both support weighted and unweighted sampling, with and without
//! replacement — except weighted sequential sampling without replacement,
//! which is impossible knowing only the total weight and is rejected at
//! construction.
//!
//! [`itsample`](itsample::itsample) is the one-shot entry point over any
//! iterator; [`oracle`] holds the exact small-instance laws and the
//! chi-square machinery the test suite and the `verify` command are built
//! on; [`bench`] is the comparison harness behind `bench run`.

pub mod bench;
pub mod cli;
pub mod error;
pub mod itsample;
pub mod method;
pub mod oracle;
pub mod reservoir;
pub mod rng;
pub mod sample;
pub mod sequential;
pub mod verify;

// Unit tests measure allocation through the bench counters.
#[cfg(test)]
#[global_allocator]
static TEST_ALLOCATOR: bench::alloc::CountingAllocator = bench::alloc::CountingAllocator;

pub use error::{Result, SampleError};
pub use method::{Method, ReservoirMethod, SequentialMethod};
pub use reservoir::ReservoirSampler;
pub use rng::StreamRng;
pub use sample::{Emission, SampleResult};
pub use sequential::{SequentialSampler, SequentialState, WeightedSequentialSampler};
