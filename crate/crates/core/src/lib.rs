//! Deterministic generator for synthetic body-map image datasets.
//!
//! A body map is a drawing template on which clinical findings are marked.
//! This crate draws random marks of three kinds (Bézier lines, dashed
//! lines, and point clusters) inside a drawable mask, optionally restricted
//! to one of twelve regions, and assembles them into labelled PNG datasets
//! whose manifests carry the full construction geometry. Everything is a
//! pure function of a master seed.
//!
//! ```
//! use bodymap_synth::bodymap::{BodyMask, SampleDomain};
//! use bodymap_synth::geometry::derive_stream;
//! use bodymap_synth::primitives::{gen_line, LineParams};
//!
//! let mask = BodyMask::default_mask(1000, 800, 40).unwrap();
//! let domain = SampleDomain::whole(&mask);
//! let mut stream = derive_stream(42, "example");
//! let line = gen_line(&domain, &mut stream, &LineParams::default(), 100).unwrap();
//! let curve = line.curve().unwrap();
//! assert!(curve.start().distance(curve.end()) <= 200.0);
//! ```

pub mod bodymap;
pub mod dataset;
mod error;
pub mod geometry;
pub mod primitives;
pub mod raster;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    mod geometry {}
    #[doc = include_str!("../../../book/src/sampling.md")]
    mod sampling {}
    #[doc = include_str!("../../../book/src/primitives.md")]
    mod primitives {}
    #[doc = include_str!("../../../book/src/rendering.md")]
    mod rendering {}
    #[doc = include_str!("../../../book/src/datasets.md")]
    mod datasets {}
}
