//! A fixed-rate, low-latency ASTC codec built around one pruned
//! configuration: 5-bit direct RGB endpoints, 2-bit weights on an 8x5 grid,
//! one partition, single plane, for 12x12 and 8x8 block footprints
//! (0.8-repeating and 2.0 bpp). Compressed size is a pure function of the
//! image dimensions and every 128-bit block decodes independently.
//!
//! The crate also carries PSNR/SSIM/bpp metrics, the standard .astc
//! container plus PPM/PNG raster I/O, and whole-image encode/decode drivers
//! with optional worker threads (output bytes are independent of the worker
//! count).

pub mod codec;
pub mod container;
pub mod error;
pub mod image;
pub mod metrics;

pub use codec::{
    decode_block, decode_image, encode_block, encode_block_with, encode_image, AstcBlock,
    EncodedImage, EncoderConfig, EndpointPair, QuantizedEndpoints, WeightGrid,
};
pub use error::{CodecError, ContainerError, ImageError, MetricsError};
pub use image::{BlockSize, BlockView, ImageRgb8};
pub use metrics::MetricsReport;

/// Floating-point scalar for the real-valued encoder math and metrics:
/// f32 or f64.
pub trait Real: num_traits::Float + num_traits::FromPrimitive + std::fmt::Debug {}
impl<T> Real for T where T: num_traits::Float + num_traits::FromPrimitive + std::fmt::Debug {}

/// Canonical scalar type of the shipped pipeline. [`codec::encode_block`]
/// and [`metrics::ssim`] are fixed to this type; the `*_with` variants let
/// callers pick another [`Real`].
pub type Scalar = f64;
