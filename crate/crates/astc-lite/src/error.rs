use thiserror::Error;

/// Errors from image buffer and block-grid operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ImageError {
    #[error("pixel buffer length {got} does not match {width}x{height}")]
    BadPixelCount { width: u32, height: u32, got: usize },
    #[error("image dimensions must be at least 1x1")]
    EmptyImage,
    #[error("image {width}x{height} is not divisible into {block} blocks")]
    NotBlockAligned { width: u32, height: u32, block: &'static str },
    #[error("block index ({bx},{by}) outside the {grid_x}x{grid_y} block grid")]
    BlockIndexOutOfRange { bx: u32, by: u32, grid_x: u32, grid_y: u32 },
    #[error("cannot crop to {width}x{height}: larger than source {src_width}x{src_height}")]
    CropTooLarge { width: u32, height: u32, src_width: u32, src_height: u32 },
    #[error("texel slice length {got} does not match block footprint area {expected}")]
    BadTexelCount { expected: usize, got: usize },
}

/// Errors from block encoding, decoding, and bitstream unpacking.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodecError {
    #[error("unsupported block configuration: {reason}")]
    UnsupportedConfiguration { reason: String },
    #[error("payload holds {got} blocks but the {grid_x}x{grid_y} grid needs {expected}")]
    WrongBlockCount { expected: usize, got: usize, grid_x: u32, grid_y: u32 },
    #[error("padded dimensions {padded_width}x{padded_height} do not match {width}x{height} padded to block multiples")]
    BadPaddedDims { padded_width: u32, padded_height: u32, width: u32, height: u32 },
    #[error("quantized endpoint value {value} exceeds the 5-bit range")]
    EndpointOutOfRange { value: u8 },
    #[error("quantized endpoints violate the canonical sum ordering")]
    EndpointOrdering,
    #[error("quantized weight value {value} exceeds the 2-bit range")]
    WeightOutOfRange { value: u8 },
}

/// Errors from the quality metrics.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(u32, u32, u32, u32),
    #[error("image {width}x{height} is smaller than the {window}x{window} SSIM window")]
    SmallerThanWindow { width: u32, height: u32, window: u32 },
    #[error("bits per pixel is undefined for an empty image")]
    EmptyImage,
}

/// Errors from file formats: the .astc container, PPM, and PNG.
#[derive(Debug, Error)]
pub enum ContainerError {
    #[error("bad magic: not an .astc file")]
    BadMagic,
    #[error("unsupported block footprint {x}x{y}x{z} (only 12x12x1 and 8x8x1)")]
    UnsupportedFootprint { x: u8, y: u8, z: u8 },
    #[error("unsupported depth {0} (only 2D images)")]
    UnsupportedDepth(u32),
    #[error("truncated payload: {got} bytes, header implies {expected}")]
    TruncatedPayload { expected: usize, got: usize },
    #[error("dimension {0} exceeds the 24-bit container field")]
    DimensionOverflow(u32),
    #[error("unsupported image format: {0}")]
    UnsupportedFormat(String),
    #[error("unsupported bit depth: {0}")]
    UnsupportedBitDepth(String),
    #[error("malformed {format} file: {reason}")]
    Malformed { format: &'static str, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("png decode: {0}")]
    PngDecode(#[from] png::DecodingError),
    #[error("png encode: {0}")]
    PngEncode(#[from] png::EncodingError),
    #[error(transparent)]
    Image(#[from] ImageError),
}
