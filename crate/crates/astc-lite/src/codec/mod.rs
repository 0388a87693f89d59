//! The pruned encoder pipeline, the matching decoder, and whole-image
//! drivers.
//!
//! Exactly one configuration is produced: 5-bit direct LDR RGB endpoints
//! (CEM 8), 2-bit weights on an 8x5 grid, one partition, single plane. Both
//! quantization widths are powers of two, so no trit/quint integer sequence
//! coding is involved anywhere in the bitstream.

mod block;
mod endpoints;
mod weights;

use std::time::Instant;

pub use block::{pack_block, unpack_block, AstcBlock, BLOCK_MODE, COLOR_ENDPOINT_MODE};
pub use endpoints::{
    decode_endpoints, quantize_endpoints, select_endpoints, unquantize_endpoint, EndpointPair,
    QuantizedEndpoints,
};
pub use weights::{
    downsample_weights, infill_weights, project_weights, quantize_weights, unquantize_weight,
    IdealWeights, WeightGrid, WEIGHT_GRID_HEIGHT, WEIGHT_GRID_LEN, WEIGHT_GRID_WIDTH,
};

use crate::error::CodecError;
use crate::image::{
    block_grid_dims, crop, extract_block, pad_to_blocks, place_block, BlockSize, BlockView,
    ImageRgb8, MAX_BLOCK_AREA,
};
use crate::{Real, Scalar};

/// Encoder settings. Everything except the block footprint is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncoderConfig {
    pub block: BlockSize,
}

impl EncoderConfig {
    pub const ENDPOINT_BITS: u32 = 5;
    pub const WEIGHT_BITS: u32 = 2;
    pub const WEIGHT_GRID: (u32, u32) = (8, 5);
    pub const PARTITIONS: u32 = 1;
    pub const COLOR_ENDPOINT_MODE: u32 = block::COLOR_ENDPOINT_MODE;
    pub const DUAL_PLANE: bool = false;

    pub const fn new(block: BlockSize) -> Self {
        EncoderConfig { block }
    }
}

/// Interpolates one texel color from quantized endpoints and an effective
/// weight in 0..=64: endpoints expand to 16 bits as x*256+x, blend as
/// (e0*(64-w) + e1*w + 32)/64, and the top 8 bits are the result.
pub fn interpolate_color(qep: &QuantizedEndpoints, weight: u8) -> [u8; 3] {
    let (e0, e1) = decode_endpoints(qep);
    interpolate_channels(e0, e1, weight)
}

fn interpolate_channels(e0: [u8; 3], e1: [u8; 3], weight: u8) -> [u8; 3] {
    debug_assert!(weight <= 64);
    let w = u32::from(weight);
    std::array::from_fn(|c| {
        let c0 = u32::from(e0[c]) * 0x101;
        let c1 = u32::from(e1[c]) * 0x101;
        let c16 = (c0 * (64 - w) + c1 * w + 32) >> 6;
        (c16 >> 8) as u8
    })
}

/// Encodes one block with the ideal-weight math carried out in scalar type
/// `R`. The canonical pipeline is [`encode_block`].
pub fn encode_block_with<R: Real>(block: &BlockView, cfg: EncoderConfig) -> AstcBlock {
    assert_eq!(block.size(), cfg.block, "block footprint does not match the encoder config");
    let ep = select_endpoints(block);
    let ideal = project_weights::<R>(block, &ep);
    let grid =
        downsample_weights(ideal.values(), cfg.block.width(), cfg.block.height());
    let wg = quantize_weights(&grid);
    let (qep, swapped) = quantize_endpoints(&ep);
    let wg = if swapped { wg.inverted() } else { wg };
    pack_block(&qep, &wg)
}

/// Encodes one block: endpoint selection, orthogonal projection, bilinear
/// downsample to the 8x5 grid, 2-bit quantization, and bit packing. Pure
/// function of its inputs.
pub fn encode_block(block: &BlockView, cfg: EncoderConfig) -> AstcBlock {
    encode_block_with::<Scalar>(block, cfg)
}

/// Decodes one block: unpack, endpoint dequantization, fixed-point weight
/// infill, and color interpolation.
pub fn decode_block(block: &AstcBlock, cfg: EncoderConfig) -> Result<BlockView, CodecError> {
    let (qep, wg) = unpack_block(block)?;
    let (e0, e1) = decode_endpoints(&qep);
    let unq = wg.values().map(unquantize_weight);
    let effective = infill_weights(&unq, cfg.block);
    let mut texels = [[0u8; 3]; MAX_BLOCK_AREA];
    for (texel, &w) in texels.iter_mut().zip(effective.iter()).take(cfg.block.area()) {
        *texel = interpolate_channels(e0, e1, w);
    }
    Ok(BlockView::from_texels(cfg.block, &texels[..cfg.block.area()])
        .expect("texel count matches footprint"))
}

/// Per-image encode statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EncodeStats {
    /// Compressed payload size: 16 bytes per block.
    pub payload_bytes: usize,
    /// Payload bits over the original (pre-padding) pixel count.
    pub bpp: f64,
    /// Wall time of the encode call.
    pub encode_ms: f64,
}

/// A compressed image: raster-order blocks plus the dimensions needed to
/// decode it.
#[derive(Debug, Clone)]
pub struct EncodedImage {
    pub blocks: Vec<AstcBlock>,
    pub width: u32,
    pub height: u32,
    pub padded_width: u32,
    pub padded_height: u32,
    pub stats: EncodeStats,
}

/// Encodes a whole image. The image is padded internally to block multiples;
/// blocks come out in raster order. `threads` workers split the block grid
/// into contiguous ranges; the output bytes are identical for every worker
/// count.
pub fn encode_image(img: &ImageRgb8, cfg: EncoderConfig, threads: usize) -> EncodedImage {
    let start = Instant::now();
    let padded = pad_to_blocks(img, cfg.block);
    let (grid_x, grid_y) = block_grid_dims(&padded, cfg.block).expect("image was just padded");
    let block_count = grid_x as usize * grid_y as usize;
    let mut blocks = vec![AstcBlock::from_bytes([0; 16]); block_count];

    let encode_range = |out: &mut [AstcBlock], first_block: usize| {
        for (k, slot) in out.iter_mut().enumerate() {
            let idx = first_block + k;
            let bx = (idx % grid_x as usize) as u32;
            let by = (idx / grid_x as usize) as u32;
            let view = extract_block(&padded, bx, by, cfg.block).expect("index within grid");
            *slot = encode_block(&view, cfg);
        }
    };

    let workers = threads.max(1).min(block_count.max(1));
    if workers <= 1 {
        encode_range(&mut blocks, 0);
    } else {
        let chunk = block_count.div_ceil(workers);
        std::thread::scope(|scope| {
            for (ci, out) in blocks.chunks_mut(chunk).enumerate() {
                let encode_range = &encode_range;
                scope.spawn(move || encode_range(out, ci * chunk));
            }
        });
    }

    let payload_bytes = block_count * AstcBlock::SIZE;
    let bpp = payload_bytes as f64 * 8.0 / (img.width() as f64 * img.height() as f64);
    EncodedImage {
        blocks,
        width: img.width(),
        height: img.height(),
        padded_width: padded.width(),
        padded_height: padded.height(),
        stats: EncodeStats {
            payload_bytes,
            bpp,
            encode_ms: start.elapsed().as_secs_f64() * 1e3,
        },
    }
}

/// Decodes raster-order blocks back into an image, cropping away the
/// padding.
pub fn decode_image(
    blocks: &[AstcBlock],
    padded_dims: (u32, u32),
    original_dims: (u32, u32),
    cfg: EncoderConfig,
) -> Result<ImageRgb8, CodecError> {
    let (pw, ph) = padded_dims;
    let (w, h) = original_dims;
    let bw = cfg.block.width() as u32;
    let bh = cfg.block.height() as u32;
    if w == 0 || h == 0 || pw != w.div_ceil(bw) * bw || ph != h.div_ceil(bh) * bh {
        return Err(CodecError::BadPaddedDims {
            padded_width: pw,
            padded_height: ph,
            width: w,
            height: h,
        });
    }
    let grid_x = pw / bw;
    let grid_y = ph / bh;
    let expected = grid_x as usize * grid_y as usize;
    if blocks.len() != expected {
        return Err(CodecError::WrongBlockCount { expected, got: blocks.len(), grid_x, grid_y });
    }
    let mut padded = ImageRgb8::filled(pw, ph, [0, 0, 0]).expect("nonzero dims");
    for (idx, block) in blocks.iter().enumerate() {
        let bx = (idx % grid_x as usize) as u32;
        let by = (idx / grid_x as usize) as u32;
        let view = decode_block(block, cfg)?;
        place_block(&mut padded, bx, by, cfg.block, &view).expect("index within grid");
    }
    Ok(crop(&padded, w, h).expect("crop within padded dims"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant_block(size: BlockSize, color: [u8; 3]) -> BlockView {
        BlockView::from_texels(size, &vec![color; size.area()]).unwrap()
    }

    #[test]
    fn interpolation_hits_the_endpoints() {
        let qep = QuantizedEndpoints::new([2, 29, 4, 27, 6, 25]).unwrap();
        let (e0, e1) = decode_endpoints(&qep);
        assert_eq!(interpolate_color(&qep, 0), e0);
        assert_eq!(interpolate_color(&qep, 64), e1);
    }

    #[test]
    fn equal_endpoints_interpolate_to_themselves() {
        let qep = QuantizedEndpoints::new([17, 17, 9, 9, 30, 30]).unwrap();
        let expected =
            [unquantize_endpoint(17), unquantize_endpoint(9), unquantize_endpoint(30)];
        for w in 0..=64 {
            assert_eq!(interpolate_color(&qep, w), expected);
        }
    }

    #[test]
    fn constant_blocks_roundtrip_within_quantization_bound() {
        let cfg = EncoderConfig::new(BlockSize::B8x8);
        for g in 0..=255u8 {
            let block = constant_block(cfg.block, [g, g, g]);
            let decoded = decode_block(&encode_block(&block, cfg), cfg).unwrap();
            for texel in decoded.texels() {
                for c in 0..3 {
                    let err = (i16::from(texel[c]) - i16::from(g)).unsigned_abs();
                    assert!(err <= 4, "gray {g}: error {err}");
                }
            }
        }
    }

    #[test]
    fn block_of_e0_texels_gets_zero_weights() {
        let cfg = EncoderConfig::new(BlockSize::B8x8);
        let mut texels = vec![[10u8, 20, 30]; 64];
        texels[63] = [200, 210, 220];
        let block = BlockView::from_texels(cfg.block, &texels).unwrap();
        let (_, wg) = unpack_block(&encode_block(&block, cfg)).unwrap();
        // all texels but the corner sit at the line start
        assert_eq!(wg.values()[0], 0);
        assert_eq!(wg.values()[1], 0);
        assert_eq!(wg.values()[WEIGHT_GRID_LEN - 1], 3);
    }

    #[test]
    fn encode_is_deterministic() {
        let cfg = EncoderConfig::new(BlockSize::B12x12);
        let texels: Vec<[u8; 3]> =
            (0..cfg.block.area()).map(|i| [(i * 7 % 256) as u8, (i * 13 % 256) as u8, (i % 256) as u8]).collect();
        let block = BlockView::from_texels(cfg.block, &texels).unwrap();
        assert_eq!(encode_block(&block, cfg).bytes(), encode_block(&block, cfg).bytes());
    }

    #[test]
    fn image_payload_size_is_fixed_rate() {
        let img = ImageRgb8::filled(2052, 1032, [1, 2, 3]).unwrap();
        let enc = encode_image(&img, EncoderConfig::new(BlockSize::B12x12), 1);
        assert_eq!(enc.blocks.len(), 171 * 86);
        assert_eq!(enc.stats.payload_bytes, 235_296);
    }

    #[test]
    fn roundtrip_preserves_dimensions() {
        let cfg = EncoderConfig::new(BlockSize::B12x12);
        let img = ImageRgb8::filled(50, 31, [9, 9, 9]).unwrap();
        let enc = encode_image(&img, cfg, 2);
        let dec = decode_image(
            &enc.blocks,
            (enc.padded_width, enc.padded_height),
            (enc.width, enc.height),
            cfg,
        )
        .unwrap();
        assert_eq!((dec.width(), dec.height()), (50, 31));
    }

    #[test]
    fn decode_image_validates_block_count_and_dims() {
        let cfg = EncoderConfig::new(BlockSize::B8x8);
        let img = ImageRgb8::filled(16, 16, [0, 0, 0]).unwrap();
        let enc = encode_image(&img, cfg, 1);
        assert!(matches!(
            decode_image(&enc.blocks[..3], (16, 16), (16, 16), cfg),
            Err(CodecError::WrongBlockCount { .. })
        ));
        assert!(matches!(
            decode_image(&enc.blocks, (24, 16), (16, 16), cfg),
            Err(CodecError::BadPaddedDims { .. })
        ));
    }
}
