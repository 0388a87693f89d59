//! File formats: the standard .astc container, binary PPM (P6), and PNG.
//!
//! The .astc header stores the original (pre-padding) image dimensions so
//! third-party decoders crop the same region; padding is an encoder-internal
//! detail.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::codec::AstcBlock;
use crate::error::ContainerError;
use crate::image::{BlockSize, ImageRgb8};

/// Magic bytes opening every .astc file.
pub const ASTC_MAGIC: [u8; 4] = [0x13, 0xAB, 0xA1, 0x5C];

const HEADER_LEN: usize = 16;

fn encode_u24(v: u32) -> Result<[u8; 3], ContainerError> {
    if v > 0xFF_FFFF {
        return Err(ContainerError::DimensionOverflow(v));
    }
    Ok([(v & 0xFF) as u8, ((v >> 8) & 0xFF) as u8, ((v >> 16) & 0xFF) as u8])
}

fn decode_u24(b: &[u8]) -> u32 {
    u32::from(b[0]) | (u32::from(b[1]) << 8) | (u32::from(b[2]) << 16)
}

fn expected_blocks(dims: (u32, u32), block: BlockSize) -> usize {
    let gx = dims.0.div_ceil(block.width() as u32) as usize;
    let gy = dims.1.div_ceil(block.height() as u32) as usize;
    gx * gy
}

/// Writes raster-order blocks under a 16-byte .astc header carrying the
/// block footprint and the original image dimensions.
pub fn write_astc(
    path: &Path,
    blocks: &[AstcBlock],
    block: BlockSize,
    dims: (u32, u32),
) -> Result<(), ContainerError> {
    let expected = expected_blocks(dims, block);
    if blocks.len() != expected {
        return Err(ContainerError::TruncatedPayload {
            expected: expected * AstcBlock::SIZE,
            got: blocks.len() * AstcBlock::SIZE,
        });
    }
    let mut header = [0u8; HEADER_LEN];
    header[..4].copy_from_slice(&ASTC_MAGIC);
    header[4] = block.width() as u8;
    header[5] = block.height() as u8;
    header[6] = 1; // block_z
    header[7..10].copy_from_slice(&encode_u24(dims.0)?);
    header[10..13].copy_from_slice(&encode_u24(dims.1)?);
    header[13..16].copy_from_slice(&encode_u24(1)?); // dim_z
    let mut out = BufWriter::new(File::create(path)?);
    out.write_all(&header)?;
    for b in blocks {
        out.write_all(b.bytes())?;
    }
    out.flush()?;
    Ok(())
}

/// Reads an .astc file, validating the magic, the footprint (12x12x1 or
/// 8x8x1 only), and the payload length implied by the header.
pub fn read_astc(path: &Path) -> Result<(Vec<AstcBlock>, BlockSize, (u32, u32)), ContainerError> {
    let mut data = Vec::new();
    BufReader::new(File::open(path)?).read_to_end(&mut data)?;
    if data.len() < HEADER_LEN || data[..4] != ASTC_MAGIC {
        return Err(ContainerError::BadMagic);
    }
    let (bx, by, bz) = (data[4], data[5], data[6]);
    let block = match (bx, by, bz) {
        (12, 12, 1) => BlockSize::B12x12,
        (8, 8, 1) => BlockSize::B8x8,
        _ => return Err(ContainerError::UnsupportedFootprint { x: bx, y: by, z: bz }),
    };
    let dim_x = decode_u24(&data[7..10]);
    let dim_y = decode_u24(&data[10..13]);
    let dim_z = decode_u24(&data[13..16]);
    if dim_z != 1 {
        return Err(ContainerError::UnsupportedDepth(dim_z));
    }
    let expected = expected_blocks((dim_x, dim_y), block) * AstcBlock::SIZE;
    let payload = &data[HEADER_LEN..];
    if payload.len() != expected {
        return Err(ContainerError::TruncatedPayload { expected, got: payload.len() });
    }
    let blocks = payload
        .chunks_exact(AstcBlock::SIZE)
        .map(|c| AstcBlock::from_bytes(c.try_into().expect("16-byte chunk")))
        .collect();
    Ok((blocks, block, (dim_x, dim_y)))
}

/// Writes a binary PPM (P6, maxval 255), bit-exact.
pub fn write_ppm(path: &Path, img: &ImageRgb8) -> Result<(), ContainerError> {
    let mut out = BufWriter::new(File::create(path)?);
    write!(out, "P6\n{} {}\n255\n", img.width(), img.height())?;
    out.write_all(img.as_rgb_bytes())?;
    out.flush()?;
    Ok(())
}

/// Reads a binary PPM (P6, maxval 255). Comments are allowed in the header;
/// wider maxvals are rejected as unsupported bit depths.
pub fn read_ppm(path: &Path) -> Result<ImageRgb8, ContainerError> {
    let mut data = Vec::new();
    BufReader::new(File::open(path)?).read_to_end(&mut data)?;
    let bad = |reason: &str| ContainerError::Malformed {
        format: "ppm",
        reason: reason.to_string(),
    };
    if !data.starts_with(b"P6") {
        return Err(bad("missing P6 signature"));
    }
    let mut pos = 2;
    let mut fields = [0u32; 3];
    for field in fields.iter_mut() {
        // skip whitespace and '#' comments between header tokens
        loop {
            match data.get(pos) {
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(b'#') => {
                    while let Some(&b) = data.get(pos) {
                        pos += 1;
                        if b == b'\n' {
                            break;
                        }
                    }
                }
                Some(_) => break,
                None => return Err(bad("truncated header")),
            }
        }
        let start = pos;
        while data.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        if pos == start {
            return Err(bad("expected a decimal header field"));
        }
        let text = std::str::from_utf8(&data[start..pos]).expect("ascii digits");
        *field = text.parse().map_err(|_| bad("header field out of range"))?;
    }
    let [width, height, maxval] = fields;
    if maxval > 255 {
        return Err(ContainerError::UnsupportedBitDepth(format!("PPM maxval {maxval}")));
    }
    if maxval != 255 {
        return Err(bad("maxval must be 255"));
    }
    if !data.get(pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(bad("missing whitespace before pixel data"));
    }
    pos += 1;
    let expected = width as usize * height as usize * 3;
    let payload = &data[pos..];
    if payload.len() != expected {
        return Err(bad(&format!("pixel payload is {} bytes, expected {expected}", payload.len())));
    }
    Ok(ImageRgb8::from_rgb_bytes(width, height, payload)?)
}

/// Writes an 8-bit RGB PNG.
pub fn write_png(path: &Path, img: &ImageRgb8) -> Result<(), ContainerError> {
    let file = BufWriter::new(File::create(path)?);
    let mut enc = png::Encoder::new(file, img.width(), img.height());
    enc.set_color(png::ColorType::Rgb);
    enc.set_depth(png::BitDepth::Eight);
    let mut writer = enc.write_header()?;
    writer.write_image_data(img.as_rgb_bytes())?;
    writer.finish()?;
    Ok(())
}

/// Reads a PNG. Palette and sub-8-bit images are expanded, alpha is
/// dropped, grayscale replicates into RGB; 16-bit sources are rejected.
pub fn read_png(path: &Path) -> Result<ImageRgb8, ContainerError> {
    let mut decoder = png::Decoder::new(BufReader::new(File::open(path)?));
    decoder.set_transformations(png::Transformations::EXPAND);
    let mut reader = decoder.read_info()?;
    let size = reader.output_buffer_size().ok_or_else(|| ContainerError::Malformed {
        format: "png",
        reason: "output size overflows".to_string(),
    })?;
    let mut buf = vec![0u8; size];
    let info = reader.next_frame(&mut buf)?;
    let (color, depth) = reader.output_color_type();
    if depth != png::BitDepth::Eight {
        return Err(ContainerError::UnsupportedBitDepth(format!("PNG {depth:?}")));
    }
    let bytes = &buf[..info.buffer_size()];
    let (width, height) = (info.width, info.height);
    let pixels: Vec<[u8; 3]> = match color {
        png::ColorType::Rgb => bytes.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect(),
        png::ColorType::Rgba => bytes.chunks_exact(4).map(|c| [c[0], c[1], c[2]]).collect(),
        png::ColorType::Grayscale => bytes.iter().map(|&g| [g, g, g]).collect(),
        png::ColorType::GrayscaleAlpha => bytes.chunks_exact(2).map(|c| [c[0]; 3]).collect(),
        other => {
            return Err(ContainerError::UnsupportedFormat(format!("PNG color type {other:?}")))
        }
    };
    Ok(ImageRgb8::new(width, height, pixels)?)
}

/// Reads a raster image, dispatching on the file extension (.ppm or .png).
pub fn read_image(path: &Path) -> Result<ImageRgb8, ContainerError> {
    match extension(path).as_deref() {
        Some("ppm") => read_ppm(path),
        Some("png") => read_png(path),
        _ => Err(ContainerError::UnsupportedFormat(path.display().to_string())),
    }
}

/// Writes a raster image, dispatching on the file extension (.ppm or .png).
pub fn write_image(path: &Path, img: &ImageRgb8) -> Result<(), ContainerError> {
    match extension(path).as_deref() {
        Some("ppm") => write_ppm(path, img),
        Some("png") => write_png(path, img),
        _ => Err(ContainerError::UnsupportedFormat(path.display().to_string())),
    }
}

/// True when the extension names a raster format this module reads.
pub fn is_supported_image(path: &Path) -> bool {
    matches!(extension(path).as_deref(), Some("ppm") | Some("png"))
}

fn extension(path: &Path) -> Option<String> {
    path.extension().map(|e| e.to_string_lossy().to_ascii_lowercase())
}
