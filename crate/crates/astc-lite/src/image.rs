//! Image buffers, edge-replicated padding to block multiples, and block
//! extraction/placement.

use std::fmt;
use std::str::FromStr;

use crate::error::ImageError;

/// Largest supported block footprint area, in texels.
pub const MAX_BLOCK_AREA: usize = 144;

/// Block footprint of one 128-bit compressed block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockSize {
    /// 12x12 texels (0.8-repeating bpp, 27:1 over 24-bit RGB).
    B12x12,
    /// 8x8 texels (2.0 bpp, 12:1).
    B8x8,
}

impl BlockSize {
    pub const fn width(self) -> usize {
        match self {
            BlockSize::B12x12 => 12,
            BlockSize::B8x8 => 8,
        }
    }

    pub const fn height(self) -> usize {
        match self {
            BlockSize::B12x12 => 12,
            BlockSize::B8x8 => 8,
        }
    }

    pub const fn area(self) -> usize {
        self.width() * self.height()
    }

    pub const fn label(self) -> &'static str {
        match self {
            BlockSize::B12x12 => "12x12",
            BlockSize::B8x8 => "8x8",
        }
    }
}

impl fmt::Display for BlockSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for BlockSize {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "12x12" => Ok(BlockSize::B12x12),
            "8x8" => Ok(BlockSize::B8x8),
            other => Err(format!("unsupported block size {other:?} (use 12x12 or 8x8)")),
        }
    }
}

/// Row-major 8-bit RGB raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageRgb8 {
    width: u32,
    height: u32,
    pixels: Vec<[u8; 3]>,
}

impl ImageRgb8 {
    /// Builds an image from row-major RGB triples. The pixel count must be
    /// exactly `width * height` and both dimensions at least 1.
    pub fn new(width: u32, height: u32, pixels: Vec<[u8; 3]>) -> Result<Self, ImageError> {
        if width == 0 || height == 0 {
            return Err(ImageError::EmptyImage);
        }
        let expected = width as usize * height as usize;
        if pixels.len() != expected {
            return Err(ImageError::BadPixelCount { width, height, got: pixels.len() });
        }
        Ok(ImageRgb8 { width, height, pixels })
    }

    /// Builds an image filled with one color.
    pub fn filled(width: u32, height: u32, color: [u8; 3]) -> Result<Self, ImageError> {
        if width == 0 || height == 0 {
            return Err(ImageError::EmptyImage);
        }
        let n = width as usize * height as usize;
        Ok(ImageRgb8 { width, height, pixels: vec![color; n] })
    }

    /// Builds an image from a flat interleaved RGB byte slice.
    pub fn from_rgb_bytes(width: u32, height: u32, rgb: &[u8]) -> Result<Self, ImageError> {
        if rgb.len() % 3 != 0 {
            return Err(ImageError::BadPixelCount { width, height, got: rgb.len() / 3 });
        }
        let pixels = rgb.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect();
        Self::new(width, height, pixels)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.pixels
    }

    /// Flat interleaved RGB view of the pixel data.
    pub fn as_rgb_bytes(&self) -> &[u8] {
        self.pixels.as_flattened()
    }

    pub fn pixel(&self, x: u32, y: u32) -> [u8; 3] {
        debug_assert!(x < self.width && y < self.height);
        self.pixels[y as usize * self.width as usize + x as usize]
    }

    pub fn set_pixel(&mut self, x: u32, y: u32, color: [u8; 3]) {
        debug_assert!(x < self.width && y < self.height);
        self.pixels[y as usize * self.width as usize + x as usize] = color;
    }
}

/// One bw x bh texel block cut out of a (padded) image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockView {
    size: BlockSize,
    texels: [[u8; 3]; MAX_BLOCK_AREA],
}

impl BlockView {
    /// Builds a block from row-major texels; the slice length must equal the
    /// footprint area.
    pub fn from_texels(size: BlockSize, texels: &[[u8; 3]]) -> Result<Self, ImageError> {
        if texels.len() != size.area() {
            return Err(ImageError::BadTexelCount { expected: size.area(), got: texels.len() });
        }
        let mut buf = [[0u8; 3]; MAX_BLOCK_AREA];
        buf[..texels.len()].copy_from_slice(texels);
        Ok(BlockView { size, texels: buf })
    }

    pub fn size(&self) -> BlockSize {
        self.size
    }

    /// Row-major texels; the slice length equals the footprint area.
    pub fn texels(&self) -> &[[u8; 3]] {
        &self.texels[..self.size.area()]
    }

    pub fn texel(&self, x: usize, y: usize) -> [u8; 3] {
        debug_assert!(x < self.size.width() && y < self.size.height());
        self.texels[y * self.size.width() + x]
    }
}

/// Pads an image up to the next multiple of the block footprint in each
/// dimension. New pixels replicate the nearest in-bounds pixel, clamping each
/// coordinate independently; already-aligned images are returned unchanged.
pub fn pad_to_blocks(img: &ImageRgb8, size: BlockSize) -> ImageRgb8 {
    let bw = size.width() as u32;
    let bh = size.height() as u32;
    let pw = img.width.div_ceil(bw) * bw;
    let ph = img.height.div_ceil(bh) * bh;
    if pw == img.width && ph == img.height {
        return img.clone();
    }
    let mut pixels = Vec::with_capacity(pw as usize * ph as usize);
    for y in 0..ph {
        let sy = y.min(img.height - 1);
        let row = &img.pixels[sy as usize * img.width as usize..][..img.width as usize];
        pixels.extend_from_slice(row);
        let last = row[img.width as usize - 1];
        pixels.resize(pixels.len() + (pw - img.width) as usize, last);
    }
    ImageRgb8 { width: pw, height: ph, pixels }
}

/// Number of blocks along each axis of an already-padded image.
pub fn block_grid_dims(img: &ImageRgb8, size: BlockSize) -> Result<(u32, u32), ImageError> {
    let bw = size.width() as u32;
    let bh = size.height() as u32;
    if img.width % bw != 0 || img.height % bh != 0 {
        return Err(ImageError::NotBlockAligned {
            width: img.width,
            height: img.height,
            block: size.label(),
        });
    }
    Ok((img.width / bw, img.height / bh))
}

fn check_block_index(
    img: &ImageRgb8,
    bx: u32,
    by: u32,
    size: BlockSize,
) -> Result<(u32, u32), ImageError> {
    let (gx, gy) = block_grid_dims(img, size)?;
    if bx >= gx || by >= gy {
        return Err(ImageError::BlockIndexOutOfRange { bx, by, grid_x: gx, grid_y: gy });
    }
    Ok((gx, gy))
}

/// Copies block (bx, by) out of a padded image.
pub fn extract_block(
    img: &ImageRgb8,
    bx: u32,
    by: u32,
    size: BlockSize,
) -> Result<BlockView, ImageError> {
    check_block_index(img, bx, by, size)?;
    let bw = size.width();
    let bh = size.height();
    let x0 = bx as usize * bw;
    let y0 = by as usize * bh;
    let stride = img.width as usize;
    let mut texels = [[0u8; 3]; MAX_BLOCK_AREA];
    for row in 0..bh {
        let src = &img.pixels[(y0 + row) * stride + x0..][..bw];
        texels[row * bw..(row + 1) * bw].copy_from_slice(src);
    }
    Ok(BlockView { size, texels })
}

/// Writes a block's texels back into the corresponding image rectangle.
/// Inverse of [`extract_block`].
pub fn place_block(
    img: &mut ImageRgb8,
    bx: u32,
    by: u32,
    size: BlockSize,
    block: &BlockView,
) -> Result<(), ImageError> {
    if block.size != size {
        return Err(ImageError::BadTexelCount { expected: size.area(), got: block.size.area() });
    }
    check_block_index(img, bx, by, size)?;
    let bw = size.width();
    let bh = size.height();
    let x0 = bx as usize * bw;
    let y0 = by as usize * bh;
    let stride = img.width as usize;
    for row in 0..bh {
        let dst = &mut img.pixels[(y0 + row) * stride + x0..][..bw];
        dst.copy_from_slice(&block.texels[row * bw..(row + 1) * bw]);
    }
    Ok(())
}

/// Top-left width x height sub-image; undoes padding after decode.
pub fn crop(img: &ImageRgb8, width: u32, height: u32) -> Result<ImageRgb8, ImageError> {
    if width > img.width || height > img.height {
        return Err(ImageError::CropTooLarge {
            width,
            height,
            src_width: img.width,
            src_height: img.height,
        });
    }
    if width == 0 || height == 0 {
        return Err(ImageError::EmptyImage);
    }
    if width == img.width && height == img.height {
        return Ok(img.clone());
    }
    let stride = img.width as usize;
    let mut pixels = Vec::with_capacity(width as usize * height as usize);
    for y in 0..height as usize {
        pixels.extend_from_slice(&img.pixels[y * stride..][..width as usize]);
    }
    Ok(ImageRgb8 { width, height, pixels })
}
