//! Ideal-weight projection onto the endpoint line, bilinear downsampling to
//! the 8x5 weight grid, 2-bit quantization, and the decoder-side fixed-point
//! infill back to block resolution.

use crate::error::CodecError;
use crate::image::{BlockSize, BlockView, MAX_BLOCK_AREA};
use crate::{EndpointPair, Real};

/// Weight grid width; weights are stored on this grid, not per texel.
pub const WEIGHT_GRID_WIDTH: usize = 8;
/// Weight grid height.
pub const WEIGHT_GRID_HEIGHT: usize = 5;
/// Total stored weights per block.
pub const WEIGHT_GRID_LEN: usize = WEIGHT_GRID_WIDTH * WEIGHT_GRID_HEIGHT;

/// Unclamped-resolution interpolation weights in [0, 1], one per texel.
#[derive(Debug, Clone)]
pub struct IdealWeights<R: Real> {
    size: BlockSize,
    values: [R; MAX_BLOCK_AREA],
}

impl<R: Real> IdealWeights<R> {
    pub fn size(&self) -> BlockSize {
        self.size
    }

    /// Row-major per-texel weights; length equals the footprint area.
    pub fn values(&self) -> &[R] {
        &self.values[..self.size.area()]
    }
}

/// Orthogonally projects every texel onto the line from `e0` to `e1`,
/// clamping the line parameter to [0, 1]. A degenerate line (equal
/// endpoints) yields all-zero weights.
pub fn project_weights<R: Real>(block: &BlockView, ep: &EndpointPair) -> IdealWeights<R> {
    let from_u8 = |v: u8| R::from_u8(v).expect("u8 fits any float");
    let e0 = ep.e0.map(from_u8);
    let d = [
        from_u8(ep.e1[0]) - e0[0],
        from_u8(ep.e1[1]) - e0[1],
        from_u8(ep.e1[2]) - e0[2],
    ];
    let dd = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
    let mut values = [R::zero(); MAX_BLOCK_AREA];
    if dd > R::zero() {
        for (out, texel) in values.iter_mut().zip(block.texels()) {
            let mut dot = R::zero();
            for c in 0..3 {
                dot = dot + (from_u8(texel[c]) - e0[c]) * d[c];
            }
            *out = (dot / dd).max(R::zero()).min(R::one());
        }
    }
    IdealWeights { size: block.size(), values }
}

/// Bilinearly resamples a src_w x src_h weight field down to the 8x5 grid.
/// Sampling positions use the corner-anchored map x = i*(src_w-1)/7,
/// y = j*(src_h-1)/4, so grid corners coincide with source corners and an
/// 8x5 source passes through unchanged.
pub fn downsample_weights<R: Real>(
    values: &[R],
    src_w: usize,
    src_h: usize,
) -> [R; WEIGHT_GRID_LEN] {
    assert_eq!(values.len(), src_w * src_h, "weight field does not match its dimensions");
    let from = |v: usize| R::from_usize(v).expect("grid index fits any float");
    let mut out = [R::zero(); WEIGHT_GRID_LEN];
    for j in 0..WEIGHT_GRID_HEIGHT {
        let y = from(j) * from(src_h - 1) / from(WEIGHT_GRID_HEIGHT - 1);
        let y0 = y.floor();
        let fy = y - y0;
        let y0 = y0.to_usize().expect("in-range row");
        let y1 = (y0 + 1).min(src_h - 1);
        for i in 0..WEIGHT_GRID_WIDTH {
            let x = from(i) * from(src_w - 1) / from(WEIGHT_GRID_WIDTH - 1);
            let x0 = x.floor();
            let fx = x - x0;
            let x0 = x0.to_usize().expect("in-range column");
            let x1 = (x0 + 1).min(src_w - 1);
            let lerp = |a: R, b: R, f: R| a + f * (b - a);
            let top = lerp(values[y0 * src_w + x0], values[y0 * src_w + x1], fx);
            let bottom = lerp(values[y1 * src_w + x0], values[y1 * src_w + x1], fx);
            out[j * WEIGHT_GRID_WIDTH + i] = lerp(top, bottom, fy);
        }
    }
    out
}

/// The 8x5 grid of 2-bit quantized weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightGrid {
    q: [u8; WEIGHT_GRID_LEN],
}

impl WeightGrid {
    /// Builds a grid, validating the 2-bit range of every entry.
    pub fn new(q: [u8; WEIGHT_GRID_LEN]) -> Result<Self, CodecError> {
        if let Some(&bad) = q.iter().find(|&&v| v > 3) {
            return Err(CodecError::WeightOutOfRange { value: bad });
        }
        Ok(WeightGrid { q })
    }

    pub(crate) fn from_raw(q: [u8; WEIGHT_GRID_LEN]) -> Self {
        debug_assert!(q.iter().all(|&v| v <= 3));
        WeightGrid { q }
    }

    pub fn values(&self) -> &[u8; WEIGHT_GRID_LEN] {
        &self.q
    }

    /// Complement grid (q -> 3-q), used when endpoint quantization swapped
    /// the endpoint order.
    pub fn inverted(&self) -> WeightGrid {
        WeightGrid { q: self.q.map(|v| 3 - v) }
    }
}

/// Quantizes grid weights in [0, 1] to 2 bits: q = round(3w), ties away
/// from zero.
pub fn quantize_weights<R: Real>(grid: &[R; WEIGHT_GRID_LEN]) -> WeightGrid {
    let three = R::from_u8(3).expect("3 fits any float");
    let q = grid.map(|w| {
        let q = (w * three).round().to_u8().expect("rounded weight in 0..=3");
        q.min(3)
    });
    WeightGrid { q }
}

/// 2-bit weight dequantization to the 0..=64 range: bit-replicate to 6 bits,
/// then bump values above 32 by one so the range ends hit 0 and 64 exactly.
pub fn unquantize_weight(q: u8) -> u8 {
    const TABLE: [u8; 4] = [0, 21, 43, 64];
    TABLE[q as usize]
}

/// Upsamples dequantized grid weights (0..=64) to one effective weight per
/// texel with the decoder's fixed-point bilinear infill (ASTC spec C.2.18):
/// 10-bit texel coordinates, 4-bit blend fractions, round-half-up.
pub fn infill_weights(grid: &[u8; WEIGHT_GRID_LEN], size: BlockSize) -> [u8; MAX_BLOCK_AREA] {
    let bw = size.width() as u32;
    let bh = size.height() as u32;
    let ds = (1024 + bw / 2) / (bw - 1);
    let dt = (1024 + bh / 2) / (bh - 1);
    let gw = WEIGHT_GRID_WIDTH as u32;
    let gh = WEIGHT_GRID_HEIGHT as u32;
    let at = |x: u32, y: u32| -> u32 {
        // out-of-grid neighbors only ever carry zero blend weight
        if x < gw && y < gh { u32::from(grid[(y * gw + x) as usize]) } else { 0 }
    };
    let mut out = [0u8; MAX_BLOCK_AREA];
    for t in 0..bh {
        let gt = (dt * t * (gh - 1) + 32) >> 6;
        let jt = gt >> 4;
        let ft = gt & 0xF;
        for s in 0..bw {
            let gs = (ds * s * (gw - 1) + 32) >> 6;
            let js = gs >> 4;
            let fs = gs & 0xF;
            let w11 = (fs * ft + 8) >> 4;
            let w10 = ft - w11;
            let w01 = fs - w11;
            let w00 = 16 + w11 - fs - ft;
            let v = at(js, jt) * w00
                + at(js + 1, jt) * w01
                + at(js, jt + 1) * w10
                + at(js + 1, jt + 1) * w11;
            out[(t * bw + s) as usize] = ((v + 8) >> 4) as u8;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::{BlockSize, BlockView};

    #[test]
    fn projection_of_line_endpoints() {
        let mut texels = [[128u8; 3]; 64];
        texels[0] = [0, 0, 0];
        texels[1] = [255, 255, 255];
        let block = BlockView::from_texels(BlockSize::B8x8, &texels).unwrap();
        let ep = EndpointPair::new([0, 0, 0], [255, 255, 255]);
        let w = project_weights::<f64>(&block, &ep);
        assert_eq!(w.values()[0], 0.0);
        assert_eq!(w.values()[1], 1.0);
        // gray midpoint projects to 128/255
        assert!((w.values()[2] - 128.0 / 255.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_line_gives_zero_weights() {
        let block = BlockView::from_texels(BlockSize::B8x8, &[[77u8; 3]; 64]).unwrap();
        let ep = EndpointPair::new([10, 10, 10], [10, 10, 10]);
        let w = project_weights::<f64>(&block, &ep);
        assert!(w.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn projection_clamps_outliers() {
        let mut texels = [[0u8; 3]; 64];
        texels[5] = [255, 255, 255];
        let block = BlockView::from_texels(BlockSize::B8x8, &texels).unwrap();
        let ep = EndpointPair::new([100, 100, 100], [120, 120, 120]);
        let w = project_weights::<f64>(&block, &ep);
        assert_eq!(w.values()[0], 0.0);
        assert_eq!(w.values()[5], 1.0);
    }

    #[test]
    fn downsample_identity_on_grid_sized_input() {
        let src: Vec<f64> = (0..40).map(|i| (i as f64) / 39.0).collect();
        let out = downsample_weights(&src, 8, 5);
        for (a, b) in out.iter().zip(&src) {
            assert_eq!(a, b, "8x5 -> 8x5 resample must be the exact identity");
        }
    }

    #[test]
    fn downsample_preserves_constants() {
        let src = vec![0.3125f64; 144];
        let out = downsample_weights(&src, 12, 12);
        assert!(out.iter().all(|&v| v == 0.3125));
    }

    #[test]
    fn downsample_reproduces_horizontal_ramp() {
        // ideal[s][t] = s/11 -> grid[i][j] = i/7 (bilinear of a linear ramp)
        let mut src = vec![0.0f64; 144];
        for t in 0..12 {
            for s in 0..12 {
                src[t * 12 + s] = s as f64 / 11.0;
            }
        }
        let out = downsample_weights(&src, 12, 12);
        for j in 0..5 {
            for i in 0..8 {
                let want = i as f64 / 7.0;
                assert!((out[j * 8 + i] - want).abs() < 1e-9, "cell ({i},{j})");
            }
        }
    }

    #[test]
    fn quantize_weight_range_and_ties() {
        let mut grid = [0.0f64; WEIGHT_GRID_LEN];
        grid[0] = 1.0;
        grid[1] = 0.50196; // round(1.5059) = 2
        grid[2] = 0.5; // tie at 1.5 rounds away from zero
        let q = quantize_weights(&grid);
        assert_eq!(q.values()[0], 3);
        assert_eq!(q.values()[1], 2);
        assert_eq!(q.values()[2], 2);
        assert_eq!(q.values()[3], 0);
    }

    #[test]
    fn quantize_sweep_against_dequantizer() {
        // dense sweep: error bounded by half a step plus the dequantization
        // skew max(|unq(q)/64 - q/3|) = 1/3 - 21/64
        let bound = 1.0 / 6.0 + (1.0 / 3.0 - 21.0 / 64.0) + 1e-12;
        let mut max_err: f64 = 0.0;
        for m in 0..=4095 {
            let w = m as f64 / 4095.0;
            let q = (w * 3.0).round() as u8;
            let err = (f64::from(unquantize_weight(q)) / 64.0 - w).abs();
            max_err = max_err.max(err);
        }
        assert!(max_err <= bound, "max {max_err} exceeds {bound}");
    }

    #[test]
    fn unquantize_weight_matches_bit_replication() {
        for q in 0u8..4 {
            let mut r = (u32::from(q) << 4) | (u32::from(q) << 2) | u32::from(q);
            if r > 32 {
                r += 1;
            }
            assert_eq!(u32::from(unquantize_weight(q)), r);
        }
        assert_eq!(unquantize_weight(0), 0);
        assert_eq!(unquantize_weight(3), 64);
    }

    #[test]
    fn unquantize_weight_complement_symmetry() {
        for q in 0u8..4 {
            assert_eq!(unquantize_weight(3 - q), 64 - unquantize_weight(q));
        }
    }

    #[test]
    fn weight_grid_validates_and_inverts() {
        assert!(WeightGrid::new([4; WEIGHT_GRID_LEN]).is_err());
        let g = WeightGrid::new([1; WEIGHT_GRID_LEN]).unwrap();
        assert!(g.inverted().values().iter().all(|&v| v == 2));
    }

    #[test]
    fn infill_constant_grid_is_constant() {
        for size in [BlockSize::B12x12, BlockSize::B8x8] {
            for v in [0u8, 21, 43, 64] {
                let grid = [v; WEIGHT_GRID_LEN];
                let out = infill_weights(&grid, size);
                assert!(out[..size.area()].iter().all(|&w| w == v));
            }
        }
    }

    #[test]
    fn infill_anchors_corners() {
        let mut grid = [0u8; WEIGHT_GRID_LEN];
        grid[0] = 64;
        grid[7] = 43;
        grid[32] = 21;
        grid[39] = 64;
        for size in [BlockSize::B12x12, BlockSize::B8x8] {
            let bw = size.width();
            let bh = size.height();
            let out = infill_weights(&grid, size);
            assert_eq!(out[0], 64, "top-left texel equals grid (0,0)");
            assert_eq!(out[bw - 1], 43, "top-right texel equals grid (7,0)");
            assert_eq!(out[(bh - 1) * bw], 21, "bottom-left equals grid (0,4)");
            assert_eq!(out[bh * bw - 1], 64, "bottom-right equals grid (7,4)");
        }
    }
}
