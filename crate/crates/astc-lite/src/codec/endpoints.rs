//! Endpoint selection from the per-channel bounding box, 5-bit endpoint
//! quantization, and dequantization by bit replication.

use crate::error::CodecError;
use crate::image::BlockView;

/// Two RGB endpoints spanning the color line of a block, ordered so that the
/// channel sum of `e0` never exceeds that of `e1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EndpointPair {
    pub e0: [u8; 3],
    pub e1: [u8; 3],
}

impl EndpointPair {
    /// Builds a pair, swapping the endpoints if needed to restore the
    /// canonical sum ordering.
    pub fn new(e0: [u8; 3], e1: [u8; 3]) -> Self {
        let sum = |c: [u8; 3]| c.iter().map(|&v| u32::from(v)).sum::<u32>();
        if sum(e0) > sum(e1) {
            EndpointPair { e0: e1, e1: e0 }
        } else {
            EndpointPair { e0, e1 }
        }
    }
}

/// Picks endpoints from the per-channel min/max bounding box, shrunk by a
/// 1/16 inset (integer floor) on each side.
pub fn select_endpoints(block: &BlockView) -> EndpointPair {
    let mut lo = [255u8; 3];
    let mut hi = [0u8; 3];
    for texel in block.texels() {
        for c in 0..3 {
            lo[c] = lo[c].min(texel[c]);
            hi[c] = hi[c].max(texel[c]);
        }
    }
    let mut e0 = [0u8; 3];
    let mut e1 = [0u8; 3];
    for c in 0..3 {
        let inset = (hi[c] - lo[c]) / 16;
        e0[c] = lo[c] + inset;
        e1[c] = hi[c] - inset;
    }
    EndpointPair::new(e0, e1)
}

/// Six 5-bit endpoint integers in the direct LDR RGB layout
/// (v0..v5) = (e0.r, e1.r, e0.g, e1.g, e0.b, e1.b).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuantizedEndpoints {
    v: [u8; 6],
}

impl QuantizedEndpoints {
    /// Builds quantized endpoints, validating the 5-bit range and the
    /// canonical ordering v0+v2+v4 <= v1+v3+v5.
    pub fn new(v: [u8; 6]) -> Result<Self, CodecError> {
        for &x in &v {
            if x > 31 {
                return Err(CodecError::EndpointOutOfRange { value: x });
            }
        }
        let s0: u32 = [v[0], v[2], v[4]].iter().map(|&x| u32::from(x)).sum();
        let s1: u32 = [v[1], v[3], v[5]].iter().map(|&x| u32::from(x)).sum();
        if s0 > s1 {
            return Err(CodecError::EndpointOrdering);
        }
        Ok(QuantizedEndpoints { v })
    }

    /// Builds from raw unpacked field values without the ordering check.
    /// Foreign blocks in the supported configuration may legally carry
    /// endpoints in either order; the decoder resolves it.
    pub(crate) fn from_raw(v: [u8; 6]) -> Self {
        debug_assert!(v.iter().all(|&x| x <= 31));
        QuantizedEndpoints { v }
    }

    pub fn values(&self) -> [u8; 6] {
        self.v
    }
}

/// round(x * 31 / 255) with ties away from zero (exact integer form; no tie
/// is actually reachable for integer x).
fn quantize_channel(x: u8) -> u8 {
    ((u32::from(x) * 62 + 255) / 510) as u8
}

/// Expands a 5-bit value to 8 bits by replicating its top 3 bits into the
/// low bits.
pub fn unquantize_endpoint(q: u8) -> u8 {
    debug_assert!(q <= 31);
    (q << 3) | (q >> 2)
}

/// Quantizes both endpoints to 5 bits per channel. The returned flag is true
/// when quantization flipped the dequantized sum ordering and the endpoints
/// were swapped, in which case the block's weights must be inverted
/// (q -> 3-q) to compensate.
///
/// The comparison runs on the dequantized values because that is where the
/// decoder decides between the direct and blue-contracted reconstruction;
/// the quantized sums can tie while the dequantized sums differ.
pub fn quantize_endpoints(ep: &EndpointPair) -> (QuantizedEndpoints, bool) {
    let q0 = ep.e0.map(quantize_channel);
    let q1 = ep.e1.map(quantize_channel);
    let unq_sum =
        |q: [u8; 3]| q.iter().map(|&x| u32::from(unquantize_endpoint(x))).sum::<u32>();
    let (q0, q1, swapped) =
        if unq_sum(q0) > unq_sum(q1) { (q1, q0, true) } else { (q0, q1, false) };
    let qep = QuantizedEndpoints { v: [q0[0], q1[0], q0[1], q1[1], q0[2], q1[2]] };
    (qep, swapped)
}

/// Dequantizes the six endpoint values and applies the direct LDR RGB
/// reconstruction rule: when the first endpoint's dequantized sum exceeds
/// the second's, both endpoints are blue-contracted and swapped.
pub fn decode_endpoints(qep: &QuantizedEndpoints) -> ([u8; 3], [u8; 3]) {
    let u: Vec<u32> = qep.v.iter().map(|&q| u32::from(unquantize_endpoint(q))).collect();
    if u[1] + u[3] + u[5] >= u[0] + u[2] + u[4] {
        (
            [u[0] as u8, u[2] as u8, u[4] as u8],
            [u[1] as u8, u[3] as u8, u[5] as u8],
        )
    } else {
        (blue_contract(u[1], u[3], u[5]), blue_contract(u[0], u[2], u[4]))
    }
}

fn blue_contract(r: u32, g: u32, b: u32) -> [u8; 3] {
    // (r+b)/2 <= 255 for 8-bit inputs, no clamp needed
    [((r + b) >> 1) as u8, ((g + b) >> 1) as u8, b as u8]
}
