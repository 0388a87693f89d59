//! The 128-bit physical block: field layout, packing, and unpacking for the
//! single supported configuration.

use crate::error::CodecError;

use super::endpoints::QuantizedEndpoints;
use super::weights::{WeightGrid, WEIGHT_GRID_LEN};

/// 11-bit block mode for a single-plane 8x5 weight grid with 2-bit weights,
/// from the block-mode layout table (ASTC spec C.2.8):
/// width = B+8 with B=0 (bits 8:7 = 00), height = A+2 with A=3
/// (bits 6:5 = 11), layout selector bits 3:2 = 01, weight range R = 0b100
/// split as R0 at bit 4 and R2:R1 at bits 1:0, D = H = 0.
pub const BLOCK_MODE: u32 = 0x066;

/// Color endpoint mode 8: LDR RGB, both endpoints stored directly.
pub const COLOR_ENDPOINT_MODE: u32 = 8;

const PARTITION_FIELD_OFFSET: u32 = 11;
const CEM_OFFSET: u32 = 13;
const ENDPOINT_ISE_OFFSET: u32 = 17;
const ENDPOINT_BITS: u32 = 5;
const WEIGHT_BITS: u32 = 2;

/// One 128-bit compressed block in its on-disk little-endian byte order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AstcBlock {
    bytes: [u8; 16],
}

impl AstcBlock {
    pub const SIZE: usize = 16;

    pub const fn from_bytes(bytes: [u8; 16]) -> Self {
        AstcBlock { bytes }
    }

    pub const fn bytes(&self) -> &[u8; 16] {
        &self.bytes
    }

    pub(crate) const fn bits(&self) -> u128 {
        u128::from_le_bytes(self.bytes)
    }

    pub(crate) const fn from_bits(bits: u128) -> Self {
        AstcBlock { bytes: bits.to_le_bytes() }
    }
}

/// Packs quantized endpoints and weights into a 128-bit block.
///
/// Field layout, LSB first: block mode (11 bits), partition count minus one
/// (2 bits, zero), CEM (4 bits), six 5-bit endpoint values as plain bits.
/// The eighty weight bits fill the block from the opposite end: weight
/// stream bit s lands at block bit 127-s, so the stream reads forward after
/// a 128-bit bit reversal. Bit 47 stays clear (127 of 128 bits used).
pub fn pack_block(qep: &QuantizedEndpoints, wg: &WeightGrid) -> AstcBlock {
    let mut bits = BLOCK_MODE as u128;
    bits |= (COLOR_ENDPOINT_MODE as u128) << CEM_OFFSET;
    let mut pos = ENDPOINT_ISE_OFFSET;
    for v in qep.values() {
        bits |= (v as u128) << pos;
        pos += ENDPOINT_BITS;
    }
    for (k, &q) in wg.values().iter().enumerate() {
        for b in 0..WEIGHT_BITS {
            if (q >> b) & 1 == 1 {
                let stream_bit = k as u32 * WEIGHT_BITS + b;
                bits |= 1u128 << (127 - stream_bit);
            }
        }
    }
    AstcBlock::from_bits(bits)
}

/// Recovers the quantized endpoints and weight grid from a block of the
/// supported configuration. Any other block mode (including void-extent
/// blocks), partition count, or CEM is rejected.
pub fn unpack_block(block: &AstcBlock) -> Result<(QuantizedEndpoints, WeightGrid), CodecError> {
    let bits = block.bits();
    let mode = (bits & 0x7FF) as u32;
    if mode != BLOCK_MODE {
        let reason = if mode & 0x1FF == 0x1FC {
            "void-extent block".to_string()
        } else {
            format!("block mode {mode:#05x} (only {BLOCK_MODE:#05x} is supported)")
        };
        return Err(CodecError::UnsupportedConfiguration { reason });
    }
    let partitions = ((bits >> PARTITION_FIELD_OFFSET) & 0b11) as u32 + 1;
    if partitions != 1 {
        return Err(CodecError::UnsupportedConfiguration {
            reason: format!("{partitions} partitions (only 1 is supported)"),
        });
    }
    let cem = ((bits >> CEM_OFFSET) & 0xF) as u32;
    if cem != COLOR_ENDPOINT_MODE {
        return Err(CodecError::UnsupportedConfiguration {
            reason: format!("color endpoint mode {cem} (only mode {COLOR_ENDPOINT_MODE})"),
        });
    }
    let mut v = [0u8; 6];
    for (i, v) in v.iter_mut().enumerate() {
        let pos = ENDPOINT_ISE_OFFSET + i as u32 * ENDPOINT_BITS;
        *v = ((bits >> pos) & 0x1F) as u8;
    }
    let mut q = [0u8; WEIGHT_GRID_LEN];
    for (k, q) in q.iter_mut().enumerate() {
        for b in 0..WEIGHT_BITS {
            let stream_bit = k as u32 * WEIGHT_BITS + b;
            *q |= (((bits >> (127 - stream_bit)) & 1) as u8) << b;
        }
    }
    Ok((QuantizedEndpoints::from_raw(v), WeightGrid::from_raw(q)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_inputs() -> (QuantizedEndpoints, WeightGrid) {
        let qep = QuantizedEndpoints::new([1, 30, 2, 29, 3, 28]).unwrap();
        let mut q = [0u8; WEIGHT_GRID_LEN];
        for (i, q) in q.iter_mut().enumerate() {
            *q = (i % 4) as u8;
        }
        (qep, WeightGrid::new(q).unwrap())
    }

    #[test]
    fn used_bits_leave_exactly_one_spare() {
        // 11 + 2 + 4 + 30 + 80 = 127 used bits; saturating every payload
        // field sets mode ones + CEM one + 30 endpoint + 80 weight bits
        let qep = QuantizedEndpoints::new([31; 6]).unwrap();
        let wg = WeightGrid::new([3; WEIGHT_GRID_LEN]).unwrap();
        let bits = pack_block(&qep, &wg).bits();
        assert_eq!(bits.count_ones(), BLOCK_MODE.count_ones() + 1 + 30 + 80);
        assert_eq!((bits >> 47) & 1, 0, "bit 47 must stay clear");
        assert_eq!((bits >> 11) & 0b11, 0, "partition field is zero");
    }

    #[test]
    fn roundtrip_recovers_fields() {
        let (qep, wg) = sample_inputs();
        let block = pack_block(&qep, &wg);
        let (q2, w2) = unpack_block(&block).unwrap();
        assert_eq!(q2.values(), qep.values());
        assert_eq!(w2.values(), wg.values());
    }

    #[test]
    fn rejects_other_partition_counts() {
        let (qep, wg) = sample_inputs();
        let mut bits = pack_block(&qep, &wg).bits();
        bits |= 0b01 << 11;
        let err = unpack_block(&AstcBlock::from_bits(bits)).unwrap_err();
        assert!(matches!(err, CodecError::UnsupportedConfiguration { .. }));
        assert!(err.to_string().contains("partitions"));
    }

    #[test]
    fn rejects_other_block_modes() {
        let (qep, wg) = sample_inputs();
        let mut bits = pack_block(&qep, &wg).bits();
        bits = (bits & !0x7FF) | 0x042; // a 6x6 grid mode
        assert!(unpack_block(&AstcBlock::from_bits(bits)).is_err());
    }

    #[test]
    fn rejects_void_extent_pattern() {
        let bits = 0xFFFF_FFFF_FFFF_FFFF_FFFF_FFFF_FFFF_FDFCu128;
        let err = unpack_block(&AstcBlock::from_bits(bits)).unwrap_err();
        assert!(err.to_string().contains("void-extent"));
    }

    #[test]
    fn rejects_other_cem() {
        let (qep, wg) = sample_inputs();
        let mut bits = pack_block(&qep, &wg).bits();
        bits = (bits & !(0xF << 13)) | (0b0110 << 13); // CEM 6
        let err = unpack_block(&AstcBlock::from_bits(bits)).unwrap_err();
        assert!(err.to_string().contains("endpoint mode"));
    }

    #[test]
    fn bytes_roundtrip_little_endian() {
        let (qep, wg) = sample_inputs();
        let block = pack_block(&qep, &wg);
        let copy = AstcBlock::from_bytes(*block.bytes());
        assert_eq!(copy, block);
        // block mode lives in the low-order byte on disk
        assert_eq!(block.bytes()[0], 0x66);
    }
}
