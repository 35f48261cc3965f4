//! Bit-exact map file format.
//!
//! Layout, all little-endian:
//!   magic "SBOM" | version u16 | resolution f64 | origin 3 x f64 |
//!   depth u8 | pre-order node stream, 2 bits per node
//!
//! Node codes: `00` internal (eight children follow, x-lowest octant
//! order), `01` free leaf, `10` occupied leaf (unit-voxel level only),
//! `11` reserved. The final byte is zero-padded.

use super::octree::{Node, OccupancyOctree};
use crate::geom::Vec3;
use std::fs::File;
use std::io::{self, Read, Write};
use std::path::Path;
use thiserror::Error;

const MAGIC: [u8; 4] = *b"SBOM";
const VERSION: u16 = 1;
/// Deeper trees would need > 2^63 voxels per axis; reject as corrupt.
const MAX_DEPTH: u8 = 32;

const CODE_INTERNAL: u8 = 0b00;
const CODE_FREE: u8 = 0b01;
const CODE_OCCUPIED: u8 = 0b10;

#[derive(Debug, Error)]
pub enum MapError {
    #[error("not a map file: expected magic {MAGIC:?}, found {found:?}")]
    BadMagic { found: [u8; 4] },
    #[error("unsupported map format version {0} (expected {VERSION})")]
    UnsupportedVersion(u16),
    #[error("map file ends before the node stream is complete")]
    Truncated,
    #[error("map file has data past the end of the node stream")]
    TrailingData,
    #[error("reserved node code 11 in node stream")]
    InvalidNodeCode,
    #[error("internal node at the unit-voxel level")]
    InternalNodeAtLeafLevel,
    #[error("occupied leaf above the unit-voxel level")]
    CoarseOccupiedLeaf,
    #[error("stored resolution {0} is not a positive finite number")]
    InvalidResolution(f64),
    #[error("stored origin contains a non-finite coordinate")]
    InvalidOrigin,
    #[error("stored depth {0} exceeds the supported maximum {MAX_DEPTH}")]
    UnsupportedDepth(u8),
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub fn save_map<W: Write>(map: &OccupancyOctree, mut out: W) -> io::Result<()> {
    out.write_all(&MAGIC)?;
    out.write_all(&VERSION.to_le_bytes())?;
    out.write_all(&map.resolution().to_le_bytes())?;
    for c in map.origin().iter() {
        out.write_all(&c.to_le_bytes())?;
    }
    out.write_all(&[map.depth()])?;

    let mut bits = BitWriter::default();
    encode(map.root(), &mut bits);
    out.write_all(&bits.finish())
}

pub fn save_map_file(map: &OccupancyOctree, path: impl AsRef<Path>) -> io::Result<()> {
    save_map(map, File::create(path)?)
}

pub fn load_map<R: Read>(mut input: R) -> Result<OccupancyOctree, MapError> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    let mut header = Header {
        bytes: &bytes,
        cursor: 0,
    };

    let found: [u8; 4] = header.take(4)?.try_into().unwrap();
    if found != MAGIC {
        return Err(MapError::BadMagic { found });
    }
    let version = u16::from_le_bytes(header.take(2)?.try_into().unwrap());
    if version != VERSION {
        return Err(MapError::UnsupportedVersion(version));
    }
    let resolution = header.take_f64()?;
    if !(resolution > 0.0 && resolution.is_finite()) {
        return Err(MapError::InvalidResolution(resolution));
    }
    let origin = Vec3::new(header.take_f64()?, header.take_f64()?, header.take_f64()?);
    if origin.iter().any(|c| !c.is_finite()) {
        return Err(MapError::InvalidOrigin);
    }
    let depth = header.take(1)?[0];
    if depth > MAX_DEPTH {
        return Err(MapError::UnsupportedDepth(depth));
    }

    let mut bits = BitReader::new(&bytes[header.cursor..]);
    let mut occupied = 0usize;
    let root = decode(&mut bits, depth, &mut occupied)?;
    bits.expect_exhausted()?;

    Ok(OccupancyOctree::from_parts(
        resolution, origin, depth, root, occupied,
    ))
}

struct Header<'a> {
    bytes: &'a [u8],
    cursor: usize,
}

impl<'a> Header<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], MapError> {
        let slice = self
            .bytes
            .get(self.cursor..self.cursor + n)
            .ok_or(MapError::Truncated)?;
        self.cursor += n;
        Ok(slice)
    }

    fn take_f64(&mut self) -> Result<f64, MapError> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

pub fn load_map_file(path: impl AsRef<Path>) -> Result<OccupancyOctree, MapError> {
    load_map(File::open(path)?)
}

fn encode(node: &Node, bits: &mut BitWriter) {
    match node {
        Node::Free => bits.push(CODE_FREE),
        Node::Occupied => bits.push(CODE_OCCUPIED),
        Node::Internal(children) => {
            bits.push(CODE_INTERNAL);
            for child in children.iter() {
                encode(child, bits);
            }
        }
    }
}

fn decode(bits: &mut BitReader, level: u8, occupied: &mut usize) -> Result<Node, MapError> {
    match bits.pop()? {
        CODE_FREE => Ok(Node::Free),
        CODE_OCCUPIED => {
            if level != 0 {
                return Err(MapError::CoarseOccupiedLeaf);
            }
            *occupied += 1;
            Ok(Node::Occupied)
        }
        CODE_INTERNAL => {
            if level == 0 {
                return Err(MapError::InternalNodeAtLeafLevel);
            }
            let mut children = Vec::with_capacity(8);
            for _ in 0..8 {
                children.push(decode(bits, level - 1, occupied)?);
            }
            let children: Box<[Node; 8]> = children.try_into().expect("exactly eight children");
            Ok(Node::Internal(children))
        }
        _ => Err(MapError::InvalidNodeCode),
    }
}

#[derive(Default)]
struct BitWriter {
    bytes: Vec<u8>,
    used: u8,
}

impl BitWriter {
    /// Appends one 2-bit code, LSB-first within each byte.
    fn push(&mut self, code: u8) {
        if self.used == 0 {
            self.bytes.push(0);
        }
        *self.bytes.last_mut().unwrap() |= code << self.used;
        self.used = (self.used + 2) % 8;
    }

    fn finish(self) -> Vec<u8> {
        self.bytes
    }
}

struct BitReader<'a> {
    bytes: &'a [u8],
    cursor: usize,
    used: u8,
}

impl<'a> BitReader<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        BitReader {
            bytes,
            cursor: 0,
            used: 0,
        }
    }

    fn pop(&mut self) -> Result<u8, MapError> {
        let byte = *self.bytes.get(self.cursor).ok_or(MapError::Truncated)?;
        let code = (byte >> self.used) & 0b11;
        self.used += 2;
        if self.used == 8 {
            self.used = 0;
            self.cursor += 1;
        }
        Ok(code)
    }

    /// After the root decode the stream must hold nothing but the final
    /// byte's zero padding.
    fn expect_exhausted(&self) -> Result<(), MapError> {
        let (full_bytes, padding_ok) = if self.used == 0 {
            (self.cursor, true)
        } else {
            let last = self.bytes[self.cursor];
            (self.cursor + 1, last >> self.used == 0)
        };
        if full_bytes < self.bytes.len() || !padding_ok {
            return Err(MapError::TrailingData);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::octree::build_octree;
    use super::*;

    fn sample_map() -> OccupancyOctree {
        build_octree(
            [[0, 0, 0], [5, 3, 1], [7, 7, 7], [2, 6, 4]],
            0.25,
            Vec3::new(-1.0, 2.0, 0.0),
        )
    }

    #[test]
    fn round_trip_preserves_everything() {
        let map = sample_map();
        let mut file = Vec::new();
        save_map(&map, &mut file).unwrap();
        let loaded = load_map(file.as_slice()).unwrap();
        assert_eq!(loaded, map);
    }

    #[test]
    fn header_errors_are_distinct() {
        let mut file = Vec::new();
        save_map(&sample_map(), &mut file).unwrap();

        let mut bad_magic = file.clone();
        bad_magic[0] = b'X';
        assert!(matches!(
            load_map(bad_magic.as_slice()),
            Err(MapError::BadMagic { .. })
        ));

        let mut bad_version = file.clone();
        bad_version[4] = 9;
        assert!(matches!(
            load_map(bad_version.as_slice()),
            Err(MapError::UnsupportedVersion(9))
        ));

        let truncated = &file[..file.len() - 1];
        assert!(matches!(load_map(truncated), Err(MapError::Truncated)));

        let mut trailing = file.clone();
        trailing.push(0xff);
        assert!(matches!(
            load_map(trailing.as_slice()),
            Err(MapError::TrailingData)
        ));
    }

    #[test]
    fn header_truncation_is_reported() {
        let mut file = Vec::new();
        save_map(&sample_map(), &mut file).unwrap();
        assert!(matches!(load_map(&file[..3]), Err(MapError::Truncated)));
        assert!(matches!(load_map(&file[..20]), Err(MapError::Truncated)));
    }

    #[test]
    fn empty_map_is_one_free_leaf() {
        let map = build_octree([], 0.2, Vec3::zeros());
        let mut file = Vec::new();
        save_map(&map, &mut file).unwrap();
        // Header is 4 + 2 + 8 + 24 + 1 = 39 bytes; the tree is one code.
        assert_eq!(file.len(), 40);
        let loaded = load_map(file.as_slice()).unwrap();
        assert_eq!(loaded.occupied_count(), 0);
    }

    #[test]
    fn reserved_code_is_rejected() {
        let map = build_octree([], 0.2, Vec3::zeros());
        let mut file = Vec::new();
        save_map(&map, &mut file).unwrap();
        *file.last_mut().unwrap() = 0b11;
        assert!(matches!(
            load_map(file.as_slice()),
            Err(MapError::InvalidNodeCode)
        ));
    }
}
