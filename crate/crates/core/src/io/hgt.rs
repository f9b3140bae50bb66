//! SRTM `.hgt` tiles: square grids of big-endian `i16` samples, row-major
//! from the north-west corner, `-32768` marking voids.

use std::path::Path;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::environment::HeightGrid;
use crate::error::{Error, Result};

pub const VOID: i16 = -32768;
/// Meters per degree of latitude used by every projection in the crate.
pub const METERS_PER_DEGREE: f64 = 111_320.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HgtResolution {
    Srtm1,
    Srtm3,
}

impl HgtResolution {
    pub fn samples(self) -> usize {
        match self {
            HgtResolution::Srtm1 => 3601,
            HgtResolution::Srtm3 => 1201,
        }
    }

    pub fn arc_seconds(self) -> f64 {
        match self {
            HgtResolution::Srtm1 => 1.0,
            HgtResolution::Srtm3 => 3.0,
        }
    }

    pub fn byte_len(self) -> usize {
        self.samples() * self.samples() * 2
    }

    pub fn from_byte_len(len: usize) -> Option<Self> {
        [HgtResolution::Srtm1, HgtResolution::Srtm3]
            .into_iter()
            .find(|r| r.byte_len() == len)
    }

    /// Post spacing in meters at `latitude`: the mean of the north-south and
    /// east-west spacings.
    pub fn spacing_at(self, latitude: f64) -> f64 {
        let ns = self.arc_seconds() / 3600.0 * METERS_PER_DEGREE;
        let ew = ns * latitude.to_radians().cos();
        (ns + ew) / 2.0
    }
}

/// Parses a tile. `latitude` is the tile's central latitude in degrees.
pub fn read_hgt(bytes: &[u8], resolution: HgtResolution, latitude: f64) -> Result<HeightGrid> {
    let expected = resolution.byte_len();
    if bytes.len() != expected {
        return Err(Error::Format {
            offset: bytes.len().min(expected),
            message: format!("{resolution:?} tile must be {expected} bytes, got {}", bytes.len()),
        });
    }
    let n = resolution.samples();
    let mut elevations = Vec::with_capacity(n * n);
    let mut void_mask = Vec::with_capacity(n * n);
    for pair in bytes.chunks_exact(2) {
        let v = i16::from_be_bytes([pair[0], pair[1]]);
        void_mask.push(v == VOID);
        elevations.push(if v == VOID { f64::NAN } else { v as f64 });
    }
    if void_mask.iter().all(|&v| v) {
        return Err(Error::Data("every sample of the tile is void".into()));
    }
    HeightGrid::new(n, n, resolution.spacing_at(latitude), elevations, void_mask)
}

/// Serializes a square grid of the tile's size. Elevations are rounded to
/// whole meters; void cells become [`VOID`].
pub fn write_hgt(grid: &HeightGrid, resolution: HgtResolution) -> Result<Vec<u8>> {
    let n = resolution.samples();
    if grid.rows() != n || grid.cols() != n {
        return Err(Error::Dimension(format!(
            "{resolution:?} needs {n}x{n} samples, grid is {}x{}",
            grid.rows(),
            grid.cols()
        )));
    }
    let mut out = Vec::with_capacity(resolution.byte_len());
    for (i, &z) in grid.elevations().iter().enumerate() {
        let v = if grid.void_mask()[i] {
            VOID
        } else {
            z.round().clamp(-32767.0, 32767.0) as i16
        };
        out.extend_from_slice(&v.to_be_bytes());
    }
    Ok(out)
}

/// South-west corner `(lat, lon)` encoded in a tile name such as
/// `N43E007.hgt`.
pub fn tile_origin(name: &str) -> Option<(f64, f64)> {
    let stem = name.rsplit(['/', '\\']).next()?.split('.').next()?;
    let b = stem.as_bytes();
    if b.len() != 7 {
        return None;
    }
    let lat: f64 = stem[1..3].parse().ok()?;
    let lon: f64 = stem[4..7].parse().ok()?;
    let lat = match b[0] {
        b'N' | b'n' => lat,
        b'S' | b's' => -lat,
        _ => return None,
    };
    let lon = match b[3] {
        b'E' | b'e' => lon,
        b'W' | b'w' => -lon,
        _ => return None,
    };
    Some((lat, lon))
}

/// Reads a tile from disk, inferring the resolution from its size and the
/// latitude from its name (equator when the name is not standard).
pub fn read_hgt_file(path: &Path) -> Result<HeightGrid> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let resolution = HgtResolution::from_byte_len(bytes.len()).ok_or_else(|| Error::Format {
        offset: bytes.len(),
        message: format!("{} bytes is neither an SRTM1 nor an SRTM3 tile", bytes.len()),
    })?;
    let name = path.file_name().and_then(|s| s.to_str()).unwrap_or_default();
    let latitude = match tile_origin(name) {
        Some((lat, _)) => lat + 0.5,
        None => {
            warn!("cannot infer latitude from tile name '{name}', assuming the equator");
            0.0
        }
    };
    read_hgt(&bytes, resolution, latitude)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_srtm3_tile() {
        let bytes: Vec<u8> = std::iter::repeat([0x00, 0x64]).take(1201 * 1201).flatten().collect();
        assert_eq!(bytes.len(), 2_884_802);
        let grid = read_hgt(&bytes, HgtResolution::Srtm3, 0.0).unwrap();
        assert_eq!((grid.rows(), grid.cols()), (1201, 1201));
        assert!(grid.elevations().iter().all(|&z| z == 100.0));
        assert!((grid.spacing() - 3.0 / 3600.0 * METERS_PER_DEGREE).abs() < 1e-9);
    }

    #[test]
    fn void_sentinel_is_masked() {
        let mut bytes: Vec<u8> = std::iter::repeat([0x00, 0x01]).take(1201 * 1201).flatten().collect();
        bytes[0] = 0x80;
        bytes[1] = 0x00;
        let grid = read_hgt(&bytes, HgtResolution::Srtm3, 0.0).unwrap();
        assert!(grid.is_void(0, 0));
        assert_eq!(grid.void_count(), 1);
    }

    #[test]
    fn wrong_size_and_all_void() {
        assert!(matches!(read_hgt(&[0; 10], HgtResolution::Srtm3, 0.0), Err(Error::Format { .. })));
        let bytes: Vec<u8> = std::iter::repeat([0x80, 0x00]).take(1201 * 1201).flatten().collect();
        assert!(matches!(read_hgt(&bytes, HgtResolution::Srtm3, 0.0), Err(Error::Data(_))));
    }

    #[test]
    fn tile_names() {
        assert_eq!(tile_origin("N43E007.hgt"), Some((43.0, 7.0)));
        assert_eq!(tile_origin("data/S35W117.hgt"), Some((-35.0, -117.0)));
        assert_eq!(tile_origin("terrain.hgt"), None);
    }
}
