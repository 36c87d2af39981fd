//! Greyscale planes and binary PGM (P5) input/output.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Row-major greyscale raster with `bit_depth`-bit samples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImagePlane {
    width: usize,
    height: usize,
    bit_depth: u32,
    samples: Vec<u16>,
}

impl ImagePlane {
    pub fn new(width: usize, height: usize, samples: Vec<u16>) -> Result<Self> {
        Self::with_depth(width, height, 8, samples)
    }

    pub fn with_depth(
        width: usize,
        height: usize,
        bit_depth: u32,
        samples: Vec<u16>,
    ) -> Result<Self> {
        if !(1..=16).contains(&bit_depth) {
            return Err(Error::InvalidArgument(format!(
                "bit depth {bit_depth} outside 1..=16"
            )));
        }
        if samples.len() != width * height {
            return Err(Error::BadGeometry(format!(
                "{width}x{height} plane given {} samples",
                samples.len()
            )));
        }
        let max = ((1u32 << bit_depth) - 1) as u16;
        if let Some(v) = samples.iter().find(|&&v| v > max) {
            return Err(Error::InvalidArgument(format!(
                "sample {v} exceeds {bit_depth}-bit range"
            )));
        }
        Ok(ImagePlane {
            width,
            height,
            bit_depth,
            samples,
        })
    }

    pub fn filled(width: usize, height: usize, value: u16) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bit_depth(&self) -> u32 {
        self.bit_depth
    }

    pub fn max_value(&self) -> u16 {
        ((1u32 << self.bit_depth) - 1) as u16
    }

    pub fn samples(&self) -> &[u16] {
        &self.samples
    }

    pub fn get(&self, x: usize, y: usize) -> u16 {
        self.samples[y * self.width + x]
    }

    pub fn same_geometry(&self, other: &ImagePlane) -> Result<()> {
        if self.width != other.width || self.height != other.height {
            return Err(Error::BadGeometry(format!(
                "{}x{} vs {}x{}",
                self.width, self.height, other.width, other.height
            )));
        }
        Ok(())
    }
}

pub fn decode_pgm(data: &[u8]) -> Result<ImagePlane> {
    let mut pos = 0;
    if data.len() < 2 || &data[..2] != b"P5" {
        let magic = String::from_utf8_lossy(&data[..data.len().min(2)]).into_owned();
        return Err(Error::BadFormat(format!(
            "expected P5 magic, found `{magic}`"
        )));
    }
    pos += 2;
    let width = header_number(data, &mut pos, "width")?;
    let height = header_number(data, &mut pos, "height")?;
    let maxval = header_number(data, &mut pos, "maxval")?;
    // Exactly one whitespace byte separates the header from the raster.
    match data.get(pos) {
        Some(b) if b.is_ascii_whitespace() => pos += 1,
        _ => return Err(Error::BadFormat("missing whitespace after maxval".into())),
    }
    if maxval != 255 {
        return Err(Error::UnsupportedDepth(maxval as u32));
    }
    if width == 0 || height == 0 {
        return Err(Error::BadFormat(format!("empty image {width}x{height}")));
    }
    let len = width
        .checked_mul(height)
        .ok_or_else(|| Error::BadFormat("image dimensions overflow".into()))?;
    let payload = data.get(pos..pos + len).ok_or_else(|| {
        Error::BadFormat(format!(
            "truncated payload: expected {len} bytes, found {}",
            data.len() - pos
        ))
    })?;
    ImagePlane::new(
        width,
        height,
        payload.iter().map(|&b| u16::from(b)).collect(),
    )
}

fn header_number(data: &[u8], pos: &mut usize, what: &str) -> Result<usize> {
    // skip whitespace and comment lines
    loop {
        match data.get(*pos) {
            Some(b) if b.is_ascii_whitespace() => *pos += 1,
            Some(b'#') => {
                while let Some(&b) = data.get(*pos) {
                    *pos += 1;
                    if b == b'\n' || b == b'\r' {
                        break;
                    }
                }
            }
            _ => break,
        }
    }
    let start = *pos;
    while data.get(*pos).is_some_and(u8::is_ascii_digit) {
        *pos += 1;
    }
    if start == *pos {
        return Err(Error::BadFormat(format!("missing {what} in header")));
    }
    std::str::from_utf8(&data[start..*pos])
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::BadFormat(format!("bad {what} in header")))
}

/// Canonical P5 bytes: no comments, single newlines.
pub fn encode_pgm(plane: &ImagePlane) -> Result<Vec<u8>> {
    if plane.bit_depth() != 8 {
        return Err(Error::UnsupportedDepth(u32::from(plane.max_value())));
    }
    let mut out = format!("P5\n{} {}\n255\n", plane.width(), plane.height()).into_bytes();
    out.extend(plane.samples().iter().map(|&v| v as u8));
    Ok(out)
}

pub fn load_pgm(path: impl AsRef<Path>) -> Result<ImagePlane> {
    let path = path.as_ref();
    let data = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_pgm(&data)
}

pub fn save_pgm(plane: &ImagePlane, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_pgm(plane)?).map_err(|e| Error::io(path, e))
}
