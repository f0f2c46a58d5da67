//! In-memory frames and the raw frame container.
//!
//! A container file holds one frame:
//!
//! | bytes | field |
//! |-------|-------|
//! | 4     | magic `TAPF` |
//! | 1     | format version, `1` |
//! | 1     | dtype tag: `0` = f32 little endian, `1` = u8 |
//! | 2     | reserved, zero |
//! | 4     | height, u32 LE |
//! | 4     | width, u32 LE |
//! | 4     | channels, u32 LE |
//! | ...   | `height * width * channels` samples, row-major, channels last |

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"TAPF";
const VERSION: u8 = 1;
pub const FRAME_EXTENSION: &str = "tapf";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrameDtype {
    F32,
    U8,
}

impl FrameDtype {
    fn tag(self) -> u8 {
        match self {
            FrameDtype::F32 => 0,
            FrameDtype::U8 => 1,
        }
    }
}

/// An `H x W x C` image with samples stored as `f32`.
#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    height: usize,
    width: usize,
    channels: usize,
    data: Vec<f32>,
    dtype: FrameDtype,
}

impl Frame {
    pub fn new(height: usize, width: usize, channels: usize, data: Vec<f32>) -> Result<Self> {
        if height == 0 || width == 0 || channels == 0 {
            return Err(Error::FrameFormat(format!("frame dims must be positive, got {height}x{width}x{channels}")));
        }
        if data.len() != height * width * channels {
            return Err(Error::FrameFormat(format!("{} samples for a {height}x{width}x{channels} frame", data.len())));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::FrameFormat("frame samples must be finite".into()));
        }
        Ok(Self { height, width, channels, data, dtype: FrameDtype::F32 })
    }

    pub fn zeros(height: usize, width: usize, channels: usize) -> Self {
        Self { height, width, channels, data: vec![0.0; height * width * channels], dtype: FrameDtype::F32 }
    }

    pub fn with_dtype(mut self, dtype: FrameDtype) -> Self {
        self.dtype = dtype;
        self
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn dtype(&self) -> FrameDtype {
        self.dtype
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn pixel(&self, x: usize, y: usize) -> &[f32] {
        let i = (y * self.width + x) * self.channels;
        &self.data[i..i + self.channels]
    }

    pub fn pixel_mut(&mut self, x: usize, y: usize) -> &mut [f32] {
        let i = (y * self.width + x) * self.channels;
        &mut self.data[i..i + self.channels]
    }

    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&[VERSION, self.dtype.tag(), 0, 0])?;
        for dim in [self.height, self.width, self.channels] {
            w.write_all(&(dim as u32).to_le_bytes())?;
        }
        match self.dtype {
            FrameDtype::F32 => {
                for v in &self.data {
                    w.write_all(&v.to_le_bytes())?;
                }
            }
            FrameDtype::U8 => {
                let bytes: Vec<u8> = self.data.iter().map(|v| v.round().clamp(0.0, 255.0) as u8).collect();
                w.write_all(&bytes)?;
            }
        }
        Ok(())
    }

    pub fn read_from(mut r: impl Read) -> Result<Self> {
        let mut header = [0u8; 20];
        r.read_exact(&mut header)?;
        if &header[..4] != MAGIC {
            return Err(Error::FrameFormat("bad magic".into()));
        }
        if header[4] != VERSION {
            return Err(Error::FrameFormat(format!("unsupported version {}", header[4])));
        }
        let dtype = match header[5] {
            0 => FrameDtype::F32,
            1 => FrameDtype::U8,
            other => return Err(Error::FrameFormat(format!("unknown dtype tag {other}"))),
        };
        let dim = |i: usize| u32::from_le_bytes(header[i..i + 4].try_into().unwrap()) as usize;
        let (height, width, channels) = (dim(8), dim(12), dim(16));
        let n = height
            .checked_mul(width)
            .and_then(|v| v.checked_mul(channels))
            .ok_or_else(|| Error::FrameFormat("frame dims overflow".into()))?;
        let data = match dtype {
            FrameDtype::F32 => {
                let mut bytes = vec![0u8; n * 4];
                r.read_exact(&mut bytes)?;
                bytes.chunks_exact(4).map(|b| f32::from_le_bytes(b.try_into().unwrap())).collect()
            }
            FrameDtype::U8 => {
                let mut bytes = vec![0u8; n];
                r.read_exact(&mut bytes)?;
                bytes.into_iter().map(f32::from).collect()
            }
        };
        Ok(Self::new(height, width, channels, data)?.with_dtype(dtype))
    }
}

/// Reads every `*.tapf` file in `dir`, ordered by file name.
pub fn read_frames_dir(dir: impl AsRef<Path>) -> Result<Vec<Frame>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<Vec<_>>>()?
        .into_iter()
        .filter(|p| p.extension().is_some_and(|e| e == FRAME_EXTENSION))
        .collect();
    paths.sort();
    paths.iter().map(|p| Frame::read_from(std::io::BufReader::new(fs::File::open(p)?))).collect()
}

/// Writes frames as `00000.tapf`, `00001.tapf`, ... into `dir` (created if needed).
pub fn write_frames_dir(dir: impl AsRef<Path>, frames: &[Frame]) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    for (t, frame) in frames.iter().enumerate() {
        let mut w = std::io::BufWriter::new(fs::File::create(dir.join(format!("{t:05}.{FRAME_EXTENSION}")))?);
        frame.write_to(&mut w)?;
        w.flush()?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn container_round_trip() {
        let f = Frame::new(2, 3, 2, (0..12).map(|v| v as f32 * 1.5).collect()).unwrap();
        let mut buf = Vec::new();
        f.write_to(&mut buf).unwrap();
        assert_eq!(buf.len(), 20 + 12 * 4);
        assert_eq!(&buf[..8], b"TAPF\x01\x00\x00\x00");
        assert_eq!(Frame::read_from(&buf[..]).unwrap(), f);

        let u = Frame::new(1, 2, 1, vec![3.0, 255.0]).unwrap().with_dtype(FrameDtype::U8);
        let mut buf = Vec::new();
        u.write_to(&mut buf).unwrap();
        assert_eq!(buf.len(), 22);
        assert_eq!(Frame::read_from(&buf[..]).unwrap(), u);
    }

    #[test]
    fn rejects_corrupt_input() {
        assert!(Frame::read_from(&b"NOPE\x01\x00\x00\x00"[..]).is_err());
        let mut buf = Vec::new();
        Frame::zeros(2, 2, 1).write_to(&mut buf).unwrap();
        buf[5] = 9;
        assert!(matches!(Frame::read_from(&buf[..]), Err(Error::FrameFormat(_))));
        buf[5] = 0;
        buf.truncate(24);
        assert!(Frame::read_from(&buf[..]).is_err());
        assert!(Frame::new(2, 2, 1, vec![0.0; 3]).is_err());
    }
}
