//! Dataset ingestion, pixel-to-spike encoding, and weight export.
//!
//! Reads the MNIST IDX container (optionally gzip-compressed), resizes
//! 28x28 digits to 16x16 with an area-weighted box filter, and encodes
//! intensities into spike volleys: brighter pixels spike earlier,
//! background pixels stay silent. Trained weight matrices export as PGM
//! images and a lossless CSV.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use flate2::read::GzDecoder;
use thiserror::Error;

use crate::column::Column;
use crate::temporal::{SpikeTime, Volley, W_MAX};

const IMAGE_MAGIC: u32 = 2051;
const LABEL_MAGIC: u32 = 2049;
/// Distinct spike times available in the encode window.
const LEVELS: u32 = 8;

/// A row-major 8-bit grayscale image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> GrayImage {
        assert_eq!(pixels.len(), width * height, "pixel buffer does not match dimensions");
        GrayImage { width, height, pixels }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }
}

/// Intensity-to-latency encoding parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncoderConfig {
    /// Pixels below this intensity stay silent.
    pub cutoff: u8,
}

impl Default for EncoderConfig {
    fn default() -> EncoderConfig {
        EncoderConfig { cutoff: 128 }
    }
}

#[derive(Debug, Error)]
pub enum DataError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: magic {got} found, expected {expected}")]
    BadMagic { path: PathBuf, expected: u32, got: u32 },
    #[error("{path}: truncated, needed {needed} more bytes")]
    Truncated { path: PathBuf, needed: usize },
    #[error("dataset mismatch: {images} images but {labels} labels")]
    CountMismatch { images: usize, labels: usize },
    #[error("expected a {expected_w}x{expected_h} image, got {got_w}x{got_h}")]
    WrongDimensions { expected_w: usize, expected_h: usize, got_w: usize, got_h: usize },
    #[error("{path}:{line}: {reason}")]
    BadCsv { path: PathBuf, line: usize, reason: String },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> DataError + '_ {
    move |source| DataError::Io { path: path.to_path_buf(), source }
}

/// Reads a whole file, transparently gunzipping when the gzip signature
/// is present.
fn read_bytes(path: &Path) -> Result<Vec<u8>, DataError> {
    let raw = fs::read(path).map_err(io_err(path))?;
    if raw.starts_with(&[0x1f, 0x8b]) {
        let mut out = Vec::new();
        GzDecoder::new(raw.as_slice()).read_to_end(&mut out).map_err(io_err(path))?;
        Ok(out)
    } else {
        Ok(raw)
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
    path: &'a Path,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], DataError> {
        if self.pos + n > self.bytes.len() {
            return Err(DataError::Truncated {
                path: self.path.to_path_buf(),
                needed: self.pos + n - self.bytes.len(),
            });
        }
        let slice = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(slice)
    }

    fn u32_be(&mut self) -> Result<u32, DataError> {
        let b = self.take(4)?;
        Ok(u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
    }
}

/// Loads an IDX image/label file pair; counts must agree.
pub fn read_idx(
    image_path: &Path,
    label_path: &Path,
) -> Result<(Vec<GrayImage>, Vec<u8>), DataError> {
    let image_bytes = read_bytes(image_path)?;
    let mut cur = Cursor { bytes: &image_bytes, pos: 0, path: image_path };
    let magic = cur.u32_be()?;
    if magic != IMAGE_MAGIC {
        return Err(DataError::BadMagic {
            path: image_path.to_path_buf(),
            expected: IMAGE_MAGIC,
            got: magic,
        });
    }
    let count = cur.u32_be()? as usize;
    let rows = cur.u32_be()? as usize;
    let cols = cur.u32_be()? as usize;
    let mut images = Vec::with_capacity(count);
    for _ in 0..count {
        let pixels = cur.take(rows * cols)?.to_vec();
        images.push(GrayImage::new(cols, rows, pixels));
    }

    let label_bytes = read_bytes(label_path)?;
    let mut cur = Cursor { bytes: &label_bytes, pos: 0, path: label_path };
    let magic = cur.u32_be()?;
    if magic != LABEL_MAGIC {
        return Err(DataError::BadMagic {
            path: label_path.to_path_buf(),
            expected: LABEL_MAGIC,
            got: magic,
        });
    }
    let label_count = cur.u32_be()? as usize;
    let labels = cur.take(label_count)?.to_vec();

    if images.len() != labels.len() {
        return Err(DataError::CountMismatch { images: images.len(), labels: labels.len() });
    }
    Ok((images, labels))
}

/// Area-weighted box resampling to an arbitrary target size.
fn box_resize(img: &GrayImage, out_w: usize, out_h: usize) -> GrayImage {
    let sx = img.width as f64 / out_w as f64;
    let sy = img.height as f64 / out_h as f64;
    let mut pixels = Vec::with_capacity(out_w * out_h);
    for oy in 0..out_h {
        let (y0, y1) = (oy as f64 * sy, (oy + 1) as f64 * sy);
        for ox in 0..out_w {
            let (x0, x1) = (ox as f64 * sx, (ox + 1) as f64 * sx);
            let mut acc = 0.0;
            for j in y0.floor() as usize..(y1.ceil() as usize).min(img.height) {
                let wy = (y1.min((j + 1) as f64) - y0.max(j as f64)).max(0.0);
                for i in x0.floor() as usize..(x1.ceil() as usize).min(img.width) {
                    let wx = (x1.min((i + 1) as f64) - x0.max(i as f64)).max(0.0);
                    acc += wx * wy * img.pixels[j * img.width + i] as f64;
                }
            }
            pixels.push((acc / (sx * sy)).round().clamp(0.0, 255.0) as u8);
        }
    }
    GrayImage::new(out_w, out_h, pixels)
}

/// Resamples a 28x28 digit down to 16x16.
pub fn resize_16(img: &GrayImage) -> Result<GrayImage, DataError> {
    if img.width != 28 || img.height != 28 {
        return Err(DataError::WrongDimensions {
            expected_w: 28,
            expected_h: 28,
            got_w: img.width,
            got_h: img.height,
        });
    }
    Ok(box_resize(img, 16, 16))
}

/// Latency code for one pixel: intensities at or above the cutoff spike,
/// brighter earlier; everything else is silent.
pub fn encode_pixel(v: u8, cfg: &EncoderConfig) -> SpikeTime {
    if v >= cfg.cutoff {
        let t = ((255 - v) as u32 * LEVELS / 256).min(W_MAX as u32);
        SpikeTime::at(t as u8)
    } else {
        SpikeTime::ABSENT
    }
}

/// Encodes a 16x16 image into a 256-line volley.
pub fn encode_image(img: &GrayImage, cfg: &EncoderConfig) -> Volley {
    assert_eq!(
        (img.width, img.height),
        (16, 16),
        "encoder expects 16x16 input, got {}x{}",
        img.width,
        img.height
    );
    Volley::new(img.pixels.iter().map(|&v| encode_pixel(v, cfg)).collect())
}

/// Writes one PGM image per neuron (weights scaled onto 0..255) plus a
/// lossless weights.csv into `dir`.
pub fn export_weights(column: &Column, dir: &Path) -> Result<(), DataError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let (p, q) = (column.p(), column.q());
    let side = (p as f64).sqrt() as usize;
    let (w, h) = if side * side == p { (side, side) } else { (p, 1) };

    for n in 0..q {
        let path = dir.join(format!("neuron_{n:02}.pgm"));
        let mut file = fs::File::create(&path).map_err(io_err(&path))?;
        let header = format!("P5\n{w} {h}\n255\n");
        let body: Vec<u8> =
            (0..p).map(|i| (column.weight(n, i) as u32 * 255 / W_MAX as u32) as u8).collect();
        file.write_all(header.as_bytes())
            .and_then(|_| file.write_all(&body))
            .map_err(io_err(&path))?;
    }

    let csv_path = dir.join("weights.csv");
    let mut csv = String::new();
    for n in 0..q {
        let row: Vec<String> = (0..p).map(|i| column.weight(n, i).to_string()).collect();
        csv.push_str(&row.join(","));
        csv.push('\n');
    }
    fs::write(&csv_path, csv).map_err(io_err(&csv_path))?;
    Ok(())
}

/// Reads a weights.csv back into per-neuron rows.
pub fn import_weights(path: &Path) -> Result<Vec<Vec<u8>>, DataError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row: Result<Vec<u8>, DataError> = line
            .split(',')
            .map(|cell| {
                let w: u8 = cell.trim().parse().map_err(|_| DataError::BadCsv {
                    path: path.to_path_buf(),
                    line: idx + 1,
                    reason: format!("not a weight: {cell:?}"),
                })?;
                if w > W_MAX {
                    return Err(DataError::BadCsv {
                        path: path.to_path_buf(),
                        line: idx + 1,
                        reason: format!("weight {w} exceeds w_max"),
                    });
                }
                Ok(w)
            })
            .collect();
        rows.push(row?);
    }
    Ok(rows)
}
