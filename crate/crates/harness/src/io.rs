//! Grayscale image input and output. Pixel values map to `[0, 1]`.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use anyhow::{bail, Context, Result};
use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{ExtendedColorType, GrayImage, ImageEncoder, ImageFormat, Luma};
use rpn_core::Frame;

/// Largest accepted image side, in pixels.
pub const MAX_SIDE: u32 = 4096;

pub fn load_frame(path: &Path) -> Result<Frame> {
    let (w, h) = image::image_dimensions(path).with_context(|| format!("reading image {}", path.display()))?;
    if w > MAX_SIDE || h > MAX_SIDE {
        bail!("image {} is {w}x{h}; sides above {MAX_SIDE} are rejected", path.display());
    }
    let img = image::open(path).with_context(|| format!("reading image {}", path.display()))?;
    let gray = img.into_luma16();
    let (w, h) = gray.dimensions();
    let pixels = gray.pixels().map(|p| p.0[0] as f64 / u16::MAX as f64).collect();
    Ok(Frame::new(w as usize, h as usize, pixels)?)
}

fn to_gray(frame: &Frame) -> GrayImage {
    GrayImage::from_fn(frame.width() as u32, frame.height() as u32, |x, y| {
        let v = frame.get(x as usize, y as usize).clamp(0.0, 1.0);
        Luma([(v * 255.0).round() as u8])
    })
}

/// Binary (P5) PGM; values are clamped to `[0, 1]`.
pub fn save_pgm(frame: &Frame, path: &Path) -> Result<()> {
    let file = File::create(path).with_context(|| format!("writing {}", path.display()))?;
    let img = to_gray(frame);
    PnmEncoder::new(BufWriter::new(file))
        .with_subtype(PnmSubtype::Graymap(SampleEncoding::Binary))
        .write_image(img.as_raw(), img.width(), img.height(), ExtendedColorType::L8)
        .with_context(|| format!("writing {}", path.display()))
}

pub fn save_png(frame: &Frame, path: &Path) -> Result<()> {
    to_gray(frame)
        .save_with_format(path, ImageFormat::Png)
        .with_context(|| format!("writing {}", path.display()))
}
