use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use png::{BitDepth, ColorType, Transformations};

use super::{GrayImage2D, RoiMask};
use crate::error::{Error, Result};

struct RawGray {
    width: usize,
    height: usize,
    depth: BitDepth,
    samples: Vec<u16>,
}

fn decode_gray(path: &Path) -> Result<RawGray> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut decoder = png::Decoder::new(BufReader::new(file));
    // Keep 16-bit samples intact; expand sub-byte depths to 8 bits.
    decoder.set_transformations(Transformations::EXPAND);
    let mut reader = decoder.read_info()?;
    let mut buf = vec![0; reader.output_buffer_size().unwrap_or(0)];
    let info = reader.next_frame(&mut buf)?;
    if info.color_type != ColorType::Grayscale {
        return Err(Error::InvalidImage(format!(
            "{}: expected a grayscale PNG, found {:?}",
            path.display(),
            info.color_type
        )));
    }
    let (width, height) = (info.width as usize, info.height as usize);
    let data = &buf[..info.buffer_size()];
    let samples = match info.bit_depth {
        BitDepth::Sixteen => data
            .chunks_exact(2)
            .map(|b| u16::from_be_bytes([b[0], b[1]]))
            .collect(),
        BitDepth::Eight => data.iter().map(|&b| b as u16).collect(),
        other => {
            return Err(Error::InvalidImage(format!(
                "{}: unsupported bit depth {other:?}",
                path.display()
            )))
        }
    };
    Ok(RawGray {
        width,
        height,
        depth: info.bit_depth,
        samples,
    })
}

/// Reads an 8- or 16-bit grayscale PNG; intensities keep their stored
/// integer values.
pub fn read_gray_png(path: impl AsRef<Path>) -> Result<GrayImage2D> {
    let raw = decode_gray(path.as_ref())?;
    GrayImage2D::new(
        raw.width,
        raw.height,
        raw.samples.into_iter().map(f64::from).collect(),
    )
}

/// Reads an 8-bit grayscale PNG mask; any nonzero byte is foreground.
pub fn read_mask_png(path: impl AsRef<Path>) -> Result<RoiMask> {
    let path = path.as_ref();
    let raw = decode_gray(path)?;
    if raw.depth != BitDepth::Eight {
        return Err(Error::InvalidImage(format!(
            "{}: masks must be 8-bit, found {:?}",
            path.display(),
            raw.depth
        )));
    }
    RoiMask::new(
        raw.width,
        raw.height,
        raw.samples.into_iter().map(|v| v != 0).collect(),
    )
}

/// Writes raw bytes as an 8-bit grayscale PNG.
pub fn write_gray8_png(
    path: impl AsRef<Path>,
    width: usize,
    height: usize,
    data: &[u8],
) -> Result<()> {
    let path = path.as_ref();
    if data.len() != width * height {
        return Err(Error::LengthMismatch {
            expected: width * height,
            found: data.len(),
        });
    }
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut encoder = png::Encoder::new(BufWriter::new(file), width as u32, height as u32);
    encoder.set_color(ColorType::Grayscale);
    encoder.set_depth(BitDepth::Eight);
    let mut writer = encoder.write_header()?;
    writer.write_image_data(data)?;
    writer.finish()?;
    Ok(())
}

/// Writes a 16-bit grayscale PNG (used for fixtures).
pub fn write_gray16_png(
    path: impl AsRef<Path>,
    width: usize,
    height: usize,
    data: &[u16],
) -> Result<()> {
    let path = path.as_ref();
    if data.len() != width * height {
        return Err(Error::LengthMismatch {
            expected: width * height,
            found: data.len(),
        });
    }
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut encoder = png::Encoder::new(BufWriter::new(file), width as u32, height as u32);
    encoder.set_color(ColorType::Grayscale);
    encoder.set_depth(BitDepth::Sixteen);
    let mut writer = encoder.write_header()?;
    let bytes: Vec<u8> = data.iter().flat_map(|v| v.to_be_bytes()).collect();
    writer.write_image_data(&bytes)?;
    writer.finish()?;
    Ok(())
}
