use std::path::Path;

use png::{BitDepth, ColorType, DeflateCompression, Filter, Transformations};

use super::Canvas;
use crate::error::{Error, Result};

/// Encode as 8-bit RGBA PNG with pinned settings (Up filter on every row,
/// fdeflate compression, no ancillary chunks), so identical canvases give
/// identical bytes.
pub fn encode_png(canvas: &Canvas) -> Vec<u8> {
    let mut out = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut out, canvas.width(), canvas.height());
        enc.set_color(ColorType::Rgba);
        enc.set_depth(BitDepth::Eight);
        enc.set_deflate_compression(DeflateCompression::FdeflateUltraFast);
        enc.set_filter(Filter::Up);
        let mut writer = enc.write_header().expect("in-memory PNG header");
        writer
            .write_image_data(canvas.as_rgba())
            .expect("in-memory PNG data");
    }
    out
}

/// Decode any 8- or 16-bit, gray/gray-alpha/RGB/RGBA/palette PNG into RGBA8.
pub fn decode_png(bytes: &[u8]) -> Result<Canvas> {
    let mut dec = png::Decoder::new(std::io::Cursor::new(bytes));
    dec.set_transformations(Transformations::normalize_to_color8());
    let mut reader = dec.read_info().map_err(|e| Error::Decode(e.to_string()))?;
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| Error::Decode("image too large".into()))?;
    let mut buf = vec![0; size];
    let info = reader
        .next_frame(&mut buf)
        .map_err(|e| Error::Decode(e.to_string()))?;
    buf.truncate(info.buffer_size());
    let rgba: Vec<u8> = match info.color_type {
        ColorType::Rgba => buf,
        ColorType::Rgb => buf
            .chunks_exact(3)
            .flat_map(|c| [c[0], c[1], c[2], 255])
            .collect(),
        ColorType::GrayscaleAlpha => buf
            .chunks_exact(2)
            .flat_map(|c| [c[0], c[0], c[0], c[1]])
            .collect(),
        ColorType::Grayscale => buf.iter().flat_map(|&g| [g, g, g, 255]).collect(),
        ColorType::Indexed => {
            return Err(Error::Decode("palette was not expanded".into()));
        }
    };
    Canvas::from_rgba(info.width, info.height, rgba)
        .ok_or_else(|| Error::Decode("unexpected PNG buffer size".into()))
}

pub fn read_png(path: &Path) -> Result<Canvas> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_png(&bytes).map_err(|e| match e {
        Error::Decode(msg) => Error::Decode(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn write_png(path: &Path, canvas: &Canvas) -> Result<()> {
    std::fs::write(path, encode_png(canvas)).map_err(|e| Error::io(path, e))
}
