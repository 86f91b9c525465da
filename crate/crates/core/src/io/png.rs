use std::path::Path;

use image::{codecs::png::PngEncoder, ExtendedColorType, ImageEncoder, ImageFormat};

use crate::error::{Error, Result};
use crate::geometry::Image;
use crate::io::{in_file, read_bytes, write_bytes};

pub fn encode_image(img: &Image) -> Result<Vec<u8>> {
    let raw: Vec<u8> = img.pixels().iter().flatten().copied().collect();
    let mut out = Vec::new();
    PngEncoder::new(&mut out)
        .write_image(&raw, img.width() as u32, img.height() as u32, ExtendedColorType::Rgb8)
        .map_err(|e| Error::format(format!("PNG encode: {e}")))?;
    Ok(out)
}

/// Decodes a PNG to 8-bit RGB; alpha is dropped.
pub fn decode_image(bytes: &[u8]) -> Result<Image> {
    let decoded = image::load_from_memory_with_format(bytes, ImageFormat::Png)
        .map_err(|e| Error::format(format!("PNG decode: {e}")))?
        .to_rgb8();
    let (w, h) = (decoded.width() as usize, decoded.height() as usize);
    let pixels = decoded.pixels().map(|p| p.0).collect();
    Image::new(w, h, pixels)
}

pub fn read_image(path: impl AsRef<Path>) -> Result<Image> {
    let path = path.as_ref();
    in_file(path, decode_image(&read_bytes(path)?))
}

pub fn write_image(img: &Image, path: impl AsRef<Path>) -> Result<()> {
    write_bytes(path.as_ref(), &encode_image(img)?)
}
