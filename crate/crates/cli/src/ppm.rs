//! Binary PPM (P6) output.

use std::io::{self, Write};
use std::path::Path;

/// An 8-bit RGB raster, row-major, top row first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<[u8; 3]>,
}

impl Image {
    pub fn filled(width: usize, height: usize, color: [u8; 3]) -> Self {
        Image { width, height, pixels: vec![color; width * height] }
    }

    pub fn from_gray(width: usize, height: usize, gray: &[u8]) -> Self {
        assert_eq!(gray.len(), width * height);
        Image { width, height, pixels: gray.iter().map(|&g| [g, g, g]).collect() }
    }

    /// Sets a pixel; coordinates outside the raster are ignored.
    pub fn put(&mut self, x: i64, y: i64, color: [u8; 3]) {
        if x >= 0 && y >= 0 && (x as usize) < self.width && (y as usize) < self.height {
            self.pixels[y as usize * self.width + x as usize] = color;
        }
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.reserve(self.pixels.len() * 3);
        for p in &self.pixels {
            out.extend_from_slice(p);
        }
        out
    }

    pub fn write_to(&self, path: &Path) -> io::Result<()> {
        let mut file = io::BufWriter::new(std::fs::File::create(path)?);
        file.write_all(&self.encode())?;
        file.flush()
    }
}

/// 0 for a survivor, otherwise `round(255·e/depth)`.
pub fn escape_shade(value: u32, depth: usize) -> u8 {
    if value == 0 {
        0
    } else {
        (255.0 * f64::from(value) / depth as f64).round().min(255.0) as u8
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_payload() {
        let img = Image::from_gray(2, 1, &[0, 255]);
        assert_eq!(img.encode(), b"P6\n2 1\n255\n\x00\x00\x00\xff\xff\xff".to_vec());
    }

    #[test]
    fn shades() {
        assert_eq!(escape_shade(0, 40), 0);
        assert_eq!(escape_shade(40, 40), 255);
        assert_eq!(escape_shade(1, 40), 6);
        assert_eq!(escape_shade(20, 40), 128);
    }

    #[test]
    fn out_of_range_put_is_ignored() {
        let mut img = Image::filled(2, 2, [1, 2, 3]);
        img.put(-1, 0, [9, 9, 9]);
        img.put(2, 1, [9, 9, 9]);
        img.put(1, 1, [7, 7, 7]);
        assert_eq!(img.pixels, vec![[1, 2, 3], [1, 2, 3], [1, 2, 3], [7, 7, 7]]);
    }
}
