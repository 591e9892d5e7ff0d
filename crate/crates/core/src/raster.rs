//! Greyscale raster I/O (portable greymap) and frame rendering.

use crate::error::{Error, Result};
use crate::geometry::ShapeMask;
use crate::world::World;
use std::io::{BufRead, Write};
use std::path::Path;

/// 8-bit greyscale raster.
#[derive(Debug, Clone, PartialEq)]
pub struct GreyImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GreyImage {
    pub fn new(width: usize, height: usize) -> Self {
        GreyImage {
            width,
            height,
            pixels: vec![0; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        self.pixels[y * self.width + x] = v;
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    /// Parse a binary (P5) or ASCII (P2) portable greymap with maxval <= 255.
    pub fn read_pgm<R: BufRead>(mut reader: R) -> Result<GreyImage> {
        let mut data = Vec::new();
        reader.read_to_end(&mut data)?;
        if data.len() < 2 {
            return Err(Error::input("empty or truncated PGM"));
        }
        let magic = &data[..2];
        let binary = match magic {
            b"P5" => true,
            b"P2" => false,
            _ => return Err(Error::input("not a PGM file (expected P2 or P5)")),
        };

        let mut pos = 2usize;
        let mut fields = [0usize; 3]; // width, height, maxval
        let mut field_idx = 0;
        while field_idx < 3 {
            // skip whitespace and comment lines
            while pos < data.len() {
                match data[pos] {
                    b'#' => {
                        while pos < data.len() && data[pos] != b'\n' {
                            pos += 1;
                        }
                    }
                    c if c.is_ascii_whitespace() => pos += 1,
                    _ => break,
                }
            }
            let start = pos;
            while pos < data.len() && data[pos].is_ascii_digit() {
                pos += 1;
            }
            if start == pos {
                return Err(Error::input("malformed PGM header"));
            }
            let text = std::str::from_utf8(&data[start..pos])
                .map_err(|_| Error::input("malformed PGM header"))?;
            fields[field_idx] = text
                .parse()
                .map_err(|_| Error::input("malformed PGM header"))?;
            field_idx += 1;
        }
        let (w, h, maxval) = (fields[0], fields[1], fields[2]);
        if w == 0 || h == 0 {
            return Err(Error::input("PGM with zero dimension"));
        }
        if maxval == 0 || maxval > 255 {
            return Err(Error::input("only 8-bit PGM supported"));
        }

        let mut img = GreyImage::new(w, h);
        if binary {
            pos += 1; // single whitespace after maxval
            if data.len() < pos + w * h {
                return Err(Error::input("truncated PGM pixel data"));
            }
            img.pixels.copy_from_slice(&data[pos..pos + w * h]);
        } else {
            let text = std::str::from_utf8(&data[pos..])
                .map_err(|_| Error::input("malformed ASCII PGM"))?;
            let mut values = text.split_ascii_whitespace();
            for i in 0..w * h {
                let v: usize = values
                    .next()
                    .ok_or_else(|| Error::input("truncated PGM pixel data"))?
                    .parse()
                    .map_err(|_| Error::input("malformed ASCII PGM"))?;
                img.pixels[i] = v.min(255) as u8;
            }
        }
        Ok(img)
    }

    pub fn read_pgm_file(path: &Path) -> Result<GreyImage> {
        let file = std::fs::File::open(path)?;
        GreyImage::read_pgm(std::io::BufReader::new(file))
    }

    /// Write as binary (P5) portable greymap.
    pub fn write_pgm<W: Write>(&self, mut writer: W) -> Result<()> {
        writeln!(writer, "P5")?;
        writeln!(writer, "{} {}", self.width, self.height)?;
        writeln!(writer, "255")?;
        writer.write_all(&self.pixels)?;
        Ok(())
    }

    pub fn write_pgm_file(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_pgm(std::io::BufWriter::new(file))
    }
}

/// Render a world state: trail concentrations clamped linearly to 0-255 as
/// background, particles drawn on top at full white. Deterministic for a
/// given state.
pub fn render_frame(world: &World) -> GreyImage {
    let mut img = field_to_image(world.field());
    for p in world.particles() {
        let (x, y) = p.pos.cell();
        if x >= 0 && y >= 0 && (x as usize) < img.width && (y as usize) < img.height {
            img.set(x as usize, y as usize, 255);
        }
    }
    img
}

/// Linear clamp of concentrations to 8-bit grey.
pub fn field_to_image(field: &crate::field::TrailField) -> GreyImage {
    let mut img = GreyImage::new(field.width(), field.height());
    for y in 0..field.height() {
        for x in 0..field.width() {
            let v = field.sample((x as i32, y as i32)).clamp(0.0, 255.0);
            img.set(x, y, v as u8);
        }
    }
    img
}

/// Mask silhouette: inside cells white.
pub fn mask_to_image(mask: &ShapeMask) -> GreyImage {
    let mut img = GreyImage::new(mask.width(), mask.height());
    for y in 0..mask.height() {
        for x in 0..mask.width() {
            if mask.contains((x as i32, y as i32)) {
                img.set(x, y, 255);
            }
        }
    }
    img
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::load_shape_mask;

    #[test]
    fn pgm_round_trip() {
        let mut img = GreyImage::new(3, 2);
        img.set(0, 0, 10);
        img.set(2, 1, 200);
        let mut buf = Vec::new();
        img.write_pgm(&mut buf).unwrap();
        let back = GreyImage::read_pgm(&buf[..]).unwrap();
        assert_eq!(back, img);
    }

    #[test]
    fn ascii_pgm_with_comment() {
        let text = b"P2\n# a comment\n2 2\n255\n0 128\n255 7\n";
        let img = GreyImage::read_pgm(&text[..]).unwrap();
        assert_eq!(img.get(1, 0), 128);
        assert_eq!(img.get(0, 1), 255);
        assert_eq!(img.get(1, 1), 7);
    }

    #[test]
    fn masks_from_images() {
        let mut white = GreyImage::new(4, 4);
        white.pixels.fill(255);
        let mask = load_shape_mask(&white, 128).unwrap();
        assert_eq!(mask.count(), 16);

        let black = GreyImage::new(4, 4);
        assert!(load_shape_mask(&black, 128).is_err());

        let mut checker = GreyImage::new(4, 4);
        for y in 0..4 {
            for x in 0..4 {
                if (x + y) % 2 == 0 {
                    checker.set(x, y, 255);
                }
            }
        }
        let mask = load_shape_mask(&checker, 128).unwrap();
        assert_eq!(mask.count(), 8);
    }

    #[test]
    fn bad_pgm_inputs() {
        assert!(GreyImage::read_pgm(&b""[..]).is_err());
        assert!(GreyImage::read_pgm(&b"P6\n1 1\n255\nx"[..]).is_err());
        assert!(GreyImage::read_pgm(&b"P5\n2 2\n255\nab"[..]).is_err());
    }
}
