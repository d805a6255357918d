//! Single-channel float images in [0,1] and their 8-bit PNG form.

use thiserror::Error;

/// Row-major grayscale image; 0 is black, 1 is white.
#[derive(Debug, Clone, PartialEq)]
pub struct RasterImage {
    pub width: usize,
    pub height: usize,
    pub data: Vec<f64>,
}

#[derive(Debug, Error)]
pub enum ImageError {
    #[error("image dimensions mismatch: {0}x{1} vs {2}x{3}")]
    SizeMismatch(usize, usize, usize, usize),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("png: {0}")]
    Png(#[from] image::ImageError),
}

impl RasterImage {
    pub fn filled(width: usize, height: usize, value: f64) -> Self {
        RasterImage {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    pub fn white(width: usize, height: usize) -> Self {
        Self::filled(width, height, 1.0)
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, v: f64) {
        self.data[y * self.width + x] = v;
    }

    /// Clamped lookup replicating the border.
    pub fn get_clamped(&self, x: isize, y: isize) -> f64 {
        let xi = x.clamp(0, self.width as isize - 1) as usize;
        let yi = y.clamp(0, self.height as isize - 1) as usize;
        self.get(xi, yi)
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }

    /// Count of pixels at exactly 0.
    pub fn dark_count(&self) -> usize {
        self.data.iter().filter(|&&v| v == 0.0).count()
    }

    pub fn is_binary(&self) -> bool {
        self.data.iter().all(|&v| v == 0.0 || v == 1.0)
    }

    pub fn flipped_horizontal(&self) -> RasterImage {
        let mut out = self.clone();
        for y in 0..self.height {
            for x in 0..self.width {
                out.set(x, y, self.get(self.width - 1 - x, y));
            }
        }
        out
    }

    /// 8-bit grayscale bytes, 0..255, no alpha.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.data
            .iter()
            .map(|&v| (v.clamp(0.0, 1.0) * 255.0).round() as u8)
            .collect()
    }

    pub fn from_bytes(width: usize, height: usize, bytes: &[u8]) -> Self {
        RasterImage {
            width,
            height,
            data: bytes.iter().map(|&b| b as f64 / 255.0).collect(),
        }
    }

    pub fn save_png(&self, path: &std::path::Path) -> Result<(), ImageError> {
        let buf = image::GrayImage::from_raw(self.width as u32, self.height as u32, self.to_bytes())
            .expect("buffer size matches dimensions");
        buf.save_with_format(path, image::ImageFormat::Png)?;
        Ok(())
    }

    pub fn load_png(path: &std::path::Path) -> Result<Self, ImageError> {
        let img = image::open(path)?.into_luma8();
        Ok(Self::from_bytes(
            img.width() as usize,
            img.height() as usize,
            img.as_raw(),
        ))
    }
}
