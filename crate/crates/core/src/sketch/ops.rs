//! Compositing primitives for the sketch chains. Neighborhood operations
//! accumulate symmetrically so every stage commutes with horizontal
//! mirroring bit-exactly, which the canonical-view symmetry tests rely on.

use super::image::{ImageError, RasterImage};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OpsError {
    #[error("erode requires binary image")]
    ErodeNonBinary,
    #[error("size mismatch: {0}x{1} vs {2}x{3}")]
    SizeMismatch(usize, usize, usize, usize),
    #[error("resize to {requested} exceeds input side {input}")]
    UpscaleRequested { requested: usize, input: usize },
    #[error("sigma must be positive, got {0}")]
    BadSigma(f64),
    #[error(transparent)]
    Image(#[from] ImageError),
}

/// Background removal: pixels at or above the threshold become pure white,
/// darker pixels keep their value.
pub fn background_remove(img: &RasterImage, threshold: f64) -> RasterImage {
    let mut out = img.clone();
    for v in &mut out.data {
        if *v >= threshold {
            *v = 1.0;
        }
    }
    out
}

/// Hard ramp: values below the threshold go to 0, the remainder to 1.
pub fn color_ramp(img: &RasterImage, threshold: f64) -> RasterImage {
    let mut out = img.clone();
    for v in &mut out.data {
        *v = if *v < threshold { 0.0 } else { 1.0 };
    }
    out
}

/// Negative: out = 1 - in. Involutive.
pub fn invert(img: &RasterImage) -> RasterImage {
    let mut out = img.clone();
    for v in &mut out.data {
        *v = 1.0 - *v;
    }
    out
}

/// Gradient magnitude of the standard 3x3 Sobel kernels, clamped to [0,1].
/// Borders replicate.
pub fn sobel(img: &RasterImage) -> RasterImage {
    let mut out = RasterImage::filled(img.width, img.height, 0.0);
    for y in 0..img.height as isize {
        for x in 0..img.width as isize {
            let v = |dx: isize, dy: isize| img.get_clamped(x + dx, y + dy);
            // Column sums grouped as (outer + outer) + 2*center so the
            // mirrored evaluation produces bit-identical partial sums.
            let right = (v(1, -1) + v(1, 1)) + 2.0 * v(1, 0);
            let left = (v(-1, -1) + v(-1, 1)) + 2.0 * v(-1, 0);
            let bottom = (v(-1, 1) + v(1, 1)) + 2.0 * v(0, 1);
            let top = (v(-1, -1) + v(1, -1)) + 2.0 * v(0, -1);
            let gx = right - left;
            let gy = bottom - top;
            out.set(x as usize, y as usize, (gx * gx + gy * gy).sqrt().min(1.0));
        }
    }
    out
}

/// Erosion of the dark set with a (2r+1)^2 box: a pixel stays dark only if
/// its whole neighborhood is dark. Outside the frame counts as white, so
/// isolated specks and border-touching darks vanish.
pub fn erode(img: &RasterImage, kernel_radius: usize) -> Result<RasterImage, OpsError> {
    if !img.is_binary() {
        return Err(OpsError::ErodeNonBinary);
    }
    let r = kernel_radius as isize;
    let mut out = RasterImage::white(img.width, img.height);
    for y in 0..img.height as isize {
        'pixel: for x in 0..img.width as isize {
            if img.get(x as usize, y as usize) != 0.0 {
                continue;
            }
            for dy in -r..=r {
                for dx in -r..=r {
                    let (nx, ny) = (x + dx, y + dy);
                    let outside = nx < 0
                        || ny < 0
                        || nx >= img.width as isize
                        || ny >= img.height as isize;
                    if outside || img.get(nx as usize, ny as usize) != 0.0 {
                        continue 'pixel;
                    }
                }
            }
            out.set(x as usize, y as usize, 0.0);
        }
    }
    Ok(out)
}

/// Separable Gaussian, kernel truncated at 3 sigma, borders replicate.
pub fn gaussian(img: &RasterImage, sigma: f64) -> Result<RasterImage, OpsError> {
    if sigma <= 0.0 {
        return Err(OpsError::BadSigma(sigma));
    }
    let radius = (3.0 * sigma).ceil() as usize;
    let mut weights = Vec::with_capacity(radius + 1);
    for k in 0..=radius {
        weights.push((-0.5 * (k as f64 / sigma).powi(2)).exp());
    }
    let total = weights[0] + 2.0 * weights[1..].iter().sum::<f64>();
    for w in &mut weights {
        *w /= total;
    }

    let blur_axis = |src: &RasterImage, horizontal: bool| -> RasterImage {
        let mut dst = RasterImage::filled(src.width, src.height, 0.0);
        for y in 0..src.height as isize {
            for x in 0..src.width as isize {
                let sample = |k: isize| {
                    if horizontal {
                        src.get_clamped(x + k, y)
                    } else {
                        src.get_clamped(x, y + k)
                    }
                };
                // Pair symmetric taps; (a + b) commutes exactly, keeping
                // the blur mirror-stable.
                let mut acc = weights[0] * sample(0);
                for (k, w) in weights.iter().enumerate().skip(1) {
                    acc += w * (sample(-(k as isize)) + sample(k as isize));
                }
                dst.set(x as usize, y as usize, acc);
            }
        }
        dst
    };

    Ok(blur_axis(&blur_axis(img, true), false))
}

/// 3x3 median filter; the denoise stage of the skeleton chain.
pub fn denoise(img: &RasterImage) -> RasterImage {
    let mut out = RasterImage::filled(img.width, img.height, 0.0);
    for y in 0..img.height as isize {
        for x in 0..img.width as isize {
            let mut window = [0.0f64; 9];
            let mut i = 0;
            for dy in -1..=1 {
                for dx in -1..=1 {
                    window[i] = img.get_clamped(x + dx, y + dy);
                    i += 1;
                }
            }
            window.sort_by(|a, b| a.partial_cmp(b).unwrap());
            out.set(x as usize, y as usize, window[4]);
        }
    }
    out
}

/// Pixelwise product; dark wins.
pub fn multiply_mix(a: &RasterImage, b: &RasterImage) -> Result<RasterImage, OpsError> {
    if a.width != b.width || a.height != b.height {
        return Err(OpsError::SizeMismatch(a.width, a.height, b.width, b.height));
    }
    let mut out = a.clone();
    for (v, w) in out.data.iter_mut().zip(&b.data) {
        *v *= w;
    }
    Ok(out)
}

/// Area-weighted downsampling of a square image to side x side.
/// Upscaling is rejected unless `allow_upscale`, which passes through.
pub fn resize_for_input(
    img: &RasterImage,
    side: usize,
    allow_upscale: bool,
) -> Result<RasterImage, OpsError> {
    assert_eq!(img.width, img.height, "resize_for_input expects square input");
    if side > img.width {
        if allow_upscale {
            return Ok(img.clone());
        }
        return Err(OpsError::UpscaleRequested {
            requested: side,
            input: img.width,
        });
    }
    if side == img.width {
        return Ok(img.clone());
    }

    // Per-axis fractional box weights.
    let scale = img.width as f64 / side as f64;
    let spans: Vec<(usize, Vec<f64>)> = (0..side)
        .map(|o| {
            let lo = o as f64 * scale;
            let hi = (o + 1) as f64 * scale;
            let first = lo.floor() as usize;
            let last = ((hi.ceil() as usize).min(img.width)).max(first + 1);
            let weights = (first..last)
                .map(|i| {
                    let cell_lo = (i as f64).max(lo);
                    let cell_hi = ((i + 1) as f64).min(hi);
                    (cell_hi - cell_lo).max(0.0) / scale
                })
                .collect();
            (first, weights)
        })
        .collect();

    let mut horizontal = RasterImage::filled(side, img.height, 0.0);
    for y in 0..img.height {
        for (ox, (first, weights)) in spans.iter().enumerate() {
            let mut acc = 0.0;
            for (k, w) in weights.iter().enumerate() {
                acc += w * img.get(first + k, y);
            }
            horizontal.set(ox, y, acc);
        }
    }
    let mut out = RasterImage::filled(side, side, 0.0);
    for (oy, (first, weights)) in spans.iter().enumerate() {
        for x in 0..side {
            let mut acc = 0.0;
            for (k, w) in weights.iter().enumerate() {
                acc += w * horizontal.get(x, first + k);
            }
            out.set(x, oy, acc.clamp(0.0, 1.0));
        }
    }
    Ok(out)
}
