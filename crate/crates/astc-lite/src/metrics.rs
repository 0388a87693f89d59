//! Rate and distortion measurement: PSNR over interleaved RGB, SSIM on
//! BT.601 luma with an 11x11 Gaussian window, and bits per pixel.

use crate::error::MetricsError;
use crate::image::ImageRgb8;
use crate::{Real, Scalar};

/// SSIM window diameter.
pub const SSIM_WINDOW: u32 = 11;
const SSIM_SIGMA: f64 = 1.5;
const SSIM_K1: f64 = 0.01;
const SSIM_K2: f64 = 0.03;
const DYNAMIC_RANGE: f64 = 255.0;

/// One rate/distortion record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsReport {
    /// Peak signal-to-noise ratio in dB; +infinity for identical images.
    pub psnr_db: f64,
    /// Structural similarity on luma, in [-1, 1].
    pub ssim: f64,
    /// Compressed bits per source pixel.
    pub bpp: f64,
}

fn check_dims(a: &ImageRgb8, b: &ImageRgb8) -> Result<(), MetricsError> {
    if a.width() != b.width() || a.height() != b.height() {
        return Err(MetricsError::DimensionMismatch(a.width(), a.height(), b.width(), b.height()));
    }
    Ok(())
}

/// PSNR in dB from the mean squared error over every channel of every
/// pixel. Identical images return `f64::INFINITY`, never a large finite
/// number.
pub fn psnr(reference: &ImageRgb8, distorted: &ImageRgb8) -> Result<f64, MetricsError> {
    check_dims(reference, distorted)?;
    let sum_sq: u64 = reference
        .as_rgb_bytes()
        .iter()
        .zip(distorted.as_rgb_bytes())
        .map(|(&a, &b)| {
            let d = i64::from(a) - i64::from(b);
            (d * d) as u64
        })
        .sum();
    if sum_sq == 0 {
        return Ok(f64::INFINITY);
    }
    let samples = reference.as_rgb_bytes().len() as f64;
    let mse = sum_sq as f64 / samples;
    Ok(10.0 * (DYNAMIC_RANGE * DYNAMIC_RANGE / mse).log10())
}

/// SSIM with the scalar type chosen by the caller; [`ssim`] is the `Scalar`
/// instantiation.
///
/// Computed on BT.601 luma (0.299 R + 0.587 G + 0.114 B) with a normalized
/// 11x11 Gaussian window (sigma 1.5), K1 = 0.01, K2 = 0.03, L = 255,
/// averaged over every fully interior window position.
pub fn ssim_with<R: Real>(
    reference: &ImageRgb8,
    distorted: &ImageRgb8,
) -> Result<R, MetricsError> {
    check_dims(reference, distorted)?;
    let (w, h) = (reference.width(), reference.height());
    if w < SSIM_WINDOW || h < SSIM_WINDOW {
        return Err(MetricsError::SmallerThanWindow { width: w, height: h, window: SSIM_WINDOW });
    }
    let from = |v: f64| R::from_f64(v).expect("constant fits any float");

    let x = luma_plane::<R>(reference);
    let y = luma_plane::<R>(distorted);
    let mul = |a: &[R], b: &[R]| -> Vec<R> {
        a.iter().zip(b).map(|(&p, &q)| p * q).collect()
    };
    let kernel = gaussian_kernel::<R>();
    let win = |plane: &[R]| convolve_valid(plane, w as usize, h as usize, &kernel);

    let mu_x = win(&x);
    let mu_y = win(&y);
    let sxx = win(&mul(&x, &x));
    let syy = win(&mul(&y, &y));
    let sxy = win(&mul(&x, &y));

    let c1 = from((SSIM_K1 * DYNAMIC_RANGE) * (SSIM_K1 * DYNAMIC_RANGE));
    let c2 = from((SSIM_K2 * DYNAMIC_RANGE) * (SSIM_K2 * DYNAMIC_RANGE));
    let two = from(2.0);
    let mut sum = R::zero();
    for i in 0..mu_x.len() {
        let (mx, my) = (mu_x[i], mu_y[i]);
        let var_x = sxx[i] - mx * mx;
        let var_y = syy[i] - my * my;
        let cov = sxy[i] - mx * my;
        let num = (two * mx * my + c1) * (two * cov + c2);
        let den = (mx * mx + my * my + c1) * (var_x + var_y + c2);
        sum = sum + num / den;
    }
    Ok(sum / R::from_usize(mu_x.len()).expect("window count fits any float"))
}

/// SSIM at the canonical scalar type.
pub fn ssim(reference: &ImageRgb8, distorted: &ImageRgb8) -> Result<f64, MetricsError> {
    ssim_with::<Scalar>(reference, distorted)
}

/// Compressed bits per pixel: 8 * payload_bytes / (width * height). The
/// payload excludes any container header.
pub fn bpp(payload_bytes: usize, width: u32, height: u32) -> Result<f64, MetricsError> {
    if width == 0 || height == 0 {
        return Err(MetricsError::EmptyImage);
    }
    Ok(payload_bytes as f64 * 8.0 / (width as f64 * height as f64))
}

fn luma_plane<R: Real>(img: &ImageRgb8) -> Vec<R> {
    let from = |v: f64| R::from_f64(v).expect("constant fits any float");
    let (kr, kg, kb) = (from(0.299), from(0.587), from(0.114));
    img.pixels()
        .iter()
        .map(|p| {
            let r = R::from_u8(p[0]).expect("u8 fits any float");
            let g = R::from_u8(p[1]).expect("u8 fits any float");
            let b = R::from_u8(p[2]).expect("u8 fits any float");
            kr * r + kg * g + kb * b
        })
        .collect()
}

fn gaussian_kernel<R: Real>() -> [R; SSIM_WINDOW as usize] {
    let mut taps = [0.0f64; SSIM_WINDOW as usize];
    let half = (SSIM_WINDOW / 2) as i32;
    let mut total = 0.0;
    for (i, tap) in taps.iter_mut().enumerate() {
        let d = (i as i32 - half) as f64;
        *tap = (-d * d / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp();
        total += *tap;
    }
    taps.map(|t| R::from_f64(t / total).expect("tap fits any float"))
}

/// Separable valid-region convolution: output is
/// (w - window + 1) x (h - window + 1).
fn convolve_valid<R: Real>(plane: &[R], w: usize, h: usize, kernel: &[R]) -> Vec<R> {
    let k = kernel.len();
    let ow = w - k + 1;
    let oh = h - k + 1;
    let mut rows = vec![R::zero(); ow * h];
    for y in 0..h {
        let src = &plane[y * w..][..w];
        let dst = &mut rows[y * ow..][..ow];
        for (x, out) in dst.iter_mut().enumerate() {
            let mut acc = R::zero();
            for (t, &tap) in kernel.iter().enumerate() {
                acc = acc + tap * src[x + t];
            }
            *out = acc;
        }
    }
    let mut out = vec![R::zero(); ow * oh];
    for y in 0..oh {
        for x in 0..ow {
            let mut acc = R::zero();
            for (t, &tap) in kernel.iter().enumerate() {
                acc = acc + tap * rows[(y + t) * ow + x];
            }
            out[y * ow + x] = acc;
        }
    }
    out
}
