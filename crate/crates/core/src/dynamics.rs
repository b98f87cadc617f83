//! Julia sets of rational maps by backward iteration.
//!
//! This is the only floating-point part of the crate.

use std::io::{self, Write};

pub use num_complex::Complex64 as Complex;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Largest residual `|f(w) - z|` accepted for a sampled preimage.
pub const PREIMAGE_TOLERANCE: f64 = 1e-9;

/// `N(z) / D(z)`, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalMap {
    num: Vec<Complex64>,
    den: Vec<Complex64>,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn trim(mut p: Vec<Complex64>) -> Vec<Complex64> {
    while p.len() > 1 && p.last().is_some_and(|x| *x == Complex64::default()) {
        p.pop();
    }
    p
}

fn horner(p: &[Complex64], z: Complex64) -> Complex64 {
    p.iter()
        .rev()
        .fold(Complex64::default(), |acc, a| acc * z + a)
}

impl RationalMap {
    pub fn new(num: Vec<Complex64>, den: Vec<Complex64>) -> Result<Self> {
        let num = trim(num);
        let den = trim(den);
        if den.iter().all(|x| *x == Complex64::default()) {
            return Err(Error::InvalidArgument(
                "denominator is identically zero".into(),
            ));
        }
        Ok(RationalMap { num, den })
    }

    pub fn polynomial(coeffs: Vec<Complex64>) -> Result<Self> {
        RationalMap::new(coeffs, vec![c(1.0, 0.0)])
    }

    pub fn degree(&self) -> usize {
        (self.num.len().max(self.den.len())).saturating_sub(1)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        horner(&self.num, z) / horner(&self.den, z)
    }

    /// Roots of `N(w) - z D(w)`. Fewer than `degree` roots are returned when
    /// some preimage is at infinity.
    pub fn preimages(&self, z: Complex64) -> Vec<Complex64> {
        let n = self.degree() + 1;
        let p: Vec<Complex64> = (0..n)
            .map(|k| {
                let a = self.num.get(k).copied().unwrap_or_default();
                let b = self.den.get(k).copied().unwrap_or_default();
                a - z * b
            })
            .collect();
        let scale = p.iter().map(|x| x.norm()).fold(0.0, f64::max);
        let mut p = p;
        while p.len() > 1 && p.last().is_some_and(|x| x.norm() <= 1e-14 * scale) {
            p.pop();
        }
        if p.len() < 2 {
            return Vec::new();
        }
        let mut roots = durand_kerner(&p);
        for r in roots.iter_mut() {
            newton_polish(&p, r);
        }
        roots
    }

    /// `f(z) = z^2`.
    pub fn square() -> Self {
        RationalMap::polynomial(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).expect("valid")
    }

    /// `f_q` for `q` in 2..=5: approximate coefficients of the rational map
    /// attached to the group, `c / (z + a_2 z^2 + ... + a_q z^q)`.
    pub fn preset(name: &str) -> Option<Self> {
        let (numer, den): (Complex64, Vec<Complex64>) = match name {
            "z2" => return Some(RationalMap::square()),
            "f2" => (c(1.0, 0.0), vec![c(-0.5, 0.0)]),
            "f3" => (
                c(0.128775, 0.0942072),
                vec![c(-1.74702, 0.285702), c(0.831347, -0.190468)],
            ),
            "f4" => (
                c(0.0232438, 0.0757918),
                vec![
                    c(-2.67804, 1.10938),
                    c(2.37852, -1.93187),
                    c(-0.694865, 0.89421),
                ],
            ),
            "f5" => (
                c(-0.00877156, 0.0526634),
                vec![
                    c(-3.22614, 2.0417),
                    c(3.13076, -5.12089),
                    c(-0.677772, 4.35662),
                    c(-0.245783, -1.22944),
                ],
            ),
            _ => return None,
        };
        let mut d = vec![c(0.0, 0.0), c(1.0, 0.0)];
        d.extend(den);
        Some(RationalMap::new(vec![numer], d).expect("valid preset"))
    }
}

fn durand_kerner(p: &[Complex64]) -> Vec<Complex64> {
    let n = p.len() - 1;
    let lead = p[n];
    let monic: Vec<Complex64> = p.iter().map(|a| a / lead).collect();
    // Cauchy bound on the root moduli
    let radius = 1.0 + monic[..n].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let seed = c(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n)
        .map(|k| seed.powu(k as u32) * radius.min(2.0))
        .collect();
    for _ in 0..1000 {
        let mut delta: f64 = 0.0;
        for i in 0..n {
            let zi = roots[i];
            let mut denom = c(1.0, 0.0);
            for (j, zj) in roots.iter().enumerate() {
                if j != i {
                    denom *= zi - zj;
                }
            }
            if denom.norm() == 0.0 {
                denom = c(1e-12, 0.0);
            }
            let step = horner(&monic, zi) / denom;
            roots[i] = zi - step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * radius {
            break;
        }
    }
    roots
}

fn newton_polish(p: &[Complex64], r: &mut Complex64) {
    let dp: Vec<Complex64> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, a)| a * k as f64)
        .collect();
    for _ in 0..8 {
        let d = horner(&dp, *r);
        if d.norm() == 0.0 {
            return;
        }
        let step = horner(p, *r) / d;
        if !step.is_finite() {
            return;
        }
        *r -= step;
        if step.norm() < 1e-17 * (1.0 + r.norm()) {
            return;
        }
    }
}

/// Viewport, raster size and sampling parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderConfig {
    pub center: Complex64,
    /// Width of the viewport in the complex plane; the height follows the
    /// pixel aspect ratio.
    pub width: f64,
    pub pixels_x: usize,
    pub pixels_y: usize,
    pub points: usize,
    pub burn_in: usize,
    pub seed: u64,
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig {
            center: c(1.0, 0.0),
            width: 4.0,
            pixels_x: 400,
            pixels_y: 400,
            points: 100_000,
            burn_in: 200,
            seed: 1,
        }
    }
}

impl RenderConfig {
    // negated so that a NaN width is rejected too
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<()> {
        if self.pixels_x == 0 || self.pixels_y == 0 || !(self.width > 0.0) {
            return Err(Error::InvalidArgument(
                "viewport and raster must be nonempty".into(),
            ));
        }
        Ok(())
    }
}

/// A sampled point cloud and its diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct JuliaSample {
    pub points: Vec<Complex64>,
    /// Steps where no preimage met the tolerance.
    pub skipped: usize,
    /// Largest `|f(w) - z|` over accepted steps.
    pub max_residual: f64,
}

/// Backward iteration from a fixed start: at each step a uniformly random
/// accepted preimage is taken. A single chain is run, so the output is a
/// function of the seed alone.
pub fn julia_points(f: &RationalMap, cfg: &RenderConfig) -> Result<JuliaSample> {
    if f.degree() < 2 {
        return Err(Error::InvalidArgument("degree must be at least 2".into()));
    }
    let mut sample = JuliaSample {
        points: Vec::with_capacity(cfg.points),
        skipped: 0,
        max_residual: 0.0,
    };
    if cfg.points == 0 {
        return Ok(sample);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut z = c(0.3141, 0.2718);
    let mut step = 0usize;
    let max_skips = cfg.points.max(1000);
    while sample.points.len() < cfg.points {
        let good: Vec<(Complex64, f64)> = f
            .preimages(z)
            .into_iter()
            .map(|w| (w, (f.eval(w) - z).norm()))
            .filter(|(w, r)| w.is_finite() && *r < PREIMAGE_TOLERANCE)
            .collect();
        if good.is_empty() {
            sample.skipped += 1;
            if sample.skipped > max_skips {
                return Err(Error::InvalidArgument(format!(
                    "root finding failed {} times (last point {z}, {} points kept)",
                    sample.skipped,
                    sample.points.len()
                )));
            }
            z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            step = 0;
            continue;
        }
        let (w, r) = good[rng.gen_range(0..good.len())];
        z = w;
        step += 1;
        if step > cfg.burn_in {
            sample.max_residual = sample.max_residual.max(r);
            sample.points.push(w);
        }
    }
    Ok(sample)
}

/// 8-bit grayscale raster, row-major from the top; 255 is white.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl Image {
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    pub fn dark_pixels(&self) -> usize {
        self.pixels.iter().filter(|&&p| p < 255).count()
    }
}

/// Pixel containing `z`, if inside the viewport.
pub fn pixel_of(z: Complex64, cfg: &RenderConfig) -> Option<(usize, usize)> {
    let height = cfg.width * cfg.pixels_y as f64 / cfg.pixels_x as f64;
    let u = (z.re - cfg.center.re) / cfg.width + 0.5;
    let v = 0.5 - (z.im - cfg.center.im) / height;
    if !(0.0..1.0).contains(&u) || !(0.0..1.0).contains(&v) {
        return None;
    }
    Some((
        (u * cfg.pixels_x as f64) as usize,
        (v * cfg.pixels_y as f64) as usize,
    ))
}

/// Marks every pixel hit by a point in black.
pub fn render(points: &[Complex64], cfg: &RenderConfig) -> Result<Image> {
    cfg.validate()?;
    let mut img = Image {
        width: cfg.pixels_x,
        height: cfg.pixels_y,
        pixels: vec![255; cfg.pixels_x * cfg.pixels_y],
    };
    for &z in points {
        if let Some((x, y)) = pixel_of(z, cfg) {
            img.pixels[y * cfg.pixels_x + x] = 0;
        }
    }
    Ok(img)
}

/// Binary portable graymap (P5).
pub fn write_pgm<W: Write>(img: &Image, mut out: W) -> io::Result<()> {
    write!(out, "P5\n{} {}\n255\n", img.width, img.height)?;
    out.write_all(&img.pixels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(points: usize) -> RenderConfig {
        RenderConfig {
            center: c(0.0, 0.0),
            width: 3.0,
            pixels_x: 60,
            pixels_y: 60,
            points,
            burn_in: 100,
            seed: 7,
        }
    }

    #[test]
    fn square_gives_unit_circle() {
        let s = julia_points(&RationalMap::square(), &cfg(5000)).unwrap();
        assert_eq!(s.points.len(), 5000);
        let dev = s
            .points
            .iter()
            .map(|z| (z.norm() - 1.0).abs())
            .fold(0.0, f64::max);
        assert!(dev < 1e-6, "{dev}");
        assert!(s.max_residual < PREIMAGE_TOLERANCE);
    }

    #[test]
    fn empty_budget() {
        let s = julia_points(&RationalMap::square(), &cfg(0)).unwrap();
        assert!(s.points.is_empty());
        let img = render(&s.points, &cfg(0)).unwrap();
        assert_eq!(img.dark_pixels(), 0);
    }

    #[test]
    fn presets_have_expected_degree() {
        for (name, d) in [("f2", 2), ("f3", 3), ("f4", 4), ("f5", 5)] {
            let f = RationalMap::preset(name).unwrap();
            assert_eq!(f.degree(), d);
            for w in f.preimages(c(0.7, -0.2)) {
                assert!((f.eval(w) - c(0.7, -0.2)).norm() < 1e-9);
            }
        }
        let f2 = RationalMap::preset("f2").unwrap();
        assert!((f2.eval(c(1.0, 0.0)) - c(2.0, 0.0)).norm() < 1e-15);
        assert!(RationalMap::preset("f6").is_none());
    }

    #[test]
    fn deterministic_pgm() {
        let f = RationalMap::preset("f2").unwrap();
        let a = julia_points(&f, &cfg(3000)).unwrap();
        let b = julia_points(&f, &cfg(3000)).unwrap();
        assert_eq!(a, b);
        let img = render(&a.points, &cfg(3000)).unwrap();
        let mut buf = Vec::new();
        write_pgm(&img, &mut buf).unwrap();
        assert!(buf.starts_with(b"P5\n60 60\n255\n"));
        assert_eq!(buf.len(), "P5\n60 60\n255\n".len() + 3600);
    }

    #[test]
    fn circle_renders_as_annulus() {
        let pts: Vec<Complex64> = (0..2000)
            .map(|k| Complex64::from_polar(1.0, k as f64 * std::f64::consts::TAU / 2000.0))
            .collect();
        let cfg = cfg(0);
        let img = render(&pts, &cfg).unwrap();
        for y in 0..img.height {
            for x in 0..img.width {
                if img.get(x, y) == 0 {
                    let re = (x as f64 + 0.5) / 60.0 * 3.0 - 1.5;
                    let im = 1.5 - (y as f64 + 0.5) / 60.0 * 3.0;
                    assert!((c(re, im).norm() - 1.0).abs() < 0.08);
                }
            }
        }
        assert!(img.dark_pixels() > 100);
    }
}
