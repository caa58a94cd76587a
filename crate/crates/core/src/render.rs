//! Domain colouring: hue follows `arg f`, lightness follows `ln |f|`.

use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::jet::{is_finite, Complex};

pub const MIN_PIXELS: usize = 16;

/// Axis-aligned viewport `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Window {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Window { x0, y0, x1, y1 }
    }

    /// `x0,y0,x1,y1`
    pub fn parse(text: &str) -> Result<Self> {
        let v = crate::contour::parse_reals(&text.split(',').collect::<Vec<_>>(), "window")?;
        if v.len() != 4 {
            return Err(Error::InvalidSpec(format!(
                "window needs x0,y0,x1,y1, got `{text}`"
            )));
        }
        Ok(Window::new(v[0], v[1], v[2], v[3]))
    }

    pub fn validate(&self) -> Result<()> {
        let ok = [self.x0, self.y0, self.x1, self.y1]
            .iter()
            .all(|v| v.is_finite())
            && self.x1 > self.x0
            && self.y1 > self.y0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidSpec(format!("degenerate window {self:?}")))
        }
    }

    /// Point under pixel `(px, py)`; row 0 is the top edge.
    pub fn point(&self, px: usize, py: usize, width: usize, height: usize) -> Complex {
        Complex::new(
            self.x0 + (self.x1 - self.x0) * px as f64 / (width - 1) as f64,
            self.y1 - (self.y1 - self.y0) * py as f64 / (height - 1) as f64,
        )
    }
}

/// RGB image, row-major from the top.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<[u8; 3]>,
}

impl Image {
    pub fn pixel(&self, px: usize, py: usize) -> [u8; 3] {
        self.pixels[py * self.width + px]
    }

    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend(self.pixels.iter().flatten());
        out
    }

    pub fn write_ppm(&self, path: &Path) -> Result<()> {
        let mut file = std::fs::File::create(path)?;
        file.write_all(&self.to_ppm())?;
        Ok(())
    }
}

fn hsl_to_rgb(h: f64, s: f64, l: f64) -> [u8; 3] {
    let q = if l < 0.5 {
        l * (1.0 + s)
    } else {
        l + s - l * s
    };
    let p = 2.0 * l - q;
    let channel = |t: f64| {
        let t = t.rem_euclid(1.0);
        let v = if t < 1.0 / 6.0 {
            p + (q - p) * 6.0 * t
        } else if t < 0.5 {
            q
        } else if t < 2.0 / 3.0 {
            p + (q - p) * (2.0 / 3.0 - t) * 6.0
        } else {
            p
        };
        (v * 255.0).round().clamp(0.0, 255.0) as u8
    };
    [channel(h + 1.0 / 3.0), channel(h), channel(h - 1.0 / 3.0)]
}

/// Colour of a single value; `None` for values that cannot be shown.
pub fn color(value: Complex) -> Option<[u8; 3]> {
    if !is_finite(value) {
        return None;
    }
    let hue = value.arg().rem_euclid(2.0 * PI) / (2.0 * PI);
    let lightness = 0.5 + 0.4 * (0.5 * value.norm().ln()).tanh();
    Some(hsl_to_rgb(hue, 1.0, lightness))
}

pub fn render(f: &Expr, window: Window, width: usize, height: usize) -> Result<Image> {
    window.validate()?;
    if width < MIN_PIXELS || height < MIN_PIXELS {
        return Err(Error::InvalidSpec(format!(
            "image must be at least {MIN_PIXELS}x{MIN_PIXELS}, got {width}x{height}"
        )));
    }
    let pixels = (0..width * height)
        .into_par_iter()
        .map(|i| {
            let z = window.point(i % width, i / width, width, height);
            f.eval(z).ok().and_then(color).unwrap_or([0, 0, 0])
        })
        .collect();
    Ok(Image {
        width,
        height,
        pixels,
    })
}

pub fn render_domain_coloring(
    f: &Expr,
    window: Window,
    width: usize,
    height: usize,
    out: &Path,
) -> Result<Image> {
    let image = render(f, window, width, height)?;
    image.write_ppm(out)?;
    Ok(image)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn lightness(p: [u8; 3]) -> f64 {
        let max = *p.iter().max().unwrap() as f64;
        let min = *p.iter().min().unwrap() as f64;
        (max + min) / 2.0 / 255.0
    }

    #[test]
    fn primary_hues() {
        assert_eq!(color(Complex::new(1.0, 0.0)), Some([255, 0, 0]));
        assert_eq!(hsl_to_rgb(1.0 / 3.0, 1.0, 0.5), [0, 255, 0]);
        assert_eq!(hsl_to_rgb(2.0 / 3.0, 1.0, 0.5), [0, 0, 255]);
        assert_eq!(color(Complex::new(f64::NAN, 0.0)), None);
    }

    #[test]
    fn identity_gives_hue_wheel() {
        let img = render(
            &parse("z").unwrap(),
            Window::new(-1.0, -1.0, 1.0, 1.0),
            17,
            17,
        )
        .unwrap();
        // the origin sits on pixel (8, 8) and gets the darkest lightness
        assert!((lightness(img.pixel(8, 8)) - 0.1).abs() < 1.0 / 255.0);
        let right = img.pixel(16, 8);
        assert_eq!(right, color(Complex::new(1.0, 0.0)).unwrap());
        let up = img.pixel(8, 0);
        assert_eq!(up, color(Complex::new(0.0, 1.0)).unwrap());
        let left = img.pixel(0, 8);
        assert_eq!(left, color(Complex::new(-1.0, 0.0)).unwrap());
        assert_ne!(right, up);
        assert_ne!(up, left);
    }

    #[test]
    fn lightness_is_constant_down_columns() {
        let f = parse("exp(-conj(z))").unwrap();
        let img = render(&f, Window::new(-2.0, -2.0, 2.0, 2.0), 32, 24).unwrap();
        for px in 0..img.width {
            let top = lightness(img.pixel(px, 0));
            for py in 1..img.height {
                assert!((lightness(img.pixel(px, py)) - top).abs() <= 1.0 / 255.0 + 1e-12);
            }
        }
        assert!(lightness(img.pixel(0, 0)) > lightness(img.pixel(31, 0)));
    }

    #[test]
    fn poles_render_black() {
        let f = parse("1/sin(z)").unwrap();
        let img = render(&f, Window::new(-PI, -1.0, PI, 1.0), 17, 17).unwrap();
        for px in [0, 8, 16] {
            assert_eq!(img.pixel(px, 8), [0, 0, 0], "pixel {px}");
        }
        for (px, py) in [(1, 8), (7, 8), (9, 8), (15, 8), (8, 7), (0, 7)] {
            assert_ne!(img.pixel(px, py), [0, 0, 0], "pixel {px},{py}");
        }
    }

    #[test]
    fn ppm_layout_and_validation() {
        let img = render(
            &parse("z").unwrap(),
            Window::new(0.0, 0.0, 1.0, 1.0),
            16,
            20,
        )
        .unwrap();
        let bytes = img.to_ppm();
        let header = b"P6\n16 20\n255\n";
        assert!(bytes.starts_with(header));
        assert_eq!(bytes.len(), header.len() + 16 * 20 * 3);
        let f = parse("z").unwrap();
        assert!(render(&f, Window::new(0.0, 0.0, 1.0, 1.0), 8, 20).is_err());
        assert!(render(&f, Window::new(1.0, 0.0, 1.0, 1.0), 16, 16).is_err());
    }
}
