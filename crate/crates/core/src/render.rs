//! Escape-time rendering of real 2-D slices of `C^2`: each pixel records the
//! first forward entry into `W_R`, and the image is written as binary PPM.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certify::require_some_admissible;
use crate::dynamics::{apply, in_region, MapSpec, Point, Region};
use crate::error::{Error, Result};
use crate::series::limit_pair;

/// Radius requested for `h1` at the entry point when shading.
const SHADE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Plane {
    /// `x = Re z`, `y = Re w` with the imaginary parts frozen.
    ReZReW { im_z: f64, im_w: f64 },
    /// `x + iy = z` with `w` frozen.
    ZPlane { w: Complex64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub min_x: f64,
    pub max_x: f64,
    pub min_y: f64,
    pub max_y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SliceSpec {
    pub plane: Plane,
    pub window: Window,
    pub width: usize,
    pub height: usize,
}

impl SliceSpec {
    pub fn validate(&self) -> Result<()> {
        let w = &self.window;
        if self.width == 0 || self.height == 0 {
            return Err(Error::InvalidParameter("slice width and height must be >= 1".into()));
        }
        if !(w.max_x > w.min_x && w.max_y > w.min_y) {
            return Err(Error::InvalidParameter("slice window must have max > min on both axes".into()));
        }
        Ok(())
    }

    /// The point at the centre of pixel `(col, row)`, row 0 at the top.
    pub fn pixel_point(&self, col: usize, row: usize) -> Point {
        let w = &self.window;
        let x = w.min_x + (col as f64 + 0.5) * (w.max_x - w.min_x) / self.width as f64;
        let y = w.max_y - (row as f64 + 0.5) * (w.max_y - w.min_y) / self.height as f64;
        match self.plane {
            Plane::ReZReW { im_z, im_w } => Point::new(Complex64::new(x, im_z), Complex64::new(y, im_w)),
            Plane::ZPlane { w } => Point::new(Complex64::new(x, y), w),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EscapeCell {
    pub entry_index: Option<usize>,
    /// `h1` at the entry point, only when the index is present and shading
    /// was requested.
    pub h1_at_entry: Option<Complex64>,
}

/// Cells in row-major order, top row first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EscapeImage {
    pub width: usize,
    pub height: usize,
    pub cells: Vec<EscapeCell>,
}

fn escape_cell(m: &MapSpec, p: &Point, region: &Region, n_max: usize, shade: bool) -> EscapeCell {
    let mut q = *p;
    for n in 0..=n_max {
        if in_region(&q, region) {
            let h1_at_entry =
                if shade { limit_pair(m, &q, region.r(), SHADE_TOL).ok().map(|pair| pair.h1.value) } else { None };
            return EscapeCell { entry_index: Some(n), h1_at_entry };
        }
        if n == n_max {
            break;
        }
        match apply(m, &q) {
            Ok(next) => q = next,
            Err(_) => break,
        }
    }
    EscapeCell { entry_index: None, h1_at_entry: None }
}

/// First entry index into `W_R` for every pixel, rows computed in parallel.
pub fn render_slice(m: &MapSpec, r: f64, spec: &SliceSpec, n_max: usize, shade: bool) -> Result<EscapeImage> {
    require_some_admissible(m, r)?;
    spec.validate()?;
    let region = Region::new(r)?;
    let cells = (0..spec.height)
        .into_par_iter()
        .flat_map_iter(|row| {
            let region = &region;
            (0..spec.width).map(move |col| escape_cell(m, &spec.pixel_point(col, row), region, n_max, shade))
        })
        .collect();
    Ok(EscapeImage { width: spec.width, height: spec.height, cells })
}

/// HSV to 8-bit RGB for `h, s, v ∈ [0, 1]`.
fn hsv_to_rgb(h: f64, s: f64, v: f64) -> [u8; 3] {
    let h6 = (h.rem_euclid(1.0)) * 6.0;
    let sector = h6.floor();
    let frac = h6 - sector;
    let (p, q, t) = (v * (1.0 - s), v * (1.0 - s * frac), v * (1.0 - s * (1.0 - frac)));
    let (r, g, b) = match sector as u8 {
        0 => (v, t, p),
        1 => (q, v, p),
        2 => (p, v, t),
        3 => (p, q, v),
        4 => (t, p, v),
        _ => (v, p, q),
    };
    [r, g, b].map(|c| (c * 255.0).round().clamp(0.0, 255.0) as u8)
}

/// Black for unknown cells; otherwise hue stepped by the entry index, with
/// brightness following `arg h1` when it is available.
pub fn cell_colour(cell: &EscapeCell) -> [u8; 3] {
    let Some(n) = cell.entry_index else { return [0, 0, 0] };
    let hue = (n as f64 * 0.618_033_988_749_894_9).fract();
    let value = match cell.h1_at_entry {
        Some(h) => 0.55 + 0.45 * (h.arg() + PI) / (2.0 * PI),
        None => 1.0,
    };
    hsv_to_rgb(hue, 0.85, value)
}

impl EscapeImage {
    pub fn rgb(&self) -> Vec<u8> {
        self.cells.iter().flat_map(cell_colour).collect()
    }

    pub fn cell(&self, col: usize, row: usize) -> &EscapeCell {
        &self.cells[row * self.width + col]
    }

    pub fn to_ppm(&self) -> Vec<u8> {
        encode_ppm(self.width, self.height, &self.rgb())
    }

    pub fn write_ppm<W: Write>(&self, mut sink: W) -> Result<()> {
        sink.write_all(&self.to_ppm())?;
        Ok(())
    }
}

/// Binary PPM: `P6\n<width> <height>\n255\n` followed by row-major RGB.
pub fn encode_ppm(width: usize, height: usize, rgb: &[u8]) -> Vec<u8> {
    assert_eq!(rgb.len(), 3 * width * height, "pixel buffer does not match dimensions");
    let mut out = format!("P6\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(rgb);
    out
}

/// Decoded P6 image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ppm {
    pub width: usize,
    pub height: usize,
    pub max_value: u16,
    pub data: Vec<u8>,
}

/// Parses any 8-bit binary PPM, including `#` comments in the header.
pub fn parse_ppm(bytes: &[u8]) -> Result<Ppm> {
    let bad = |msg: &str| Error::Parse(format!("PPM: {msg}"));
    let mut pos = 0;
    let mut fields = Vec::with_capacity(4);
    while fields.len() < 4 {
        while pos < bytes.len() && (bytes[pos].is_ascii_whitespace() || bytes[pos] == b'#') {
            if bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            } else {
                pos += 1;
            }
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(bad("truncated header"));
        }
        fields.push(std::str::from_utf8(&bytes[start..pos]).map_err(|_| bad("non-ASCII header"))?);
    }
    if fields[0] != "P6" {
        return Err(bad("magic number is not P6"));
    }
    let parse = |s: &str| s.parse::<usize>().map_err(|_| bad("bad header number"));
    let (width, height, max_value) = (parse(fields[1])?, parse(fields[2])?, parse(fields[3])?);
    if max_value == 0 || max_value > 255 {
        return Err(bad("only 8-bit samples are supported"));
    }
    // Exactly one whitespace byte separates the header from the raster.
    pos += 1;
    let expected = 3 * width * height;
    if bytes.len() < pos || bytes.len() - pos != expected {
        return Err(bad("raster size does not match header"));
    }
    Ok(Ppm { width, height, max_value: max_value as u16, data: bytes[pos..].to_vec() })
}
