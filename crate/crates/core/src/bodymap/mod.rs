//! The drawable area of a body map, its twelve-region partition, and
//! rejection sampling of points inside either.

mod domain;
mod partition;

pub use domain::{SampleDomain, DEFAULT_MAX_TRIES};
pub use partition::{RegionId, RegionPartition, REGION_COUNT, REGION_MAP_LEVELS};

use std::path::Path;

use crate::error::{Error, Result};
use crate::raster::{read_png, Canvas};

/// Default canvas size and inset of the built-in rectangular mask.
pub const DEFAULT_WIDTH: u32 = 1000;
pub const DEFAULT_HEIGHT: u32 = 800;
pub const DEFAULT_MARGIN: u32 = 40;

/// Pixels with luminance strictly above this value are inside the mask.
pub const LUMA_THRESHOLD: u8 = 127;

/// Half-open pixel rectangle `[x0, x1) × [y0, y1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PixelRect {
    pub x0: u32,
    pub y0: u32,
    pub x1: u32,
    pub y1: u32,
}

impl PixelRect {
    pub fn width(&self) -> u32 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> u32 {
        self.y1 - self.y0
    }

    fn include(this: &mut Option<PixelRect>, x: u32, y: u32) {
        match this {
            None => {
                *this = Some(PixelRect {
                    x0: x,
                    y0: y,
                    x1: x + 1,
                    y1: y + 1,
                })
            }
            Some(r) => {
                r.x0 = r.x0.min(x);
                r.y0 = r.y0.min(y);
                r.x1 = r.x1.max(x + 1);
                r.y1 = r.y1.max(y + 1);
            }
        }
    }
}

/// Binary raster of the drawable area. Always has at least one inside pixel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BodyMask {
    width: u32,
    height: u32,
    inside: Vec<bool>,
    bounds: PixelRect,
}

impl BodyMask {
    /// Build a mask from a row-major inside/outside raster.
    pub fn from_raster(width: u32, height: u32, inside: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::config(format!(
                "mask dimensions {width}x{height} are empty"
            )));
        }
        if inside.len() != width as usize * height as usize {
            return Err(Error::config(format!(
                "mask raster has {} pixels, expected {width}x{height}",
                inside.len()
            )));
        }
        let mut bounds = None;
        for (i, _) in inside.iter().enumerate().filter(|(_, &v)| v) {
            PixelRect::include(&mut bounds, i as u32 % width, i as u32 / width);
        }
        let bounds = bounds.ok_or_else(|| Error::config("mask has no inside pixels"))?;
        Ok(BodyMask {
            width,
            height,
            inside,
            bounds,
        })
    }

    /// Axis-aligned rectangle inset by `margin` on every side.
    pub fn default_mask(width: u32, height: u32, margin: u32) -> Result<Self> {
        if u64::from(width) <= 2 * u64::from(margin) || u64::from(height) <= 2 * u64::from(margin) {
            return Err(Error::config(format!(
                "margin {margin} leaves no interior in a {width}x{height} canvas"
            )));
        }
        let inside = (0..height)
            .flat_map(|y| {
                (0..width).map(move |x| {
                    x >= margin && x < width - margin && y >= margin && y < height - margin
                })
            })
            .collect();
        Self::from_raster(width, height, inside)
    }

    /// Threshold a canvas: a pixel is inside iff its luminance exceeds 127.
    /// Alpha is ignored.
    pub fn from_canvas(canvas: &Canvas) -> Result<Self> {
        let inside = canvas
            .pixels()
            .map(|px| luminance(px) > LUMA_THRESHOLD)
            .collect();
        Self::from_raster(canvas.width(), canvas.height(), inside)
    }

    /// Load a grayscale or color PNG and threshold it.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let canvas = read_png(path.as_ref())?;
        Self::from_canvas(&canvas)
            .map_err(|e| Error::config(format!("mask {}: {e}", path.as_ref().display())))
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    /// Bounding box of the inside pixels.
    pub fn bounds(&self) -> PixelRect {
        self.bounds
    }

    pub fn is_inside(&self, x: u32, y: u32) -> bool {
        x < self.width && y < self.height && self.inside[(y * self.width + x) as usize]
    }

    pub fn inside_count(&self) -> usize {
        self.inside.iter().filter(|&&v| v).count()
    }

    /// Pixel containing `(x, y)` after flooring, if it lies on the raster.
    pub fn pixel_of(&self, x: f64, y: f64) -> Option<(u32, u32)> {
        let (fx, fy) = (x.floor(), y.floor());
        if fx >= 0.0 && fy >= 0.0 && fx < f64::from(self.width) && fy < f64::from(self.height) {
            Some((fx as u32, fy as u32))
        } else {
            None
        }
    }
}

/// Rec. 601 luma in integer arithmetic; exact for gray pixels.
pub(crate) fn luminance(px: [u8; 4]) -> u8 {
    let [r, g, b, _] = px.map(u32::from);
    ((299 * r + 587 * g + 114 * b + 500) / 1000) as u8
}
