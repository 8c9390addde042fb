use std::path::Path;

use super::{luminance, BodyMask, PixelRect};
use crate::error::{Error, Result};
use crate::raster::{read_png, Canvas};

/// Number of regions in a body-map partition.
pub const REGION_COUNT: usize = 12;

/// Gray levels encoding region ids in a region-map image: region `k` is
/// drawn with level `10 + 20 * k`.
pub const REGION_MAP_LEVELS: [u8; REGION_COUNT] =
    [10, 30, 50, 70, 90, 110, 130, 150, 170, 190, 210, 230];

const OUTSIDE: u8 = u8::MAX;

/// Region index in `0..12`.
pub type RegionId = u8;

/// Assignment of every inside mask pixel to one of twelve regions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionPartition {
    width: u32,
    height: u32,
    ids: Vec<u8>,
    bounds: [Option<PixelRect>; REGION_COUNT],
    counts: [usize; REGION_COUNT],
}

impl RegionPartition {
    /// Split the mask's bounding box into a `rows × cols` grid of equal cells,
    /// with remainder pixels going to the last row and column. Region ids are
    /// row-major cell indices.
    pub fn grid(mask: &BodyMask, rows: u32, cols: u32) -> Result<Self> {
        if rows.checked_mul(cols) != Some(REGION_COUNT as u32) {
            return Err(Error::config(format!(
                "a {rows}x{cols} grid does not have {REGION_COUNT} cells"
            )));
        }
        let b = mask.bounds();
        let cell_w = b.width() / cols;
        let cell_h = b.height() / rows;
        if cell_w == 0 || cell_h == 0 {
            return Err(Error::config(format!(
                "mask bounds {}x{} are too small for a {rows}x{cols} grid",
                b.width(),
                b.height()
            )));
        }
        Self::from_fn(mask, |x, y| {
            let col = ((x - b.x0) / cell_w).min(cols - 1);
            let row = ((y - b.y0) / cell_h).min(rows - 1);
            Ok((row * cols + col) as u8)
        })
    }

    /// Read region ids from a region-map canvas. Every inside pixel must carry
    /// one of [`REGION_MAP_LEVELS`]; outside pixels are ignored.
    pub fn from_region_map(mask: &BodyMask, map: &Canvas) -> Result<Self> {
        if map.width() != mask.width() || map.height() != mask.height() {
            return Err(Error::config(format!(
                "region map is {}x{}, mask is {}x{}",
                map.width(),
                map.height(),
                mask.width(),
                mask.height()
            )));
        }
        Self::from_fn(mask, |x, y| {
            let level = luminance(map.get(x, y));
            REGION_MAP_LEVELS
                .iter()
                .position(|&l| l == level)
                .map(|k| k as u8)
                .ok_or_else(|| {
                    Error::config(format!(
                        "region map pixel ({x}, {y}) has gray level {level}, not a region level"
                    ))
                })
        })
    }

    pub fn load_region_map(mask: &BodyMask, path: impl AsRef<Path>) -> Result<Self> {
        let map = read_png(path.as_ref())?;
        Self::from_region_map(mask, &map)
    }

    fn from_fn(mask: &BodyMask, mut region_of: impl FnMut(u32, u32) -> Result<u8>) -> Result<Self> {
        let (width, height) = (mask.width(), mask.height());
        let mut ids = vec![OUTSIDE; width as usize * height as usize];
        let mut bounds = [None; REGION_COUNT];
        let mut counts = [0; REGION_COUNT];
        for y in 0..height {
            for x in 0..width {
                if !mask.is_inside(x, y) {
                    continue;
                }
                let id = region_of(x, y)?;
                ids[(y * width + x) as usize] = id;
                PixelRect::include(&mut bounds[id as usize], x, y);
                counts[id as usize] += 1;
            }
        }
        Ok(RegionPartition {
            width,
            height,
            ids,
            bounds,
            counts,
        })
    }

    /// Region of pixel `(x, y)`, or `None` outside the mask or raster.
    pub fn region_at(&self, x: u32, y: u32) -> Option<RegionId> {
        if x >= self.width || y >= self.height {
            return None;
        }
        match self.ids[(y * self.width + x) as usize] {
            OUTSIDE => None,
            id => Some(id),
        }
    }

    /// Bounding box of a region, `None` if it has no pixels.
    pub fn region_bounds(&self, region: RegionId) -> Option<PixelRect> {
        self.bounds.get(region as usize).copied().flatten()
    }

    pub fn pixel_count(&self, region: RegionId) -> usize {
        self.counts.get(region as usize).copied().unwrap_or(0)
    }

    /// Render the partition as a region map (see [`REGION_MAP_LEVELS`]),
    /// outside pixels black.
    pub fn to_region_map(&self) -> Canvas {
        let mut c = Canvas::filled(self.width, self.height, [0, 0, 0, 255]);
        for y in 0..self.height {
            for x in 0..self.width {
                if let Some(id) = self.region_at(x, y) {
                    let l = REGION_MAP_LEVELS[id as usize];
                    c.set(x, y, [l, l, l, 255]);
                }
            }
        }
        c
    }
}
