use super::{BodyMask, PixelRect, RegionId, RegionPartition};
use crate::error::{Error, Result};
use crate::geometry::{Point, RandomStream};

/// Default rejection budget for [`SampleDomain::sample_point`].
pub const DEFAULT_MAX_TRIES: usize = 1000;

/// Where points may be drawn: the whole mask, or one region of it.
#[derive(Clone, Copy, Debug)]
pub struct SampleDomain<'a> {
    mask: &'a BodyMask,
    region: Option<(&'a RegionPartition, RegionId)>,
    bounds: PixelRect,
}

impl<'a> SampleDomain<'a> {
    pub fn whole(mask: &'a BodyMask) -> Self {
        SampleDomain {
            mask,
            region: None,
            bounds: mask.bounds(),
        }
    }

    /// Restrict to one region. Fails if the region has no pixels.
    pub fn region(
        mask: &'a BodyMask,
        partition: &'a RegionPartition,
        region: RegionId,
    ) -> Result<Self> {
        let bounds = partition
            .region_bounds(region)
            .ok_or_else(|| Error::config(format!("region {region} has no pixels")))?;
        Ok(SampleDomain {
            mask,
            region: Some((partition, region)),
            bounds,
        })
    }

    pub fn mask(&self) -> &'a BodyMask {
        self.mask
    }

    pub fn region_id(&self) -> Option<RegionId> {
        self.region.map(|(_, r)| r)
    }

    /// True iff the floored pixel of `p` is inside the mask and, for a region
    /// domain, belongs to that region.
    pub fn contains(&self, p: Point) -> bool {
        let Some((x, y)) = self.mask.pixel_of(p.x, p.y) else {
            return false;
        };
        match self.region {
            None => self.mask.is_inside(x, y),
            Some((part, region)) => part.region_at(x, y) == Some(region),
        }
    }

    /// Uniform over the domain's bounding box, rejecting candidates until one
    /// is contained.
    pub fn sample_point(&self, stream: &mut RandomStream, max_tries: usize) -> Result<Point> {
        let b = self.bounds;
        for _ in 0..max_tries {
            let x = stream.uniform(f64::from(b.x0), f64::from(b.x1));
            let y = stream.uniform(f64::from(b.y0), f64::from(b.y1));
            let p = Point::new(x, y);
            if self.contains(p) {
                return Ok(p);
            }
        }
        Err(Error::SamplingExhausted { tries: max_tries })
    }
}
