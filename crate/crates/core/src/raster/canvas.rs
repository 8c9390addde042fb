/// Non-premultiplied 8-bit RGBA.
pub type Rgba = [u8; 4];

/// An RGBA8 image in row-major order.
#[derive(Clone, PartialEq, Eq)]
pub struct Canvas {
    width: u32,
    height: u32,
    data: Vec<u8>,
}

impl std::fmt::Debug for Canvas {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Canvas")
            .field("width", &self.width)
            .field("height", &self.height)
            .finish_non_exhaustive()
    }
}

impl Canvas {
    pub fn filled(width: u32, height: u32, color: Rgba) -> Self {
        let n = width as usize * height as usize;
        Canvas {
            width,
            height,
            data: color.repeat(n),
        }
    }

    /// Wrap raw RGBA bytes. Returns `None` if the length does not match.
    pub fn from_rgba(width: u32, height: u32, data: Vec<u8>) -> Option<Self> {
        (data.len() == width as usize * height as usize * 4).then_some(Canvas {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn as_rgba(&self) -> &[u8] {
        &self.data
    }

    fn offset(&self, x: u32, y: u32) -> usize {
        assert!(
            x < self.width && y < self.height,
            "pixel ({x}, {y}) out of bounds"
        );
        (y as usize * self.width as usize + x as usize) * 4
    }

    pub fn get(&self, x: u32, y: u32) -> Rgba {
        let i = self.offset(x, y);
        self.data[i..i + 4].try_into().unwrap()
    }

    pub fn set(&mut self, x: u32, y: u32, color: Rgba) {
        let i = self.offset(x, y);
        self.data[i..i + 4].copy_from_slice(&color);
    }

    pub fn pixels(&self) -> impl Iterator<Item = Rgba> + '_ {
        self.data.chunks_exact(4).map(|c| c.try_into().unwrap())
    }

    pub(crate) fn pixels_mut(&mut self) -> impl Iterator<Item = &mut Rgba> + '_ {
        self.data
            .chunks_exact_mut(4)
            .map(|c| <&mut Rgba>::try_from(c).unwrap())
    }
}

/// Source-over compositing of `src` onto `dst` in exact integer arithmetic
/// with round-to-nearest.
pub fn blend_over(dst: Rgba, src: Rgba) -> Rgba {
    let sa = u32::from(src[3]);
    match sa {
        0 => return dst,
        255 => return src,
        _ => {}
    }
    let da = u32::from(dst[3]);
    // Output alpha scaled by 255.
    let a = sa * 255 + da * (255 - sa);
    let mut out = [0u8; 4];
    for c in 0..3 {
        let num = u32::from(src[c]) * sa * 255 + u32::from(dst[c]) * da * (255 - sa);
        out[c] = ((num + a / 2) / a) as u8;
    }
    out[3] = ((a + 127) / 255) as u8;
    out
}
