use serde::{Deserialize, Serialize};

/// 8-bit RGB triple, serialized as `[r, g, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[u8; 3]", into = "[u8; 3]")]
pub struct Rgb8 {
    pub r: u8,
    pub g: u8,
    pub b: u8,
}

impl Rgb8 {
    pub const fn new(r: u8, g: u8, b: u8) -> Self {
        Self { r, g, b }
    }

    pub const BLUE: Rgb8 = Rgb8::new(0, 0, 255);
    pub const YELLOW: Rgb8 = Rgb8::new(255, 255, 0);
    pub const RED: Rgb8 = Rgb8::new(255, 0, 0);
    pub const ORANGE: Rgb8 = Rgb8::new(255, 165, 0);

    /// Per-channel linear blend; `t` is clamped to `[0, 1]`. Exact at both ends.
    pub fn lerp(self, to: Rgb8, t: f64) -> Rgb8 {
        let t = if t.is_nan() { 0.0 } else { t.clamp(0.0, 1.0) };
        let ch = |a: u8, b: u8| {
            let (a, b) = (a as f64, b as f64);
            (a + t * (b - a)).round().clamp(0.0, 255.0) as u8
        };
        Rgb8::new(ch(self.r, to.r), ch(self.g, to.g), ch(self.b, to.b))
    }

    pub fn hex(self) -> String {
        format!("#{:02x}{:02x}{:02x}", self.r, self.g, self.b)
    }
}

impl From<[u8; 3]> for Rgb8 {
    fn from([r, g, b]: [u8; 3]) -> Self {
        Rgb8::new(r, g, b)
    }
}

impl From<Rgb8> for [u8; 3] {
    fn from(c: Rgb8) -> Self {
        [c.r, c.g, c.b]
    }
}
