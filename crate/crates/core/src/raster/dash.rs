use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Alternating on/off lengths along a stroke, in pixels of arc length.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DashPattern {
    pub on: f64,
    pub off: f64,
}

impl Default for DashPattern {
    fn default() -> Self {
        DashPattern { on: 12.0, off: 8.0 }
    }
}

impl DashPattern {
    pub fn validate(&self) -> Result<()> {
        if self.on > 0.0 && self.off > 0.0 && self.on.is_finite() && self.off.is_finite() {
            Ok(())
        } else {
            Err(Error::config(format!(
                "dash lengths must be positive, got on={} off={}",
                self.on, self.off
            )))
        }
    }
}

/// The "on" intervals `[start, end]` of a stroke of arc length `total`.
///
/// Dashes start "on" at arc length zero and begin every `on + off` pixels; a
/// dash is cut short at the end of the stroke. A dash that begins exactly at
/// `total` is kept as a zero-length interval, which renders as a round dot.
pub fn dash_intervals(total: f64, dash: &DashPattern) -> Vec<(f64, f64)> {
    let period = dash.on + dash.off;
    (0u64..)
        .map(|k| k as f64 * period)
        .take_while(|&start| start <= total)
        .map(|start| (start, (start + dash.on).min(total)))
        .collect()
}
