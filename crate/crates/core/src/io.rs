//! Bit-stable text output: 17 significant digits everywhere.

use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, Serializer};

use crate::error::Result;
use crate::srg::SrgRegion;

/// `x` with 17 significant digits (`{:.16e}`); `inf`, `-inf` or `NaN` otherwise.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// JSON formatter writing every float with 17 significant digits. Non-finite
/// values become `null`.
struct Fmt17;

impl Formatter for Fmt17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

/// Serializes `value` as compact JSON with [`fmt17`] numbers and a trailing newline.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    value.serialize(&mut Serializer::with_formatter(&mut buf, Fmt17))?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

/// Header of the boundary export.
pub const BOUNDARY_HEADER: &str = "freq_hz,re,im,region_id,filled";

/// One row per stored (upper-half) boundary vertex; mirror about the real axis
/// for the full set.
pub fn boundary_csv<'a>(rows: impl IntoIterator<Item = (f64, &'a str, &'a SrgRegion)>) -> String {
    let mut out = format!("{BOUNDARY_HEADER}\n");
    for (f_hz, id, region) in rows {
        for z in region.boundary_upper() {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                fmt17(f_hz),
                fmt17(z.re),
                fmt17(z.im),
                id,
                region.is_filled()
            ));
        }
    }
    out
}
