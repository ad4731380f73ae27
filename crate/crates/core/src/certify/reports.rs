//! Report schema and serialization. Reports are serde structs rendered as
//! pretty JSON with fixed field order, so equal inputs give byte-equal
//! output files.

use serde::Serialize;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Footer attached to every report: certification runs on finite carriers,
/// the stated sufficient regime for openness of characteristic maps; the
/// converse direction is outside what a finite harness can exercise.
pub const FINITE_REGIME_NOTE: &str = "certified on finite carriers; finite-space openness is \
the sufficient regime this harness exercises, the converse is not testable here";

pub fn render_report<T: Serialize>(report: &T) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("reports serialize");
    text.push('\n');
    text
}
