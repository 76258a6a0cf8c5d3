//! Net text format, CSV reports and SVG charts.

mod csv;
mod format;
mod svg;

pub use self::csv::{write_report_csv, CSV_HEADER};
pub use self::format::{parse_net, parse_net_unchecked, serialize_net, ParseError};
pub use self::svg::{render_chart_svg, ChartSeries, ChartSpec};
