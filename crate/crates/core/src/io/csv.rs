use std::fmt::Write as _;

use crate::sim::SimulationReport;
use crate::smartgrid::PhaseMap;

pub const CSV_HEADER: &str = "place_id,place_name,phase,mean,stddev,min,max";

/// One row per place in id order, six fractional digits, LF endings.
///
/// The phase column is empty for places `phases` does not tag.
pub fn write_report_csv(report: &SimulationReport, phases: Option<&PhaseMap>) -> String {
    let mut out = String::with_capacity(64 * (report.places.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (i, (name, s)) in report.place_names.iter().zip(&report.places).enumerate() {
        let phase = phases.and_then(|m| m.phase_of(name)).map(|p| p.label()).unwrap_or("");
        writeln!(out, "{i},{name},{phase},{:.6},{:.6},{:.6},{:.6}", s.mean, s.stddev, s.min, s.max)
            .expect("writing to a String cannot fail");
    }
    out
}
