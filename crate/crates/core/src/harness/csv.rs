use std::io::Write;

use crate::bounds::BoundReport;
use crate::error::Result;

use super::violation_names;

pub const CSV_HEADER: &str = "k,lambda_k,avg_k,weyl_kth,weyl_avg,polya,liyau_avg,liyau_kth,\
melas,theorem1,corollary1,theta,epsilon,violations";

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Writes the header and one row per report, LF-terminated.
pub fn write_report<W: Write>(w: &mut W, reports: &[BoundReport]) -> Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in reports {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.k,
            r.lambda_k,
            r.avg_k,
            r.weyl_kth,
            r.weyl_avg,
            r.polya,
            r.liyau_avg,
            r.liyau_kth,
            r.melas,
            r.theorem1,
            opt(r.corollary1),
            u8::from(r.theta),
            opt(r.epsilon),
            violation_names(&r.violations),
        )?;
    }
    Ok(())
}
