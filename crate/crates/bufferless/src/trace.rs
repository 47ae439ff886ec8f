//! Per-step trace CSV.

use std::io::Write;

use bufferless_core::TraceRecord;

use crate::error::Result;

pub const TRACE_HEADER: &str = "step,n_g,n_a,n_l,n_d,in_flight";

pub fn write_trace<W: Write>(records: &[TraceRecord], mut out: W) -> Result<()> {
    writeln!(out, "{TRACE_HEADER}")?;
    for r in records {
        writeln!(out, "{},{},{},{},{},{}", r.step, r.n_g, r.n_a, r.n_l, r.n_d, r.in_flight)?;
    }
    out.flush()?;
    Ok(())
}
