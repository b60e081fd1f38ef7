//! CSV emission for plot data and comparison tables, plus atomic file writes.
//!
//! Floats are printed with Rust's shortest round-trip representation.

use std::io::{self, Write};
use std::path::Path;

use crate::gibbs::{AnnealSchedule, ChainState};
use crate::rounding::SampleBatch;

/// `iteration,objective`, one line per solver iteration.
pub fn write_lrp_trace_csv<W: Write>(mut w: W, trace: &[f64]) -> io::Result<()> {
    writeln!(w, "iteration,objective")?;
    for (t, f) in trace.iter().enumerate() {
        writeln!(w, "{t},{f}")?;
    }
    Ok(())
}

/// `index,score`, one line per rounded sample.
pub fn write_samples_csv<W: Write>(mut w: W, batch: &SampleBatch) -> io::Result<()> {
    writeln!(w, "index,score")?;
    for (i, s) in batch.scores.iter().enumerate() {
        writeln!(w, "{i},{s}")?;
    }
    Ok(())
}

/// `sweep,temperature,score`, sweeps numbered from 1. `offset` is added to
/// every score (useful when the chain ran on an embedded model).
pub fn write_chain_trace_csv<W: Write>(
    mut w: W,
    state: &ChainState,
    schedule: &AnnealSchedule,
    offset: f64,
) -> io::Result<()> {
    writeln!(w, "sweep,temperature,score")?;
    for (k, (s, t)) in state
        .score_trace
        .iter()
        .zip(schedule.temperatures())
        .enumerate()
    {
        writeln!(w, "{},{t},{}", k + 1, s + offset)?;
    }
    Ok(())
}

/// One row of the log-partition comparison table; missing estimators leave
/// their cell empty.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LogzRow {
    pub truth: Option<f64>,
    pub ais: Option<f64>,
    pub rrr_low: Option<f64>,
    pub rrr_is: Option<f64>,
}

pub fn write_logz_table_csv<W: Write>(mut w: W, rows: &[LogzRow]) -> io::Result<()> {
    writeln!(w, "True,AIS,rrr-low,rrr-IS")?;
    let cell = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in rows {
        writeln!(
            w,
            "{},{},{},{}",
            cell(r.truth),
            cell(r.ais),
            cell(r.rrr_low),
            cell(r.rrr_is)
        )?;
    }
    Ok(())
}

/// Writes `bytes` to a temporary file next to `path`, then renames it into
/// place, so readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
