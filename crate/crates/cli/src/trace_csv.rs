use std::path::Path;

use rbcd_core::solvers::{EpochRecord, SolverTrace};

use crate::CliError;

pub const CSV_HEADER: [&str; 6] = ["epoch", "iterations", "objective", "stationarity", "elapsed_s", "diverged"];

/// 17 significant digits, enough to round-trip any `f64`.
pub(crate) fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::io(path, io),
        other => CliError::Io {
            path: path.display().to_string(),
            source: std::io::Error::new(std::io::ErrorKind::InvalidData, format!("{other:?}")),
        },
    }
}

/// One row per epoch record.
pub fn write_trace_csv(trace: &SolverTrace, path: &Path) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    w.write_record(CSV_HEADER).map_err(|e| csv_error(path, e))?;
    for r in &trace.records {
        w.write_record([
            r.epoch.to_string(),
            r.iterations.to_string(),
            format_float(r.objective),
            format_float(r.stationarity),
            format_float(r.elapsed_s),
            r.diverged.to_string(),
        ])
        .map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn read_trace_csv(path: &Path) -> Result<Vec<EpochRecord>, CliError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let header = r.headers().map_err(|e| csv_error(path, e))?;
    if header.iter().ne(CSV_HEADER) {
        return Err(CliError::Io {
            path: path.display().to_string(),
            source: std::io::Error::new(std::io::ErrorKind::InvalidData, "unexpected header"),
        });
    }
    r.deserialize().map(|row| row.map_err(|e| csv_error(path, e))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rbcd_core::problems::{synth_instance, Family};
    use rbcd_core::solvers::{run, SolverConfig, SolverKind};

    #[test]
    fn round_trip_and_row_count() {
        let p = synth_instance(Family::PoissonInverse, 12, 12, 0).unwrap();
        let trace = run(&p, &SolverConfig::new(SolverKind::Rbcd).with_epochs(100)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        write_trace_csv(&trace, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 101);
        assert!(text.ends_with('\n'));
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
        let back = read_trace_csv(&path).unwrap();
        assert_eq!(back, trace.records);
        assert!(back.windows(2).all(|w| w[1].objective <= w[0].objective));
    }

    #[test]
    fn infinities_survive() {
        let trace = SolverTrace {
            config: SolverConfig::new(SolverKind::Arbcd),
            initial_objective: 1.0,
            initial_stationarity: 0.5,
            records: vec![EpochRecord {
                epoch: 1,
                iterations: 3,
                objective: f64::INFINITY,
                stationarity: f64::INFINITY,
                elapsed_s: 0.0,
                diverged: true,
            }],
            diverged: true,
            divergence_reason: None,
            x: vec![],
        };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        write_trace_csv(&trace, &path).unwrap();
        assert_eq!(read_trace_csv(&path).unwrap(), trace.records);
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(1.0 / 3.0).parse::<f64>().unwrap(), 1.0 / 3.0);
    }
}
