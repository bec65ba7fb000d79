//! CSV and JSON export of sweep results.
//!
//! CSV columns, in order:
//! `snr_db,scheme,n,k,trials,bler_sim,bler_ci_low,bler_ci_high,bler_exact,bler_asym,throughput,throughput_ci_low,throughput_ci_high`.
//! Floats use the shortest representation that parses back to the same value.
//! Missing simulation values are empty cells in CSV and `null` in JSON.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

use super::config::OutputFormat;
use super::sweep::SweepPoint;

pub const CSV_HEADER: &str = "snr_db,scheme,n,k,trials,bler_sim,bler_ci_low,bler_ci_high,bler_exact,bler_asym,throughput,throughput_ci_low,throughput_ci_high";

fn serialize_error(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Serialize {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

/// Writes `points` to `writer`. `label` names the destination in errors.
pub fn write_points<W: Write>(
    points: &[SweepPoint],
    format: OutputFormat,
    writer: W,
    label: &Path,
) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(writer);
            w.write_record(CSV_HEADER.split(','))
                .map_err(|e| serialize_error(label, e))?;
            for p in points {
                w.serialize(p).map_err(|e| serialize_error(label, e))?;
            }
            w.flush().map_err(|source| Error::Io {
                path: label.to_path_buf(),
                source,
            })
        }
        OutputFormat::Json => {
            let mut writer = writer;
            serde_json::to_writer_pretty(&mut writer, points)
                .map_err(|e| serialize_error(label, e))?;
            writer.write_all(b"\n").map_err(|source| Error::Io {
                path: label.to_path_buf(),
                source,
            })
        }
    }
}

pub fn emit(points: &[SweepPoint], format: OutputFormat, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut writer = BufWriter::new(file);
    write_points(points, format, &mut writer, path)?;
    writer.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_points<R: Read>(
    format: OutputFormat,
    reader: R,
    label: &Path,
) -> Result<Vec<SweepPoint>> {
    match format {
        OutputFormat::Csv => csv::Reader::from_reader(reader)
            .deserialize()
            .map(|row| row.map_err(|e| serialize_error(label, e)))
            .collect(),
        OutputFormat::Json => {
            serde_json::from_reader(reader).map_err(|e| serialize_error(label, e))
        }
    }
}

pub fn load(format: OutputFormat, path: &Path) -> Result<Vec<SweepPoint>> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_points(format, file, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::SchemeKind;

    fn point() -> SweepPoint {
        SweepPoint {
            snr_db: 8.0,
            scheme: SchemeKind::Rcpnc,
            n: 15,
            k: 5,
            trials: 123_456,
            bler_sim: Some(0.005_983_1),
            bler_ci_low: Some(0.005_571_234_567_89),
            bler_ci_high: Some(1.0 / 3.0),
            bler_exact: 5.924_971_528_872_946_5e-3,
            bler_asym: 1.234e-300,
            throughput: Some(1.192_819_912),
            throughput_ci_low: None,
            throughput_ci_high: Some(1.2),
        }
    }

    fn to_string(points: &[SweepPoint], format: OutputFormat) -> String {
        let mut buf = Vec::new();
        write_points(points, format, &mut buf, Path::new("<memory>")).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn empty_sweep_is_header_only() {
        assert_eq!(to_string(&[], OutputFormat::Csv), format!("{CSV_HEADER}\n"));
        assert_eq!(to_string(&[], OutputFormat::Json).trim(), "[]");
    }

    #[test]
    fn one_point_is_two_lines() {
        let text = to_string(&[point()], OutputFormat::Csv);
        assert_eq!(text.lines().count(), 2);
        let row = text.lines().nth(1).unwrap();
        assert!(row.starts_with("8.0,rcpnc,15,5,123456,"), "{row}");
        assert_eq!(row.split(',').count(), 13);
        assert!(!row.contains(';'));
    }

    #[test]
    fn csv_and_json_round_trip() {
        let points = vec![
            point(),
            SweepPoint {
                snr_db: -1.5,
                bler_sim: None,
                ..point()
            },
        ];
        for format in [OutputFormat::Csv, OutputFormat::Json] {
            let text = to_string(&points, format);
            let back = read_points(format, text.as_bytes(), Path::new("<memory>")).unwrap();
            assert_eq!(back, points, "{format}");
        }
    }

    #[test]
    fn unwritable_path_is_reported() {
        let err = emit(
            &[point()],
            OutputFormat::Csv,
            Path::new("/nonexistent-dir/out.csv"),
        )
        .unwrap_err();
        assert!(err.to_string().contains("/nonexistent-dir/out.csv"));
    }
}
