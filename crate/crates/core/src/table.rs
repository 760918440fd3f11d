//! CSV tables with a header row and 17 significant digits per value.

use std::path::Path;

use crate::{Error, Result};

/// `x` in scientific notation with 17 significant digits.
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn to_csv(header: &[&str], rows: &[Vec<f64>]) -> Result<String> {
    to_csv_with_footer(header, rows, &[])
}

/// As [`to_csv`], followed by `label, value` rows padded to the header width.
pub fn to_csv_with_footer(header: &[&str], rows: &[Vec<f64>], footer: &[(String, f64)]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::InvalidArgument(format!("csv: {e}"));
    w.write_record(header).map_err(io)?;
    for row in rows {
        if row.len() != header.len() {
            return Err(Error::SizeMismatch {
                what: "csv row",
                expected: header.len(),
                got: row.len(),
            });
        }
        w.write_record(row.iter().map(|&x| sig17(x))).map_err(io)?;
    }
    for (label, value) in footer {
        let mut record = vec![label.clone(), sig17(*value)];
        record.resize(header.len().max(2), String::new());
        w.write_record(&record).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is ascii"))
}

pub fn save_csv(path: &Path, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    crate::mesh::io::write(path, &to_csv(header, rows)?)
}

pub fn save_csv_with_footer(path: &Path, header: &[&str], rows: &[Vec<f64>], footer: &[(String, f64)]) -> Result<()> {
    crate::mesh::io::write(path, &to_csv_with_footer(header, rows, footer)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, -1.0 / 3.0, std::f64::consts::PI * 1e-300, 6.02e23] {
            assert_eq!(sig17(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(sig17(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn csv_has_header_and_checks_width() {
        let s = to_csv(&["t", "v"], &[vec![0.0, 1.5], vec![1.0, -2.0]]).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "t,v");
        assert_eq!(lines.len(), 3);
        assert!(to_csv(&["t"], &[vec![0.0, 1.0]]).is_err());
        let s = to_csv_with_footer(&["t", "v", "w"], &[], &[("spread".into(), 0.5)]).unwrap();
        assert_eq!(s.lines().nth(1).unwrap(), "spread,5.0000000000000000e-1,");
    }
}
