//! CSV datasets: a header row of variable names, then one sample per row.

use std::path::Path;

use rol_core::ci::DataMatrix;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub names: Vec<String>,
    pub data: DataMatrix,
}

pub fn parse_csv(text: &str) -> Result<Dataset> {
    read_from(csv::Reader::from_reader(text.as_bytes()))
}

pub fn read_csv(path: &Path) -> Result<Dataset> {
    read_from(csv::Reader::from_path(path)?)
}

fn read_from<R: std::io::Read>(mut rdr: csv::Reader<R>) -> Result<Dataset> {
    let names: Vec<String> = rdr
        .headers()?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let mut values = Vec::new();
    let mut rows = 0;
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let line = i + 2;
        if record.len() != names.len() {
            return Err(Error::parse(
                line,
                format!("{} fields, header has {}", record.len(), names.len()),
            ));
        }
        for field in record.iter() {
            let v: f64 = field
                .trim()
                .parse()
                .map_err(|_| Error::parse(line, format!("not a number: `{field}`")))?;
            values.push(v);
        }
        rows += 1;
    }
    let data = DataMatrix::new(rows, names.len(), values)?;
    Ok(Dataset { names, data })
}

pub fn write_csv(ds: &Dataset) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&ds.names)?;
    for i in 0..ds.data.num_samples() {
        w.write_record(ds.data.row(i).iter().map(|v| format!("{v:e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let data =
            DataMatrix::from_rows(&[vec![0.1, -2.5], vec![1.0 / 3.0, 4.0e-9], vec![7.0, 8.0]])
                .unwrap();
        let ds = Dataset {
            names: vec!["x".into(), "y".into()],
            data,
        };
        assert_eq!(parse_csv(&write_csv(&ds).unwrap()).unwrap(), ds);
    }

    #[test]
    fn bad_rows() {
        assert!(matches!(
            parse_csv("a,b\n1,2\n3,zz\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(parse_csv("a,b\n1,2\n3\n").is_err());
    }
}
