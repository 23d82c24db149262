//! Tabulated output: one grid column followed by named value columns.
//!
//! Numbers are written in Rust's shortest round-trip form, so parsing an
//! emitted file gives back the same bits.

use serde::{Deserialize, Serialize};

use crate::config::OutputFormat;
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub label: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledSeries {
    pub name: String,
    /// Header of the first CSV column, `s` or `T`.
    pub grid_label: String,
    pub grid: Vec<f64>,
    pub columns: Vec<Column>,
}

fn number(x: f64) -> String {
    format!("{x:?}")
}

impl SampledSeries {
    pub fn new(name: impl Into<String>, grid_label: impl Into<String>, grid: Vec<f64>) -> CliResult<Self> {
        if grid.is_empty() {
            return Err(CliError::Series("empty grid".into()));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(CliError::Series("grid must be strictly increasing".into()));
        }
        Ok(SampledSeries { name: name.into(), grid_label: grid_label.into(), grid, columns: Vec::new() })
    }

    pub fn push_column(&mut self, label: impl Into<String>, values: Vec<f64>) -> CliResult<()> {
        let label = label.into();
        if values.len() != self.grid.len() {
            return Err(CliError::Series(format!(
                "column {label} has {} values for {} grid points",
                values.len(),
                self.grid.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(CliError::Series(format!("column {label} is not finite at {} = {}", self.grid_label, self.grid[i])));
        }
        self.columns.push(Column { label, values });
        Ok(())
    }

    pub fn column(&self, label: &str) -> Option<&[f64]> {
        self.columns.iter().find(|c| c.label == label).map(|c| c.values.as_slice())
    }

    pub fn to_csv(&self) -> String {
        let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let header = std::iter::once(self.grid_label.as_str()).chain(self.columns.iter().map(|c| c.label.as_str()));
        writer.write_record(header).expect("writing to memory");
        for (i, s) in self.grid.iter().enumerate() {
            let row = std::iter::once(number(*s)).chain(self.columns.iter().map(|c| number(c.values[i])));
            writer.write_record(row).expect("writing to memory");
        }
        String::from_utf8(writer.into_inner().expect("flushing to memory")).expect("CSV output is ASCII")
    }

    pub fn from_csv(name: impl Into<String>, text: &str) -> CliResult<Self> {
        let bad = |e: csv::Error| CliError::Series(e.to_string());
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
        let header: Vec<String> = reader.headers().map_err(bad)?.iter().map(str::to_owned).collect();
        let (grid_label, labels) = header.split_first().ok_or_else(|| CliError::Series("missing header".into()))?;
        let mut grid = Vec::new();
        let mut values = vec![Vec::new(); labels.len()];
        for record in reader.records() {
            let record = record.map_err(bad)?;
            let parse = |field: &str| {
                field.parse::<f64>().map_err(|e| CliError::Series(format!("cannot read {field:?}: {e}")))
            };
            grid.push(parse(&record[0])?);
            for (j, column) in values.iter_mut().enumerate() {
                column.push(parse(&record[j + 1])?);
            }
        }
        let mut series = SampledSeries::new(name, grid_label.clone(), grid)?;
        for (label, column) in labels.iter().zip(values) {
            series.push_column(label.clone(), column)?;
        }
        Ok(series)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("series is always serializable");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Series(e.to_string()))
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> SampledSeries {
        let mut s = SampledSeries::new("demo", "s", vec![0.0, 0.1, 0.2, 7.0]).unwrap();
        s.push_column("a", vec![1.0, -2.5e-17, 3.0e100, 0.1 + 0.2]).unwrap();
        s.push_column("b", vec![0.0, -0.0, f64::MIN_POSITIVE, f64::MAX]).unwrap();
        s
    }

    #[test]
    fn csv_layout() {
        let text = sample().to_csv();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("s,a,b"));
        assert_eq!(lines.next(), Some("0.0,1.0,0.0"));
        assert!(!text.contains('\r'));
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn round_trips() {
        let s = sample();
        let back = SampledSeries::from_csv("demo", &s.to_csv()).unwrap();
        assert_eq!(back, s);
        let back = SampledSeries::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(SampledSeries::new("x", "s", vec![0.0, 0.0]).is_err());
        assert!(SampledSeries::new("x", "s", vec![]).is_err());
        let mut s = SampledSeries::new("x", "s", vec![0.0, 1.0]).unwrap();
        assert!(s.push_column("a", vec![1.0]).is_err());
        assert!(s.push_column("a", vec![1.0, f64::NAN]).is_err());
    }

    proptest! {
        #[test]
        fn csv_round_trip_is_exact(
            start in -1e6f64..1e6,
            steps in prop::collection::vec(1e-9f64..1e3, 1..40),
            seed in prop::collection::vec(prop::num::f64::NORMAL | prop::num::f64::ZERO | prop::num::f64::SUBNORMAL, 40),
        ) {
            let mut grid = vec![start];
            for d in &steps {
                let next = grid.last().unwrap() + d;
                prop_assume!(next > *grid.last().unwrap());
                grid.push(next);
            }
            let n = grid.len();
            let mut s = SampledSeries::new("p", "s", grid).unwrap();
            s.push_column("v", seed[..n].to_vec()).unwrap();
            let back = SampledSeries::from_csv("p", &s.to_csv()).unwrap();
            prop_assert_eq!(back.grid.iter().map(|x| x.to_bits()).collect::<Vec<_>>(), s.grid.iter().map(|x| x.to_bits()).collect::<Vec<_>>());
            prop_assert_eq!(back.columns[0].values.iter().map(|x| x.to_bits()).collect::<Vec<_>>(), s.columns[0].values.iter().map(|x| x.to_bits()).collect::<Vec<_>>());
        }
    }
}
