//! CSV and JSON artifacts.
//!
//! CSV files start with `#` comment lines (task, units, summary), followed
//! by one header row and one row per sweep point. JSON carries the same
//! content as an object with `task`, `units`, `columns`, `rows`, `summary`.

use serde::Serialize;

use crate::config::Format;
use crate::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            // Shortest representation that round-trips.
            Cell::Num(v) => format!("{v:e}"),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

pub fn opt_cell(v: Option<f64>) -> Cell {
    v.map(Cell::Num).unwrap_or_else(|| Cell::Text(String::new()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub task: String,
    pub units: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Vec<(String, String)>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }
}

pub fn render(table: &Table, format: Format) -> CliResult<String> {
    match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                task: &'a str,
                units: &'a str,
                columns: &'a [String],
                rows: &'a [Vec<Cell>],
                summary: serde_json::Map<String, serde_json::Value>,
            }
            let summary = table.summary.iter().map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone()))).collect();
            let doc = Doc { task: &table.task, units: &table.units, columns: &table.columns, rows: &table.rows, summary };
            let mut s = serde_json::to_string_pretty(&doc).map_err(|e| CliError::config(format!("json encoding: {e}")))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut head = format!("# task: {}\n# units: {}\n", table.task, table.units);
            for (k, v) in &table.summary {
                head.push_str(&format!("# summary: {k} = {v}\n"));
            }
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| CliError::config(format!("csv encoding: {e}"));
            w.write_record(&table.columns).map_err(io)?;
            for row in &table.rows {
                w.write_record(row.iter().map(Cell::render)).map_err(io)?;
            }
            let body = w.into_inner().map_err(|e| CliError::config(format!("csv encoding: {e}")))?;
            head.push_str(&String::from_utf8(body).expect("csv output is utf-8"));
            Ok(head)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        Table {
            task: "t".into(),
            units: "reduced".into(),
            columns: vec!["x".into(), "y".into(), "tag".into()],
            rows: vec![vec![0.1.into(), 1.0e-300.into(), "a,b".into()]],
            summary: vec![("zeros".into(), "1;2".into())],
        }
    }

    #[test]
    fn csv_layout() {
        let s = render(&sample(), Format::Csv).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "# task: t");
        assert!(lines[1].starts_with("# units:"));
        assert_eq!(lines[2], "# summary: zeros = 1;2");
        assert_eq!(lines[3], "x,y,tag");
        assert_eq!(lines[4], "1e-1,1e-300,\"a,b\"");
    }

    #[test]
    fn numbers_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-17, 123456789.0] {
            let Cell::Num(_) = Cell::from(v) else { unreachable!() };
            let r = Cell::Num(v).render();
            assert_eq!(r.parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn json_layout() {
        let s = render(&sample(), Format::Json).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["columns"][1], "y");
        assert_eq!(v["rows"][0][2], "a,b");
        assert_eq!(v["summary"]["zeros"], "1;2");
    }
}
