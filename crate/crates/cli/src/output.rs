use std::io::Write;
use std::path::Path;

use serde_json::Value;

use crate::config::Format;
use crate::CliError;

/// What a command produced, ready to be written in either format.
#[derive(Debug, Clone, PartialEq)]
pub struct Emission {
    pub json: Value,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Emission {
    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => {
                let mut text = serde_json::to_string_pretty(&self.json).map_err(|e| CliError::Internal(e.to_string()))?;
                text.push('\n');
                Ok(text)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.headers).map_err(|e| CliError::Internal(e.to_string()))?;
                for row in &self.rows {
                    w.write_record(row).map_err(|e| CliError::Internal(e.to_string()))?;
                }
                let bytes = w.into_inner().map_err(|e| CliError::Internal(e.to_string()))?;
                String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))
            }
        }
    }

    pub fn write(&self, format: Format, path: Option<&Path>) -> Result<(), CliError> {
        let text = self.render(format)?;
        match path {
            Some(p) => std::fs::write(p, text).map_err(|e| CliError::Config(format!("{}: {e}", p.display()))),
            None => std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Internal(e.to_string())),
        }
    }
}

/// Six significant digits; only ever used for columns marked approximate.
pub fn approx(value: &hilbno::Rational) -> String {
    format!("{:.6e}", hilbno::ratcore::approx_f64(value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn both_formats() {
        let e = Emission {
            json: json!([{"n": 2, "mu": "1/2"}]),
            headers: vec!["n".into(), "mu".into()],
            rows: vec![vec!["2".into(), "1/2".into()]],
        };
        assert_eq!(e.render(Format::Csv).unwrap(), "n,mu\n2,1/2\n");
        assert!(e.render(Format::Json).unwrap().contains("\"mu\": \"1/2\""));
    }
}
