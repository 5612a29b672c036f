//! Two-column CSV: UTF-8, LF line endings, a `t,price` or `t,value` header,
//! and floats in shortest round-trip form. An optional third `regime`
//! column carries tick labels.

use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueKind {
    Price,
    Value,
}

impl ValueKind {
    fn header(self) -> &'static str {
        match self {
            ValueKind::Price => "price",
            ValueKind::Value => "value",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub kind: ValueKind,
    pub t: Vec<f64>,
    pub values: Vec<f64>,
    pub labels: Option<Vec<String>>,
}

impl Table {
    pub fn new(kind: ValueKind, t: Vec<f64>, values: Vec<f64>) -> Self {
        Self {
            kind,
            t,
            values,
            labels: None,
        }
    }

    /// Index-stamped samples `0, 1, ...`.
    pub fn samples(values: Vec<f64>) -> Self {
        let t = (0..values.len()).map(|i| i as f64).collect();
        Self::new(ValueKind::Value, t, values)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(24 * self.values.len() + 16);
        out.push_str("t,");
        out.push_str(self.kind.header());
        if self.labels.is_some() {
            out.push_str(",regime");
        }
        out.push('\n');
        for (i, (t, v)) in self.t.iter().zip(&self.values).enumerate() {
            let _ = write!(out, "{t},{v}");
            if let Some(labels) = &self.labels {
                out.push(',');
                out.push_str(&labels[i]);
            }
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, String> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or("empty input")?;
        let cols: Vec<&str> = header.trim_end_matches('\r').split(',').map(str::trim).collect();
        let kind = match cols.as_slice() {
            ["t", "price", ..] => ValueKind::Price,
            ["t", "value", ..] => ValueKind::Value,
            _ => return Err(format!("unrecognized header `{header}`; expected `t,price` or `t,value`")),
        };
        let has_labels = cols.len() == 3 && cols[2] == "regime";
        if cols.len() > 2 && !has_labels {
            return Err(format!("unrecognized header `{header}`"));
        }
        let mut table = Table::new(kind, Vec::new(), Vec::new());
        let mut labels = Vec::new();
        for (i, raw) in lines {
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != cols.len() {
                return Err(format!("line {}: expected {} fields", i + 1, cols.len()));
            }
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| format!("line {}: `{s}`: {e}", i + 1))
            };
            table.t.push(parse(fields[0])?);
            table.values.push(parse(fields[1])?);
            if has_labels {
                labels.push(fields[2].to_string());
            }
        }
        if has_labels {
            table.labels = Some(labels);
        }
        Ok(table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let vals = vec![0.1, 1.0 / 3.0, 5e-324, 1.7976931348623157e308, -2.5e-17];
        let t = Table::new(ValueKind::Price, vec![0.0, 0.25, 0.5, 0.75, 1.0], vals);
        let back = Table::from_csv(&t.to_csv()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn labels_survive() {
        let mut t = Table::samples(vec![1.0, -2.0]);
        t.labels = Some(vec!["regular".into(), "big_player".into()]);
        let csv = t.to_csv();
        assert!(csv.starts_with("t,value,regime\n0,1,regular\n"));
        assert_eq!(Table::from_csv(&csv).unwrap(), t);
    }

    #[test]
    fn malformed_input() {
        assert!(Table::from_csv("").is_err());
        assert!(Table::from_csv("x,y\n1,2\n").is_err());
        assert!(Table::from_csv("t,value\n1,abc\n").is_err());
        assert!(Table::from_csv("t,value\n1\n").is_err());
    }
}
