//! Minimal CSV tables with fixed numeric formatting.

use std::fmt::Write as _;

/// Up to 12 significant digits, plain decimal notation, no `-0`.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    format!("{rounded}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: &'static [&'static str],
    body: String,
}

impl Table {
    pub fn new(columns: &'static [&'static str]) -> Self {
        Table {
            columns,
            body: String::new(),
        }
    }

    /// First column is an integer index (`t` or `v`), the rest are reals.
    pub fn push(&mut self, index: usize, values: &[f64]) {
        assert_eq!(values.len() + 1, self.columns.len(), "row width");
        write!(self.body, "{index}").unwrap();
        for &x in values {
            self.body.push(',');
            self.body.push_str(&format_number(x));
        }
        self.body.push('\n');
    }

    pub fn header(&self) -> String {
        self.columns.join(",")
    }

    pub fn render(&self) -> String {
        let mut out = self.header();
        out.push('\n');
        out.push_str(&self.body);
        out
    }
}
