//! JSON value helpers and aligned text tables.

use serde_json::{json, Value};

use tropehrhart::lattice::arith::format_pq;
use tropehrhart::lattice::{LatticeBox, LatticeVector, Rational};
use tropehrhart::matroid::ElementSet;

const SAFE_INT: u64 = 1 << 53;

/// A JSON number when exactly representable as a double, else a decimal string.
pub fn int(x: i64) -> Value {
    if x.unsigned_abs() < SAFE_INT {
        json!(x)
    } else {
        json!(x.to_string())
    }
}

pub fn ints(v: &[i64]) -> Value {
    Value::Array(v.iter().map(|&x| int(x)).collect())
}

pub fn rational(q: &Rational) -> Value {
    json!(format_pq(q))
}

pub fn lattice(v: &LatticeVector) -> Value {
    ints(&v.0)
}

pub fn one_based(v: &[usize]) -> Value {
    json!(v.iter().map(|i| i + 1).collect::<Vec<_>>())
}

pub fn elements(s: ElementSet) -> Value {
    one_based(&s.elements())
}

pub fn lattice_box(b: &LatticeBox) -> Value {
    json!({ "lo": ints(&b.lo), "hi": ints(&b.hi) })
}

pub fn fmt_ints(v: &[i64]) -> String {
    format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
}

pub fn fmt_one_based(v: &[usize]) -> String {
    format!("{{{}}}", v.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(","))
}

/// Renders `a − b + c …` for unsigned parts with alternating signs.
pub fn alternating(parts: &[i64]) -> String {
    let mut s = String::new();
    for (k, x) in parts.iter().enumerate() {
        if k == 0 {
            s.push_str(&x.to_string());
        } else {
            s.push_str(if k % 2 == 0 { " + " } else { " − " });
            s.push_str(&x.to_string());
        }
    }
    s
}

pub struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table { headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        assert_eq!(cells.len(), self.headers.len(), "table row width");
        self.rows.push(cells);
    }

    pub fn render(&self) -> String {
        let width = |i: usize| {
            self.rows.iter().map(|r| r[i].chars().count()).chain([self.headers[i].chars().count()]).max().unwrap_or(0)
        };
        let widths: Vec<usize> = (0..self.headers.len()).map(width).collect();
        let line = |cells: &[String]| {
            let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
            parts.join("  ").trim_end().to_string()
        };
        let mut out = vec![line(&self.headers)];
        out.push(widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().join("  "));
        out.extend(self.rows.iter().map(|r| line(r)));
        out.join("\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn large_integers_become_strings() {
        assert_eq!(int(27), json!(27));
        assert_eq!(int(1 << 53), json!("9007199254740992"));
        assert_eq!(int(-(1 << 53)), json!("-9007199254740992"));
    }

    #[test]
    fn alternating_sum_text() {
        assert_eq!(alternating(&[10, 11, 2]), "10 − 11 + 2");
        assert_eq!(alternating(&[3]), "3");
    }

    #[test]
    fn table_alignment() {
        let mut t = Table::new(&["codim", "sum"]);
        t.row(vec!["0".into(), "10".into()]);
        t.row(vec!["1".into(), "11".into()]);
        assert_eq!(t.render(), "codim  sum\n-----  ---\n0      10\n1      11");
    }
}
