//! Flat records for CSV and TOML output.
//!
//! Reals are written as `{:.16e}` (17 significant digits), which round-trips `f64`.

use crate::bounds::{BoundResult, JudgeResult};
use crate::moments::UncertaintyReport;

pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// A record with a fixed column order.
pub trait Record {
    fn header() -> Vec<&'static str>;
    fn fields(&self) -> Vec<String>;

    /// Column/value pairs in header order, for structured text.
    fn table(&self) -> toml::Table {
        let mut t = toml::Table::new();
        for (k, v) in Self::header().into_iter().zip(self.fields()) {
            let value = match v.parse::<f64>() {
                Ok(x) if !v.eq_ignore_ascii_case("nan") && !v.contains("inf") => toml::Value::Float(x),
                _ => match v.as_str() {
                    "true" => toml::Value::Boolean(true),
                    "false" => toml::Value::Boolean(false),
                    _ => toml::Value::String(v),
                },
            };
            t.insert(k.to_string(), value);
        }
        t
    }
}

fn flag(b: bool) -> String {
    b.to_string()
}

/// Columns: `t, window_start, window_width, mean_x, mean_x2, mean_p, mean_p2, dx, dp, product, bound_kind, bound_value, satisfied`.
impl Record for UncertaintyReport<f64> {
    fn header() -> Vec<&'static str> {
        vec![
            "t",
            "window_start",
            "window_width",
            "mean_x",
            "mean_x2",
            "mean_p",
            "mean_p2",
            "dx",
            "dp",
            "product",
            "bound_kind",
            "bound_value",
            "satisfied",
        ]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            fmt_real(self.t),
            fmt_real(self.window.start),
            fmt_real(self.window.width),
            fmt_real(self.mean_x),
            fmt_real(self.mean_x2),
            fmt_real(self.mean_p),
            fmt_real(self.mean_p2),
            fmt_real(self.dx),
            fmt_real(self.dp),
            fmt_real(self.product),
            self.bound_kind.name().to_string(),
            fmt_real(self.bound_value),
            flag(self.satisfied),
        ]
    }
}

/// Columns: `kind, value, witness_kind, witness, lhs_product, satisfied, degenerate`.
/// `witness` is empty when there is none.
impl Record for BoundResult<f64> {
    fn header() -> Vec<&'static str> {
        vec!["kind", "value", "witness_kind", "witness", "lhs_product", "satisfied", "degenerate"]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.kind.name().to_string(),
            fmt_real(self.value),
            self.witness.label().to_string(),
            self.witness.value().map(fmt_real).unwrap_or_default(),
            fmt_real(self.lhs_product),
            flag(self.satisfied),
            flag(self.degenerate),
        ]
    }
}

/// Columns: `gamma, dx_gamma, mean_x, curvature, curvature_ok, bound, dp, product, degenerate`.
impl Record for JudgeResult<f64> {
    fn header() -> Vec<&'static str> {
        vec![
            "gamma",
            "dx_gamma",
            "mean_x",
            "curvature",
            "curvature_ok",
            "bound",
            "dp",
            "product",
            "degenerate",
        ]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            fmt_real(self.gamma),
            fmt_real(self.dx_gamma),
            fmt_real(self.mean_x),
            fmt_real(self.curvature),
            flag(self.curvature_ok),
            fmt_real(self.bound),
            fmt_real(self.dp),
            fmt_real(self.product),
            flag(self.degenerate),
        ]
    }
}

/// Header line plus one line per record, comma separated, LF terminated.
pub fn to_csv<R: Record>(records: &[R]) -> String {
    let mut out = R::header().join(",");
    out.push('\n');
    for r in records {
        out.push_str(&r.fields().join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{Prescription, Witness};

    #[test]
    fn seventeen_digits_round_trip() {
        let x = 0.1 + 0.2;
        assert_eq!(fmt_real(x).parse::<f64>().unwrap(), x);
        assert_eq!(fmt_real(1.0 / 3.0), "3.3333333333333331e-1");
    }

    #[test]
    fn bound_row() {
        let b = BoundResult {
            kind: Prescription::Trig,
            value: 0.5,
            witness: Witness::None,
            lhs_product: 1.0,
            satisfied: true,
            degenerate: false,
        };
        let csv = to_csv(&[b.clone()]);
        assert_eq!(
            csv,
            "kind,value,witness_kind,witness,lhs_product,satisfied,degenerate\n\
             trig,5.0000000000000000e-1,none,,1.0000000000000000e0,true,false\n"
        );
        let t = b.table();
        assert_eq!(t["value"].as_float(), Some(0.5));
        assert_eq!(t["satisfied"].as_bool(), Some(true));
    }
}
