//! The JSON connection document.
//!
//! ```json
//! {
//!   "parameters": ["alpha"],
//!   "rank": 1,
//!   "points": [{"a": "0", "m": 2}],
//!   "g": [[[["0"]], [["alpha"]]]],
//!   "eta": [[[[{"alpha": "-1"}]]]],
//!   "eta0": [[{}]]
//! }
//! ```
//!
//! `g[i][r-1]` is the matrix `g_r` at point `i`, `eta[i][s-1]` the matrix of
//! one-forms `eta_s`; a one-form is an object from parameter names to
//! expressions (missing names are zero). `eta` and `eta0` may be omitted.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cli::expr::parse_expr;
use crate::connection::{big_m, Connection, MatFormK, MatK, PointData};
use crate::error::Error;
use crate::funcfield::FieldElem;
use crate::linalg::Matrix;

type ExprMatrix = Vec<Vec<String>>;
type FormMatrix = Vec<Vec<BTreeMap<String, String>>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointEntry {
    pub a: String,
    pub m: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionFile {
    pub parameters: Vec<String>,
    pub rank: usize,
    pub points: Vec<PointEntry>,
    pub g: Vec<Vec<ExprMatrix>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<Vec<Vec<FormMatrix>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta0: Option<FormMatrix>,
}

/// A connection together with its parameter names.
#[derive(Clone, Debug)]
pub struct Parsed {
    pub names: Vec<String>,
    pub conn: Connection,
}

/// 1-based line and column of byte offset `off` in `text`.
fn line_col(text: &str, off: usize) -> (usize, usize) {
    let before = &text[..off.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

/// Locates a JSON string literal in the source (first occurrence).
fn locate_string(text: &str, s: &str) -> (usize, usize) {
    let quoted = serde_json::to_string(s).unwrap_or_default();
    match text.find(&quoted) {
        Some(off) => line_col(text, off + 1),
        None => (1, 1),
    }
}

struct Ctx<'a> {
    text: &'a str,
    names: &'a [String],
}

impl Ctx<'_> {
    fn parse_error(&self, anchor: &str, message: String) -> Error {
        let (line, column) = locate_string(self.text, anchor);
        Error::Parse { line, column, message }
    }

    fn expr(&self, s: &str, path: &str) -> Result<FieldElem, Error> {
        parse_expr(s, self.names).map_err(|e| {
            let (line, column) = locate_string(self.text, s);
            Error::Parse { line, column: column + e.column, message: format!("{path}: {}", e.message) }
        })
    }

    fn matrix(&self, m: &ExprMatrix, r: usize, path: &str, anchor: &str) -> Result<MatK, Error> {
        if m.len() != r || m.iter().any(|row| row.len() != r) {
            return Err(self.parse_error(anchor, format!("{path}: expected a {r}x{r} matrix")));
        }
        let mut rows = Vec::with_capacity(r);
        for (a, row) in m.iter().enumerate() {
            let mut out = Vec::with_capacity(r);
            for (b, s) in row.iter().enumerate() {
                out.push(self.expr(s, &format!("{path}[{a}][{b}]"))?);
            }
            rows.push(out);
        }
        Ok(Matrix::from_rows(rows))
    }

    fn form_matrix(&self, m: &FormMatrix, r: usize, path: &str, anchor: &str) -> Result<MatFormK, Error> {
        if m.len() != r || m.iter().any(|row| row.len() != r) {
            return Err(self.parse_error(anchor, format!("{path}: expected a {r}x{r} matrix")));
        }
        let p = self.names.len();
        let mut parts = vec![Matrix::zeros(r, r); p];
        for (a, row) in m.iter().enumerate() {
            for (b, obj) in row.iter().enumerate() {
                for (name, s) in obj {
                    let Some(j) = self.names.iter().position(|n| n == name) else {
                        return Err(self.parse_error(name, format!("{path}[{a}][{b}]: unknown parameter '{name}'")));
                    };
                    let v = self.expr(s, &format!("{path}[{a}][{b}].{name}"))?;
                    parts[j].set(a, b, v);
                }
            }
        }
        Ok(MatFormK::from_parts(parts))
    }
}

fn is_identifier(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(|c| c.is_alphabetic() || c == '_') && cs.all(|c| c.is_alphanumeric() || c == '_')
}

/// Parses a document. Malformed input gives [`Error::Parse`]; structural
/// violations of the connection (pole at infinity, coinciding points, all
/// points logarithmic) give [`Error::InvalidConnection`].
pub fn parse_connection(text: &str) -> Result<Parsed, Error> {
    let file: ConnectionFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    from_file(&file, text)
}

pub fn from_file(file: &ConnectionFile, text: &str) -> Result<Parsed, Error> {
    let names = file.parameters.clone();
    let ctx = Ctx { text, names: &names };
    for (k, n) in names.iter().enumerate() {
        if !is_identifier(n) || names[..k].contains(n) {
            return Err(ctx.parse_error(n, format!("bad or repeated parameter name '{n}'")));
        }
    }
    let r = file.rank;
    if r == 0 {
        return Err(ctx.parse_error("rank", "rank must be positive".into()));
    }
    let n = file.points.len();
    if file.g.len() != n {
        return Err(ctx.parse_error("g", format!("g: expected {n} entries, one per point")));
    }
    if let Some(eta) = &file.eta {
        if eta.len() != n {
            return Err(ctx.parse_error("eta", format!("eta: expected {n} entries, one per point")));
        }
    }
    let p = names.len();
    let mut points = Vec::with_capacity(n);
    for (i, pe) in file.points.iter().enumerate() {
        let a = ctx.expr(&pe.a, &format!("points[{i}].a"))?;
        if pe.m == 0 {
            return Err(ctx.parse_error("points", format!("points[{i}]: multiplicity must be positive")));
        }
        let gs = &file.g[i];
        if gs.len() != pe.m as usize {
            return Err(ctx.parse_error("g", format!("g[{i}]: expected {} matrices", pe.m)));
        }
        let g = gs
            .iter()
            .enumerate()
            .map(|(k, m)| ctx.matrix(m, r, &format!("g[{i}][{k}]"), "g"))
            .collect::<Result<Vec<_>, _>>()?;
        let mm = big_m(pe.m) as usize;
        let eta = match &file.eta {
            None => vec![MatFormK::zero(r, p); mm],
            Some(all) => {
                if all[i].len() != mm {
                    return Err(ctx.parse_error("eta", format!("eta[{i}]: expected {mm} matrices")));
                }
                all[i]
                    .iter()
                    .enumerate()
                    .map(|(k, m)| ctx.form_matrix(m, r, &format!("eta[{i}][{k}]"), "eta"))
                    .collect::<Result<Vec<_>, _>>()?
            }
        };
        points.push(PointData { a, m: pe.m, g, eta });
    }
    let eta0 = match &file.eta0 {
        None => MatFormK::zero(r, p),
        Some(m) => ctx.form_matrix(m, r, "eta0", "eta0")?,
    };
    let conn = Connection::new(r, p, points, eta0)?;
    Ok(Parsed { names, conn })
}

fn render_matrix(m: &MatK, names: &[String]) -> ExprMatrix {
    (0..m.rows()).map(|a| (0..m.cols()).map(|b| m.get(a, b).render(names)).collect()).collect()
}

fn render_form_matrix(w: &MatFormK, r: usize, names: &[String]) -> FormMatrix {
    (0..r)
        .map(|a| {
            (0..r).map(|b| w.entry(a, b).iter().map(|(&j, c)| (names[j].clone(), c.render(names))).collect()).collect()
        })
        .collect()
}

pub fn to_file(c: &Connection, names: &[String]) -> ConnectionFile {
    let r = c.rank();
    let points = c.points();
    ConnectionFile {
        parameters: names.to_vec(),
        rank: r,
        points: points.iter().map(|p| PointEntry { a: p.a.render(names), m: p.m }).collect(),
        g: points.iter().map(|p| p.g.iter().map(|m| render_matrix(m, names)).collect()).collect(),
        eta: Some(points.iter().map(|p| p.eta.iter().map(|w| render_form_matrix(w, r, names)).collect()).collect()),
        eta0: Some(render_form_matrix(c.eta0(), r, names)),
    }
}

pub fn to_json(c: &Connection, names: &[String]) -> String {
    serde_json::to_string_pretty(&to_file(c, names)).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const MINIMAL: &str = r#"{
  "parameters": ["alpha"],
  "rank": 1,
  "points": [{"a": "0", "m": 2}],
  "g": [[[["0"]], [["alpha"]]]],
  "eta": [[[[{"alpha": "-1"}]]]]
}"#;

    #[test]
    fn minimal_document() {
        let p = parse_connection(MINIMAL).unwrap();
        assert_eq!(p.conn, fixtures::single_point());
        assert_eq!(p.names, vec!["alpha".to_string()]);
    }

    #[test]
    fn json_round_trip() {
        let names: Vec<String> = vec!["x".into(), "alpha".into()];
        for c in [fixtures::two_point(), fixtures::rank_two(), fixtures::rank_three()] {
            let text = to_json(&c, &names);
            assert_eq!(parse_connection(&text).unwrap().conn, c);
        }
    }

    #[test]
    fn structural_errors() {
        let bad = MINIMAL.replace(r#"[["0"]], [["alpha"]]"#, r#"[["1"]], [["alpha"]]"#);
        let e = parse_connection(&bad).unwrap_err();
        assert!(matches!(&e, Error::InvalidConnection(s) if s.contains("regularity at infinity")), "{e:?}");
        let dup = r#"{"parameters": ["x"], "rank": 1,
            "points": [{"a": "x", "m": 2}, {"a": "x", "m": 1}],
            "g": [[[["1"]], [["1"]]], [[["-1"]]]]}"#;
        assert!(matches!(parse_connection(dup), Err(Error::InvalidConnection(_))));
    }

    #[test]
    fn positioned_parse_errors() {
        let bad = MINIMAL.replace(r#"[["alpha"]]"#, r#"[["alpha +* 2"]]"#);
        match parse_connection(&bad) {
            Err(Error::Parse { line, column, message }) => {
                assert_eq!(line, 5);
                assert!(column > 1);
                assert!(message.contains("g[0][1][0][0]"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        match parse_connection("{\n  \"rank\": 1,\n  oops }") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let wrong_shape = MINIMAL.replace(r#"[["alpha"]]"#, r#"[["alpha", "1"]]"#);
        assert!(matches!(parse_connection(&wrong_shape), Err(Error::Parse { .. })));
    }
}
