//! Density-matrix files.
//!
//! JSON: `{"m": 2, "n": 2, "re": [[..], ..], "im": [[..], ..]}` with `m·n`
//! rows of `m·n` numbers each.
//!
//! Text: a first line `m n`, then `m·n` lines of `m·n` whitespace-separated
//! `re,im` pairs.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::matops::{BipartiteDims, BipartiteState, ComplexMatrix};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateFormat {
    Json,
    Text,
}

impl StateFormat {
    /// `.json` files and content starting with `{` are JSON; everything else is text.
    pub fn detect(path: &Path, content: &str) -> Self {
        let json_ext = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        if json_ext || content.trim_start().starts_with('{') {
            StateFormat::Json
        } else {
            StateFormat::Text
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonState {
    m: usize,
    n: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn parse_json(content: &str) -> Result<BipartiteState> {
    let js: JsonState = serde_json::from_str(content).map_err(|e| parse_err(e.line(), e.column(), e.to_string()))?;
    let dims = BipartiteDims::new(js.m, js.n)?;
    let d = dims.total();
    for (name, rows) in [("re", &js.re), ("im", &js.im)] {
        if rows.len() != d {
            return Err(parse_err(0, 0, format!("`{name}` has {} rows, expected m·n = {d}", rows.len())));
        }
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != d) {
            return Err(parse_err(0, 0, format!("`{name}` row {i} has {} entries, expected {d}", r.len())));
        }
    }
    let mat = ComplexMatrix::from_fn(d, d, |i, j| Complex64::new(js.re[i][j], js.im[i][j]));
    BipartiteState::new(mat, dims)
}

fn parse_text(content: &str) -> Result<BipartiteState> {
    let mut lines = content
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, 1, "empty file"))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 2 {
        return Err(parse_err(hl, 1, "header must be `m n`"));
    }
    let num = |tok: &str, col: usize| tok.parse::<usize>().map_err(|e| parse_err(hl, col, format!("`{tok}`: {e}")));
    let dims = BipartiteDims::new(num(head[0], 1)?, num(head[1], 2)?)?;
    let d = dims.total();
    let mut data = Vec::with_capacity(d * d);
    let mut rows = 0;
    for (ln, line) in lines {
        rows += 1;
        if rows > d {
            return Err(parse_err(ln, 1, format!("more than m·n = {d} matrix rows")));
        }
        let mut count = 0;
        for (start, tok) in tokens(line) {
            count += 1;
            let col = start + 1;
            let (re, im) = tok
                .split_once(',')
                .ok_or_else(|| parse_err(ln, col, format!("expected `re,im`, found `{tok}`")))?;
            let f = |s: &str| s.trim().parse::<f64>().map_err(|e| parse_err(ln, col, format!("`{s}`: {e}")));
            data.push(Complex64::new(f(re)?, f(im)?));
        }
        if count != d {
            return Err(parse_err(ln, line.len() + 1, format!("row has {count} entries, expected m·n = {d}")));
        }
    }
    if rows != d {
        return Err(parse_err(content.lines().count() + 1, 1, format!("found {rows} matrix rows, expected m·n = {d}")));
    }
    BipartiteState::new(ComplexMatrix::from_vec(d, d, data)?, dims)
}

/// Whitespace-separated tokens with their byte offsets.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    line.split_whitespace()
        .map(move |t| (t.as_ptr() as usize - line.as_ptr() as usize, t))
}

pub fn parse_state(content: &str, format: StateFormat) -> Result<BipartiteState> {
    match format {
        StateFormat::Json => parse_json(content),
        StateFormat::Text => parse_text(content),
    }
}

pub fn load_state(path: &Path) -> Result<BipartiteState> {
    let content = fs::read_to_string(path)?;
    parse_state(&content, StateFormat::detect(path, &content))
}

pub fn format_state(state: &BipartiteState, format: StateFormat) -> String {
    let dims = state.dims();
    let d = dims.total();
    let mat = state.mat();
    match format {
        StateFormat::Json => {
            let js = JsonState {
                m: dims.m,
                n: dims.n,
                re: (0..d).map(|i| (0..d).map(|j| mat[(i, j)].re).collect()).collect(),
                im: (0..d).map(|i| (0..d).map(|j| mat[(i, j)].im).collect()).collect(),
            };
            serde_json::to_string_pretty(&js).expect("plain numbers serialise") + "\n"
        }
        StateFormat::Text => {
            let mut out = format!("{} {}\n", dims.m, dims.n);
            for i in 0..d {
                let row: Vec<String> = (0..d).map(|j| format!("{:e},{:e}", mat[(i, j)].re, mat[(i, j)].im)).collect();
                out.push_str(&row.join(" "));
                out.push('\n');
            }
            out
        }
    }
}

pub fn save_state(state: &BipartiteState, path: &Path, format: StateFormat) -> Result<()> {
    fs::write(path, format_state(state, format))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matops::StateVector;
    use crate::oracles::{random_state, StateKind};
    use crate::Seed;

    const BELL: &str = r#"{"m": 2, "n": 2,
        "re": [[0.5, 0, 0, 0.5], [0, 0, 0, 0], [0, 0, 0, 0], [0.5, 0, 0, 0.5]],
        "im": [[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]}"#;

    #[test]
    fn bell_json() {
        let s = parse_state(BELL, StateFormat::Json).unwrap();
        assert!((s.mat().trace().re - 1.0).abs() < 1e-15);
        let psi = StateVector::from_schmidt(s.dims(), &[0.5, 0.5]).unwrap();
        assert!(s.mat().max_abs_diff(BipartiteState::from_pure(&psi).mat()) < 1e-15);
    }

    #[test]
    fn trace_violation() {
        let bad = BELL.replace("[0.5, 0, 0, 0.5], [0, 0", "[0.49, 0, 0, 0.5], [0, 0").replacen("[0.5, 0, 0, 0.5]]", "[0.5, 0, 0, 0.49]]", 1);
        match parse_state(&bad, StateFormat::Json) {
            Err(Error::Invariant { invariant, deviation }) => {
                assert_eq!(invariant, "unit trace");
                assert!((deviation - 0.02).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn size_mismatch_is_parse_error() {
        let bad = BELL.replace(r#""m": 2, "n": 2"#, r#""m": 2, "n": 3"#);
        assert!(matches!(parse_state(&bad, StateFormat::Json), Err(Error::Parse { .. })));
        let txt = "2 2\n1,0 0,0 0,0 0,0\n0,0 0,0 0,0 0,0\n0,0 0,0 0,0\n";
        match parse_state(txt, StateFormat::Text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn text_errors_carry_position() {
        let txt = "2 2\n1,0 0,0 0,0 0,0\n0,0 0;0 0,0 0,0\n";
        match parse_state(txt, StateFormat::Text) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 5)),
            other => panic!("{other:?}"),
        }
        match parse_state("{\"m\": 2,, }", StateFormat::Json) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 9)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn round_trip_both_formats() {
        let dims = BipartiteDims::new(2, 3).unwrap();
        let s = random_state(dims, StateKind::MixedRank(3), Seed(6)).unwrap();
        for f in [StateFormat::Json, StateFormat::Text] {
            let back = parse_state(&format_state(&s, f), f).unwrap();
            assert_eq!(back.mat(), s.mat(), "{f:?}");
        }
    }

    #[test]
    fn detection() {
        assert_eq!(StateFormat::detect(Path::new("a.JSON"), ""), StateFormat::Json);
        assert_eq!(StateFormat::detect(Path::new("a.txt"), "  {"), StateFormat::Json);
        assert_eq!(StateFormat::detect(Path::new("a.txt"), "2 2"), StateFormat::Text);
    }
}
