//! Plain-text problem format.
//!
//! ```text
//! n m omega sigma            header; omega and sigma are "-" when absent
//! <m lines>                  rows of Φ, n values each
//! <1 line>                   b, m values
//! <1 line, if omega != ->    dense ground truth, n values
//! ```
//!
//! Values are separated by a single space and written as `{:.16e}`
//! (17 significant digits, which round-trips every `f64`). Lines end in `\n`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::{MeasurementMatrix, Problem, SparseSignal};
use crate::error::{Error, Result};

fn push_row(out: &mut String, values: &[f64]) {
    for (k, v) in values.iter().enumerate() {
        if k > 0 {
            out.push(' ');
        }
        write!(out, "{v:.16e}").unwrap();
    }
    out.push('\n');
}

impl Problem {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let omega = self.truth.as_ref().map_or("-".to_string(), |t| t.omega().to_string());
        let sigma = self.sigma.map_or("-".to_string(), |s| format!("{s:.16e}"));
        writeln!(out, "{} {} {} {}", self.n(), self.m(), omega, sigma).unwrap();
        for i in 0..self.m() {
            push_row(&mut out, self.phi.row(i));
        }
        push_row(&mut out, &self.b);
        if let Some(t) = &self.truth {
            push_row(&mut out, &t.dense());
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        parse(text, Path::new("<memory>"))
    }
}

fn parse(text: &str, path: &Path) -> Result<Problem> {
    let err = |line: usize, msg: String| Error::Parse {
        path: PathBuf::from(path),
        line,
        msg,
    };
    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l));

    let (ln, header) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 4 {
        return Err(err(ln, format!("expected 'n m omega sigma', got {header:?}")));
    }
    let parse_usize = |s: &str| s.parse::<usize>().map_err(|e| err(ln, format!("{s:?}: {e}")));
    let n = parse_usize(fields[0])?;
    let m = parse_usize(fields[1])?;
    let omega = match fields[2] {
        "-" => None,
        s => Some(parse_usize(s)?),
    };
    let sigma = match fields[3] {
        "-" => None,
        s => Some(s.parse::<f64>().map_err(|e| err(ln, format!("{s:?}: {e}")))?),
    };

    let mut read_row = |expected: usize| -> Result<(usize, Vec<f64>)> {
        let (ln, line) = lines.next().ok_or_else(|| err(0, "unexpected end of file".into()))?;
        let row = line
            .split_whitespace()
            .map(|tok| tok.parse::<f64>().map_err(|e| err(ln, format!("{tok:?}: {e}"))))
            .collect::<Result<Vec<f64>>>()?;
        if row.len() != expected {
            return Err(err(ln, format!("expected {expected} values, got {}", row.len())));
        }
        Ok((ln, row))
    };

    let mut entries = Vec::with_capacity(m * n);
    for _ in 0..m {
        entries.extend(read_row(n)?.1);
    }
    let phi = MeasurementMatrix::new(m, n, entries)?;
    let (_, b) = read_row(m)?;
    let truth = match omega {
        None => None,
        Some(omega) => {
            let (ln, dense) = read_row(n)?;
            let signal = SparseSignal::from_dense(&dense)?;
            if signal.omega() != omega {
                return Err(err(
                    ln,
                    format!("header says omega={omega}, truth has {} nonzeros", signal.omega()),
                ));
            }
            Some(signal)
        }
    };
    Problem::new(phi, b, truth, sigma)
}

pub fn write_problem(path: &Path, problem: &Problem) -> Result<()> {
    fs::write(path, problem.to_text()).map_err(|e| Error::io(path, e))
}

pub fn read_problem(path: &Path) -> Result<Problem> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::gen_instance;
    use crate::rng::RngSpec;
    use proptest::prelude::*;

    #[test]
    fn header_layout() {
        let p = gen_instance(6, 3, 2, 5.0, 0.001, RngSpec::new(1, 0)).unwrap();
        let text = p.to_text();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "6 3 2 1.0000000000000000e-3");
        assert_eq!(text.lines().count(), 1 + 3 + 1 + 1);
    }

    #[test]
    fn absent_fields_round_trip() {
        let p = gen_instance(6, 3, 2, 5.0, 0.0, RngSpec::new(1, 0)).unwrap();
        let bare = Problem::new(p.phi.clone(), p.b.clone(), None, None).unwrap();
        let text = bare.to_text();
        assert!(text.starts_with("6 3 - -\n"));
        assert_eq!(Problem::from_text(&text).unwrap(), bare);
    }

    #[test]
    fn rejects_truncated() {
        let p = gen_instance(6, 3, 2, 5.0, 0.0, RngSpec::new(1, 0)).unwrap();
        let text = p.to_text();
        let cut: String = text.lines().take(3).map(|l| format!("{l}\n")).collect();
        assert!(matches!(Problem::from_text(&cut), Err(Error::Parse { .. })));
    }

    #[test]
    fn rejects_omega_mismatch() {
        let p = gen_instance(6, 3, 2, 5.0, 0.0, RngSpec::new(1, 0)).unwrap();
        let text = p.to_text().replacen("6 3 2", "6 3 1", 1);
        assert!(Problem::from_text(&text).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn text_round_trip_is_exact(seed in any::<u64>(), n in 3usize..20, sigma in prop::sample::select(vec![0.0, 1e-3, 0.01])) {
            let m = 1 + (seed as usize % (n - 1));
            let omega = 1 + (seed as usize / 7 % m);
            let p = gen_instance(n, m, omega, 5.0, sigma, RngSpec::new(seed, 1)).unwrap();
            let back = Problem::from_text(&p.to_text()).unwrap();
            prop_assert_eq!(back, p);
        }
    }
}
