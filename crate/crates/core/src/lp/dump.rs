//! Plain-text LP format, one item per line:
//!
//! ```text
//! vars 4
//! maximize 3/2 -1/2 -1/2 -1/2
//! free 0 2
//! 1 -1 0 0 >= 0
//! 2 0 0 -2 = 1
//! ```
//!
//! Blank lines and text after `#` are ignored. `free` is optional.

use super::{Constraint, LinearProgram, Relation, Sense};
use crate::error::{Error, Result};
use crate::number::{format_rational, parse_rational, Rational};

fn err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {line}: {msg}"))
}

fn numbers(line: usize, toks: &[&str], n: usize) -> Result<Vec<Rational>> {
    if toks.len() != n {
        return Err(err(line, format!("expected {n} coefficients, found {}", toks.len())));
    }
    toks.iter().map(|t| parse_rational(t).map_err(|e| err(line, e))).collect()
}

pub fn parse_dump(text: &str) -> Result<LinearProgram> {
    let mut lp: Option<LinearProgram> = None;
    let mut nvars = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        match toks[0] {
            "vars" => {
                let n: usize = toks.get(1).and_then(|t| t.parse().ok()).ok_or_else(|| err(line, "bad vars line"))?;
                nvars = Some(n);
            }
            "maximize" | "minimize" => {
                let n = nvars.ok_or_else(|| err(line, "objective before vars"))?;
                let sense = if toks[0] == "maximize" { Sense::Maximize } else { Sense::Minimize };
                lp = Some(LinearProgram::new(n, sense, numbers(line, &toks[1..], n)?));
            }
            "free" => {
                let lp = lp.as_mut().ok_or_else(|| err(line, "free before objective"))?;
                for t in &toks[1..] {
                    let j: usize = t.parse().map_err(|_| err(line, format!("bad index {t:?}")))?;
                    if j >= lp.nvars {
                        return Err(err(line, format!("index {j} out of range")));
                    }
                    lp.free[j] = true;
                }
            }
            _ => {
                let lp = lp.as_mut().ok_or_else(|| err(line, "constraint before objective"))?;
                let n = lp.nvars;
                if toks.len() != n + 2 {
                    return Err(err(line, format!("expected {n} coefficients, a relation and a right-hand side")));
                }
                let rel = match toks[n] {
                    "<=" => Relation::Le,
                    "=" | "==" => Relation::Eq,
                    ">=" => Relation::Ge,
                    other => return Err(err(line, format!("unknown relation {other:?}"))),
                };
                let coeffs = numbers(line, &toks[..n], n)?;
                let rhs = parse_rational(toks[n + 1]).map_err(|e| err(line, e))?;
                lp.constraints.push(Constraint::new(coeffs, rel, rhs));
            }
        }
    }
    lp.ok_or_else(|| Error::Parse("missing objective line".into()))
}

pub fn write_dump(lp: &LinearProgram) -> String {
    let join = |v: &[Rational]| v.iter().map(format_rational).collect::<Vec<_>>().join(" ");
    let mut out = format!("vars {}\n", lp.nvars);
    let sense = if lp.sense == Sense::Maximize { "maximize" } else { "minimize" };
    out.push_str(&format!("{sense} {}\n", join(&lp.objective)));
    let free: Vec<String> = (0..lp.nvars).filter(|&j| lp.free[j]).map(|j| j.to_string()).collect();
    if !free.is_empty() {
        out.push_str(&format!("free {}\n", free.join(" ")));
    }
    for c in &lp.constraints {
        out.push_str(&format!("{} {} {}\n", join(&c.coeffs), c.rel.symbol(), format_rational(&c.rhs)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::rat;

    const FIRST: &str = "\
# four-cycle, first ordering
vars 4
maximize 3/2 -1/2 -1/2 -1/2
1 -1 0 0 >= 0
0 1 -1 0 >= 0
0 0 1 -1 >= 0
1 -3 1 1 <= 0
2 0 0 -2 = 1
";

    #[test]
    fn parse_solve_and_roundtrip() {
        let lp = parse_dump(FIRST).unwrap();
        assert_eq!(lp.solve().unwrap().value(), Some(&rat(2, 3)));
        assert_eq!(parse_dump(&write_dump(&lp)).unwrap(), lp);
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_dump("vars 2\nmaximize 1\n").is_err());
        assert!(parse_dump("vars 1\nmaximize 1\n1 < 2\n").is_err());
        assert!(parse_dump("1 >= 0\n").is_err());
        assert!(parse_dump("vars 1\nmaximize 1\nfree 3\n").is_err());
    }
}
