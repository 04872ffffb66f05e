//! Plain-text Coxeter system files.
//!
//! ```text
//! # comment lines start with '#'
//! rank=3
//! 3 4
//! 3
//! ```
//!
//! After the `rank=<k>` header come `k - 1` rows of the strict upper
//! triangle (row `i` lists `m[i][i+1..k]`). A row may also start with the
//! diagonal `1`. `inf` marks an infinite bond. Generator order, and hence
//! ShortLex order, is row order.

use crate::coxeter::{parse_label, render_label, CoxeterMatrix};
use crate::error::{Error, Result};

pub fn parse_coxeter_file(text: &str) -> Result<CoxeterMatrix> {
    let mut lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty Coxeter file".into()))?;
    let rank: usize = header
        .strip_prefix("rank")
        .and_then(|r| r.trim_start().strip_prefix('='))
        .and_then(|r| r.trim().parse().ok())
        .ok_or_else(|| Error::Parse(format!("expected `rank=<k>` header, got `{header}`")))?;
    if rank == 0 {
        return Err(Error::InvalidMatrix("rank must be at least 1".into()));
    }

    let mut upper = Vec::new();
    let rows: Vec<&str> = lines.collect();
    if rows.len() > rank {
        return Err(Error::Parse(format!("too many rows for rank {rank}")));
    }
    for i in 0..rank.saturating_sub(1) {
        let row = rows.get(i).ok_or_else(|| Error::Parse(format!("missing row {i}")))?;
        let mut labels = row
            .split_whitespace()
            .map(|t| parse_label(t).ok_or_else(|| Error::Parse(format!("bad label `{t}` in row {i}"))))
            .collect::<Result<Vec<u32>>>()?;
        let expected = rank - i - 1;
        if labels.len() == expected + 1 && labels[0] == 1 {
            labels.remove(0);
        }
        if labels.len() != expected {
            return Err(Error::Parse(format!("row {i} has {} labels, expected {expected}", labels.len())));
        }
        upper.extend(labels);
    }
    CoxeterMatrix::from_upper(rank, &upper)
}

pub fn render_coxeter_file(m: &CoxeterMatrix) -> String {
    let mut out = format!("rank={}\n", m.rank());
    for i in 0..m.rank().saturating_sub(1) {
        let row: Vec<String> = (i + 1..m.rank()).map(|j| render_label(m.get(i, j))).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::INF;

    #[test]
    fn parses_triangle_with_comments() {
        let m = parse_coxeter_file("# hyperbolic\nrank=3\n3 4\n3\n").unwrap();
        assert_eq!(m.get(0, 1), 3);
        assert_eq!(m.get(0, 2), 4);
        assert_eq!(m.get(1, 2), 3);
        assert_eq!(m, CoxeterMatrix::named("triangle-3-3-4").unwrap());
    }

    #[test]
    fn accepts_rows_with_diagonal() {
        let m = parse_coxeter_file("rank=2\n1 inf\n").unwrap();
        assert_eq!(m.get(0, 1), INF);
    }

    #[test]
    fn render_round_trips() {
        for name in ["pentagon", "A3", "affine-A2", "A1"] {
            let m = CoxeterMatrix::named(name).unwrap();
            assert_eq!(parse_coxeter_file(&render_coxeter_file(&m)).unwrap(), m);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_coxeter_file("rank=2\n").is_err());
        assert!(parse_coxeter_file("rank=2\n1\n").is_err());
        assert!(parse_coxeter_file("rnk=2\n3\n").is_err());
        assert!(parse_coxeter_file("rank=3\n3 x\n3\n").is_err());
    }
}
