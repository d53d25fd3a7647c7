//! Imported character data: a header line
//! `# p=3; pp=4; a=[0,0]; b=[1,0]; source=...` followed by
//! `degree,coefficient` rows. Blank lines and further `#` lines are skipped.

use num_bigint::BigInt;

use crate::characters::FfjmmLabel;
use crate::error::{param, Result};
use crate::qseries::TruncatedSeries;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterData {
    pub label: FfjmmLabel,
    pub source: String,
    /// Truncated at the largest listed degree; unlisted degrees are zero.
    pub series: TruncatedSeries,
}

impl CharacterData {
    /// The label must be admissible (checked on parse) and lie in the
    /// `τ`/`σ` orbit of `expected`.
    pub fn check_against(&self, expected: &FfjmmLabel) -> Result<()> {
        if (self.label.p, self.label.pp) != (expected.p, expected.pp) {
            return param(format!(
                "character data is for (p, p′) = ({}, {}), expected ({}, {})",
                self.label.p, self.label.pp, expected.p, expected.pp
            ));
        }
        if !expected.orbit().contains(&(self.label.abar.clone(), self.label.bbar.clone())) {
            return param(format!(
                "character label ā={:?}, b̄={:?} is not in the τ/σ orbit of ā={:?}, b̄={:?}",
                self.label.abar, self.label.bbar, expected.abar, expected.bbar
            ));
        }
        Ok(())
    }
}

fn parse_vector(s: &str) -> Result<Vec<i64>> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| crate::Error::Parameter(format!("expected [..], got {s:?}")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|v| v.trim().parse().or_else(|_| param(format!("bad integer {v:?} in label vector"))))
        .collect()
}

fn parse_int(s: &str) -> Result<i64> {
    s.trim().parse().or_else(|_| param(format!("bad integer {s:?} in header")))
}

pub fn parse_character_file(text: &str) -> Result<CharacterData> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines
        .next()
        .and_then(|l| l.strip_prefix('#'))
        .ok_or_else(|| crate::Error::Parameter("character file must start with a # header".into()))?;
    let (mut p, mut pp, mut a, mut b, mut source) = (None, None, None, None, None);
    for field in header.split(';') {
        let field = field.trim();
        if field.is_empty() {
            continue;
        }
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| crate::Error::Parameter(format!("header field {field:?} lacks '='")))?;
        match key.trim() {
            "p" => p = Some(parse_int(value)?),
            "pp" => pp = Some(parse_int(value)?),
            "a" => a = Some(parse_vector(value)?),
            "b" => b = Some(parse_vector(value)?),
            "source" => source = Some(value.trim().to_string()),
            other => return param(format!("unknown header field {other:?}")),
        }
    }
    let missing = |name: &str| crate::Error::Parameter(format!("header lacks {name}"));
    let label = FfjmmLabel::new(
        p.ok_or_else(|| missing("p"))?,
        pp.ok_or_else(|| missing("pp"))?,
        a.ok_or_else(|| missing("a"))?,
        b.ok_or_else(|| missing("b"))?,
    )?;
    let source = source.ok_or_else(|| missing("source"))?;

    let mut rows: Vec<(usize, BigInt)> = Vec::new();
    for line in lines {
        if line.starts_with('#') {
            continue;
        }
        let (d, c) = line
            .split_once(',')
            .ok_or_else(|| crate::Error::Parameter(format!("row {line:?} is not degree,coefficient")))?;
        let d: usize = d.trim().parse().or_else(|_| param(format!("bad degree in row {line:?}")))?;
        let c: BigInt = c.trim().parse().or_else(|_| param(format!("bad coefficient in row {line:?}")))?;
        if rows.iter().any(|(e, _)| *e == d) {
            return param(format!("degree {d} listed twice"));
        }
        rows.push((d, c));
    }
    let order = rows
        .iter()
        .map(|(d, _)| *d)
        .max()
        .ok_or_else(|| crate::Error::Parameter("character file has no coefficient rows".into()))?;
    let mut coeffs = vec![BigInt::from(0); order + 1];
    for (d, c) in rows {
        coeffs[d] = c;
    }
    Ok(CharacterData { label, source, series: TruncatedSeries::from_coeffs(coeffs, order) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_header_and_rows() {
        let text = "# p=3; pp=4; a=[0,0]; b=[1,0]; source=hand\n0,1\n2,1\n1,0\n";
        let data = parse_character_file(text).unwrap();
        assert_eq!(data.label, FfjmmLabel::new(3, 4, vec![0, 0], vec![1, 0]).unwrap());
        assert_eq!(data.source, "hand");
        assert_eq!(data.series.to_i64s(), vec![1, 0, 1]);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(parse_character_file("0,1\n").is_err());
        assert!(parse_character_file("# p=3; pp=4; a=[1,0]; b=[0,0]; source=x\n0,1\n").is_err());
        assert!(parse_character_file("# p=3; pp=4; a=[0,0]; b=[1,0]\n0,1\n").is_err());
        assert!(parse_character_file("# p=3; pp=4; a=[0,0]; b=[1,0]; source=x\n").is_err());
    }

    #[test]
    fn orbit_check() {
        let expected = FfjmmLabel::new(3, 4, vec![0, 0], vec![1, 0]).unwrap();
        let moved = parse_character_file("# p=3; pp=4; a=[0,0]; b=[0,1]; source=x\n0,1\n").unwrap();
        assert_eq!(moved.label, expected.tau().tau());
        assert!(moved.check_against(&expected).is_ok());
        let other = parse_character_file("# p=3; pp=5; a=[0,0]; b=[1,0]; source=x\n0,1\n").unwrap();
        assert!(other.check_against(&expected).is_err());
    }
}
