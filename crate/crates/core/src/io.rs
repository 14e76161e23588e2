//! The plain-text algebra format and the JSON report format.
//!
//! An algebra file looks like
//!
//! ```text
//! FLIE 1
//! dim 5
//! char 3
//! label model5
//! # c_ij^k = coeff, i < j
//! 1 3 2 1
//! 1 4 3 1
//! 1 5 4 1
//! ```
//!
//! `char 0` selects the rationals, whose coefficients may be written `num/den`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::StructureTable;
use crate::classify::{matrix_from_rows, matrix_rows, reverify_report, ClassificationReport, VerifyReport};
use crate::error::{Error, Result};
use crate::field::{Field, Fp, Rationals};
use crate::invariants::Fingerprint;
use crate::morphism::{verify_isomorphism, verify_isotopism, IsoWitness};

pub const FORMAT_TAG: &str = "FLIE 1";
pub const REPORT_FORMAT: &str = "filiform-report/1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// An algebra read from a file, over whichever field the header names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyTable {
    Fp(StructureTable<Fp>),
    Rational(StructureTable<Rationals>),
}

impl AnyTable {
    pub fn dim(&self) -> usize {
        match self {
            AnyTable::Fp(g) => g.dim(),
            AnyTable::Rational(g) => g.dim(),
        }
    }

    pub fn render(&self) -> String {
        match self {
            AnyTable::Fp(g) => render_algebra(g),
            AnyTable::Rational(g) => render_algebra(g),
        }
    }

    pub fn into_fp(self) -> Result<StructureTable<Fp>> {
        match self {
            AnyTable::Fp(g) => Ok(g),
            AnyTable::Rational(_) => Err(Error::UnsupportedField("this operation needs a prime field".into())),
        }
    }
}

fn parse_err(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
    }
}

/// Parse an algebra file. With `check_jacobi` false the table is accepted
/// even if it is not a Lie algebra.
pub fn parse_algebra(text: &str, check_jacobi: bool) -> Result<AnyTable> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let mut header = |key: &str| -> Result<(usize, String)> {
        let (no, l) = lines.next().ok_or_else(|| parse_err(0, format!("missing `{key}` line")))?;
        Ok((no, l.to_string()))
    };
    let (no, tag) = header("FLIE")?;
    if tag.split_whitespace().collect::<Vec<_>>() != ["FLIE", "1"] {
        return Err(parse_err(no, "expected `FLIE 1`"));
    }
    let mut value = |key: &str| -> Result<u32> {
        let (no, l) = header(key)?;
        match l.split_whitespace().collect::<Vec<_>>()[..] {
            [k, v] if k == key => v.parse().map_err(|_| parse_err(no, format!("bad {key} value `{v}`"))),
            _ => Err(parse_err(no, format!("expected `{key} <n>`"))),
        }
    };
    let dim = value("dim")? as usize;
    let p = value("char")?;
    if dim == 0 {
        return Err(parse_err(2, "dimension must be positive"));
    }
    let rest: Vec<(usize, &str)> = lines.collect();
    if p == 0 {
        parse_body(Rationals, dim, &rest, check_jacobi).map(AnyTable::Rational)
    } else {
        let f = Fp::new(p).map_err(|e| parse_err(3, e.to_string()))?;
        parse_body(f, dim, &rest, check_jacobi).map(AnyTable::Fp)
    }
}

fn parse_body<F: Field>(
    field: F,
    dim: usize,
    lines: &[(usize, &str)],
    check_jacobi: bool,
) -> Result<StructureTable<F>> {
    let mut label = None;
    let mut seen = BTreeSet::new();
    let mut entries = Vec::new();
    for &(no, l) in lines {
        if let Some(rest) = l.strip_prefix("label") {
            if !entries.is_empty() || label.is_some() {
                return Err(parse_err(no, "`label` must precede the brackets and appear once"));
            }
            label = Some(rest.trim().to_string());
            continue;
        }
        let parts: Vec<&str> = l.split_whitespace().collect();
        let [i, j, k, c] = parts[..] else {
            return Err(parse_err(no, "expected `i j k coeff`"));
        };
        let idx = |s: &str| -> Result<usize> {
            match s.parse::<usize>() {
                Ok(v) if (1..=dim).contains(&v) => Ok(v),
                _ => Err(parse_err(no, format!("index `{s}` outside 1..={dim}"))),
            }
        };
        let (i, j, k) = (idx(i)?, idx(j)?, idx(k)?);
        if i >= j {
            return Err(parse_err(no, format!("bracket ({i},{j}) needs i < j")));
        }
        if !seen.insert((i, j, k)) {
            return Err(parse_err(no, format!("duplicate entry ({i},{j},{k})")));
        }
        let c = field
            .parse(c)
            .ok_or_else(|| parse_err(no, format!("coefficient `{c}` is not a canonical field element")))?;
        entries.push((i, j, k, c));
    }
    let mut g = if check_jacobi {
        StructureTable::new(field, dim, &entries)?
    } else {
        StructureTable::new_unchecked(field, dim, &entries)?
    };
    if let Some(l) = label {
        g = g.with_label(l);
    }
    Ok(g)
}

/// Canonical text form: sorted `(i, j, k)`, zero entries omitted.
pub fn render_algebra<F: Field>(g: &StructureTable<F>) -> String {
    let mut s = format!("{FORMAT_TAG}\ndim {}\nchar {}\n", g.dim(), g.field().spec().characteristic());
    if let Some(l) = g.label() {
        s += &format!("label {l}\n");
    }
    for (i, j, k, c) in g.nonzero_constants() {
        s += &format!("{i} {j} {k} {}\n", g.field().render(&c));
    }
    s
}

pub fn sha256_hex(data: &[u8]) -> String {
    Sha256::digest(data).iter().map(|b| format!("{b:02x}")).collect()
}

/// An algebra referenced by label and the hash of its canonical rendering,
/// which is embedded so that witnesses can be checked offline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraRef {
    pub label: Option<String>,
    pub sha256: String,
    pub text: String,
}

impl AlgebraRef {
    pub fn of<F: Field>(g: &StructureTable<F>) -> Self {
        let text = render_algebra(g);
        Self {
            label: g.label().map(str::to_string),
            sha256: sha256_hex(text.as_bytes()),
            text,
        }
    }

    pub fn table(&self) -> Result<AnyTable> {
        if sha256_hex(self.text.as_bytes()) != self.sha256 {
            return Err(Error::Report("algebra hash does not match".into()));
        }
        parse_algebra(&self.text, true)
    }
}

/// Outcome of `iso` on two algebra files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoReport {
    pub characteristic: u32,
    pub first: AlgebraRef,
    pub second: AlgebraRef,
    pub isomorphic: bool,
    /// Columns are the images of the basis of the first algebra.
    pub witness: Option<Vec<Vec<u32>>>,
    pub certificate: Option<String>,
}

impl IsoReport {
    pub fn from_witness(a: &StructureTable<Fp>, b: &StructureTable<Fp>, w: &IsoWitness<Fp>) -> Self {
        Self {
            characteristic: a.field().p(),
            first: AlgebraRef::of(a),
            second: AlgebraRef::of(b),
            isomorphic: true,
            witness: Some(matrix_rows(&w.matrix)),
            certificate: None,
        }
    }

    pub fn summary(&self) -> String {
        match (&self.witness, &self.certificate) {
            (Some(w), _) => {
                let rows: Vec<String> = w
                    .iter()
                    .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
                    .collect();
                format!("isomorphic\nwitness (columns are images of e_1..e_n):\n  {}\n", rows.join("\n  "))
            }
            (None, Some(c)) => format!("not isomorphic: {c}\n"),
            (None, None) => "not isomorphic\n".into(),
        }
    }
}

/// The fingerprint of a single algebra file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantsReport {
    pub algebra: AlgebraRef,
    pub fingerprint: Fingerprint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum ReportBody {
    Classification(ClassificationReport),
    VerifyPaper(VerifyReport),
    Isomorphism(IsoReport),
    Invariants(InvariantsReport),
}

impl ReportBody {
    pub fn summary(&self) -> String {
        match self {
            ReportBody::Classification(r) => r.summary(),
            ReportBody::VerifyPaper(r) => r.summary(),
            ReportBody::Isomorphism(r) => r.summary(),
            ReportBody::Invariants(r) => format!("{:#?}\n", r.fingerprint),
        }
    }
}

/// The self-describing report document written by the command-line tool.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub format: String,
    pub tool_version: String,
    pub seed: Option<u64>,
    pub body: ReportBody,
    pub summary: String,
    /// SHA-256 of the compact JSON of `body`.
    pub content_sha256: String,
}

impl ReportFile {
    pub fn new(body: ReportBody, seed: Option<u64>) -> Result<Self> {
        let hash = body_hash(&body)?;
        Ok(Self {
            format: REPORT_FORMAT.into(),
            tool_version: TOOL_VERSION.into(),
            seed,
            summary: body.summary(),
            body,
            content_sha256: hash,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Report(e.to_string()))
    }

    /// Parse a report, check its hash and re-verify every witness in it.
    pub fn load(json: &str) -> Result<Self> {
        let r: Self = serde_json::from_str(json).map_err(|e| Error::Report(e.to_string()))?;
        if r.format != REPORT_FORMAT {
            return Err(Error::Report(format!("unknown format `{}`", r.format)));
        }
        if body_hash(&r.body)? != r.content_sha256 {
            return Err(Error::Report("content hash does not match".into()));
        }
        r.reverify()?;
        Ok(r)
    }

    /// Number of witnesses re-verified.
    pub fn reverify(&self) -> Result<usize> {
        match &self.body {
            ReportBody::Classification(c) => reverify_report(c),
            ReportBody::Isomorphism(r) => {
                let Some(w) = &r.witness else { return Ok(0) };
                let a = r.first.table()?.into_fp()?;
                let b = r.second.table()?.into_fp()?;
                if !verify_isomorphism(&a, &b, &matrix_from_rows(r.characteristic, w)?)? {
                    return Err(Error::Report("isomorphism witness fails".into()));
                }
                Ok(1)
            }
            _ => Ok(0),
        }
    }
}

fn body_hash(body: &ReportBody) -> Result<String> {
    let s = serde_json::to_string(body).map_err(|e| Error::Report(e.to_string()))?;
    Ok(sha256_hex(s.as_bytes()))
}

/// A stored isotopism `(f, g, h)` over `F_p`, as rows of matrices whose
/// columns are images of basis vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsotopyWitnessFile {
    pub characteristic: u32,
    pub f: Vec<Vec<u32>>,
    pub g: Vec<Vec<u32>>,
    pub h: Vec<Vec<u32>>,
}

impl IsotopyWitnessFile {
    pub fn parse(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Report(e.to_string()))
    }

    /// Whether the triple is an isotopism from `a` to `b`.
    pub fn verify(&self, a: &StructureTable<Fp>, b: &StructureTable<Fp>) -> Result<bool> {
        if a.field().p() != self.characteristic || b.field().p() != self.characteristic {
            return Err(Error::FieldMismatch);
        }
        let m = |rows: &[Vec<u32>]| -> Result<_> {
            let m = matrix_from_rows(self.characteristic, rows)?;
            if m.rows() != a.dim() || m.cols() != a.dim() {
                return Err(Error::DimensionMismatch {
                    expected: a.dim(),
                    found: m.rows(),
                });
            }
            Ok(m)
        };
        let (f, g, h) = (m(&self.f)?, m(&self.g)?, m(&self.h)?);
        if self.f == self.g && self.g == self.h {
            return verify_isomorphism(a, b, &f);
        }
        verify_isotopism(a, b, &f, &g, &h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::g6;

    #[test]
    fn minimal_file_is_abelian() {
        let g = parse_algebra("FLIE 1\ndim 2\nchar 3\n", true).unwrap().into_fp().unwrap();
        assert_eq!(g.dim(), 2);
        assert!(g.nonzero_constants().is_empty());
        assert_eq!(g.field().p(), 3);
    }

    #[test]
    fn render_g6_110() {
        let text = render_algebra(&g6(&Fp::new(2).unwrap(), 1, 1, 0));
        for line in ["1 3 2 1", "4 5 2 1", "4 6 3 1", "5 6 3 1", "5 6 4 1"] {
            assert!(text.lines().any(|l| l == line), "{line}");
        }
        let back = parse_algebra(&text, true).unwrap();
        assert_eq!(back.render(), text);
    }

    #[test]
    fn format_errors() {
        let base = "FLIE 1\ndim 3\nchar 3\n";
        let bad = |body: &str| parse_algebra(&format!("{base}{body}"), false).unwrap_err();
        assert!(matches!(bad("2 1 3 1\n"), Error::Parse { line: 4, .. }));
        assert!(matches!(bad("1 2 3 1\n1 2 3 2\n"), Error::Parse { line: 5, .. }));
        assert!(matches!(bad("1 2 3 3\n"), Error::Parse { .. }));
        assert!(matches!(bad("1 2 4 1\n"), Error::Parse { .. }));
        assert!(matches!(bad("1 2 3\n"), Error::Parse { .. }));
        assert!(matches!(parse_algebra("FLIE 2\ndim 1\nchar 2\n", true), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_algebra("FLIE 1\ndim 2\nchar 4\n", true), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn jacobi_checked_unless_disabled() {
        let text = "FLIE 1\ndim 3\nchar 5\n1 2 3 1\n1 3 1 1\n2 3 1 1\n";
        assert!(matches!(parse_algebra(text, true), Err(Error::JacobiViolation(..))));
        assert!(parse_algebra(text, false).is_ok());
    }

    #[test]
    fn rationals_round_trip() {
        let text = "FLIE 1\ndim 3\nchar 0\nlabel heis\n# comment\n1 2 3 2/4\n";
        let g = parse_algebra(text, true).unwrap();
        let r = g.render();
        assert!(r.contains("1 2 3 1/2"));
        assert!(r.contains("label heis"));
        assert_eq!(parse_algebra(&r, true).unwrap(), g);
    }

    #[test]
    fn tampered_report_is_rejected() {
        let body = ReportBody::Classification(
            crate::classify::classify(6, 2, &Default::default()).unwrap(),
        );
        let json = ReportFile::new(body, Some(1)).unwrap().to_json().unwrap();
        let loaded = ReportFile::load(&json).unwrap();
        assert!(loaded.reverify().unwrap() > 0);
        let tampered = json.replacen("\"candidate_count\": 8", "\"candidate_count\": 9", 1);
        assert!(matches!(ReportFile::load(&tampered), Err(Error::Report(_))));
    }
}
