//! File formats: JSON set files and JSON-lines certificate records.
//!
//! A set file is `{"p": 2, "q": 3, "multiset": false, "elements": [...]}`
//! where each element is `[[u1, u2], v]`, or `[[[u1, u2], v], count]` in a
//! multiset. Writers emit elements in ascending index order.
//!
//! A certificate record is one JSON object per line with a `"schema": 1`
//! field. Positive records carry a witness that can be re-verified; negative
//! records carry the number of search nodes explored.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error;
use crate::group::{Element, Group, GroupSpec, Multiset, SubsetMask};
use crate::spectral::{find_spectrum, verify_spectral_pair, SpectralCertificate};
use crate::tiling::{find_complement, verify_tiling, TilingCertificate};
use crate::Outcome;

pub const CERTIFICATE_SCHEMA: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("element {entry}: {coordinate} = {value} is out of range 0..{bound}")]
    Range {
        entry: usize,
        coordinate: &'static str,
        value: i64,
        bound: u64,
    },
    #[error("element {entry}: duplicate element {element} in a set file")]
    DuplicateElement { entry: usize, element: Element },
    #[error("invalid record: {0}")]
    Record(String),
    #[error(transparent)]
    Group(#[from] Error),
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        FormatError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

/// Contents of a set file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetContents {
    Set(SubsetMask),
    Multiset(Multiset),
}

impl SetContents {
    pub fn to_multiset(&self) -> Multiset {
        match self {
            SetContents::Set(s) => s.to_multiset(),
            SetContents::Multiset(m) => m.clone(),
        }
    }

    /// The set itself, or the support of a multiset.
    pub fn support(&self) -> SubsetMask {
        match self {
            SetContents::Set(s) => *s,
            SetContents::Multiset(m) => m.support(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFile {
    pub group: GroupSpec,
    pub contents: SetContents,
}

type Coord = ([i64; 2], i64);

#[derive(Deserialize)]
#[serde(untagged)]
enum RawEntry {
    Plain(Coord),
    Counted((Coord, i64)),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSetFile {
    p: u64,
    q: u64,
    #[serde(default)]
    multiset: bool,
    elements: Vec<RawEntry>,
}

type OutCoord = ([u32; 2], u32);

#[derive(Serialize)]
#[serde(untagged)]
enum OutEntry {
    Plain(OutCoord),
    Counted((OutCoord, u64)),
}

#[derive(Serialize)]
struct OutSetFile {
    p: usize,
    q: usize,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    multiset: bool,
    elements: Vec<OutEntry>,
}

fn check_coord(spec: &GroupSpec, entry: usize, c: Coord) -> Result<Element, FormatError> {
    let ([u1, u2], v) = c;
    let p = spec.p() as u64;
    let q = spec.q() as u64;
    for (name, value, bound) in [("u1", u1, p), ("u2", u2, p), ("v", v, q)] {
        if value < 0 || value as u64 >= bound {
            return Err(FormatError::Range {
                entry,
                coordinate: name,
                value,
                bound,
            });
        }
    }
    Ok(Element::new(u1 as u32, u2 as u32, v as u32))
}

fn out_coord(e: Element) -> OutCoord {
    ([e.u1, e.u2], e.v)
}

/// Parses and validates a set file.
pub fn parse_set_file(bytes: &[u8]) -> Result<SetFile, FormatError> {
    let raw: RawSetFile = serde_json::from_slice(bytes)?;
    let group = GroupSpec::new(raw.p, raw.q)?;
    let n = group.order();
    let mut counts = Multiset::zero(n);
    for (entry, e) in raw.elements.into_iter().enumerate() {
        let (coord, count) = match e {
            RawEntry::Plain(c) => (c, 1),
            RawEntry::Counted((c, k)) => (c, k),
        };
        let element = check_coord(&group, entry, coord)?;
        if count < 1 {
            return Err(FormatError::Range {
                entry,
                coordinate: "count",
                value: count,
                bound: u64::MAX,
            });
        }
        let i = group.index(element);
        if !raw.multiset && (count > 1 || counts.count(i) > 0) {
            return Err(FormatError::DuplicateElement { entry, element });
        }
        counts.add(i, count as u64);
    }
    let contents = if raw.multiset {
        SetContents::Multiset(counts)
    } else {
        SetContents::Set(counts.support())
    };
    Ok(SetFile { group, contents })
}

/// Serializes a set file, elements ascending by index.
pub fn write_set_file(file: &SetFile) -> String {
    let spec = &file.group;
    let (multiset, elements) = match &file.contents {
        SetContents::Set(s) => (
            false,
            s.iter()
                .map(|i| OutEntry::Plain(out_coord(spec.element(i))))
                .collect(),
        ),
        SetContents::Multiset(m) => (
            true,
            m.entries()
                .map(|(i, c)| OutEntry::Counted((out_coord(spec.element(i)), c)))
                .collect(),
        ),
    };
    let out = OutSetFile {
        p: spec.p(),
        q: spec.q(),
        multiset,
        elements,
    };
    serde_json::to_string(&out).expect("set file serializes") + "\n"
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    Spectrum,
    Complement,
    NoSpectrum,
    NoComplement,
    Violation,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exhaustion {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum_nodes: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complement_nodes: Option<u64>,
}

/// One line of a certificate file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateRecord {
    pub schema: u32,
    pub kind: CertificateKind,
    pub group: GroupSpec,
    pub subject: Vec<OutCoord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<OutCoord>>,
    pub exhaustion: Exhaustion,
    pub tool_version: String,
}

fn coords(spec: &GroupSpec, s: &SubsetMask) -> Vec<OutCoord> {
    s.iter().map(|i| out_coord(spec.element(i))).collect()
}

impl CertificateRecord {
    fn new(
        kind: CertificateKind,
        spec: &GroupSpec,
        subject: &SubsetMask,
        witness: Option<&SubsetMask>,
        exhaustion: Exhaustion,
    ) -> Self {
        CertificateRecord {
            schema: CERTIFICATE_SCHEMA,
            kind,
            group: *spec,
            subject: coords(spec, subject),
            witness: witness.map(|w| coords(spec, w)),
            exhaustion,
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    pub fn from_spectrum(
        spec: &GroupSpec,
        subject: &SubsetMask,
        out: &Outcome<SpectralCertificate>,
    ) -> Self {
        let exhaustion = Exhaustion {
            spectrum_nodes: Some(out.explored()),
            complement_nodes: None,
        };
        match out.witness() {
            Some(c) => Self::new(
                CertificateKind::Spectrum,
                spec,
                subject,
                Some(&c.spectrum),
                exhaustion,
            ),
            None => Self::new(CertificateKind::NoSpectrum, spec, subject, None, exhaustion),
        }
    }

    pub fn from_complement(
        spec: &GroupSpec,
        subject: &SubsetMask,
        out: &Outcome<TilingCertificate>,
    ) -> Self {
        let exhaustion = Exhaustion {
            spectrum_nodes: None,
            complement_nodes: Some(out.explored()),
        };
        match out.witness() {
            Some(c) => Self::new(
                CertificateKind::Complement,
                spec,
                subject,
                Some(&c.complement),
                exhaustion,
            ),
            None => Self::new(
                CertificateKind::NoComplement,
                spec,
                subject,
                None,
                exhaustion,
            ),
        }
    }

    pub fn violation(
        spec: &GroupSpec,
        subject: &SubsetMask,
        spectrum: &Outcome<SpectralCertificate>,
        complement: &Outcome<TilingCertificate>,
    ) -> Self {
        let exhaustion = Exhaustion {
            spectrum_nodes: Some(spectrum.explored()),
            complement_nodes: Some(complement.explored()),
        };
        Self::new(CertificateKind::Violation, spec, subject, None, exhaustion)
    }

    fn mask(&self, list: &[OutCoord]) -> Result<SubsetMask, FormatError> {
        let spec = &self.group;
        let mut s = SubsetMask::empty(spec.order());
        for (entry, &([u1, u2], v)) in list.iter().enumerate() {
            let e = check_coord(spec, entry, ([u1 as i64, u2 as i64], v as i64))?;
            if !s.insert(spec.index(e)) {
                return Err(FormatError::DuplicateElement { entry, element: e });
            }
        }
        Ok(s)
    }

    pub fn subject_mask(&self) -> Result<SubsetMask, FormatError> {
        self.mask(&self.subject)
    }

    pub fn witness_mask(&self) -> Result<Option<SubsetMask>, FormatError> {
        self.witness.as_deref().map(|w| self.mask(w)).transpose()
    }

    /// Structural checks: schema version and witness presence.
    pub fn validate(&self) -> Result<(), FormatError> {
        if self.schema != CERTIFICATE_SCHEMA {
            return Err(FormatError::Record(format!(
                "unsupported schema {}",
                self.schema
            )));
        }
        let needs_witness = matches!(
            self.kind,
            CertificateKind::Spectrum | CertificateKind::Complement
        );
        if needs_witness != self.witness.is_some() {
            return Err(FormatError::Record(format!(
                "{:?} record {} a witness",
                self.kind,
                if needs_witness {
                    "requires"
                } else {
                    "must not carry"
                }
            )));
        }
        self.subject_mask()?;
        self.witness_mask()?;
        Ok(())
    }

    /// Re-checks the claim: positive witnesses directly, negative claims by
    /// rerunning the search.
    pub fn reverify(&self) -> Result<bool, FormatError> {
        self.validate()?;
        let group = Group::new(self.group);
        let s = self.subject_mask()?;
        let w = self.witness_mask()?;
        Ok(match self.kind {
            CertificateKind::Spectrum => verify_spectral_pair(&group, &s, &w.expect("validated")),
            CertificateKind::Complement => verify_tiling(&group, &s, &w.expect("validated")),
            CertificateKind::NoSpectrum => !find_spectrum(&group, &s).is_found(),
            CertificateKind::NoComplement => !find_complement(&group, &s).is_found(),
            CertificateKind::Violation => {
                find_spectrum(&group, &s).is_found() != find_complement(&group, &s).is_found()
            }
        })
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes") + "\n"
    }

    pub fn from_json_line(line: &str) -> Result<Self, FormatError> {
        let rec: CertificateRecord = serde_json::from_str(line)?;
        rec.validate()?;
        Ok(rec)
    }
}

/// Parses every nonblank line of a JSON-lines certificate file.
pub fn parse_certificates(text: &str) -> Result<Vec<CertificateRecord>, FormatError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            CertificateRecord::from_json_line(l).map_err(|e| match e {
                FormatError::Parse {
                    column, message, ..
                } => FormatError::Parse {
                    line: i + 1,
                    column,
                    message,
                },
                other => other,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_examples() {
        let f = parse_set_file(br#"{"p":2,"q":3,"elements":[[[0,0],0]]}"#).unwrap();
        assert_eq!(f.group, GroupSpec::new(2, 3).unwrap());
        assert_eq!(f.contents, SetContents::Set(SubsetMask::singleton(12, 0)));

        let err = parse_set_file(br#"{"p":2,"q":3,"elements":[[[2,0],0]]}"#).unwrap_err();
        assert_eq!(
            err,
            FormatError::Range {
                entry: 0,
                coordinate: "u1",
                value: 2,
                bound: 2
            }
        );
        let err = parse_set_file(br#"{"p":2,"q":2,"elements":[]}"#).unwrap_err();
        assert_eq!(err, FormatError::Group(Error::EqualPrimes(2)));
        let err = parse_set_file(br#"{"p":4,"q":3,"elements":[]}"#).unwrap_err();
        assert_eq!(err, FormatError::Group(Error::NotPrime(4)));
    }

    #[test]
    fn parse_errors() {
        let err = parse_set_file(b"{\"p\":2,\n\"q\":3,\n\"elements\":[[[0,0],0],]}").unwrap_err();
        assert!(matches!(err, FormatError::Parse { line: 3, .. }), "{err:?}");
        let err = parse_set_file(br#"{"p":2,"q":3,"elements":[[[0,0],-1]]}"#).unwrap_err();
        assert!(matches!(
            err,
            FormatError::Range {
                coordinate: "v",
                ..
            }
        ));
        let err = parse_set_file(br#"{"p":2,"q":3,"elements":[[[1,0],2],[[1,0],2]]}"#).unwrap_err();
        assert!(matches!(
            err,
            FormatError::DuplicateElement { entry: 1, .. }
        ));
        let err = parse_set_file(br#"{"p":2,"q":3,"elements":[[[[1,0],2],2]]}"#).unwrap_err();
        assert!(matches!(
            err,
            FormatError::DuplicateElement { entry: 0, .. }
        ));
        let err = parse_set_file(br#"{"p":2,"q":3,"multiset":true,"elements":[[[[1,0],2],0]]}"#)
            .unwrap_err();
        assert!(matches!(
            err,
            FormatError::Range {
                coordinate: "count",
                ..
            }
        ));
        assert!(parse_set_file(br#"{"p":2,"q":3,"extra":1,"elements":[]}"#).is_err());
    }

    #[test]
    fn multiset_files() {
        let text =
            br#"{"p":2,"q":3,"multiset":true,"elements":[[[1,1],2],[[[0,0],0],3],[[1,1],2]]}"#;
        let f = parse_set_file(text).unwrap();
        let SetContents::Multiset(m) = &f.contents else {
            panic!("expected a multiset")
        };
        assert_eq!(m.total(), 5);
        assert_eq!(m.count(11), 2);
        assert_eq!(
            write_set_file(&f),
            "{\"p\":2,\"q\":3,\"multiset\":true,\"elements\":[[[[0,0],0],3],[[[1,1],2],2]]}\n"
        );
    }

    #[test]
    fn written_sets_are_sorted() {
        let f = parse_set_file(br#"{"p":2,"q":3,"elements":[[[1,1],2],[[0,0],1]]}"#).unwrap();
        assert_eq!(
            write_set_file(&f),
            "{\"p\":2,\"q\":3,\"elements\":[[[0,0],1],[[1,1],2]]}\n"
        );
    }

    #[test]
    fn certificates_reverify() {
        let g = Group::from_primes(2, 3).unwrap();
        let plane = g.p_plane();
        let out = find_spectrum(&g, &plane);
        let rec = CertificateRecord::from_spectrum(g.spec(), &plane, &out);
        assert_eq!(rec.kind, CertificateKind::Spectrum);
        assert!(rec.reverify().unwrap());
        let line = rec.to_json_line();
        assert!(line.starts_with("{\"schema\":1,"));
        assert_eq!(CertificateRecord::from_json_line(&line).unwrap(), rec);

        let pair = SubsetMask::from_indices(12, [0, 1]);
        let rec = CertificateRecord::from_complement(g.spec(), &pair, &find_complement(&g, &pair));
        assert_eq!(rec.kind, CertificateKind::NoComplement);
        assert!(rec.witness.is_none());
        assert!(rec.reverify().unwrap());

        let mut forged = CertificateRecord::from_spectrum(g.spec(), &plane, &out);
        forged.witness = Some(vec![([0, 0], 0), ([0, 0], 1), ([1, 0], 0), ([0, 1], 0)]);
        assert!(!forged.reverify().unwrap());

        let mut bad = rec.clone();
        bad.witness = Some(vec![]);
        assert!(matches!(bad.validate(), Err(FormatError::Record(_))));
        let mut bad = rec;
        bad.schema = 2;
        assert!(bad.validate().is_err());
    }

    #[test]
    fn certificate_lines() {
        let g = Group::from_primes(3, 2).unwrap();
        let s = g.q_line();
        let a = CertificateRecord::from_spectrum(g.spec(), &s, &find_spectrum(&g, &s));
        let b = CertificateRecord::from_complement(g.spec(), &s, &find_complement(&g, &s));
        let text = format!("{}\n{}", a.to_json_line(), b.to_json_line());
        assert_eq!(parse_certificates(&text).unwrap(), vec![a, b]);
        let err = parse_certificates("\n{\"schema\":1}\n").unwrap_err();
        assert!(matches!(err, FormatError::Parse { line: 2, .. }));
    }

    proptest! {
        #[test]
        fn set_file_round_trip(bits in 0u64..(1 << 18), multi in any::<bool>(), extra in 0usize..18) {
            let spec = GroupSpec::new(3, 2).unwrap();
            let s = SubsetMask::from_bits(18, bits);
            let contents = if multi {
                let mut m = s.to_multiset();
                m.add(extra, 2);
                SetContents::Multiset(m)
            } else {
                SetContents::Set(s)
            };
            let file = SetFile { group: spec, contents };
            let text = write_set_file(&file);
            prop_assert_eq!(parse_set_file(text.as_bytes()).unwrap(), file);
        }

        #[test]
        fn certificate_round_trip(bits in 1u64..(1 << 12)) {
            let g = Group::from_primes(2, 3).unwrap();
            let s = SubsetMask::from_bits(12, bits);
            for rec in [
                CertificateRecord::from_spectrum(g.spec(), &s, &find_spectrum(&g, &s)),
                CertificateRecord::from_complement(g.spec(), &s, &find_complement(&g, &s)),
            ] {
                let back = CertificateRecord::from_json_line(&rec.to_json_line()).unwrap();
                prop_assert!(back.reverify().unwrap());
                prop_assert_eq!(back, rec);
            }
        }
    }
}
