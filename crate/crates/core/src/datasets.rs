//! Embedded orbit representatives and their expansions.

use std::collections::HashSet;

use crate::designs::{Design, Gdd, TriangleSystem};
use crate::error::{Error, Result};
use crate::gf2n::FieldCtx;
use crate::linalg::{desarguesian_spread, enumerate_lines, TriangleV};
use crate::orbits::{expand_certificate, Certificate, FrobeniusCertificate, OrbitCertificate};

/// `x^5 + x^2 + 1`, the coordinate field of the second factor of `F_2 x F_32`.
pub const DESIGN6_SUBFIELD_POLY: u32 = 0b100101;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DatasetKind {
    /// Orbits of `F_2 x F_32` under `(a, y) -> (a, b y)`.
    MuOrbitDesign,
    /// Orbits under multiplication by `xi^3`.
    Xi3OrbitGdd,
    SingerGdd,
    FrobeniusDesign,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    /// `[(a, alpha); 3]` standing for the vectors `(a, xi^alpha)`.
    MuReps(Vec<[(u32, u32); 3]>),
    Triples(Vec<[u32; 3]>),
    Pairs(Vec<(u32, u32)>),
}

impl Payload {
    pub fn len(&self) -> usize {
        match self {
            Payload::MuReps(v) => v.len(),
            Payload::Triples(v) => v.len(),
            Payload::Pairs(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddedDataset {
    pub name: &'static str,
    pub kind: DatasetKind,
    pub n: u32,
    pub m: u32,
    pub poly: u32,
    pub payload: Payload,
    pub description: &'static str,
}

struct Entry {
    name: &'static str,
    kind: DatasetKind,
    n: u32,
    m: u32,
    poly: u32,
    text: &'static str,
    size: usize,
    description: &'static str,
}

const ENTRIES: &[Entry] = &[
    Entry {
        name: "design6",
        kind: DatasetKind::MuOrbitDesign,
        n: 6,
        m: 1,
        poly: 0,
        text: include_str!("../data/design6.txt"),
        size: 7,
        description: "triangle design in F_2 x F_32, 7 orbits of length 31",
    },
    Entry {
        name: "gdd6-2",
        kind: DatasetKind::Xi3OrbitGdd,
        n: 6,
        m: 2,
        poly: 0b1011011,
        text: include_str!("../data/gdd6-2.txt"),
        size: 10,
        description: "balanced GDD over F_64 with F_4 cosets as groups, 10 orbits under xi^3",
    },
    Entry {
        name: "gdd12-6",
        kind: DatasetKind::SingerGdd,
        n: 12,
        m: 6,
        poly: 0b1_0000_1110_1011,
        text: include_str!("../data/gdd12-6.txt"),
        size: 224,
        description: "Singer-invariant GDD over F_4096 with F_64 cosets as groups",
    },
    Entry {
        name: "frob7",
        kind: DatasetKind::FrobeniusDesign,
        n: 7,
        m: 1,
        poly: 0b1000_0011,
        text: include_str!("../data/frob7.txt"),
        size: 1,
        description: "balanced design over F_128 from one Frobenius-closed orbit pair",
    },
    Entry {
        name: "frob13",
        kind: DatasetKind::FrobeniusDesign,
        n: 13,
        m: 1,
        poly: 0b10_0000_0001_1011,
        text: include_str!("../data/frob13.txt"),
        size: 35,
        description: "balanced design over F_8192 from 35 Frobenius-closed orbit pairs",
    },
];

/// Known but not embedded; re-derivable by search.
pub const EXTERNAL: &[&str] = &["frob19"];

pub fn dataset_names() -> Vec<&'static str> {
    ENTRIES.iter().map(|e| e.name).collect()
}

fn corrupt(name: &str, reason: impl Into<String>) -> Error {
    Error::CorruptDataset {
        name: name.to_string(),
        reason: reason.into(),
    }
}

fn parse_payload(e: &Entry) -> Result<Payload> {
    let lines: Vec<&str> = e.text.lines().filter(|l| !l.trim().is_empty()).collect();
    let num = |t: &str| {
        t.parse::<u32>()
            .map_err(|err| corrupt(e.name, format!("bad number {t:?}: {err}")))
    };
    let payload = match e.kind {
        DatasetKind::MuOrbitDesign => {
            let mut v = Vec::new();
            for l in &lines {
                let mut rep = [(0, 0); 3];
                let toks: Vec<&str> = l.split_whitespace().collect();
                if toks.len() != 3 {
                    return Err(corrupt(
                        e.name,
                        format!("expected three generators in {l:?}"),
                    ));
                }
                for (slot, t) in rep.iter_mut().zip(toks) {
                    let (a, alpha) = t
                        .split_once('^')
                        .ok_or_else(|| corrupt(e.name, format!("bad generator {t:?}")))?;
                    *slot = (num(a)?, num(alpha)?);
                }
                v.push(rep);
            }
            Payload::MuReps(v)
        }
        DatasetKind::Xi3OrbitGdd => {
            let mut v = Vec::new();
            for l in &lines {
                let t: Vec<u32> = l.split_whitespace().map(num).collect::<Result<_>>()?;
                let t: [u32; 3] = t
                    .try_into()
                    .map_err(|_| corrupt(e.name, format!("expected a triple in {l:?}")))?;
                v.push(t);
            }
            Payload::Triples(v)
        }
        DatasetKind::SingerGdd | DatasetKind::FrobeniusDesign => {
            let mut v = Vec::new();
            for l in &lines {
                let t: Vec<u32> = l.split_whitespace().map(num).collect::<Result<_>>()?;
                match t[..] {
                    [a, b] => v.push((a, b)),
                    _ => return Err(corrupt(e.name, format!("expected a pair in {l:?}"))),
                }
            }
            Payload::Pairs(v)
        }
    };
    if payload.len() != e.size {
        return Err(corrupt(
            e.name,
            format!("expected {} entries, found {}", e.size, payload.len()),
        ));
    }
    Ok(payload)
}

pub fn load_dataset(name: &str) -> Result<EmbeddedDataset> {
    let key = name.replace('_', "-");
    if EXTERNAL.contains(&key.as_str()) {
        return Err(Error::ExternalDataset(key));
    }
    let e = ENTRIES
        .iter()
        .find(|e| e.name == key)
        .ok_or_else(|| Error::UnknownDataset(name.to_string()))?;
    Ok(EmbeddedDataset {
        name: e.name,
        kind: e.kind,
        n: e.n,
        m: e.m,
        poly: e.poly,
        payload: parse_payload(e)?,
        description: e.description,
    })
}

impl EmbeddedDataset {
    /// Orbit certificate for the Singer-type datasets.
    pub fn certificate(&self) -> Option<Certificate> {
        match (&self.kind, &self.payload) {
            (DatasetKind::SingerGdd, Payload::Pairs(p)) => {
                Some(Certificate::Singer(OrbitCertificate {
                    n: self.n,
                    m: self.m,
                    poly: self.poly,
                    reps: p.clone(),
                }))
            }
            (DatasetKind::FrobeniusDesign, Payload::Pairs(p)) => {
                Some(Certificate::Frobenius(FrobeniusCertificate {
                    n: self.n,
                    poly: self.poly,
                    pairs: p.clone(),
                }))
            }
            _ => None,
        }
    }

    pub fn expand(&self) -> Result<TriangleSystem> {
        match self.certificate() {
            Some(cert) => {
                let ctx = FieldCtx::new(self.n, Some(self.poly))?;
                expand_certificate(&ctx, &cert, false)
            }
            None => expand_special(self),
        }
    }
}

fn no_repeats(name: &str, ts: &[TriangleV]) -> Result<()> {
    let mut seen = HashSet::with_capacity(ts.len());
    for t in ts {
        if !seen.insert(t.corners()) {
            return Err(corrupt(
                name,
                format!("orbit collision at triangle {:x?}", t.corners()),
            ));
        }
    }
    Ok(())
}

/// Expands the two datasets whose group is not a Singer cycle.
pub fn expand_special(ds: &EmbeddedDataset) -> Result<TriangleSystem> {
    match (&ds.kind, &ds.payload) {
        (DatasetKind::MuOrbitDesign, Payload::MuReps(reps)) => {
            let f5 = FieldCtx::new(5, Some(DESIGN6_SUBFIELD_POLY))?;
            // mu_{xi^s} must move every line
            for l in enumerate_lines(6) {
                let pts = l.points();
                for s in 1..31 {
                    let mut img = pts.map(|p| mu(&f5, s, p));
                    img.sort_unstable();
                    if img == pts {
                        return Err(corrupt(
                            ds.name,
                            format!("line {pts:x?} fixed by mu_(xi^{s})"),
                        ));
                    }
                }
            }
            let mut tris = Vec::with_capacity(reps.len() * 31);
            for rep in reps {
                let v = rep.map(|(a, alpha)| (a << 5) | f5.exp(alpha as i64));
                if rep.iter().any(|&(a, _)| a > 1) {
                    return Err(corrupt(ds.name, "first coordinate must be 0 or 1"));
                }
                let t = TriangleV::new(v[0], v[1], v[2])
                    .map_err(|e| corrupt(ds.name, e.to_string()))?;
                for s in 0..31 {
                    tris.push(t.map(|p| mu(&f5, s, p)));
                }
            }
            no_repeats(ds.name, &tris)?;
            Ok(TriangleSystem::Design(Design {
                n: 6,
                poly: 0,
                triangles: tris,
            }))
        }
        (DatasetKind::Xi3OrbitGdd, Payload::Triples(tr)) => {
            let ctx = FieldCtx::new(ds.n, Some(ds.poly))?;
            let mut tris = Vec::with_capacity(tr.len() * 21);
            for &[i, j, k] in tr {
                for l in 0..21 {
                    let e = |x: u32| ctx.exp((x + 3 * l) as i64);
                    let t = TriangleV::new(e(i), e(j), e(k))
                        .map_err(|err| corrupt(ds.name, err.to_string()))?;
                    tris.push(t);
                }
            }
            no_repeats(ds.name, &tris)?;
            let groups = desarguesian_spread(&ctx, 2)?;
            Ok(TriangleSystem::Gdd(Gdd {
                n: 6,
                poly: ctx.poly(),
                groups,
                triangles: tris,
            }))
        }
        _ => Err(Error::Precondition(format!(
            "dataset {} is expanded from its certificate",
            ds.name
        ))),
    }
}

/// `(a, y) -> (a, xi^s y)` on `F_2 x F_32` packed as `a << 5 | y`.
pub fn mu(f5: &FieldCtx, s: u32, p: u32) -> u32 {
    (p & 0x20) | f5.scale(p & 0x1f, s)
}

pub fn design6() -> Design {
    load_dataset("design6")
        .and_then(|d| d.expand())
        .and_then(TriangleSystem::into_design)
        .expect("embedded design6 expands")
}

pub fn gdd6_2() -> Gdd {
    load_dataset("gdd6-2")
        .and_then(|d| d.expand())
        .and_then(TriangleSystem::into_gdd)
        .expect("embedded gdd6-2 expands")
}

pub fn gdd12_6() -> Gdd {
    load_dataset("gdd12-6")
        .and_then(|d| d.expand())
        .and_then(TriangleSystem::into_gdd)
        .expect("embedded gdd12-6 expands")
}

pub fn frob7() -> Design {
    load_dataset("frob7")
        .and_then(|d| d.expand())
        .and_then(TriangleSystem::into_design)
        .expect("embedded frob7 expands")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::{verify_balanced_design, verify_balanced_gdd};
    use crate::gf2n::default_poly;

    #[test]
    fn payload_sizes_and_firsts() {
        let g = load_dataset("gdd12-6").unwrap();
        assert_eq!(
            g.payload,
            Payload::Pairs(
                g.certificate()
                    .map(|c| match c {
                        Certificate::Singer(c) => c.reps,
                        _ => unreachable!(),
                    })
                    .unwrap()
            )
        );
        match &g.payload {
            Payload::Pairs(p) => assert_eq!((p.len(), p[0]), (224, (3, 1861))),
            _ => panic!(),
        }
        match load_dataset("frob13").unwrap().payload {
            Payload::Pairs(p) => assert_eq!((p.len(), p[0]), (35, (3, 3543))),
            _ => panic!(),
        }
        assert_eq!(load_dataset("design6").unwrap().payload.len(), 7);
        assert_eq!(load_dataset("gdd6_2").unwrap().payload.len(), 10);
        assert_eq!(
            load_dataset("frob7").unwrap().payload,
            Payload::Pairs(vec![(1, 9)])
        );
    }

    #[test]
    fn names_and_errors() {
        assert!(matches!(
            load_dataset("nope"),
            Err(Error::UnknownDataset(_))
        ));
        assert!(matches!(
            load_dataset("frob19"),
            Err(Error::ExternalDataset(_))
        ));
        assert_eq!(dataset_names().len(), 5);
    }

    #[test]
    fn polys_match_defaults() {
        for name in ["gdd6-2", "gdd12-6", "frob7", "frob13"] {
            let d = load_dataset(name).unwrap();
            assert_eq!(d.poly, default_poly(d.n).unwrap(), "{name}");
        }
    }

    #[test]
    fn design6_verifies() {
        let d = design6();
        assert_eq!(d.triangles.len(), 217);
        let r = crate::designs::verify_design(&d).unwrap();
        assert!(r.ok, "{r}");
        assert_eq!(r.lines_total, 651);
        // even dimension: cannot be balanced
        assert!(!verify_balanced_design(&d).balanced);
    }

    #[test]
    fn gdd6_2_verifies_balanced() {
        let g = gdd6_2();
        assert_eq!(g.triangles.len(), 210);
        assert_eq!(g.groups.groups.len(), 21);
        assert!(crate::designs::verify_gdd(&g).unwrap().ok);
        let b = verify_balanced_gdd(&g);
        assert!(b.balanced);
        assert_eq!(b.lambda, Some(20));
    }

    #[test]
    fn frob7_verifies_balanced() {
        let d = frob7();
        assert_eq!(d.triangles.len(), 889);
        assert_eq!(verify_balanced_design(&d).lambda, Some(42));
    }
}
