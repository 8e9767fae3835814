//! Text design files, optionally gzip-compressed.
//!
//! ```text
//! tridesign-design 1
//! kind gdd
//! n 6
//! m 2
//! poly 0x5b
//! count 210
//! provenance gdd6-2
//! 1 2 4
//! ...
//! groups 21
//! 0
//! basis 3 c
//! ```
//!
//! Triangles are their three corners in hex. A group line is either a
//! decimal `i` for the coset `xi^i F_(2^m)` of the file's field, or `basis`
//! followed by hex vectors spanning it. `poly 0x0` marks files whose vectors
//! are plain coordinates.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use flate2::read::GzDecoder;
use flate2::write::GzEncoder;
use flate2::Compression;

use crate::designs::{Design, Gdd, TriangleSystem};
use crate::error::{Error, Result};
use crate::gf2n::FieldCtx;
use crate::linalg::{Spread, TriangleV};
use crate::orbits::parse_hex;

pub const MAGIC: &str = "tridesign-design";
pub const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DesignFile {
    pub system: TriangleSystem,
    pub provenance: Option<String>,
}

impl DesignFile {
    pub fn new(system: TriangleSystem, provenance: Option<&str>) -> Self {
        DesignFile {
            system,
            provenance: provenance.map(str::to_string),
        }
    }
}

/// Header fields shared by the materialized and streaming writers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Header {
    pub gdd: bool,
    pub n: u32,
    pub m: u32,
    pub poly: u32,
    pub count: u64,
    pub provenance: Option<String>,
}

fn write_header<W: Write>(w: &mut W, h: &Header) -> io::Result<()> {
    writeln!(w, "{MAGIC} {VERSION}")?;
    writeln!(w, "kind {}", if h.gdd { "gdd" } else { "design" })?;
    writeln!(w, "n {}", h.n)?;
    writeln!(w, "m {}", h.m)?;
    writeln!(w, "poly {:#x}", h.poly)?;
    writeln!(w, "count {}", h.count)?;
    if let Some(p) = &h.provenance {
        writeln!(w, "provenance {p}")?;
    }
    Ok(())
}

#[inline]
fn write_triangle<W: Write>(w: &mut W, t: &TriangleV) -> io::Result<()> {
    let [a, b, c] = t.corners();
    writeln!(w, "{a:x} {b:x} {c:x}")
}

/// Coset exponent of `group` if it is `xi^i F_(2^m)` in the given field.
fn coset_exponent(ctx: &FieldCtx, m: u32, group: &[u32]) -> Option<u32> {
    let step = ctx.order() / ((1 << m) - 1);
    let i = ctx.log_nz(group[0]) % step;
    let mut coset: Vec<u32> = (0..(1u32 << m) - 1)
        .map(|j| ctx.exp_r(i + step * j))
        .collect();
    coset.sort_unstable();
    (coset == group).then_some(i)
}

fn basis_of(group: &[u32]) -> Vec<u32> {
    let mut basis = Vec::new();
    let mut reduced: Vec<u32> = Vec::new();
    for &v in group {
        let mut r = v;
        for &b in &reduced {
            r = r.min(r ^ b);
        }
        if r != 0 {
            basis.push(v);
            reduced.push(r);
            reduced.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis
}

fn span(basis: &[u32]) -> Vec<u32> {
    let mut out = vec![0u32];
    for &b in basis {
        let more: Vec<u32> = out.iter().map(|&x| x ^ b).collect();
        out.extend(more);
    }
    out.retain(|&x| x != 0);
    out.sort_unstable();
    out
}

fn field_of(n: u32, poly: u32) -> Option<FieldCtx> {
    if poly == 0 {
        None
    } else {
        FieldCtx::new(n, Some(poly)).ok()
    }
}

pub fn write_design<W: Write>(mut w: W, f: &DesignFile) -> Result<()> {
    let s = &f.system;
    let (gdd, m) = match s {
        TriangleSystem::Design(_) => (false, 1),
        TriangleSystem::Gdd(g) => (true, g.m()),
    };
    let h = Header {
        gdd,
        n: s.n(),
        m,
        poly: s.poly(),
        count: s.triangles().len() as u64,
        provenance: f.provenance.clone(),
    };
    write_header(&mut w, &h)?;
    for t in s.triangles() {
        write_triangle(&mut w, t)?;
    }
    if let TriangleSystem::Gdd(g) = s {
        let ctx = field_of(g.n, g.poly);
        writeln!(w, "groups {}", g.groups.groups.len())?;
        for grp in &g.groups.groups {
            match ctx.as_ref().and_then(|c| coset_exponent(c, m, grp)) {
                Some(i) => writeln!(w, "{i}")?,
                None => {
                    write!(w, "basis")?;
                    for b in basis_of(grp) {
                        write!(w, " {b:x}")?;
                    }
                    writeln!(w)?;
                }
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes a design whose triangles arrive as a stream; `header.count` must
/// match the stream length.
pub fn write_stream<W: Write>(
    mut w: W,
    header: &Header,
    triangles: impl Iterator<Item = TriangleV>,
    groups: Option<&Spread>,
) -> Result<u64> {
    write_header(&mut w, header)?;
    let mut written = 0u64;
    for t in triangles {
        write_triangle(&mut w, &t)?;
        written += 1;
    }
    if written != header.count {
        return Err(Error::Malformed(format!(
            "stream produced {written} triangles, header says {}",
            header.count
        )));
    }
    if let Some(g) = groups {
        let ctx = field_of(header.n, header.poly);
        writeln!(w, "groups {}", g.groups.len())?;
        for grp in &g.groups {
            match ctx.as_ref().and_then(|c| coset_exponent(c, header.m, grp)) {
                Some(i) => writeln!(w, "{i}")?,
                None => {
                    write!(w, "basis")?;
                    for b in basis_of(grp) {
                        write!(w, " {b:x}")?;
                    }
                    writeln!(w)?;
                }
            }
        }
    }
    w.flush()?;
    Ok(written)
}

pub fn to_string(f: &DesignFile) -> String {
    let mut buf = Vec::new();
    write_design(&mut buf, f).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

pub fn read_design<R: BufRead>(r: R) -> Result<DesignFile> {
    let mut lines = r.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut next = || -> Result<Option<(usize, String)>> {
        match lines.next() {
            None => Ok(None),
            Some((i, l)) => Ok(Some((i, l?))),
        }
    };
    let perr = |line: usize, msg: String| Error::Parse { line, msg };

    let (no, first) = next()?.ok_or_else(|| perr(1, "empty file".into()))?;
    match first.split_once(' ') {
        Some((MAGIC, v)) if v.trim() == VERSION.to_string() => {}
        _ => return Err(perr(no, format!("expected `{MAGIC} {VERSION}`"))),
    }
    let mut kind = None;
    let (mut n, mut m, mut poly, mut count, mut provenance) = (None, None, None, None, None);
    let mut pending: Option<(usize, String)> = None;
    while let Some((no, l)) = next()? {
        let (key, val) = match l.split_once(' ') {
            Some(kv) => kv,
            None => {
                pending = Some((no, l));
                break;
            }
        };
        let num = |v: &str| {
            v.trim()
                .parse::<u64>()
                .map_err(|e| perr(no, format!("bad {key}: {e}")))
        };
        match key {
            "kind" => kind = Some(val.trim().to_string()),
            "n" => n = Some(num(val)? as u32),
            "m" => m = Some(num(val)? as u32),
            "poly" => poly = Some(parse_hex(val).map_err(|e| perr(no, e.to_string()))?),
            "count" => count = Some(num(val)?),
            "provenance" => provenance = Some(val.to_string()),
            _ => {
                pending = Some((no, l));
                break;
            }
        }
    }
    let missing = |what: &str| perr(no, format!("header lacks `{what}`"));
    let n = n.ok_or_else(|| missing("n"))?;
    let m = m.ok_or_else(|| missing("m"))?;
    let poly = poly.ok_or_else(|| missing("poly"))?;
    let count = count.ok_or_else(|| missing("count"))?;
    let gdd = match kind.as_deref() {
        Some("design") => false,
        Some("gdd") => true,
        Some(k) => return Err(perr(no, format!("unknown kind {k:?}"))),
        None => return Err(missing("kind")),
    };
    if n == 0 || n > 31 {
        return Err(perr(no, format!("dimension {n} out of range")));
    }
    let limit = 1u64 << n;

    let mut triangles = Vec::with_capacity(count.min(1 << 26) as usize);
    let mut groups_header: Option<(usize, u64)> = None;
    // Returns the group count when `l` opens the groups section.
    let parse_line = |no: usize, l: &str, triangles: &mut Vec<TriangleV>| -> Result<Option<u64>> {
        if let Some(rest) = l.strip_prefix("groups ") {
            let g = rest
                .trim()
                .parse()
                .map_err(|e| perr(no, format!("bad group count: {e}")))?;
            return Ok(Some(g));
        }
        let mut v = [0u32; 3];
        let mut toks = l.split_whitespace();
        for slot in &mut v {
            let t = toks
                .next()
                .ok_or_else(|| perr(no, "triangle needs three vectors".into()))?;
            let x = u64::from_str_radix(t, 16)
                .map_err(|e| perr(no, format!("bad vector {t:?}: {e}")))?;
            if x >= limit {
                return Err(perr(no, format!("vector {t} does not fit in {n} bits")));
            }
            *slot = x as u32;
        }
        if toks.next().is_some() {
            return Err(perr(no, "trailing data after triangle".into()));
        }
        triangles.push(TriangleV::from_corners(v[0], v[1], v[2]));
        Ok(None)
    };
    let mut cur = pending.take();
    if cur.is_none() {
        cur = next()?;
    }
    while let Some((no, l)) = cur {
        if let Some(g) = parse_line(no, &l, &mut triangles)? {
            groups_header = Some((no, g));
            break;
        }
        cur = next()?;
    }
    if triangles.len() as u64 != count {
        return Err(perr(
            0,
            format!("header count {count} but {} triangles", triangles.len()),
        ));
    }

    let system = if gdd {
        let (gno, gcount) =
            groups_header.ok_or_else(|| perr(0, "gdd file without a groups section".into()))?;
        let ctx = field_of(n, poly);
        let mut groups = Vec::with_capacity(gcount as usize);
        while let Some((no, l)) = next()? {
            if let Some(rest) = l.strip_prefix("basis") {
                let basis: Vec<u32> = rest
                    .split_whitespace()
                    .map(|t| {
                        u32::from_str_radix(t, 16)
                            .map_err(|e| perr(no, format!("bad vector {t:?}: {e}")))
                    })
                    .collect::<Result<_>>()?;
                if basis.len() as u32 != m {
                    return Err(perr(
                        no,
                        format!("basis has {} vectors, expected {m}", basis.len()),
                    ));
                }
                groups.push(span(&basis));
            } else {
                let ctx = ctx
                    .as_ref()
                    .ok_or_else(|| perr(no, "coset groups need a field polynomial".into()))?;
                let i: u32 = l
                    .trim()
                    .parse()
                    .map_err(|e| perr(no, format!("bad group exponent: {e}")))?;
                let step = ctx.order() / ((1 << m) - 1);
                let mut g: Vec<u32> = (0..(1u32 << m) - 1)
                    .map(|j| ctx.exp_r((i + step * j) % ctx.order()))
                    .collect();
                g.sort_unstable();
                groups.push(g);
            }
        }
        if groups.len() as u64 != gcount {
            return Err(perr(
                gno,
                format!("groups header says {gcount}, found {}", groups.len()),
            ));
        }
        TriangleSystem::Gdd(Gdd {
            n,
            poly,
            groups: Spread { n, dim: m, groups },
            triangles,
        })
    } else {
        if let Some((no, _)) = groups_header {
            return Err(perr(no, "design file with a groups section".into()));
        }
        if m != 1 {
            return Err(perr(0, format!("design file with m = {m}")));
        }
        TriangleSystem::Design(Design { n, poly, triangles })
    };
    Ok(DesignFile { system, provenance })
}

/// Opens a file for reading, decompressing gzip transparently.
pub fn open_read(path: &Path) -> Result<Box<dyn BufRead>> {
    let mut f = File::open(path)?;
    let mut magic = [0u8; 2];
    let got = f.read(&mut magic)?;
    let f = File::open(path)?;
    if got == 2 && magic == [0x1f, 0x8b] {
        Ok(Box::new(BufReader::new(GzDecoder::new(f))))
    } else {
        Ok(Box::new(BufReader::new(f)))
    }
}

/// Opens a file for writing; names ending in `.gz` are gzip-compressed.
pub fn open_write(path: &Path) -> Result<Box<dyn Write>> {
    let f = BufWriter::new(File::create(path)?);
    if path.extension().is_some_and(|e| e == "gz") {
        Ok(Box::new(GzEncoder::new(f, Compression::fast())))
    } else {
        Ok(Box::new(f))
    }
}

pub fn load(path: &Path) -> Result<DesignFile> {
    read_design(open_read(path)?)
}

pub fn save(path: &Path, f: &DesignFile) -> Result<()> {
    let mut w = open_write(path)?;
    write_design(&mut w, f)?;
    drop(w);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets;

    #[test]
    fn round_trip_gdd() {
        let f = DesignFile::new(TriangleSystem::Gdd(datasets::gdd6_2()), Some("gdd6-2"));
        let s = to_string(&f);
        assert!(s.starts_with(
            "tridesign-design 1\nkind gdd\nn 6\nm 2\npoly 0x5b\ncount 210\nprovenance gdd6-2\n"
        ));
        let back = read_design(s.as_bytes()).unwrap();
        assert_eq!(to_string(&back), s);
        assert!(back.system.verify().unwrap().ok);
    }

    #[test]
    fn basis_groups() {
        let mut g = datasets::gdd6_2();
        g.poly = 0;
        let f = DesignFile::new(TriangleSystem::Gdd(g), None);
        let s = to_string(&f);
        assert!(s.contains("\nbasis "));
        let back = read_design(s.as_bytes()).unwrap();
        assert_eq!(to_string(&back), s);
        assert!(back.system.verify().unwrap().ok);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(read_design(&b"nope\n"[..]).is_err());
        let bad_count = "tridesign-design 1\nkind design\nn 3\nm 1\npoly 0xb\ncount 2\n1 2 4\n";
        assert!(matches!(
            read_design(bad_count.as_bytes()),
            Err(Error::Parse { .. })
        ));
        let too_wide = "tridesign-design 1\nkind design\nn 3\nm 1\npoly 0xb\ncount 1\n1 2 10\n";
        assert!(read_design(too_wide.as_bytes()).is_err());
    }

    #[test]
    fn gzip_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("d.design.gz");
        let f = DesignFile::new(TriangleSystem::Design(datasets::design6()), Some("design6"));
        save(&p, &f).unwrap();
        let mut raw = [0u8; 2];
        File::open(&p).unwrap().read_exact(&mut raw).unwrap();
        assert_eq!(raw, [0x1f, 0x8b]);
        assert_eq!(load(&p).unwrap(), f);
    }

    #[test]
    fn stream_writer_matches() {
        let d = datasets::frob7();
        let f = DesignFile::new(TriangleSystem::Design(d.clone()), None);
        let h = Header {
            gdd: false,
            n: 7,
            m: 1,
            poly: d.poly,
            count: d.triangles.len() as u64,
            provenance: None,
        };
        let mut buf = Vec::new();
        write_stream(&mut buf, &h, d.triangles.iter().copied(), None).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), to_string(&f));
    }
}
