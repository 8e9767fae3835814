//! Singer-cycle and Frobenius orbit machinery on exponents.
//!
//! A line `{x, y, x^y}` of `F_{2^n}` is carried by the Singer cycle to a
//! line through 1; the exponents of such representatives form a set
//! `{k, zech(k), zech(-k), -zech(-k), -zech(k), -k}` (a "gamma set"), whose
//! minimum we use as the orbit key.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::designs::{Design, Gdd, TriangleSystem};
use crate::error::{Error, Result};
use crate::gf2n::FieldCtx;
use crate::linalg::{desarguesian_spread, Line, Spread, TriangleV};

/// The closure of an exponent under negation and Zech.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GammaSet {
    elems: Vec<u32>,
}

impl GammaSet {
    pub fn elems(&self) -> &[u32] {
        &self.elems
    }

    pub fn key(&self) -> u32 {
        self.elems[0]
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, k: u32) -> bool {
        self.elems.binary_search(&k).is_ok()
    }
}

#[inline]
fn gamma_raw(ctx: &FieldCtx, k: u32) -> [u32; 6] {
    let z = ctx.zech_r(k);
    let nk = ctx.neg(k);
    let zn = ctx.zech_r(nk);
    [k, z, zn, ctx.neg(zn), ctx.neg(z), nk]
}

/// `gamma(k)` as a sorted set; size 6, or 2 when `3k = 0`.
pub fn gamma(ctx: &FieldCtx, k: i64) -> Result<GammaSet> {
    let k = ctx.reduce(k);
    if k == 0 {
        return Err(Error::ZechAtZero);
    }
    let mut elems = gamma_raw(ctx, k).to_vec();
    elems.sort_unstable();
    elems.dedup();
    Ok(GammaSet { elems })
}

#[inline]
fn gamma_key(ctx: &FieldCtx, k: u32) -> u32 {
    gamma_raw(ctx, k).into_iter().min().unwrap()
}

/// The 2-cyclotomic class of `k` modulo `2^n - 1`, sorted.
pub fn cyclotomic_class(n: u32, k: u64) -> Vec<u64> {
    let modulus = (1u64 << n) - 1;
    let k = k % modulus;
    let mut out = vec![k];
    let mut x = (k * 2) % modulus;
    while x != k {
        out.push(x);
        x = (x * 2) % modulus;
    }
    out.sort_unstable();
    out
}

/// Union of the cyclotomic classes of the elements of `gamma(k)`, sorted.
pub fn cy_gamma(ctx: &FieldCtx, k: i64) -> Result<Vec<u32>> {
    let g = gamma(ctx, k)?;
    let mut set = BTreeSet::new();
    for &s in g.elems() {
        set.extend(
            cyclotomic_class(ctx.n(), s as u64)
                .into_iter()
                .map(|x| x as u32),
        );
    }
    Ok(set.into_iter().collect())
}

/// Precomputed gamma keys for every nonzero residue.
pub struct GammaIndex<'a> {
    ctx: &'a FieldCtx,
    key: Vec<u32>,
}

impl<'a> GammaIndex<'a> {
    pub fn new(ctx: &'a FieldCtx) -> Self {
        let order = ctx.order();
        let key = (0..order)
            .into_par_iter()
            .map(|k| if k == 0 { u32::MAX } else { gamma_key(ctx, k) })
            .collect();
        GammaIndex { ctx, key }
    }

    pub fn ctx(&self) -> &'a FieldCtx {
        self.ctx
    }

    #[inline]
    pub fn key(&self, k: u32) -> u32 {
        self.key[k as usize]
    }

    #[inline]
    pub fn elems(&self, k: u32) -> [u32; 6] {
        gamma_raw(self.ctx, k)
    }

    /// Orbit key of the Singer orbit containing `l`.
    pub fn line_key(&self, l: &Line) -> u32 {
        let [x, y, _] = l.points();
        self.key(self.ctx.sub_r(self.ctx.log_nz(y), self.ctx.log_nz(x)))
    }
}

/// Orbit key of the Singer orbit of `l`.
pub fn orbit_key_of_line(ctx: &FieldCtx, l: &Line) -> u32 {
    let [x, y, _] = l.points();
    gamma_key(ctx, ctx.sub_r(ctx.log_nz(y), ctx.log_nz(x)))
}

/// Whether the three line orbits keyed by `k1, k2, k3` form a triangle
/// orbit: some `s_i` in `gamma(k_i)` sum to zero.
pub fn is_triangle_orbit(ctx: &FieldCtx, k1: i64, k2: i64, k3: i64) -> Result<bool> {
    let (g1, g2, g3) = (gamma(ctx, k1)?, gamma(ctx, k2)?, gamma(ctx, k3)?);
    if g1.key() == g2.key() || g2.key() == g3.key() || g1.key() == g3.key() {
        return Err(Error::Precondition(format!(
            "orbits must be distinct (keys {}, {}, {})",
            g1.key(),
            g2.key(),
            g3.key()
        )));
    }
    for &s1 in g1.elems() {
        for &s2 in g2.elems() {
            let s3 = ctx.neg(ctx.add_r(s1, s2));
            if s3 != 0 && g3.contains(s3) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// `N_t` for every class size `t` of residues modulo `2^n - 1`, computed from
/// `|{k : (2^d - 1) k = 0}| = 2^d - 1` by Moebius inversion over divisors.
pub fn cyclotomic_strata(n: u32) -> BTreeMap<u32, u128> {
    let divisors: Vec<u32> = (1..=n).filter(|d| n % d == 0).collect();
    let mut size_of: BTreeMap<u32, u128> = BTreeMap::new();
    for &t in &divisors {
        let fixed = (1u128 << t) - 1;
        let below: u128 = divisors
            .iter()
            .filter(|&&d| d < t && t % d == 0)
            .map(|d| size_of[d])
            .sum();
        size_of.insert(t, fixed - below);
    }
    size_of
        .into_iter()
        .map(|(t, c)| (t, c / t as u128))
        .collect()
}

/// Singer certificate: generator triangles `(1, xi^i, xi^j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitCertificate {
    pub n: u32,
    pub m: u32,
    pub poly: u32,
    pub reps: Vec<(u32, u32)>,
}

/// Frobenius certificate: pairs `(a, b)` standing for the triangles
/// `(1, xi^(2^j a), xi^(-2^j b))`, `j = 0..n-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusCertificate {
    pub n: u32,
    pub poly: u32,
    pub pairs: Vec<(u32, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Singer(OrbitCertificate),
    Frobenius(FrobeniusCertificate),
}

#[derive(Serialize, Deserialize)]
struct CertificateJson {
    kind: String,
    n: u32,
    m: u32,
    poly: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    reps: Option<Vec<[u32; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pairs: Option<Vec<[u32; 2]>>,
}

pub fn parse_hex(s: &str) -> Result<u32> {
    let t = s.trim();
    let t = t
        .strip_prefix("0x")
        .or_else(|| t.strip_prefix("0X"))
        .unwrap_or(t);
    u32::from_str_radix(t, 16).map_err(|e| Error::Malformed(format!("bad hex {s:?}: {e}")))
}

impl Certificate {
    pub fn n(&self) -> u32 {
        match self {
            Certificate::Singer(c) => c.n,
            Certificate::Frobenius(c) => c.n,
        }
    }

    pub fn m(&self) -> u32 {
        match self {
            Certificate::Singer(c) => c.m,
            Certificate::Frobenius(_) => 1,
        }
    }

    pub fn poly(&self) -> u32 {
        match self {
            Certificate::Singer(c) => c.poly,
            Certificate::Frobenius(c) => c.poly,
        }
    }

    pub fn to_json(&self) -> String {
        let j = match self {
            Certificate::Singer(c) => CertificateJson {
                kind: "singer".into(),
                n: c.n,
                m: c.m,
                poly: format!("{:#x}", c.poly),
                reps: Some(c.reps.iter().map(|&(i, j)| [i, j]).collect()),
                pairs: None,
            },
            Certificate::Frobenius(c) => CertificateJson {
                kind: "frobenius".into(),
                n: c.n,
                m: 1,
                poly: format!("{:#x}", c.poly),
                reps: None,
                pairs: Some(c.pairs.iter().map(|&(a, b)| [a, b]).collect()),
            },
        };
        let mut s = serde_json::to_string(&j).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Certificate> {
        let j: CertificateJson = serde_json::from_str(s)?;
        let poly = parse_hex(&j.poly)?;
        let order = if (1..=28).contains(&j.n) {
            (1u64 << j.n) - 1
        } else {
            return Err(Error::Capacity(j.n));
        };
        let check = |v: &[[u32; 2]]| -> Result<Vec<(u32, u32)>> {
            v.iter()
                .map(|&[a, b]| {
                    if a as u64 >= order || b as u64 >= order {
                        Err(Error::Malformed(format!(
                            "exponent pair ({a}, {b}) not reduced mod {order}"
                        )))
                    } else {
                        Ok((a, b))
                    }
                })
                .collect()
        };
        match j.kind.as_str() {
            "singer" => {
                let reps = j
                    .reps
                    .ok_or_else(|| Error::Malformed("singer certificate without reps".into()))?;
                Ok(Certificate::Singer(OrbitCertificate {
                    n: j.n,
                    m: j.m,
                    poly,
                    reps: check(&reps)?,
                }))
            }
            "frobenius" => {
                if j.m != 1 {
                    return Err(Error::Malformed("frobenius certificates have m = 1".into()));
                }
                let pairs = j.pairs.ok_or_else(|| {
                    Error::Malformed("frobenius certificate without pairs".into())
                })?;
                Ok(Certificate::Frobenius(FrobeniusCertificate {
                    n: j.n,
                    poly,
                    pairs: check(&pairs)?,
                }))
            }
            other => Err(Error::Malformed(format!(
                "unknown certificate kind {other:?}"
            ))),
        }
    }
}

/// Rejects `(n, m)` that admit no Singer-invariant GDD (`n - m` must be `0 mod 6`).
pub fn check_mod6(n: u32, m: u32) -> Result<()> {
    if m == 0 || n % m != 0 {
        return Err(Error::Divisibility { n, m });
    }
    if (n - m) % 6 != 0 || n == m {
        return Err(Error::ModSix { n, m });
    }
    Ok(())
}

/// Frobenius pairs to Singer generator reps `(2^j a, -2^j b)`, dropping
/// repeats from short Frobenius cycles.
pub fn frobenius_to_reps(ctx: &FieldCtx, pairs: &[(u32, u32)]) -> Vec<(u32, u32)> {
    let mut seen = HashSet::new();
    let mut reps = Vec::new();
    for &(a, b) in pairs {
        let (mut x, mut y) = (a % ctx.order(), b % ctx.order());
        for _ in 0..ctx.n() {
            let rep = (x, ctx.neg(y));
            if seen.insert(rep) {
                reps.push(rep);
            }
            x = ctx.mul_r(x, 2);
            y = ctx.mul_r(y, 2);
        }
    }
    reps
}

/// Validates Singer reps at the orbit level and returns the three line-orbit
/// keys of every rep. Errors on group lines, degenerate generators, and on
/// any two line orbits coinciding.
pub fn rep_keys(idx: &GammaIndex<'_>, m: u32, reps: &[(u32, u32)]) -> Result<Vec<[u32; 3]>> {
    let ctx = idx.ctx();
    let order = ctx.order();
    let g = order / ((1u32 << m) - 1);
    let mut seen: HashSet<u32> = HashSet::with_capacity(reps.len() * 3);
    let mut out = Vec::with_capacity(reps.len());
    for &(i, j) in reps {
        if i == 0 || j == 0 || i >= order || j >= order || i == j {
            return Err(Error::Malformed(format!(
                "rep ({i}, {j}) does not give three distinct lines"
            )));
        }
        let d = ctx.sub_r(j, i);
        if i % g == 0 || j % g == 0 || d % g == 0 {
            return Err(Error::GroupLineInTriangle(format!(
                "rep ({i}, {j}) has a line inside a group (g = {g})"
            )));
        }
        let keys = [idx.key(i), idx.key(j), idx.key(d)];
        if keys[0] == keys[1] || keys[1] == keys[2] || keys[0] == keys[2] {
            return Err(Error::OrbitCollision(format!(
                "rep ({i}, {j}) uses a line orbit twice (keys {keys:?})"
            )));
        }
        for k in keys {
            if !seen.insert(k) {
                return Err(Error::OrbitCollision(format!(
                    "line orbit {k} is used by two reps (at rep ({i}, {j}))"
                )));
            }
        }
        out.push(keys);
    }
    Ok(out)
}

/// Orbit-level partition summary of a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitLevelReport {
    pub ok: bool,
    /// triangle orbits (18-sets of exponents)
    pub triples: usize,
    pub residues_covered: u64,
    pub residues_expected: u64,
    pub disjoint: bool,
}

/// Checks that the gamma sets of the certificate's triangle orbits partition
/// the residues not divisible by `g = (2^n - 1)/(2^m - 1)`.
pub fn orbit_level_check(ctx: &FieldCtx, cert: &Certificate) -> Result<OrbitLevelReport> {
    let (m, reps) = normalized_reps(ctx, cert)?;
    let order = ctx.order();
    let g = order / ((1u32 << m) - 1);
    let mut hit = vec![false; order as usize];
    let mut disjoint = true;
    let mut covered = 0u64;
    for &(i, j) in &reps {
        for k in [i, j, ctx.sub_r(j, i)] {
            if k == 0 {
                disjoint = false;
                continue;
            }
            for s in gamma(ctx, k as i64)?.elems() {
                if std::mem::replace(&mut hit[*s as usize], true) {
                    disjoint = false;
                } else if s % g != 0 {
                    covered += 1;
                } else {
                    disjoint = false;
                }
            }
        }
    }
    let expected = (order - 1 - (order / g - 1)) as u64;
    Ok(OrbitLevelReport {
        ok: disjoint && covered == expected,
        triples: reps.len(),
        residues_covered: covered,
        residues_expected: expected,
        disjoint,
    })
}

fn normalized_reps(ctx: &FieldCtx, cert: &Certificate) -> Result<(u32, Vec<(u32, u32)>)> {
    if ctx.n() != cert.n() || ctx.poly() != cert.poly() {
        return Err(Error::Precondition(format!(
            "field (n = {}, poly {:#x}) does not match certificate (n = {}, poly {:#x})",
            ctx.n(),
            ctx.poly(),
            cert.n(),
            cert.poly()
        )));
    }
    check_mod6(cert.n(), cert.m())?;
    Ok(match cert {
        Certificate::Singer(c) => (c.m, c.reps.clone()),
        Certificate::Frobenius(c) => (1, frobenius_to_reps(ctx, &c.pairs)),
    })
}

/// Expands a certificate into its full triangle set under the Singer cycle.
///
/// Certificates with `m > 1` always yield a GDD over the Desarguesian spread;
/// for `m = 1`, `with_groups` selects a GDD with point groups instead of a
/// plain design.
pub fn expand_certificate(
    ctx: &FieldCtx,
    cert: &Certificate,
    with_groups: bool,
) -> Result<TriangleSystem> {
    let (m, reps) = normalized_reps(ctx, cert)?;
    let idx = GammaIndex::new(ctx);
    rep_keys(&idx, m, &reps)?;
    let triangles = expand_reps(ctx, &reps);
    let n = ctx.n();
    Ok(if m > 1 || with_groups {
        let groups = if m > 1 {
            desarguesian_spread(ctx, m)?
        } else {
            Spread::points(n)
        };
        TriangleSystem::Gdd(Gdd {
            n,
            poly: ctx.poly(),
            groups,
            triangles,
        })
    } else {
        TriangleSystem::Design(Design {
            n,
            poly: ctx.poly(),
            triangles,
        })
    })
}

/// Singer orbits of the generator triangles `(1, xi^i, xi^j)`, rep by rep.
pub fn expand_reps(ctx: &FieldCtx, reps: &[(u32, u32)]) -> Vec<TriangleV> {
    let order = ctx.order();
    reps.par_iter()
        .flat_map_iter(|&(i, j)| {
            (0..order).map(move |t| {
                TriangleV::from_corners(
                    ctx.exp_r(t),
                    ctx.exp_r(ctx.add_r(i, t)),
                    ctx.exp_r(ctx.add_r(j, t)),
                )
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f7() -> FieldCtx {
        FieldCtx::with_default(7).unwrap()
    }

    // Direct field arithmetic: log of 1 + xi^k without the Zech table.
    fn gamma_by_field(ctx: &FieldCtx, k: u32) -> Vec<u32> {
        let z = |k: u32| ctx.log(1 ^ ctx.exp_r(k)).unwrap();
        let mut v = vec![
            k,
            z(k),
            z(ctx.neg(k)),
            ctx.neg(z(ctx.neg(k))),
            ctx.neg(z(k)),
            ctx.neg(k),
        ];
        v.sort_unstable();
        v.dedup();
        v
    }

    #[test]
    fn gamma_examples() {
        let f = f7();
        assert_eq!(gamma(&f, 1).unwrap().elems(), &[1, 6, 7, 120, 121, 126]);
        assert_eq!(gamma_by_field(&f, 1), vec![1, 6, 7, 120, 121, 126]);
        assert_eq!(gamma(&f, 6).unwrap(), gamma(&f, 1).unwrap());
        let f6 = FieldCtx::with_default(6).unwrap();
        assert_eq!(gamma(&f6, 21).unwrap().elems(), &[21, 42]);
        assert!(matches!(gamma(&f, 0), Err(Error::ZechAtZero)));
        assert!(matches!(gamma(&f, 127), Err(Error::ZechAtZero)));
    }

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(cyclotomic_class(7, 1), vec![1, 2, 4, 8, 16, 32, 64]);
        assert_eq!(cyclotomic_class(7, 0), vec![0]);
        let mut classes = BTreeSet::new();
        for k in 1..127 {
            classes.insert(cyclotomic_class(7, k));
        }
        assert_eq!(classes.len(), 18);
        assert!(classes.iter().all(|c| c.len() == 7));
    }

    #[test]
    fn cy_gamma_examples() {
        let f = f7();
        assert_eq!(cy_gamma(&f, 1).unwrap().len(), 42);
        let f13 = FieldCtx::with_default(13).unwrap();
        assert_eq!(cy_gamma(&f13, 3).unwrap().len(), 78);
        let mut all: Vec<u32> = [1, 9, 10]
            .iter()
            .flat_map(|&k| cy_gamma(&f, k).unwrap())
            .collect();
        all.sort_unstable();
        assert_eq!(all, (1..127).collect::<Vec<_>>());
    }

    #[test]
    fn line_keys() {
        let f = f7();
        let l = Line::through(1, f.exp_r(1));
        assert_eq!(orbit_key_of_line(&f, &l), 1);
        let l = Line::through(f.exp_r(2), f.exp_r(3));
        assert_eq!(orbit_key_of_line(&f, &l), 1);

        let f12 = FieldCtx::with_default(12).unwrap();
        let s = desarguesian_spread(&f12, 6).unwrap();
        let sub = &s.groups[0];
        let l = Line::through(sub[0], sub[1]);
        assert_eq!(orbit_key_of_line(&f12, &l) % 65, 0);
    }

    #[test]
    fn triangle_orbit_examples() {
        let f = f7();
        assert!(is_triangle_orbit(&f, 1, 9, 10).unwrap());
        assert!(matches!(
            is_triangle_orbit(&f, 1, 6, 9),
            Err(Error::Precondition(_))
        ));
    }

    // Brute force: exists a triangle with lines in the three orbits?
    #[test]
    fn triangle_orbit_matches_geometry_n7() {
        let f = f7();
        let idx = GammaIndex::new(&f);
        let mut keys: Vec<u32> = (1..127).map(|k| idx.key(k)).collect();
        keys.sort_unstable();
        keys.dedup();
        assert_eq!(keys.len(), 21);
        // every triangle through 1: corners 1, xi^i, xi^j
        let mut geo = HashSet::new();
        for i in 1..127u32 {
            for j in 1..127u32 {
                if i == j || f.zech_r(i) == j {
                    continue;
                }
                let t = TriangleV::new(1, f.exp_r(i), f.exp_r(j)).unwrap();
                let mut k: Vec<u32> = t.lines().iter().map(|l| idx.line_key(l)).collect();
                k.sort_unstable();
                if k[0] != k[1] && k[1] != k[2] {
                    geo.insert((k[0], k[1], k[2]));
                }
            }
        }
        for (a, &k1) in keys.iter().enumerate() {
            for (b, &k2) in keys.iter().enumerate().skip(a + 1) {
                for &k3 in keys.iter().skip(b + 1) {
                    let alg = is_triangle_orbit(&f, k1 as i64, k2 as i64, k3 as i64).unwrap();
                    assert_eq!(alg, geo.contains(&(k1, k2, k3)), "{k1} {k2} {k3}");
                }
            }
        }
    }

    #[test]
    fn strata_counts() {
        assert_eq!(cyclotomic_strata(7), BTreeMap::from([(1, 1), (7, 18)]));
        let s25 = cyclotomic_strata(25);
        assert_eq!(s25[&5], 6);
        for n in [7u32, 13, 19, 31, 37, 43, 49, 91] {
            for (&t, &c) in &cyclotomic_strata(n) {
                if t > 1 {
                    assert_eq!(c % 18, 0, "n={n} t={t}");
                }
            }
        }
    }

    #[test]
    fn frob7_expands_to_889() {
        let f = f7();
        let cert = Certificate::Frobenius(FrobeniusCertificate {
            n: 7,
            poly: f.poly(),
            pairs: vec![(1, 9)],
        });
        let d = expand_certificate(&f, &cert, false).unwrap();
        assert_eq!(d.triangles().len(), 889);
        let r = d.verify().unwrap();
        assert!(r.ok, "{r}");
        let lvl = orbit_level_check(&f, &cert).unwrap();
        assert!(lvl.ok);
        assert_eq!(lvl.triples, 7);
    }

    #[test]
    fn expansion_rejections() {
        let f = f7();
        let bad = Certificate::Singer(OrbitCertificate {
            n: 7,
            m: 1,
            poly: f.poly(),
            reps: vec![(1, 7)],
        });
        // (1, 7): zech(1) = 7, so the three lines coincide
        assert!(matches!(
            expand_certificate(&f, &bad, false),
            Err(Error::OrbitCollision(_))
        ));
        let dup = Certificate::Singer(OrbitCertificate {
            n: 7,
            m: 1,
            poly: f.poly(),
            reps: vec![(1, 9), (1, 9)],
        });
        assert!(matches!(
            expand_certificate(&f, &dup, false),
            Err(Error::OrbitCollision(_))
        ));
        let f9 = FieldCtx::with_default(9).unwrap();
        let c9 = Certificate::Singer(OrbitCertificate {
            n: 9,
            m: 1,
            poly: f9.poly(),
            reps: vec![(1, 2)],
        });
        assert!(matches!(
            expand_certificate(&f9, &c9, false),
            Err(Error::ModSix { n: 9, m: 1 })
        ));
        let f12 = FieldCtx::with_default(12).unwrap();
        let g = Certificate::Singer(OrbitCertificate {
            n: 12,
            m: 6,
            poly: f12.poly(),
            reps: vec![(65, 3)],
        });
        assert!(matches!(
            expand_certificate(&f12, &g, true),
            Err(Error::GroupLineInTriangle(_))
        ));
    }

    #[test]
    fn certificate_json_round_trip() {
        let c = Certificate::Frobenius(FrobeniusCertificate {
            n: 7,
            poly: 0x83,
            pairs: vec![(1, 9)],
        });
        let s = c.to_json();
        assert_eq!(
            s,
            "{\"kind\":\"frobenius\",\"n\":7,\"m\":1,\"poly\":\"0x83\",\"pairs\":[[1,9]]}\n"
        );
        assert_eq!(Certificate::from_json(&s).unwrap(), c);
        assert!(Certificate::from_json(
            "{\"kind\":\"singer\",\"n\":7,\"m\":1,\"poly\":\"83\",\"reps\":[[1,200]]}"
        )
        .is_err());
    }
}
