//! Explicit constructions: the direct-product recursion, its balanced
//! six-dimensional extension, the `(6k, 6)` tower, and group filling.

use std::collections::HashMap;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::datasets::{self, mu, DESIGN6_SUBFIELD_POLY};
use crate::designs::{
    charge_ledger, verify_balanced_design, verify_design, ChargeLedger, Design, Gdd, TriangleSystem,
};
use crate::error::{Error, Result};
use crate::gf2n::FieldCtx;
use crate::linalg::{
    desarguesian_spread, enumerate_ext_planes, enumerate_lines, ExtPlane, ExtPoints, Line, Spread,
    TriangleV,
};

/// `F_2^(m+n) = F_2^m x F_2^n` with the left factor in the high bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProductLayout {
    pub m: u32,
    pub n: u32,
}

impl ProductLayout {
    #[inline]
    pub fn pack(&self, x: u32, u: u32) -> u32 {
        (x << self.n) | u
    }

    #[inline]
    pub fn split(&self, p: u32) -> (u32, u32) {
        (p >> self.n, p & ((1 << self.n) - 1))
    }

    pub fn dim(&self) -> u32 {
        self.m + self.n
    }
}

/// The empty design on `F_2^1`.
pub fn trivial_design() -> Design {
    Design {
        n: 1,
        poly: 0,
        triangles: Vec::new(),
    }
}

/// Triangle counts of the six product families.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ProductCensus {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
    pub e: u64,
    pub f: u64,
}

impl ProductCensus {
    pub fn total(&self) -> u64 {
        self.a + self.b + self.c + self.d + self.e + self.f
    }

    /// Counts required for factors of dimensions `m` (plain side) and `n`
    /// (spread side).
    pub fn expected(m: u32, n: u32) -> ProductCensus {
        let lines = |k: u32| ((1u64 << k) - 1) * ((1u64 << k) - 2) / 6;
        let (um, un) = (lines(m), lines(n));
        let (pm, pn) = ((1u64 << m) - 1, (1u64 << n) - 1);
        let s = pn / 3;
        ProductCensus {
            a: um / 3,
            b: un / 3,
            c: 2 * um * un,
            d: pn * um,
            e: pm * (un - s),
            f: 2 * pm * s,
        }
    }
}

pub struct ProductOutput {
    pub design: Design,
    pub census: ProductCensus,
}

/// Roles of the two factors: `plain` carries the triangles that get paired
/// with lines, `spread` the even factor whose line spread is used.
struct Roles<'a> {
    plain: &'a Design,
    spread: &'a Design,
    pack: Box<dyn Fn(u32, u32) -> u32 + Sync + 'a>,
}

fn roles<'a>(left: &'a Design, right: &'a Design) -> Result<Roles<'a>> {
    let lay = ProductLayout {
        m: left.n,
        n: right.n,
    };
    if right.n % 2 == 0 {
        Ok(Roles {
            plain: left,
            spread: right,
            pack: Box::new(move |p, q| lay.pack(p, q)),
        })
    } else if left.n % 2 == 0 {
        Ok(Roles {
            plain: right,
            spread: left,
            pack: Box::new(move |p, q| lay.pack(q, p)),
        })
    } else {
        Err(Error::Parity(left.n, right.n))
    }
}

fn default_line_spread(n: u32) -> Result<Spread> {
    desarguesian_spread(&FieldCtx::with_default(n)?, 2)
}

fn check_line_spread(s: &Spread, n: u32) -> Result<()> {
    if s.n != n || s.dim != 2 {
        return Err(Error::Spread(format!(
            "expected a line spread of F_2^{n}, got dim {} in F_2^{}",
            s.dim, s.n
        )));
    }
    s.validate()
}

fn ordered(l: &Line) -> [[u32; 3]; 6] {
    let [a, b, c] = l.points();
    [
        [a, b, c],
        [a, c, b],
        [b, a, c],
        [b, c, a],
        [c, a, b],
        [c, b, a],
    ]
}

/// Triangles with corners `(x, u), (y, v), (z, w)` for each triangle of the
/// plain factor and each ordering of each line of the spread factor.
fn family_c(plain: &Design, n: u32, pack: &(dyn Fn(u32, u32) -> u32 + Sync)) -> Vec<TriangleV> {
    let lines: Vec<Line> = enumerate_lines(n).collect();
    plain
        .triangles
        .par_iter()
        .flat_map_iter(|t| {
            let [x, y, z] = t.corners();
            lines.iter().flat_map(move |l| {
                ordered(l)
                    .map(|[u, v, w]| TriangleV::from_corners(pack(x, u), pack(y, v), pack(z, w)))
            })
        })
        .collect()
}

/// The direct-product construction on `F_2^(m+n)`; at least one factor must
/// have even dimension. The spread defaults to the `F_4`-cosets.
pub fn product(left: &Design, right: &Design, spread: Option<&Spread>) -> Result<ProductOutput> {
    let r = roles(left, right)?;
    let (m, n) = (r.plain.n, r.spread.n);
    if m + n > 31 {
        return Err(Error::Capacity(m + n));
    }
    let owned;
    let s = match spread {
        Some(s) => s,
        None => {
            owned = default_line_spread(n)?;
            &owned
        }
    };
    check_line_spread(s, n)?;
    let pack = &*r.pack;
    let mut census = ProductCensus::default();
    let mut out: Vec<TriangleV> = Vec::new();

    out.extend(r.plain.triangles.iter().map(|t| t.map(|x| pack(x, 0))));
    census.a = out.len() as u64;
    out.extend(r.spread.triangles.iter().map(|t| t.map(|u| pack(0, u))));
    census.b = out.len() as u64 - census.a;

    let c = family_c(r.plain, n, pack);
    census.c = c.len() as u64;
    out.extend(c);

    let before = out.len();
    for l in enumerate_lines(m) {
        let [x, y, z] = l.points();
        for v in 1..1u32 << n {
            out.push(TriangleV::from_corners(pack(x, v), pack(y, v), pack(z, v)));
        }
    }
    census.d = (out.len() - before) as u64;

    let mem = s.membership();
    let before = out.len();
    for l in enumerate_lines(n) {
        let [u, v, w] = l.points();
        if mem[u as usize] != u32::MAX
            && mem[u as usize] == mem[v as usize]
            && mem[v as usize] == mem[w as usize]
        {
            continue;
        }
        for y in 1..1u32 << m {
            out.push(TriangleV::from_corners(pack(y, u), pack(y, v), pack(y, w)));
        }
    }
    census.e = (out.len() - before) as u64;

    let before = out.len();
    for g in &s.groups {
        let (u, v, w) = (g[0], g[1], g[2]);
        for y in 1..1u32 << m {
            out.extend(spread_pair(pack, y, u, v, w));
        }
    }
    census.f = (out.len() - before) as u64;

    let expected = ProductCensus::expected(m, n);
    if census != expected {
        return Err(Error::Construction(format!(
            "family census {census:?} differs from {expected:?}"
        )));
    }
    Ok(ProductOutput {
        design: Design {
            n: m + n,
            poly: 0,
            triangles: out,
        },
        census,
    })
}

/// The two triangles covering the lines over a spread line `{u, v, w}` at
/// `y`; `(0, u)` takes charge -2, `(0, v)` and `(0, w)` take +1.
#[inline]
fn spread_pair(
    pack: &(dyn Fn(u32, u32) -> u32 + Sync),
    y: u32,
    u: u32,
    v: u32,
    w: u32,
) -> [TriangleV; 2] {
    [
        TriangleV::from_corners(pack(y, 0), pack(0, v), pack(y, u)),
        TriangleV::from_corners(pack(0, w), pack(y, v), pack(y, w)),
    ]
}

/// Three triangles covering the nine lines over a triangle `x, y, z` of one
/// factor and a fixed nonzero `v` of the other, with `(., 0)` placed at each
/// corner in turn. Corner points gain charge, non-corner points lose it.
#[inline]
fn grouped_triple(pack: impl Fn(u32, u32) -> u32, t: &TriangleV, v: u32) -> [TriangleV; 3] {
    let [x, y, z] = t.corners();
    [
        TriangleV::from_corners(pack(x, 0), pack(y, v), pack(z, v)),
        TriangleV::from_corners(pack(x, v), pack(y, 0), pack(z, v)),
        TriangleV::from_corners(pack(x, v), pack(y, v), pack(z, 0)),
    ]
}

/// Charges left on `(0, v)` by the embedded six-dimensional design, indexed
/// by `v`.
pub fn design6_profile() -> Vec<i64> {
    let d = datasets::design6();
    let l = charge_ledger(6, &d.triangles);
    (0..64).map(|v| l.charge(v)).collect()
}

/// Which point of each line of `lines` takes charge -2 so that, summed over
/// all 31 rotations `mu_t`, the charges on `(0, .)` become `+31` at `(1, 0)`,
/// `-2` at each `(0, y)` and `+1` at each `(1, y)`, `y != 0`.
fn special_roles(lines: &[Vec<u32>]) -> Result<Vec<usize>> {
    // per choice: (charge at (1,0), sum over (0,y), sum over (1,y))
    let effect = |l: &[u32], r: usize| -> (i32, i32, i32) {
        let mut e = (0, 0, 0);
        for (k, &p) in l.iter().enumerate() {
            let c = if k == r { -2 } else { 1 };
            if p == 0x20 {
                e.0 += c;
            } else if p & 0x20 == 0 {
                e.1 += c;
            } else {
                e.2 += c;
            }
        }
        e
    };
    type Charges = (i32, i32, i32);
    let target = (1, -2, 1);
    let mut dead = std::collections::HashSet::new();
    let mut choice = vec![0usize; lines.len()];
    fn go(
        i: usize,
        acc: Charges,
        lines: &[Vec<u32>],
        effect: &dyn Fn(&[u32], usize) -> Charges,
        target: Charges,
        choice: &mut [usize],
        dead: &mut std::collections::HashSet<(usize, Charges)>,
    ) -> bool {
        if i == lines.len() {
            return acc == target;
        }
        if dead.contains(&(i, acc)) {
            return false;
        }
        for r in 0..3 {
            let e = effect(&lines[i], r);
            choice[i] = r;
            if go(
                i + 1,
                (acc.0 + e.0, acc.1 + e.1, acc.2 + e.2),
                lines,
                effect,
                target,
                choice,
                dead,
            ) {
                return true;
            }
        }
        dead.insert((i, acc));
        false
    }
    if go(0, (0, 0, 0), lines, &effect, target, &mut choice, &mut dead) {
        Ok(choice)
    } else {
        Err(Error::Construction(
            "no role assignment on the special spread cancels the embedded charges".into(),
        ))
    }
}

pub struct BalancedExtension {
    pub design: Design,
    /// Charges after all parts except the spread part, on `(0, v)`, `v < 64`.
    pub intermediate_profile: Vec<i64>,
    /// Whether every other point was left at zero before the spread part.
    pub intermediate_clean: bool,
    /// The 31 values of `y` whose spreads are rotated.
    pub special_y: Vec<u32>,
}

/// Balanced design on `F_2^(m+6)` from a balanced design on `F_2^m`,
/// `m >= 7`. The six-dimensional factor is the embedded `F_2 x F_32` design.
pub fn balanced_extension(tm: &Design) -> Result<BalancedExtension> {
    let m = tm.n;
    if m < 7 {
        return Err(Error::Precondition(format!(
            "balanced extension needs dimension >= 7, got {m}"
        )));
    }
    if m + 6 > 28 {
        return Err(Error::Capacity(m + 6));
    }
    let r = verify_design(tm)?;
    if !r.ok {
        return Err(Error::Precondition(format!(
            "input is not a triangle design:\n{r}"
        )));
    }
    let b = verify_balanced_design(tm);
    if !b.balanced {
        return Err(Error::Precondition(format!(
            "input design is not balanced: {b}"
        )));
    }
    let lay = ProductLayout { m, n: 6 };
    let pack = |x: u32, u: u32| lay.pack(x, u);
    let t6 = datasets::design6();
    let g62 = datasets::gdd6_2();
    let f5 = FieldCtx::new(5, Some(DESIGN6_SUBFIELD_POLY))?;
    let rot = |t: u32, p: u32| mu(&f5, t, p);

    let special_y: Vec<u32> = (1..=31).collect();
    let plain_y: Vec<u32> = (32..1u32 << m).collect();

    let mut out: Vec<TriangleV> =
        Vec::with_capacity(ProductCensus::expected(m, 6).total() as usize);
    out.extend(tm.triangles.iter().map(|t| t.map(|x| pack(x, 0))));
    out.extend(t6.triangles.iter().map(|t| t.map(|u| pack(0, u))));
    out.extend(family_c(tm, 6, &pack));
    let d: Vec<TriangleV> = tm
        .triangles
        .par_iter()
        .flat_map_iter(|t| (1..64u32).flat_map(move |v| grouped_triple(pack, t, v)))
        .collect();
    out.extend(d);
    // (y, .) with the six-dimensional coordinate first, so (0, .) sits at corners
    let swapped = |u: u32, y: u32| pack(y, u);
    let rotated_gdd = |t: u32| -> Vec<TriangleV> {
        g62.triangles
            .iter()
            .map(|tr| tr.map(|p| rot(t, p)))
            .collect()
    };
    let base_e: Vec<TriangleV> = g62.triangles.clone();
    for &y in &plain_y {
        for tr in &base_e {
            out.extend(grouped_triple(swapped, tr, y));
        }
    }
    for (t, &y) in special_y.iter().enumerate() {
        for tr in rotated_gdd(t as u32) {
            out.extend(grouped_triple(swapped, &tr, y));
        }
    }

    let ledger = charge_ledger(lay.dim(), &out);
    let intermediate_profile: Vec<i64> = (0..64).map(|v| ledger.charge(pack(0, v))).collect();
    let intermediate_clean = ledger
        .nonzero(usize::MAX)
        .iter()
        .all(|&(p, _)| lay.split(p).0 == 0);

    let s0 = &g62.groups.groups;
    for (blk, ys) in plain_y.chunks(3).enumerate() {
        if ys.len() != 3 {
            return Err(Error::Construction(format!(
                "plain values of y do not split into triples (block {blk})"
            )));
        }
        for (k, &y) in ys.iter().enumerate() {
            for g in s0 {
                let (u, v, w) = (g[k], g[(k + 1) % 3], g[(k + 2) % 3]);
                out.extend(spread_pair(&pack, y, u, v, w));
            }
        }
    }
    let roles = special_roles(s0)?;
    for (t, &y) in special_y.iter().enumerate() {
        for (g, &k) in s0.iter().zip(&roles) {
            let (u, v, w) = (g[k], g[(k + 1) % 3], g[(k + 2) % 3]);
            let t = t as u32;
            out.extend(spread_pair(&pack, y, rot(t, u), rot(t, v), rot(t, w)));
        }
    }

    let design = Design {
        n: lay.dim(),
        poly: 0,
        triangles: out,
    };
    let mut final_ledger = ChargeLedger::new(design.n);
    final_ledger.add_all(&design.triangles);
    if !final_ledger.is_zero() {
        return Err(Error::Construction(format!(
            "charges do not cancel; first nonzero entries: {:?}",
            final_ledger.nonzero(10)
        )));
    }
    let r = verify_design(&design)?;
    if !r.ok {
        return Err(Error::Construction(format!(
            "result is not a triangle design:\n{r}"
        )));
    }
    let b = verify_balanced_design(&design);
    if !b.balanced {
        return Err(Error::Construction(format!("result is not balanced: {b}")));
    }
    Ok(BalancedExtension {
        design,
        intermediate_profile,
        intermediate_clean,
        special_y,
    })
}

/// `F_2`-linear map of `F_4096` into a plane of `F_(2^(6k))`, as two
/// byte-indexed tables over the low and high six bits.
#[derive(Clone, Copy, Debug)]
pub struct PlaneMap {
    lo: [u32; 64],
    hi: [u32; 64],
}

impl PlaneMap {
    fn from_basis(images: &[u32; 12]) -> PlaneMap {
        let mut lo = [0u32; 64];
        let mut hi = [0u32; 64];
        for x in 1..64usize {
            let b = x.trailing_zeros() as usize;
            lo[x] = lo[x & (x - 1)] ^ images[b];
            hi[x] = hi[x & (x - 1)] ^ images[6 + b];
        }
        PlaneMap { lo, hi }
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.lo[(x & 63) as usize] ^ self.hi[(x >> 6) as usize]
    }

    /// Preimage of `y` if it lies in the plane.
    pub fn invert(&self, y: u32) -> Option<u32> {
        // echelon basis with distinct leading bits, kept in descending order
        let mut basis: Vec<(u32, u32)> = Vec::with_capacity(12);
        for i in 0..12 {
            let (mut v, mut c) = (self.apply(1 << i), 1u32 << i);
            for &(b, bc) in &basis {
                if v ^ b < v {
                    v ^= b;
                    c ^= bc;
                }
            }
            if v != 0 {
                basis.push((v, c));
                basis.sort_unstable_by_key(|b| std::cmp::Reverse(b.0));
            }
        }
        let (mut y, mut acc) = (y, 0u32);
        for &(b, bc) in &basis {
            if y ^ b < y {
                y ^= b;
                acc ^= bc;
            }
        }
        (y == 0).then_some(acc)
    }
}

/// The `(6k, 6)` GDD built plane by plane from the embedded `(12, 6)` GDD.
pub struct Tower {
    pub k: u32,
    ctx: FieldCtx,
    planes: Vec<ExtPlane>,
    base: Vec<TriangleV>,
    /// `(psi(alpha_i), psi(beta_i))` where `e_i = alpha_i + beta_i xi`
    coords: [(u32, u32); 12],
    base_lines: OnceLock<Vec<u8>>,
}

impl Tower {
    pub fn new(k: u32) -> Result<Tower> {
        if k == 0 || 6 * k > crate::gf2n::MAX_DEGREE {
            return Err(Error::Capacity(6 * k));
        }
        let ctx = FieldCtx::with_default(6 * k)?;
        if k == 1 {
            return Ok(Tower {
                k,
                ctx,
                planes: Vec::new(),
                base: Vec::new(),
                coords: [(0, 0); 12],
                base_lines: OnceLock::new(),
            });
        }
        let base = datasets::gdd12_6();
        let f12 = FieldCtx::new(12, Some(base.poly))?;
        let coords = {
            let psi = subfield_isomorphism(&f12, &ctx)?;
            // F_64 inside F_4096 is {0} u {xi^(65 j)}
            let sub: Vec<u32> = std::iter::once(0)
                .chain((0..63).map(|j| f12.exp_r(65 * j)))
                .collect();
            let xi = f12.exp_r(1);
            let mut decomp: HashMap<u32, (u32, u32)> = HashMap::with_capacity(4096);
            for &a in &sub {
                for &b in &sub {
                    decomp.insert(a ^ f12.mul(b, xi), (a, b));
                }
            }
            let mut coords = [(0, 0); 12];
            for (i, c) in coords.iter_mut().enumerate() {
                let (a, b) = decomp[&(1 << i)];
                *c = (psi(a), psi(b));
            }
            coords
        };
        let planes = enumerate_ext_planes(&ctx, 6)?;
        Ok(Tower {
            k,
            ctx,
            planes,
            base: base.triangles,
            coords,
            base_lines: OnceLock::new(),
        })
    }

    pub fn n(&self) -> u32 {
        6 * self.k
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn planes(&self) -> &[ExtPlane] {
        &self.planes
    }

    pub fn per_plane(&self) -> u64 {
        self.base.len() as u64
    }

    /// `|planes| * |triangles per plane|`.
    pub fn triangle_count(&self) -> u64 {
        self.planes.len() as u64 * self.per_plane()
    }

    pub fn groups(&self) -> Result<Spread> {
        desarguesian_spread(&self.ctx, 6)
    }

    pub fn plane_map(&self, p: &ExtPlane) -> PlaneMap {
        let mut images = [0u32; 12];
        for (img, &(a, b)) in images.iter_mut().zip(&self.coords) {
            *img = self.ctx.mul(a, p.u) ^ self.ctx.mul(b, p.v);
        }
        PlaneMap::from_basis(&images)
    }

    pub fn plane_triangles(&self, i: usize) -> impl Iterator<Item = TriangleV> + '_ {
        let map = self.plane_map(&self.planes[i]);
        self.base.iter().map(move |t| t.map(|x| map.apply(x)))
    }

    /// Resumable stream over all triangles, plane by plane.
    pub fn cursor(&self) -> TowerCursor<'_> {
        TowerCursor {
            tower: self,
            plane: 0,
            offset: 0,
            map: self.planes.first().map(|p| self.plane_map(p)),
        }
    }

    /// Streams every triangle once and counts the valid ones.
    pub fn stream_count(&self) -> u64 {
        (0..self.planes.len())
            .into_par_iter()
            .map(|i| self.plane_triangles(i).filter(TriangleV::is_valid).count() as u64)
            .sum()
    }

    pub fn into_gdd(self) -> Result<Gdd> {
        let groups = self.groups()?;
        let triangles: Vec<TriangleV> = (0..self.planes.len())
            .into_par_iter()
            .flat_map_iter(|i| self.plane_triangles(i).collect::<Vec<_>>())
            .collect();
        Ok(Gdd {
            n: self.n(),
            poly: self.ctx.poly(),
            groups,
            triangles,
        })
    }

    fn base_line_table(&self) -> &[u8] {
        self.base_lines.get_or_init(|| {
            let mut t = vec![0u8; 1 << 24];
            for tr in &self.base {
                for l in tr.lines() {
                    let c = &mut t[l.flat_index(12)];
                    *c = c.saturating_add(1);
                }
            }
            t
        })
    }

    /// Number of tower triangles through the line `{x, y, x ^ y}`, found by
    /// pulling the line back into the base design of its plane. Group lines
    /// report 0.
    pub fn line_coverage(&self, x: u32, y: u32) -> Result<u32> {
        if self.k == 1 {
            Line::new(x, y)?;
            return Ok(0);
        }
        self.line_coverage_in(&ExtPoints::new(&self.ctx, 6)?, x, y)
    }

    fn line_coverage_in(&self, pts: &ExtPoints<'_>, x: u32, y: u32) -> Result<u32> {
        let l = Line::new(x, y)?;
        let [x, y, _] = l.points();
        if pts.point_of(x) == pts.point_of(y) {
            return Ok(0);
        }
        let plane = pts.canonical_plane(x, y);
        let map = self.plane_map(&plane);
        let (px, py) = match (map.invert(x), map.invert(y)) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::Construction(format!(
                    "line ({x:#x}, {y:#x}) not inside its own plane"
                )))
            }
        };
        Ok(self.base_line_table()[Line::through(px, py).flat_index(12)] as u32)
    }

    /// Coverage of `samples` uniformly random non-group lines; returns the
    /// number covered exactly once.
    pub fn sample_coverage(&self, samples: usize, seed: u64) -> Result<usize> {
        if self.planes.is_empty() {
            return Err(Error::Precondition(
                "a single group has no non-group lines".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = ExtPoints::new(&self.ctx, 6)?;
        let size = self.ctx.size();
        let mut ok = 0;
        let mut done = 0;
        while done < samples {
            let x = rng.gen_range(1..size);
            let y = rng.gen_range(1..size);
            if x == y || pts.point_of(x) == pts.point_of(y) {
                continue;
            }
            done += 1;
            if self.line_coverage_in(&pts, x, y)? == 1 {
                ok += 1;
            }
        }
        Ok(ok)
    }
}

pub struct TowerCursor<'a> {
    tower: &'a Tower,
    pub plane: usize,
    pub offset: usize,
    map: Option<PlaneMap>,
}

impl TowerCursor<'_> {
    /// Moves to triangle `offset` of plane `plane`.
    pub fn seek(&mut self, plane: usize, offset: usize) {
        self.plane = plane;
        self.offset = offset;
        self.map = self
            .tower
            .planes
            .get(plane)
            .map(|p| self.tower.plane_map(p));
    }
}

impl Iterator for TowerCursor<'_> {
    type Item = TriangleV;

    fn next(&mut self) -> Option<TriangleV> {
        loop {
            let map = self.map?;
            if let Some(t) = self.tower.base.get(self.offset) {
                self.offset += 1;
                return Some(t.map(|x| map.apply(x)));
            }
            self.seek(self.plane + 1, 0);
        }
    }
}

/// Field isomorphism from `F_64` inside `small` onto `F_64` inside `big`,
/// as a map on vectors.
fn subfield_isomorphism<'a>(
    small: &'a FieldCtx,
    big: &'a FieldCtx,
) -> Result<impl Fn(u32) -> u32 + 'a> {
    let gs = small.order() / 63;
    let gb = big.order() / 63;
    for e in (1..63u32).filter(|e| gcd(*e, 63) == 1) {
        // gamma^j -> beta^j with gamma = xi_s^gs, beta = xi_b^(gb e)
        let img = |j: u32| big.exp_r(big.mul_r(gb, e * j % 63));
        let additive = (0..63u32).all(|j| {
            let s = 1 ^ small.exp_r(gs * j);
            let lhs = if s == 0 { 0 } else { img(small.log_nz(s) / gs) };
            lhs == 1 ^ img(j)
        });
        if additive {
            let table: HashMap<u32, u32> = std::iter::once((0, 0))
                .chain((0..63).map(|j| (small.exp_r(gs * j), img(j))))
                .collect();
            return Ok(move |x: u32| table[&x]);
        }
    }
    Err(Error::Construction(
        "no field isomorphism between the F_64 subfields".into(),
    ))
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// The `(6k, 6)` GDD, materialized. For large `k` use [`Tower`] directly.
pub fn gdd_6k_6(k: u32) -> Result<Gdd> {
    let t = Tower::new(k)?;
    if t.triangle_count() > 50_000_000 {
        return Err(Error::Precondition(format!(
            "{} triangles; stream them through Tower instead of materializing",
            t.triangle_count()
        )));
    }
    t.into_gdd()
}

/// Independent `F_2`-basis of a group given as a sorted subspace minus 0.
fn group_basis(g: &[u32], dim: u32) -> Result<Vec<u32>> {
    let mut basis: Vec<u32> = Vec::new();
    let mut reduced: Vec<u32> = Vec::new();
    for &v in g {
        let mut r = v;
        for &b in &reduced {
            r = r.min(r ^ b);
        }
        if r != 0 {
            basis.push(v);
            reduced.push(r);
            reduced.sort_unstable_by(|a, b| b.cmp(a));
        }
        if basis.len() == dim as usize {
            break;
        }
    }
    if basis.len() != dim as usize {
        return Err(Error::Spread(format!(
            "group spans {} dimensions, expected {dim}",
            basis.len()
        )));
    }
    Ok(basis)
}

/// Per-group linear embeddings `F_2^m -> group`: `x -> xi^i rho(x)` for a
/// Desarguesian spread, an arbitrary basis otherwise.
fn group_embeddings(g: &Gdd) -> Result<Vec<Vec<u32>>> {
    let m = g.groups.dim;
    let field = if g.poly != 0 {
        FieldCtx::new(g.n, Some(g.poly)).ok()
    } else {
        None
    };
    if let Some(ctx) = field {
        let des = desarguesian_spread(&ctx, m)?;
        let mut sorted_groups = g.groups.groups.clone();
        sorted_groups.sort();
        let mut des_sorted = des.groups.clone();
        des_sorted.sort();
        if sorted_groups == des_sorted {
            let step = ctx.order() / ((1 << m) - 1);
            let gamma_pows: Vec<u32> = (0..m).map(|j| ctx.exp_r(step * j % ctx.order())).collect();
            return g
                .groups
                .groups
                .iter()
                .map(|grp| {
                    // coset xi^i F_(2^m) with i the smallest exponent in the group
                    let i = grp.iter().map(|&v| ctx.log_nz(v) % step).next().unwrap();
                    Ok(gamma_pows.iter().map(|&p| ctx.scale(p, i)).collect())
                })
                .collect();
        }
    }
    g.groups
        .groups
        .iter()
        .map(|grp| group_basis(grp, m))
        .collect()
}

#[inline]
fn apply_basis(basis: &[u32], x: u32) -> u32 {
    basis
        .iter()
        .enumerate()
        .filter(|(i, _)| x >> i & 1 == 1)
        .fold(0, |acc, (_, &b)| acc ^ b)
}

/// Fills every group of `g` with a copy of `filler`. A plain filler gives a
/// design; a GDD filler gives a GDD with the images of its groups.
pub fn fill_groups(g: &Gdd, filler: &TriangleSystem) -> Result<TriangleSystem> {
    let m = g.groups.dim;
    if filler.n() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: filler.n(),
        });
    }
    g.groups.validate()?;
    let r = filler.verify()?;
    if !r.ok {
        return Err(Error::Precondition(format!("filler does not verify:\n{r}")));
    }
    let emb = group_embeddings(g)?;
    let mut triangles = g.triangles.clone();
    for basis in &emb {
        triangles.extend(
            filler
                .triangles()
                .iter()
                .map(|t| t.map(|x| apply_basis(basis, x))),
        );
    }
    Ok(match filler {
        TriangleSystem::Design(_) => TriangleSystem::Design(Design {
            n: g.n,
            poly: g.poly,
            triangles,
        }),
        TriangleSystem::Gdd(f) => {
            let groups = emb
                .iter()
                .flat_map(|basis| {
                    f.groups
                        .groups
                        .iter()
                        .map(move |sub| sub.iter().map(|&x| apply_basis(basis, x)).collect())
                })
                .collect();
            TriangleSystem::Gdd(Gdd {
                n: g.n,
                poly: g.poly,
                groups: Spread::from_groups(g.n, f.groups.dim, groups),
                triangles,
            })
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::{verify_balanced_gdd, verify_gdd};

    #[test]
    fn census_formulas() {
        let c = ProductCensus::expected(1, 6);
        assert_eq!(
            c,
            ProductCensus {
                a: 0,
                b: 217,
                c: 0,
                d: 0,
                e: 630,
                f: 42
            }
        );
        assert_eq!(c.total(), 889);
        assert_eq!(ProductCensus::expected(6, 6).total(), 931_385);
        assert_eq!(ProductCensus::expected(7, 6).total(), 3_726_905);
    }

    #[test]
    fn product_6_1() {
        let p = product(&datasets::design6(), &trivial_design(), None).unwrap();
        assert_eq!(p.census.total(), 889);
        assert_eq!(p.design.n, 7);
        assert!(verify_design(&p.design).unwrap().ok);
        // left factor in the high bits
        let q = product(&trivial_design(), &datasets::design6(), None).unwrap();
        assert!(verify_design(&q.design).unwrap().ok);
        assert_ne!(p.design.triangles, q.design.triangles);
    }

    #[test]
    fn product_parity() {
        let f7 = datasets::frob7();
        assert!(matches!(product(&f7, &f7, None), Err(Error::Parity(7, 7))));
    }

    #[test]
    fn product_with_bad_spread() {
        let bad = Spread::points(6);
        assert!(matches!(
            product(&datasets::design6(), &trivial_design(), Some(&bad)),
            Err(Error::Spread(_))
        ));
    }

    #[test]
    fn design6_charge_profile() {
        let p = design6_profile();
        assert_eq!(p[0x20], -31);
        for y in 1..32 {
            assert_eq!(p[y], 2, "(0, {y})");
            assert_eq!(p[0x20 | y], -1, "(1, {y})");
        }
    }

    #[test]
    fn special_roles_exist() {
        let g = datasets::gdd6_2();
        let roles = special_roles(&g.groups.groups).unwrap();
        assert_eq!(roles.len(), 21);
    }

    #[test]
    fn balanced_extension_rejects() {
        assert!(matches!(
            balanced_extension(&datasets::design6()),
            Err(Error::Precondition(_))
        ));
        let unbalanced = product(&datasets::design6(), &trivial_design(), None)
            .unwrap()
            .design;
        assert!(matches!(
            balanced_extension(&unbalanced),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn plane_map_inverts() {
        let t = Tower::new(2).unwrap();
        let map = t.plane_map(&t.planes()[0]);
        for x in [1u32, 2, 77, 4095] {
            assert_eq!(map.invert(map.apply(x)), Some(x));
        }
        let t1 = Tower::new(1).unwrap();
        assert_eq!(t1.triangle_count(), 0);
        let g = gdd_6k_6(1).unwrap();
        assert_eq!((g.groups.groups.len(), g.triangles.len()), (1, 0));
    }

    #[test]
    fn fill_small() {
        let g = datasets::gdd6_2();
        // a single group filled by itself reproduces the input GDD
        let one = Gdd {
            n: 2,
            poly: 0,
            groups: Spread::from_groups(2, 2, vec![vec![1, 2, 3]]),
            triangles: vec![],
        };
        let filled = fill_groups(&g, &TriangleSystem::Gdd(one))
            .unwrap()
            .into_gdd()
            .unwrap();
        assert!(verify_gdd(&filled).unwrap().ok);
        let mut a = filled.groups.groups.clone();
        let mut b = g.groups.groups.clone();
        a.sort();
        b.sort();
        assert_eq!(a, b);
        let empty = TriangleSystem::Design(Design {
            n: 2,
            poly: 0,
            triangles: vec![],
        });
        assert!(matches!(
            fill_groups(&g, &empty),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            fill_groups(&g, &TriangleSystem::Design(datasets::frob7())),
            Err(Error::DimensionMismatch {
                expected: 2,
                got: 7
            })
        ));
        let gd = verify_gdd(&g).unwrap();
        assert!(gd.ok);
        assert!(verify_balanced_gdd(&g).balanced);
    }
}
