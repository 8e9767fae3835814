//! Projective lines, triangles and spreads of `F_2^n`.
//!
//! A 2-dimensional subspace `{0, x, y, x^y}` is stored as its three nonzero
//! vectors (a projective line). Vectors are `u32` bit masks.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2n::FieldCtx;

/// A projective line of `F_2^n`, stored sorted: `x < y < z`, `x ^ y == z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line([u32; 3]);

impl Line {
    /// The line through `x` and `y`.
    pub fn new(x: u32, y: u32) -> Result<Line> {
        if x == 0 || y == 0 || x == y {
            return Err(Error::DegenerateLine(x, y));
        }
        Ok(Line::through(x, y))
    }

    /// Unchecked version of [`Line::new`].
    #[inline]
    pub fn through(x: u32, y: u32) -> Line {
        debug_assert!(x != 0 && y != 0 && x != y);
        let z = x ^ y;
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        let pts = if z < lo {
            [z, lo, hi]
        } else if z < hi {
            [lo, z, hi]
        } else {
            [lo, hi, z]
        };
        Line(pts)
    }

    #[inline]
    pub fn points(&self) -> [u32; 3] {
        self.0
    }

    #[inline]
    pub fn contains(&self, v: u32) -> bool {
        self.0.contains(&v)
    }

    /// Packs the two smallest vectors into one key; unique per line.
    #[inline]
    pub fn key(&self) -> u64 {
        ((self.0[0] as u64) << 32) | self.0[1] as u64
    }

    pub fn from_key(key: u64) -> Line {
        let x = (key >> 32) as u32;
        let y = key as u32;
        Line([x, y, x ^ y])
    }

    /// Dense index `x * 2^n + y`, for flat presence tables.
    #[inline]
    pub fn flat_index(&self, n: u32) -> usize {
        ((self.0[0] as usize) << n) | self.0[1] as usize
    }

    fn meet(&self, other: &Line) -> Option<u32> {
        let mut found = None;
        for p in self.0 {
            if other.contains(p) {
                if found.is_some() {
                    return None;
                }
                found = Some(p);
            }
        }
        found
    }
}

/// Canonical line through `x` and `y`.
pub fn canonical_line(x: u32, y: u32) -> Result<Line> {
    Line::new(x, y)
}

/// True iff the three lines pairwise meet in single, distinct points.
pub fn is_triangle(l1: &Line, l2: &Line, l3: &Line) -> bool {
    if l1 == l2 || l2 == l3 || l1 == l3 {
        return false;
    }
    match (l1.meet(l2), l2.meet(l3), l3.meet(l1)) {
        (Some(a), Some(b), Some(c)) => a != b && b != c && a != c,
        _ => false,
    }
}

/// A triangle `{<a,b>, <b,c>, <c,a>}` stored by its sorted corners.
///
/// The corners are the pairwise intersections of the lines, so two
/// triangles have equal line sets iff their corner sets are equal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TriangleV([u32; 3]);

impl TriangleV {
    pub fn new(a: u32, b: u32, c: u32) -> Result<TriangleV> {
        if a == 0 || b == 0 || c == 0 || a == b || b == c || a == c || a ^ b ^ c == 0 {
            return Err(Error::Malformed(format!(
                "generators ({a:#x}, {b:#x}, {c:#x}) are not linearly independent"
            )));
        }
        Ok(TriangleV::from_corners(a, b, c))
    }

    /// Unchecked constructor; sorts the corners.
    #[inline]
    pub fn from_corners(a: u32, b: u32, c: u32) -> TriangleV {
        let mut g = [a, b, c];
        g.sort_unstable();
        TriangleV(g)
    }

    /// Raw generator triple as stored (may be unvalidated when read from a file).
    #[inline]
    pub fn raw(gens: [u32; 3]) -> TriangleV {
        TriangleV(gens)
    }

    #[inline]
    pub fn corners(&self) -> [u32; 3] {
        self.0
    }

    #[inline]
    pub fn noncorners(&self) -> [u32; 3] {
        let [a, b, c] = self.0;
        [a ^ b, b ^ c, c ^ a]
    }

    #[inline]
    pub fn lines(&self) -> [Line; 3] {
        let [a, b, c] = self.0;
        [
            Line::through(a, b),
            Line::through(b, c),
            Line::through(c, a),
        ]
    }

    pub fn is_valid(&self) -> bool {
        let [a, b, c] = self.0;
        a != 0 && b != 0 && c != 0 && a != b && b != c && a != c && a ^ b ^ c != 0
    }

    /// Applies an F_2-linear (or any injective, XOR-preserving) map to the corners.
    #[inline]
    pub fn map(&self, f: impl Fn(u32) -> u32) -> TriangleV {
        let [a, b, c] = self.0;
        TriangleV::from_corners(f(a), f(b), f(c))
    }
}

/// Number of projective lines of `F_2^n`.
pub fn line_count(n: u32) -> u64 {
    let v = (1u64 << n) - 1;
    v * (v.saturating_sub(1)) / 6
}

/// All lines of `F_2^n` in ascending order.
pub fn enumerate_lines(n: u32) -> impl Iterator<Item = Line> {
    let size = 1u32 << n;
    (1..size).flat_map(move |x| {
        (x + 1..size).filter_map(move |y| {
            let z = x ^ y;
            (z > y).then_some(Line([x, y, z]))
        })
    })
}

/// A partition of the nonzero vectors into `dim`-dimensional subspaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spread {
    pub n: u32,
    pub dim: u32,
    /// Each group's nonzero vectors, sorted.
    pub groups: Vec<Vec<u32>>,
}

impl Spread {
    /// Trivial spread into 1-dimensional groups.
    pub fn points(n: u32) -> Spread {
        Spread {
            n,
            dim: 1,
            groups: (1..1u32 << n).map(|v| vec![v]).collect(),
        }
    }

    /// Builds a spread from groups, sorting each.
    pub fn from_groups(n: u32, dim: u32, mut groups: Vec<Vec<u32>>) -> Spread {
        for g in &mut groups {
            g.sort_unstable();
        }
        Spread { n, dim, groups }
    }

    /// Group index of every vector; `u32::MAX` at 0 and at uncovered vectors.
    pub fn membership(&self) -> Vec<u32> {
        let mut m = vec![u32::MAX; 1usize << self.n];
        for (i, g) in self.groups.iter().enumerate() {
            for &v in g {
                if (v as usize) < m.len() {
                    m[v as usize] = i as u32;
                }
            }
        }
        m
    }

    /// Checks the partition invariant: disjoint subspaces of the right size
    /// covering every nonzero vector.
    pub fn validate(&self) -> Result<()> {
        let size = 1usize << self.n;
        let want = (1usize << self.dim) - 1;
        let mut seen = vec![false; size];
        let mut total = 0usize;
        for (i, g) in self.groups.iter().enumerate() {
            if g.len() != want {
                return Err(Error::Spread(format!(
                    "group {i} has {} vectors, expected {want}",
                    g.len()
                )));
            }
            let set: HashSet<u32> = g.iter().copied().collect();
            for &v in g {
                if v == 0 || v as usize >= size {
                    return Err(Error::Spread(format!(
                        "group {i} contains invalid vector {v:#x}"
                    )));
                }
                if std::mem::replace(&mut seen[v as usize], true) {
                    return Err(Error::Spread(format!("vector {v:#x} lies in two groups")));
                }
            }
            for &a in g {
                for &b in g {
                    if a != b && !set.contains(&(a ^ b)) {
                        return Err(Error::Spread(format!("group {i} is not a subspace")));
                    }
                }
            }
            total += g.len();
        }
        if total != size - 1 {
            return Err(Error::Spread(format!(
                "groups cover {total} of {} nonzero vectors",
                size - 1
            )));
        }
        Ok(())
    }
}

/// The multiplicative cosets of the subfield `F_{2^m}` in `F_{2^n}`.
pub fn desarguesian_spread(ctx: &FieldCtx, m: u32) -> Result<Spread> {
    let n = ctx.n();
    if m == 0 || n % m != 0 {
        return Err(Error::Divisibility { n, m });
    }
    let sub = (1u32 << m) - 1;
    let g = ctx.order() / sub;
    let groups = (0..g)
        .map(|i| (0..sub).map(|j| ctx.exp_r(i + g * j)).collect())
        .collect();
    Ok(Spread::from_groups(n, m, groups))
}

/// A 2-dimensional `F_{2^m}`-subspace of `F_{2^n}` given by its canonical
/// basis: `u` is the smallest vector of the plane and `v` the smallest
/// vector outside `F_{2^m} u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ExtPlane {
    pub u: u32,
    pub v: u32,
}

/// Points of the projective space `PG(n/m - 1, 2^m)` inside `F_{2^n}`.
pub struct ExtPoints<'a> {
    ctx: &'a FieldCtx,
    /// number of points, `(2^n - 1) / (2^m - 1)`
    pub count: u32,
    sub_order: u32,
    /// smallest vector of each point, indexed by `log mod count`
    pub min_vec: Vec<u32>,
}

impl<'a> ExtPoints<'a> {
    pub fn new(ctx: &'a FieldCtx, m: u32) -> Result<Self> {
        let n = ctx.n();
        if m == 0 || n % m != 0 {
            return Err(Error::Divisibility { n, m });
        }
        let sub_order = (1u32 << m) - 1;
        let count = ctx.order() / sub_order;
        let mut min_vec = vec![u32::MAX; count as usize];
        for x in 1..ctx.size() {
            let p = (ctx.log_nz(x) % count) as usize;
            if x < min_vec[p] {
                min_vec[p] = x;
            }
        }
        Ok(ExtPoints {
            ctx,
            count,
            sub_order,
            min_vec,
        })
    }

    #[inline]
    pub fn point_of(&self, x: u32) -> u32 {
        self.ctx.log_nz(x) % self.count
    }

    /// Subfield element `lambda_j = xi^(count * j)`, `j < 2^m - 1`.
    #[inline]
    pub fn scalar(&self, j: u32) -> u32 {
        self.ctx.exp_r(self.count * j)
    }

    pub fn sub_order(&self) -> u32 {
        self.sub_order
    }

    /// Canonical basis of the plane spanned by two independent vectors.
    pub fn canonical_plane(&self, a: u32, b: u32) -> ExtPlane {
        let pts = self.plane_points(a, b);
        let mut mins: Vec<u32> = pts.iter().map(|&p| self.min_vec[p as usize]).collect();
        mins.sort_unstable();
        let u = mins[0];
        let pu = self.point_of(u);
        let v = pts
            .iter()
            .filter(|&&p| p != pu)
            .map(|&p| self.min_vec[p as usize])
            .min()
            .expect("plane has at least two points");
        ExtPlane { u, v }
    }

    /// The `2^m + 1` points of the plane spanned by `a` and `b`.
    pub fn plane_points(&self, a: u32, b: u32) -> Vec<u32> {
        let mut pts = Vec::with_capacity(self.sub_order as usize + 2);
        pts.push(self.point_of(a));
        pts.push(self.point_of(b));
        for j in 0..self.sub_order {
            let w = self.ctx.mul(self.scalar(j), a) ^ b;
            pts.push(self.point_of(w));
        }
        pts
    }
}

/// Every 2-dimensional `F_{2^m}`-subspace of `F_{2^n}` exactly once, in
/// ascending order of `u` then `v`.
pub fn enumerate_ext_planes(ctx: &FieldCtx, m: u32) -> Result<Vec<ExtPlane>> {
    let n = ctx.n();
    if m == 0 || n % m != 0 || n / m < 2 {
        return Err(Error::Divisibility { n, m });
    }
    let pts = ExtPoints::new(ctx, m)?;
    let count = pts.count as usize;
    let mut by_min: Vec<u32> = (0..pts.count).collect();
    by_min.sort_unstable_by_key(|&p| pts.min_vec[p as usize]);
    let mut rank = vec![0u32; count];
    for (r, &p) in by_min.iter().enumerate() {
        rank[p as usize] = r as u32;
    }
    let mut stamp = vec![u32::MAX; count];
    let mut planes = Vec::new();
    for (r, &p) in by_min.iter().enumerate() {
        let u = pts.min_vec[p as usize];
        for &q in &by_min[r + 1..] {
            if stamp[q as usize] == r as u32 {
                continue;
            }
            let w = pts.min_vec[q as usize];
            let mut earliest = true;
            let mut v = u32::MAX;
            let mut mark = |x: u32, stamp: &mut [u32]| {
                let o = pts.point_of(x);
                stamp[o as usize] = r as u32;
                if rank[o as usize] < r as u32 {
                    earliest = false;
                }
                v = v.min(pts.min_vec[o as usize]);
            };
            mark(w, &mut stamp);
            for j in 0..pts.sub_order {
                mark(ctx.mul(pts.scalar(j), u) ^ w, &mut stamp);
            }
            if earliest {
                planes.push(ExtPlane { u, v });
            }
        }
    }
    planes.sort_unstable_by_key(|p| (p.u, p.v));
    Ok(planes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rank_gf2(vs: &[u32]) -> u32 {
        let mut basis: Vec<u32> = Vec::new();
        for &v in vs {
            let mut x = v;
            for &b in &basis {
                x = x.min(x ^ b);
            }
            if x != 0 {
                basis.push(x);
                basis.sort_unstable_by(|a, b| b.cmp(a));
            }
        }
        basis.len() as u32
    }

    // Triangle per definition: pairwise intersections of the 2-spaces are
    // 1-dimensional and the triple intersection is trivial.
    fn triangle_by_rank(l: [&Line; 3]) -> bool {
        let dim_meet = |a: &Line, b: &Line| {
            let mut v = a.points().to_vec();
            v.extend(b.points());
            4 - rank_gf2(&v)
        };
        let distinct = l[0] != l[1] && l[1] != l[2] && l[0] != l[2];
        let pair_ok =
            dim_meet(l[0], l[1]) == 1 && dim_meet(l[1], l[2]) == 1 && dim_meet(l[2], l[0]) == 1;
        let triple_zero = !l[0]
            .points()
            .iter()
            .any(|p| l[1].contains(*p) && l[2].contains(*p));
        distinct && pair_ok && triple_zero
    }

    #[test]
    fn canonical_line_examples() {
        assert_eq!(canonical_line(1, 2).unwrap().points(), [1, 2, 3]);
        assert_eq!(canonical_line(3, 1).unwrap().points(), [1, 2, 3]);
        assert!(matches!(
            canonical_line(5, 5),
            Err(Error::DegenerateLine(5, 5))
        ));
        assert!(canonical_line(0, 5).is_err());
    }

    #[test]
    fn triangle_examples() {
        let (a, b, c) = (1, 2, 4);
        let t = [
            Line::through(a, b),
            Line::through(b, c),
            Line::through(c, a),
        ];
        assert!(is_triangle(&t[0], &t[1], &t[2]));
        let c = a ^ b;
        let t = [
            Line::through(a, b),
            Line::through(b, c),
            Line::through(c, a),
        ];
        assert!(!is_triangle(&t[0], &t[1], &t[2]));
        let l = Line::through(1, 2);
        assert!(!is_triangle(&l, &l, &Line::through(1, 4)));
    }

    #[test]
    fn is_triangle_matches_rank_oracle() {
        for n in 2..=4 {
            let lines: Vec<Line> = enumerate_lines(n).collect();
            for a in &lines {
                for b in &lines {
                    for c in &lines {
                        assert_eq!(
                            is_triangle(a, b, c),
                            triangle_by_rank([a, b, c]),
                            "{a:?} {b:?} {c:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn line_counts() {
        assert_eq!(enumerate_lines(6).count(), 651);
        assert_eq!(enumerate_lines(7).count(), 2667);
        assert_eq!(enumerate_lines(2).count(), 1);
        for n in 2..=9 {
            let v: Vec<Line> = enumerate_lines(n).collect();
            assert_eq!(v.len() as u64, line_count(n));
            assert!(v.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn key_round_trip() {
        for l in enumerate_lines(5) {
            assert_eq!(Line::from_key(l.key()), l);
        }
    }

    #[test]
    fn triangle_canonical_identity() {
        let t1 = TriangleV::new(1, 2, 4).unwrap();
        let t2 = TriangleV::new(4, 1, 2).unwrap();
        assert_eq!(t1, t2);
        let mut l1 = t1.lines();
        l1.sort();
        let mut l2 = t2.lines();
        l2.sort();
        assert_eq!(l1, l2);
        assert!(TriangleV::new(1, 2, 3).is_err());
        assert_eq!(t1.noncorners(), [3, 6, 5]);
    }

    #[test]
    fn desarguesian_spreads() {
        let f12 = FieldCtx::with_default(12).unwrap();
        let s = desarguesian_spread(&f12, 6).unwrap();
        assert_eq!(s.groups.len(), 65);
        assert!(s.groups.iter().all(|g| g.len() == 63));
        s.validate().unwrap();

        let f6 = FieldCtx::with_default(6).unwrap();
        let s = desarguesian_spread(&f6, 2).unwrap();
        assert_eq!(s.groups.len(), 21);
        s.validate().unwrap();
        for g in &s.groups {
            let l = Line::through(g[0], g[1]);
            assert_eq!(l.points().to_vec(), *g);
        }
        let s = desarguesian_spread(&f6, 6).unwrap();
        assert_eq!(s.groups.len(), 1);
        assert_eq!(s.groups[0].len(), 63);
        assert!(matches!(
            desarguesian_spread(&f6, 4),
            Err(Error::Divisibility { .. })
        ));
    }

    #[test]
    fn spread_validator_rejects_broken_partitions() {
        let f6 = FieldCtx::with_default(6).unwrap();
        let mut s = desarguesian_spread(&f6, 2).unwrap();
        s.groups.pop();
        assert!(s.validate().is_err());
        let mut s = desarguesian_spread(&f6, 2).unwrap();
        s.groups[0][0] = s.groups[1][0];
        assert!(s.validate().is_err());
    }

    fn planes_brute_force(ctx: &FieldCtx, m: u32) -> HashSet<Vec<u32>> {
        let pts = ExtPoints::new(ctx, m).unwrap();
        let mut out = HashSet::new();
        for a in 1..ctx.size() {
            for b in 1..ctx.size() {
                if pts.point_of(a) == pts.point_of(b) {
                    continue;
                }
                let mut span = HashSet::new();
                for i in 0..=pts.sub_order() {
                    for j in 0..=pts.sub_order() {
                        let la = if i == 0 {
                            0
                        } else {
                            ctx.mul(pts.scalar(i - 1), a)
                        };
                        let lb = if j == 0 {
                            0
                        } else {
                            ctx.mul(pts.scalar(j - 1), b)
                        };
                        span.insert(la ^ lb);
                    }
                }
                let mut v: Vec<u32> = span.into_iter().collect();
                v.sort_unstable();
                out.insert(v);
            }
        }
        out
    }

    #[test]
    fn ext_planes_match_brute_force() {
        for (n, m) in [(6u32, 2u32), (6, 3), (8, 2), (8, 4)] {
            let ctx = FieldCtx::with_default(n).unwrap();
            let planes = enumerate_ext_planes(&ctx, m).unwrap();
            let brute = planes_brute_force(&ctx, m);
            assert_eq!(planes.len(), brute.len(), "n={n} m={m}");
            let pts = ExtPoints::new(&ctx, m).unwrap();
            for p in &planes {
                let cp = pts.canonical_plane(p.u, p.v);
                assert_eq!(cp, *p);
                let min = brute
                    .iter()
                    .filter(|s| s.contains(&p.u) && s.contains(&p.v))
                    .map(|s| s[1])
                    .next()
                    .expect("plane present");
                assert_eq!(min, p.u, "u is the smallest nonzero vector");
            }
        }
    }

    #[test]
    fn ext_plane_counts() {
        let f12 = FieldCtx::with_default(12).unwrap();
        assert_eq!(enumerate_ext_planes(&f12, 6).unwrap().len(), 1);
        assert_eq!(enumerate_ext_planes(&f12, 4).unwrap().len(), 273);
        assert!(enumerate_ext_planes(&f12, 12).is_err());
        let f18 = FieldCtx::with_default(18).unwrap();
        assert_eq!(enumerate_ext_planes(&f18, 6).unwrap().len(), 4161);
    }
}
