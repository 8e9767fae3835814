//! Designs, group divisible designs, and their verifiers.
//!
//! The verifiers recompute every line from the triangle generators and never
//! look at how a triangle set was produced.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{line_count, Line, Spread, TriangleV};

/// Witness samples kept per failure class.
pub const WITNESS_LIMIT: usize = 10;

/// Largest dimension verified with a dense `2^(2n)`-byte presence table.
const FLAT_TABLE_MAX_N: u32 = 13;

/// A set of triangles meant to cover every line of `F_2^n` once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Design {
    pub n: u32,
    pub poly: u32,
    pub triangles: Vec<TriangleV>,
}

/// A group divisible design: a spread of `groups.dim`-dimensional groups and
/// triangles covering exactly the lines not inside a group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gdd {
    pub n: u32,
    pub poly: u32,
    pub groups: Spread,
    pub triangles: Vec<TriangleV>,
}

impl Gdd {
    pub fn m(&self) -> u32 {
        self.groups.dim
    }
}

/// Either a design or a group divisible design.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TriangleSystem {
    Design(Design),
    Gdd(Gdd),
}

impl TriangleSystem {
    pub fn n(&self) -> u32 {
        match self {
            TriangleSystem::Design(d) => d.n,
            TriangleSystem::Gdd(g) => g.n,
        }
    }

    pub fn poly(&self) -> u32 {
        match self {
            TriangleSystem::Design(d) => d.poly,
            TriangleSystem::Gdd(g) => g.poly,
        }
    }

    pub fn triangles(&self) -> &[TriangleV] {
        match self {
            TriangleSystem::Design(d) => &d.triangles,
            TriangleSystem::Gdd(g) => &g.triangles,
        }
    }

    pub fn is_gdd(&self) -> bool {
        matches!(self, TriangleSystem::Gdd(_))
    }

    pub fn into_design(self) -> Result<Design> {
        match self {
            TriangleSystem::Design(d) => Ok(d),
            TriangleSystem::Gdd(_) => {
                Err(Error::Precondition("expected a design, got a GDD".into()))
            }
        }
    }

    pub fn into_gdd(self) -> Result<Gdd> {
        match self {
            TriangleSystem::Gdd(g) => Ok(g),
            TriangleSystem::Design(_) => {
                Err(Error::Precondition("expected a GDD, got a design".into()))
            }
        }
    }

    pub fn verify(&self) -> Result<CoverReport> {
        match self {
            TriangleSystem::Design(d) => verify_design(d),
            TriangleSystem::Gdd(g) => verify_gdd(g),
        }
    }

    pub fn balance(&self) -> BalanceReport {
        match self {
            TriangleSystem::Design(d) => verify_balanced_design(d),
            TriangleSystem::Gdd(g) => verify_balanced_gdd(g),
        }
    }
}

/// `(2^n - 1)(2^n - 2^m) / 18` when integral.
pub fn expected_triangles(n: u32, m: u32) -> Option<u64> {
    let a = ((1u128 << n) - 1) * ((1u128 << n) - (1u128 << m));
    (a % 18 == 0).then_some((a / 18) as u64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverReport {
    pub ok: bool,
    pub kind: String,
    pub n: u32,
    pub m: u32,
    pub triangle_count: u64,
    pub expected_triangles: Option<u64>,
    pub lines_total: u64,
    pub group_lines: u64,
    pub lines_covered: u64,
    pub uncovered: Vec<[u32; 3]>,
    pub multiply_covered: Vec<[u32; 3]>,
    pub group_lines_covered: Vec<[u32; 3]>,
    pub spread_error: Option<String>,
}

impl fmt::Display for CoverReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "verify {} n={} m={}: {}",
            self.kind,
            self.n,
            self.m,
            if self.ok { "OK" } else { "FAILED" }
        )?;
        write!(f, "  triangles: {}", self.triangle_count)?;
        match self.expected_triangles {
            Some(e) => writeln!(f, " (expected {e})")?,
            None => writeln!(f, " (no integral count exists)")?,
        }
        writeln!(
            f,
            "  lines: {} total, {} in groups, {} covered",
            self.lines_total, self.group_lines, self.lines_covered
        )?;
        if let Some(e) = &self.spread_error {
            writeln!(f, "  spread: {e}")?;
        }
        let mut list = |name: &str, v: &[[u32; 3]]| -> fmt::Result {
            if !v.is_empty() {
                write!(f, "  {name}:")?;
                for l in v {
                    write!(f, " {{{:x},{:x},{:x}}}", l[0], l[1], l[2])?;
                }
                writeln!(f)?;
            }
            Ok(())
        };
        list("uncovered", &self.uncovered)?;
        list("multiply covered", &self.multiply_covered)?;
        list("group lines covered", &self.group_lines_covered)
    }
}

fn check_structure(n: u32, triangles: &[TriangleV]) -> Result<()> {
    let size = 1u64 << n;
    if let Some(t) = triangles
        .par_iter()
        .find_first(|t| !t.is_valid() || t.corners().iter().any(|&v| v as u64 >= size))
    {
        let [a, b, c] = t.corners();
        return Err(Error::Malformed(format!(
            "triangle ({a:#x}, {b:#x}, {c:#x}) is not a triangle of F_2^{n}"
        )));
    }
    Ok(())
}

/// Core exact-cover check. `membership` maps vectors to group ids; `None`
/// means 1-dimensional groups (a plain design).
fn verify_cover(
    n: u32,
    m: u32,
    membership: Option<&[u32]>,
    triangles: &[TriangleV],
) -> CoverReport {
    verify_cover_with(n, m, membership, triangles, n <= FLAT_TABLE_MAX_N)
}

fn verify_cover_with(
    n: u32,
    m: u32,
    membership: Option<&[u32]>,
    triangles: &[TriangleV],
    flat: bool,
) -> CoverReport {
    let lines_total = line_count(n);
    let group_lines = match membership {
        None => 0,
        Some(_) => {
            let per = line_count(m);
            let groups = ((1u64 << n) - 1) / ((1u64 << m) - 1);
            per * groups
        }
    };
    let in_group = |l: &Line| -> bool {
        match membership {
            None => false,
            Some(mem) => {
                let [x, y, _] = l.points();
                mem[x as usize] == mem[y as usize]
            }
        }
    };

    let mut multiply = Vec::new();
    let mut group_hits = Vec::new();
    let mut uncovered = Vec::new();
    let mut covered = 0u64;

    if flat {
        let mut table = vec![0u8; 1usize << (2 * n)];
        for t in triangles {
            for l in t.lines() {
                let c = &mut table[l.flat_index(n)];
                *c = c.saturating_add(1);
            }
        }
        let size = 1u32 << n;
        for x in 1..size {
            for y in x + 1..size {
                if x ^ y < y {
                    continue;
                }
                let l = Line::from_key(((x as u64) << 32) | y as u64);
                let c = table[l.flat_index(n)];
                let grp = in_group(&l);
                match (c, grp) {
                    (0, false) => push_witness(&mut uncovered, l),
                    (0, true) => {}
                    (_, true) => push_witness(&mut group_hits, l),
                    (1, false) => covered += 1,
                    (_, false) => {
                        covered += 1;
                        push_witness(&mut multiply, l);
                    }
                }
            }
        }
    } else {
        let mut keys: Vec<u64> = triangles
            .par_iter()
            .flat_map_iter(|t| t.lines().into_iter().map(|l| l.key()))
            .collect();
        keys.par_sort_unstable();
        let mut i = 0;
        let mut distinct: Vec<u64> = Vec::new();
        while i < keys.len() {
            let k = keys[i];
            let mut j = i + 1;
            while j < keys.len() && keys[j] == k {
                j += 1;
            }
            let l = Line::from_key(k);
            if in_group(&l) {
                push_witness(&mut group_hits, l);
            } else {
                covered += 1;
                if j - i > 1 {
                    push_witness(&mut multiply, l);
                }
            }
            distinct.push(k);
            i = j;
        }
        if covered < lines_total - group_lines {
            // merge against the full ascending line stream
            let mut it = distinct.iter().peekable();
            for l in crate::linalg::enumerate_lines(n) {
                if uncovered.len() >= WITNESS_LIMIT {
                    break;
                }
                let k = l.key();
                while it.peek().is_some_and(|&&d| d < k) {
                    it.next();
                }
                if it.peek() != Some(&&k) && !in_group(&l) {
                    uncovered.push(l.points());
                }
            }
        }
    }

    let expected = expected_triangles(n, m);
    let count_ok = expected == Some(triangles.len() as u64);
    let ok = count_ok
        && uncovered.is_empty()
        && multiply.is_empty()
        && group_hits.is_empty()
        && covered == lines_total - group_lines;
    CoverReport {
        ok,
        kind: if membership.is_some() {
            "gdd".into()
        } else {
            "design".into()
        },
        n,
        m,
        triangle_count: triangles.len() as u64,
        expected_triangles: expected,
        lines_total,
        group_lines,
        lines_covered: covered,
        uncovered,
        multiply_covered: multiply,
        group_lines_covered: group_hits,
        spread_error: None,
    }
}

fn push_witness(v: &mut Vec<[u32; 3]>, l: Line) {
    if v.len() < WITNESS_LIMIT {
        v.push(l.points());
    }
}

/// Checks that every line of `F_2^n` lies in exactly one triangle.
pub fn verify_design(d: &Design) -> Result<CoverReport> {
    check_structure(d.n, &d.triangles)?;
    Ok(verify_cover(d.n, 1, None, &d.triangles))
}

/// Checks the group divisible property against the GDD's own spread.
pub fn verify_gdd(g: &Gdd) -> Result<CoverReport> {
    check_structure(g.n, &g.triangles)?;
    let m = g.groups.dim;
    if m == 0 || g.groups.n != g.n {
        return Err(Error::Malformed(format!(
            "group dimension {m} invalid for n = {}",
            g.n
        )));
    }
    if let Err(e) = g.groups.validate() {
        let lines_total = line_count(g.n);
        return Ok(CoverReport {
            ok: false,
            kind: "gdd".into(),
            n: g.n,
            m,
            triangle_count: g.triangles.len() as u64,
            expected_triangles: expected_triangles(g.n, m),
            lines_total,
            group_lines: 0,
            lines_covered: 0,
            uncovered: vec![],
            multiply_covered: vec![],
            group_lines_covered: vec![],
            spread_error: Some(e.to_string()),
        });
    }
    if m == 1 {
        let mut r = verify_cover(g.n, 1, None, &g.triangles);
        r.kind = "gdd".into();
        return Ok(r);
    }
    let mem = g.groups.membership();
    Ok(verify_cover(g.n, m, Some(&mem), &g.triangles))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalanceReport {
    pub balanced: bool,
    /// Common coverage when constant.
    pub lambda: Option<u64>,
    /// Required value for plain designs, `(2^n - 2) / 3` when integral.
    pub expected_lambda: Option<u64>,
    /// coverage -> number of nonzero vectors with that coverage
    pub histogram: BTreeMap<u64, u64>,
}

impl fmt::Display for BalanceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "balance: {}",
            if self.balanced {
                "balanced"
            } else {
                "unbalanced"
            }
        )?;
        if let Some(l) = self.lambda {
            write!(f, ", lambda = {l}")?;
        }
        writeln!(f)?;
        write!(f, "  histogram:")?;
        for (k, v) in &self.histogram {
            write!(f, " {k}x{v}")?;
        }
        writeln!(f)
    }
}

/// Number of triangles covering each vector (index 0 unused).
pub fn coverage(n: u32, triangles: &[TriangleV]) -> Vec<u64> {
    let size = 1usize << n;
    triangles
        .par_chunks(1 << 16)
        .fold(
            || vec![0u64; size],
            |mut acc, chunk| {
                for t in chunk {
                    for v in t.corners().into_iter().chain(t.noncorners()) {
                        acc[v as usize] += 1;
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; size],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

fn balance_of(n: u32, triangles: &[TriangleV]) -> BalanceReport {
    let cov = coverage(n, triangles);
    let mut histogram = BTreeMap::new();
    for &c in &cov[1..] {
        *histogram.entry(c).or_insert(0u64) += 1;
    }
    let lambda = (histogram.len() == 1).then(|| *histogram.keys().next().unwrap());
    BalanceReport {
        balanced: lambda.is_some(),
        lambda,
        expected_lambda: None,
        histogram,
    }
}

/// Balance check for a plain design: constant coverage equal to `(2^n - 2) / 3`.
pub fn verify_balanced_design(d: &Design) -> BalanceReport {
    let mut r = balance_of(d.n, &d.triangles);
    let target = ((1u64 << d.n) - 2) % 3 == 0 && d.n % 2 == 1;
    r.expected_lambda = target.then(|| ((1u64 << d.n) - 2) / 3);
    r.balanced = r.balanced && r.lambda == r.expected_lambda;
    r
}

pub fn verify_balanced_gdd(g: &Gdd) -> BalanceReport {
    balance_of(g.n, &g.triangles)
}

/// Per-vector charge: corner appearances minus non-corner appearances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChargeLedger {
    n: u32,
    charge: Vec<i64>,
}

impl ChargeLedger {
    pub fn new(n: u32) -> Self {
        ChargeLedger {
            n,
            charge: vec![0; 1usize << n],
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn add_triangle(&mut self, t: &TriangleV) {
        for v in t.corners() {
            self.charge[v as usize] += 1;
        }
        for v in t.noncorners() {
            self.charge[v as usize] -= 1;
        }
    }

    pub fn add_all<'a>(&mut self, ts: impl IntoIterator<Item = &'a TriangleV>) {
        for t in ts {
            self.add_triangle(t);
        }
    }

    pub fn add(&mut self, v: u32, delta: i64) {
        self.charge[v as usize] += delta;
    }

    #[inline]
    pub fn charge(&self, v: u32) -> i64 {
        self.charge[v as usize]
    }

    pub fn total(&self) -> i64 {
        self.charge.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.charge.iter().all(|&c| c == 0)
    }

    /// Up to `limit` nonzero entries in ascending vector order.
    pub fn nonzero(&self, limit: usize) -> Vec<(u32, i64)> {
        self.charge
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .take(limit)
            .map(|(v, &c)| (v as u32, c))
            .collect()
    }
}

/// Charge ledger of a triangle set.
pub fn charge_ledger(n: u32, triangles: &[TriangleV]) -> ChargeLedger {
    let mut l = ChargeLedger::new(n);
    l.add_all(triangles);
    l
}
