//! Certificate search: line orbits become exact-cover items, candidate
//! triangle orbits become subsets.

use std::collections::HashMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2n::FieldCtx;
use crate::orbits::{
    check_mod6, cyclotomic_class, cyclotomic_strata, FrobeniusCertificate, GammaIndex,
    OrbitCertificate,
};
use crate::xcover::{self, Limits, XCoverInstance};

/// Work estimate above which a search needs `allow_long`.
pub const LONG_WORK: u64 = 1 << 31;

#[derive(Clone, Debug, Default)]
pub struct SearchOptions {
    pub poly: Option<u32>,
    pub limits: Limits,
    /// Seeds for a racing portfolio; the winner depends on scheduling.
    pub portfolio: Option<Vec<u64>>,
    pub allow_long: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub items: usize,
    pub candidates: usize,
    pub nodes: u64,
    pub elapsed_ms: u128,
}

/// An exact-cover instance whose subset tags index `witnesses`.
pub struct OrbitInstance {
    pub cover: XCoverInstance,
    pub witnesses: Vec<(u32, u32)>,
}

fn keep_min(map: &mut HashMap<[u32; 3], (u32, u32)>, k: [u32; 3], w: (u32, u32)) {
    map.entry(k)
        .and_modify(|old| *old = (*old).min(w))
        .or_insert(w);
}

fn merge(
    mut a: HashMap<[u32; 3], (u32, u32)>,
    b: HashMap<[u32; 3], (u32, u32)>,
) -> HashMap<[u32; 3], (u32, u32)> {
    if a.len() < b.len() {
        return merge(b, a);
    }
    for (k, w) in b {
        keep_min(&mut a, k, w);
    }
    a
}

fn build_instance(
    item_count: usize,
    found: HashMap<[u32; 3], (u32, u32)>,
) -> Result<OrbitInstance> {
    let mut rows: Vec<([u32; 3], (u32, u32))> = found.into_iter().collect();
    rows.sort_unstable();
    let mut cover = XCoverInstance::new(item_count);
    let mut witnesses = Vec::with_capacity(rows.len());
    for (t, (items, w)) in rows.into_iter().enumerate() {
        cover.add_subset(&items, t as u64)?;
        witnesses.push(w);
    }
    Ok(OrbitInstance { cover, witnesses })
}

/// Exact-cover instance for Singer-invariant `(n, m)`-GDDs. Witness `(s1, s2)`
/// stands for the generator `(1, xi^s1, xi^(s1 + s2))`.
pub fn singer_instance(ctx: &FieldCtx, m: u32) -> Result<OrbitInstance> {
    let n = ctx.n();
    check_mod6(n, m)?;
    let order = ctx.order();
    let g = order / ((1u32 << m) - 1);
    let idx = GammaIndex::new(ctx);
    let kbar: Vec<u32> = (1..order).filter(|k| k % g != 0).collect();
    let mut keys: Vec<u32> = kbar.iter().map(|&k| idx.key(k)).collect();
    keys.sort_unstable();
    keys.dedup();
    let mut item_of = vec![u32::MAX; order as usize];
    for &k in &kbar {
        item_of[k as usize] = keys.binary_search(&idx.key(k)).unwrap() as u32;
    }
    let found = kbar
        .par_iter()
        .fold(HashMap::new, |mut map, &s1| {
            let i1 = item_of[s1 as usize];
            for &s2 in &kbar {
                let s3 = ctx.neg(ctx.add_r(s1, s2));
                let i3 = item_of[s3 as usize];
                let i2 = item_of[s2 as usize];
                if i3 == u32::MAX || i1 == i2 || i2 == i3 || i1 == i3 {
                    continue;
                }
                let mut t = [i1, i2, i3];
                t.sort_unstable();
                keep_min(&mut map, t, (s1, s2));
            }
            map
        })
        .reduce(HashMap::new, merge);
    build_instance(keys.len(), found)
}

fn solve_instance(inst: &OrbitInstance, opts: &SearchOptions) -> Result<(Vec<(u32, u32)>, u64)> {
    let sol = match &opts.portfolio {
        Some(seeds) if !seeds.is_empty() => {
            xcover::solve_portfolio(&inst.cover, seeds, &opts.limits)?
        }
        _ => xcover::solve(&inst.cover, &opts.limits)?,
    };
    let w = sol
        .tags(&inst.cover)
        .into_iter()
        .map(|t| inst.witnesses[t as usize])
        .collect();
    Ok((w, sol.nodes))
}

pub struct SingerSearch {
    pub cert: OrbitCertificate,
    pub stats: SearchStats,
}

pub fn search_singer(n: u32, m: u32, opts: &SearchOptions) -> Result<SingerSearch> {
    check_mod6(n, m)?;
    let kbar = ((1u64 << n) - 1) - ((1u64 << m) - 1);
    if kbar * kbar > LONG_WORK && !opts.allow_long {
        return Err(Error::Precondition(format!(
            "Singer search at n = {n} scans {} residue pairs; pass allow_long to run it",
            kbar * kbar
        )));
    }
    let start = Instant::now();
    let ctx = FieldCtx::new(n, opts.poly)?;
    let inst = singer_instance(&ctx, m)?;
    let (w, nodes) = solve_instance(&inst, opts)?;
    let mut reps: Vec<(u32, u32)> = w
        .into_iter()
        .map(|(s1, s2)| (s1, ctx.add_r(s1, s2)))
        .collect();
    reps.sort_unstable();
    Ok(SingerSearch {
        cert: OrbitCertificate {
            n,
            m,
            poly: ctx.poly(),
            reps,
        },
        stats: SearchStats {
            items: inst.cover.items(),
            candidates: inst.cover.len(),
            nodes,
            elapsed_ms: start.elapsed().as_millis(),
        },
    })
}

/// Rejects `n` whose cyclotomic strata cannot split into 18-sets.
pub fn check_strata(n: u32) -> Result<()> {
    if n % 6 != 1 || n == 1 {
        return Err(Error::ModSix { n, m: 1 });
    }
    for (t, count) in cyclotomic_strata(n) {
        if t > 1 && count % 18 != 0 {
            return Err(Error::StratumInfeasible {
                t,
                count: count as u64,
            });
        }
    }
    Ok(())
}

/// Exact-cover instance over Frobenius-closed line orbits: one item per
/// union of cyclotomic classes of a gamma set. Witness `(a, b)` stands for
/// the generator `(1, xi^a, xi^-b)`.
pub fn frobenius_instance(ctx: &FieldCtx) -> Result<OrbitInstance> {
    let n = ctx.n();
    check_strata(n)?;
    let order = ctx.order();
    let idx = GammaIndex::new(ctx);
    let mut class_min = vec![u32::MAX; order as usize];
    let mut class_len = vec![0u32; order as usize];
    for k in 1..order {
        if class_min[k as usize] == u32::MAX {
            let c = cyclotomic_class(n, k as u64);
            for &x in &c {
                class_min[x as usize] = k;
                class_len[x as usize] = c.len() as u32;
            }
        }
    }
    let mut item_of = vec![u32::MAX; order as usize];
    let mut reps: Vec<[u32; 3]> = Vec::new();
    for k in 1..order {
        if item_of[k as usize] != u32::MAX {
            continue;
        }
        let it = reps.len() as u32;
        let g = idx.elems(k);
        for s in g {
            let mut x = s;
            loop {
                item_of[x as usize] = it;
                x = ctx.mul_r(x, 2);
                if x == s {
                    break;
                }
            }
        }
        let (z, zn) = (g[1], g[2]);
        reps.push([
            class_min[k as usize],
            class_min[z as usize],
            class_min[zn as usize],
        ]);
    }
    let found = reps
        .par_iter()
        .enumerate()
        .fold(HashMap::new, |mut map, (ia, rs)| {
            let mut rs = *rs;
            rs.sort_unstable();
            for (p, &a) in rs.iter().enumerate() {
                if rs[..p].contains(&a) {
                    continue;
                }
                let t = class_len[a as usize];
                for b in 1..order {
                    let c = ctx.add_r(a, b);
                    if c == 0 || class_len[b as usize] != t || class_len[c as usize] != t {
                        continue;
                    }
                    let (ib, ic) = (item_of[b as usize], item_of[c as usize]);
                    let ia = ia as u32;
                    if ia == ib || ib == ic || ia == ic {
                        continue;
                    }
                    let mut tri = [ia, ib, ic];
                    tri.sort_unstable();
                    keep_min(&mut map, tri, (a, b));
                }
            }
            map
        })
        .reduce(HashMap::new, merge);
    build_instance(reps.len(), found)
}

pub struct FrobeniusSearch {
    pub cert: FrobeniusCertificate,
    pub stats: SearchStats,
}

pub fn search_frobenius(n: u32, opts: &SearchOptions) -> Result<FrobeniusSearch> {
    check_strata(n)?;
    if n > crate::gf2n::MAX_DEGREE {
        return Err(Error::Capacity(n));
    }
    let order = (1u64 << n) - 1;
    let work = order / (6 * n as u64) * 3 * order;
    if work > LONG_WORK && !opts.allow_long {
        return Err(Error::Precondition(format!(
            "Frobenius search at n = {n} scans about {work} candidate pairs; pass allow_long to run it"
        )));
    }
    let start = Instant::now();
    let ctx = FieldCtx::new(n, opts.poly)?;
    let inst = frobenius_instance(&ctx)?;
    let (mut pairs, nodes) = solve_instance(&inst, opts)?;
    pairs.sort_unstable();
    Ok(FrobeniusSearch {
        cert: FrobeniusCertificate {
            n,
            poly: ctx.poly(),
            pairs,
        },
        stats: SearchStats {
            items: inst.cover.items(),
            candidates: inst.cover.len(),
            nodes,
            elapsed_ms: start.elapsed().as_millis(),
        },
    })
}
