//! Exact cover by dancing links.
//!
//! Branching picks the item with the fewest remaining candidates (ties to
//! the lowest column) and tries subsets in column order. Without a seed the
//! columns and rows follow the instance order, so runs are reproducible.

use std::io::{BufRead, Write};
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct XCoverInstance {
    items: usize,
    subsets: Vec<Vec<u32>>,
    tags: Vec<u64>,
}

impl XCoverInstance {
    pub fn new(items: usize) -> Self {
        XCoverInstance {
            items,
            subsets: Vec::new(),
            tags: Vec::new(),
        }
    }

    pub fn add_subset(&mut self, items: &[u32], tag: u64) -> Result<usize> {
        let mut v = items.to_vec();
        v.sort_unstable();
        if v.is_empty() {
            return Err(Error::Malformed("empty subset".into()));
        }
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Malformed(format!(
                "subset {items:?} repeats an item"
            )));
        }
        if *v.last().unwrap() as usize >= self.items {
            return Err(Error::Malformed(format!(
                "subset {items:?} names an item >= {}",
                self.items
            )));
        }
        self.subsets.push(v);
        self.tags.push(tag);
        Ok(self.subsets.len() - 1)
    }

    pub fn items(&self) -> usize {
        self.items
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn subset(&self, i: usize) -> &[u32] {
        &self.subsets[i]
    }

    pub fn tag(&self, i: usize) -> u64 {
        self.tags[i]
    }

    /// Whether `chosen` covers every item exactly once.
    pub fn is_exact_cover(&self, chosen: &[usize]) -> bool {
        let mut hit = vec![false; self.items];
        for &s in chosen {
            let Some(sub) = self.subsets.get(s) else {
                return false;
            };
            for &i in sub {
                if std::mem::replace(&mut hit[i as usize], true) {
                    return false;
                }
            }
        }
        hit.into_iter().all(|h| h)
    }

    /// Text form: `items N`, then one `tag i1 i2 ...` line per subset.
    pub fn dump<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "items {}", self.items)?;
        for (s, t) in self.subsets.iter().zip(&self.tags) {
            write!(w, "{t}")?;
            for i in s {
                write!(w, " {i}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn load<R: BufRead>(r: R) -> Result<Self> {
        let mut inst: Option<XCoverInstance> = None;
        for (no, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let perr = |msg: String| Error::Parse { line: no + 1, msg };
            match inst.as_mut() {
                None => {
                    let n = line
                        .strip_prefix("items ")
                        .and_then(|t| t.trim().parse().ok())
                        .ok_or_else(|| perr("expected `items N`".into()))?;
                    inst = Some(XCoverInstance::new(n));
                }
                Some(inst) => {
                    let mut it = line.split_whitespace();
                    let tag = it
                        .next()
                        .unwrap()
                        .parse()
                        .map_err(|e| perr(format!("bad tag: {e}")))?;
                    let items: Vec<u32> = it
                        .map(|t| t.parse().map_err(|e| perr(format!("bad item {t:?}: {e}"))))
                        .collect::<Result<_>>()?;
                    inst.add_subset(&items, tag)
                        .map_err(|e| perr(e.to_string()))?;
                }
            }
        }
        inst.ok_or_else(|| Error::Parse {
            line: 0,
            msg: "missing `items N` header".into(),
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct Limits {
    pub nodes: Option<u64>,
    pub time: Option<Duration>,
    /// Shuffles column and row order; `None` keeps the instance order.
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverSolution {
    /// Chosen subset indices, ascending.
    pub subsets: Vec<usize>,
    pub nodes: u64,
}

impl CoverSolution {
    pub fn tags(&self, inst: &XCoverInstance) -> Vec<u64> {
        self.subsets.iter().map(|&s| inst.tag(s)).collect()
    }
}

struct Dlx {
    left: Vec<u32>,
    right: Vec<u32>,
    up: Vec<u32>,
    down: Vec<u32>,
    col: Vec<u32>,
    row: Vec<u32>,
    len: Vec<u32>,
}

const ROOT: u32 = 0;

enum Stop {
    Found,
    Limit,
    Cancelled,
}

struct Run<'a> {
    dlx: Dlx,
    stack: Vec<u32>,
    nodes: u64,
    node_limit: u64,
    deadline: Option<Instant>,
    cancel: Option<&'a AtomicBool>,
    want: usize,
    found: Vec<Vec<u32>>,
}

impl Dlx {
    fn build(inst: &XCoverInstance, seed: Option<u64>) -> Dlx {
        let n = inst.items;
        let mut col_order: Vec<u32> = (0..n as u32).collect();
        let mut row_order: Vec<u32> = (0..inst.len() as u32).collect();
        if let Some(s) = seed {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            col_order.shuffle(&mut rng);
            row_order.shuffle(&mut rng);
        }
        let total = 1 + n + inst.subsets.iter().map(Vec::len).sum::<usize>();
        let mut d = Dlx {
            left: Vec::with_capacity(total),
            right: Vec::with_capacity(total),
            up: Vec::with_capacity(total),
            down: Vec::with_capacity(total),
            col: Vec::with_capacity(total),
            row: Vec::with_capacity(total),
            len: vec![0; n + 1],
        };
        // header node for item i sits at col_pos[i] + 1
        let mut col_pos = vec![0u32; n];
        for (p, &i) in col_order.iter().enumerate() {
            col_pos[i as usize] = p as u32;
        }
        for h in 0..=n as u32 {
            d.left.push(if h == 0 { n as u32 } else { h - 1 });
            d.right.push(if h == n as u32 { 0 } else { h + 1 });
            d.up.push(h);
            d.down.push(h);
            d.col.push(h);
            d.row.push(u32::MAX);
        }
        for &r in &row_order {
            let first = d.col.len() as u32;
            let sub = &inst.subsets[r as usize];
            for (k, &item) in sub.iter().enumerate() {
                let x = d.col.len() as u32;
                let c = col_pos[item as usize] + 1;
                let last = first + sub.len() as u32 - 1;
                d.left.push(if k == 0 { last } else { x - 1 });
                d.right.push(if x == last { first } else { x + 1 });
                let u = d.up[c as usize];
                d.up.push(u);
                d.down.push(c);
                d.down[u as usize] = x;
                d.up[c as usize] = x;
                d.col.push(c);
                d.row.push(r);
                d.len[c as usize] += 1;
            }
        }
        d
    }

    #[inline]
    fn cover(&mut self, c: u32) {
        let (l, r) = (self.left[c as usize], self.right[c as usize]);
        self.right[l as usize] = r;
        self.left[r as usize] = l;
        let mut i = self.down[c as usize];
        while i != c {
            let mut j = self.right[i as usize];
            while j != i {
                let (u, d) = (self.up[j as usize], self.down[j as usize]);
                self.down[u as usize] = d;
                self.up[d as usize] = u;
                self.len[self.col[j as usize] as usize] -= 1;
                j = self.right[j as usize];
            }
            i = self.down[i as usize];
        }
    }

    #[inline]
    fn uncover(&mut self, c: u32) {
        let mut i = self.up[c as usize];
        while i != c {
            let mut j = self.left[i as usize];
            while j != i {
                let (u, d) = (self.up[j as usize], self.down[j as usize]);
                self.down[u as usize] = j;
                self.up[d as usize] = j;
                self.len[self.col[j as usize] as usize] += 1;
                j = self.left[j as usize];
            }
            i = self.up[i as usize];
        }
        let (l, r) = (self.left[c as usize], self.right[c as usize]);
        self.right[l as usize] = c;
        self.left[r as usize] = c;
    }

    fn choose(&self) -> Option<u32> {
        let mut best = None;
        let mut best_len = u32::MAX;
        let mut c = self.right[ROOT as usize];
        while c != ROOT {
            let l = self.len[c as usize];
            if l < best_len {
                best_len = l;
                best = Some(c);
                if l <= 1 {
                    break;
                }
            }
            c = self.right[c as usize];
        }
        best
    }
}

impl Run<'_> {
    fn search(&mut self) -> std::result::Result<(), Stop> {
        let Some(c) = self.dlx.choose() else {
            self.found.push(self.stack.clone());
            return if self.found.len() >= self.want {
                Err(Stop::Found)
            } else {
                Ok(())
            };
        };
        if self.dlx.len[c as usize] == 0 {
            return Ok(());
        }
        self.dlx.cover(c);
        let mut r = self.dlx.down[c as usize];
        while r != c {
            self.nodes += 1;
            if self.nodes > self.node_limit {
                self.dlx.uncover(c);
                return Err(Stop::Limit);
            }
            if self.nodes & 0xfff == 0 {
                if self.deadline.is_some_and(|d| Instant::now() >= d) {
                    self.dlx.uncover(c);
                    return Err(Stop::Limit);
                }
                if self.cancel.is_some_and(|f| f.load(Ordering::Relaxed)) {
                    self.dlx.uncover(c);
                    return Err(Stop::Cancelled);
                }
            }
            self.stack.push(self.dlx.row[r as usize]);
            let mut j = self.dlx.right[r as usize];
            while j != r {
                self.dlx.cover(self.dlx.col[j as usize]);
                j = self.dlx.right[j as usize];
            }
            let res = self.search();
            let mut j = self.dlx.left[r as usize];
            while j != r {
                self.dlx.uncover(self.dlx.col[j as usize]);
                j = self.dlx.left[j as usize];
            }
            self.stack.pop();
            res?;
            r = self.dlx.down[r as usize];
        }
        self.dlx.uncover(c);
        Ok(())
    }
}

fn run(
    inst: &XCoverInstance,
    limits: &Limits,
    want: usize,
    cancel: Option<&AtomicBool>,
) -> (Vec<Vec<usize>>, u64, Option<Stop>) {
    let mut r = Run {
        dlx: Dlx::build(inst, limits.seed),
        stack: Vec::new(),
        nodes: 0,
        node_limit: limits.nodes.unwrap_or(u64::MAX),
        deadline: limits.time.map(|t| Instant::now() + t),
        cancel,
        want,
        found: Vec::new(),
    };
    let stop = r.search().err();
    let sols = r
        .found
        .into_iter()
        .map(|s| {
            let mut v: Vec<usize> = s.into_iter().map(|x| x as usize).collect();
            v.sort_unstable();
            v
        })
        .collect();
    (sols, r.nodes, stop)
}

/// First exact cover in search order.
pub fn solve(inst: &XCoverInstance, limits: &Limits) -> Result<CoverSolution> {
    let (mut sols, nodes, stop) = run(inst, limits, 1, None);
    match sols.pop() {
        Some(subsets) => Ok(CoverSolution { subsets, nodes }),
        None if matches!(stop, Some(Stop::Limit)) => Err(Error::LimitExceeded { nodes }),
        None => Err(Error::Unsatisfiable),
    }
}

/// Up to `max` exact covers in search order. Hitting a limit returns what
/// was found so far only if it is non-empty.
pub fn enumerate(inst: &XCoverInstance, max: usize, limits: &Limits) -> Result<Vec<Vec<usize>>> {
    if max == 0 {
        return Ok(Vec::new());
    }
    let (sols, nodes, stop) = run(inst, limits, max, None);
    if sols.is_empty() && matches!(stop, Some(Stop::Limit)) {
        return Err(Error::LimitExceeded { nodes });
    }
    Ok(sols)
}

/// Races one seeded search per entry of `seeds` and keeps whichever finishes
/// first. Which solution comes back depends on thread scheduling.
pub fn solve_portfolio(
    inst: &XCoverInstance,
    seeds: &[u64],
    limits: &Limits,
) -> Result<CoverSolution> {
    let cancel = AtomicBool::new(false);
    let results: Vec<Result<CoverSolution>> = seeds
        .par_iter()
        .map(|&s| {
            let l = Limits {
                seed: Some(s),
                ..limits.clone()
            };
            let (mut sols, nodes, stop) = run(inst, &l, 1, Some(&cancel));
            match sols.pop() {
                Some(subsets) => {
                    cancel.store(true, Ordering::Relaxed);
                    Ok(CoverSolution { subsets, nodes })
                }
                None if matches!(stop, Some(Stop::Limit) | Some(Stop::Cancelled)) => {
                    Err(Error::LimitExceeded { nodes })
                }
                None => Err(Error::Unsatisfiable),
            }
        })
        .collect();
    let mut limit_err = None;
    for r in results {
        match r {
            Ok(s) => return Ok(s),
            Err(Error::Unsatisfiable) => return Err(Error::Unsatisfiable),
            Err(e) => limit_err = Some(e),
        }
    }
    Err(limit_err.unwrap_or(Error::Unsatisfiable))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_force(inst: &XCoverInstance) -> Vec<Vec<usize>> {
        let n = inst.len();
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            let chosen: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            if inst.is_exact_cover(&chosen) {
                out.push(chosen);
            }
        }
        out
    }

    fn instance(items: usize, subsets: &[Vec<u32>]) -> XCoverInstance {
        let mut inst = XCoverInstance::new(items);
        for (t, s) in subsets.iter().enumerate() {
            inst.add_subset(s, t as u64).unwrap();
        }
        inst
    }

    #[test]
    fn knuth_example() {
        let inst = instance(
            7,
            &[
                vec![2, 4, 5],
                vec![0, 3, 6],
                vec![1, 2, 5],
                vec![0, 3],
                vec![1, 6],
                vec![3, 4, 6],
            ],
        );
        let s = solve(&inst, &Limits::default()).unwrap();
        assert_eq!(s.subsets, vec![0, 3, 4]);
        assert_eq!(
            enumerate(&inst, 10, &Limits::default()).unwrap(),
            vec![vec![0, 3, 4]]
        );
    }

    #[test]
    fn unsatisfiable_and_limits() {
        let inst = instance(3, &[vec![0, 1], vec![1, 2]]);
        assert!(matches!(
            solve(&inst, &Limits::default()),
            Err(Error::Unsatisfiable)
        ));
        let mut big = XCoverInstance::new(30);
        for a in 0..30u32 {
            for b in a + 1..30 {
                if (a + b) % 7 != 0 {
                    big.add_subset(&[a, b, (a * b) % 30], 0).ok();
                }
            }
        }
        let l = Limits {
            nodes: Some(5),
            ..Default::default()
        };
        assert!(matches!(
            solve(&big, &l),
            Err(Error::LimitExceeded { .. }) | Err(Error::Unsatisfiable)
        ));
    }

    #[test]
    fn empty_instance_has_empty_cover() {
        let inst = XCoverInstance::new(0);
        assert_eq!(
            solve(&inst, &Limits::default()).unwrap().subsets,
            Vec::<usize>::new()
        );
    }

    #[test]
    fn dump_load_round_trip() {
        let inst = instance(4, &[vec![0, 1], vec![2, 3], vec![1, 3]]);
        let mut buf = Vec::new();
        inst.dump(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "items 4\n0 0 1\n1 2 3\n2 1 3\n"
        );
        assert_eq!(XCoverInstance::load(&buf[..]).unwrap(), inst);
        assert!(XCoverInstance::load(&b"items 2\n0 0 5\n"[..]).is_err());
    }

    fn arb_instance() -> impl Strategy<Value = XCoverInstance> {
        (1usize..=12).prop_flat_map(|items| {
            proptest::collection::vec(
                proptest::collection::btree_set(0..items as u32, 1..=4),
                0..=14,
            )
            .prop_map(move |subs| {
                let subs: Vec<Vec<u32>> =
                    subs.into_iter().map(|s| s.into_iter().collect()).collect();
                instance(items, &subs)
            })
        })
    }

    proptest! {
        #[test]
        fn agrees_with_brute_force(inst in arb_instance(), seed in proptest::option::of(any::<u64>())) {
            let mut all = brute_force(&inst);
            all.sort();
            let limits = Limits { seed, ..Default::default() };
            match solve(&inst, &limits) {
                Ok(s) => {
                    prop_assert!(inst.is_exact_cover(&s.subsets));
                    prop_assert!(all.contains(&s.subsets));
                }
                Err(Error::Unsatisfiable) => prop_assert!(all.is_empty()),
                Err(e) => prop_assert!(false, "unexpected {e}"),
            }
            let mut listed = enumerate(&inst, usize::MAX, &limits).unwrap();
            listed.sort();
            prop_assert_eq!(listed, all);
        }

        #[test]
        fn deterministic_without_seed(inst in arb_instance()) {
            let a = solve(&inst, &Limits::default()).ok();
            let b = solve(&inst, &Limits::default()).ok();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn portfolio_finds_a_cover() {
        let inst = instance(
            7,
            &[
                vec![2, 4, 5],
                vec![0, 3, 6],
                vec![1, 2, 5],
                vec![0, 3],
                vec![1, 6],
                vec![3, 4, 6],
            ],
        );
        let s = solve_portfolio(&inst, &[1, 2, 3], &Limits::default()).unwrap();
        assert!(inst.is_exact_cover(&s.subsets));
    }
}
