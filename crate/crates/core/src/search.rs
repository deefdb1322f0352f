//! Exact maximum clique search (bitset branch and bound with greedy coloring
//! bounds) on Cayley graphs of the 2-dimensional groups.
//!
//! Cocliques of the derangement graph and 2-intersecting sets are both found
//! as cliques of a Cayley graph whose connection set is a union of classes:
//! elements with at least one (resp. two) fixed points.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::certificate::{verify, Certificate, CertificateKind};
use crate::error::{Error, Result};
use crate::group::GroupContext;

pub const DEFAULT_BUDGET: Duration = Duration::from_secs(60);
/// Largest candidate set for which a bitset graph is built.
pub const MAX_SEARCH_VERTICES: usize = 50_000;

const CLOCK_CHECK_INTERVAL: u64 = 512;

/// Dense symmetric adjacency stored as one bitset row per vertex.
#[derive(Clone, Debug)]
pub struct BitGraph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl BitGraph {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        Self { n, words, rows: vec![0; n * words] }
    }

    pub fn from_fn(n: usize, adjacent: impl Fn(usize, usize) -> bool) -> Self {
        let mut g = Self::new(n);
        for i in 0..n {
            for j in i + 1..n {
                if adjacent(i, j) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn add_edge(&mut self, i: usize, j: usize) {
        assert_ne!(i, j, "no loops");
        self.rows[i * self.words + j / 64] |= 1 << (j % 64);
        self.rows[j * self.words + i / 64] |= 1 << (i % 64);
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.rows[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.rows[i * self.words..(i + 1) * self.words]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_clique(&self, vs: &[usize]) -> bool {
        vs.iter().enumerate().all(|(a, &x)| vs[a + 1..].iter().all(|&y| x != y && self.has_edge(x, y)))
    }

    /// Copy with vertices renumbered so that new vertex `k` is old `order[k]`.
    fn permuted(&self, order: &[usize]) -> Self {
        let mut g = Self::new(order.len());
        for (a, &x) in order.iter().enumerate() {
            for (b, &y) in order.iter().enumerate().skip(a + 1) {
                if self.has_edge(x, y) {
                    g.add_edge(a, b);
                }
            }
        }
        g
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Optimality {
    Proved,
    /// Budget ran out; the set is only a lower bound.
    LowerBound,
}

#[derive(Clone, Debug, Serialize)]
pub struct CliqueResult {
    pub clique: Vec<usize>,
    pub optimality: Optimality,
    pub nodes: u64,
    /// (nodes, size, seconds) at each improvement.
    pub progress: Vec<(u64, usize, f64)>,
}

#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub time: Duration,
    pub nodes: Option<u64>,
}

impl Budget {
    pub fn seconds(s: f64) -> Self {
        Self { time: Duration::from_secs_f64(s), nodes: None }
    }

    pub fn nodes(n: u64) -> Self {
        Self { time: Duration::MAX, nodes: Some(n) }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self { time: DEFAULT_BUDGET, nodes: None }
    }
}

struct Bbmc<'a> {
    g: &'a BitGraph,
    best: Vec<usize>,
    floor: usize,
    nodes: u64,
    start: Instant,
    budget: Budget,
    aborted: bool,
    progress: Vec<(u64, usize, f64)>,
}

impl Bbmc<'_> {
    fn out_of_budget(&mut self) -> bool {
        if self.aborted {
            return true;
        }
        if self.budget.nodes.is_some_and(|n| self.nodes >= n)
            || (self.nodes.is_multiple_of(CLOCK_CHECK_INTERVAL) && self.start.elapsed() >= self.budget.time)
        {
            self.aborted = true;
        }
        self.aborted
    }

    fn best_len(&self) -> usize {
        self.best.len().max(self.floor)
    }

    fn expand(&mut self, current: &mut Vec<usize>, mut p: Vec<u64>) {
        self.nodes += 1;
        if self.out_of_budget() {
            return;
        }
        let words = self.g.words;
        // Greedy sequential coloring; only vertices whose color could still
        // beat the incumbent become branch candidates.
        let kmin = (self.best_len() + 1).saturating_sub(current.len()) as u32;
        let mut order: Vec<(usize, u32)> = Vec::new();
        let mut uncolored = p.clone();
        let mut q = vec![0u64; words];
        let mut color = 0u32;
        while uncolored.iter().any(|&w| w != 0) {
            color += 1;
            q.copy_from_slice(&uncolored);
            let mut wi = 0;
            while wi < words {
                let w = q[wi];
                if w == 0 {
                    wi += 1;
                    continue;
                }
                let v = wi * 64 + w.trailing_zeros() as usize;
                q[wi] &= !(1 << (v % 64));
                uncolored[wi] &= !(1 << (v % 64));
                let row = self.g.row(v);
                for k in wi..words {
                    q[k] &= !row[k];
                }
                if color >= kmin {
                    order.push((v, color));
                }
            }
        }
        let mut next = vec![0u64; words];
        for &(v, c) in order.iter().rev() {
            if current.len() + c as usize <= self.best_len() {
                return;
            }
            current.push(v);
            let row = self.g.row(v);
            let mut any = false;
            for k in 0..words {
                next[k] = p[k] & row[k];
                any |= next[k] != 0;
            }
            if any {
                self.expand(current, next.clone());
            } else if current.len() > self.best_len() {
                self.best = current.clone();
                self.progress.push((self.nodes, self.best.len(), self.start.elapsed().as_secs_f64()));
            }
            current.pop();
            p[v / 64] &= !(1 << (v % 64));
            if self.aborted {
                return;
            }
        }
    }
}

/// Maximum clique of `g`. Only cliques larger than `floor` are reported;
/// if none exists the result is empty and `Proved` means "nothing above `floor`".
pub fn max_clique_with_floor(g: &BitGraph, floor: usize, budget: Budget) -> CliqueResult {
    let start = Instant::now();
    let mut order: Vec<usize> = (0..g.len()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let h = g.permuted(&order);
    let mut search =
        Bbmc { g: &h, best: Vec::new(), floor, nodes: 0, start, budget, aborted: false, progress: Vec::new() };
    let mut all = vec![0u64; h.words];
    for v in 0..h.len() {
        all[v / 64] |= 1 << (v % 64);
    }
    if !h.is_empty() {
        search.expand(&mut Vec::new(), all);
    }
    let mut clique: Vec<usize> = search.best.iter().map(|&v| order[v]).collect();
    clique.sort_unstable();
    CliqueResult {
        clique,
        optimality: if search.aborted { Optimality::LowerBound } else { Optimality::Proved },
        nodes: search.nodes,
        progress: search.progress,
    }
}

pub fn max_clique_graph(g: &BitGraph, budget: Budget) -> CliqueResult {
    max_clique_with_floor(g, 0, budget)
}

// ---- group instances ---------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    /// Cliques of the derangement graph.
    Clique,
    /// Cocliques of the derangement graph (intersecting sets).
    Coclique,
    /// Sets whose pairs agree on at least two points.
    TwoIntersecting,
}

impl Target {
    fn kind(self) -> CertificateKind {
        match self {
            Target::Clique => CertificateKind::Clique,
            Target::Coclique => CertificateKind::Coclique,
            Target::TwoIntersecting => CertificateKind::TwoIntersecting,
        }
    }

    /// Is `x != 1` in the connection set whose cliques are the target sets?
    fn connects(self, ctx: &GroupContext, x: usize) -> bool {
        let fix = ctx.fix_count(x);
        match self {
            Target::Clique => fix == 0,
            Target::Coclique => fix >= 1,
            Target::TwoIntersecting => fix >= 2,
        }
    }
}

/// Cayley graph restricted to a candidate vertex list.
#[derive(Clone, Debug)]
pub struct SearchInstance {
    pub target: Target,
    pub symmetry: bool,
    /// Element ids of the graph's vertices, ascending.
    pub vertices: Vec<u32>,
    pub graph: BitGraph,
}

impl SearchInstance {
    /// With `symmetry`, the identity is forced into the set and only its
    /// neighbours are searched (valid since left translation is transitive).
    pub fn new(ctx: &GroupContext, target: Target, symmetry: bool) -> Result<Self> {
        if target == Target::TwoIntersecting && !ctx.family().is_projective() {
            return Err(Error::Unsupported("2-intersecting search needs PGL or PSL".into()));
        }
        let connection: Vec<usize> = (1..ctx.order()).filter(|&x| target.connects(ctx, x)).collect();
        let vertices: Vec<u32> = if symmetry {
            connection.iter().map(|&x| x as u32).collect()
        } else {
            (0..ctx.order() as u32).collect()
        };
        if vertices.len() > MAX_SEARCH_VERTICES {
            return Err(Error::Budget(format!("{} candidate vertices", vertices.len())));
        }
        let mut index = vec![u32::MAX; ctx.order()];
        for (k, &v) in vertices.iter().enumerate() {
            index[v as usize] = k as u32;
        }
        let mut graph = BitGraph::new(vertices.len());
        for (a, &g) in vertices.iter().enumerate() {
            for &s in &connection {
                let b = index[ctx.mul(g as usize, s)];
                if b != u32::MAX && (b as usize) > a {
                    graph.add_edge(a, b as usize);
                }
            }
        }
        Ok(Self { target, symmetry, vertices, graph })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchOutcome {
    pub certificate: Certificate,
    pub optimality: Optimality,
    pub nodes: u64,
    pub elapsed_secs: f64,
    pub progress: Vec<(u64, usize, f64)>,
}

impl SearchOutcome {
    pub fn size(&self) -> usize {
        self.certificate.size
    }

    pub fn proved(&self) -> bool {
        self.optimality == Optimality::Proved
    }
}

/// Run the search; `floor` is a known set of the target kind used as the
/// starting incumbent (returned if nothing larger is found).
pub fn run(
    ctx: &GroupContext,
    inst: &SearchInstance,
    floor: Option<&Certificate>,
    budget: Budget,
) -> Result<SearchOutcome> {
    let start = Instant::now();
    let forced = usize::from(inst.symmetry);
    let floor_len = floor.map_or(0, |c| c.size.saturating_sub(forced));
    let res = max_clique_with_floor(&inst.graph, floor_len, budget);
    let kind = inst.target.kind();
    let certificate = if let (true, Some(f)) = (res.clique.is_empty(), floor) {
        f.clone()
    } else {
        let mut ids: Vec<u32> = res.clique.iter().map(|&v| inst.vertices[v]).collect();
        if inst.symmetry {
            ids.push(0);
        }
        Certificate::new(ctx, kind, ids).with_note(format!(
            "found by bitset branch and bound{}",
            if inst.symmetry { " with the identity fixed" } else { "" }
        ))
    };
    let mut certificate = certificate;
    certificate.verification = verify(ctx, &certificate)?;
    Ok(SearchOutcome {
        certificate,
        optimality: res.optimality,
        nodes: res.nodes,
        elapsed_secs: start.elapsed().as_secs_f64(),
        progress: res.progress,
    })
}

pub fn max_clique(ctx: &GroupContext, symmetry: bool, budget: Budget) -> Result<SearchOutcome> {
    run(ctx, &SearchInstance::new(ctx, Target::Clique, symmetry)?, None, budget)
}

pub fn max_coclique(ctx: &GroupContext, symmetry: bool, budget: Budget) -> Result<SearchOutcome> {
    run(ctx, &SearchInstance::new(ctx, Target::Coclique, symmetry)?, None, budget)
}

/// Maximum 2-intersecting set of PGL(2,q) or PSL(2,q); for PGL the explicit
/// construction seeds the incumbent.
pub fn max_two_intersecting(ctx: &GroupContext, budget: Budget) -> Result<SearchOutcome> {
    let inst = SearchInstance::new(ctx, Target::TwoIntersecting, true)?;
    let floor = match ctx.family() {
        crate::group::Family::Pgl if ctx.q() >= 3 => Some(crate::constructions::pgl_two_intersecting(ctx)?),
        _ => None,
    };
    run(ctx, &inst, floor.as_ref(), budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Family;

    #[test]
    fn petersen_and_complete() {
        // Petersen graph: outer 5-cycle, spokes, inner pentagram
        let g = BitGraph::from_fn(10, |i, j| {
            let (a, b) = (i.min(j), i.max(j));
            (b < 5 && (b - a == 1 || b - a == 4))
                || (a < 5 && b == a + 5)
                || (a >= 5 && ((b - a) == 2 || (b - a) == 3))
        });
        assert!((0..10).all(|v| g.degree(v) == 3));
        assert_eq!(max_clique_graph(&g, Budget::default()).clique.len(), 2);
        let k = BitGraph::from_fn(70, |_, _| true);
        let r = max_clique_graph(&k, Budget::default());
        assert_eq!(r.clique.len(), 70);
        assert_eq!(r.optimality, Optimality::Proved);
    }

    #[test]
    fn gl3_values() {
        let ctx = GroupContext::build(Family::Gl, 3).unwrap();
        let c = max_coclique(&ctx, true, Budget::default()).unwrap();
        assert_eq!((c.size(), c.proved()), (6, true));
        assert_eq!(max_clique(&ctx, true, Budget::default()).unwrap().size(), 8);
    }

    #[test]
    fn sl3_values() {
        let ctx = GroupContext::build(Family::Sl, 3).unwrap();
        assert_eq!(max_coclique(&ctx, false, Budget::default()).unwrap().size(), 3);
        assert_eq!(max_clique(&ctx, false, Budget::default()).unwrap().size(), 8);
    }

    #[test]
    fn node_budget_gives_lower_bound() {
        let ctx = GroupContext::build(Family::Pgl, 7).unwrap();
        let out = max_two_intersecting(&ctx, Budget::nodes(3)).unwrap();
        assert_eq!(out.optimality, Optimality::LowerBound);
        assert!(out.size() >= 8);
    }
}
