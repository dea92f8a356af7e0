//! The constraint multi-hypergraph and its peeling algorithms.
//!
//! Nodes are variables, hyperedges are constraint scopes, and parallel edges
//! are kept (each counts separately toward degrees and widths). Width is
//! computed by min-degree peeling: repeatedly remove a node of minimum
//! current degree, killing its incident edges. The maximum degree seen at
//! removal is the width, and the reverse removal order is an ordering
//! attaining it. An edge contributes to a node's width exactly when its
//! whole scope sits in the node's prefix, which is the same as being alive
//! when the node is peeled.

use std::collections::BTreeSet;

use rand::Rng;

use crate::error::{Error, Result};
use crate::model::{GenParams, Instance};
use crate::rng::{derive_seed, stream, tag};

/// K-uniform multi-hypergraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n_nodes: usize,
    arity: usize,
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Build from an explicit edge list; every edge must have the stated
    /// arity, ascending node indices below `n_nodes`.
    pub fn new(n_nodes: usize, arity: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        for e in &edges {
            if e.len() != arity {
                return Err(Error::invalid(format!("edge {e:?} does not have arity {arity}")));
            }
            if !e.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::invalid(format!("edge {e:?} is not strictly increasing")));
            }
            if e.iter().any(|&v| v >= n_nodes) {
                return Err(Error::invalid(format!("edge {e:?} references a node >= {n_nodes}")));
            }
        }
        Ok(Hypergraph { n_nodes, arity, edges })
    }

    /// One edge per constraint, multiplicity preserved.
    pub fn from_instance(inst: &Instance) -> Self {
        Hypergraph {
            n_nodes: inst.n(),
            arity: inst.k(),
            edges: inst.constraints.iter().map(|c| c.scope.clone()).collect(),
        }
    }

    /// Generate the constraint hypergraph of `params` directly, without
    /// materializing relations.
    ///
    /// Uses the same per-constraint scope substreams as instance generation,
    /// so `Hypergraph::generate(p)` equals
    /// `Hypergraph::from_instance(&generate(p))` whenever the latter is
    /// feasible. This is what makes width experiments at large `n` possible:
    /// the relations would not fit in memory, the scopes always do.
    pub fn generate(params: &GenParams) -> Result<Self> {
        params.validate()?;
        let m = params.constraint_count();
        let edges = (0..m)
            .map(|i| {
                let mut rng = stream(derive_seed(params.seed, &[tag::SCOPE, i as u64]));
                crate::model::draw_scope(params.n, params.k, &mut rng)
            })
            .collect();
        Ok(Hypergraph { n_nodes: params.n, arity: params.k, edges })
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Per-node edge counts.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n_nodes];
        for e in &self.edges {
            for &v in e {
                deg[v] += 1;
            }
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Minimum degree over all nodes; rejected on an empty node set.
    pub fn linkage(&self) -> Result<usize> {
        if self.n_nodes == 0 {
            return Err(Error::invalid("linkage of a hypergraph with no nodes".to_string()));
        }
        Ok(self.degrees().into_iter().min().unwrap())
    }

    fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n_nodes];
        for (i, e) in self.edges.iter().enumerate() {
            for &v in e {
                inc[v].push(i);
            }
        }
        inc
    }

    /// Text dump: `hgraph v1` header, counts, one ascending edge per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("hgraph v1\n");
        out.push_str(&format!("{} {} {}\n", self.n_nodes, self.arity, self.edges.len()));
        for e in &self.edges {
            let line: Vec<String> = e.iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::parse("empty hypergraph file".to_string()))?;
        if header.trim() != "hgraph v1" {
            return Err(Error::parse(format!("unsupported header `{header}` (expected `hgraph v1`)")));
        }
        let meta = lines.next().ok_or_else(|| Error::parse("missing count line".to_string()))?;
        let nums: Vec<usize> = meta
            .split_whitespace()
            .map(|s| s.parse().map_err(|_| Error::parse(format!("bad count `{s}`"))))
            .collect::<Result<_>>()?;
        let [n_nodes, arity, n_edges] = nums[..] else {
            return Err(Error::parse("count line must be `n_nodes k n_edges`".to_string()));
        };
        let mut edges = Vec::with_capacity(n_edges);
        for line in lines {
            if line.trim().is_empty() {
                continue;
            }
            let e: Vec<usize> = line
                .split_whitespace()
                .map(|s| s.parse().map_err(|_| Error::parse(format!("bad node index `{s}`"))))
                .collect::<Result<_>>()?;
            edges.push(e);
        }
        if edges.len() != n_edges {
            return Err(Error::parse(format!("expected {n_edges} edges, found {}", edges.len())));
        }
        Hypergraph::new(n_nodes, arity, edges)
    }
}

/// How peeling picks among equally eligible nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieBreak {
    /// Lowest node index, the deterministic default.
    MinIndex,
    /// Seeded random choice; used by the core-uniqueness tests.
    Seeded(u64),
}

/// A variable ordering together with its per-node widths.
///
/// `perm[i]` is the node at position `i`; `widths[u]` counts the edges whose
/// whole scope lies in `u`'s prefix and which contain `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableOrdering {
    perm: Vec<usize>,
    widths: Vec<usize>,
}

impl VariableOrdering {
    /// Build an ordering from a permutation, computing the widths from the
    /// edge list.
    pub fn from_perm(hg: &Hypergraph, perm: Vec<usize>) -> Result<Self> {
        let n = hg.n_nodes();
        if perm.len() != n {
            return Err(Error::invalid(format!("permutation length {} != {n}", perm.len())));
        }
        let mut seen = vec![false; n];
        for &u in &perm {
            if u >= n || seen[u] {
                return Err(Error::invalid(format!("not a permutation of 0..{n}")));
            }
            seen[u] = true;
        }
        let rank = invert(&perm);
        let mut widths = vec![0; n];
        for e in hg.edges() {
            // The edge becomes fully contained exactly at its last node.
            let last = e.iter().map(|&v| rank[v]).max().unwrap();
            widths[perm[last]] += 1;
        }
        Ok(VariableOrdering { perm, widths })
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn widths(&self) -> &[usize] {
        &self.widths
    }

    /// `rank()[u]` is the position of node `u`.
    pub fn rank(&self) -> Vec<usize> {
        invert(&self.perm)
    }

    pub fn width(&self) -> usize {
        self.widths.iter().copied().max().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }
}

fn invert(perm: &[usize]) -> Vec<usize> {
    let mut rank = vec![0; perm.len()];
    for (i, &u) in perm.iter().enumerate() {
        rank[u] = i;
    }
    rank
}

/// The subgraph surviving a core peel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreResult {
    /// Surviving node indices, ascending; empty when no core exists.
    pub nodes: Vec<usize>,
    /// Edges whose scopes survived, in input order.
    pub surviving_edges: Vec<Vec<usize>>,
}

impl CoreResult {
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Shared peeling state: exact degree buckets over the alive subgraph.
struct Peeler<'a> {
    hg: &'a Hypergraph,
    incidence: Vec<Vec<usize>>,
    deg: Vec<usize>,
    alive_node: Vec<bool>,
    alive_edge: Vec<bool>,
    buckets: Vec<BTreeSet<usize>>,
    /// Lower bound on the smallest non-empty bucket.
    min_hint: usize,
}

impl<'a> Peeler<'a> {
    fn new(hg: &'a Hypergraph) -> Self {
        let deg = hg.degrees();
        let max_deg = deg.iter().copied().max().unwrap_or(0);
        let mut buckets = vec![BTreeSet::new(); max_deg + 1];
        for (u, &d) in deg.iter().enumerate() {
            buckets[d].insert(u);
        }
        Peeler {
            incidence: hg.incidence(),
            deg,
            alive_node: vec![true; hg.n_nodes()],
            alive_edge: vec![true; hg.edge_count()],
            buckets,
            min_hint: 0,
            hg,
        }
    }

    /// Remove `u`, killing its incident alive edges and rebucketing the
    /// affected neighbors. Returns the degree `u` had at removal.
    ///
    /// Parallel edges through `u` can drop a neighbor by more than one
    /// bucket at once, so `min_hint` tracks every rebucketing.
    fn remove(&mut self, u: usize) -> usize {
        let hg = self.hg;
        let removed_at = self.deg[u];
        self.buckets[removed_at].remove(&u);
        self.alive_node[u] = false;
        let incident = std::mem::take(&mut self.incidence[u]);
        for &e in &incident {
            if !self.alive_edge[e] {
                continue;
            }
            self.alive_edge[e] = false;
            for &w in &hg.edges()[e] {
                if w == u || !self.alive_node[w] {
                    continue;
                }
                let d = self.deg[w];
                self.buckets[d].remove(&w);
                self.deg[w] = d - 1;
                self.buckets[d - 1].insert(w);
                self.min_hint = self.min_hint.min(d - 1);
            }
        }
        removed_at
    }

    /// Smallest non-empty bucket, if any node is still alive.
    fn min_bucket(&mut self) -> Option<usize> {
        while self.min_hint < self.buckets.len() {
            if !self.buckets[self.min_hint].is_empty() {
                return Some(self.min_hint);
            }
            self.min_hint += 1;
        }
        None
    }
}

fn pick(bucket: &BTreeSet<usize>, tie: &mut TieRng) -> usize {
    match tie {
        TieRng::MinIndex => *bucket.first().unwrap(),
        TieRng::Seeded(rng) => {
            let i = rng.gen_range(0..bucket.len());
            *bucket.iter().nth(i).unwrap()
        }
    }
}

enum TieRng {
    MinIndex,
    Seeded(Box<rand_chacha::ChaCha8Rng>),
}

impl From<TieBreak> for TieRng {
    fn from(t: TieBreak) -> Self {
        match t {
            TieBreak::MinIndex => TieRng::MinIndex,
            TieBreak::Seeded(seed) => {
                TieRng::Seeded(Box::new(stream(derive_seed(seed, &[tag::TIE_BREAK]))))
            }
        }
    }
}

/// Width by min-degree peeling, plus an ordering attaining it.
pub fn compute_width(hg: &Hypergraph) -> (usize, VariableOrdering) {
    compute_width_with(hg, TieBreak::MinIndex)
}

pub fn compute_width_with(hg: &Hypergraph, tie: TieBreak) -> (usize, VariableOrdering) {
    let mut peeler = Peeler::new(hg);
    let mut tie: TieRng = tie.into();
    let n = hg.n_nodes();
    let mut removal: Vec<usize> = Vec::with_capacity(n);
    let mut widths = vec![0; n];
    let mut width = 0;
    for _ in 0..n {
        let b = peeler.min_bucket().expect("a node remains at every step");
        let u = pick(&peeler.buckets[b], &mut tie);
        let at = peeler.remove(u);
        widths[u] = at;
        width = width.max(at);
        removal.push(u);
    }
    removal.reverse();
    (width, VariableOrdering { perm: removal, widths })
}

/// The unique maximal subgraph of minimum degree at least `min_degree`,
/// found by deleting under-degree nodes until none remain.
pub fn find_core(hg: &Hypergraph, min_degree: usize) -> Result<CoreResult> {
    find_core_with(hg, min_degree, TieBreak::MinIndex)
}

pub fn find_core_with(hg: &Hypergraph, min_degree: usize, tie: TieBreak) -> Result<CoreResult> {
    if min_degree == 0 {
        return Err(Error::invalid("core minimum degree must be at least 1".to_string()));
    }
    let mut peeler = Peeler::new(hg);
    let mut tie: TieRng = tie.into();
    while let Some(b) = peeler.min_bucket() {
        if b >= min_degree {
            break;
        }
        let u = pick(&peeler.buckets[b], &mut tie);
        peeler.remove(u);
    }
    let nodes: Vec<usize> = (0..hg.n_nodes()).filter(|&u| peeler.alive_node[u]).collect();
    let surviving_edges = hg
        .edges()
        .iter()
        .zip(&peeler.alive_edge)
        .filter(|(_, &alive)| alive)
        .map(|(e, _)| e.clone())
        .collect();
    Ok(CoreResult { nodes, surviving_edges })
}
