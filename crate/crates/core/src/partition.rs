//! Netlist hypergraphs and a multilevel recursive-bisection partitioner.
//!
//! Each bisection coarsens with heavy-edge matching, grows an initial split
//! on the coarsest graph, then projects back level by level with
//! Fiduccia-Mattheyses refinement.

use std::cmp::Reverse;
use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::netlist::{Driver, NetId, Netlist};

pub const DEFAULT_BALANCE_TOL: f64 = 0.25;
/// Coarsening stops once a level has at most this many vertices.
const COARSE_VERTICES: usize = 100;
/// Hyperedges wider than this are ignored while matching.
const MATCH_EDGE_LIMIT: usize = 32;
/// Hyperedges wider than this are ignored by the bisection heuristics; they
/// still count in [`cut_size`].
const HEURISTIC_EDGE_LIMIT: usize = 512;
const INITIAL_TRIES: usize = 8;
const FM_PASSES: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PartitionError {
    #[error("{0} must be at least 1")]
    Zero(&'static str),
    #[error("balance tolerance {0} must be finite and non-negative")]
    Tolerance(f64),
    #[error("hyperedge {edge} references vertex {vertex} (only {count} vertices)")]
    VertexRange { edge: usize, vertex: u32, count: usize },
    #[error("hyperedge {0} is empty")]
    EmptyEdge(usize),
    #[error("partition assignment does not match the hypergraph")]
    Mismatch,
}

/// `floor(gates / key_bits)`, clamped to at least one gate.
pub fn compute_partition_size(gates_total: usize, k_size: usize) -> Result<usize, PartitionError> {
    if gates_total == 0 {
        return Err(PartitionError::Zero("gate count"));
    }
    if k_size == 0 {
        return Err(PartitionError::Zero("key size"));
    }
    Ok((gates_total / k_size).max(1))
}

/// One vertex per gate, one hyperedge per net touching at least one gate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    vertex_count: usize,
    hyperedges: Vec<Vec<u32>>,
    nets: Vec<Option<NetId>>,
}

impl Hypergraph {
    /// Vertex lists are sorted and deduplicated.
    pub fn new(vertex_count: usize, hyperedges: Vec<Vec<u32>>) -> Result<Self, PartitionError> {
        let mut edges = Vec::with_capacity(hyperedges.len());
        for (i, mut e) in hyperedges.into_iter().enumerate() {
            if e.is_empty() {
                return Err(PartitionError::EmptyEdge(i));
            }
            e.sort_unstable();
            e.dedup();
            if let Some(&v) = e.iter().find(|&&v| v as usize >= vertex_count) {
                return Err(PartitionError::VertexRange { edge: i, vertex: v, count: vertex_count });
            }
            edges.push(e);
        }
        let nets = vec![None; edges.len()];
        Ok(Hypergraph { vertex_count, hyperedges: edges, nets })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn hyperedges(&self) -> &[Vec<u32>] {
        &self.hyperedges
    }

    /// Net behind hyperedge `e`, for hypergraphs built from a netlist.
    pub fn net(&self, e: usize) -> Option<NetId> {
        self.nets[e]
    }

    /// hMETIS text: `edges vertices`, then 1-based vertex lists.
    pub fn to_hmetis(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.hyperedges.len(), self.vertex_count);
        for e in &self.hyperedges {
            let line: Vec<String> = e.iter().map(|v| (v + 1).to_string()).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }
}

pub fn build_hypergraph(netlist: &Netlist) -> Hypergraph {
    let mut hyperedges = Vec::new();
    let mut nets = Vec::new();
    for (i, net) in netlist.nets().iter().enumerate() {
        let mut e: Vec<u32> = net.sinks.iter().map(|g| g.0).collect();
        if let Driver::Gate(g) = net.driver {
            e.push(g.0);
        }
        if e.is_empty() {
            continue;
        }
        e.sort_unstable();
        e.dedup();
        hyperedges.push(e);
        nets.push(Some(NetId(i as u32)));
    }
    Hypergraph { vertex_count: netlist.gate_count(), hyperedges, nets }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionSet {
    pub assignment: Vec<u32>,
    pub p: usize,
    pub target_size: usize,
    pub balance_tol: f64,
    /// Set when `target_size` exceeded the vertex count.
    pub warning: bool,
    /// Bisection cuts summed over the recursion, before and after FM
    /// passes. A net split at several levels counts once per level, so
    /// these bound [`cut_size`] from above rather than equal it.
    pub bisection_cut_initial: u64,
    pub bisection_cut_refined: u64,
}

impl PartitionSet {
    pub fn max_size(&self) -> usize {
        max_part_size(self.target_size, self.balance_tol)
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.p];
        for &a in &self.assignment {
            s[a as usize] += 1;
        }
        s
    }

    /// Vertex ids per partition, ascending.
    pub fn parts(&self) -> Vec<Vec<u32>> {
        let mut parts = vec![Vec::new(); self.p];
        for (v, &a) in self.assignment.iter().enumerate() {
            parts[a as usize].push(v as u32);
        }
        parts
    }

    /// One partition index per line, vertex order.
    pub fn to_partition_file(&self) -> String {
        let mut out = String::with_capacity(self.assignment.len() * 3);
        for a in &self.assignment {
            let _ = writeln!(out, "{a}");
        }
        out
    }
}

fn max_part_size(target: usize, tol: f64) -> usize {
    ((target as f64) * (1.0 + tol)).ceil().max(target as f64) as usize
}

pub fn cut_size(h: &Hypergraph, ps: &PartitionSet) -> Result<u64, PartitionError> {
    if ps.assignment.len() != h.vertex_count {
        return Err(PartitionError::Mismatch);
    }
    Ok(h.hyperedges
        .iter()
        .filter(|e| {
            let first = ps.assignment[e[0] as usize];
            e.iter().any(|&v| ps.assignment[v as usize] != first)
        })
        .count() as u64)
}

pub fn partition(
    h: &Hypergraph,
    target_size: usize,
    balance_tol: f64,
    seed: u64,
) -> Result<PartitionSet, PartitionError> {
    if target_size == 0 {
        return Err(PartitionError::Zero("partition size"));
    }
    if !balance_tol.is_finite() || balance_tol < 0.0 {
        return Err(PartitionError::Tolerance(balance_tol));
    }
    let v = h.vertex_count;
    let warning = target_size > v;
    let p = v.div_ceil(target_size).max(1);
    let mut ps = PartitionSet {
        assignment: vec![0; v],
        p,
        target_size,
        balance_tol,
        warning,
        bisection_cut_initial: 0,
        bisection_cut_refined: 0,
    };
    if p <= 1 {
        return Ok(ps);
    }
    let cap = max_part_size(target_size, balance_tol);
    let mut ctx = Splitter {
        h,
        incidence: incidence(v, &h.hyperedges),
        local: vec![u32::MAX; v],
        edge_mark: vec![false; h.hyperedges.len()],
        rng: ChaCha8Rng::seed_from_u64(seed),
        cap,
        tol: balance_tol,
        before: 0,
        after: 0,
    };
    let all: Vec<u32> = (0..v as u32).collect();
    ctx.split(all, p, 0, &mut ps.assignment);
    ps.bisection_cut_initial = ctx.before;
    ps.bisection_cut_refined = ctx.after;
    Ok(ps)
}

fn incidence(n: usize, edges: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut inc = vec![Vec::new(); n];
    for (i, e) in edges.iter().enumerate() {
        for &v in e {
            inc[v as usize].push(i as u32);
        }
    }
    inc
}

struct Splitter<'a> {
    h: &'a Hypergraph,
    incidence: Vec<Vec<u32>>,
    local: Vec<u32>,
    edge_mark: Vec<bool>,
    rng: ChaCha8Rng,
    cap: usize,
    tol: f64,
    before: u64,
    after: u64,
}

impl Splitter<'_> {
    /// Splits `verts` into `q` non-empty leaves of at most `cap` vertices,
    /// numbered from `first`.
    fn split(&mut self, verts: Vec<u32>, q: usize, first: u32, out: &mut [u32]) {
        if q == 1 {
            for &v in &verts {
                out[v as usize] = first;
            }
            return;
        }
        let n = verts.len();
        let q0 = q / 2;
        let q1 = q - q0;
        let hard_lo = q0.max(n.saturating_sub(q1 * self.cap));
        let hard_hi = (q0 * self.cap).min(n - q1);
        let ideal = n as f64 * q0 as f64 / q as f64;
        let soft_lo = (ideal * (1.0 - self.tol / 2.0)).ceil() as usize;
        let soft_hi = (ideal * (1.0 + self.tol / 2.0)).floor() as usize;
        let (mut lo, mut hi) = (soft_lo.max(hard_lo), soft_hi.min(hard_hi));
        if lo > hi {
            lo = hard_lo;
            hi = hard_hi;
        }
        let g = self.subgraph(&verts);
        let (side, before, after) = bisect(&g, lo as u64, hi as u64, &mut self.rng);
        self.before += before;
        self.after += after;
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for (i, &v) in verts.iter().enumerate() {
            if side[i] == 0 {
                a.push(v);
            } else {
                b.push(v);
            }
        }
        debug_assert!((lo..=hi).contains(&a.len()));
        self.split(a, q0, first, out);
        self.split(b, q1, first + q0 as u32, out);
    }

    fn subgraph(&mut self, verts: &[u32]) -> Graph {
        for (i, &v) in verts.iter().enumerate() {
            self.local[v as usize] = i as u32;
        }
        let mut touched = Vec::new();
        for &v in verts {
            for &e in &self.incidence[v as usize] {
                if !std::mem::replace(&mut self.edge_mark[e as usize], true) {
                    touched.push(e);
                }
            }
        }
        touched.sort_unstable();
        let mut edges = Vec::new();
        for &e in &touched {
            self.edge_mark[e as usize] = false;
            let full = &self.h.hyperedges[e as usize];
            if full.len() > HEURISTIC_EDGE_LIMIT {
                continue;
            }
            let local: Vec<u32> = full
                .iter()
                .map(|&v| self.local[v as usize])
                .filter(|&l| l != u32::MAX)
                .collect();
            if local.len() >= 2 {
                edges.push(local);
            }
        }
        for &v in verts {
            self.local[v as usize] = u32::MAX;
        }
        Graph::new(vec![1; verts.len()], edges, None)
    }
}

/// Weighted hypergraph used inside one bisection.
struct Graph {
    vwt: Vec<u64>,
    edges: Vec<Vec<u32>>,
    ewt: Vec<u64>,
    inc: Vec<Vec<u32>>,
}

impl Graph {
    fn new(vwt: Vec<u64>, edges: Vec<Vec<u32>>, ewt: Option<Vec<u64>>) -> Graph {
        let ewt = ewt.unwrap_or_else(|| vec![1; edges.len()]);
        let inc = incidence(vwt.len(), &edges);
        Graph { vwt, edges, ewt, inc }
    }

    fn n(&self) -> usize {
        self.vwt.len()
    }

    fn total_weight(&self) -> u64 {
        self.vwt.iter().sum()
    }

    fn cut(&self, side: &[u8]) -> u64 {
        self.edges
            .iter()
            .zip(&self.ewt)
            .filter(|(e, _)| {
                let s = side[e[0] as usize];
                e.iter().any(|&v| side[v as usize] != s)
            })
            .map(|(_, &w)| w)
            .sum()
    }

    fn side0_weight(&self, side: &[u8]) -> u64 {
        self.vwt.iter().zip(side).filter(|(_, &s)| s == 0).map(|(&w, _)| w).sum()
    }
}

fn violation(w0: u64, lo: u64, hi: u64) -> u64 {
    lo.saturating_sub(w0) + w0.saturating_sub(hi)
}

/// Returns the side of every vertex plus the finest-level cut before and
/// after refinement.
fn bisect(g: &Graph, lo: u64, hi: u64, rng: &mut ChaCha8Rng) -> (Vec<u8>, u64, u64) {
    let total = g.total_weight();
    let max_cluster = (total / (COARSE_VERTICES as u64 / 2)).max(2).min(hi.saturating_sub(lo).max(2));
    let mut levels: Vec<(Graph, Vec<u32>)> = Vec::new();
    loop {
        let cur = levels.last().map(|(c, _)| c).unwrap_or(g);
        if cur.n() <= COARSE_VERTICES {
            break;
        }
        let (coarse, map) = coarsen(cur, max_cluster, rng);
        if coarse.n() * 10 > cur.n() * 9 {
            break;
        }
        levels.push((coarse, map));
    }

    let coarsest = levels.last().map(|(c, _)| c).unwrap_or(g);
    let mut side = initial_split(coarsest, lo, hi, rng);
    while let Some((_, map)) = levels.pop() {
        let finer = levels.last().map(|(c, _)| c).unwrap_or(g);
        side = map.iter().map(|&c| side[c as usize]).collect();
        if !levels.is_empty() {
            repair(finer, &mut side, lo, hi);
            fm_refine(finer, &mut side, lo, hi);
        }
    }
    repair(g, &mut side, lo, hi);
    let before = g.cut(&side);
    let snapshot = side.clone();
    fm_refine(g, &mut side, lo, hi);
    let mut after = g.cut(&side);
    if after > before || violation(g.side0_weight(&side), lo, hi) > 0 {
        side = snapshot;
        after = before;
    }
    (side, before, after)
}

fn coarsen(g: &Graph, max_cluster: u64, rng: &mut ChaCha8Rng) -> (Graph, Vec<u32>) {
    let n = g.n();
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(rng);
    let mut mate = vec![u32::MAX; n];
    let mut score = vec![0f64; n];
    let mut touched: Vec<u32> = Vec::new();
    for &v in &order {
        if mate[v as usize] != u32::MAX {
            continue;
        }
        for &e in &g.inc[v as usize] {
            let edge = &g.edges[e as usize];
            if edge.len() > MATCH_EDGE_LIMIT {
                continue;
            }
            let w = g.ewt[e as usize] as f64 / (edge.len() - 1) as f64;
            for &u in edge {
                if u != v
                    && mate[u as usize] == u32::MAX
                    && g.vwt[u as usize] + g.vwt[v as usize] <= max_cluster
                {
                    if score[u as usize] == 0.0 {
                        touched.push(u);
                    }
                    score[u as usize] += w;
                }
            }
        }
        let mut best: Option<(f64, u32)> = None;
        for &u in &touched {
            let s = score[u as usize];
            if best.is_none_or(|(bs, bu)| s > bs || (s == bs && u < bu)) {
                best = Some((s, u));
            }
        }
        for &u in &touched {
            score[u as usize] = 0.0;
        }
        touched.clear();
        match best {
            Some((_, u)) => {
                mate[v as usize] = u;
                mate[u as usize] = v;
            }
            None => mate[v as usize] = v,
        }
    }
    let mut map = vec![u32::MAX; n];
    let mut vwt = Vec::new();
    for v in 0..n {
        if map[v] != u32::MAX {
            continue;
        }
        let c = vwt.len() as u32;
        map[v] = c;
        let m = mate[v] as usize;
        let mut w = g.vwt[v];
        if m != v {
            map[m] = c;
            w += g.vwt[m];
        }
        vwt.push(w);
    }
    let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut edges: Vec<Vec<u32>> = Vec::new();
    let mut ewt: Vec<u64> = Vec::new();
    for (e, &w) in g.edges.iter().zip(&g.ewt) {
        let mut ce: Vec<u32> = e.iter().map(|&v| map[v as usize]).collect();
        ce.sort_unstable();
        ce.dedup();
        if ce.len() < 2 {
            continue;
        }
        match index.get(&ce) {
            Some(&i) => ewt[i] += w,
            None => {
                index.insert(ce.clone(), edges.len());
                edges.push(ce);
                ewt.push(w);
            }
        }
    }
    (Graph::new(vwt, edges, Some(ewt)), map)
}

/// Greedy breadth-first growing from several random seeds, each refined;
/// the best balanced result wins.
fn initial_split(g: &Graph, lo: u64, hi: u64, rng: &mut ChaCha8Rng) -> Vec<u8> {
    let n = g.n();
    let goal = (lo + hi) / 2;
    let mut best: Option<((u64, u64), Vec<u8>)> = None;
    for _ in 0..INITIAL_TRIES {
        let mut side = vec![1u8; n];
        let mut w0 = 0u64;
        let mut queue = VecDeque::new();
        let mut seen = vec![false; n];
        let mut unvisited: Vec<u32> = (0..n as u32).collect();
        unvisited.shuffle(rng);
        while w0 < goal {
            let v = match queue.pop_front() {
                Some(v) => v,
                None => match unvisited.iter().copied().find(|&u| !seen[u as usize]) {
                    Some(u) => {
                        seen[u as usize] = true;
                        u
                    }
                    None => break,
                },
            };
            if w0 + g.vwt[v as usize] > hi {
                continue;
            }
            side[v as usize] = 0;
            w0 += g.vwt[v as usize];
            for &e in &g.inc[v as usize] {
                for &u in &g.edges[e as usize] {
                    if !std::mem::replace(&mut seen[u as usize], true) {
                        queue.push_back(u);
                    }
                }
            }
        }
        repair(g, &mut side, lo, hi);
        fm_refine(g, &mut side, lo, hi);
        let key = (violation(g.side0_weight(&side), lo, hi), g.cut(&side));
        if best.as_ref().is_none_or(|(k, _)| key < *k) {
            best = Some((key, side));
        }
    }
    best.expect("at least one try").1
}

/// Moves highest-gain vertices off the overweight side until the split is
/// inside `[lo, hi]` or no move reduces the violation.
fn repair(g: &Graph, side: &mut [u8], lo: u64, hi: u64) {
    let mut w0 = g.side0_weight(side);
    while violation(w0, lo, hi) > 0 {
        let from: u8 = if w0 > hi { 0 } else { 1 };
        let gains = all_gains(g, side);
        let mut best: Option<(i64, u32)> = None;
        for v in 0..g.n() {
            if side[v] != from {
                continue;
            }
            let nw = if from == 0 { w0 - g.vwt[v] } else { w0 + g.vwt[v] };
            if violation(nw, lo, hi) >= violation(w0, lo, hi) {
                continue;
            }
            let cand = (gains[v], v as u32);
            if best.is_none_or(|(bg, bv)| cand.0 > bg || (cand.0 == bg && cand.1 < bv)) {
                best = Some(cand);
            }
        }
        let Some((_, v)) = best else { break };
        let v = v as usize;
        side[v] = 1 - from;
        w0 = if from == 0 { w0 - g.vwt[v] } else { w0 + g.vwt[v] };
    }
}

fn edge_counts(g: &Graph, side: &[u8]) -> Vec<[u32; 2]> {
    g.edges
        .iter()
        .map(|e| {
            let mut c = [0u32; 2];
            for &v in e {
                c[side[v as usize] as usize] += 1;
            }
            c
        })
        .collect()
}

fn all_gains(g: &Graph, side: &[u8]) -> Vec<i64> {
    let counts = edge_counts(g, side);
    (0..g.n())
        .map(|v| {
            let s = side[v] as usize;
            g.inc[v]
                .iter()
                .map(|&e| {
                    let c = counts[e as usize];
                    let w = g.ewt[e as usize] as i64;
                    (if c[s] == 1 { w } else { 0 }) - (if c[1 - s] == 0 { w } else { 0 })
                })
                .sum()
        })
        .collect()
}

/// Fiduccia-Mattheyses passes with best-prefix rollback. Never increases
/// the (violation, cut) pair.
fn fm_refine(g: &Graph, side: &mut [u8], lo: u64, hi: u64) {
    let n = g.n();
    if n < 2 {
        return;
    }
    let stall_limit = (n / 8).max(32);
    for _ in 0..FM_PASSES {
        let mut counts = edge_counts(g, side);
        let mut gains = all_gains(g, side);
        let mut buckets: [BTreeSet<(Reverse<i64>, u32)>; 2] = [BTreeSet::new(), BTreeSet::new()];
        for v in 0..n {
            buckets[side[v] as usize].insert((Reverse(gains[v]), v as u32));
        }
        let mut locked = vec![false; n];
        let mut w0 = g.side0_weight(side);
        let mut cut = g.cut(side) as i64;
        let start = (violation(w0, lo, hi), cut);
        let mut best = start;
        let mut best_len = 0usize;
        let mut moves: Vec<u32> = Vec::new();
        loop {
            let cur_v = violation(w0, lo, hi);
            let mut pick: Option<(i64, u32)> = None;
            for s in 0..2u8 {
                for &(Reverse(gain), v) in buckets[s as usize].iter().take(16) {
                    let wv = g.vwt[v as usize];
                    let nw = if s == 0 { w0 - wv } else { w0 + wv };
                    let nv = violation(nw, lo, hi);
                    if nv > cur_v || (cur_v == 0 && nv > 0) {
                        continue;
                    }
                    if pick.is_none_or(|(pg, pv)| gain > pg || (gain == pg && v < pv)) {
                        pick = Some((gain, v));
                    }
                    break;
                }
            }
            let Some((gain, v)) = pick else { break };
            let vi = v as usize;
            let from = side[vi] as usize;
            let to = 1 - from;
            buckets[from].remove(&(Reverse(gains[vi]), v));
            locked[vi] = true;
            for &e in &g.inc[vi] {
                let ei = e as usize;
                let w = g.ewt[ei] as i64;
                let edge = &g.edges[ei];
                let mut bump = |u: u32, delta: i64, gains: &mut Vec<i64>| {
                    let ui = u as usize;
                    if locked[ui] {
                        return;
                    }
                    let b = &mut buckets[side[ui] as usize];
                    b.remove(&(Reverse(gains[ui]), u));
                    gains[ui] += delta;
                    b.insert((Reverse(gains[ui]), u));
                };
                if counts[ei][to] == 0 {
                    for &u in edge {
                        bump(u, w, &mut gains);
                    }
                } else if counts[ei][to] == 1 {
                    if let Some(&u) = edge.iter().find(|&&u| side[u as usize] as usize == to) {
                        bump(u, -w, &mut gains);
                    }
                }
                counts[ei][from] -= 1;
                counts[ei][to] += 1;
                if counts[ei][from] == 0 {
                    for &u in edge {
                        if u != v {
                            bump(u, -w, &mut gains);
                        }
                    }
                } else if counts[ei][from] == 1 {
                    if let Some(&u) =
                        edge.iter().find(|&&u| u != v && side[u as usize] as usize == from)
                    {
                        bump(u, w, &mut gains);
                    }
                }
            }
            side[vi] = to as u8;
            w0 = if from == 0 { w0 - g.vwt[vi] } else { w0 + g.vwt[vi] };
            cut -= gain;
            moves.push(v);
            let state = (violation(w0, lo, hi), cut);
            if state < best {
                best = state;
                best_len = moves.len();
            } else if moves.len() - best_len > stall_limit {
                break;
            }
        }
        for &v in moves[best_len..].iter().rev() {
            side[v as usize] ^= 1;
        }
        if best >= start {
            break;
        }
    }
}

/// Exhaustive minimum cut over all 2-way splits with parts in
/// `1..=max_size`; test oracle for tiny hypergraphs.
pub fn exhaustive_bisection_cut(h: &Hypergraph, max_size: usize) -> Option<u64> {
    let n = h.vertex_count;
    assert!(n <= 20, "exhaustive oracle limited to 20 vertices");
    let mut best: Option<u64> = None;
    for mask in 1u32..(1u32 << n) - 1 {
        let ones = mask.count_ones() as usize;
        if ones > max_size || n - ones > max_size {
            continue;
        }
        let cut = h
            .hyperedges
            .iter()
            .filter(|e| {
                let s = (mask >> e[0]) & 1;
                e.iter().any(|&v| (mask >> v) & 1 != s)
            })
            .count() as u64;
        best = Some(best.map_or(cut, |b: u64| b.min(cut)));
    }
    best
}

/// Random hypergraph for tests and benchmarks.
pub fn random_hypergraph(vertices: usize, edges: usize, max_edge: usize, seed: u64) -> Hypergraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let list = (0..edges)
        .map(|_| {
            let size = rng.gen_range(2..=max_edge.max(2));
            (0..size).map(|_| rng.gen_range(0..vertices as u32)).collect()
        })
        .collect();
    Hypergraph::new(vertices, list).expect("generated edges are in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::parse_bench;

    fn path(n: usize) -> Hypergraph {
        Hypergraph::new(n, (0..n as u32 - 1).map(|i| vec![i, i + 1]).collect()).unwrap()
    }

    #[test]
    fn partition_size_formula() {
        assert_eq!(compute_partition_size(160, 32), Ok(5));
        assert_eq!(compute_partition_size(100, 32), Ok(3));
        assert_eq!(compute_partition_size(10, 32), Ok(1));
        assert!(compute_partition_size(0, 3).is_err());
        assert!(compute_partition_size(3, 0).is_err());
    }

    #[test]
    fn netlist_hypergraph_shapes() {
        let and = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(o)\no = AND(a, b)\n").unwrap();
        let h = build_hypergraph(&and);
        assert_eq!(h.vertex_count(), 1);
        assert_eq!(h.hyperedges().len(), 3);

        let chain = parse_bench("INPUT(a)\nOUTPUT(z)\nx = NOT(a)\ny = NOT(x)\nz = NOT(y)\n").unwrap();
        let h = build_hypergraph(&chain);
        let pairs = h.hyperedges().iter().filter(|e| e.len() == 2).count();
        assert_eq!(pairs, 2);

        let fan = parse_bench(
            "INPUT(a)\nOUTPUT(p)\nOUTPUT(q)\nOUTPUT(r)\nx = NOT(a)\np = NOT(x)\nq = BUF(x)\nr = NOT(x)\n",
        )
        .unwrap();
        let h = build_hypergraph(&fan);
        let x = fan.net_by_name("x").unwrap();
        let e = (0..h.hyperedges().len()).find(|&i| h.net(i) == Some(x)).unwrap();
        assert_eq!(h.hyperedges()[e].len(), 4);
    }

    #[test]
    fn two_cliques_cut_zero() {
        let mut edges = Vec::new();
        for base in [0u32, 5] {
            for i in 0..5 {
                for j in i + 1..5 {
                    edges.push(vec![base + i, base + j]);
                }
            }
        }
        let h = Hypergraph::new(10, edges).unwrap();
        let ps = partition(&h, 5, DEFAULT_BALANCE_TOL, 1).unwrap();
        assert_eq!(ps.p, 2);
        assert_eq!(cut_size(&h, &ps).unwrap(), 0);
    }

    #[test]
    fn ten_path_cut_is_one() {
        let h = path(10);
        let cap = max_part_size(5, DEFAULT_BALANCE_TOL);
        assert_eq!(exhaustive_bisection_cut(&h, cap), Some(1));
        for seed in 0..10 {
            let ps = partition(&h, 5, DEFAULT_BALANCE_TOL, seed).unwrap();
            assert_eq!(cut_size(&h, &ps).unwrap(), 1, "seed {seed}");
        }
    }

    #[test]
    fn cut_size_basics() {
        let h = Hypergraph::new(2, vec![vec![0, 1]]).unwrap();
        let mut ps = partition(&h, 2, 0.0, 0).unwrap();
        assert_eq!(cut_size(&h, &ps).unwrap(), 0);
        ps.assignment = vec![0, 1];
        ps.p = 2;
        assert_eq!(cut_size(&h, &ps).unwrap(), 1);
    }

    #[test]
    fn oversized_target_warns() {
        let ps = partition(&path(4), 10, DEFAULT_BALANCE_TOL, 0).unwrap();
        assert_eq!(ps.p, 1);
        assert!(ps.warning);
        assert!(!partition(&path(4), 4, DEFAULT_BALANCE_TOL, 0).unwrap().warning);
    }

    #[test]
    fn dumps() {
        let h = path(3);
        assert_eq!(h.to_hmetis(), "2 3\n1 2\n2 3\n");
        let ps = partition(&h, 2, DEFAULT_BALANCE_TOL, 0).unwrap();
        assert_eq!(ps.to_partition_file().lines().count(), 3);
    }

    #[test]
    fn balance_and_refinement_on_large_graph() {
        let h = random_hypergraph(3000, 4000, 5, 9);
        for target in [7, 25, 400] {
            let ps = partition(&h, target, DEFAULT_BALANCE_TOL, 3).unwrap();
            assert_eq!(ps.p, 3000usize.div_ceil(target));
            let sizes = ps.sizes();
            assert!(sizes.iter().all(|&s| s >= 1 && s <= ps.max_size()), "{sizes:?}");
            assert!(ps.bisection_cut_refined <= ps.bisection_cut_initial);
        }
    }

    #[test]
    fn rejects_bad_edges() {
        assert_eq!(Hypergraph::new(2, vec![vec![]]), Err(PartitionError::EmptyEdge(0)));
        assert!(matches!(
            Hypergraph::new(2, vec![vec![0, 2]]),
            Err(PartitionError::VertexRange { .. })
        ));
    }
}
