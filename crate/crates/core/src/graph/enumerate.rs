use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, OnceLock};

use parking_lot::Mutex;

use super::StableGraph;
use crate::{Error, Result};

/// Every stable graph with `k + 1` edges contracts to one with `k` edges, so
/// `G_{g,n}` is generated level by level by splitting vertices of the previous
/// level: either a self-edge lowering the genus, or two vertices joined by a new
/// edge with the half-edges and genus distributed between them.
fn splittings(graph: &StableGraph) -> Vec<StableGraph> {
    let mut out = Vec::new();
    for v in 0..graph.num_vertices() {
        let gv = graph.genera()[v];
        if gv > 0 {
            let mut genera = graph.genera().to_vec();
            genera[v] -= 1;
            let mut edges = graph.edges().to_vec();
            edges.push((v, v));
            out.push(StableGraph::new_unchecked(genera, graph.legs().to_vec(), edges));
        }
        let hs = graph.half_edges_at(v);
        let k = hs.len();
        let w = graph.num_vertices();
        for mask in 0u64..(1u64 << k) {
            let moved = mask.count_ones() as usize;
            for g_new in 0..=gv {
                // stability of both halves (each gains the new edge side)
                if 2 * g_new as usize + moved < 2 {
                    continue;
                }
                if 2 * (gv - g_new) as usize + (k - moved) < 2 {
                    continue;
                }
                let mut genera = graph.genera().to_vec();
                genera[v] = gv - g_new;
                genera.push(g_new);
                let mut legs = graph.legs().to_vec();
                let mut edges = graph.edges().to_vec();
                for (bit, &h) in hs.iter().enumerate() {
                    if mask & (1 << bit) == 0 {
                        continue;
                    }
                    match graph.edge_of(h) {
                        None => legs[h] = w,
                        Some((e, 0)) => edges[e].0 = w,
                        Some((e, _)) => edges[e].1 = w,
                    }
                }
                edges.push((v, w));
                out.push(StableGraph::new_unchecked(genera, legs, edges));
            }
        }
    }
    out
}

fn sort_key(g: &StableGraph) -> (usize, &StableGraph) {
    (g.num_edges(), g)
}

fn generate(g: u32, n: usize) -> Vec<StableGraph> {
    let max_edges = 3 * g as usize + n - 3;
    let mut all: Vec<StableGraph> = Vec::new();
    let mut level: BTreeSet<StableGraph> = BTreeSet::new();
    level.insert(StableGraph::trivial(g, n));
    for _ in 0..=max_edges {
        all.extend(level.iter().cloned());
        let mut next = BTreeSet::new();
        for graph in &level {
            for split in splittings(graph) {
                debug_assert!(split.is_stable() && split.is_connected());
                next.insert(split.canonical());
            }
        }
        level = next;
        if level.is_empty() {
            break;
        }
    }
    all.sort_by(|a, b| sort_key(a).cmp(&sort_key(b)));
    all
}

fn cache() -> &'static Mutex<HashMap<(u32, usize), Arc<Vec<StableGraph>>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, usize), Arc<Vec<StableGraph>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Shared, memoized `G_{g,n}` (canonical representatives sorted by edge count,
/// then canonical key).
pub fn stable_graphs_cached(g: u32, n: usize) -> Result<Arc<Vec<StableGraph>>> {
    if 2 * g as usize + n <= 2 {
        return Err(Error::Unstable {
            op: "enumerate_stable_graphs",
            g,
            n,
        });
    }
    if let Some(hit) = cache().lock().get(&(g, n)) {
        return Ok(hit.clone());
    }
    let graphs = Arc::new(generate(g, n));
    Ok(cache().lock().entry((g, n)).or_insert(graphs).clone())
}

/// One canonical representative per isomorphism class of stable graphs of
/// genus `g` with `n` legs.
pub fn enumerate_stable_graphs(g: u32, n: usize) -> Result<Vec<StableGraph>> {
    Ok(stable_graphs_cached(g, n)?.as_ref().clone())
}
