//! Twists on dual graphs.
//!
//! A [`Twist`] assigns an integer to each side of every edge joining two
//! distinct vertices. Self-edges are never twisted. [`validate_twist`] checks
//! the balancing, vanishing, sign and transitivity axioms in that order and
//! reports a witness for the first failure.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::graph::{HalfEdge, StableGraph, StarGraph};
use crate::{Error, Result};

/// Integer values on the sides of the basic (non-self) edges of a graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Twist {
    values: BTreeMap<HalfEdge, i64>,
}

impl Twist {
    pub fn new(values: BTreeMap<HalfEdge, i64>) -> Self {
        Twist { values }
    }

    /// Builds a balanced twist from `(edge, value on side a)` pairs.
    pub fn from_edge_values(graph: &StableGraph, values: &[(usize, i64)]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for &(e, x) in values {
            if e >= graph.num_edges() {
                return Err(Error::MalformedTwist {
                    op: "from_edge_values",
                    reason: format!("edge {e} does not exist"),
                });
            }
            map.insert(graph.side(e, 0), x);
            map.insert(graph.side(e, 1), -x);
        }
        Ok(Twist { values: map })
    }

    pub fn get(&self, h: HalfEdge) -> Option<i64> {
        self.values.get(&h).copied()
    }

    pub fn values(&self) -> &BTreeMap<HalfEdge, i64> {
        &self.values
    }

    /// Value on side `a` of edge `e`.
    pub fn edge_value(&self, graph: &StableGraph, e: usize) -> Option<i64> {
        self.get(graph.side(e, 0))
    }

    /// Value of edge `e` on the side attached to vertex `v`.
    pub fn value_at(&self, graph: &StableGraph, e: usize, v: usize) -> Option<i64> {
        let (a, _) = graph.edges()[e];
        self.get(graph.side(e, usize::from(a != v)))
    }
}

/// The axiom that failed, with a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    /// `I(h) + I(ι h) != 0` on this edge.
    Balancing { edge: usize },
    /// A nonzero value on an edge inside one zero-twist class.
    Vanishing { edge: usize },
    /// Two edges between the same pair of classes pointing in opposite directions.
    Sign { edges: (usize, usize) },
    /// A directed cycle of the component digraph, as a closed walk of edges.
    Transitivity { cycle: Vec<usize> },
}

impl Violation {
    pub fn axiom(&self) -> &'static str {
        match self {
            Violation::Balancing { .. } => "balancing",
            Violation::Vanishing { .. } => "vanishing",
            Violation::Sign { .. } => "sign",
            Violation::Transitivity { .. } => "transitivity",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TwistVerdict {
    Valid,
    Violated(Violation),
}

impl TwistVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, TwistVerdict::Valid)
    }
}

/// The directed graph on zero-twist classes of vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentDigraph {
    /// `class_of[v]` is the class containing vertex `v`.
    pub class_of: Vec<usize>,
    /// Vertices of each class, classes ordered by their smallest vertex.
    pub classes: Vec<Vec<usize>>,
    /// Arcs `(from, to)` with the edges realizing them.
    pub arcs: BTreeMap<(usize, usize), Vec<usize>>,
}

impl ComponentDigraph {
    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn has_arc(&self, from: usize, to: usize) -> bool {
        self.arcs.contains_key(&(from, to))
    }

    /// A directed cycle as a list of edges, if one exists.
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        let nc = self.classes.len();
        let mut succ: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nc];
        for (&(x, y), edges) in &self.arcs {
            succ[x].push((y, edges[0]));
        }
        // 0 = unseen, 1 = on stack, 2 = done
        let mut state = vec![0u8; nc];
        let mut stack: Vec<(usize, usize)> = Vec::new();
        fn dfs(
            x: usize,
            succ: &[Vec<(usize, usize)>],
            state: &mut [u8],
            stack: &mut Vec<(usize, usize)>,
        ) -> Option<Vec<usize>> {
            state[x] = 1;
            for &(y, e) in &succ[x] {
                if state[y] == 1 {
                    let start = stack.iter().position(|&(c, _)| c == y).expect("on stack");
                    let mut cycle: Vec<usize> = stack[start + 1..].iter().map(|&(_, e)| e).collect();
                    cycle.push(e);
                    return Some(cycle);
                }
                if state[y] == 0 {
                    stack.push((y, e));
                    if let Some(c) = dfs(y, succ, state, stack) {
                        return Some(c);
                    }
                    stack.pop();
                }
            }
            state[x] = 2;
            None
        }
        for x in 0..nc {
            if state[x] == 0 {
                // the root enters the stack with a placeholder edge
                stack.clear();
                stack.push((x, usize::MAX));
                if let Some(c) = dfs(x, &succ, &mut state, &mut stack) {
                    return Some(c);
                }
            }
        }
        None
    }
}

fn basic_edges(graph: &StableGraph) -> Vec<usize> {
    (0..graph.num_edges())
        .filter(|&e| !graph.is_self_edge(e))
        .collect()
}

fn check_domain(op: &'static str, graph: &StableGraph, twist: &Twist) -> Result<()> {
    for &h in twist.values.keys() {
        if h >= graph.num_half_edges() || graph.is_leg(h) {
            return Err(Error::MalformedTwist {
                op,
                reason: format!("half-edge {h} is not an edge side"),
            });
        }
        let (e, _) = graph.edge_of(h).expect("edge side");
        if graph.is_self_edge(e) {
            return Err(Error::MalformedTwist {
                op,
                reason: format!("half-edge {h} is a side of self-edge {e}"),
            });
        }
    }
    for e in basic_edges(graph) {
        for s in 0..2 {
            if twist.get(graph.side(e, s)).is_none() {
                return Err(Error::MalformedTwist {
                    op,
                    reason: format!("no value on side {s} of edge {e}"),
                });
            }
        }
    }
    Ok(())
}

fn unbalanced(graph: &StableGraph, twist: &Twist) -> Option<usize> {
    basic_edges(graph).into_iter().find(|&e| {
        twist.get(graph.side(e, 0)).unwrap() + twist.get(graph.side(e, 1)).unwrap() != 0
    })
}

fn find(p: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while p[r] != r {
        r = p[r];
    }
    p[x] = r;
    r
}

fn zero_classes(graph: &StableGraph, zero: impl Fn(usize) -> bool) -> (Vec<usize>, Vec<Vec<usize>>) {
    let nv = graph.num_vertices();
    let mut parent: Vec<usize> = (0..nv).collect();
    for e in basic_edges(graph) {
        if zero(e) {
            let (a, b) = graph.edges()[e];
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut index = vec![usize::MAX; nv];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut class_of = vec![0; nv];
    for v in 0..nv {
        let r = find(&mut parent, v);
        if index[r] == usize::MAX {
            index[r] = classes.len();
            classes.push(Vec::new());
        }
        class_of[v] = index[r];
        classes[index[r]].push(v);
    }
    (class_of, classes)
}

fn digraph_unchecked(graph: &StableGraph, twist: &Twist) -> std::result::Result<ComponentDigraph, usize> {
    let value = |e: usize| twist.get(graph.side(e, 0)).unwrap();
    let (class_of, classes) = zero_classes(graph, |e| value(e) == 0);
    let mut arcs: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for e in basic_edges(graph) {
        let x = value(e);
        if x == 0 {
            continue;
        }
        let (a, b) = graph.edges()[e];
        let (ca, cb) = (class_of[a], class_of[b]);
        if ca == cb {
            return Err(e);
        }
        let arc = if x > 0 { (ca, cb) } else { (cb, ca) };
        arcs.entry(arc).or_default().push(e);
    }
    Ok(ComponentDigraph {
        class_of,
        classes,
        arcs,
    })
}

/// The component digraph `Γ_I`: classes of the relation generated by
/// zero-twist edges, with an arc `x -> y` whenever some edge between them is
/// positive on its `x` side.
pub fn component_digraph(graph: &StableGraph, twist: &Twist) -> Result<ComponentDigraph> {
    check_domain("component_digraph", graph, twist)?;
    if let Some(e) = unbalanced(graph, twist) {
        return Err(Error::MalformedTwist {
            op: "component_digraph",
            reason: format!("edge {e} is not balanced"),
        });
    }
    digraph_unchecked(graph, twist).map_err(|edge| Error::Vanishing { edge })
}

/// Checks the four twist axioms.
pub fn validate_twist(graph: &StableGraph, twist: &Twist) -> Result<TwistVerdict> {
    check_domain("validate_twist", graph, twist)?;
    if let Some(edge) = unbalanced(graph, twist) {
        return Ok(TwistVerdict::Violated(Violation::Balancing { edge }));
    }
    let digraph = match digraph_unchecked(graph, twist) {
        Ok(d) => d,
        Err(edge) => return Ok(TwistVerdict::Violated(Violation::Vanishing { edge })),
    };
    for (&(x, y), edges) in &digraph.arcs {
        if x < y {
            if let Some(back) = digraph.arcs.get(&(y, x)) {
                return Ok(TwistVerdict::Violated(Violation::Sign {
                    edges: (edges[0], back[0]),
                }));
            }
        }
    }
    if let Some(cycle) = digraph.find_cycle() {
        return Ok(TwistVerdict::Violated(Violation::Transitivity { cycle }));
    }
    Ok(TwistVerdict::Valid)
}

/// Sum of the twist values required at each vertex by the degree condition
/// `Σ_{i↦v} m_i = k(2g(v)−2) + Σ_{basic sides h at v} (I(h)+k) + k·(self-edge sides at v)`.
pub fn twist_targets(graph: &StableGraph, mu: &[i64], k: i64) -> Vec<i64> {
    let mut target: Vec<i64> = graph
        .genera()
        .iter()
        .map(|&g| -k * (2 * g as i64 - 2))
        .collect();
    for (i, &v) in graph.legs().iter().enumerate() {
        target[v] += mu[i];
    }
    for &(a, b) in graph.edges() {
        target[a] -= k;
        target[b] -= k;
    }
    target
}

fn check_mu(op: &'static str, graph: &StableGraph, mu: &[i64], k: i64) -> Result<()> {
    if mu.len() != graph.num_legs() {
        return Err(Error::input(
            "twist",
            op,
            format!("μ has {} parts but the graph has {} legs", mu.len(), graph.num_legs()),
        ));
    }
    let total: i64 = mu.iter().sum();
    let expected = k * (2 * graph.genus() as i64 - 2);
    if total != expected {
        return Err(Error::input(
            "twist",
            op,
            format!("Σ m_i = {total}, expected {expected}"),
        ));
    }
    Ok(())
}

/// Calls `f` on every composition of `total` into `parts` positive integers.
fn compositions(total: i64, parts: usize, prefix: &mut Vec<i64>, f: &mut dyn FnMut(&[i64])) {
    if parts == 0 {
        if total == 0 {
            f(prefix);
        }
        return;
    }
    if total < parts as i64 {
        return;
    }
    if parts == 1 {
        prefix.push(total);
        f(prefix);
        prefix.pop();
        return;
    }
    for x in 1..=total - (parts as i64 - 1) {
        prefix.push(x);
        compositions(total - x, parts - 1, prefix, f);
        prefix.pop();
    }
}

/// All twists on `graph` satisfying the four axioms and the `k`-twisted degree
/// condition at every vertex. Self-edges never carry a value.
///
/// Zero-twist classes are chosen first, then an acyclic orientation of the
/// quotient graph; along a topological order the outgoing values at each
/// vertex are forced to be a composition of its remaining degree budget, so
/// the search is finite.
pub fn enumerate_twists_general(graph: &StableGraph, mu: &[i64], k: i64) -> Result<Vec<Twist>> {
    check_mu("enumerate_twists_general", graph, mu, k)?;
    let targets = twist_targets(graph, mu, k);
    let basic = basic_edges(graph);
    let nb = basic.len();
    if nb > 20 {
        return Err(Error::input(
            "twist",
            "enumerate_twists_general",
            format!("{nb} basic edges is beyond the supported size"),
        ));
    }
    let mut out: BTreeSet<Twist> = BTreeSet::new();
    for zmask in 0u32..(1u32 << nb) {
        let in_z = |e: usize| {
            let i = basic.iter().position(|&b| b == e).unwrap();
            zmask & (1 << i) != 0
        };
        let (class_of, classes) = zero_classes(graph, in_z);
        // every nonzero edge must join distinct classes
        let nonzero: Vec<usize> = basic.iter().copied().filter(|&e| !in_z(e)).collect();
        if nonzero.iter().any(|&e| {
            let (a, b) = graph.edges()[e];
            class_of[a] == class_of[b]
        }) {
            continue;
        }
        let mut pairs: Vec<(usize, usize)> = nonzero
            .iter()
            .map(|&e| {
                let (a, b) = graph.edges()[e];
                let (x, y) = (class_of[a], class_of[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        pairs.sort();
        pairs.dedup();
        let nc = classes.len();
        for omask in 0u32..(1u32 << pairs.len()) {
            let arcs: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .map(|(i, &(x, y))| if omask & (1 << i) == 0 { (x, y) } else { (y, x) })
                .collect();
            let Some(order) = topological_order(nc, &arcs) else {
                continue;
            };
            // outgoing sides at each vertex
            let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); graph.num_vertices()];
            for &e in &nonzero {
                let (a, b) = graph.edges()[e];
                let (x, y) = (class_of[a], class_of[b]);
                let from_a = arcs.contains(&(x, y));
                if from_a {
                    outgoing[a].push(graph.side(e, 0));
                } else {
                    outgoing[b].push(graph.side(e, 1));
                }
            }
            let vertices: Vec<usize> = order.iter().flat_map(|&c| classes[c].iter().copied()).collect();
            let mut values: BTreeMap<HalfEdge, i64> = BTreeMap::new();
            for &e in basic.iter().filter(|&&e| in_z(e)) {
                values.insert(graph.side(e, 0), 0);
                values.insert(graph.side(e, 1), 0);
            }
            assign(graph, &targets, &vertices, &outgoing, 0, &mut values, &mut out);
        }
    }
    Ok(out.into_iter().collect())
}

fn topological_order(n: usize, arcs: &[(usize, usize)]) -> Option<Vec<usize>> {
    let mut indeg = vec![0usize; n];
    for &(_, y) in arcs {
        indeg[y] += 1;
    }
    let mut ready: Vec<usize> = (0..n).filter(|&x| indeg[x] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(x) = ready.pop() {
        order.push(x);
        for &(a, b) in arcs {
            if a == x {
                indeg[b] -= 1;
                if indeg[b] == 0 {
                    ready.push(b);
                }
            }
        }
    }
    (order.len() == n).then_some(order)
}

fn assign(
    graph: &StableGraph,
    targets: &[i64],
    vertices: &[usize],
    outgoing: &[Vec<usize>],
    idx: usize,
    values: &mut BTreeMap<HalfEdge, i64>,
    out: &mut BTreeSet<Twist>,
) {
    if idx == vertices.len() {
        out.insert(Twist::new(values.clone()));
        return;
    }
    let v = vertices[idx];
    // incoming sides at v already carry their (negative) values
    let incoming: i64 = graph
        .half_edges_at(v)
        .into_iter()
        .filter(|h| !outgoing[v].contains(h))
        .filter_map(|h| values.get(&h).copied())
        .sum();
    let need = targets[v] - incoming;
    let outs = &outgoing[v];
    let mut found: Vec<Vec<i64>> = Vec::new();
    compositions(need, outs.len(), &mut Vec::new(), &mut |c| found.push(c.to_vec()));
    for comp in found {
        for (&h, &x) in outs.iter().zip(&comp) {
            values.insert(h, x);
            values.insert(graph.involution(h), -x);
        }
        assign(graph, targets, vertices, outgoing, idx + 1, values, out);
        for &h in outs {
            values.remove(&h);
            values.remove(&graph.involution(h));
        }
    }
}

/// Twists of a simple star graph: positive values `I(e)` on the center side
/// with `2g(v_0) − 2 + Σ_e (I(e)+1) = Σ_{i↦v_0} m_i` at the center and
/// `2g(v) − 2 + Σ_{e at v} (1 − I(e)) = Σ_{i↦v} m_i` at every outlying vertex.
pub fn enumerate_star_twists(star: &StarGraph, mu: &[i64]) -> Result<Vec<Twist>> {
    let graph = &star.graph;
    check_mu("enumerate_star_twists", graph, mu, 1)?;
    let c = star.center;
    let ne = graph.num_edges();
    let center_parts: i64 = star.parts_at(mu, c).iter().sum();
    let budget = center_parts - (2 * graph.genera()[c] as i64 - 2) - ne as i64;
    let mut out = Vec::new();
    let mut found: Vec<Vec<i64>> = Vec::new();
    compositions(budget, ne, &mut Vec::new(), &mut |x| found.push(x.to_vec()));
    for comp in found {
        let ok = star.outlying().into_iter().all(|v| {
            let parts: i64 = star.parts_at(mu, v).iter().sum();
            let edges: i64 = (0..ne)
                .filter(|&e| {
                    let (a, b) = graph.edges()[e];
                    a == v || b == v
                })
                .map(|e| 1 - comp[e])
                .sum();
            2 * graph.genera()[v] as i64 - 2 + edges == parts
        });
        if !ok {
            continue;
        }
        let mut values = BTreeMap::new();
        for (e, &x) in comp.iter().enumerate() {
            let (a, _) = graph.edges()[e];
            let s = usize::from(a != c);
            values.insert(graph.side(e, s), x);
            values.insert(graph.side(e, 1 - s), -x);
        }
        out.push(Twist::new(values));
    }
    out.sort();
    Ok(out)
}

/// The twist value of each edge on the center side.
pub fn star_edge_values(star: &StarGraph, twist: &Twist) -> Vec<i64> {
    (0..star.graph.num_edges())
        .map(|e| twist.value_at(&star.graph, e, star.center).unwrap_or(0))
        .collect()
}
