//! The class file format.
//!
//! A class is a JSON document with one entry per term, in canonical term
//! order. Vertices are numbered from 0, markings from 1. Half-edges are named
//! `L{i}` for the leg of marking `i` and `E{e}a`, `E{e}b` for the two sides of
//! edge `e`. Coefficients are strings `"p/q"` in lowest terms.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};

use crate::graph::{HalfEdge, StableGraph};
use crate::strata::{DecoratedStratum, TautClass};
use crate::twist::Twist;
use crate::{Error, Result, Q};

pub const FORMAT_NAME: &str = "tautring-class";
pub const FORMAT_VERSION: u32 = 1;

fn bad(op: &'static str, reason: impl Into<String>) -> Error {
    Error::Format {
        op,
        reason: reason.into(),
    }
}

pub fn q_to_string(q: &Q) -> String {
    if q.denom().is_one() {
        format!("{}/1", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_q(s: &str) -> Result<Q> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n.trim().parse().map_err(|_| bad("parse_q", format!("bad numerator in {s:?}")))?;
    let d: BigInt = d.trim().parse().map_err(|_| bad("parse_q", format!("bad denominator in {s:?}")))?;
    if d == BigInt::from(0) {
        return Err(bad("parse_q", format!("zero denominator in {s:?}")));
    }
    Ok(Q::new(n, d))
}

pub fn half_edge_name(graph: &StableGraph, h: HalfEdge) -> String {
    match graph.edge_of(h) {
        None => format!("L{}", h + 1),
        Some((e, 0)) => format!("E{e}a"),
        Some((e, _)) => format!("E{e}b"),
    }
}

fn parse_half_edge(graph: &StableGraph, name: &str) -> Result<HalfEdge> {
    let err = || bad("parse_half_edge", format!("unknown half-edge {name:?}"));
    if let Some(rest) = name.strip_prefix('L') {
        let i: usize = rest.parse().map_err(|_| err())?;
        if i == 0 || i > graph.num_legs() {
            return Err(err());
        }
        return Ok(i - 1);
    }
    let rest = name.strip_prefix('E').ok_or_else(err)?;
    let (num, side) = rest.split_at(rest.len().saturating_sub(1));
    let e: usize = num.parse().map_err(|_| err())?;
    let s = match side {
        "a" => 0,
        "b" => 1,
        _ => return Err(err()),
    };
    if e >= graph.num_edges() {
        return Err(err());
    }
    Ok(graph.side(e, s))
}

pub fn graph_to_json(graph: &StableGraph) -> Value {
    let legs: BTreeMap<String, usize> = graph
        .legs()
        .iter()
        .enumerate()
        .map(|(i, &v)| (format!("{}", i + 1), v))
        .collect();
    let edges: Vec<Value> = graph
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &(a, b))| json!({ "id": e, "ends": [a, b] }))
        .collect();
    json!({ "genera": graph.genera(), "legs": legs, "edges": edges })
}

pub fn graph_from_json(v: &Value) -> Result<StableGraph> {
    let op = "graph_from_json";
    let genera = v
        .get("genera")
        .and_then(Value::as_array)
        .ok_or_else(|| bad(op, "missing array \"genera\""))?
        .iter()
        .map(|x| x.as_u64().map(|x| x as u32).ok_or_else(|| bad(op, "genera must be integers")))
        .collect::<Result<Vec<_>>>()?;
    let leg_map = v
        .get("legs")
        .and_then(Value::as_object)
        .ok_or_else(|| bad(op, "missing map \"legs\""))?;
    let mut legs = vec![usize::MAX; leg_map.len()];
    for (k, x) in leg_map {
        let i: usize = k.parse().map_err(|_| bad(op, format!("bad marking {k:?}")))?;
        let vx = x.as_u64().ok_or_else(|| bad(op, "leg vertices must be integers"))?;
        if i == 0 || i > legs.len() || legs[i - 1] != usize::MAX {
            return Err(bad(op, format!("markings must be 1..{}", legs.len())));
        }
        legs[i - 1] = vx as usize;
    }
    let list = v
        .get("edges")
        .and_then(Value::as_array)
        .ok_or_else(|| bad(op, "missing array \"edges\""))?;
    let mut edges = vec![(usize::MAX, usize::MAX); list.len()];
    for e in list {
        let id = e.get("id").and_then(Value::as_u64).ok_or_else(|| bad(op, "edge without id"))? as usize;
        let ends = e.get("ends").and_then(Value::as_array).ok_or_else(|| bad(op, "edge without ends"))?;
        let (Some(a), Some(b)) = (ends.first().and_then(Value::as_u64), ends.get(1).and_then(Value::as_u64)) else {
            return Err(bad(op, "edge ends must be two vertices"));
        };
        if id >= edges.len() || edges[id].0 != usize::MAX {
            return Err(bad(op, format!("edge ids must be 0..{}", edges.len())));
        }
        edges[id] = (a as usize, b as usize);
    }
    StableGraph::new(genera, legs, edges)
}

pub fn stratum_to_json(s: &DecoratedStratum) -> Value {
    let graph = s.graph();
    let mut kappa = BTreeMap::new();
    for (v, ks) in s.kappa().iter().enumerate() {
        if ks.is_empty() {
            continue;
        }
        let mut counts: BTreeMap<String, u32> = BTreeMap::new();
        for a in ks {
            *counts.entry(a.to_string()).or_default() += 1;
        }
        kappa.insert(v.to_string(), counts);
    }
    let mut psi = BTreeMap::new();
    for (h, &p) in s.psi().iter().enumerate() {
        if p > 0 {
            psi.insert(half_edge_name(graph, h), p);
        }
    }
    json!({ "graph": graph_to_json(graph), "kappa": kappa, "psi": psi })
}

pub fn stratum_from_json(v: &Value) -> Result<DecoratedStratum> {
    let op = "stratum_from_json";
    let graph = graph_from_json(v.get("graph").ok_or_else(|| bad(op, "missing \"graph\""))?)?;
    let mut kappa = vec![Vec::new(); graph.num_vertices()];
    if let Some(map) = v.get("kappa").and_then(Value::as_object) {
        for (vs, counts) in map {
            let vx: usize = vs.parse().map_err(|_| bad(op, format!("bad vertex {vs:?}")))?;
            if vx >= graph.num_vertices() {
                return Err(bad(op, format!("vertex {vx} out of range")));
            }
            for (a, c) in counts.as_object().ok_or_else(|| bad(op, "κ entries must be maps"))? {
                let a: u32 = a.parse().map_err(|_| bad(op, format!("bad κ index {a:?}")))?;
                let c = c.as_u64().ok_or_else(|| bad(op, "κ exponents must be integers"))?;
                kappa[vx].extend(std::iter::repeat_n(a, c as usize));
            }
        }
    }
    let mut psi = vec![0u32; graph.num_half_edges()];
    if let Some(map) = v.get("psi").and_then(Value::as_object) {
        for (name, p) in map {
            let h = parse_half_edge(&graph, name)?;
            psi[h] = p.as_u64().ok_or_else(|| bad(op, "ψ exponents must be integers"))? as u32;
        }
    }
    DecoratedStratum::new(graph, kappa, psi)
}

pub fn class_to_json(x: &TautClass) -> Value {
    let terms: Vec<Value> = x
        .terms()
        .iter()
        .map(|(s, c)| {
            let mut t = stratum_to_json(s);
            t["coeff"] = Value::String(q_to_string(c));
            t
        })
        .collect();
    json!({
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "g": x.genus(),
        "n": x.num_markings(),
        "terms": terms,
    })
}

/// Byte-deterministic serialization (pretty-printed, trailing newline).
pub fn class_to_string(x: &TautClass) -> String {
    let mut s = serde_json::to_string_pretty(&class_to_json(x)).expect("serializable");
    s.push('\n');
    s
}

pub fn class_from_json(v: &Value) -> Result<TautClass> {
    let op = "class_from_json";
    if v.get("format").and_then(Value::as_str) != Some(FORMAT_NAME) {
        return Err(bad(op, "not a class document"));
    }
    if v.get("version").and_then(Value::as_u64) != Some(FORMAT_VERSION as u64) {
        return Err(bad(op, "unsupported format version"));
    }
    let g = v.get("g").and_then(Value::as_u64).ok_or_else(|| bad(op, "missing \"g\""))? as u32;
    let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| bad(op, "missing \"n\""))? as usize;
    let mut x = TautClass::zero(g, n);
    for t in v.get("terms").and_then(Value::as_array).ok_or_else(|| bad(op, "missing \"terms\""))? {
        let s = stratum_from_json(t)?;
        if (s.graph().genus(), s.graph().num_legs()) != (g, n) {
            return Err(bad(op, "term lives on a different moduli space"));
        }
        let c = parse_q(t.get("coeff").and_then(Value::as_str).ok_or_else(|| bad(op, "missing \"coeff\""))?)?;
        x.add_term(s, c);
    }
    Ok(x)
}

pub fn class_from_str(s: &str) -> Result<TautClass> {
    let v: Value = serde_json::from_str(s).map_err(|e| bad("class_from_str", e.to_string()))?;
    class_from_json(&v)
}

/// A twist as a map from edge id to the value on the side at `center`, or
/// at the lower-indexed vertex when no center is given.
pub fn twist_to_json(graph: &StableGraph, twist: &Twist, center: Option<usize>) -> Value {
    let mut map = BTreeMap::new();
    for (e, &(a, b)) in graph.edges().iter().enumerate() {
        let at = center.unwrap_or(a.min(b));
        if let Some(x) = twist.value_at(graph, e, at) {
            map.insert(e.to_string(), x);
        }
    }
    json!(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q_frac;

    #[test]
    fn round_trip() {
        let lp = StableGraph::new(vec![0], vec![0, 0], vec![(0, 0)]).unwrap();
        let mut x = TautClass::boundary(lp).unwrap().scale(&q_frac(-1, 24));
        x.add_scaled(&TautClass::kappa(1, 2, 1).unwrap(), &q_frac(3, 1)).unwrap();
        x.add_scaled(&TautClass::psi(1, 2, 1, 2).unwrap(), &q_frac(1, 7)).unwrap();
        let s = class_to_string(&x);
        assert_eq!(class_from_str(&s).unwrap(), x);
        assert_eq!(class_to_string(&class_from_str(&s).unwrap()), s);
    }

    #[test]
    fn coefficients() {
        assert_eq!(q_to_string(&q_frac(6, -4)), "-3/2");
        assert_eq!(parse_q("-3/2").unwrap(), q_frac(-3, 2));
        assert_eq!(parse_q("5").unwrap(), q_frac(5, 1));
        assert!(parse_q("1/0").is_err());
    }
}
