use super::{HalfEdge, StableGraph};

/// An isomorphism of stable graphs fixing every leg.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    pub vertex: Vec<usize>,
    pub half_edge: Vec<HalfEdge>,
}

/// All isomorphisms `a -> b` (as vertex and half-edge maps), fixing legs.
pub fn isomorphisms(a: &StableGraph, b: &StableGraph) -> Vec<Isomorphism> {
    let nv = a.num_vertices();
    if nv != b.num_vertices()
        || a.num_edges() != b.num_edges()
        || a.num_legs() != b.num_legs()
    {
        return Vec::new();
    }
    let sig = |g: &StableGraph, v: usize| {
        let selfs = g.edges().iter().filter(|&&(x, y)| x == v && y == v).count();
        (g.genera()[v], g.markings_at(v), g.valence(v), selfs)
    };
    let sa: Vec<_> = (0..nv).map(|v| sig(a, v)).collect();
    let sb: Vec<_> = (0..nv).map(|v| sig(b, v)).collect();
    let mult = |g: &StableGraph| {
        let mut m = vec![vec![0usize; nv]; nv];
        for &(x, y) in g.edges() {
            m[x][y] += 1;
            if x != y {
                m[y][x] += 1;
            }
        }
        m
    };
    let (ma, mb) = (mult(a), mult(b));

    let mut out = Vec::new();
    let mut vmap = vec![usize::MAX; nv];
    let mut used = vec![false; nv];
    extend(
        0, a, b, &sa, &sb, &ma, &mb, &mut vmap, &mut used, &mut out,
    );
    out
}

#[allow(clippy::too_many_arguments)]
fn extend<S: PartialEq>(
    v: usize,
    a: &StableGraph,
    b: &StableGraph,
    sa: &[S],
    sb: &[S],
    ma: &[Vec<usize>],
    mb: &[Vec<usize>],
    vmap: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Isomorphism>,
) {
    let nv = sa.len();
    if v == nv {
        half_edge_maps(a, b, vmap, out);
        return;
    }
    for w in 0..nv {
        if used[w] || sa[v] != sb[w] {
            continue;
        }
        if (0..v).any(|u| ma[v][u] != mb[w][vmap[u]]) {
            continue;
        }
        vmap[v] = w;
        used[w] = true;
        extend(v + 1, a, b, sa, sb, ma, mb, vmap, used, out);
        used[w] = false;
        vmap[v] = usize::MAX;
    }
}

/// Enumerates all half-edge bijections over a fixed vertex bijection.
fn half_edge_maps(a: &StableGraph, b: &StableGraph, vmap: &[usize], out: &mut Vec<Isomorphism>) {
    let n = a.num_legs();
    // group edges of `a` by (image) endpoint pair and match with edges of `b`
    let mut groups: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    let key = |x: usize, y: usize| (x.min(y), x.max(y));
    let mut keys: Vec<(usize, usize)> = Vec::new();
    for (e, &(x, y)) in a.edges().iter().enumerate() {
        let k = key(vmap[x], vmap[y]);
        match keys.iter().position(|&kk| kk == k) {
            Some(i) => groups[i].0.push(e),
            None => {
                keys.push(k);
                groups.push((vec![e], Vec::new()));
            }
        }
    }
    for (f, &(x, y)) in b.edges().iter().enumerate() {
        let k = key(x, y);
        let i = keys.iter().position(|&kk| kk == k).expect("multiplicities checked");
        groups[i].1.push(f);
    }
    let mut base: Vec<HalfEdge> = (0..a.num_half_edges()).collect();
    for i in 0..n {
        base[i] = i;
    }
    let mut partial = vec![base];
    for (ea, eb) in &groups {
        let mut next = Vec::new();
        let perms = permutations(eb.len());
        for hm in &partial {
            for p in &perms {
                // orientation choices
                let mut options: Vec<Vec<HalfEdge>> = vec![hm.clone()];
                for (i, &e) in ea.iter().enumerate() {
                    let f = eb[p[i]];
                    let (x, _) = a.edges()[e];
                    let (bx, by) = b.edges()[f];
                    let mut grown = Vec::new();
                    for opt in options {
                        if bx == by {
                            for flip in [false, true] {
                                let mut o = opt.clone();
                                let (s0, s1) = if flip { (1, 0) } else { (0, 1) };
                                o[a.side(e, 0)] = b.side(f, s0);
                                o[a.side(e, 1)] = b.side(f, s1);
                                grown.push(o);
                            }
                        } else {
                            let mut o = opt;
                            let straight = vmap[x] == bx;
                            let (s0, s1) = if straight { (0, 1) } else { (1, 0) };
                            o[a.side(e, 0)] = b.side(f, s0);
                            o[a.side(e, 1)] = b.side(f, s1);
                            grown.push(o);
                        }
                    }
                    options = grown;
                }
                next.extend(options);
            }
        }
        partial = next;
    }
    for hm in partial {
        out.push(Isomorphism {
            vertex: vmap.to_vec(),
            half_edge: hm,
        });
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isomorphism_count_equals_automorphism_order() {
        let cases = [
            StableGraph::new(vec![0], vec![0], vec![(0, 0)]).unwrap(),
            StableGraph::new(vec![0, 1], vec![0, 0], vec![(0, 1), (0, 1)]).unwrap(),
            StableGraph::new(vec![0, 1, 1], vec![0, 0], vec![(0, 1), (0, 2)]).unwrap(),
            StableGraph::new(vec![0], vec![0], vec![(0, 0), (0, 0)]).unwrap(),
        ];
        for g in &cases {
            let isos = isomorphisms(g, g);
            assert_eq!(isos.len(), g.automorphism_order(), "{g}");
            for iso in &isos {
                for h in 0..g.num_half_edges() {
                    assert_eq!(iso.vertex[g.vertex_of(h)], g.vertex_of(iso.half_edge[h]));
                    assert_eq!(
                        iso.half_edge[g.involution(h)],
                        g.involution(iso.half_edge[h])
                    );
                }
            }
        }
    }

    #[test]
    fn non_isomorphic_graphs() {
        let a = StableGraph::new(vec![0, 0], vec![0, 0, 1, 1], vec![(0, 1)]).unwrap();
        let b = StableGraph::new(vec![0, 0], vec![0, 1, 0, 1], vec![(0, 1)]).unwrap();
        assert!(isomorphisms(&a, &b).is_empty());
    }
}
