//! Exhaustive lists of small connected graphs, one per isomorphism class.
//!
//! A graph on `n` vertices is encoded by its edge multiplicities over the
//! vertex pairs `(i, j)`, `i < j`, in lexicographic order. The canonical code
//! is the lexicographically smallest such vector over all relabelings that
//! list vertices by non-increasing degree; every isomorphism respects degrees,
//! so two graphs are isomorphic exactly when their canonical codes agree.
//!
//! Output order is by vertex count, then edge count, then canonical code.
//! The returned graph is the canonical representative, with its edges listed
//! in pair order (parallel copies adjacent).

use std::collections::BTreeSet;

use crate::graph::MultiGraph;

fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j));
        }
    }
    out
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

fn connected(n: usize, pairs: &[(usize, usize)], mult: &[u8]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut comps = n;
    for (k, &(a, b)) in pairs.iter().enumerate() {
        if mult[k] > 0 {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
                comps -= 1;
            }
        }
    }
    comps == 1
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for k in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(k);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Canonical code of the multiplicity vector `mult` on `n` vertices.
pub fn canonical_code(n: usize, mult: &[u8]) -> Vec<u8> {
    let ps = pairs(n);
    let mut deg = vec![0usize; n];
    for (k, &(a, b)) in ps.iter().enumerate() {
        deg[a] += mult[k] as usize;
        deg[b] += mult[k] as usize;
    }
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| std::cmp::Reverse(deg[v]));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &v in &by_degree {
        match groups.last_mut() {
            Some(g) if deg[g[0]] == deg[v] => g.push(v),
            _ => groups.push(vec![v]),
        }
    }
    let group_perms: Vec<Vec<Vec<usize>>> = groups.iter().map(|g| permutations(g)).collect();
    let mut choice = vec![0usize; groups.len()];
    let mut best: Option<Vec<u8>> = None;
    let mut order = Vec::with_capacity(n);
    loop {
        order.clear();
        for (g, &c) in choice.iter().enumerate() {
            order.extend_from_slice(&group_perms[g][c]);
        }
        // order[new] = old
        let code: Vec<u8> = ps.iter().map(|&(a, b)| mult[pair_index(n, order[a], order[b])]).collect();
        if best.as_ref().is_none_or(|b| code < *b) {
            best = Some(code);
        }
        let mut g = 0;
        loop {
            if g == choice.len() {
                return best.unwrap_or_default();
            }
            choice[g] += 1;
            if choice[g] < group_perms[g].len() {
                break;
            }
            choice[g] = 0;
            g += 1;
        }
    }
}

fn graph_from_code(n: usize, code: &[u8]) -> MultiGraph {
    let mut edges = Vec::new();
    for (k, &(a, b)) in pairs(n).iter().enumerate() {
        for _ in 0..code[k] {
            edges.push((a, b));
        }
    }
    MultiGraph::new(n, &edges).expect("pair codes describe valid graphs")
}

fn classes(n: usize, max_mult: u8, max_edges: usize) -> Vec<MultiGraph> {
    let ps = pairs(n);
    let mut found: BTreeSet<(usize, Vec<u8>)> = BTreeSet::new();
    let mut mult = vec![0u8; ps.len()];
    fn rec(
        k: usize,
        left: usize,
        max_mult: u8,
        n: usize,
        ps: &[(usize, usize)],
        mult: &mut Vec<u8>,
        found: &mut BTreeSet<(usize, Vec<u8>)>,
    ) {
        if k == mult.len() {
            if connected(n, ps, mult) {
                let m = mult.iter().map(|&c| c as usize).sum();
                found.insert((m, canonical_code(n, mult)));
            }
            return;
        }
        for c in 0..=(max_mult as usize).min(left) {
            mult[k] = c as u8;
            rec(k + 1, left - c, max_mult, n, ps, mult, found);
        }
        mult[k] = 0;
    }
    rec(0, max_edges, max_mult, n, &ps, &mut mult, &mut found);
    found.into_iter().map(|(_, code)| graph_from_code(n, &code)).collect()
}

/// Connected simple graphs on exactly `n` vertices up to isomorphism.
pub fn connected_simple_graphs(n: usize) -> Vec<MultiGraph> {
    if n == 0 {
        return Vec::new();
    }
    classes(n, 1, n * (n - 1) / 2)
}

/// All connected simple graphs on `1..=max_n` vertices with ids `n<n>-<k>`.
pub fn connected_simple_suite(max_n: usize) -> Vec<(String, MultiGraph)> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for (k, g) in connected_simple_graphs(n).into_iter().enumerate() {
            out.push((format!("n{n}-{k}"), g));
        }
    }
    out
}

/// Connected loopless multigraphs with `1..=max_n` vertices and at most
/// `max_edges` edges, up to isomorphism.
pub fn connected_multigraphs(max_n: usize, max_edges: usize) -> Vec<MultiGraph> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        let cap = max_edges.min(u8::MAX as usize) as u8;
        out.extend(classes(n, cap, max_edges));
    }
    out
}
