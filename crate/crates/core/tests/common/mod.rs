//! Definitional oracles shared by the integration tests. None of these use
//! burning or reduced divisors.

#![allow(dead_code)]

use divgon::bramble::Bramble;
use divgon::graph::{MultiGraph, Vertex};
use divgon::Divisor;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// No nonempty `U` avoiding `v` fires legally (all subsets).
pub fn reduced_by_definition(g: &MultiGraph, d: &[i64], v: Vertex) -> bool {
    let n = g.vertex_count();
    let others: Vec<Vertex> = (0..n).filter(|&u| u != v).collect();
    for mask in 1u64..(1 << others.len()) {
        let mut inside = vec![false; n];
        for (i, &u) in others.iter().enumerate() {
            if mask >> i & 1 == 1 {
                inside[u] = true;
            }
        }
        let legal = (0..n)
            .filter(|&u| inside[u])
            .all(|u| d[u] >= g.incident(u).iter().filter(|&&(w, _)| !inside[w]).count() as i64);
        if legal {
            return false;
        }
    }
    true
}

/// A rational solution of `Q x = b` with `x(0) = 0`, by elimination on the
/// reduced Laplacian; `None` when `b` does not sum to zero.
pub fn solve_laplacian(g: &MultiGraph, b: &[i64]) -> Option<Vec<BigRational>> {
    let n = g.vertex_count();
    if b.iter().sum::<i64>() != 0 {
        return None;
    }
    if n == 1 {
        return Some(vec![BigRational::zero()]);
    }
    let q = g.laplacian_matrix();
    let k = n - 1;
    let mut a: Vec<Vec<BigRational>> =
        (1..n).map(|r| (1..n).map(|c| BigRational::from_integer(BigInt::from(q[r][c]))).collect()).collect();
    let mut rhs: Vec<BigRational> = (1..n).map(|r| BigRational::from_integer(BigInt::from(b[r]))).collect();
    for col in 0..k {
        let p = (col..k).find(|&r| !a[r][col].is_zero()).expect("connected graph");
        a.swap(col, p);
        rhs.swap(col, p);
        let inv = BigRational::one() / a[col][col].clone();
        for c in col..k {
            a[col][c] = &a[col][c] * &inv;
        }
        rhs[col] = &rhs[col] * &inv;
        for r in 0..k {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..k {
                    let t = &f * &a[col][c];
                    a[r][c] -= t;
                }
                let t = &f * &rhs[col];
                rhs[r] -= t;
            }
        }
    }
    let mut x = vec![BigRational::zero()];
    x.extend(rhs);
    Some(x)
}

/// `d ~ e` iff `Q x = d - e` has an integral solution.
pub fn equivalent_by_algebra(g: &MultiGraph, d: &[i64], e: &[i64]) -> bool {
    let b: Vec<i64> = d.iter().zip(e).map(|(a, b)| a - b).collect();
    match solve_laplacian(g, &b) {
        Some(x) => x.iter().all(|v| v.is_integer()),
        None => false,
    }
}

/// All effective chip vectors of degree `k` on `n` vertices.
pub fn effective_divisors(n: usize, k: i64) -> Vec<Vec<i64>> {
    fn rec(i: usize, left: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for c in (0..=left).rev() {
            cur[i] = c;
            rec(i + 1, left - c, cur, out);
        }
    }
    let mut out = Vec::new();
    if n == 0 || k < 0 {
        return out;
    }
    rec(0, k, &mut vec![0; n], &mut out);
    out
}

/// Effective divisors equivalent to `d`.
pub fn effective_class(g: &MultiGraph, d: &[i64]) -> Vec<Vec<i64>> {
    let k: i64 = d.iter().sum();
    effective_divisors(g.vertex_count(), k).into_iter().filter(|e| equivalent_by_algebra(g, d, e)).collect()
}

/// Positive rank straight from the definition: every vertex carries a chip
/// in some effective equivalent divisor.
pub fn positive_rank_by_definition(g: &MultiGraph, d: &[i64]) -> bool {
    let class = effective_class(g, d);
    (0..g.vertex_count()).all(|v| class.iter().any(|e| e[v] >= 1))
}

/// Gonality by scanning every effective divisor of each degree.
pub fn gonality_by_definition(g: &MultiGraph) -> i64 {
    (1..).find(|&k| effective_divisors(g.vertex_count(), k).iter().any(|d| positive_rank_by_definition(g, d))).unwrap()
}

/// Treewidth as the minimum width over all elimination orders.
pub fn treewidth_by_orders(g: &MultiGraph) -> usize {
    let n = g.vertex_count();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = usize::MAX;
    permute(&mut perm, 0, &mut |p| {
        best = best.min(divgon::treewidth::elimination_width(g, p).unwrap());
    });
    best
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

pub fn div(v: &[i64]) -> Divisor {
    Divisor::new(v.to_vec())
}

/// A connected vertex set grown from a random root.
pub fn random_connected_set(g: &MultiGraph, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let n = g.vertex_count();
    let size = rng.gen_range(1..=n.div_ceil(2));
    let mut set = vec![rng.gen_range(0..n)];
    while set.len() < size {
        let frontier: Vec<usize> = set
            .iter()
            .flat_map(|&v| g.incident(v).iter().map(|&(w, _)| w))
            .filter(|w| !set.contains(w))
            .collect();
        if frontier.is_empty() {
            break;
        }
        set.push(frontier[rng.gen_range(0..frontier.len())]);
    }
    set.sort_unstable();
    set
}

/// Greedily keeps random connected sets that touch every set kept so far.
pub fn random_bramble(g: &MultiGraph, rng: &mut ChaCha8Rng) -> Bramble {
    let mut members: Vec<Vec<usize>> = Vec::new();
    for _ in 0..12 {
        let s = random_connected_set(g, rng);
        let touches = |t: &Vec<usize>| {
            let mut u = s.clone();
            u.extend(t);
            u.sort_unstable();
            u.dedup();
            g.induces_connected(&u)
        };
        if members.iter().all(touches) {
            members.push(s);
        }
    }
    Bramble::new(members)
}
