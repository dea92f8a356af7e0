//! Independent oracles shared by the integration suites. Everything here is
//! deliberately naive: recompute from scratch, enumerate exhaustively, trust
//! nothing from the implementation under test beyond the public data types.
#![allow(dead_code)]

use rbcsp::hypergraph::{Hypergraph, VariableOrdering};
use rbcsp::model::{decode_tuple, is_compatible, Assignment, Instance};

/// Minimum ordering width over all `n!` permutations.
pub fn brute_force_width(hg: &Hypergraph) -> usize {
    let n = hg.n_nodes();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = usize::MAX;
    for_each_permutation(&mut perm, 0, &mut |p| {
        let mut rank = vec![0; n];
        for (i, &u) in p.iter().enumerate() {
            rank[u] = i;
        }
        let mut widths = vec![0usize; n];
        for e in hg.edges() {
            let last = e.iter().map(|&v| rank[v]).max().unwrap();
            widths[p[last]] += 1;
        }
        best = best.min(widths.iter().copied().max().unwrap_or(0));
    });
    best
}

pub fn for_each_permutation(items: &mut Vec<usize>, at: usize, f: &mut impl FnMut(&[usize])) {
    if at == items.len() {
        f(items);
        return;
    }
    for i in at..items.len() {
        items.swap(at, i);
        for_each_permutation(items, at + 1, f);
        items.swap(at, i);
    }
}

/// Fixed-point deletion: recompute all degrees from scratch, delete one
/// under-degree node, repeat until stable. Returns the surviving nodes.
pub fn fixed_point_core(hg: &Hypergraph, min_degree: usize) -> Vec<usize> {
    let mut alive = vec![true; hg.n_nodes()];
    loop {
        let mut deg = vec![0usize; hg.n_nodes()];
        for e in hg.edges() {
            if e.iter().all(|&v| alive[v]) {
                for &v in e {
                    deg[v] += 1;
                }
            }
        }
        match (0..hg.n_nodes()).find(|&u| alive[u] && deg[u] < min_degree) {
            Some(u) => alive[u] = false,
            None => break,
        }
    }
    (0..hg.n_nodes()).filter(|&u| alive[u]).collect()
}

fn prefix_compatible(inst: &Instance, a: &Assignment) -> bool {
    inst.constraints.iter().all(|c| {
        if c.scope.iter().all(|&w| a.get(w).is_some()) {
            is_compatible(c, a, inst.d).unwrap()
        } else {
            true
        }
    })
}

/// Definition-level backtrack-freeness: enumerate every assignment of every
/// prefix, keep the compatible ones, and demand an available extension.
pub fn definition_backtrack_free(inst: &Instance, order: &VariableOrdering) -> bool {
    let n = inst.n();
    let d = inst.d;
    for level in 0..n {
        let next = order.perm()[level];
        let total = (d as u64).pow(level as u32);
        for idx in 0..total {
            let vals = decode_tuple(idx, d, level);
            let mut a = Assignment::new(n);
            for (i, &var) in order.perm()[..level].iter().enumerate() {
                a.set(var, vals[i]);
            }
            if !prefix_compatible(inst, &a) {
                continue;
            }
            let extendable = (0..d).any(|v| {
                a.set(next, v);
                let ok = prefix_compatible(inst, &a);
                a.unset(next);
                ok
            });
            if !extendable {
                return false;
            }
        }
    }
    true
}
