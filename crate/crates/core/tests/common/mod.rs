//! Independent oracles shared by the integration tests. Nothing here calls
//! the elimination or enumeration code of the library.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use surgery_hfk::cfk::KnotComplex;
use surgery_hfk::dcone::{BGen, DGen, SurgeryCoefficient};
use surgery_hfk::TestDomain;

/// Rank over GF(2) by textbook row reduction on dense boolean rows.
pub fn dense_rank(mut rows: Vec<Vec<bool>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col]) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] {
                for (a, b) in row.iter_mut().zip(&pivot_row) {
                    *a ^= *b;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Homology rank of a complex given by generator keys and arrows.
pub fn dense_homology<G: Ord + Clone>(gens: &[G], arrows: &[(G, G)]) -> usize {
    let index: BTreeMap<&G, usize> = gens.iter().enumerate().map(|(i, g)| (g, i)).collect();
    let mut rows = vec![vec![false; gens.len()]; gens.len()];
    for (s, t) in arrows {
        let (s, t) = (index[s], index[t]);
        rows[s][t] ^= true;
    }
    gens.len() - 2 * dense_rank(rows)
}

pub fn label(k: &KnotComplex, x: usize) -> i64 {
    -k.symbols()[x].alexander
}

pub fn iota(k: &KnotComplex, x: usize) -> usize {
    // The flip is recovered from the serialized form, not from the accessor.
    for line in k.serialize().lines() {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks[0] == "flip" {
            let a = k.symbol_id(toks[1]).unwrap();
            let b = k.symbol_id(toks[2]).unwrap();
            if a == x {
                return b;
            }
            if b == x {
                return a;
            }
        }
    }
    panic!("symbol {x} has no flip partner");
}

/// Spin^c label of a four-index generator written out from the formula.
pub fn spinc_d(k: &KnotComplex, c: SurgeryCoefficient, g: &DGen) -> i64 {
    c.q() * label(k, g.x) + c.p() * (g.i - g.j) + c.q() * (g.j - g.k) + g.t
}

/// Brute-force enumeration of the four-index generators of one class: scan
/// every tuple in a box and keep the ones that satisfy all constraints.
pub fn brute_d_gens(
    k: &KnotComplex,
    c: SurgeryCoefficient,
    s: i64,
    domain: &TestDomain,
    bound: i64,
    radius: i64,
) -> BTreeSet<DGen> {
    let mut out = BTreeSet::new();
    for x in 0..k.len() {
        for i in -radius..=radius {
            for j in -radius..=radius {
                if (i - j).abs() > bound {
                    continue;
                }
                for kk in -radius..=radius {
                    // Δ = 1 fixes l.
                    let l = i - j + kk - 1;
                    for t in 0..c.q() {
                        let g = DGen {
                            x,
                            i,
                            j,
                            k: kk,
                            l,
                            t,
                        };
                        if spinc_d(k, c, &g) == s && domain.contains((i.max(l), j.max(kk))) {
                            out.insert(g);
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn brute_b_gens(
    k: &KnotComplex,
    c: SurgeryCoefficient,
    s: i64,
    domain: &TestDomain,
    bound: i64,
    radius: i64,
) -> BTreeSet<BGen> {
    let mut out = BTreeSet::new();
    for x in 0..k.len() {
        for i in -radius..=radius {
            for j in -radius..=radius {
                let delta = i - j;
                if delta < -bound || delta >= bound || !domain.contains((i, j)) {
                    continue;
                }
                out.insert(BGen {
                    x,
                    i,
                    j,
                    tbar: s - c.p() * delta,
                });
            }
        }
    }
    out
}

/// Every `(p, q)` pair named in the acceptance list.
pub const PAIRS: [(i64, i64); 5] = [(1, 1), (1, 2), (2, 1), (3, 2), (5, 3)];

pub fn coef(p: i64, q: i64) -> SurgeryCoefficient {
    SurgeryCoefficient::new(p, q).unwrap()
}
