//! The plus-flavoured integer surgery cone of `ζ_s = h' + v'`, truncated.
//!
//! `A_t = {[x,i,k] : I(x) + i - k = t, 0 <= max(i,k) <= N}` and
//! `B_u = {[x,i] : 0 <= i <= N}`, with `h'[x,i,k] = [x,i] ∈ B_t` and
//! `v'[x,i,k] = [ιx,k] ∈ B_{t-n}`. Only finitely many `t ≡ s (mod n)` are
//! kept. For `t >= g` the map `h'` is an isomorphism and for `t <= -g` so is
//! `v'`, so the dropped summands form an acyclic quotient.

use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use super::InvariantError;
use crate::cfk::KnotComplex;
use crate::fcomplex::{mapping_cone, ChainMap, ComplexBuilder, Label};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AGen {
    pub t: i64,
    pub x: usize,
    pub i: i64,
    pub k: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BarGen {
    pub u: i64,
    pub x: usize,
    pub i: i64,
}

fn check(n: i64, s: i64, big_n: i64) -> Result<(), InvariantError> {
    if n < 1 {
        return Err(InvariantError::Precondition(format!(
            "n must be positive, got {n}"
        )));
    }
    if !(-n <= 2 * s && 2 * s < n) {
        return Err(InvariantError::Precondition(format!(
            "class {s} is outside [-n/2, n/2) for n = {n}"
        )));
    }
    if big_n < 1 {
        return Err(InvariantError::Precondition(format!(
            "truncation level must be at least 1, got {big_n}"
        )));
    }
    Ok(())
}

/// Rank of the truncated cone of `ζ_s` at level `big_n`.
pub fn zeta_cone_plus(
    k: &KnotComplex,
    n: i64,
    s: i64,
    big_n: i64,
) -> Result<usize, InvariantError> {
    check(n, s, big_n)?;
    let g = k.genus();
    // t ≡ s (mod n) with t0 <= -g - n and t1 >= g + n.
    let t0 = s - n * ((g + n + s).div_euclid(n) + 1);
    let t1 = s + n * ((g + n - s).div_euclid(n) + 1);
    let label = Label::new(s, (0, 0));

    let mut a = ComplexBuilder::new();
    let mut agens = Vec::new();
    let mut t = t0;
    while t <= t1 {
        for x in 0..k.len() {
            let shift = k.spinc_label(x) - t;
            for i in (-shift).min(0)..=big_n {
                let kk = i + shift;
                if (0..=big_n).contains(&i.max(kk)) {
                    let gen = AGen { t, x, i, k: kk };
                    a.add_generator(gen, label);
                    agens.push(gen);
                }
            }
        }
        t += n;
    }
    for gen in &agens {
        for &(y, (da, db)) in k.outgoing(gen.x) {
            a.add_projected_arrow(
                *gen,
                AGen {
                    t: gen.t,
                    x: y,
                    i: gen.i - da,
                    k: gen.k - db,
                },
            );
        }
    }
    let a = a.build()?;

    let mut b = ComplexBuilder::new();
    let mut bgens = Vec::new();
    let mut u = t0 - n;
    while u <= t1 {
        for x in 0..k.len() {
            for i in 0..=big_n {
                let gen = BarGen { u, x, i };
                b.add_generator(gen, label);
                bgens.push(gen);
            }
        }
        u += n;
    }
    for gen in &bgens {
        for &(y, (da, _)) in k.outgoing(gen.x) {
            b.add_projected_arrow(
                *gen,
                BarGen {
                    u: gen.u,
                    x: y,
                    i: gen.i - da,
                },
            );
        }
    }
    let b = b.build()?;

    let mut f = ChainMap::new();
    for gen in &agens {
        let images = [
            BarGen {
                u: gen.t,
                x: gen.x,
                i: gen.i,
            },
            BarGen {
                u: gen.t - n,
                x: k.iota(gen.x),
                i: gen.k,
            },
        ];
        for img in images {
            if b.contains(&img) {
                f.add(*gen, img);
            }
        }
    }
    Ok(mapping_cone(&a, &b, &f)?.homology_rank()?)
}

/// `(N, rank)` for each requested truncation level.
pub fn zeta_profile(
    k: &KnotComplex,
    n: i64,
    s: i64,
    levels: impl IntoIterator<Item = i64>,
) -> Result<Vec<(i64, usize)>, InvariantError> {
    levels
        .into_iter()
        .map(|big_n| Ok((big_n, zeta_cone_plus(k, n, s, big_n)?)))
        .collect()
}
