//! Hat-flavoured knot Floer homology of the dual knot.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{HomologyReport, InvariantError, Provenance, TestDomain};
use crate::cfk::KnotComplex;
use crate::dcone::{h_map, v_map, SurgeryCoefficient};
use crate::fcomplex::{ChainMap, Complex, ComplexBuilder, ConeGen, Label};
use crate::surgery::{build_cone, stabilization_check, ConeSpec, TruncationParams};

/// Classes scanned by [`hfk_hat_dual`]: `[-qg-p-q, qg+2p+q]`.
pub fn scan_window(k: &KnotComplex, coef: SurgeryCoefficient) -> (i64, i64) {
    let (p, q, g) = (coef.p(), coef.q(), k.genus());
    (-q * g - p - q, q * g + 2 * p + q)
}

pub fn predicted_window(g: i64, p: i64, q: i64) -> (i64, i64) {
    (-q * g, q * g + p - 1)
}

/// Ranks of the cone at the domain `{(0,0)}` over the scan window.
pub fn hfk_hat_dual(
    k: &KnotComplex,
    coef: SurgeryCoefficient,
) -> Result<HomologyReport, InvariantError> {
    hfk_hat_dual_with(k, coef, TruncationParams::default_for(k, coef))
}

pub fn hfk_hat_dual_with(
    k: &KnotComplex,
    coef: SurgeryCoefficient,
    trunc: TruncationParams,
) -> Result<HomologyReport, InvariantError> {
    let (lo, hi) = scan_window(k, coef);
    hfk_hat_dual_classes(k, coef, trunc, lo..=hi)
}

/// Ranks at the domain `{(0,0)}` for the listed classes only.
pub fn hfk_hat_dual_classes(
    k: &KnotComplex,
    coef: SurgeryCoefficient,
    trunc: TruncationParams,
    list: impl IntoIterator<Item = i64>,
) -> Result<HomologyReport, InvariantError> {
    let mut classes = BTreeMap::new();
    let mut stable = true;
    for s in list {
        let spec = ConeSpec {
            knot: k,
            coef,
            sbar: s,
            domain: TestDomain::hat(),
            trunc,
        };
        classes.insert(s, build_cone(&spec)?.homology_rank()?);
        stable &= stabilization_check(&spec)?;
    }
    Ok(HomologyReport {
        knot: k.name().to_string(),
        p: coef.p(),
        q: coef.q(),
        classes,
        stable,
        provenance: Provenance::RationalCone,
        bound: trunc.bound,
    })
}

/// Support of [`hfk_hat_dual`], or `None` if every class vanishes.
pub fn hfk_window(
    k: &KnotComplex,
    coef: SurgeryCoefficient,
) -> Result<Option<(i64, i64)>, InvariantError> {
    Ok(hfk_hat_dual(k, coef)?.support())
}

fn symbol_complex<G: Ord + Clone + std::fmt::Debug>(
    k: &KnotComplex,
    s: i64,
    members: impl Iterator<Item = usize>,
    key: impl Fn(usize) -> G,
    keep_drop: impl Fn((i64, i64)) -> bool,
) -> Result<Complex<G>, InvariantError> {
    let members: Vec<usize> = members.collect();
    let mut b = ComplexBuilder::new();
    for &x in &members {
        b.add_generator(key(x), Label::new(s, (0, 0)));
    }
    for &x in &members {
        for &(y, drop) in k.outgoing(x) {
            if keep_drop(drop) {
                b.add_arrow(key(x), key(y));
            }
        }
    }
    Ok(b.build()?)
}

/// Rank in class `s` from the two-piece description: the vertical complex on
/// symbols with label at most `⌊s/q⌋`, the horizontal complex on symbols with
/// label above `⌊(s-p)/q⌋`, both mapped to the vertical complex on all
/// symbols by inclusion and by the flip.
pub fn split_rank(
    k: &KnotComplex,
    coef: SurgeryCoefficient,
    s: i64,
) -> Result<usize, InvariantError> {
    let c0 = s.div_euclid(coef.q());
    let c1 = (s - coef.p()).div_euclid(coef.q());
    let vertical = |d: (i64, i64)| d.0 == 0;
    let horizontal = |d: (i64, i64)| d.1 == 0;
    let a0 = symbol_complex(
        k,
        s,
        (0..k.len()).filter(|&x| k.spinc_label(x) <= c0),
        |x| (0u8, x),
        vertical,
    )?;
    let a1 = symbol_complex(
        k,
        s,
        (0..k.len()).filter(|&x| k.spinc_label(x) > c1),
        |x| (1u8, x),
        horizontal,
    )?;
    let bhat = symbol_complex(k, s, 0..k.len(), |x| x, vertical)?;
    let mut source = ComplexBuilder::new();
    let mut f = ChainMap::new();
    for part in [&a0, &a1] {
        for (g, l) in part.generators().iter().zip(part.labels()) {
            source.add_generator(*g, *l);
            f.add(*g, if g.0 == 0 { g.1 } else { k.iota(g.1) });
        }
        for (x, y) in part.arrows() {
            source.add_arrow(*x, *y);
        }
    }
    let source = source.build()?;
    let induced = f.induced_rank(&source, &bhat)?;
    Ok(source.homology_rank()? + bhat.homology_rank()? - 2 * induced)
}

/// The same ranks as [`hfk_hat_dual`], through [`split_rank`].
pub fn hfk_hat_dual_split(
    k: &KnotComplex,
    coef: SurgeryCoefficient,
) -> Result<HomologyReport, InvariantError> {
    let (lo, hi) = scan_window(k, coef);
    let classes = (lo..=hi)
        .map(|s| Ok((s, split_rank(k, coef, s)?)))
        .collect::<Result<_, InvariantError>>()?;
    Ok(HomologyReport {
        knot: k.name().to_string(),
        p: coef.p(),
        q: coef.q(),
        classes,
        stable: true,
        provenance: Provenance::SplitRoute,
        bound: 0,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AhatSplitReport {
    pub sbar: i64,
    pub a0: usize,
    pub a1: usize,
    pub bhat: usize,
    pub expected: (usize, usize, usize),
    pub bhat_rank: usize,
    pub delta_dichotomy: bool,
    pub h_vanishes_on_a1: bool,
    pub v_vanishes_on_a0: bool,
    pub failures: Vec<String>,
}

impl AhatSplitReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the structure of the hat-level cone in class `s` against the
/// counts predicted from Alexander gradings.
pub fn ahat_split_check(
    k: &KnotComplex,
    coef: SurgeryCoefficient,
    s: i64,
) -> Result<AhatSplitReport, InvariantError> {
    let cone = build_cone(&ConeSpec::new(k, coef, s, TestDomain::hat()))?;
    let bset: std::collections::BTreeSet<_> = cone.b_gens().copied().collect();
    let mut a0 = 0;
    let mut a1 = 0;
    let mut delta_dichotomy = true;
    let mut h_vanishes_on_a1 = true;
    let mut v_vanishes_on_a0 = true;
    for g in cone.d_gens() {
        match g.i - g.j {
            0 => {
                a0 += 1;
                v_vanishes_on_a0 &= !bset.contains(&v_map(g, k, coef));
            }
            1 => {
                a1 += 1;
                h_vanishes_on_a1 &= !bset.contains(&h_map(g, k, coef));
            }
            _ => delta_dichotomy = false,
        }
    }
    let alex = |x: usize| k.alexander(x);
    let expected = (
        (0..k.len())
            .filter(|&x| alex(x) <= s.div_euclid(coef.q()))
            .count(),
        (0..k.len())
            .filter(|&x| alex(x) > (s - coef.p()).div_euclid(coef.q()))
            .count(),
        k.len(),
    );
    let bhat_complex = cone
        .complex
        .induced_subquotient(|g, _| matches!(g, ConeGen::Target(_)))?;
    let bhat_rank = bhat_complex.homology_rank()?;
    let mut failures = Vec::new();
    if !delta_dichotomy {
        failures.push("a generator with i - j outside {0, 1} survives".to_string());
    }
    if (a0, a1, bset.len()) != expected {
        failures.push(format!(
            "counts ({a0}, {a1}, {}) differ from predicted {expected:?}",
            bset.len()
        ));
    }
    if bhat_rank != 1 {
        failures.push(format!("auxiliary side has rank {bhat_rank}, not 1"));
    }
    if !h_vanishes_on_a1 {
        failures.push("h does not vanish on the i - j = 1 part".to_string());
    }
    if !v_vanishes_on_a0 {
        failures.push("v does not vanish on the i - j = 0 part".to_string());
    }
    Ok(AhatSplitReport {
        sbar: s,
        a0,
        a1,
        bhat: bset.len(),
        expected,
        bhat_rank,
        delta_dichotomy,
        h_vanishes_on_a1,
        v_vanishes_on_a0,
        failures,
    })
}
