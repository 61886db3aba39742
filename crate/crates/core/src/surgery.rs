//! Finite surgery cones, one relative Spin^c class and one test domain at a
//! time.
//!
//! A class `s` splits into layers indexed by `δ = i - j`. Each layer meets a
//! test domain along a diagonal, so finite domains give finite layers. The
//! cone keeps four-index layers with `δ ∈ [-B, B]` and auxiliary layers with
//! `δ ∈ [-B, B-1]`. What is dropped below is cancelled by `h` and what is
//! dropped above by `v`, and both dropped pieces are subcomplexes, so the
//! kept part is a quotient with the projected differential.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cfk::KnotComplex;
pub use crate::dcone::SurgeryCoefficient;
use crate::dcone::{
    self, b_differential, d_differential, gi_down_b, gi_down_d, gi_up, h_map, psi_rational_inverse,
    v_map, BGen, CoefficientError, DGen,
};
use crate::fcomplex::{
    mapping_cone, ChainMap, Complex, ComplexBuilder, ComplexError, ConeGen, Label,
};
use crate::invariants::domain::{TestDomain, UnboundedDomain};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurgeryError {
    #[error("unbounded enumeration: {0}")]
    Unbounded(#[from] UnboundedDomain),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Coefficient(#[from] CoefficientError),
    #[error("n = {n} is below the large-surgery threshold {required} (2g+1)")]
    ThresholdNotMet { n: i64, required: i64 },
    #[error("truncation bound must be non-negative, got {0}")]
    NegativeBound(i64),
    #[error("{0}")]
    Precondition(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationParams {
    pub bound: i64,
    pub stabilization_step: i64,
}

impl TruncationParams {
    pub fn default_for(k: &KnotComplex, coef: SurgeryCoefficient) -> Self {
        Self {
            bound: coef.q() * k.genus() + coef.p() + coef.q() + 4,
            stabilization_step: 3,
        }
    }

    pub fn with_bound(bound: i64) -> Self {
        Self {
            bound,
            stabilization_step: 3,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConeSpec<'a> {
    pub knot: &'a KnotComplex,
    pub coef: SurgeryCoefficient,
    pub sbar: i64,
    pub domain: TestDomain,
    pub trunc: TruncationParams,
}

impl<'a> ConeSpec<'a> {
    /// Spec with the default truncation bound.
    pub fn new(
        knot: &'a KnotComplex,
        coef: SurgeryCoefficient,
        sbar: i64,
        domain: TestDomain,
    ) -> Self {
        Self {
            knot,
            coef,
            sbar,
            domain,
            trunc: TruncationParams::default_for(knot, coef),
        }
    }

    pub fn with_bound(mut self, bound: i64) -> Self {
        self.trunc.bound = bound;
        self
    }
}

pub type SurgeryGen = ConeGen<DGen, BGen>;

#[derive(Clone, Debug)]
pub struct SurgeryCone {
    pub complex: Complex<SurgeryGen>,
    pub sbar: i64,
    pub bound: i64,
    pub coef: SurgeryCoefficient,
}

impl SurgeryCone {
    pub fn homology_rank(&self) -> Result<usize, ComplexError> {
        self.complex.homology_rank()
    }

    pub fn d_gens(&self) -> impl Iterator<Item = &DGen> + '_ {
        self.complex.generators().iter().filter_map(|g| match g {
            ConeGen::Source(d) => Some(d),
            ConeGen::Target(_) => None,
        })
    }

    pub fn b_gens(&self) -> impl Iterator<Item = &BGen> + '_ {
        self.complex.generators().iter().filter_map(|g| match g {
            ConeGen::Source(_) => None,
            ConeGen::Target(b) => Some(b),
        })
    }
}

fn d_offsets(
    k: &KnotComplex,
    coef: SurgeryCoefficient,
    x: usize,
    s: i64,
    delta: i64,
) -> (i64, i64) {
    let c = (s - coef.p() * delta).div_euclid(coef.q());
    let m = k.spinc_label(x) - c;
    (delta + (m - 1).max(0), m.max(0))
}

/// Four-index generators of class `s` with filtration in the domain,
/// layers `-bound ..= bound`.
pub fn d_generators(
    k: &KnotComplex,
    coef: SurgeryCoefficient,
    s: i64,
    domain: &TestDomain,
    bound: i64,
) -> Result<Vec<DGen>, UnboundedDomain> {
    let mut out = Vec::new();
    for delta in -bound..=bound {
        for x in 0..k.len() {
            let (oi, oj) = d_offsets(k, coef, x, s, delta);
            for j in domain.diagonal(oi, oj)? {
                out.push(DGen::in_layer(k, coef, x, s, delta, j));
            }
        }
    }
    Ok(out)
}

/// Auxiliary generators of class `s` in the domain, layers `-bound .. bound`.
pub fn b_generators(
    k: &KnotComplex,
    coef: SurgeryCoefficient,
    s: i64,
    domain: &TestDomain,
    bound: i64,
) -> Result<Vec<BGen>, UnboundedDomain> {
    let mut out = Vec::new();
    for delta in -bound..bound {
        for j in domain.diagonal(delta, 0)? {
            for x in 0..k.len() {
                out.push(BGen::new(x, j + delta, j, s - coef.p() * delta));
            }
        }
    }
    Ok(out)
}

fn d_side(
    k: &KnotComplex,
    gens: &[DGen],
    s: i64,
    gi: fn(&DGen) -> (i64, i64),
) -> Result<Complex<DGen>, ComplexError> {
    let mut b = ComplexBuilder::new().filtered(true);
    for g in gens {
        b.add_generator(*g, Label::new(s, gi(g)));
    }
    for g in gens {
        for t in d_differential(g, k) {
            b.add_projected_arrow(*g, t);
        }
    }
    b.build()
}

fn b_side(k: &KnotComplex, gens: &[BGen], s: i64) -> Result<Complex<BGen>, ComplexError> {
    let mut b = ComplexBuilder::new().filtered(true);
    for g in gens {
        b.add_generator(*g, Label::new(s, gi_down_b(g)));
    }
    for g in gens {
        for t in b_differential(g, k) {
            b.add_projected_arrow(*g, t);
        }
    }
    b.build()
}

fn check_bound(bound: i64) -> Result<(), SurgeryError> {
    if bound < 0 {
        Err(SurgeryError::NegativeBound(bound))
    } else {
        Ok(())
    }
}

/// Truncated cone of `h + v` in class `spec.sbar`, restricted to
/// `spec.domain`.
pub fn build_cone(spec: &ConeSpec<'_>) -> Result<SurgeryCone, SurgeryError> {
    check_bound(spec.trunc.bound)?;
    let (k, coef, s) = (spec.knot, spec.coef, spec.sbar);
    let dg = d_generators(k, coef, s, &spec.domain, spec.trunc.bound)?;
    let bg = b_generators(k, coef, s, &spec.domain, spec.trunc.bound)?;
    let source = d_side(k, &dg, s, gi_up)?;
    let target = b_side(k, &bg, s)?;
    let mut f = ChainMap::new();
    for g in &dg {
        for image in [h_map(g, k, coef), v_map(g, k, coef)] {
            if target.contains(&image) {
                f.add(*g, image);
            }
        }
    }
    let complex = mapping_cone(&source, &target, &f)?;
    let report = complex.d_squared_check();
    if let Some((x, z)) = report.violations.first() {
        return Err(ComplexError::DSquaredNonzero {
            count: report.violations.len(),
            first_source: format!("{x:?}"),
            first_target: format!("{z:?}"),
        }
        .into());
    }
    Ok(SurgeryCone {
        complex,
        sbar: s,
        bound: spec.trunc.bound,
        coef,
    })
}

/// Which formula supplies the flip term of the cone in four-index form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DownView {
    /// The rational map `g_{p/q}`.
    Intro,
    /// The integer map `v_n`; requires `q = 1`.
    IntegerVn,
}

/// The same cone written with four-index generators on both sides and the
/// map `Id + g`. Target generators carry the filtration `(i, j)`.
pub fn build_cone_down_form(
    spec: &ConeSpec<'_>,
    view: DownView,
) -> Result<Complex<ConeGen<DGen, DGen>>, SurgeryError> {
    check_bound(spec.trunc.bound)?;
    let (k, coef, s) = (spec.knot, spec.coef, spec.sbar);
    if view == DownView::IntegerVn && coef.q() != 1 {
        return Err(SurgeryError::Precondition(
            "the integer view needs an integer surgery coefficient".into(),
        ));
    }
    let dg = d_generators(k, coef, s, &spec.domain, spec.trunc.bound)?;
    let down: Vec<DGen> = b_generators(k, coef, s, &spec.domain, spec.trunc.bound)?
        .iter()
        .map(|b| psi_rational_inverse(b, k, coef))
        .collect();
    let source = d_side(k, &dg, s, gi_up)?;
    let target = d_side(k, &down, s, gi_down_d)?;
    let mut f = ChainMap::new();
    for g in &dg {
        let flipped = match view {
            DownView::Intro => dcone::g_pq_intro(g, k, coef),
            DownView::IntegerVn => dcone::v_n(g, k, coef.p()),
        };
        for image in [*g, flipped] {
            if target.contains(&image) {
                f.add(*g, image);
            }
        }
    }
    Ok(mapping_cone(&source, &target, &f)?)
}

/// Splits a relative class of integer surgery into the ambient label
/// `s ∈ [-n/2, n/2)` and the layer `δ` with `r = s + nδ`.
pub fn large_n_split(n: i64, r: i64) -> (i64, i64) {
    let lo = -(n / 2);
    let s = lo + (r - lo).rem_euclid(n);
    (s, (r - s) / n)
}

/// Direct model for large integer surgery `n` in relative class `r`:
/// generators `[x,i,j,k,l]` with `Δ = 1`, `I(x) + j - k = s`, `i - j = δ`,
/// filtered by `(max(i,l), max(j,k))` and restricted to the domain.
pub fn large_n_model(
    k: &KnotComplex,
    n: i64,
    r: i64,
    domain: &TestDomain,
) -> Result<Complex<DGen>, SurgeryError> {
    let required = 2 * k.genus() + 1;
    if n < required {
        return Err(SurgeryError::ThresholdNotMet { n, required });
    }
    let coef = SurgeryCoefficient::integer(n)?;
    let (s, delta) = large_n_split(n, r);
    let mut gens = Vec::new();
    for x in 0..k.len() {
        let (oi, oj) = d_offsets(k, coef, x, r, delta);
        for j in domain.diagonal(oi, oj)? {
            let g = DGen::in_layer(k, coef, x, r, delta, j);
            debug_assert_eq!(k.spinc_label(g.x) + g.j - g.k, s);
            gens.push(g);
        }
    }
    Ok(d_side(k, &gens, r, gi_up)?)
}

/// Whether the homology rank is unchanged when the bound grows by the
/// stabilization step.
pub fn stabilization_check(spec: &ConeSpec<'_>) -> Result<bool, SurgeryError> {
    let base = build_cone(spec)?.homology_rank()?;
    let wider = ConeSpec {
        trunc: TruncationParams {
            bound: spec.trunc.bound + spec.trunc.stabilization_step,
            ..spec.trunc
        },
        ..spec.clone()
    };
    Ok(base == build_cone(&wider)?.homology_rank()?)
}
