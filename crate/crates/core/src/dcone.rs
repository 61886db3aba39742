//! Index algebra of the surgery cone: four-index generators `[x,i,j,k,l]⊗ζ^t`,
//! the auxiliary generators `[x,i,j]⊗T^e`, their differentials, filtrations,
//! Spin^c labels and the maps between them.
//!
//! Every formula here reads the Spin^c label of a symbol through
//! [`KnotComplex::spinc_label`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cfk::{KnotComplex, SymbolId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoefficientError {
    #[error("surgery coefficient {p}/{q} must have p >= 1 and q >= 1")]
    NotPositive { p: i64, q: i64 },
    #[error("surgery coefficient {p}/{q} is not in lowest terms")]
    NotCoprime { p: i64, q: i64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurgeryCoefficient {
    p: i64,
    q: i64,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl SurgeryCoefficient {
    pub fn new(p: i64, q: i64) -> Result<Self, CoefficientError> {
        if p < 1 || q < 1 {
            return Err(CoefficientError::NotPositive { p, q });
        }
        if gcd(p, q) != 1 {
            return Err(CoefficientError::NotCoprime { p, q });
        }
        Ok(Self { p, q })
    }

    pub fn integer(n: i64) -> Result<Self, CoefficientError> {
        Self::new(n, 1)
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }
}

/// `[x,i,j,k,l]⊗ζ^t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DGen {
    pub x: SymbolId,
    pub i: i64,
    pub j: i64,
    pub k: i64,
    pub l: i64,
    pub t: i64,
}

/// `[x,i,j]⊗T^tbar`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BGen {
    pub x: SymbolId,
    pub i: i64,
    pub j: i64,
    pub tbar: i64,
}

impl DGen {
    pub fn new(x: SymbolId, i: i64, j: i64, k: i64, l: i64, t: i64) -> Self {
        Self { x, i, j, k, l, t }
    }

    pub fn delta(&self) -> i64 {
        self.i - self.j + self.k - self.l
    }

    /// Generator with `Δ = 1` in class `s` and layer `i - j = delta`, sitting
    /// at second index `j`.
    pub fn in_layer(
        k: &KnotComplex,
        coef: SurgeryCoefficient,
        x: SymbolId,
        s: i64,
        delta: i64,
        j: i64,
    ) -> Self {
        let sigma = s - coef.p * delta;
        let t = sigma.rem_euclid(coef.q);
        let c = sigma.div_euclid(coef.q);
        let kk = j + k.spinc_label(x) - c;
        DGen::new(x, j + delta, j, kk, kk - 1 + delta, t)
    }
}

impl BGen {
    pub fn new(x: SymbolId, i: i64, j: i64, tbar: i64) -> Self {
        Self { x, i, j, tbar }
    }
}

pub fn d_differential(g: &DGen, k: &KnotComplex) -> Vec<DGen> {
    k.outgoing(g.x)
        .iter()
        .map(|&(y, (a, b))| DGen::new(y, g.i - a, g.j - a, g.k - b, g.l - b, g.t))
        .collect()
}

/// Each arrow lowers both indices by its first drop; the T-power is fixed.
pub fn b_differential(g: &BGen, k: &KnotComplex) -> Vec<BGen> {
    k.outgoing(g.x)
        .iter()
        .map(|&(y, (a, _))| BGen::new(y, g.i - a, g.j - a, g.tbar))
        .collect()
}

pub fn gi_up(g: &DGen) -> (i64, i64) {
    (g.i.max(g.l), g.j.max(g.k))
}

pub fn gi_down_b(g: &BGen) -> (i64, i64) {
    (g.i, g.j)
}

/// Filtration of a four-index generator on the target side.
pub fn gi_down_d(g: &DGen) -> (i64, i64) {
    (g.i, g.j)
}

pub fn spinc_d(g: &DGen, k: &KnotComplex, coef: SurgeryCoefficient) -> i64 {
    coef.q * k.spinc_label(g.x) + coef.p * (g.i - g.j) + coef.q * (g.j - g.k) + g.t
}

pub fn spinc_b(g: &BGen, coef: SurgeryCoefficient) -> i64 {
    g.tbar + coef.p * (g.i - g.j)
}

/// Class label of the integer-surgery view, `I(x) + (j - k) + n(i - j)`.
pub fn spinc_integer(g: &DGen, k: &KnotComplex, n: i64) -> i64 {
    k.spinc_label(g.x) + (g.j - g.k) + n * (g.i - g.j)
}

fn t_power(g: &DGen, k: &KnotComplex, coef: SurgeryCoefficient) -> i64 {
    coef.q * (k.spinc_label(g.x) + g.j - g.k) + g.t
}

pub fn h_map(g: &DGen, k: &KnotComplex, coef: SurgeryCoefficient) -> BGen {
    BGen::new(g.x, g.i, g.j, t_power(g, k, coef))
}

pub fn v_map(g: &DGen, k: &KnotComplex, coef: SurgeryCoefficient) -> BGen {
    BGen::new(k.iota(g.x), g.l, g.k, t_power(g, k, coef) + coef.p)
}

/// `[x,i,j,k,l] ↦ [x,i,j]⊗T^{-I(x)+k-j}`; ignores `t`.
pub fn psi(g: &DGen, k: &KnotComplex) -> BGen {
    BGen::new(g.x, g.i, g.j, -k.spinc_label(g.x) + g.k - g.j)
}

/// Inverse of [`psi`] on `Δ = 1`.
pub fn psi_inverse(b: &BGen, k: &KnotComplex) -> DGen {
    let kk = k.spinc_label(b.x) + b.j + b.tbar;
    DGen::new(b.x, b.i, b.j, kk, kk - 1 + b.i - b.j, 0)
}

/// `[x,i,j,k,l]⊗ζ^t ↦ [x,i,j]⊗T^{q(I(x)+j-k)+t}`, the map `h` read as an
/// identification of `Δ = 1` generators with auxiliary ones.
pub fn psi_rational(g: &DGen, k: &KnotComplex, coef: SurgeryCoefficient) -> BGen {
    h_map(g, k, coef)
}

pub fn psi_rational_inverse(b: &BGen, k: &KnotComplex, coef: SurgeryCoefficient) -> DGen {
    let t = b.tbar.rem_euclid(coef.q);
    let kk = k.spinc_label(b.x) + b.j - b.tbar.div_euclid(coef.q);
    DGen::new(b.x, b.i, b.j, kk, kk - 1 + b.i - b.j, t)
}

pub fn tau_b(b: &BGen, k: &KnotComplex) -> BGen {
    BGen::new(k.iota(b.x), b.i, b.j, b.tbar)
}

/// Flip on four-index generators, conjugated from [`tau_b`] through [`psi`].
pub fn tau_d(g: &DGen, k: &KnotComplex) -> DGen {
    let shift = 2 * k.spinc_label(g.x);
    DGen::new(k.iota(g.x), g.i, g.j, g.k - shift, g.l - shift, g.t)
}

/// `τ[x,l,k,2k-j-c,2l-i-c]⊗ζ^{(t+p) mod q}` with `c = ⌊(t+p)/q⌋`.
pub fn g_pq_intro(g: &DGen, k: &KnotComplex, coef: SurgeryCoefficient) -> DGen {
    let c = (g.t + coef.p).div_euclid(coef.q);
    let t = (g.t + coef.p).rem_euclid(coef.q);
    let swapped = DGen::new(g.x, g.l, g.k, 2 * g.k - g.j - c, 2 * g.l - g.i - c, t);
    tau_d(&swapped, k)
}

/// `τ[x,l,k,2k-j-n,2l-i-n]`.
pub fn v_n(g: &DGen, k: &KnotComplex, n: i64) -> DGen {
    let swapped = DGen::new(g.x, g.l, g.k, 2 * g.k - g.j - n, 2 * g.l - g.i - n, g.t);
    tau_d(&swapped, k)
}
