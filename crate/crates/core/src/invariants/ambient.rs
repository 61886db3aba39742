//! Hat Floer homology of the surgered manifold.

use std::collections::BTreeMap;

use super::{HomologyReport, InvariantError, Provenance, TestDomain};
use crate::cfk::KnotComplex;
use crate::dcone::SurgeryCoefficient;
use crate::surgery::{build_cone, stabilization_check, ConeSpec, TruncationParams};

/// Ranks of the cone restricted to the line `i = 0`, one class per residue
/// in `[0, p)`. Fails if any class is not stable at the default bound.
pub fn hf_hat_ambient(
    k: &KnotComplex,
    coef: SurgeryCoefficient,
) -> Result<HomologyReport, InvariantError> {
    hf_hat_ambient_with(k, coef, TruncationParams::default_for(k, coef))
}

pub fn hf_hat_ambient_with(
    k: &KnotComplex,
    coef: SurgeryCoefficient,
    trunc: TruncationParams,
) -> Result<HomologyReport, InvariantError> {
    let mut classes = BTreeMap::new();
    for s in 0..coef.p() {
        let spec = ConeSpec {
            knot: k,
            coef,
            sbar: s,
            domain: TestDomain::LineI(0),
            trunc,
        };
        if !stabilization_check(&spec)? {
            return Err(InvariantError::Unstable {
                class: s,
                bound: trunc.bound,
                wider: trunc.bound + trunc.stabilization_step,
            });
        }
        classes.insert(s, build_cone(&spec)?.homology_rank()?);
    }
    Ok(HomologyReport {
        knot: k.name().to_string(),
        p: coef.p(),
        q: coef.q(),
        classes,
        stable: true,
        provenance: Provenance::AmbientLine,
        bound: trunc.bound,
    })
}
