use super::ReferenceFunction;
use crate::{Error, Result};

/// `D_h(u + theta (v - w), u) / D_h(v, w)`, the quantity bounded by
/// `|theta|^gamma` under generalized translation invariance.
pub fn gti_ratio_sample(h: ReferenceFunction, u: &[f64], v: &[f64], w: &[f64], theta: f64) -> Result<f64> {
    if v.len() != u.len() || w.len() != u.len() {
        return Err(Error::Dimension {
            expected: u.len(),
            got: if v.len() != u.len() { v.len() } else { w.len() },
        });
    }
    if !theta.is_finite() {
        return Err(Error::invalid("theta must be finite"));
    }
    let denominator = h.distance(v, w)?;
    if denominator <= 0.0 {
        return Err(Error::invalid("v and w must differ"));
    }
    h.check_domain(u)?;
    let translated: Vec<f64> = u
        .iter()
        .zip(v.iter().zip(w))
        .map(|(&ui, (&vi, &wi))| ui + theta * (vi - wi))
        .collect();
    h.check_domain(&translated)?;
    Ok(h.distance_unchecked(&translated, u) / denominator)
}
