//! Block structure and Bregman geometry.

mod gti;
mod partition;
mod prox;
mod reference;
mod weighted;

pub use gti::gti_ratio_sample;
pub use partition::BlockPartition;
pub use prox::{bregman_prox, bregman_prox_into, bregman_prox_numeric, Regularizer, RegularizerKind};
pub use reference::{Domain, ReferenceFunction};
pub use weighted::WeightedReference;
