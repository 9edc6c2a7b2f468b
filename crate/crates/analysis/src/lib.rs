//! Norms, the numerical gauge map and the third-iterate, resonance and continuity experiments.

pub mod error;
pub mod gauge;
pub mod growth;
pub mod lipschitz;
pub mod norms;
pub mod packet;
pub mod picard;
pub mod resonance;
pub mod spectrum;

pub use error::AnalysisError;
pub use gauge::{cumulative_mass, gauge_apply_numeric};
pub use growth::{growth_exponent_fit, hierarchy_cubic, linear_fit, predicted_exponent, GrowthFit, GrowthPoint, LinearFit};
pub use lipschitz::{gauge_lipschitz_probe, LipschitzProbe};
pub use norms::{hat_norm, hat_norm_spectrum, modulation_embedding_constant, modulation_norm, modulation_norm_spectrum, NormSpec};
pub use packet::{packet_datum, PacketSpec};
pub use picard::{picard3, time_kernel, CubicSymbol};
pub use resonance::{resonance_ratio_stats, resonance_sample, ResonanceSample, ResonanceStats};
pub use spectrum::Spectrum;
