//! Weighted wall metrics: exact distances, the median-metric check,
//! subdivision, 1-thickening, layered exhaustions and the Floyd weighting.

mod exhaust;
mod weighted;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use exhaust::{
    build_exhaustion, cauchy_gap_check, cube_neighbourhood, floyd, frontier, retract_layer, FloydExhaustion,
    GapReport, GapWitness, Growth, LayeredExhaustion, Retraction, Thickening,
};
pub use weighted::{
    verify_median_metric, verify_median_metric_matrix, MetricReport, MetricViolation, WeightedWallspace,
    MAX_METRIC_SCAN_VERTICES, MAX_REPORTED_VIOLATIONS,
};

/// Always `p/q`, including integers (`1/1`).
pub fn format_ratio(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_ratio(s: &str) -> Option<BigRational> {
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.parse::<BigInt>().ok()?, q.parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::from(1)),
    };
    if q == BigInt::from(0) {
        return None;
    }
    Some(BigRational::new(p, q))
}
