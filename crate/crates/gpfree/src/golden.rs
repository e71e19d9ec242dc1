//! Pinned reference data: the interval endpoint columns for k = 3..9 up to
//! 10^6 (the initial segments catalogued as OEIS A235054 through A235060)
//! and the density lower bounds they imply. Regenerating any of this must
//! reproduce these values bit for bit.

use crate::export::parse_bfile;

/// The endpoint fixtures are complete strictly below this limit. The bound
/// itself can be an endpoint (it is for k = 6) and is excluded.
pub const REFERENCE_LIMIT: u64 = 1_000_000;

const ENDPOINTS_K3: &str = include_str!("../fixtures/endpoints_k3.txt");
const ENDPOINTS_K4: &str = include_str!("../fixtures/endpoints_k4.txt");
const ENDPOINTS_K5: &str = include_str!("../fixtures/endpoints_k5.txt");
const ENDPOINTS_K6: &str = include_str!("../fixtures/endpoints_k6.txt");
const ENDPOINTS_K7: &str = include_str!("../fixtures/endpoints_k7.txt");
const ENDPOINTS_K8: &str = include_str!("../fixtures/endpoints_k8.txt");
const ENDPOINTS_K9: &str = include_str!("../fixtures/endpoints_k9.txt");

/// Reference endpoints below [`REFERENCE_LIMIT`] for 3 <= k <= 9.
pub fn reference_endpoints(k: u32) -> Option<Vec<u64>> {
    let text = match k {
        3 => ENDPOINTS_K3,
        4 => ENDPOINTS_K4,
        5 => ENDPOINTS_K5,
        6 => ENDPOINTS_K6,
        7 => ENDPOINTS_K7,
        8 => ENDPOINTS_K8,
        9 => ENDPOINTS_K9,
        _ => return None,
    };
    Some(parse_bfile(text).expect("bundled fixtures are well-formed"))
}

/// Density lower bounds from all complete pairs below [`REFERENCE_LIMIT`],
/// truncated to six digits.
pub const REFERENCE_BOUNDS: [(u32, &str); 7] = [
    (3, "0.815870"),
    (4, "0.919818"),
    (5, "0.963737"),
    (6, "0.982877"),
    (7, "0.991805"),
    (8, "0.995913"),
    (9, "0.998012"),
];
