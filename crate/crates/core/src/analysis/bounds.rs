use serde::Serialize;

use crate::model::{InfectionResponse, InitialData, ModelParams};
use crate::{Error, Result};

/// A-priori state bounds `(C1, C2)` and the front-speed bound `C3 = 2 M C1 mu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundCertificate {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub m: f64,
}

impl BoundCertificate {
    /// Both strict inequalities `-a11 C1 + a12 C2 < 0` and `-a22 C2 + G(C1) < 0`.
    pub fn is_invariant(&self, p: &ModelParams, g: &InfectionResponse) -> bool {
        is_invariant_pair(self.c1, self.c2, p, g)
    }
}

pub fn is_invariant_pair(c1: f64, c2: f64, p: &ModelParams, g: &InfectionResponse) -> bool {
    -p.a11 * c1 + p.a12 * c2 < 0.0 && -p.a22 * c2 + g.eval(c1) < 0.0
}

const MAX_DOUBLINGS: usize = 60;

/// Searches outward from `(sup u0, sup v0)` by doubling `C1` for a pair with
/// `G(C1)/a22 < C2 < a11 C1 / a12` and `C2 >= sup v0`.
pub fn bound_certificate(
    p: &ModelParams,
    g: &InfectionResponse,
    init: &InitialData,
) -> Result<BoundCertificate> {
    let su = init.sup_u0();
    let sv = init.sup_v0();
    let mut c1 = su.max(1e-6);
    for _ in 0..=MAX_DOUBLINGS {
        let lower = g.eval(c1) / p.a22;
        let upper = p.a11 * c1 / p.a12;
        if lower < upper && sv < upper {
            let c2 = sv.max(0.5 * (lower + upper));
            if is_invariant_pair(c1, c2, p, g) {
                let m = [
                    1.0 / p.h0,
                    (p.a12 * c2 / (2.0 * p.d * c1)).sqrt(),
                    4.0 * init.c1_norm_u0() / (3.0 * c1),
                ]
                .into_iter()
                .fold(0.0, f64::max);
                return Ok(BoundCertificate {
                    c1,
                    c2,
                    c3: 2.0 * m * c1 * p.mu,
                    m,
                });
            }
        }
        c1 *= 2.0;
    }
    Err(Error::CertificateFailure(format!(
        "no (C1, C2) within {MAX_DOUBLINGS} doublings from C1 = {}; G(z)/z does not fall below a11 a22 / a12",
        su.max(1e-6)
    )))
}
