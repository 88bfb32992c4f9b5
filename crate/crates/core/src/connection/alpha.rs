use super::ConnectionError;
use crate::clifford::{so_to_spin, CliffordElement, Signature};
use crate::homspace::OrthoFrame;

/// Values of `α` on the combined basis `(L_1 … L_m, a_1 … a_n)`, split into
/// the Levi-Civita part and the `Ω` part.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaMap {
    sig: Signature,
    dim_k: usize,
    g_part: Vec<CliffordElement>,
    omega_part: Vec<CliffordElement>,
}

impl AlphaMap {
    /// Target signature: `(p,q)`, or `(p+1,q+1)` after the twistor extension.
    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn dim_k(&self) -> usize {
        self.dim_k
    }

    pub fn len(&self) -> usize {
        self.g_part.len()
    }

    pub fn is_empty(&self) -> bool {
        self.g_part.is_empty()
    }

    pub fn g_part(&self, x: usize) -> &CliffordElement {
        &self.g_part[x]
    }

    pub fn omega_part(&self, x: usize) -> &CliffordElement {
        &self.omega_part[x]
    }

    pub fn value(&self, x: usize) -> CliffordElement {
        &self.g_part[x] + &self.omega_part[x]
    }

    /// `α(Σ c_x x)`.
    pub fn value_of(&self, coeffs: &[f64]) -> CliffordElement {
        let mut out = CliffordElement::zero(self.sig);
        for (x, &c) in coeffs.iter().enumerate() {
            if c != 0.0 {
                out = &out + &self.value(x).scale(c);
            }
        }
        out
    }

    pub(crate) fn from_parts(
        sig: Signature,
        dim_k: usize,
        g_part: Vec<CliffordElement>,
        omega_part: Vec<CliffordElement>,
    ) -> Self {
        debug_assert_eq!(g_part.len(), omega_part.len());
        Self { sig, dim_k, g_part, omega_part }
    }
}

/// `α_g(x) = so_to_spin(α̃_g(x))` on every basis element; `Ω` part zero.
pub fn build_alpha_g(frame: &OrthoFrame) -> Result<AlphaMap, ConnectionError> {
    let sig = frame.signature();
    let g_part = (0..frame.dim())
        .map(|x| so_to_spin(&frame.nomizu(x), sig))
        .collect::<Result<Vec<_>, _>>()?;
    let omega_part = vec![CliffordElement::zero(sig); frame.dim()];
    Ok(AlphaMap::from_parts(sig, frame.dim_k(), g_part, omega_part))
}

/// Adds `Ω(a_i)` on `𝔫`; `α(L) = α_g(L)` on `𝔨`.
pub fn assemble_alpha(alpha_g: &AlphaMap, omega: &[CliffordElement]) -> Result<AlphaMap, ConnectionError> {
    let m = alpha_g.dim_k();
    let n = alpha_g.len() - m;
    if omega.len() != n {
        return Err(ConnectionError::FrameIndex { index: omega.len(), dim: n });
    }
    let mut omega_part = vec![CliffordElement::zero(alpha_g.sig); m];
    for w in omega {
        if w.signature() != alpha_g.sig {
            return Err(crate::clifford::CliffordError::SignatureMismatch {
                left: w.signature(),
                right: alpha_g.sig,
            }
            .into());
        }
        omega_part.push(w.clone());
    }
    Ok(AlphaMap::from_parts(alpha_g.sig, m, alpha_g.g_part.clone(), omega_part))
}
