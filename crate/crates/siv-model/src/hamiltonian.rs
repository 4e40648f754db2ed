use num_complex::Complex64;

use crate::operators::*;
use crate::{MagneticField, ModelError, SivParameters};

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Ground-manifold Hamiltonian, entries in Hz:
///
/// H = -lambda_SO Lz Sz + alpha (|+><-| + |-><+|) + beta (i|+><-| - i|-><+|)
///     + f gamma_L Bz Lz + gamma_S B.S + A_par Sz Iz + A_perp (Sx Ix + Sy Iy)
///     + gamma_n B.I
pub fn build_ground_hamiltonian(
    params: &SivParameters,
    field: &MagneticField,
) -> Result<OperatorMatrix, ModelError> {
    params.validate()?;
    field.validate()?;
    let [bx, by, bz] = field.cartesian();

    let mut h = op_lz_sz() * re(-params.lambda_so);
    if params.strain_alpha != 0.0 {
        h += op_orbital_flip() * re(params.strain_alpha);
    }
    if params.strain_beta != 0.0 {
        h += op_orbital_flip_im() * re(params.strain_beta);
    }
    h += op_lz() * re(params.quench_f * params.gamma_l * bz);
    h += op_sv(0) * re(params.gamma_s * bx);
    h += op_sv(1) * re(params.gamma_s * by);
    h += op_sv(2) * re(params.gamma_s * bz);
    h += (op_sv(2) * op_iv(2)) * re(params.a_par);
    h += (op_sv(0) * op_iv(0) + op_sv(1) * op_iv(1)) * re(params.a_perp);
    h += op_iv(0) * re(params.gamma_n * bx);
    h += op_iv(1) * re(params.gamma_n * by);
    h += op_iv(2) * re(params.gamma_n * bz);
    Ok(h)
}
