//! Operator representations on the 8-dimensional product space.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type OperatorMatrix = DMatrix<Complex64>;

/// Ground-manifold dimension: orbital (2) x electron spin (2) x nuclear spin (2).
pub const DIM: usize = 8;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn identity2() -> DMatrix<Complex64> {
    DMatrix::identity(2, 2)
}

fn pauli_half(axis: usize) -> DMatrix<Complex64> {
    // spin-1/2 operators S_x, S_y, S_z (eigenvalues +-1/2)
    match axis {
        0 => DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(0.0, 0.0)]),
        1 => DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -0.5), c(0.0, 0.5), c(0.0, 0.0)]),
        2 => DMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.5, 0.0)]),
        _ => unreachable!("axis must be 0..3"),
    }
}

fn orbital_lz() -> DMatrix<Complex64> {
    // L_z|+,-> = +-|+,->
    DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)])
}

fn orbital_flip2() -> DMatrix<Complex64> {
    DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
}

fn orbital_flip_im2() -> DMatrix<Complex64> {
    // i|+><-| - i|-><+|
    DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(0.0, 0.0)])
}

pub fn kron3(
    a: &DMatrix<Complex64>,
    b: &DMatrix<Complex64>,
    d: &DMatrix<Complex64>,
) -> OperatorMatrix {
    a.kronecker(b).kronecker(d)
}

/// L_z on the full space.
pub fn op_lz() -> OperatorMatrix {
    kron3(&orbital_lz(), &identity2(), &identity2())
}

/// The spin-orbit product L_z*S_z; its expectation value signs the branch labels.
pub fn op_lz_sz() -> OperatorMatrix {
    kron3(&orbital_lz(), &pauli_half(2), &identity2())
}

/// Orbital-flip operator (|+><-| + |-><+|) (x) 1 (x) 1. Doubles as the strain mixing
/// term and as the phonon coupling operator V.
pub fn op_orbital_flip() -> OperatorMatrix {
    kron3(&orbital_flip2(), &identity2(), &identity2())
}

pub fn op_orbital_flip_im() -> OperatorMatrix {
    kron3(&orbital_flip_im2(), &identity2(), &identity2())
}

/// Electron-spin component, axis in {0,1,2} for x,y,z.
pub fn op_sv(axis: usize) -> OperatorMatrix {
    kron3(&identity2(), &pauli_half(axis), &identity2())
}

/// Nuclear-spin component, axis in {0,1,2} for x,y,z.
pub fn op_iv(axis: usize) -> OperatorMatrix {
    kron3(&identity2(), &identity2(), &pauli_half(axis))
}

/// Electron spin projected on a unit vector.
pub fn spin_along(u: [f64; 3]) -> OperatorMatrix {
    let mut m = op_sv(0) * c(u[0], 0.0);
    m += op_sv(1) * c(u[1], 0.0);
    m += op_sv(2) * c(u[2], 0.0);
    m
}

/// Nuclear spin projected on a unit vector.
pub fn nuclear_along(u: [f64; 3]) -> OperatorMatrix {
    let mut m = op_iv(0) * c(u[0], 0.0);
    m += op_iv(1) * c(u[1], 0.0);
    m += op_iv(2) * c(u[2], 0.0);
    m
}
