use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::operators::{nuclear_along, op_iv, op_lz_sz, op_sv, spin_along, OperatorMatrix, DIM};
use crate::{ModelError, SivParameters};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinLabel {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NuclearLabel {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StateLabel {
    pub branch: Branch,
    pub spin: SpinLabel,
    pub nuclear: NuclearLabel,
}

/// Eigen-decomposition of the ground Hamiltonian with per-state labels.
#[derive(Debug, Clone)]
pub struct EnergySpectrum {
    /// Eigenvalues in Hz, ascending.
    pub energies: Vec<f64>,
    /// Eigenvector columns, unitary, product-basis representation.
    pub states: DMatrix<Complex64>,
    pub labels: Vec<StateLabel>,
    /// Oriented spin quantization axis of the lower branch. The sign convention puts
    /// the higher-energy state of each spin pair at <S.u> > 0, so the rotating-frame
    /// construction diag(E_k - f_c sigma_k) is resonant at positive line frequencies.
    pub spin_axis_lower: [f64; 3],
    pub spin_axis_upper: [f64; 3],
}

fn expectation(op: &OperatorMatrix, v: &DVector<Complex64>) -> f64 {
    (v.adjoint() * op * v)[(0, 0)].re
}

fn spin_vector(sops: &[OperatorMatrix; 3], v: &DVector<Complex64>) -> [f64; 3] {
    [expectation(&sops[0], v), expectation(&sops[1], v), expectation(&sops[2], v)]
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Deterministic fallback orientation: prefer +z, then +x, then +y.
fn orient_by_axis(u: [f64; 3]) -> [f64; 3] {
    let flip = if u[2].abs() > 1e-9 {
        u[2] < 0.0
    } else if u[0].abs() > 1e-9 {
        u[0] < 0.0
    } else {
        u[1] < 0.0
    };
    if flip {
        [-u[0], -u[1], -u[2]]
    } else {
        u
    }
}

/// Mean quantization axis of a group of states. The axis direction comes from the
/// member with the largest moment (ties broken by index order); for the electron spin
/// the sign is fixed by correlating the projection with energy so that label Up means
/// the higher-energy member of each pair regardless of field orientation.
fn quantization_axis(
    sops: &[OperatorMatrix; 3],
    states: &DMatrix<Complex64>,
    energies: &[f64],
    members: &[usize],
    energy_oriented: bool,
) -> [f64; 3] {
    let vecs: Vec<[f64; 3]> = members
        .iter()
        .map(|&k| spin_vector(sops, &states.column(k).into_owned()))
        .collect();
    let mut best = 0usize;
    for (i, v) in vecs.iter().enumerate() {
        if norm3(*v) > norm3(vecs[best]) + 1e-15 {
            best = i;
        }
    }
    let n = norm3(vecs[best]);
    if n < 1e-9 {
        return [0.0, 0.0, 1.0];
    }
    let u = [vecs[best][0] / n, vecs[best][1] / n, vecs[best][2] / n];
    if !energy_oriented {
        return orient_by_axis(u);
    }
    let mean_e = members.iter().map(|&k| energies[k]).sum::<f64>() / members.len() as f64;
    let mut corr = 0.0;
    let mut corr_scale = 0.0;
    for (i, &k) in members.iter().enumerate() {
        let p = dot3(vecs[i], u);
        corr += (energies[k] - mean_e) * p;
        corr_scale += ((energies[k] - mean_e) * p).abs();
    }
    if corr_scale > 0.0 && corr.abs() > 1e-9 * corr_scale {
        if corr < 0.0 {
            [-u[0], -u[1], -u[2]]
        } else {
            u
        }
    } else {
        orient_by_axis(u)
    }
}

/// Diagonalize a Hermitian ground-manifold Hamiltonian and label every eigenstate.
///
/// Branch from the sign of <Lz Sz> (the spin-orbit term is -lambda Lz Sz, so positive
/// expectation means lower branch). Electron and nuclear spin labels from projections
/// on per-branch mean quantization axes. All tie-breaks are deterministic in index
/// order; downstream pairing operations report classification errors when the labels
/// cannot be paired, this function does not.
pub fn diagonalize(
    h: &OperatorMatrix,
    params: &SivParameters,
) -> Result<EnergySpectrum, ModelError> {
    params.validate()?;
    let scale = h.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
    let asym = (h - h.adjoint()).iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
    if asym > 1e-12 * scale.max(1.0) {
        return Err(ModelError::NotHermitian { asymmetry: asym, scale });
    }

    let eig = h.clone().symmetric_eigen();
    // nalgebra returns eigenpairs unsorted
    let mut order: Vec<usize> = (0..DIM).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let energies: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut states = DMatrix::<Complex64>::zeros(DIM, DIM);
    for (col, &i) in order.iter().enumerate() {
        states.set_column(col, &eig.eigenvectors.column(i));
    }

    let lzsz = op_lz_sz();
    let branch_sign: Vec<f64> =
        (0..DIM).map(|k| expectation(&lzsz, &states.column(k).into_owned())).collect();
    let mut branches: Vec<Option<Branch>> = branch_sign
        .iter()
        .map(|&s| {
            if s > 1e-9 {
                Some(Branch::Lower)
            } else if s < -1e-9 {
                Some(Branch::Upper)
            } else {
                None
            }
        })
        .collect();
    // exact or near ties: fill the emptier side in index order
    for k in 0..DIM {
        if branches[k].is_none() {
            let lower = branches.iter().filter(|b| **b == Some(Branch::Lower)).count();
            let upper = branches.iter().filter(|b| **b == Some(Branch::Upper)).count();
            branches[k] = Some(if lower <= upper { Branch::Lower } else { Branch::Upper });
        }
    }
    let branches: Vec<Branch> = branches.into_iter().map(Option::unwrap).collect();

    let sops = [op_sv(0), op_sv(1), op_sv(2)];
    let iops = [op_iv(0), op_iv(1), op_iv(2)];
    let mut labels = vec![
        StateLabel { branch: Branch::Lower, spin: SpinLabel::Down, nuclear: NuclearLabel::Down };
        DIM
    ];
    let mut spin_axis_lower = [0.0, 0.0, 1.0];
    let mut spin_axis_upper = [0.0, 0.0, 1.0];
    for branch in [Branch::Lower, Branch::Upper] {
        let members: Vec<usize> = (0..DIM).filter(|&k| branches[k] == branch).collect();
        if members.is_empty() {
            continue;
        }
        let u = quantization_axis(&sops, &states, &energies, &members, true);
        let un = quantization_axis(&iops, &states, &energies, &members, false);
        match branch {
            Branch::Lower => spin_axis_lower = u,
            Branch::Upper => spin_axis_upper = u,
        }
        let su = spin_along(u);
        let iu = nuclear_along(un);
        for &k in &members {
            let v = states.column(k).into_owned();
            let sp = expectation(&su, &v);
            let np = expectation(&iu, &v);
            labels[k] = StateLabel {
                branch,
                spin: if sp > 0.0 { SpinLabel::Up } else { SpinLabel::Down },
                nuclear: if np > 0.0 { NuclearLabel::Up } else { NuclearLabel::Down },
            };
        }
    }

    Ok(EnergySpectrum { energies, states, labels, spin_axis_lower, spin_axis_upper })
}

impl EnergySpectrum {
    pub fn branch_states(&self, branch: Branch) -> Vec<usize> {
        (0..DIM).filter(|&k| self.labels[k].branch == branch).collect()
    }

    /// Electron-spin label as a signed half-integer, +1/2 for Up.
    pub fn sigma(&self, k: usize) -> f64 {
        match self.labels[k].spin {
            SpinLabel::Up => 0.5,
            SpinLabel::Down => -0.5,
        }
    }

    /// Max deviation of U from unitarity; used by validity checks.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.states.ncols();
        let id = DMatrix::<Complex64>::identity(n, n);
        (self.states.adjoint() * &self.states - id)
            .iter()
            .map(|z| z.norm())
            .fold(0.0_f64, f64::max)
    }
}
