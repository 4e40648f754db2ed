use crate::operators::spin_along;
use crate::spectrum::{Branch, EnergySpectrum, SpinLabel};
use crate::ModelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineKind {
    /// Electron spin flips, nuclear spin preserved: the two dominant ODMR lines.
    NuclearPreserving,
    /// Both electron and nuclear spin flip: weak satellites.
    BothFlipped,
}

/// A microwave transition inside the lower branch.
#[derive(Debug, Clone, Copy)]
pub struct OdmrLine {
    /// Transition frequency in Hz (positive).
    pub frequency: f64,
    /// |<f| S_x' |i>|^2 with S_x' transverse to the branch quantization axis.
    pub strength: f64,
    pub kind: LineKind,
    /// Eigenstate indices of the pair, lower energy first.
    pub low_state: usize,
    pub high_state: usize,
}

/// Unit vector transverse to u; prefers the x direction, falls back to y when u is
/// along x itself. Shared convention for line strengths and microwave drive matrix
/// elements, so a drive amplitude calibrated against one applies to the other.
pub fn transverse_axis(u: [f64; 3]) -> [f64; 3] {
    for trial in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]] {
        let proj = trial[0] * u[0] + trial[1] * u[1] + trial[2] * u[2];
        let v = [trial[0] - proj * u[0], trial[1] - proj * u[1], trial[2] - proj * u[2]];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-6 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
    [0.0, 0.0, 1.0]
}

/// The four electron-spin-flip lines of the lower branch: two nuclear-preserving and
/// two both-flipped, sorted by frequency.
pub fn odmr_transitions(spectrum: &EnergySpectrum) -> Result<Vec<OdmrLine>, ModelError> {
    let lower = spectrum.branch_states(Branch::Lower);
    if lower.len() != 4 {
        return Err(ModelError::Classification(format!(
            "expected 4 lower-branch states, found {}",
            lower.len()
        )));
    }
    let ups: Vec<usize> =
        lower.iter().copied().filter(|&k| spectrum.labels[k].spin == SpinLabel::Up).collect();
    let downs: Vec<usize> =
        lower.iter().copied().filter(|&k| spectrum.labels[k].spin == SpinLabel::Down).collect();
    if ups.len() != 2 || downs.len() != 2 {
        return Err(ModelError::Classification(format!(
            "lower branch spin labels must split 2/2, found {} up and {} down (states {:?})",
            ups.len(),
            downs.len(),
            lower
        )));
    }
    for pool in [&ups, &downs] {
        if spectrum.labels[pool[0]].nuclear == spectrum.labels[pool[1]].nuclear {
            return Err(ModelError::Classification(format!(
                "ambiguous nuclear labels: states {} and {} carry the same label",
                pool[0], pool[1]
            )));
        }
    }

    let sx = spin_along(transverse_axis(spectrum.spin_axis_lower));
    let sx_eig = spectrum.states.adjoint() * &sx * &spectrum.states;

    let mut lines = Vec::with_capacity(4);
    for &a in &downs {
        for &b in &ups {
            let (low, high) = if spectrum.energies[a] <= spectrum.energies[b] {
                (a, b)
            } else {
                (b, a)
            };
            let kind = if spectrum.labels[a].nuclear == spectrum.labels[b].nuclear {
                LineKind::NuclearPreserving
            } else {
                LineKind::BothFlipped
            };
            lines.push(OdmrLine {
                frequency: (spectrum.energies[b] - spectrum.energies[a]).abs(),
                strength: sx_eig[(a, b)].norm_sqr(),
                kind,
                low_state: low,
                high_state: high,
            });
        }
    }
    debug_assert_eq!(lines.len(), 4);
    debug_assert!(lines.iter().all(|l| l.strength <= 1.0 + 1e-12));
    lines.sort_by(|x, y| x.frequency.total_cmp(&y.frequency));
    Ok(lines)
}

/// Convenience: the two nuclear-preserving lines, ascending in frequency.
pub fn nuclear_preserving(lines: &[OdmrLine]) -> Vec<OdmrLine> {
    lines.iter().copied().filter(|l| l.kind == LineKind::NuclearPreserving).collect()
}
