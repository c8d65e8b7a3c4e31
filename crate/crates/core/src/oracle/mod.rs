//! Independent numerical checks: finite-difference spectra, the non-Hermitian residual,
//! a double-double Kummer oracle, and the half-line comparison for semi-bounded maps.

pub mod fd;
pub mod kummer;
pub mod residual;
pub mod tridiag;

pub use fd::{auto_truncation, fd_spectrum_x, fd_spectrum_z, richardson_extrapolate, richardson_ratio};
pub use residual::hgs_residual;
pub use tridiag::{sturm_count, TridiagonalOperator};

/// Which reference sequence a computed spectrum follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceMatch {
    /// `2 wt (n + 1/2)`, the full-line oscillator.
    FullLine,
    /// `2 wt (2m + 3/2)`, the odd states only (oscillator on a half line with a wall).
    HalfLine,
    Neither,
}

impl SequenceMatch {
    pub fn name(self) -> &'static str {
        match self {
            SequenceMatch::FullLine => "full-line ladder 2w(n+1/2)",
            SequenceMatch::HalfLine => "half-line ladder 2w(2m+3/2)",
            SequenceMatch::Neither => "neither",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SequenceComparison {
    pub energies: Vec<f64>,
    pub full_line: Vec<f64>,
    pub half_line: Vec<f64>,
    /// Largest relative deviation from each reference.
    pub full_line_dev: f64,
    pub half_line_dev: f64,
    pub verdict: SequenceMatch,
}

/// Compare computed energies with both reference ladders; a reference matches when every
/// level is within `rel_tol` of it. The closer one wins if both match.
pub fn compare_sequences(energies: &[f64], wt: f64, rel_tol: f64) -> SequenceComparison {
    let full: Vec<f64> = (0..energies.len()).map(|n| 2.0 * wt * (n as f64 + 0.5)).collect();
    let half: Vec<f64> = (0..energies.len()).map(|m| 2.0 * wt * (2.0 * m as f64 + 1.5)).collect();
    let dev = |r: &[f64]| energies.iter().zip(r).fold(0f64, |m, (e, x)| m.max((e - x).abs() / x.abs()));
    let (fd, hd) = (dev(&full), dev(&half));
    let verdict = match (fd <= rel_tol, hd <= rel_tol) {
        (true, true) if fd <= hd => SequenceMatch::FullLine,
        (true, true) => SequenceMatch::HalfLine,
        (true, false) => SequenceMatch::FullLine,
        (false, true) => SequenceMatch::HalfLine,
        (false, false) => SequenceMatch::Neither,
    };
    SequenceComparison {
        energies: energies.to_vec(),
        full_line: full,
        half_line: half,
        full_line_dev: fd,
        half_line_dev: hd,
        verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_reference_sequences() {
        let c = compare_sequences(&[0.5, 1.5, 2.5], 0.5, 0.02);
        assert_eq!(c.verdict, SequenceMatch::FullLine);
        let c = compare_sequences(&[1.5, 3.5, 5.52], 0.5, 0.02);
        assert_eq!(c.verdict, SequenceMatch::HalfLine);
        let c = compare_sequences(&[1.0, 2.0], 0.5, 0.02);
        assert_eq!(c.verdict, SequenceMatch::Neither);
    }
}
