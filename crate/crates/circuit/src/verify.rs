//! Exhaustive gate-level checks of classical basis maps.

use quantum_state::{Complex64, DenseState, RngStream};

use crate::error::Result;
use crate::ir::Op;
use crate::run::{run_ops, Backend, MeasurementRecord};

/// Checks that `ops` maps every basis state `x` of `num_qubits` qubits to
/// `expected(x)`, using one gate-faithful dense run.
///
/// The input is a superposition where basis state `x` carries an amplitude
/// whose magnitude grows strictly with `x`, so by linearity each output
/// amplitude identifies the input it came from. Intended for measurement-free
/// circuits that are permutations up to no phase. Returns the inputs whose
/// amplitude did not arrive intact (within `tol`).
pub fn permutation_mismatches<F>(ops: &[Op], num_qubits: usize, tol: f64, expected: F) -> Result<Vec<u64>>
where
    F: Fn(u64) -> u64,
{
    let len = 1usize << num_qubits;
    let tag = |x: usize| {
        let r = 1.0 + x as f64 / len as f64;
        Complex64::from_polar(r, 0.7 * x as f64)
    };
    let norm: f64 = (0..len).map(|x| tag(x).norm_sqr()).sum::<f64>().sqrt();
    let mut state = DenseState::from_amps((0..len).map(|x| tag(x) / norm).collect())?;
    let mut record = MeasurementRecord::default();
    run_ops(ops, &mut state, Backend::GateFaithful, &mut RngStream::new(0), &mut record)?;
    let amps = state.amps();
    Ok((0..len)
        .filter(|&x| {
            let y = expected(x as u64) as usize;
            y >= len || (amps[y] - tag(x) / norm).norm() > tol
        })
        .map(|x| x as u64)
        .collect())
}
