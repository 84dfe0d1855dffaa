use crate::error::{Error, Result};
use crate::operators::PauliSum;

/// Planning estimate of the measurements needed for derivatives of the
/// given order to precision ε: n⁴·N_η^order·(Σ|h_P|)²/ε², with n the
/// register width. Saturates at `u64::MAX`.
pub fn cost_estimate(h: &PauliSum, n_params: usize, epsilon: f64, order: u32) -> Result<u64> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::Config(format!("precision {epsilon} must be positive")));
    }
    if !(1..=2).contains(&order) {
        return Err(Error::Config(format!("derivative order {order} must be 1 or 2")));
    }
    let n = h.n_qubits() as f64;
    let norm = h.one_norm();
    let count = n.powi(4) * (n_params as f64).powi(order as i32) * norm * norm / (epsilon * epsilon);
    Ok(if count >= u64::MAX as f64 { u64::MAX } else { count.ceil() as u64 })
}
