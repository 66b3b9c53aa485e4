//! Grid-following converter control: PLL, dq measurement and current references.

mod control;
mod pll;

pub use control::{
    abc_from_phasor, alpha0_of, current_refs_fault, current_refs_normal, measure_dq,
    opc_identity_residual, park, phi_of, ControlMode, CurrentCommand, DqVoltage, FrtParams,
    FRT_CAPACITIVE_SIGN,
};
pub use pll::{pll_step, pll_step_coupled, GainScaling, PllParams, PllState};
