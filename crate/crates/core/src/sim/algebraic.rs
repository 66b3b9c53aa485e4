//! Fixed point between the current references and the PCC voltage.

use crate::error::Result;
use crate::network::{solve_pcc, NetworkParams, NetworkSolution, Topology};
use crate::phasor::Phasor;
use crate::vsc::{current_refs_fault, current_refs_normal, ControlMode, CurrentCommand, DqVoltage, FrtParams};

/// Position of the normal/FRT selection switch.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ControlSwitch {
    Normal(ControlMode),
    FaultRideThrough,
}

#[derive(Clone, Copy, Debug)]
pub struct LoopOutcome {
    pub solution: NetworkSolution,
    pub command: CurrentCommand,
    pub iterations: usize,
    pub converged: bool,
    /// Last `|ΔV|`, p.u.
    pub residual: f64,
}

fn references(switch: &ControlSwitch, v: Phasor, delta_pll: f64, frt: &FrtParams) -> CurrentCommand {
    match switch {
        ControlSwitch::Normal(mode) => current_refs_normal(mode, DqVoltage::from_phasor(v, delta_pll), frt),
        ControlSwitch::FaultRideThrough => current_refs_fault(v.magnitude(), frt),
    }
}

/// Iterates references → injected current → network until `|ΔV| < fp_tol`.
///
/// Starts from `prev_v`. Fixed CPF references need a single network solve.
/// If the residual grows the update is under-relaxed, halving the step each
/// time down to 1/64.
#[allow(clippy::too_many_arguments)]
pub fn resolve_algebraic_loop(
    prev_v: Phasor,
    delta_pll: f64,
    switch: &ControlSwitch,
    frt: &FrtParams,
    network: &NetworkParams,
    topo: &Topology,
    fp_tol: f64,
    fp_max_iter: usize,
) -> Result<LoopOutcome> {
    if let ControlSwitch::Normal(ControlMode::Cpf { .. }) = switch {
        let command = references(switch, prev_v, delta_pll, frt);
        let solution = solve_pcc(command.to_grid(delta_pll), network, topo)?;
        return Ok(LoopOutcome {
            solution,
            command,
            iterations: 1,
            converged: true,
            residual: 0.0,
        });
    }

    let mut v = prev_v;
    let mut relax = 1.0;
    let mut last_residual = f64::INFINITY;
    let mut outcome = None;
    for it in 1..=fp_max_iter.max(1) {
        let command = references(switch, v, delta_pll, frt);
        let solution = solve_pcc(command.to_grid(delta_pll), network, topo)?;
        let step = solution.v_pcc - v;
        let residual = step.magnitude();
        let converged = residual < fp_tol;
        outcome = Some(LoopOutcome {
            solution,
            command,
            iterations: it,
            converged,
            residual,
        });
        if converged {
            break;
        }
        if residual > last_residual && relax > 1.0 / 64.0 {
            relax *= 0.5;
        }
        last_residual = residual;
        v = v + step.scale(relax);
    }
    let outcome = outcome.expect("at least one iteration");

    #[cfg(debug_assertions)]
    if let (ControlSwitch::Normal(ControlMode::Opc { p_ref, q_ref }), true) = (switch, outcome.converged) {
        let v_mag = outcome.solution.v_pcc.magnitude();
        if !outcome.command.degenerate && v_mag > frt.v_eps {
            let a0 = crate::vsc::alpha0_of(*p_ref, *q_ref)?;
            let r = crate::vsc::opc_identity_residual(outcome.command.phi, delta_pll, outcome.solution.delta_pcc, a0);
            debug_assert!(
                r.abs().to_radians() * v_mag <= 10.0 * fp_tol + 1e-12,
                "OPC angle identity violated by {r}°"
            );
        }
    }
    Ok(outcome)
}
