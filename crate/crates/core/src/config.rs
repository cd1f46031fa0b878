//! Numerical tolerances and execution settings shared by every stage.

use serde::{Deserialize, Serialize};

use crate::exec::Exec;

/// One record holding every tolerance used by the library.
///
/// Defaults are chosen for double precision with frames that are orthonormal
/// to machine accuracy. All operations take it by reference.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Max-norm bound on `RᵀR − I` for a matrix to count as orthogonal.
    pub tol_orth: f64,
    /// Allowed deviation of `det R` from +1.
    pub tol_det: f64,
    /// Reconstruction bound for canonical forms and lifted points.
    pub tol_recon: f64,
    /// Principal logarithm refuses rotation angles within this distance of π.
    pub tol_pi: f64,
    /// Two branch choices closer than this (radians) are ambiguous.
    pub tie_tol: f64,
    /// Rotation angles closer than this are treated as one degenerate class.
    pub tol_cluster: f64,
    /// Max-norm bound on `F(t_N) − F(t_0)`.
    pub tol_closure: f64,
    /// Max-norm bound on consecutive loop samples.
    pub delta_step: f64,
    /// Max-norm bound on consecutive lifted points.
    pub delta_lift: f64,
    /// Bisection depth for refinement.
    pub max_depth: usize,
    /// Largest accepted distance of `α/2π` (or a winding ratio) from an integer.
    pub k_round_tol: f64,
    /// Symmetry tolerance for sampled Hamiltonians.
    pub tol_sym: f64,
    /// Relative gap (fraction of spectral range) below which a sample is degenerate.
    pub tol_gap: f64,
    /// Weakest accepted matched eigenvector overlap.
    pub overlap_min: f64,
    /// Tolerance for recognising a signed permutation.
    pub tol_perm: f64,
    /// Smallest singular value accepted for a projected frame.
    pub sigma_min: f64,
    /// Margin added to the strict `1 − 1/p` overlap bound.
    pub overlap_margin: f64,
    /// Diameter below which a sweep loop counts as a point.
    pub tol_point: f64,
    /// Hausdorff distance bound between consecutive sweep loops.
    pub sweep_step: f64,
    /// Largest accepted jump of the unwrapped phase between consecutive loops.
    pub max_phase_step: f64,
    /// Rotor norm and scalar-ness tolerance for the spin oracle.
    pub tol_rotor: f64,
    #[serde(skip)]
    pub exec: Exec,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            tol_orth: 1e-10,
            tol_det: 1e-8,
            tol_recon: 1e-9,
            tol_pi: 1e-6,
            tie_tol: 1e-3,
            tol_cluster: 1e-10,
            tol_closure: 1e-8,
            delta_step: 0.5,
            delta_lift: 1.0,
            max_depth: 20,
            k_round_tol: 0.05,
            tol_sym: 1e-10,
            tol_gap: 1e-8,
            overlap_min: 0.75,
            tol_perm: 1e-6,
            sigma_min: 1e-8,
            overlap_margin: 1e-6,
            tol_point: 1e-8,
            sweep_step: 0.5,
            max_phase_step: std::f64::consts::FRAC_PI_2,
            tol_rotor: 1e-6,
            exec: Exec::default(),
        }
    }
}

impl Config {
    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    /// Sets a tolerance by its field name. Returns `false` for unknown names.
    pub fn set(&mut self, name: &str, value: f64) -> bool {
        let slot = match name {
            "tol_orth" => &mut self.tol_orth,
            "tol_det" => &mut self.tol_det,
            "tol_recon" => &mut self.tol_recon,
            "tol_pi" => &mut self.tol_pi,
            "tie_tol" => &mut self.tie_tol,
            "tol_cluster" => &mut self.tol_cluster,
            "tol_closure" => &mut self.tol_closure,
            "delta_step" => &mut self.delta_step,
            "delta_lift" => &mut self.delta_lift,
            "k_round_tol" => &mut self.k_round_tol,
            "tol_sym" => &mut self.tol_sym,
            "tol_gap" => &mut self.tol_gap,
            "overlap_min" => &mut self.overlap_min,
            "tol_perm" => &mut self.tol_perm,
            "sigma_min" => &mut self.sigma_min,
            "overlap_margin" => &mut self.overlap_margin,
            "tol_point" => &mut self.tol_point,
            "sweep_step" => &mut self.sweep_step,
            "max_phase_step" => &mut self.max_phase_step,
            "tol_rotor" => &mut self.tol_rotor,
            "max_depth" => {
                if value < 0.0 || value.fract() != 0.0 {
                    return false;
                }
                self.max_depth = value as usize;
                return true;
            }
            _ => return false,
        };
        *slot = value;
        true
    }
}
