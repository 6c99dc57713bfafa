#pragma once

#include "ctpt/equilibrium.hpp"
#include "ctpt/market.hpp"

namespace ctpt {

/// Linearized price dynamics around equilibrium: alpha' = D alpha for
/// log-perturbations p_j = r_j e^{alpha_j}. The similarity transform by the
/// diagonal B symmetrizes D; B here is anchored at vertex 0, which only
/// fixes the irrelevant global scale of B.
struct DynamicsKernel {
  Matrix D;
  Matrix symmetrized;  // B D B^{-1}
  Vector B_diag;
};

struct KernelSplit {
  double c = 0.0;    // component along the all-ones scale direction
  Vector alpha_bar;  // remainder, B-orthogonal to the kernel
};

struct SimulateOptions {
  double horizon = 0.0;
  double dt = 0.0;
  int record_stride = 1;
  // Decay-rate fit window, relative to the initial perturbation norm.
  double fit_hi = 1e-2;
  double fit_lo = 1e-8;
};

struct Trajectory {
  Vector times;
  std::vector<Vector> prices;
  Vector alpha_bar_b_norm;
  double fitted_rate = 0.0;
  int fit_first = -1;  // recorded-sample indices used by the fit
  int fit_last = -1;
};

/// Kernel entries from the closed forms of the demand Jacobian at
/// equilibrium. All row sums vanish and B D B^{-1} is symmetric.
DynamicsKernel build_D_analytic(const Market& m, const Equilibrium& eq);

/// Central finite differences of total demand in log-price coordinates;
/// the independent oracle for the analytic entries. h in [1e-7, 1e-3].
Matrix build_D_numeric(const Market& m, const Equilibrium& eq, double h = 1e-5);

/// Splits alpha = c*1 + alpha_bar with <B^2 1, alpha_bar> = 0; the split is
/// B-norm minimizing over c.
KernelSplit project_out_kernel(const Vector& alpha, const Vector& B_diag);

double b_norm(const Vector& x, const Vector& B_diag);

/// Integrates the full nonlinear adjustment rule p_j' = (d_j - 1) p_j with
/// classical RK4 from p = r e^{alpha0}, recording ||alpha_bar(t)||_B and
/// fitting its log slope over the configured window.
Trajectory simulate_ctpt(const Market& m, const Equilibrium& eq, const Vector& alpha0,
                         const SimulateOptions& opts);

/// Initial direction exciting one eigenmode of the kernel: B^{-1} v_k for
/// v_k the k-th eigenvector of B D B^{-1} ordered by descending eigenvalue
/// (mode 0 is the kernel ray, mode 1 the damping mode). Normalized to
/// sup-norm 1.
Vector mode_direction(const DynamicsKernel& kernel, int mode);

}  // namespace ctpt
