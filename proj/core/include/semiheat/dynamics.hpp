#pragma once

#include <utility>
#include <vector>

#include "semiheat/diagnostics.hpp"
#include "semiheat/grid.hpp"

namespace semiheat {

struct WangReport {
    enum class Verdict { Pass, Fail, NotApplicable };
    Verdict verdict = Verdict::NotApplicable;
    double max_ratio = 0.0;  // max over nodes r > 0 of u0 / (lambda u_inf)
    double argmax_r = 0.0;
    std::string detail;
};

/// Builds u0 on the grid from the spec and checks it against the barrier
/// 0 <= u0 <= lambda u_inf (when N >= 3 and p > N/(N-2)). The field is
/// returned in the UFrame at t = 0, which coincides with the VFrame at
/// s = 0. Rejects negative, trivial, or badly truncated data
/// (tail_fraction >= 1e-4; a tail above 1e-8 is noted in the report).
std::pair<Field, WangReport> make_initial_data(const RadialGrid& grid,
                                               const InitialDataSpec& spec,
                                               const ProblemParams& params);

/// Right-hand side of the rescaled equation,
///   v_s = Δv + (r/2) v_r + v/(p-1) + v^p,
/// evaluated with the grid operators; this vector is also the discrete v_s
/// used by every diagnostic functional. include_reaction = false drops the
/// v^p term (linear part only).
std::vector<double> rhs_v(const RadialGrid& grid, const ProblemParams& params,
                          std::span<const double> v, bool include_reaction = true);

/// Right-hand side of the original equation, u_t = Δu + u^p.
std::vector<double> rhs_u(const RadialGrid& grid, const ProblemParams& params,
                          std::span<const double> u, bool include_reaction = true);

/// One IMEX step: backward Euler on the linear part (Δ + (r/2)∂_r + 1/(p-1)
/// in the VFrame, Δ in the UFrame) through a tridiagonal solve, with the
/// power nonlinearity explicit at the old state. The implicit matrix is
/// strictly diagonally dominant for dt below max_stable_dt(), and the step
/// preserves nonnegativity of nonnegative states.
class ImexStepper {
  public:
    ImexStepper(const RadialGrid& grid, const ProblemParams& params, Frame frame, double dt,
                bool include_reaction = true);

    double dt() const { return dt_; }
    double max_stable_dt() const;
    void set_dt(double dt);

    /// Advances state in place; state.size() must equal grid.size().
    void step(std::vector<double>& state);

  private:
    void assemble();

    const RadialGrid* grid_;
    double p_;
    Frame frame_;
    double dt_;
    bool include_reaction_;
    std::vector<double> lower_, diag_, upper_;
    std::vector<double> work_c_, work_d_;  // Thomas workspaces
};

/// Convenience single-step form of ImexStepper.
Field step_imex(const RadialGrid& grid, const ProblemParams& params, const Field& state,
                double dt, bool include_reaction = true);

/// Change of variables between frames at one instant:
///   v(y, s) = (t+1)^{1/(p-1)} u((t+1)^{1/2} y, t),   t = e^s - 1.
/// Monotone cubic interpolation at the scaled radii; radii beyond the grid
/// map to zero.
Field map_u_to_v(const RadialGrid& grid, const Field& u, const ProblemParams& params);
Field map_v_to_u(const RadialGrid& grid, const Field& v, const ProblemParams& params);

/// ||v(s)||_{L2_rho} evaluated directly from a UFrame field through the
/// change-of-variables identity (no interpolation).
double v_norm_from_u(const RadialGrid& grid, const Field& u, const ProblemParams& params);

/// Integrates the requested frame from init to the horizon, sampling
/// diagnostics every sample_every accepted steps. Halts early on blow-up
/// (sup-norm threshold or nonfinite values). When a step changes the
/// sup-norm by more than 10% the step is redone at half dt, down to dt_min;
/// past that, steps are accepted but the run can no longer classify as
/// Decayed. extra_q lists L^q norms tracked beyond the built-in {2, 4}.
Trajectory evolve(const RadialGrid& grid, const ProblemParams& params, const Field& init,
                  const StepControls& controls, std::span<const double> extra_q = {});

}  // namespace semiheat
