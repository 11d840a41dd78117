#pragma once

#include <stdexcept>
#include <string>

namespace semiheat {

/// Which variables a field or a run lives in: the original equation
/// u_t = Δu + u^p on (x, t), or the rescaled equation on (y, s) with
/// t = e^s - 1.
enum class Frame { UFrame, VFrame };

/// Position of the exponent p relative to the Fujita exponent p* = 1 + 2/N.
enum class Regime { SubcriticalFujita, CriticalFujita, Supercritical };

enum class RunStatus { Decayed, BlewUp, Undetermined };

/// Radial initial-data families.
///   Gaussian:       u0(r) = A exp(-r^2 / sigma^2)
///   Bump:           u0(r) = A exp(1 - 1/(1 - (r/R0)^2)) for r < R0, else 0
///   ScaledSingular: u0(r) = fraction * lambda * u_inf(r), switched on
///                   smoothly above the inner cutoff radius and tapered at
///                   large r so the weighted tail is negligible
enum class InitialKind { Gaussian, Bump, ScaledSingular };

struct InitialDataSpec {
    InitialKind kind = InitialKind::Gaussian;
    double amplitude = 0.1;  // A, or the fraction for ScaledSingular
    double width = 2.0;      // sigma, R0, or the inner cutoff radius

    void validate() const {
        if (!(amplitude > 0.0))
            throw std::invalid_argument("initial data: amplitude must be positive");
        if (!(width > 0.0))
            throw std::invalid_argument("initial data: width must be positive");
        if (kind == InitialKind::ScaledSingular && !(amplitude < 1.0))
            throw std::invalid_argument("initial data: singular fraction must be < 1");
    }
};

/// Time-stepping knobs for evolve(). dt advances s in the VFrame and t in
/// the UFrame.
struct StepControls {
    Frame frame = Frame::VFrame;
    double dt = 1e-3;
    double dt_min = 1e-7;
    double horizon = 8.0;            // s_max or t_max
    int sample_every = 100;          // steps between diagnostic samples
    double blowup_threshold = 1e6;   // sup-norm trigger
    double decay_threshold = 1e-3;   // final ||v||_{L2_rho} below => Decayed

    void validate() const {
        if (!(dt > 0.0)) throw std::invalid_argument("stepping: dt must be positive");
        if (!(dt_min > 0.0) || dt_min > dt)
            throw std::invalid_argument("stepping: need 0 < dt_min <= dt");
        if (!(horizon > 0.0)) throw std::invalid_argument("stepping: horizon must be positive");
        if (sample_every < 1) throw std::invalid_argument("stepping: sample_every must be >= 1");
        if (!(blowup_threshold >= 1e3))
            throw std::invalid_argument("stepping: blowup_threshold must be >= 1e3");
        if (!(decay_threshold > 0.0))
            throw std::invalid_argument("stepping: decay_threshold must be positive");
    }
};

struct RunOutcome {
    RunStatus status = RunStatus::Undetermined;
    double t_blowup = 0.0;  // original-frame estimate, valid when status == BlewUp
    std::string reason;
};

std::string to_string(Frame f);
std::string to_string(Regime r);
std::string to_string(RunStatus s);
std::string to_string(InitialKind k);

/// Thrown when a run or an experiment is asked to proceed with inputs that
/// violate one of the layered hypotheses (Wang barrier, Lemma admissibility,
/// supercritical gate, ...). The message names the failed hypothesis.
class hypothesis_error : public std::runtime_error {
  public:
    explicit hypothesis_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace semiheat
