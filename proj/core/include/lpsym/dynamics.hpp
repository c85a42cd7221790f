#pragma once

// Fixed-step RK4 integration of planar charged-particle motion
//
//   x'' = E1 + y' B,   y'' = E2 - x' B
//
// in the lab frame, and of the transformed equations in case A canonical
// coordinates. Trajectories can be mapped between frames.

#include <iosfwd>
#include <string>
#include <vector>

#include "lpsym/canonical.hpp"
#include "lpsym/fields.hpp"

namespace lpsym {

enum class Frame { Lab, Canonical };

std::string_view frame_name(Frame f) noexcept;

/// One sample: time and position/velocity in the trajectory's frame. In the
/// canonical frame t is tb, (q1, q2) = (xb, yb) and v = d(xb, yb)/dtb.
struct PhaseState {
  double t = 0.0;
  double q1 = 0.0;
  double q2 = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;
};

struct IntegratorInfo {
  std::string method = "rk4";
  double step = 0.0;
  /// Max position difference between the run and a half-step rerun, scaled
  /// by 16/15 (Richardson). Negative when not computed.
  double error_estimate = -1.0;
  bool ok = true;
  /// Reason the integration stopped early; empty when ok.
  std::string failure;
};

struct Trajectory {
  Frame frame = Frame::Lab;
  std::vector<PhaseState> samples;
  IntegratorInfo info;

  /// Throws Error unless there are at least two samples with strictly
  /// increasing times.
  void validate() const;
};

struct IntegrateOptions {
  double step = 1e-3;
  bool estimate_error = true;
};

/// Integrates from `initial.t` to `t_end`. The step is shrunk so that a whole
/// number of steps lands exactly on `t_end`. On a field singularity or a
/// non-finite state the partial trajectory is returned with info.ok = false.
Trajectory integrate_lab(const ElectromagneticField& field, const PhaseState& initial, double t_end,
                         IntegrateOptions options = {});

/// Canonical-frame equations of a case A family:
///   xb'' + 2k xb' + k^2 xb = E1b + (yb' + k yb) Bb
///   yb'' + 2k yb' + k^2 yb = E2b - (xb' + k xb) Bb
Trajectory integrate_canonical_case_a(const PlaneFunction& bbar, const PlaneFunction& e1bar,
                                      const PlaneFunction& e2bar, double k, const PhaseState& initial,
                                      double tb_end, IntegrateOptions options = {});

enum class Direction { LabToCanonical, CanonicalToLab };

/// Maps every sample; velocities follow from the chain rule with the map's
/// analytic Jacobian. Angles are continued along the curve. Throws when the
/// target time is not strictly increasing.
Trajectory transform_trajectory(const Trajectory& traj, const CanonicalMap& map, Direction direction);

/// Position and velocity of one sample mapped to the other frame.
PhaseState transform_state(const PhaseState& s, const CanonicalMap& map, Direction direction,
                           const CanonicalPoint* previous = nullptr);

/// Position distance from each sample of `reference` to `other`, which is
/// interpolated (cubic Hermite from its positions and velocities) at the
/// reference times. Reference times outside `other` are clamped to its ends.
std::vector<double> position_deviation(const Trajectory& reference, const Trajectory& other);

/// CSV with header "t,q1,q2,v1,v2" and 17 significant digits.
void write_csv(std::ostream& out, const Trajectory& traj);
Trajectory read_csv(std::istream& in, Frame frame);

/// `v` with 17 significant digits, independent of the C locale.
std::string format_double(double v);

}  // namespace lpsym
