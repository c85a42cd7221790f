#pragma once

// Parameter bundles for the four symmetry classes and the generator
//
//   G = tau d/dt + eta1 d/dx + eta2 d/dy
//   tau  = rho^2
//   eta1 = (rho rho' + k) x - Omega y + a1
//   eta2 = Omega x + (rho rho' + k) y + a2
//
// Case A: rho != 0 (a1, a2 derived from alpha1, alpha2).
// Case B: rho = k = 0, Omega constant and nonzero.
// Case C: rho = k = Omega = 0, a2 != 0.
// Case D: rho = 0, k != 0.

#include <array>
#include <optional>
#include <string_view>
#include <utility>

#include "lpsym/time_function.hpp"

namespace lpsym {

enum class SymmetryCase { A, B, C, D };

char case_letter(SymmetryCase c) noexcept;
std::optional<SymmetryCase> case_from_letter(std::string_view s) noexcept;

struct TimeInterval {
  double start = 0.0;
  double end = 1.0;
  double length() const noexcept { return end - start; }
};

struct GeneratorValue {
  double tau = 0.0;
  double eta1 = 0.0;
  double eta2 = 0.0;
};

/// Generator coefficient functions and their time derivatives at one instant.
/// Index n holds the n-th derivative.
struct GeneratorCoefficients {
  double k = 0.0;
  std::array<double, 4> rho{};
  std::array<double, 3> omega{};
  std::array<double, 3> a1{};
  std::array<double, 3> a2{};

  double tau() const noexcept { return rho[0] * rho[0]; }
  /// rho rho' + k, the common radial rate.
  double radial() const noexcept { return rho[0] * rho[1] + k; }
  /// d/dt (rho rho') = rho rho'' + rho'^2.
  double radial_rate() const noexcept { return rho[0] * rho[2] + rho[1] * rho[1]; }
  /// d^2/dt^2 (rho rho') = rho rho''' + 3 rho' rho''.
  double radial_accel() const noexcept { return rho[0] * rho[3] + 3.0 * rho[1] * rho[2]; }

  GeneratorValue generator(double x, double y) const noexcept {
    return {tau(), radial() * x - omega[0] * y + a1[0], omega[0] * x + radial() * y + a2[0]};
  }
};

class SymmetryParams {
 public:
  /// rho must not vanish on the interval (checked by dense sampling).
  static SymmetryParams case_a(double k, TimeFunction rho, TimeFunction omega, TimeFunction alpha1,
                               TimeFunction alpha2, TimeInterval interval);
  /// Rotation about the moving center (-a2/Omega, a1/Omega) with constant Omega.
  static SymmetryParams case_b(TimeFunction a1, TimeFunction a2, TimeInterval interval, double omega = 1.0);
  /// Pure time-dependent translation; a2 must not vanish on the interval.
  static SymmetryParams case_c(TimeFunction a1, TimeFunction a2, TimeInterval interval);
  /// Dilatation plus rotation and translation; k != 0.
  static SymmetryParams case_d(double k, TimeFunction omega, TimeFunction a1, TimeFunction a2,
                               TimeInterval interval);

  SymmetryCase kind() const noexcept { return kind_; }
  double k() const noexcept { return k_; }
  const TimeInterval& interval() const noexcept { return interval_; }

  const TimeFunction& rho() const noexcept { return rho_; }
  const TimeFunction& omega() const noexcept { return omega_; }
  const TimeFunction& alpha1() const noexcept { return alpha1_; }
  const TimeFunction& alpha2() const noexcept { return alpha2_; }
  const TimeFunction& a1() const noexcept { return a1_; }
  const TimeFunction& a2() const noexcept { return a2_; }

  /// Translated origin: (beta1, beta2) in case B, (gamma1, gamma2) in case D,
  /// zero otherwise.
  const TimeFunction& center1() const noexcept { return center1_; }
  const TimeFunction& center2() const noexcept { return center2_; }

  GeneratorCoefficients coefficients(double t) const;
  GeneratorValue generator(double x, double y, double t) const { return coefficients(t).generator(x, y); }

 private:
  SymmetryParams() = default;
  void finish_centers();

  SymmetryCase kind_ = SymmetryCase::A;
  double k_ = 0.0;
  TimeInterval interval_{};
  TimeFunction rho_;
  TimeFunction omega_;
  TimeFunction alpha1_;
  TimeFunction alpha2_;
  TimeFunction a1_;
  TimeFunction a2_;
  TimeFunction center1_;
  TimeFunction center2_;
};

GeneratorValue generator_eval(const SymmetryParams& params, double x, double y, double t);

/// (a1, a2) = rho^2 alpha' - (rho rho' + k) alpha, case A only.
std::pair<double, double> derived_translations(const SymmetryParams& params, double t);

/// Number of samples used to check nonvanishing conditions on the interval.
inline constexpr int kNonvanishingSamples = 4097;

}  // namespace lpsym
