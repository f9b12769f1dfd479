#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace rwave {

/// Families of admissible nonlinear weight coefficients w(.) multiplying the
/// Laplacian. All shipped families are positive on (-1/2, inf), equal 1 at 0,
/// are non-increasing for y >= 0, and satisfy the comparison inequality
/// w <= alpha * |w'|^(1/2) on [1, inf).
enum class WeightFamily { power_inverse, power_shifted, exponential };

struct WeightFunction {
  WeightFamily family = WeightFamily::power_shifted;
  int exponent = 1;         // M >= 1; ignored by the exponential family
  double alpha_hint = 1.0;  // candidate constant for the comparison inequality

  static WeightFunction power_inverse(int M, double alpha_hint = 1.0);
  static WeightFunction power_shifted(int M, double alpha_hint = 1.0);
  static WeightFunction exponential(double alpha_hint = 1.0);

  std::string name() const;
};

/// w(y); domain (-1/2, inf) with a strict 1e-12 guard band at the cut.
/// power_inverse(M): 1/(1+y^M); power_shifted(M): 1/(1+y)^M;
/// exponential: exp(-y). Throws std::domain_error outside the domain.
double eval_weight(const WeightFunction& w, double y);

/// Closed-form derivative w'(y); same domain rules as eval_weight.
double eval_weight_derivative(const WeightFunction& w, double y);

struct AssumptionCheck {
  std::string name;
  bool passed = false;
  double worst_value = 0.0;  // the extremal sampled quantity for this assumption
  double worst_y = 0.0;
  std::string detail;
};

struct AdmissibilityReport {
  bool passed = false;
  std::vector<AssumptionCheck> checks;
  // Observed bounds C_k for |((1+y)^2 d/dy)^k [(1+y) w(y)]|, k = 0..5.
  std::array<double, 6> derivative_bounds{};
  // Smallest alpha that makes the comparison inequality hold on the samples.
  double minimal_alpha = 0.0;

  const AssumptionCheck* find(const std::string& name) const;
};

/// Verifies the structural assumptions on a sampled log-spaced grid in
/// (-1/2 + tiny, y_max]. Violations beyond tolerance 1e-8 fail the report.
AdmissibilityReport certify_weight(const WeightFunction& w, double y_max = 1e4,
                                   int samples = 2000);

/// Generic certification path; lets tests probe deliberately inadmissible
/// functions. `w` and `wprime` must be defined on (-1/2, inf).
AdmissibilityReport certify_weight(const std::function<double(double)>& w,
                                   const std::function<double(double)>& wprime,
                                   double alpha_hint, double y_max, int samples);

}  // namespace rwave
