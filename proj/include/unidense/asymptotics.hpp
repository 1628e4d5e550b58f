#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "unidense/set_spec.hpp"

namespace unidense {

// Periodic structure in real coordinates: {x >= start : (x - phase) mod q in pattern}.
struct PeriodicForm {
  double period = 0.0;
  double start = 0.0;
  double phase = 0.0;
  std::vector<std::pair<double, double>> pattern;  // inside [0, period)
  std::vector<double> pattern_prefix;              // measure before piece i
  double pattern_measure = 0.0;
};

// sum_{n in [n1, n2)} log((n q + b)/(n q + a)) for 0 <= a <= b, n q + a > 0
// throughout the range. Direct summation for short ranges, Euler-Maclaurin
// with an analytic integral term for the bulk; n1, n2 may be ~1e300.
double log_ratio_sum(double q, double a, double b, double n1, double n2);

// Exact sup/inf over the window position x of sigma(D, x) for a periodic set,
// taken over the pure periodic regime (x ranging over one period).
double periodic_sup_sigma(const PeriodicForm& f, double D);
double periodic_inf_sigma(const PeriodicForm& f, double D);

// Closed-form/asymptotic evaluator for a SetSpec. Where the structure allows
// (periodic, geometric, squares, and their images under the algebra including
// thinning) prefix and log_prefix are available far beyond any materialization
// horizon; elsewhere they fall back to budgeted enumeration.
class Profile {
 public:
  explicit Profile(const SetSpec& spec, std::size_t budget = SetSpec::kDefaultBudget);
  ~Profile();
  Profile(const Profile&) = delete;
  Profile& operator=(const Profile&) = delete;

  // S_A(x) for 0 <= x <= x_max().
  double prefix(double x) const;

  // m(log A ∩ [0, t)) = ∫_1^{e^t} 1_A(u)/u du for 0 <= t <= t_max().
  double log_prefix(double t) const;

  double x_max() const;
  double t_max() const;

  const std::optional<PeriodicForm>& periodic_form() const;

  struct Range {
    double prefix_lo = 0.0;  // S_A(lo)
    std::vector<Interval<double>> pieces;
  };
  // Intervals of A intersecting [lo, hi), clipped to it.
  Range pieces_in(double lo, double hi) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace unidense
