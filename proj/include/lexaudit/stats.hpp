#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lexaudit {

struct Chi2Result {
  double statistic = 0.0;
  int df = 1;
  double p = 1.0;
  bool corrected = false;  // Yates continuity correction applied

  bool operator==(const Chi2Result&) const = default;
};

/// Upper-tail probability of the chi-square distribution, Q(df/2, x/2).
/// Series expansion below a + 1, Lentz continued fraction above.
double chi2_p(double statistic, int df);

/// Regularized upper incomplete gamma Q(a, x) for a > 0, x >= 0.
double gamma_q(double a, double x);

/// Goodness of fit against `expected_proportions` (uniform when empty).
/// Throws ValidationError on negative counts, a zero total, fewer than two
/// cells, or proportions that are zero or do not sum to 1.
Chi2Result chi2_gof(std::span<const double> observed, std::span<const double> expected_proportions = {});
Chi2Result chi2_gof(std::initializer_list<double> observed);

/// 2x2 independence, {{a, b}, {c, d}}. With `yates` the statistic is
/// N(|ad - bc| - N/2)^2 / ((a+b)(c+d)(a+c)(b+d)), floored at zero.
Chi2Result chi2_2x2(const std::array<std::array<double, 2>, 2>& table, bool yates = true);

/// Nominal ratings: item -> rater -> category. Missing cells are absent keys.
struct RatingsMatrix {
  std::map<std::string, std::map<std::string, std::string>> values;

  void set(const std::string& item, const std::string& rater, std::string value) {
    values[item][rater] = std::move(value);
  }
};

/// Krippendorff's alpha with the nominal difference function, via the
/// coincidence matrix. Items with fewer than two ratings are skipped.
/// Returns 1 when expected disagreement is zero. Throws ValidationError when
/// no item has two ratings.
double kripp_alpha(const RatingsMatrix& r);

}  // namespace lexaudit
