#include "lexaudit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lexaudit/error.hpp"

namespace lexaudit {
namespace {

constexpr int kMaxIterations = 10000;
constexpr double kEps = 1e-16;
constexpr double kTiny = std::numeric_limits<double>::min() / kEps;

// P(a, x) by its power series; converges quickly for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxIterations; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Q(a, x) by its continued fraction (modified Lentz); for x >= a + 1.
double gamma_q_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_q(double a, double x) {
  if (!(a > 0.0)) throw ValidationError("gamma_q requires a > 0", "a");
  if (x < 0.0 || std::isnan(x)) throw ValidationError("gamma_q requires x >= 0", "x");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_fraction(a, x);
}

double chi2_p(double statistic, int df) {
  if (df < 1) throw ValidationError("degrees of freedom must be positive", "df");
  if (statistic <= 0.0) return 1.0;
  return std::clamp(gamma_q(0.5 * df, 0.5 * statistic), 0.0, 1.0);
}

Chi2Result chi2_gof(std::span<const double> observed, std::span<const double> expected_proportions) {
  if (observed.size() < 2) throw ValidationError("goodness of fit needs at least two cells", "observed");
  double total = 0.0;
  for (double o : observed) {
    if (!(o >= 0.0)) throw ValidationError("observed counts must be non-negative", "observed");
    total += o;
  }
  if (total <= 0.0) throw ValidationError("observed counts sum to zero", "observed");

  std::vector<double> props;
  if (expected_proportions.empty()) {
    props.assign(observed.size(), 1.0 / static_cast<double>(observed.size()));
  } else {
    if (expected_proportions.size() != observed.size())
      throw ValidationError("expected proportions and observed counts differ in length", "expected");
    props.assign(expected_proportions.begin(), expected_proportions.end());
    const double sum = std::accumulate(props.begin(), props.end(), 0.0);
    if (std::fabs(sum - 1.0) > 1e-9) throw ValidationError("expected proportions must sum to 1", "expected");
    for (double p : props)
      if (!(p > 0.0)) throw ValidationError("expected proportions must be positive", "expected");
  }

  Chi2Result r;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = total * props[i];
    r.statistic += (observed[i] - e) * (observed[i] - e) / e;
  }
  r.df = static_cast<int>(observed.size()) - 1;
  r.p = chi2_p(r.statistic, r.df);
  return r;
}

Chi2Result chi2_gof(std::initializer_list<double> observed) {
  return chi2_gof(std::span<const double>(observed.begin(), observed.size()));
}

Chi2Result chi2_2x2(const std::array<std::array<double, 2>, 2>& t, bool yates) {
  const double a = t[0][0], b = t[0][1], c = t[1][0], d = t[1][1];
  for (double v : {a, b, c, d})
    if (!(v >= 0.0)) throw ValidationError("2x2 cells must be non-negative", "table");
  const double margins = (a + b) * (c + d) * (a + c) * (b + d);
  if (!(margins > 0.0)) throw ValidationError("2x2 table has a zero row or column sum", "table");

  const double n = a + b + c + d;
  double diff = std::fabs(a * d - b * c);
  if (yates) diff = std::max(0.0, diff - n / 2.0);

  Chi2Result r;
  r.statistic = n * diff * diff / margins;
  r.df = 1;
  r.p = chi2_p(r.statistic, 1);
  r.corrected = yates;
  return r;
}

double kripp_alpha(const RatingsMatrix& r) {
  // Coincidence matrix over category labels.
  std::map<std::pair<std::string, std::string>, double> o;
  std::map<std::string, double> n_c;
  bool pairable = false;
  for (const auto& [item, ratings] : r.values) {
    const double m = static_cast<double>(ratings.size());
    if (m < 2) continue;
    pairable = true;
    for (const auto& [rater_i, vi] : ratings)
      for (const auto& [rater_j, vj] : ratings)
        if (rater_i != rater_j) o[{vi, vj}] += 1.0 / (m - 1.0);
  }
  if (!pairable) throw ValidationError("no item has two or more ratings", "ratings");

  double n = 0.0;
  for (const auto& [cell, v] : o) {
    n_c[cell.first] += v;
    n += v;
  }
  double observed = 0.0;
  for (const auto& [cell, v] : o)
    if (cell.first != cell.second) observed += v;
  double expected = 0.0;
  for (const auto& [c, nc] : n_c)
    for (const auto& [k, nk] : n_c)
      if (c != k) expected += nc * nk;
  if (expected == 0.0) return 1.0;
  return 1.0 - (n - 1.0) * observed / expected;
}

}  // namespace lexaudit
