#include "ldlrec/ttest.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ldlrec {

namespace {

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 300;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double dof) {
  if (!(dof > 0.0)) throw std::invalid_argument("degrees of freedom must be positive");
  if (std::isinf(t)) return t < 0.0 ? 0.0 : 1.0;
  const double x = dof / (dof + t * t);
  const double tail = 0.5 * regularized_incomplete_beta(0.5 * dof, 0.5, x);
  return t <= 0.0 ? tail : 1.0 - tail;
}

TTestResult paired_ttest_one_sided(const std::vector<double>& scores_a,
                                   const std::vector<double>& scores_b, double level) {
  if (scores_a.size() != scores_b.size())
    throw std::invalid_argument("paired t-test: length mismatch");
  if (scores_a.size() < 2) throw std::invalid_argument("paired t-test: fewer than 2 pairs");
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("level must be in (0, 1)");

  const std::size_t n = scores_a.size();
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += scores_a[i] - scores_b[i];
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = scores_a[i] - scores_b[i] - mean;
    var += d * d;
  }
  var /= static_cast<double>(n - 1);

  TTestResult result;
  if (var == 0.0) {
    if (mean == 0.0) return {0.0, 0.5, false};
    // empirical CDF limit: constant nonzero differences
    result.t_stat = mean < 0.0 ? -std::numeric_limits<double>::infinity()
                               : std::numeric_limits<double>::infinity();
    result.p_value = mean < 0.0 ? 0.0 : 1.0;
    result.significant = result.p_value < level;
    return result;
  }

  const double se = std::sqrt(var / static_cast<double>(n));
  result.t_stat = mean / se;
  result.p_value = student_t_cdf(result.t_stat, static_cast<double>(n - 1));
  result.significant = result.p_value < level;
  return result;
}

}  // namespace ldlrec
