#ifndef LDLREC_METRICS_HPP
#define LDLREC_METRICS_HPP

#include <Eigen/Core>

#include <array>
#include <map>
#include <string>
#include <vector>

namespace ldlrec {

enum class MetricKind { chebyshev, clark, canberra, cosine, intersection };

// Report order is also the JSON key order.
inline constexpr std::array<MetricKind, 5> kAllMetrics = {
    MetricKind::chebyshev, MetricKind::clark, MetricKind::canberra,
    MetricKind::cosine, MetricKind::intersection};

const char* metric_name(MetricKind kind);
MetricKind metric_from_name(const std::string& name);

// True for chebyshev/clark/canberra (lower is better), false for
// cosine/intersection (higher is better).
bool metric_is_distance(MetricKind kind);

// Standard definitions on two simplex vectors:
//   chebyshev    max_j |d_j - e_j|
//   clark        sqrt(sum_j (d_j - e_j)^2 / (d_j + e_j)^2)
//   canberra     sum_j |d_j - e_j| / (d_j + e_j)
//   cosine       d.e / (|d| |e|)
//   intersection sum_j min(d_j, e_j)
// Terms with d_j + e_j = 0 contribute zero to clark and canberra.
// Inputs must be on the simplex within 1e-6.
double row_metric(MetricKind kind, const Eigen::VectorXd& d, const Eigen::VectorXd& d_hat);

struct MetricStats {
  double mean = 0.0;
  double stddev = 0.0;         // sample standard deviation, 0 when n < 2
  std::vector<double> per_row;
};

struct MetricReport {
  std::map<MetricKind, MetricStats> per_metric;
  Eigen::Index n_rows = 0;

  const MetricStats& operator[](MetricKind kind) const { return per_metric.at(kind); }
};

MetricReport evaluate(const Eigen::MatrixXd& recovered, const Eigen::MatrixXd& truth);

// Stable key order: chebyshev, clark, canberra, cosine, intersection.
std::string metric_report_to_json(const MetricReport& report, bool include_per_row = true);

}  // namespace ldlrec

#endif
