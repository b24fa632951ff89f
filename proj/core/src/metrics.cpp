#include "ldlrec/metrics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace ldlrec {

namespace {

constexpr double kSimplexTolerance = 1e-6;

void check_simplex(const Eigen::VectorXd& v, const char* which) {
  for (Eigen::Index j = 0; j < v.size(); ++j)
    if (v[j] < -kSimplexTolerance || v[j] > 1.0 + kSimplexTolerance) {
      std::ostringstream msg;
      msg << which << " entry " << v[j] << " outside [0, 1]";
      throw std::invalid_argument(msg.str());
    }
  if (std::abs(v.sum() - 1.0) > kSimplexTolerance) {
    std::ostringstream msg;
    msg << which << " does not sum to 1 (sum " << v.sum() << ")";
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

const char* metric_name(MetricKind kind) {
  switch (kind) {
    case MetricKind::chebyshev: return "chebyshev";
    case MetricKind::clark: return "clark";
    case MetricKind::canberra: return "canberra";
    case MetricKind::cosine: return "cosine";
    case MetricKind::intersection: return "intersection";
  }
  throw std::logic_error("unknown metric kind");
}

MetricKind metric_from_name(const std::string& name) {
  for (MetricKind kind : kAllMetrics)
    if (name == metric_name(kind)) return kind;
  throw std::invalid_argument("unknown metric name: " + name);
}

bool metric_is_distance(MetricKind kind) {
  return kind == MetricKind::chebyshev || kind == MetricKind::clark ||
         kind == MetricKind::canberra;
}

double row_metric(MetricKind kind, const Eigen::VectorXd& d, const Eigen::VectorXd& d_hat) {
  if (d.size() != d_hat.size()) throw std::invalid_argument("row_metric: length mismatch");
  check_simplex(d, "first argument");
  check_simplex(d_hat, "second argument");

  switch (kind) {
    case MetricKind::chebyshev:
      return (d - d_hat).cwiseAbs().maxCoeff();
    case MetricKind::clark: {
      double acc = 0.0;
      for (Eigen::Index j = 0; j < d.size(); ++j) {
        const double sum = d[j] + d_hat[j];
        if (sum == 0.0) continue;  // both zero: no discrepancy
        const double r = (d[j] - d_hat[j]) / sum;
        acc += r * r;
      }
      return std::sqrt(acc);
    }
    case MetricKind::canberra: {
      double acc = 0.0;
      for (Eigen::Index j = 0; j < d.size(); ++j) {
        const double sum = d[j] + d_hat[j];
        if (sum == 0.0) continue;
        acc += std::abs(d[j] - d_hat[j]) / sum;
      }
      return acc;
    }
    case MetricKind::cosine:
      return d.dot(d_hat) / (d.norm() * d_hat.norm());
    case MetricKind::intersection:
      return d.cwiseMin(d_hat).sum();
  }
  throw std::logic_error("unknown metric kind");
}

MetricReport evaluate(const Eigen::MatrixXd& recovered, const Eigen::MatrixXd& truth) {
  if (recovered.rows() != truth.rows() || recovered.cols() != truth.cols())
    throw std::invalid_argument("evaluate: shape mismatch");

  MetricReport report;
  report.n_rows = recovered.rows();
  for (MetricKind kind : kAllMetrics) {
    MetricStats stats;
    stats.per_row.reserve(static_cast<std::size_t>(recovered.rows()));
    double sum = 0.0;
    for (Eigen::Index i = 0; i < recovered.rows(); ++i) {
      const double v =
          row_metric(kind, recovered.row(i).transpose(), truth.row(i).transpose());
      stats.per_row.push_back(v);
      sum += v;
    }
    const double n = static_cast<double>(recovered.rows());
    stats.mean = sum / n;
    if (recovered.rows() > 1) {
      double sq = 0.0;
      for (double v : stats.per_row) sq += (v - stats.mean) * (v - stats.mean);
      stats.stddev = std::sqrt(sq / (n - 1.0));
    }
    report.per_metric.emplace(kind, std::move(stats));
  }
  return report;
}

std::string metric_report_to_json(const MetricReport& report, bool include_per_row) {
  nlohmann::ordered_json j;
  j["n_rows"] = report.n_rows;
  for (MetricKind kind : kAllMetrics) {
    const MetricStats& stats = report[kind];
    nlohmann::ordered_json entry;
    entry["mean"] = stats.mean;
    entry["std"] = stats.stddev;
    if (include_per_row) entry["per_row"] = stats.per_row;
    j[metric_name(kind)] = std::move(entry);
  }
  return j.dump(2);
}

}  // namespace ldlrec
