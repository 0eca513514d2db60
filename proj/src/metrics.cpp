#include "gec/metrics.hpp"

namespace gec {

double precision(std::int64_t tp, std::int64_t fp) {
  if (tp + fp == 0) return 1.0;
  return static_cast<double>(tp) / static_cast<double>(tp + fp);
}

double recall(std::int64_t tp, std::int64_t fn) {
  if (tp + fn == 0) return 0.0;
  return static_cast<double>(tp) / static_cast<double>(tp + fn);
}

double f_beta(double p, double r, double beta) {
  if (p * r == 0.0) return 0.0;
  double b2 = beta * beta;
  return (1.0 + b2) * p * r / (b2 * p + r);
}

double accuracy(std::int64_t tp, std::int64_t tn, std::int64_t fp, std::int64_t fn) {
  std::int64_t total = tp + tn + fp + fn;
  if (total == 0) return 1.0;
  return static_cast<double>(tp + tn) / static_cast<double>(total);
}

}  // namespace gec
