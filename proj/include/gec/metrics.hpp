#pragma once

#include <cstdint>

namespace gec {

// Empty-denominator conventions shared by every scorer: precision is 1 when
// nothing was proposed, recall is 0 when nothing was expected, and F is 0
// whenever P·R is 0.
double precision(std::int64_t tp, std::int64_t fp);
double recall(std::int64_t tp, std::int64_t fn);
double f_beta(double precision, double recall, double beta);

/// (TP+TN)/(TP+TN+FP+FN); 1 for an empty table.
double accuracy(std::int64_t tp, std::int64_t tn, std::int64_t fp, std::int64_t fn);

}  // namespace gec
