#include "gec/ngram_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gec::ngram {

namespace {

void check_inputs(std::size_t hyps, std::size_t refs, int max_order) {
  if (hyps != refs) {
    throw NgramError("hypothesis and reference sentence counts differ (" + std::to_string(hyps) + " vs " +
                     std::to_string(refs) + ")");
  }
  if (max_order < 1) throw NgramError("max n-gram order must be >= 1");
}

double log_or_negative_infinity(double value) {
  return value > 0.0 ? std::log(value) : -std::numeric_limits<double>::infinity();
}

}  // namespace

std::int64_t NgramCounts::total() const {
  std::int64_t sum = 0;
  for (const auto& [gram, count] : counts) sum += count;
  return sum;
}

std::int64_t NgramCounts::overlap(const NgramCounts& other) const {
  std::int64_t sum = 0;
  for (const auto& [gram, count] : counts) {
    auto it = other.counts.find(gram);
    if (it != other.counts.end()) sum += std::min(count, it->second);
  }
  return sum;
}

NgramCounts NgramCounts::minus(const NgramCounts& other) const {
  NgramCounts out;
  out.order = order;
  for (const auto& [gram, count] : counts) {
    auto it = other.counts.find(gram);
    std::int64_t left = count - (it == other.counts.end() ? 0 : it->second);
    if (left > 0) out.counts.emplace(gram, left);
  }
  return out;
}

NgramCounts count_ngrams(std::span<const std::string> tokens, int order) {
  NgramCounts out;
  out.order = order;
  const auto n = static_cast<std::size_t>(order);
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++out.counts[join_tokens(tokens.subspan(i, n))];
  }
  return out;
}

BleuReport bleu(std::span<const Tokens> hypotheses, std::span<const Tokens> references, const BleuOptions& options,
                const ExecutionOptions& exec) {
  check_inputs(hypotheses.size(), references.size(), options.max_order);
  const auto orders = static_cast<std::size_t>(options.max_order);

  struct Stats {
    std::vector<std::int64_t> matches;
    std::vector<std::int64_t> totals;
  };
  auto per_sentence = map_indexed(hypotheses.size(), exec, [&](std::size_t s) {
    Stats stats{std::vector<std::int64_t>(orders, 0), std::vector<std::int64_t>(orders, 0)};
    for (std::size_t n = 1; n <= orders; ++n) {
      NgramCounts hyp = count_ngrams(hypotheses[s], static_cast<int>(n));
      NgramCounts ref = count_ngrams(references[s], static_cast<int>(n));
      stats.matches[n - 1] = hyp.overlap(ref);
      stats.totals[n - 1] = hyp.total();
    }
    return stats;
  });

  BleuReport report;
  report.max_order = options.max_order;
  report.matches.assign(orders, 0);
  report.totals.assign(orders, 0);
  for (std::size_t s = 0; s < per_sentence.size(); ++s) {
    for (std::size_t n = 0; n < orders; ++n) {
      report.matches[n] += per_sentence[s].matches[n];
      report.totals[n] += per_sentence[s].totals[n];
    }
    report.hypothesis_length += static_cast<std::int64_t>(hypotheses[s].size());
    report.reference_length += static_cast<std::int64_t>(references[s].size());
  }
  if (report.totals[0] == 0) throw NgramError("EmptyHypothesis: the hypotheses contain no tokens");

  double log_sum = 0.0;
  for (std::size_t n = 0; n < orders; ++n) {
    double p = 1.0;
    if (options.smoothing) {
      p = static_cast<double>(report.matches[n] + 1) / static_cast<double>(report.totals[n] + 1);
    } else if (report.totals[n] > 0) {
      p = static_cast<double>(report.matches[n]) / static_cast<double>(report.totals[n]);
    }
    report.precisions.push_back(p);
    log_sum += log_or_negative_infinity(p);
  }
  const double c = static_cast<double>(report.hypothesis_length);
  const double r = static_cast<double>(report.reference_length);
  report.brevity_penalty = std::exp(std::min(0.0, (c - r) / c));
  report.bleu = report.brevity_penalty * std::exp(log_sum / static_cast<double>(orders));
  return report;
}

GleuReport gleu(std::span<const Tokens> hypotheses, std::span<const Tokens> references,
                std::span<const Tokens> sources, const GleuOptions& options, const ExecutionOptions& exec) {
  check_inputs(hypotheses.size(), references.size(), options.max_order);
  if (sources.size() != hypotheses.size()) throw NgramError("source and hypothesis sentence counts differ");
  if (!(options.lambda >= 0.0)) throw NgramError("lambda must be >= 0");
  const auto orders = static_cast<std::size_t>(options.max_order);

  struct Stats {
    std::vector<double> numerators;
    std::vector<double> denominators;
  };
  auto per_sentence = map_indexed(hypotheses.size(), exec, [&](std::size_t s) {
    Stats stats{std::vector<double>(orders, 0.0), std::vector<double>(orders, 0.0)};
    for (std::size_t n = 1; n <= orders; ++n) {
      const int order = static_cast<int>(n);
      NgramCounts cand = count_ngrams(hypotheses[s], order);
      NgramCounts ref = count_ngrams(references[s], order);
      NgramCounts src = count_ngrams(sources[s], order);
      NgramCounts ref_only = ref.minus(src);
      NgramCounts src_only = src.minus(ref);
      double numerator = static_cast<double>(cand.overlap(ref) + cand.overlap(ref_only)) -
                         options.lambda * static_cast<double>(cand.overlap(src_only));
      stats.numerators[n - 1] = std::max(0.0, numerator);
      stats.denominators[n - 1] = static_cast<double>(cand.total() + ref_only.total());
    }
    return stats;
  });

  GleuReport report;
  report.max_order = options.max_order;
  report.lambda = options.lambda;
  report.weights.assign(orders, 1.0 / static_cast<double>(orders));
  report.numerators.assign(orders, 0.0);
  report.denominators.assign(orders, 0.0);
  std::int64_t unigrams = 0;
  for (std::size_t s = 0; s < per_sentence.size(); ++s) {
    for (std::size_t n = 0; n < orders; ++n) {
      report.numerators[n] += per_sentence[s].numerators[n];
      report.denominators[n] += per_sentence[s].denominators[n];
    }
    report.hypothesis_length += static_cast<std::int64_t>(hypotheses[s].size());
    report.reference_length += static_cast<std::int64_t>(references[s].size());
    unigrams += static_cast<std::int64_t>(hypotheses[s].size());
  }
  if (unigrams == 0) throw NgramError("EmptyHypothesis: the hypotheses contain no tokens");

  double weighted_log = 0.0;
  for (std::size_t n = 0; n < orders; ++n) {
    double p = 1.0;
    if (options.smoothing) {
      p = (report.numerators[n] + 1.0) / (report.denominators[n] + 1.0);
    } else if (report.denominators[n] > 0.0) {
      p = report.numerators[n] / report.denominators[n];
    }
    report.precisions.push_back(p);
    weighted_log += report.weights[n] * log_or_negative_infinity(p);
  }

  const double c = static_cast<double>(report.hypothesis_length);
  const double r = static_cast<double>(report.reference_length);
  if (options.brevity == BrevityPenalty::Standard) {
    report.brevity_penalty = c >= r ? 1.0 : std::exp(1.0 - r / c);
  } else {
    report.brevity_penalty = c > r ? 1.0 : (r > 0.0 ? std::exp((1.0 - c) / r) : 1.0);
  }
  report.gleu = report.brevity_penalty * std::exp(weighted_log);
  return report;
}

}  // namespace gec::ngram
