#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <span>
#include <string>
#include <vector>

#include "gec/parallel.hpp"
#include "gec/text.hpp"

namespace gec::ngram {

/// Multiset of the n-grams of one order. Keys are the n tokens joined by a
/// single space, which is unambiguous because tokens hold no whitespace.
struct NgramCounts {
  int order = 1;
  std::map<std::string, std::int64_t> counts;

  std::int64_t total() const;
  /// Size of the multiset intersection (clipped matches).
  std::int64_t overlap(const NgramCounts& other) const;
  /// Multiset difference this \ other.
  NgramCounts minus(const NgramCounts& other) const;
};

NgramCounts count_ngrams(std::span<const std::string> tokens, int order);

class NgramError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BleuReport {
  int max_order = 4;
  std::vector<double> precisions;          // p_1 .. p_N
  std::vector<std::int64_t> matches;       // clipped matches per order
  std::vector<std::int64_t> totals;        // hypothesis n-grams per order
  std::int64_t hypothesis_length = 0;
  std::int64_t reference_length = 0;
  double brevity_penalty = 1.0;
  double bleu = 0.0;
};

struct BleuOptions {
  int max_order = 4;
  /// Add one to numerator and denominator of every order.
  bool smoothing = false;
};

/// Corpus BLEU against a single reference per sentence. An order with no
/// hypothesis n-grams at all has precision 1. Throws NgramError when the
/// hypotheses hold no tokens or sentence counts differ.
BleuReport bleu(std::span<const Tokens> hypotheses, std::span<const Tokens> references, const BleuOptions& options = {},
                const ExecutionOptions& exec = {});

enum class BrevityPenalty {
  /// 1 if c >= r, else exp(1 - r/c).
  Standard,
  /// 1 if c > r, else exp((1 - c)/r), exactly as the GLEU formula is usually printed.
  Printed,
};

struct GleuOptions {
  int max_order = 4;
  double lambda = 0.0;
  bool smoothing = false;
  BrevityPenalty brevity = BrevityPenalty::Standard;
};

struct GleuReport {
  int max_order = 4;
  double lambda = 0.0;
  std::vector<double> weights;
  std::vector<double> precisions;       // p'_n
  std::vector<double> numerators;       // corpus sums, after per-sentence clipping at 0
  std::vector<double> denominators;
  std::int64_t hypothesis_length = 0;
  std::int64_t reference_length = 0;
  double brevity_penalty = 1.0;
  double gleu = 0.0;
};

/// Corpus GLEU of candidates C against references R and sources S. Per
/// sentence and order:
///   numerator   = |C∩R| + |C∩(R\S)| − λ·|C∩(S\R)|, clipped at 0
///   denominator = |C| + |R\S|
/// where ∩ and \ are multiset operations. Numerators and denominators are
/// summed over the corpus before dividing; weights are uniform 1/N.
GleuReport gleu(std::span<const Tokens> hypotheses, std::span<const Tokens> references,
                std::span<const Tokens> sources, const GleuOptions& options = {}, const ExecutionOptions& exec = {});

}  // namespace gec::ngram
