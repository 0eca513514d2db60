#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gec/align.hpp"
#include "gec/m2corpus.hpp"
#include "gec/parallel.hpp"
#include "gec/text.hpp"

namespace gec::maxmatch {

/// A phrase-level edit over source tokens [start, end). `replacement` is
/// whitespace-normalized; empty means deletion.
struct SystemEdit {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string original;
  std::string replacement;

  bool operator==(const SystemEdit& other) const {
    return start == other.start && end == other.end && replacement == other.replacement;
  }
  auto operator<=>(const SystemEdit& other) const {
    if (auto c = start <=> other.start; c != 0) return c;
    if (auto c = end <=> other.end; c != 0) return c;
    return replacement <=> other.replacement;
  }
};

struct Counts {
  std::int64_t tp = 0;
  std::int64_t proposed = 0;
  std::int64_t gold = 0;

  Counts& operator+=(const Counts& other) {
    tp += other.tp;
    proposed += other.proposed;
    gold += other.gold;
    return *this;
  }
  bool operator==(const Counts&) const = default;
};

struct M2Report {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  double precision = 1.0;
  double recall = 0.0;
  double f_beta = 0.0;
  double beta = 0.5;

  bool operator==(const M2Report&) const = default;
};

M2Report make_report(const Counts& counts, double beta);

/// Micro-averaged P/R/F_beta of explicit edit sets, one (gold, predicted)
/// pair per sentence: P = sum|G∩P| / sum|P|, R = sum|G∩P| / sum|G|.
M2Report score_edit_sets(std::span<const std::pair<std::vector<SystemEdit>, std::vector<SystemEdit>>> sentences,
                         double beta);

/// Gold edits as comparable system edits. Edits whose correction equals the
/// covered source text are dropped, duplicates collapse.
std::vector<SystemEdit> gold_as_system_edits(std::span<const std::string> source, std::span<const m2::Edit> gold);

struct Extraction {
  std::vector<SystemEdit> edits;
  Counts counts;
  std::size_t lattice_edges = 0;
};

/// Reweights the lattice of (source, hypothesis) so that every edge equal to
/// a gold edit costs -(u+1)·|E|, then takes the cheapest source-to-sink path.
/// The changed edges on that path are the system edits; they overlap the gold
/// set maximally. Ties prefer fewer non-gold edits.
Extraction extract_edits(std::span<const std::string> source, std::span<const std::string> hypothesis,
                         std::span<const m2::Edit> gold, int max_unchanged);

inline std::vector<SystemEdit> m2_extract_edits(std::span<const std::string> source,
                                                std::span<const std::string> hypothesis,
                                                std::span<const m2::Edit> gold, int max_unchanged = 2) {
  return extract_edits(source, hypothesis, gold, max_unchanged).edits;
}

/// Applies non-overlapping system edits to the source.
Tokens apply_system_edits(std::span<const std::string> source, std::span<const SystemEdit> edits);

struct Sentence {
  Tokens source;
  Tokens hypothesis;
  std::vector<m2::Edit> gold;  // any annotators
};

struct Options {
  double beta = 0.5;
  int max_unchanged = 2;
  /// Annotator whose edits form the gold set; -1 picks, per sentence, the
  /// annotator that maximizes the running corpus F.
  int annotator = 0;
};

struct SentenceResult {
  Extraction extraction;
  int annotator = 0;
};

struct CorpusResult {
  M2Report report;
  std::vector<SentenceResult> sentences;
};

CorpusResult score_corpus(std::span<const Sentence> sentences, const Options& options,
                          const ExecutionOptions& exec = {});

inline M2Report m2_score(std::span<const Sentence> sentences, double beta = 0.5, int max_unchanged = 2,
                         const ExecutionOptions& exec = {}) {
  return score_corpus(sentences, Options{beta, max_unchanged, 0}, exec).report;
}

}  // namespace gec::maxmatch
