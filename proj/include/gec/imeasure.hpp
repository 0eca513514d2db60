#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gec/m2corpus.hpp"
#include "gec/parallel.hpp"
#include "gec/text.hpp"

namespace gec::imeasure {

/// Pairwise costs for the sum-of-pairs alignment. A gap paired with a gap
/// costs nothing.
struct SopCosts {
  double match = 0.0;
  double gap = 2.0;
  double mismatch = 3.0;
};

/// Throws std::invalid_argument unless gap > match, mismatch > gap and 2·gap > mismatch.
void validate(const SopCosts& costs);

/// One aligned column; an absent token is a gap. Never all three gaps.
struct AlignmentColumn {
  std::optional<std::string> source;
  std::optional<std::string> hypothesis;
  std::optional<std::string> gold;

  bool operator==(const AlignmentColumn&) const = default;
};

double column_cost(const AlignmentColumn& column, const SopCosts& costs);

/// Globally cheapest three-way alignment under the sum-of-pairs column cost.
/// Among equal-cost alternatives the move into each cell prefers a triple
/// match, then a source/hypothesis match, then fewer gaps.
std::vector<AlignmentColumn> sop_align(std::span<const std::string> source, std::span<const std::string> hypothesis,
                                       std::span<const std::string> gold, const SopCosts& costs = {});

enum class Label { TP, TN, FP, FN, FPN };

std::string_view to_string(Label label);

struct WasClass {
  Label detection;
  Label correction;  // FPN stands for the FP+FN+FPN cell

  bool operator==(const WasClass&) const = default;
};

/// Row of the extended Writer-Annotator-System table for this column.
WasClass was_classify(const AlignmentColumn& column);

struct DetectionCounts {
  std::int64_t tp = 0, tn = 0, fp = 0, fn = 0;
  bool operator==(const DetectionCounts&) const = default;
};

/// An FPN column increments fp, fn and fpn together.
struct CorrectionCounts {
  std::int64_t tp = 0, tn = 0, fp = 0, fn = 0, fpn = 0;
  bool operator==(const CorrectionCounts&) const = default;
};

struct WasCounts {
  DetectionCounts detection;
  CorrectionCounts correction;

  void add(const WasClass& cls);
  WasCounts& operator+=(const WasCounts& other);
  bool operator==(const WasCounts&) const = default;
};

WasCounts count_columns(std::span<const AlignmentColumn> columns);

/// (w·TP + TN) / (w·(TP+FP) + TN + FN − (w+1)·FPN/2); 1 for an empty table.
double weighted_accuracy(std::int64_t tp, std::int64_t tn, std::int64_t fp, std::int64_t fn, std::int64_t fpn,
                         double w);

/// Improvement of `wacc` over the do-nothing baseline `wacc_baseline`.
double improvement(double wacc, double wacc_baseline);

struct TrackReport {
  std::int64_t tp = 0, tn = 0, fp = 0, fn = 0, fpn = 0;
  double precision = 1.0;
  double recall = 0.0;
  double f_beta = 0.0;
  double accuracy = 1.0;
  double accuracy_baseline = 1.0;
  double wacc = 1.0;
  double wacc_baseline = 1.0;
  std::optional<double> improvement;
};

struct IMeasureReport {
  TrackReport detection;
  TrackReport correction;
  double w = 2.0;
  double beta = 0.5;
  WasCounts counts;
  WasCounts baseline_counts;
};

struct Sentence {
  Tokens source;
  Tokens hypothesis;
  Tokens gold;  // the corrected reference sentence
};

struct Options {
  SopCosts costs;
  double w = 2.0;
  double beta = 0.5;
  bool compute_improvement = true;
};

/// Builds a sentence from an annotated block: gold is the block with the
/// annotator's edits applied.
Sentence sentence_from_block(const m2::AnnotationBlock& block, Tokens hypothesis, int annotator = 0);

IMeasureReport imeasure_score(std::span<const Sentence> sentences, const Options& options = {},
                              const ExecutionOptions& exec = {});

/// Reads the XML gold scheme
/// `<scripts><script><sentence><text/><error-list><error><alt ann><c start end>`
/// into annotation blocks. Error spans become edits whose action is
/// inferred from their shape; only alternatives of `annotator` are kept.
std::vector<m2::AnnotationBlock> read_gold_xml(const std::string& xml, int annotator = 0);

}  // namespace gec::imeasure
