#include "gec/imeasure.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

#include "gec/metrics.hpp"

namespace gec::imeasure {

namespace {

constexpr double kTieTolerance = 1e-9;

constexpr int kGap = -1;

double pair_cost(int a, int b, const SopCosts& costs) {
  if (a == kGap && b == kGap) return 0.0;
  if (a == kGap || b == kGap) return costs.gap;
  return a == b ? costs.match : costs.mismatch;
}

double triple_cost(int s, int h, int g, const SopCosts& costs) {
  return pair_cost(s, h, costs) + pair_cost(s, g, costs) + pair_cost(h, g, costs);
}

// Lower is preferred among equal-cost moves.
std::tuple<int, int, int, int> move_rank(int move, int s, int h, int g) {
  const bool triple = s != kGap && s == h && h == g;
  const bool src_hyp = s != kGap && s == h;
  const int gaps = (s == kGap) + (h == kGap) + (g == kGap);
  return {triple ? 0 : 1, src_hyp ? 0 : 1, gaps, 7 - move};
}

bool equal(const std::optional<std::string>& a, const std::optional<std::string>& b) {
  return a && b && *a == *b;
}

void fill_track(TrackReport& track, std::int64_t tp, std::int64_t tn, std::int64_t fp, std::int64_t fn,
                std::int64_t fpn, const DetectionCounts& base_det, std::int64_t base_fpn, const Options& options) {
  track.tp = tp;
  track.tn = tn;
  track.fp = fp;
  track.fn = fn;
  track.fpn = fpn;
  track.precision = gec::precision(tp, fp);
  track.recall = gec::recall(tp, fn);
  track.f_beta = gec::f_beta(track.precision, track.recall, options.beta);
  track.accuracy = gec::accuracy(tp, tn, fp, fn);
  track.accuracy_baseline = gec::accuracy(base_det.tp, base_det.tn, base_det.fp, base_det.fn);
  track.wacc = weighted_accuracy(tp, tn, fp, fn, fpn, options.w);
  track.wacc_baseline =
      weighted_accuracy(base_det.tp, base_det.tn, base_det.fp, base_det.fn, base_fpn, options.w);
  if (options.compute_improvement) {
    track.improvement = improvement(track.wacc, track.wacc_baseline);
  } else {
    track.improvement.reset();
  }
}

}  // namespace

void validate(const SopCosts& costs) {
  if (!(costs.match >= 0.0)) throw std::invalid_argument("c_match must be >= 0");
  if (!(costs.gap > costs.match)) throw std::invalid_argument("c_gap must exceed c_match");
  if (!(costs.mismatch > costs.gap)) throw std::invalid_argument("c_mismatch must exceed c_gap");
  if (!(2.0 * costs.gap > costs.mismatch)) throw std::invalid_argument("2*c_gap must exceed c_mismatch");
}

double column_cost(const AlignmentColumn& column, const SopCosts& costs) {
  auto pair = [&](const std::optional<std::string>& a, const std::optional<std::string>& b) {
    if (!a && !b) return 0.0;
    if (!a || !b) return costs.gap;
    return *a == *b ? costs.match : costs.mismatch;
  };
  return pair(column.source, column.hypothesis) + pair(column.source, column.gold) +
         pair(column.hypothesis, column.gold);
}

std::vector<AlignmentColumn> sop_align(std::span<const std::string> source, std::span<const std::string> hypothesis,
                                       std::span<const std::string> gold, const SopCosts& costs) {
  validate(costs);
  const std::size_t n = source.size();
  const std::size_t m = hypothesis.size();
  const std::size_t p = gold.size();
  const std::size_t plane = (m + 1) * (p + 1);

  // Interned ids make token comparison an integer compare; -1 is a gap.
  std::unordered_map<std::string_view, int> ids;
  auto intern = [&](std::span<const std::string> tokens) {
    std::vector<int> out;
    out.reserve(tokens.size());
    for (const std::string& t : tokens) out.push_back(ids.try_emplace(t, static_cast<int>(ids.size())).first->second);
    return out;
  };
  const std::vector<int> src = intern(source);
  const std::vector<int> hyp = intern(hypothesis);
  const std::vector<int> ref = intern(gold);

  // Move bits: 1 = consume source, 2 = hypothesis, 4 = gold.
  std::vector<unsigned char> moves((n + 1) * plane, 0);
  std::vector<double> previous(plane, 0.0);
  std::vector<double> current(plane, 0.0);
  constexpr double kInf = std::numeric_limits<double>::infinity();

  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = 0; j <= m; ++j) {
      for (std::size_t k = 0; k <= p; ++k) {
        const std::size_t at = j * (p + 1) + k;
        if (i == 0 && j == 0 && k == 0) {
          current[at] = 0.0;
          continue;
        }
        double best = kInf;
        int best_move = 0;
        for (int move = 1; move <= 7; ++move) {
          const bool ds = move & 1, dh = move & 2, dg = move & 4;
          if ((ds && i == 0) || (dh && j == 0) || (dg && k == 0)) continue;
          const int s = ds ? src[i - 1] : kGap;
          const int h = dh ? hyp[j - 1] : kGap;
          const int g = dg ? ref[k - 1] : kGap;
          const std::size_t from = (j - (dh ? 1 : 0)) * (p + 1) + (k - (dg ? 1 : 0));
          const double base = ds ? previous[from] : current[from];
          const double cost = base + triple_cost(s, h, g, costs);
          if (cost < best - kTieTolerance) {
            best = cost;
            best_move = move;
          } else if (cost <= best + kTieTolerance) {
            const int bs = best_move & 1 ? src[i - 1] : kGap;
            const int bh = best_move & 2 ? hyp[j - 1] : kGap;
            const int bg = best_move & 4 ? ref[k - 1] : kGap;
            if (move_rank(move, s, h, g) < move_rank(best_move, bs, bh, bg)) {
              best = std::min(best, cost);
              best_move = move;
            }
          }
        }
        current[at] = best;
        moves[i * plane + at] = static_cast<unsigned char>(best_move);
      }
    }
    std::swap(previous, current);
  }

  std::vector<AlignmentColumn> columns;
  std::size_t i = n, j = m, k = p;
  while (i + j + k > 0) {
    const int move = moves[i * plane + j * (p + 1) + k];
    AlignmentColumn column;
    if (move & 1) column.source = source[--i];
    if (move & 2) column.hypothesis = hypothesis[--j];
    if (move & 4) column.gold = gold[--k];
    columns.push_back(std::move(column));
  }
  std::reverse(columns.begin(), columns.end());
  return columns;
}

std::string_view to_string(Label label) {
  switch (label) {
    case Label::TP: return "TP";
    case Label::TN: return "TN";
    case Label::FP: return "FP";
    case Label::FN: return "FN";
    case Label::FPN: return "FPN";
  }
  return "?";
}

WasClass was_classify(const AlignmentColumn& column) {
  const auto& s = column.source;
  const auto& h = column.hypothesis;
  const auto& g = column.gold;
  if (s && h && g) {
    if (*s == *h) return *h == *g ? WasClass{Label::TN, Label::TN} : WasClass{Label::FN, Label::FN};
    if (*s == *g) return {Label::FP, Label::FP};
    return equal(h, g) ? WasClass{Label::TP, Label::TP} : WasClass{Label::TP, Label::FPN};
  }
  if (s && h) return *s == *h ? WasClass{Label::FN, Label::FN} : WasClass{Label::TP, Label::FPN};
  if (s && g) return *s == *g ? WasClass{Label::FP, Label::FP} : WasClass{Label::TP, Label::FPN};
  if (s) return {Label::TP, Label::TP};
  if (h && g) return *h == *g ? WasClass{Label::TP, Label::TP} : WasClass{Label::TP, Label::FPN};
  if (h) return {Label::FP, Label::FP};
  if (g) return {Label::FN, Label::FN};
  throw std::logic_error("UnmatchedPattern: alignment column with three gaps");
}

void WasCounts::add(const WasClass& cls) {
  switch (cls.detection) {
    case Label::TP: ++detection.tp; break;
    case Label::TN: ++detection.tn; break;
    case Label::FP: ++detection.fp; break;
    case Label::FN: ++detection.fn; break;
    case Label::FPN: throw std::logic_error("detection has no FPN class");
  }
  switch (cls.correction) {
    case Label::TP: ++correction.tp; break;
    case Label::TN: ++correction.tn; break;
    case Label::FP: ++correction.fp; break;
    case Label::FN: ++correction.fn; break;
    case Label::FPN:
      ++correction.fp;
      ++correction.fn;
      ++correction.fpn;
      break;
  }
}

WasCounts& WasCounts::operator+=(const WasCounts& other) {
  detection.tp += other.detection.tp;
  detection.tn += other.detection.tn;
  detection.fp += other.detection.fp;
  detection.fn += other.detection.fn;
  correction.tp += other.correction.tp;
  correction.tn += other.correction.tn;
  correction.fp += other.correction.fp;
  correction.fn += other.correction.fn;
  correction.fpn += other.correction.fpn;
  return *this;
}

WasCounts count_columns(std::span<const AlignmentColumn> columns) {
  WasCounts counts;
  for (const AlignmentColumn& column : columns) counts.add(was_classify(column));
  return counts;
}

double weighted_accuracy(std::int64_t tp, std::int64_t tn, std::int64_t fp, std::int64_t fn, std::int64_t fpn,
                         double w) {
  const double denominator = w * static_cast<double>(tp + fp) + static_cast<double>(tn + fn) -
                             (w + 1.0) * static_cast<double>(fpn) / 2.0;
  if (denominator <= 0.0) return 1.0;
  return (w * static_cast<double>(tp) + static_cast<double>(tn)) / denominator;
}

double improvement(double wacc, double wacc_baseline) {
  if (wacc > wacc_baseline) return (wacc - wacc_baseline) / (1.0 - wacc_baseline);
  if (wacc < wacc_baseline) return wacc / wacc_baseline - 1.0;
  return 0.0;
}

Sentence sentence_from_block(const m2::AnnotationBlock& block, Tokens hypothesis, int annotator) {
  return Sentence{block.source, std::move(hypothesis), m2::apply_edits(block, annotator)};
}

IMeasureReport imeasure_score(std::span<const Sentence> sentences, const Options& options,
                              const ExecutionOptions& exec) {
  validate(options.costs);
  if (!(options.w > 1.0)) throw std::invalid_argument("w must be > 1");
  if (!(options.beta > 0.0)) throw std::invalid_argument("beta must be > 0");

  struct PerSentence {
    WasCounts system;
    WasCounts baseline;
  };
  auto per_sentence = map_indexed(sentences.size(), exec, [&](std::size_t s) {
    const Sentence& sentence = sentences[s];
    PerSentence out;
    out.system = count_columns(sop_align(sentence.source, sentence.hypothesis, sentence.gold, options.costs));
    out.baseline = count_columns(sop_align(sentence.source, sentence.source, sentence.gold, options.costs));
    return out;
  });

  IMeasureReport report;
  report.w = options.w;
  report.beta = options.beta;
  for (const PerSentence& part : per_sentence) {
    report.counts += part.system;
    report.baseline_counts += part.baseline;
  }

  const auto& det = report.counts.detection;
  fill_track(report.detection, det.tp, det.tn, det.fp, det.fn, 0, report.baseline_counts.detection, 0, options);

  const auto& cor = report.counts.correction;
  const auto& base_cor = report.baseline_counts.correction;
  DetectionCounts base_cor_4{base_cor.tp, base_cor.tn, base_cor.fp, base_cor.fn};
  fill_track(report.correction, cor.tp, cor.tn, cor.fp, cor.fn, cor.fpn, base_cor_4, base_cor.fpn, options);
  return report;
}

}  // namespace gec::imeasure
