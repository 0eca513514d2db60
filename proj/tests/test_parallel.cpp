#include <random>
#include <stdexcept>

#include "doctest.h"
#include "gec/imeasure.hpp"
#include "gec/m2corpus.hpp"
#include "gec/maxmatch.hpp"
#include "gec/ngram_metrics.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace {

const gec::ExecutionOptions kSerial{gec::Execution::Serial, 0};
const gec::ExecutionOptions kParallel{gec::Execution::Parallel, 4};
const gec::Tokens kAlphabet{"a", "b", "c", "d"};

struct Synthetic {
  std::vector<gec::Tokens> sources, hypotheses, references;
  std::vector<gec::m2::AnnotationBlock> blocks;
};

Synthetic synthetic(std::size_t n) {
  std::mt19937 rng(51);
  Synthetic out;
  for (std::size_t s = 0; s < n; ++s) {
    gec::m2::AnnotationBlock block;
    block.id = std::to_string(s + 1);
    block.source = oracle::random_tokens(rng, 10, kAlphabet, 2);
    for (std::size_t k = 0; k < block.source.size(); ++k) {
      if (rng() % 4 == 0) block.edits.push_back({k, k + 1, gec::m2::ActionKind::Edit, kAlphabet[rng() % 4], 0});
    }
    out.sources.push_back(block.source);
    out.references.push_back(gec::m2::apply_edits(block));
    out.hypotheses.push_back(oracle::random_tokens(rng, 10, kAlphabet, 1));
    out.blocks.push_back(std::move(block));
  }
  return out;
}

}  // namespace

TEST_SUITE("parallel") {
  TEST_CASE("map_indexed keeps input order") {
    auto squares = gec::map_indexed(1000, kParallel, [](std::size_t i) { return i * i; });
    for (std::size_t i = 0; i < squares.size(); ++i) CHECK(squares[i] == i * i);
  }

  TEST_CASE("map_indexed rethrows the lowest failing index") {
    auto run = [](const gec::ExecutionOptions& exec) {
      try {
        gec::map_indexed(200, exec, [](std::size_t i) -> int {
          if (i == 37 || i == 150) throw std::runtime_error(std::to_string(i));
          return 0;
        });
      } catch (const std::runtime_error& e) {
        return std::string(e.what());
      }
      return std::string("none");
    };
    CHECK(run(kSerial) == "37");
    CHECK(run(kParallel) == "37");
  }

  TEST_CASE("corpus statistics agree") {
    auto data = synthetic(300);
    CHECK(gec::m2::corpus_stats(data.blocks, kSerial) == gec::m2::corpus_stats(data.blocks, kParallel));
  }

  TEST_CASE("M2 scores agree") {
    auto data = synthetic(300);
    std::vector<gec::maxmatch::Sentence> corpus;
    for (std::size_t s = 0; s < data.blocks.size(); ++s) {
      corpus.push_back({data.sources[s], data.hypotheses[s], data.blocks[s].edits});
    }
    gec::maxmatch::Options options;
    options.annotator = -1;
    auto serial = gec::maxmatch::score_corpus(corpus, options, kSerial);
    auto parallel = gec::maxmatch::score_corpus(corpus, options, kParallel);
    CHECK(serial.report == parallel.report);
    for (std::size_t s = 0; s < corpus.size(); ++s) {
      CHECK(serial.sentences[s].extraction.edits == parallel.sentences[s].extraction.edits);
    }
  }

  TEST_CASE("I-measure counts agree") {
    auto data = synthetic(300);
    std::vector<gec::imeasure::Sentence> corpus;
    for (std::size_t s = 0; s < data.sources.size(); ++s) {
      corpus.push_back({data.sources[s], data.hypotheses[s], data.references[s]});
    }
    auto serial = gec::imeasure::imeasure_score(corpus, {}, kSerial);
    auto parallel = gec::imeasure::imeasure_score(corpus, {}, kParallel);
    CHECK(serial.counts == parallel.counts);
    CHECK(serial.baseline_counts == parallel.baseline_counts);
    CHECK(serial.correction.wacc == parallel.correction.wacc);
  }

  TEST_CASE("BLEU and GLEU agree") {
    auto data = synthetic(300);
    auto b_serial = gec::ngram::bleu(data.hypotheses, data.references, {}, kSerial);
    auto b_parallel = gec::ngram::bleu(data.hypotheses, data.references, {}, kParallel);
    CHECK(b_serial.bleu == b_parallel.bleu);
    CHECK(b_serial.matches == b_parallel.matches);
    gec::ngram::GleuOptions options;
    options.lambda = 0.5;
    auto g_serial = gec::ngram::gleu(data.hypotheses, data.references, data.sources, options, kSerial);
    auto g_parallel = gec::ngram::gleu(data.hypotheses, data.references, data.sources, options, kParallel);
    CHECK(g_serial.gleu == g_parallel.gleu);
    CHECK(g_serial.numerators == g_parallel.numerators);
  }
}
