#include <random>

#include "doctest.h"
#include "gec/maxmatch.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace gec::maxmatch;
using gec::m2::ActionKind;
using gec::m2::Edit;
using testing::toks;

namespace {

const gec::Tokens kSource = toks("the greater the Levenshtein distances , more different strings are .");
const gec::Tokens kHypothesis = toks("the greater the Levenshtein distances , the more different strings are .");
const std::vector<Edit> kGold{{4, 5, ActionKind::Edit, "distance", 0}, {6, 7, ActionKind::Edit, "the more", 0}};
const gec::Tokens kAlphabet{"a", "b", "c"};

using testing::oracle_gold;
using testing::random_gold;

}  // namespace

TEST_SUITE("maxmatch") {
  TEST_CASE("worked example extracts the gold phrase edit") {
    Extraction result = extract_edits(kSource, kHypothesis, kGold, 2);
    REQUIRE(result.edits.size() == 1);
    CHECK(result.edits[0].start == 6);
    CHECK(result.edits[0].end == 7);
    CHECK(result.edits[0].original == "more");
    CHECK(result.edits[0].replacement == "the more");
    CHECK(result.counts == Counts{1, 1, 2});
    M2Report report = make_report(result.counts, 0.5);
    CHECK(report.precision == doctest::Approx(1.0));
    CHECK(report.recall == doctest::Approx(0.5));
    CHECK(report.f_beta == doctest::Approx(5.0 / 6.0));
  }

  TEST_CASE("without a phrase window the bare insertion is extracted") {
    Extraction result = extract_edits(kSource, kHypothesis, kGold, 0);
    REQUIRE(result.edits.size() == 1);
    CHECK(result.edits[0] == SystemEdit{6, 6, "", "the"});
    CHECK(result.counts == Counts{0, 1, 2});
  }

  TEST_CASE("identity hypothesis proposes nothing") {
    Extraction result = extract_edits(kSource, kSource, kGold, 2);
    CHECK(result.edits.empty());
    M2Report report = make_report(result.counts, 0.5);
    CHECK(report.precision == 1.0);
    CHECK(report.recall == 0.0);
    CHECK(report.f_beta == 0.0);
  }

  TEST_CASE("explicit edit sets of the two-system comparison") {
    // "The burgening cherry trees are a signe that spring ishere ."
    std::vector<SystemEdit> gold{{1, 2, "burgening", "burgeoning"}, {6, 7, "signe", "sign"}, {9, 10, "ishere", "is here"}};
    std::vector<SystemEdit> hyp_b{{1, 2, "burgening", "burgeoning"},
                                  {6, 7, "signe", "sign"},
                                  {9, 11, "ishere .", "is here ."},
                                  {10, 11, ".", ""}};
    std::vector<SystemEdit> hyp_a{{1, 2, "burgening", "burning"}, {5, 7, "a signe", "assigned"}};
    std::vector<std::pair<std::vector<SystemEdit>, std::vector<SystemEdit>>> b{{gold, hyp_b}};
    M2Report report = score_edit_sets(b, 0.5);
    CHECK(report.tp == 2);
    CHECK(report.fp == 2);
    CHECK(report.fn == 1);
    CHECK(report.precision == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(report.recall == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(report.f_beta == doctest::Approx(10.0 / 19.0).epsilon(1e-12));

    std::vector<std::pair<std::vector<SystemEdit>, std::vector<SystemEdit>>> a{{gold, hyp_a}};
    M2Report report_a = score_edit_sets(a, 0.5);
    CHECK(report_a.tp == 0);
    CHECK(report_a.f_beta == 0.0);
  }

  TEST_CASE("gold conversion drops no-ops and duplicates") {
    gec::Tokens source = toks("a b c");
    std::vector<Edit> gold{{0, 1, ActionKind::Edit, "a", 0},
                           {1, 2, ActionKind::Edit, "x", 0},
                           {1, 2, ActionKind::Other, " x ", 1},
                           {3, 3, ActionKind::AddAfter, "d", 0}};
    auto edits = gold_as_system_edits(source, gold);
    REQUIRE(edits.size() == 2);
    CHECK(edits[0] == SystemEdit{1, 2, "b", "x"});
    CHECK(edits[1] == SystemEdit{3, 3, "", "d"});
  }

  TEST_CASE("extracted edits rebuild the hypothesis") {
    std::mt19937 rng(21);
    for (int trial = 0; trial < 500; ++trial) {
      auto source = oracle::random_tokens(rng, 6, kAlphabet);
      auto hypothesis = oracle::random_tokens(rng, 6, kAlphabet);
      auto gold = random_gold(rng, source);
      Extraction result = extract_edits(source, hypothesis, gold, 2);
      CHECK(apply_system_edits(source, result.edits) == hypothesis);
      for (const SystemEdit& e : result.edits) CHECK(e.original != e.replacement);
    }
  }

  TEST_CASE("overlap equals the brute-force maximum over all lattice paths") {
    std::mt19937 rng(22);
    for (int trial = 0; trial < 2000; ++trial) {
      auto source = oracle::random_tokens(rng, 5, kAlphabet);
      auto hypothesis = oracle::random_tokens(rng, 5, kAlphabet);
      auto gold = random_gold(rng, source);
      const int u = static_cast<int>(rng() % 3);
      Extraction result = extract_edits(source, hypothesis, gold, u);
      auto expected = oracle::max_overlap(source, hypothesis, u, oracle_gold(source, gold));
      CHECK(result.counts.tp == static_cast<std::int64_t>(expected));
      CHECK(result.counts.gold == static_cast<std::int64_t>(oracle_gold(source, gold).size()));
    }
  }

  TEST_CASE("hypothesis equal to the gold correction is rebuilt from its edits") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 300; ++trial) {
      auto source = oracle::random_tokens(rng, 5, kAlphabet, 1);
      auto gold = random_gold(rng, source);
      gec::m2::AnnotationBlock block{"1", source, gold};
      gec::Tokens corrected = gec::m2::apply_edits(block);
      Extraction result = extract_edits(source, corrected, gold, 2);
      // A gold edit off every minimal alignment cannot be matched, so only
      // the upper bound holds in general.
      CHECK(result.counts.tp <= result.counts.gold);
      CHECK(apply_system_edits(source, result.edits) == corrected);
    }
  }

  TEST_CASE("adding a gold edit never lowers the overlap") {
    std::mt19937 rng(24);
    for (int trial = 0; trial < 300; ++trial) {
      auto source = oracle::random_tokens(rng, 5, kAlphabet, 1);
      auto hypothesis = oracle::random_tokens(rng, 5, kAlphabet);
      auto gold = random_gold(rng, source);
      auto smaller = gold;
      if (!smaller.empty()) smaller.pop_back();
      CHECK(extract_edits(source, hypothesis, smaller, 2).counts.tp <=
            extract_edits(source, hypothesis, gold, 2).counts.tp);
    }
  }

  TEST_CASE("scores stay within bounds") {
    std::mt19937 rng(25);
    std::vector<Sentence> corpus;
    for (int s = 0; s < 200; ++s) {
      auto source = oracle::random_tokens(rng, 6, kAlphabet, 1);
      corpus.push_back({source, oracle::random_tokens(rng, 6, kAlphabet), random_gold(rng, source)});
    }
    for (double beta : {0.5, 1.0, 2.0}) {
      M2Report report = m2_score(corpus, beta);
      CHECK(report.precision >= 0.0);
      CHECK(report.precision <= 1.0);
      CHECK(report.recall >= 0.0);
      CHECK(report.recall <= 1.0);
      CHECK(report.f_beta >= std::min(report.precision, report.recall) - 1e-12);
      CHECK(report.f_beta <= std::max(report.precision, report.recall) + 1e-12);
    }
  }

  TEST_CASE("annotator selection maximizes the running F") {
    Sentence sentence{toks("a b"), toks("a c"),
                      {{1, 2, ActionKind::Edit, "d", 0}, {1, 2, ActionKind::Edit, "c", 1}}};
    std::vector<Sentence> corpus{sentence};
    CorpusResult fixed = score_corpus(corpus, Options{0.5, 2, 0});
    CHECK(fixed.report.tp == 0);
    CorpusResult best = score_corpus(corpus, Options{0.5, 2, -1});
    CHECK(best.sentences[0].annotator == 1);
    CHECK(best.report.tp == 1);
    CHECK(best.report.f_beta == doctest::Approx(1.0));

    // Ties go to the lowest annotator id.
    Sentence tie{toks("a b"), toks("a b"), {{1, 2, ActionKind::Edit, "d", 0}, {1, 2, ActionKind::Edit, "e", 3}}};
    std::vector<Sentence> tied{tie};
    CHECK(score_corpus(tied, Options{0.5, 2, -1}).sentences[0].annotator == 0);
  }

  TEST_CASE("corpus counts are summed before dividing") {
    std::vector<Sentence> corpus{{kSource, kHypothesis, kGold}, {toks("x y"), toks("x z"), {{1, 2, ActionKind::Edit, "z", 0}}}};
    M2Report report = m2_score(corpus);
    CHECK(report.tp == 2);
    CHECK(report.fp == 0);
    CHECK(report.fn == 1);
    CHECK(report.recall == doctest::Approx(2.0 / 3.0));
  }
}
