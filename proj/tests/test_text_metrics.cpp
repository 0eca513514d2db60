#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "gec/metrics.hpp"
#include "gec/text.hpp"

TEST_SUITE("text_metrics") {
  TEST_CASE("tokenizing splits on whitespace runs and joins with single spaces") {
    auto tokens = gec::split_tokens("  a\tb \r\n c  ");
    CHECK(tokens == gec::Tokens{"a", "b", "c"});
    CHECK(gec::join_tokens(tokens) == "a b c");
    CHECK(gec::split_tokens("   ").empty());
    CHECK(gec::normalize_space("  x   y ") == "x y");
  }

  TEST_CASE("utf8 decoding round-trips and rejects malformed bytes") {
    std::string arabic = "مدرسة café";
    std::u32string points = gec::decode_utf8(arabic);
    CHECK(points.size() == 10);
    std::string back;
    for (char32_t c : points) back += gec::encode_utf8(c);
    CHECK(back == arabic);
    CHECK_THROWS_AS(gec::decode_utf8("\xC3"), std::invalid_argument);
    CHECK_THROWS_AS(gec::decode_utf8("\xFF"), std::invalid_argument);
  }

  TEST_CASE("empty-denominator conventions") {
    CHECK(gec::precision(0, 0) == 1.0);
    CHECK(gec::recall(0, 0) == 0.0);
    CHECK(gec::f_beta(1.0, 0.0, 0.5) == 0.0);
    CHECK(gec::accuracy(0, 0, 0, 0) == 1.0);
  }

  TEST_CASE("F-beta of the textbook two-thirds example") {
    const double p = 0.5, r = 2.0 / 3.0;
    CHECK(gec::f_beta(p, r, 0.5) == doctest::Approx(10.0 / 19.0).epsilon(1e-12));
    CHECK(gec::f_beta(p, r, 1.0) == doctest::Approx(4.0 / 7.0).epsilon(1e-12));
  }

  TEST_CASE("F-beta lies between min(P,R) and max(P,R)") {
    for (int a = 1; a <= 20; ++a) {
      for (int b = 1; b <= 20; ++b) {
        const double p = a / 20.0, r = b / 20.0;
        for (double beta : {0.25, 0.5, 1.0, 2.0}) {
          const double f = gec::f_beta(p, r, beta);
          CHECK(f >= std::min(p, r) - 1e-12);
          CHECK(f <= std::max(p, r) + 1e-12);
        }
      }
    }
  }
}
