#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "halprobe/dpo/dpo.hpp"
#include "halprobe/errors.hpp"
#include "halprobe/util/rng.hpp"

using namespace halprobe;
using namespace halprobe::dpo;

namespace {

constexpr double kLn2 = 0.6931471805599453;
// ln(1 + exp(-0.2)), evaluated at 40 decimal digits and rounded to double.
constexpr double kSoftplusNeg02 = 0.5981388693815918;

PairLogProbs with_margin(double delta) {
  // pol_chosen - ref_chosen = delta, rejected side cancels.
  return {delta, 0.0, 0.0, 0.0};
}

}  // namespace

TEST_CASE("margin arithmetic") {
  CHECK(dpo_margin({-3, -3, -5, -5}) == 0.0);
  CHECK(dpo_margin({-1, -2, -4, -3}) == 2.0);
  // Swapping chosen and rejected negates the margin.
  const PairLogProbs lp{-1.5, -2.25, -4.0, -3.5};
  const PairLogProbs swapped{lp.pol_rejected, lp.ref_rejected, lp.pol_chosen, lp.ref_chosen};
  CHECK(dpo_margin(lp) == -dpo_margin(swapped));
}

TEST_CASE("non-finite inputs are rejected") {
  CHECK_THROWS_AS(dpo_margin({std::nan(""), 0, 0, 0}), PreconditionError);
  CHECK_THROWS_AS(dpo_margin({0, INFINITY, 0, 0}), PreconditionError);
  CHECK_THROWS_AS(dpo_loss(with_margin(1), DpoConfig{std::nan(""), false}), ConfigError);
  CHECK_THROWS_AS(dpo_loss(with_margin(1), DpoConfig{-0.5, false}), ConfigError);
  CHECK_THROWS_AS(dpo_loss(with_margin(1), DpoConfig{0.0, false}), ConfigError);
}

TEST_CASE("loss at zero margin is ln 2 for any beta") {
  for (const double beta : {0.01, 0.1, 1.0, 10.0}) {
    CHECK(dpo_loss(with_margin(0.0), DpoConfig{beta, false}) ==
          doctest::Approx(kLn2).epsilon(1e-14));
  }
}

TEST_CASE("frozen scalar fixture: margin 2 at beta 0.1") {
  CHECK(dpo_loss(with_margin(2.0), DpoConfig{0.1, false}) ==
        doctest::Approx(kSoftplusNeg02).epsilon(1e-15));
}

TEST_CASE("softplus identity softplus(x) - softplus(-x) = x on a grid") {
  for (int i = -200; i <= 200; ++i) {
    const double x = i * 0.1;
    CHECK(softplus(x) - softplus(-x) == doctest::Approx(x).epsilon(1e-12));
  }
}

TEST_CASE("no overflow in the linear tails") {
  CHECK(dpo_loss(with_margin(-1000.0), DpoConfig{1.0, false}) == doctest::Approx(1000.0));
  CHECK(std::isfinite(dpo_loss(with_margin(1000.0), DpoConfig{1.0, false})));
  CHECK(dpo_loss(with_margin(-500.0), DpoConfig{0.1, false}) == doctest::Approx(50.0));
  CHECK(softplus(-745.0) >= 0.0);
}

TEST_CASE("loss is positive and strictly decreasing in the margin") {
  util::Rng rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const double beta = std::vector<double>{0.01, 0.1, 1.0}[rng.uniform_int(0, 2)];
    // Draw margins on a coarse grid so strictness is meaningful in doubles.
    double d1 = rng.uniform_int(-20000, 20000) * 1e-3;
    double d2 = rng.uniform_int(-20000, 20000) * 1e-3;
    if (d1 == d2) continue;
    if (d1 > d2) std::swap(d1, d2);
    const double l1 = dpo_loss(with_margin(d1), DpoConfig{beta, false});
    const double l2 = dpo_loss(with_margin(d2), DpoConfig{beta, false});
    CHECK(l1 > 0.0);
    CHECK(l2 > 0.0);
    CHECK(l1 > l2);
  }
}

TEST_CASE("analytic gradient matches central finite differences") {
  const double h = 1e-6;
  for (const double beta : {0.01, 0.1, 1.0}) {
    for (int i = -20; i <= 20; ++i) {
      const double delta = static_cast<double>(i);
      const DpoConfig cfg{beta, false};
      const double analytic = dpo_grad_margin(with_margin(delta), cfg);
      const double numeric = (dpo_loss(with_margin(delta + h), cfg) -
                              dpo_loss(with_margin(delta - h), cfg)) /
                             (2 * h);
      CHECK(analytic == doctest::Approx(numeric).epsilon(1e-6));
    }
  }
}

TEST_CASE("gradient fixtures") {
  CHECK(dpo_grad_margin(with_margin(0.0), DpoConfig{1.0, false}) == doctest::Approx(-0.5));
  CHECK(dpo_grad_margin(with_margin(123.0), DpoConfig{0.0, true}) == 0.0);
  CHECK(dpo_grad_margin(with_margin(-7.0), DpoConfig{0.0, true}) == 0.0);
}

TEST_CASE("reference-shift invariance of the margin") {
  util::Rng rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    PairLogProbs lp{rng.uniform_int(-4000, 0) * 1e-2, rng.uniform_int(-4000, 0) * 1e-2,
                    rng.uniform_int(-4000, 0) * 1e-2, rng.uniform_int(-4000, 0) * 1e-2};
    const double shift_chosen = rng.uniform_int(-100, 100) * 1e-1;
    const double shift_rejected = rng.uniform_int(-100, 100) * 1e-1;
    PairLogProbs shifted{lp.pol_chosen + shift_chosen, lp.ref_chosen + shift_chosen,
                         lp.pol_rejected + shift_rejected, lp.ref_rejected + shift_rejected};
    CHECK(dpo_margin(shifted) == doctest::Approx(dpo_margin(lp)).epsilon(1e-9));
  }
}

TEST_CASE("batch mean and determinism") {
  const DpoConfig cfg{0.1, false};
  const PairLogProbs a = with_margin(1.0);
  const PairLogProbs b = with_margin(-2.0);
  CHECK(dpo_loss_batch({a, a}, cfg) == dpo_loss(a, cfg));
  CHECK(dpo_loss_batch({with_margin(0.0), with_margin(0.0)}, cfg) ==
        doctest::Approx(kLn2).epsilon(1e-14));
  const double first = dpo_loss_batch({a, b, a, b}, cfg);
  const double second = dpo_loss_batch({a, b, a, b}, cfg);
  CHECK(first == second);  // bit-identical under fixed summation order
  CHECK_THROWS_AS(dpo_loss_batch({}, cfg), PreconditionError);
}

TEST_CASE("batch file reader with optional length normalization") {
  const auto dir = std::filesystem::temp_directory_path() / "halprobe_dpo_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "batch.jsonl";
  {
    std::ofstream out(path);
    out << R"({"id":"p1","pol_chosen":-10,"ref_chosen":-12,"pol_rejected":-9,"ref_rejected":-8,"chosen_len":2,"rejected_len":1})"
        << "\n";
    out << R"({"pol_chosen":-1,"ref_chosen":-1,"pol_rejected":-1,"ref_rejected":-1,"chosen_len":1,"rejected_len":1})"
        << "\n";
  }

  const auto plain = read_batch_file(path.string(), false);
  REQUIRE(plain.size() == 2);
  CHECK(plain[0].id == "p1");
  // (-10 + 12) - (-9 + 8) = 3.
  CHECK(dpo_margin(plain[0].lp) == doctest::Approx(3.0));

  const auto normalized = read_batch_file(path.string(), true);
  // Chosen side divided by 2: (-5 + 6) - (-9 + 8) = 2.
  CHECK(dpo_margin(normalized[0].lp) == doctest::Approx(2.0));

  // Missing token counts are an error in normalize mode.
  {
    std::ofstream out(path, std::ios::trunc);
    out << R"({"pol_chosen":-1,"ref_chosen":-1,"pol_rejected":-1,"ref_rejected":-1})" << "\n";
  }
  CHECK_NOTHROW(read_batch_file(path.string(), false));
  CHECK_THROWS_AS(read_batch_file(path.string(), true), Error);
  std::filesystem::remove_all(dir);
}
