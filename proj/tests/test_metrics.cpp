#include <doctest.h>

#include <cmath>

#include <droidttp/metrics.hpp>

#include "helpers.hpp"

using namespace droidttp;

namespace {

BinMatrix mat(std::vector<std::vector<std::uint8_t>> rows) {
  BinMatrix m;
  for (auto& r : rows) m.append_row(r);
  return m;
}

// Independent double-loop reimplementation of all six quantities, written
// directly from the metric definitions.
struct Naive {
  double a, p, r, f1, js, hl;
};

Naive naive_metrics(const BinMatrix& yt, const BinMatrix& yp) {
  std::size_t n = yt.rows(), t = yt.cols();
  Naive out{};
  std::size_t mism = 0, exact = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bool eq = true;
    std::size_t inter = 0, uni = 0;
    for (std::size_t l = 0; l < t; ++l) {
      if (yt(i, l) != yp(i, l)) {
        ++mism;
        eq = false;
      }
      if (yt(i, l) && yp(i, l)) ++inter;
      if (yt(i, l) || yp(i, l)) ++uni;
    }
    if (eq) ++exact;
    out.js += uni == 0 ? 1.0 : double(inter) / double(uni);
  }
  out.a = double(exact) / double(n);
  out.hl = double(mism) / double(n * t);
  out.js /= double(n);

  double wsum = 0;
  for (std::size_t l = 0; l < t; ++l) {
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (yt(i, l) && yp(i, l)) ++tp;
      if (!yt(i, l) && yp(i, l)) ++fp;
      if (yt(i, l) && !yp(i, l)) ++fn;
    }
    double w = tp + fn;
    double prec = tp + fp > 0 ? tp / (tp + fp) : 0.0;
    double rec = w > 0 ? tp / w : 0.0;
    double f1 = prec + rec > 0 ? 2 * prec * rec / (prec + rec) : 0.0;
    wsum += w;
    out.p += w * prec;
    out.r += w * rec;
    out.f1 += w * f1;
  }
  if (wsum > 0) {
    out.p /= wsum;
    out.r /= wsum;
    out.f1 /= wsum;
  }
  return out;
}

}  // namespace

TEST_CASE("hand-worked 2x3 example is exact") {
  auto yt = mat({{1, 0, 1}, {0, 1, 0}});
  auto yp = mat({{1, 1, 1}, {0, 1, 0}});
  auto rep = evaluate(yt, yp);
  CHECK(rep.subset_accuracy == 0.5);
  CHECK(rep.hamming_loss == 1.0 / 6);
  CHECK(std::abs(rep.jaccard_similarity - 5.0 / 6) <= 1e-15);
  CHECK(std::abs(rep.weighted_precision - 5.0 / 6) <= 1e-15);
  CHECK(rep.weighted_recall == 1.0);
  CHECK(std::abs(rep.weighted_f1 - 8.0 / 9) <= 1e-15);

  // label 2 (index 1) confusion quadruple
  CHECK(rep.per_label[1].tp == 1);
  CHECK(rep.per_label[1].fp == 1);
  CHECK(rep.per_label[1].fn == 0);
  CHECK(rep.per_label[1].tn == 0);
}

TEST_CASE("perfect and inverted predictions") {
  droidttp::Rng rng(3);
  auto y = testutil::random_binary(8, 4, rng);
  auto rep = evaluate(y, y);
  CHECK(rep.subset_accuracy == 1.0);
  CHECK(rep.hamming_loss == 0.0);
  CHECK(rep.jaccard_similarity == 1.0);

  BinMatrix inv(y.rows(), y.cols());
  for (std::size_t i = 0; i < y.rows(); ++i)
    for (std::size_t l = 0; l < y.cols(); ++l) inv(i, l) = 1 - y(i, l);
  CHECK(evaluate(y, inv).hamming_loss == 1.0);
}

TEST_CASE("empty-empty rows count as agreement") {
  auto yt = mat({{0, 0}, {1, 0}});
  auto yp = mat({{0, 0}, {1, 0}});
  CHECK(evaluate(yt, yp).jaccard_similarity == 1.0);
}

TEST_CASE("confusion quadruples partition the samples") {
  droidttp::Rng rng(9);
  auto yt = testutil::random_binary(13, 5, rng);
  auto yp = testutil::random_binary(13, 5, rng);
  for (const auto& lr : per_label_confusion(yt, yp))
    CHECK(lr.tp + lr.fp + lr.fn + lr.tn == 13);
}

TEST_CASE("randomized oracle: 100 pairs match the naive reimplementation") {
  droidttp::Rng rng(2024);
  for (int it = 0; it < 100; ++it) {
    std::size_t n = 1 + rng.below(20), t = 1 + rng.below(6);
    auto yt = testutil::random_binary(n, t, rng);
    auto yp = testutil::random_binary(n, t, rng);
    auto rep = evaluate(yt, yp);
    auto ref = naive_metrics(yt, yp);
    CHECK(rep.subset_accuracy == doctest::Approx(ref.a).epsilon(1e-12));
    CHECK(rep.weighted_precision == doctest::Approx(ref.p).epsilon(1e-12));
    CHECK(rep.weighted_recall == doctest::Approx(ref.r).epsilon(1e-12));
    CHECK(rep.weighted_f1 == doctest::Approx(ref.f1).epsilon(1e-12));
    CHECK(rep.jaccard_similarity == doctest::Approx(ref.js).epsilon(1e-12));
    CHECK(rep.hamming_loss == doctest::Approx(ref.hl).epsilon(1e-12));
  }
}

TEST_CASE("shape and binary guards") {
  auto a = mat({{1, 0}});
  auto b = mat({{1, 0, 1}});
  CHECK_THROWS_AS(evaluate(a, b), ShapeMismatch);
  BinMatrix c(1, 2);
  c(0, 0) = 2;
  CHECK_THROWS_AS(evaluate(c, a), NonBinaryInput);
}
