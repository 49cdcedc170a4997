#include <doctest.h>

#include <cmath>
#include <numeric>

#include <droidttp/attribution.hpp>

#include "helpers.hpp"

using namespace droidttp;

namespace {

// Exact Shapley values by full coalition enumeration against a single
// background row: phi_j = sum over subsets S not containing j of
// |S|!(s-|S|-1)!/s! * (f(S+j) - f(S)).
std::vector<double> exact_shapley(const PtaModel& model, const std::vector<std::uint8_t>& x,
                                  const std::vector<std::uint8_t>& bg, std::size_t label) {
  const std::size_t s = x.size();
  std::vector<double> fact(s + 1, 1.0);
  for (std::size_t i = 1; i <= s; ++i) fact[i] = fact[i - 1] * double(i);

  auto f_of = [&](std::uint32_t mask) {
    std::vector<std::uint8_t> z = bg;
    for (std::size_t j = 0; j < s; ++j)
      if (mask & (1u << j)) z[j] = x[j];
    return predict_label_proba(model, z.data(), label);
  };

  std::vector<double> value(std::size_t(1) << s);
  for (std::uint32_t mask = 0; mask < value.size(); ++mask) value[mask] = f_of(mask);

  std::vector<double> phi(s, 0.0);
  for (std::uint32_t mask = 0; mask < value.size(); ++mask) {
    std::size_t sz = std::size_t(__builtin_popcount(mask));
    double w = fact[sz] * fact[s - sz - 1] / fact[s];
    for (std::size_t j = 0; j < s; ++j) {
      if (mask & (1u << j)) continue;
      phi[j] += w * (value[mask | (1u << j)] - value[mask]);
    }
  }
  return phi;
}

PtaModel small_tree_model(std::size_t n, std::size_t s, std::uint64_t seed,
                          std::size_t dummy_feature = SIZE_MAX) {
  auto ds = testutil::random_dataset(n, s, 1, seed);
  Rng rng(seed + 1);
  for (std::size_t i = 0; i < n; ++i) {
    // label depends on two informative coordinates
    ds.Y(i, 0) = (ds.X(i, 0) & ds.X(i, 1)) | (ds.X(i, s - 1) & rng.below(2));
    if (dummy_feature != SIZE_MAX) ds.X(i, dummy_feature) = rng.below(2);
  }
  LearnerParams p;
  if (dummy_feature != SIZE_MAX) {
    // keep the tree off the dummy by separability of the other coordinates
    for (std::size_t i = 0; i < n; ++i) ds.Y(i, 0) = ds.X(i, 0);
    p.max_depth = 1;
  }
  return fit_br(ds, p);
}

}  // namespace

TEST_CASE("efficiency holds exactly by construction") {
  auto model = small_tree_model(60, 6, 1);
  auto ds = testutil::random_dataset(20, 6, 1, 2);
  std::vector<std::uint8_t> x(ds.X.row_ptr(0), ds.X.row_ptr(0) + 6);
  auto res = shapley_attribution(model, x, 0, ds.X, 200, 7);
  double phi_sum = std::accumulate(res.phi.begin(), res.phi.end(), 0.0);
  CHECK(phi_sum == doctest::Approx(res.model_output - res.baseline).epsilon(1e-12));
}

TEST_CASE("single-stump model: phi concentrates on the split feature") {
  // f = P(y=1 | x0); background all zeros, instance has x0 = 1
  auto ds = testutil::random_dataset(40, 5, 1, 3);
  for (std::size_t i = 0; i < ds.n(); ++i) ds.Y(i, 0) = ds.X(i, 0);
  auto model = fit_br(ds, LearnerParams{});

  BinMatrix bg(1, 5);  // all zeros
  std::vector<std::uint8_t> x = {1, 0, 0, 0, 0};
  auto res = shapley_attribution(model, x, 0, bg, 500, 11);
  CHECK(res.phi[0] == doctest::Approx(1.0).epsilon(1e-9));
  for (std::size_t j = 1; j < 5; ++j) CHECK(std::abs(res.phi[j]) <= 1e-12);
}

TEST_CASE("Monte Carlo matches exact enumeration on a 6-feature model") {
  auto model = small_tree_model(80, 6, 5);
  Rng rng(13);
  std::vector<std::uint8_t> x(6), bg(6);
  for (auto& v : x) v = rng.below(2);
  for (auto& v : bg) v = rng.below(2);
  BinMatrix background(1, 6);
  for (std::size_t j = 0; j < 6; ++j) background(0, j) = bg[j];

  auto exact = exact_shapley(model, x, bg, 0);
  auto mc = shapley_attribution(model, x, 0, background, 20000, 17);
  for (std::size_t j = 0; j < 6; ++j)
    CHECK(mc.phi[j] == doctest::Approx(exact[j]).epsilon(0.05).scale(0.02));
}

TEST_CASE("dummy feature attribution vanishes") {
  auto model = small_tree_model(60, 6, 7, /*dummy_feature=*/3);
  auto ds = testutil::random_dataset(30, 6, 1, 8);
  std::vector<std::uint8_t> x(ds.X.row_ptr(1), ds.X.row_ptr(1) + 6);
  auto res = shapley_attribution(model, x, 0, ds.X, 2000, 19);
  CHECK(std::abs(res.phi[3]) <= 0.01);
}

TEST_CASE("symmetry: exchangeable coordinates get matching estimates") {
  // y = x0 OR x1 makes coordinates 0 and 1 exchangeable
  auto ds = testutil::random_dataset(200, 4, 1, 9);
  for (std::size_t i = 0; i < ds.n(); ++i) ds.Y(i, 0) = ds.X(i, 0) | ds.X(i, 1);
  auto model = fit_br(ds, LearnerParams{});
  BinMatrix bg(1, 4);
  std::vector<std::uint8_t> x = {1, 1, 0, 0};
  auto res = shapley_attribution(model, x, 0, bg, 20000, 23);
  CHECK(res.phi[0] == doctest::Approx(res.phi[1]).epsilon(0.05).scale(0.02));
}

TEST_CASE("determinism and guards") {
  auto model = small_tree_model(30, 5, 10);
  auto ds = testutil::random_dataset(10, 5, 1, 11);
  std::vector<std::uint8_t> x(ds.X.row_ptr(0), ds.X.row_ptr(0) + 5);
  auto a = shapley_attribution(model, x, 0, ds.X, 100, 3);
  auto b = shapley_attribution(model, x, 0, ds.X, 100, 3);
  CHECK(a.phi == b.phi);

  CHECK_THROWS_AS(shapley_attribution(model, {1, 0}, 0, ds.X, 10, 1), DimensionMismatch);
  CHECK_THROWS_AS(shapley_attribution(model, x, 0, BinMatrix(0, 5), 10, 1), EmptyInput);
  CHECK_THROWS_AS(shapley_attribution(model, x, 0, ds.X, 0, 1), ConfigError);
  CHECK_THROWS_AS(shapley_attribution(model, x, 5, ds.X, 10, 1), InvalidInput);
}

TEST_CASE("top features: definition, coverage, determinism") {
  auto ds = testutil::random_dataset(40, 5, 2, 12);
  for (std::size_t i = 0; i < ds.n(); ++i) {
    ds.Y(i, 0) = ds.X(i, 0);
    ds.Y(i, 1) = ds.X(i, 1);
  }
  auto model = fit_br(ds, LearnerParams{});
  TopFeaturesConfig cfg;
  cfg.top_n = 2;
  cfg.permutations = 100;
  cfg.max_instances = 10;
  auto rep = top_features_per_label(model, ds, cfg);
  REQUIRE(rep.per_label.size() == 2);
  // the model only consults one feature per label; it must rank first
  CHECK(rep.per_label[0][0].first == 0);
  CHECK(rep.per_label[1][0].first == 1);
  for (std::size_t l = 0; l < 2; ++l) {
    CHECK(rep.per_label[l].size() == 2);
    for (auto [f, score] : rep.per_label[l]) CHECK(rep.grid[l][f]);
  }

  auto rep2 = top_features_per_label(model, ds, cfg);
  CHECK(rep.per_label[0] == rep2.per_label[0]);

  auto csv = grid_csv(rep, ds.vocab, model.labels);
  CHECK(csv.rfind("label,", 0) == 0);
}
