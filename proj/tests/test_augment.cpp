#include <doctest.h>

#include <droidttp/augment.hpp>

#include "helpers.hpp"

using namespace droidttp;

namespace {

// two labels with the given positive counts, disjoint memberships
MultiLabelDataset two_label(std::size_t majority, std::size_t minority,
                            std::uint64_t seed = 1) {
  auto ds = testutil::random_dataset(majority + minority, 6, 2, seed, 0.4);
  for (std::size_t i = 0; i < ds.n(); ++i) {
    ds.Y(i, 0) = i < majority;
    ds.Y(i, 1) = i >= majority;
  }
  return ds;
}

}  // namespace

TEST_CASE("minority rules, hand examples") {
  auto ds = testutil::random_dataset(21, 3, 3, 2);
  // counts 10, 10, 1
  for (std::size_t i = 0; i < 21; ++i) {
    ds.Y(i, 0) = i < 10;
    ds.Y(i, 1) = i >= 10 && i < 20;
    ds.Y(i, 2) = i == 20;
  }
  // IRLbl = (1, 1, 10), MeanIR = 4 -> only label 2
  CHECK(minority_labels(ds, MinorityRule::irlbl_meanir) == std::set<std::size_t>{2});
  // mean count = 7 -> label 2 again
  CHECK(minority_labels(ds, MinorityRule::below_mean_frequency) ==
        std::set<std::size_t>{2});

  // balanced labels: empty minority set
  auto bal = two_label(10, 10);
  CHECK(minority_labels(bal, MinorityRule::irlbl_meanir).empty());
  CHECK(minority_labels(bal, MinorityRule::below_mean_frequency).empty());
}

TEST_CASE("quota arithmetic: (40, 10, percent=50) makes exactly 10 synthetics") {
  auto ds = two_label(40, 10);
  AugmentConfig cfg;
  cfg.percent = 50;  // round(0.5 * 40) - 10 = 10
  cfg.k = 5;
  AugmentReport rep;
  auto out = mlsmote(ds, cfg, &rep);
  CHECK(rep.synthetic_total == 10);
  CHECK(out.n() == 60);
  CHECK(rep.before_counts[1] == 10);
  CHECK(rep.after_counts[1] == 20);
  CHECK(rep.after_counts[0] == 40);  // majority untouched
}

TEST_CASE("append-only: originals bit-identical, synthetics flagged") {
  auto ds = two_label(30, 5, 3);
  AugmentConfig cfg;
  cfg.percent = 100;
  auto out = mlsmote(ds, cfg);
  REQUIRE(out.n() > ds.n());
  for (std::size_t i = 0; i < ds.n(); ++i) {
    CHECK(out.ids[i] == ds.ids[i]);
    for (std::size_t j = 0; j < ds.X.cols(); ++j) CHECK(out.X(i, j) == ds.X(i, j));
    for (std::size_t l = 0; l < ds.Y.cols(); ++l) CHECK(out.Y(i, l) == ds.Y(i, l));
  }
  for (std::size_t i = ds.n(); i < out.n(); ++i) {
    CHECK(out.ids[i].rfind("synthetic:", 0) == 0);
    // labels copied verbatim from a minority seed
    CHECK(out.Y(i, 1) == 1);
    CHECK(out.Y(i, 0) == 0);
  }
}

TEST_CASE("unanimous features are preserved; votes never invent values") {
  auto ds = two_label(20, 6, 4);
  // all minority members share feature 0 = 1 and feature 1 = 0
  for (std::size_t i = 20; i < 26; ++i) {
    ds.X(i, 0) = 1;
    ds.X(i, 1) = 0;
  }
  AugmentConfig cfg;
  cfg.percent = 100;
  auto out = mlsmote(ds, cfg);
  for (std::size_t i = ds.n(); i < out.n(); ++i) {
    CHECK(out.X(i, 0) == 1);
    CHECK(out.X(i, 1) == 0);
  }
}

TEST_CASE("no-op when the target is already met, and cap at original n") {
  auto ds = two_label(10, 9);
  AugmentConfig cfg;
  cfg.percent = 50;  // round(0.5*10)=5 < 9 -> nothing to do
  auto out = mlsmote(ds, cfg);
  CHECK(out.n() == ds.n());
  CHECK(out.X == ds.X);
  CHECK(out.ids == ds.ids);

  // cap: want can never exceed the original sample count
  auto tiny = two_label(200, 2, 5);
  AugmentConfig big;
  big.percent = 100;
  AugmentReport rep;
  auto capped = mlsmote(tiny, big, &rep);
  CHECK(rep.synthetic_total <= tiny.n());
}

TEST_CASE("determinism and config validation") {
  auto ds = two_label(25, 5, 6);
  AugmentConfig cfg;
  cfg.percent = 100;
  cfg.seed = 77;
  auto a = mlsmote(ds, cfg);
  auto b = mlsmote(ds, cfg);
  CHECK(a.X == b.X);
  CHECK(a.ids == b.ids);

  AugmentConfig bad;
  bad.percent = 0;
  CHECK_THROWS_AS(mlsmote(ds, bad), ConfigError);
  bad.percent = 101;
  CHECK_THROWS_AS(mlsmote(ds, bad), ConfigError);
  AugmentConfig badk;
  badk.k = 0;
  CHECK_THROWS_AS(mlsmote(ds, badk), ConfigError);
}

TEST_CASE("labels with fewer than 2 samples are skipped with a warning") {
  auto ds = two_label(20, 1, 7);
  AugmentConfig cfg;
  cfg.percent = 100;
  AugmentReport rep;
  auto out = mlsmote(ds, cfg, &rep);
  CHECK(out.n() == ds.n());
  REQUIRE(rep.skipped_labels.size() == 1);
  CHECK(rep.skipped_labels[0] == ds.labels.name(1));
}

TEST_CASE("interpolate variant also stays binary and deterministic") {
  auto ds = two_label(30, 5, 8);
  AugmentConfig cfg;
  cfg.percent = 100;
  cfg.interpolate = true;
  auto a = mlsmote(ds, cfg);
  auto b = mlsmote(ds, cfg);
  CHECK(a.X == b.X);
  a.X.check_binary();
}
