#ifndef DROIDTTP_TESTS_HELPERS_HPP
#define DROIDTTP_TESTS_HELPERS_HPP

#include <unistd.h>

#include <filesystem>
#include <string>
#include <vector>

#include <droidttp/common.hpp>
#include <droidttp/dataset.hpp>

#ifndef DROIDTTP_FIXTURES_DIR
#define DROIDTTP_FIXTURES_DIR "fixtures"
#endif

namespace testutil {

inline std::filesystem::path fixtures_dir() { return DROIDTTP_FIXTURES_DIR; }

// Scratch directory removed on scope exit.
struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           ("droidttp-test-" + tag + "-" + std::to_string(::getpid()));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

inline std::string fake_sha(std::size_t i) {
  std::string s = std::to_string(i);
  return std::string(64 - s.size(), '0') + s;
}

inline droidttp::BinMatrix random_binary(std::size_t rows, std::size_t cols,
                                         droidttp::Rng& rng, double p_one = 0.5) {
  droidttp::BinMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rng.uniform01() < p_one;
  return m;
}

inline droidttp::MultiLabelDataset random_dataset(std::size_t n, std::size_t s,
                                                  std::size_t t, std::uint64_t seed,
                                                  double p_one = 0.5) {
  droidttp::Rng rng(seed);
  droidttp::MultiLabelDataset ds;
  std::vector<std::string> features, labels;
  for (std::size_t j = 0; j < s; ++j) features.push_back("perm:f" + std::to_string(j));
  for (std::size_t l = 0; l < t; ++l) labels.push_back("L" + std::to_string(l));
  ds.vocab = droidttp::FeatureVocabulary(features);
  ds.labels = droidttp::LabelSpace(labels, droidttp::LabelKind::tactic);
  ds.X = random_binary(n, s, rng, p_one);
  ds.Y = random_binary(n, t, rng, p_one);
  for (std::size_t i = 0; i < n; ++i) ds.ids.push_back(fake_sha(i));
  ds.check();
  return ds;
}

}  // namespace testutil

#endif
