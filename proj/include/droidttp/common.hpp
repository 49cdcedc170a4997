#ifndef DROIDTTP_COMMON_HPP
#define DROIDTTP_COMMON_HPP

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace droidttp {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Error hierarchy. Domain errors derive from Error so the CLI can map them
// to exit code 1; usage/validation problems surface as UsageError (code 2).
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define DROIDTTP_DEFINE_ERROR(Name)                              \
  class Name : public Error {                                    \
   public:                                                       \
    explicit Name(const std::string& msg) : Error(#Name ": " + msg) {} \
  }

DROIDTTP_DEFINE_ERROR(NetworkError);
DROIDTTP_DEFINE_ERROR(NotFound);
DROIDTTP_DEFINE_ERROR(OfflineMiss);
DROIDTTP_DEFINE_ERROR(ParseError);
DROIDTTP_DEFINE_ERROR(NotAndroid);
DROIDTTP_DEFINE_ERROR(UnknownHash);
DROIDTTP_DEFINE_ERROR(EmptyInput);
DROIDTTP_DEFINE_ERROR(EmptyDataset);
DROIDTTP_DEFINE_ERROR(UnknownLabel);
DROIDTTP_DEFINE_ERROR(UnknownFeature);
DROIDTTP_DEFINE_ERROR(TooFewSamples);
DROIDTTP_DEFINE_ERROR(IoError);
DROIDTTP_DEFINE_ERROR(SchemaVersionMismatch);
DROIDTTP_DEFINE_ERROR(LengthMismatch);
DROIDTTP_DEFINE_ERROR(NonBinaryInput);
DROIDTTP_DEFINE_ERROR(ShapeMismatch);
DROIDTTP_DEFINE_ERROR(DimensionMismatch);
DROIDTTP_DEFINE_ERROR(VocabularyMismatch);
DROIDTTP_DEFINE_ERROR(ConfigError);
DROIDTTP_DEFINE_ERROR(InvalidInput);

#undef DROIDTTP_DEFINE_ERROR

// ---------------------------------------------------------------------------
// Dense binary matrix, row-major uint8 storage. All feature/label matrices in
// this codebase are {0,1}-valued; at fixture scale dense storage is fine and
// the on-disk format is sparse COO regardless.
// ---------------------------------------------------------------------------

class BinMatrix {
 public:
  BinMatrix() = default;
  BinMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::uint8_t operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  std::uint8_t& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }

  const std::uint8_t* row_ptr(std::size_t r) const { return data_.data() + r * cols_; }

  bool operator==(const BinMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  std::size_t column_sum(std::size_t c) const {
    std::size_t s = 0;
    for (std::size_t r = 0; r < rows_; ++r) s += (*this)(r, c);
    return s;
  }

  BinMatrix select_rows(const std::vector<std::size_t>& idx) const {
    BinMatrix out(idx.size(), cols_);
    for (std::size_t i = 0; i < idx.size(); ++i)
      std::copy(row_ptr(idx[i]), row_ptr(idx[i]) + cols_, out.data_.begin() + i * cols_);
    return out;
  }

  BinMatrix select_cols(const std::vector<std::size_t>& idx) const {
    BinMatrix out(rows_, idx.size());
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t j = 0; j < idx.size(); ++j) out(r, j) = (*this)(r, idx[j]);
    return out;
  }

  void append_row(const std::vector<std::uint8_t>& row) {
    if (rows_ == 0 && cols_ == 0) cols_ = row.size();
    if (row.size() != cols_) throw ShapeMismatch("append_row size mismatch");
    data_.insert(data_.end(), row.begin(), row.end());
    ++rows_;
  }

  void check_binary() const {
    for (auto v : data_)
      if (v > 1) throw NonBinaryInput("matrix entry outside {0,1}");
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> data_;
};

// ---------------------------------------------------------------------------
// Deterministic RNG: splitmix64 with hand-rolled bounded draws and shuffle so
// that artifacts are reproducible regardless of standard-library internals
// (std::shuffle / distributions are implementation-defined).
// ---------------------------------------------------------------------------

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, n)
  std::size_t below(std::size_t n) {
    if (n == 0) throw InvalidInput("Rng::below(0)");
    return static_cast<std::size_t>(next() % n);
  }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::uint64_t state_;
};

inline bool is_lower_hex(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
  });
}

inline bool is_sha256_hex(const std::string& s) {
  return s.size() == 64 && is_lower_hex(s);
}

inline bool is_technique_id(const std::string& s) {
  if (s.size() != 5 && s.size() != 9) return false;
  if (s[0] != 'T') return false;
  for (int i = 1; i < 5; ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  if (s.size() == 9) {
    if (s[5] != '.') return false;
    for (int i = 6; i < 9; ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

inline std::vector<std::string> sorted_unique(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace droidttp

#endif  // DROIDTTP_COMMON_HPP
