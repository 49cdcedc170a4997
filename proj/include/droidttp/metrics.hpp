#ifndef DROIDTTP_METRICS_HPP
#define DROIDTTP_METRICS_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "common.hpp"

namespace droidttp {

struct LabelReport {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  std::size_t support = 0;  // TP + FN
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
};

struct EvaluationReport {
  double subset_accuracy = 0;
  double weighted_precision = 0;
  double weighted_recall = 0;
  double weighted_f1 = 0;
  double jaccard_similarity = 0;
  double hamming_loss = 0;
  std::vector<LabelReport> per_label;
};

inline void check_shapes(const BinMatrix& a, const BinMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeMismatch("Y_true and Y_pred shapes differ");
  if (a.rows() == 0 || a.cols() == 0) throw ShapeMismatch("empty label matrices");
  a.check_binary();
  b.check_binary();
}

inline std::vector<LabelReport> per_label_confusion(const BinMatrix& y_true,
                                                    const BinMatrix& y_pred) {
  check_shapes(y_true, y_pred);
  std::vector<LabelReport> out(y_true.cols());
  for (std::size_t l = 0; l < y_true.cols(); ++l) {
    auto& r = out[l];
    for (std::size_t i = 0; i < y_true.rows(); ++i) {
      bool t = y_true(i, l), p = y_pred(i, l);
      if (t && p) ++r.tp;
      else if (!t && p) ++r.fp;
      else if (t && !p) ++r.fn;
      else ++r.tn;
    }
    r.support = r.tp + r.fn;
    // division-by-zero conventions: empty denominators score 0
    r.precision = (r.tp + r.fp) ? double(r.tp) / double(r.tp + r.fp) : 0.0;
    r.recall = r.support ? double(r.tp) / double(r.support) : 0.0;
    r.f1 = (r.precision + r.recall) > 0
               ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
               : 0.0;
  }
  return out;
}

// Subset accuracy, support-weighted P/R/F1, per-sample Jaccard, Hamming loss.
inline EvaluationReport evaluate(const BinMatrix& y_true, const BinMatrix& y_pred) {
  check_shapes(y_true, y_pred);
  EvaluationReport rep;
  rep.per_label = per_label_confusion(y_true, y_pred);

  const std::size_t n = y_true.rows(), t = y_true.cols();
  std::size_t exact = 0, mismatched_bits = 0;
  double js_sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bool all_equal = true;
    std::size_t inter = 0, uni = 0;
    for (std::size_t l = 0; l < t; ++l) {
      bool a = y_true(i, l), b = y_pred(i, l);
      if (a != b) {
        all_equal = false;
        ++mismatched_bits;
      }
      inter += (a && b);
      uni += (a || b);
    }
    exact += all_equal;
    js_sum += uni ? double(inter) / double(uni) : 1.0;  // both sets empty: agree
  }
  rep.subset_accuracy = double(exact) / double(n);
  rep.hamming_loss = double(mismatched_bits) / double(n * t);
  rep.jaccard_similarity = js_sum / double(n);

  double wsum = 0, p = 0, r = 0, f1 = 0;
  for (const auto& lr : rep.per_label) {
    wsum += double(lr.support);
    p += double(lr.support) * lr.precision;
    r += double(lr.support) * lr.recall;
    f1 += double(lr.support) * lr.f1;
  }
  if (wsum > 0) {
    rep.weighted_precision = p / wsum;
    rep.weighted_recall = r / wsum;
    rep.weighted_f1 = f1 / wsum;
  }
  return rep;
}

inline json to_json(const EvaluationReport& r, const std::vector<std::string>& label_names = {}) {
  json per = json::array();
  for (std::size_t l = 0; l < r.per_label.size(); ++l) {
    const auto& lr = r.per_label[l];
    json j{{"precision", lr.precision}, {"recall", lr.recall},     {"f1", lr.f1},
           {"support", lr.support},     {"tp", lr.tp},             {"fp", lr.fp},
           {"fn", lr.fn},               {"tn", lr.tn}};
    if (l < label_names.size()) j["label"] = label_names[l];
    per.push_back(std::move(j));
  }
  return json{{"schema_version", 1},
              {"accuracy", r.subset_accuracy},
              {"weighted_precision", r.weighted_precision},
              {"weighted_recall", r.weighted_recall},
              {"weighted_f1", r.weighted_f1},
              {"jaccard_similarity", r.jaccard_similarity},
              {"hamming_loss", r.hamming_loss},
              {"per_label", per}};
}

// Fixed-width table with the same column order the comparison tables use.
inline std::string format_metrics_table(const EvaluationReport& r) {
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "%-8s %-8s %-8s %-8s %-8s %-8s\n%-8.4f %-8.4f %-8.4f %-8.4f %-8.4f %-8.4f\n",
                "A", "P", "R", "F1", "JS", "HL", r.subset_accuracy, r.weighted_precision,
                r.weighted_recall, r.weighted_f1, r.jaccard_similarity, r.hamming_loss);
  return buf;
}

}  // namespace droidttp

#endif  // DROIDTTP_METRICS_HPP
