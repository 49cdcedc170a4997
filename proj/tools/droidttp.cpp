// droidttp command line front end: config-driven orchestration of
// ingest -> vectorize -> select -> augment -> train -> evaluate -> predict
// -> explain -> export-kb, plus a `pipeline` subcommand chaining all stages.
//
// Exit codes: 0 success, 1 domain error (single-line diagnostic on stderr),
// 2 usage error (synopsis on stderr).

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <droidttp/attribution.hpp>
#include <droidttp/augment.hpp>
#include <droidttp/config.hpp>
#include <droidttp/dataset.hpp>
#include <droidttp/ingest.hpp>
#include <droidttp/metrics.hpp>
#include <droidttp/presets.hpp>
#include <droidttp/pta.hpp>
#include <droidttp/selection.hpp>

namespace {

using namespace droidttp;

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<std::string> read_hash_list(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::string> hashes;
  std::string line;
  while (std::getline(in, line)) {
    line = detail::strip(line);
    if (line.empty() || line[0] == '#') continue;
    hashes.push_back(line);
  }
  if (hashes.empty()) throw EmptyInput("no hashes in " + path.string());
  return hashes;
}

void write_text(const fs::path& path, const std::string& data) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << data;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

LearnerParams effective_params(const PipelineConfig& cfg,
                               const std::map<std::string, std::string>& overrides) {
  LearnerParams p = cfg.learner;
  if (!cfg.preset.empty()) {
    p = preset_params(cfg.preset, cfg.learner.kind);
    p.seed = cfg.learner.seed;
    // explicit learner keys win over the preset
    PipelineConfig tmp = cfg;
    tmp.learner = p;
    std::map<std::string, std::string> learner_only;
    for (const auto& [k, v] : overrides)
      if (k == "criterion" || k == "max_depth" || k == "min_samples_split" ||
          k == "min_samples_leaf" || k == "max_leaf_nodes" || k == "n_estimators" ||
          k == "max_features" || k == "learning_rate" || k == "gamma" ||
          k == "bootstrap" || k == "learner_seed")
        learner_only.emplace(k, v);
    apply_config_pairs(tmp, learner_only);
    p = tmp.learner;
  }
  p.validate();
  return p;
}

PtaModel fit_by_strategy(const MultiLabelDataset& ds, Strategy strategy,
                         const LearnerParams& params) {
  switch (strategy) {
    case Strategy::br: return fit_br(ds, params);
    case Strategy::cc: return fit_cc(ds, params);
    default: return fit_lp(ds, params);
  }
}

// ---------------------------------------------------------------------------
// Stages. Each returns the list of artifacts it wrote (for the run manifest).
// ---------------------------------------------------------------------------

using Artifacts = std::vector<fs::path>;

Artifacts stage_ingest(const PipelineConfig& cfg, std::vector<RawSample>* out_samples) {
  if (cfg.hashes_file.empty()) throw ConfigError("ingest needs hashes_file");
  if (cfg.labels_file.empty()) throw ConfigError("ingest needs labels_file");
  auto hashes = read_hash_list(cfg.hashes_file);
  auto labels = read_label_map(cfg.labels_file.string());

  ReportCache cache(cfg.cache_dir);
  RateLimiter limiter(std::chrono::milliseconds(cfg.rate_limit_seconds * 1000));
  FetchOptions opt;
  opt.mode = cfg.offline ? FetchMode::offline : FetchMode::online;
  opt.fixture_dir = cfg.fixture_dir;
  opt.api_key = cfg.api_key;
  if (!cfg.offline) opt.rate_limiter = &limiter;

  std::vector<RawSample> samples;
  json skipped = json::array();
  for (const auto& sha : hashes) {
    try {
      auto entry = fetch_report(sha, cache, opt);
      if (entry.status == VerificationStatus::unknown) {
        entry.status = verify_android(entry);
        cache.update_status(sha, entry.status);
      }
      samples.push_back(attach_labels(parse_static_features(entry), labels));
    } catch (const NotAndroid& e) {
      skipped.push_back({{"sha256", sha}, {"reason", e.what()}});
    } catch (const UnknownHash& e) {
      skipped.push_back({{"sha256", sha}, {"reason", e.what()}});
    } catch (const OfflineMiss& e) {
      skipped.push_back({{"sha256", sha}, {"reason", e.what()}});
    } catch (const NotFound& e) {
      skipped.push_back({{"sha256", sha}, {"reason", e.what()}});
    }
  }
  if (samples.empty()) throw EmptyInput("no usable Android samples after ingest");

  fs::create_directories(cfg.dataset_dir);
  fs::path samples_path = cfg.dataset_dir / "samples.jsonl";
  write_samples_jsonl(samples_path.string(), samples);
  fs::path report_path = cfg.reports_dir / "ingest.json";
  write_json(report_path, json{{"schema_version", 1},
                               {"requested", hashes.size()},
                               {"ingested", samples.size()},
                               {"skipped", skipped}});
  if (out_samples) *out_samples = std::move(samples);
  return {samples_path, report_path};
}

Artifacts stage_vectorize(const PipelineConfig& cfg, const fs::path& samples_path,
                          const fs::path& out_dir) {
  auto samples = read_samples_jsonl(samples_path.string());
  auto vocab = build_vocabulary(samples);
  auto space = cfg.task == LabelKind::tactic ? LabelSpace::tactics()
                                             : LabelSpace::techniques();
  auto res = vectorize(samples, vocab, space, cfg.strict_labels);
  if (res.dropped_labels)
    std::cerr << "vectorize: dropped " << res.dropped_labels << " unknown labels\n";
  save_dataset(res.ds, out_dir);
  return {out_dir / "manifest.json"};
}

Artifacts stage_select(const PipelineConfig& cfg, const fs::path& in_dir,
                       const fs::path& out_dir) {
  auto ds = load_dataset(in_dir);
  auto report = generalizable_subset(ds, cfg.selection);
  auto projected = project(ds, report.final_features);
  save_dataset(projected, out_dir);
  fs::path report_path = cfg.reports_dir / "selection.json";
  write_json(report_path, to_json(report));
  return {out_dir / "manifest.json", report_path};
}

Artifacts stage_augment(const PipelineConfig& cfg, const fs::path& in_dir,
                        const fs::path& out_dir) {
  auto ds = load_dataset(in_dir);
  AugmentReport report;
  auto augmented = mlsmote(ds, cfg.augment, &report);
  save_dataset(augmented, out_dir);
  fs::path report_path = cfg.reports_dir / "augment.json";
  write_json(report_path, to_json(report, ds.labels));
  return {out_dir / "manifest.json", report_path};
}

Artifacts stage_train(const PipelineConfig& cfg, const fs::path& in_dir,
                      const LearnerParams& params) {
  auto ds = load_dataset(in_dir);
  auto model = fit_by_strategy(ds, cfg.strategy, params);
  if (cfg.model_path.has_parent_path())
    fs::create_directories(cfg.model_path.parent_path());
  save_model(model, cfg.model_path);
  return {cfg.model_path};
}

Artifacts stage_evaluate(const PipelineConfig& cfg, const fs::path& in_dir,
                         bool print_table = true) {
  auto ds = load_dataset(in_dir);
  auto model = load_model(cfg.model_path);
  auto y_pred = predict(model, ds);
  auto report = evaluate(ds.Y, y_pred);
  fs::path report_path = cfg.reports_dir / "evaluation.json";
  write_json(report_path, to_json(report, ds.labels.names()));
  if (print_table) std::cout << format_metrics_table(report);
  return {report_path};
}

json predict_one(const PtaModel& model, const BinMatrix& row_matrix,
                 const std::string& sha) {
  auto y = predict(model, row_matrix);
  std::vector<std::string> names;
  for (std::size_t l = 0; l < model.labels.size(); ++l)
    if (y(0, l)) names.push_back(model.labels.name(l));
  json out{{"sha256", sha}, {"tactics", json::array()}, {"techniques", json::array()}};
  out[model.labels.kind() == LabelKind::tactic ? "tactics" : "techniques"] = names;
  return out;
}

// One JSON object per app: {sha256, tactics, techniques}; each loaded model
// fills in the list for its own task.
Artifacts stage_predict(const std::vector<PtaModel>& models,
                        const std::vector<RawSample>& samples, const fs::path& out_path) {
  if (models.empty()) throw ConfigError("predict needs at least one model");
  std::string out;
  for (const auto& s : samples) {
    json obj{{"sha256", s.sha256}, {"tactics", json::array()}, {"techniques", json::array()}};
    for (const auto& model : models) {
      auto ds = vectorize({s}, model.vocab, model.labels, /*strict=*/false).ds;
      json one = predict_one(model, ds.X, s.sha256);
      const char* key = model.labels.kind() == LabelKind::tactic ? "tactics" : "techniques";
      obj[key] = one[key];
    }
    out += obj.dump() + "\n";
  }
  if (out_path.empty()) {
    std::cout << out;
    return {};
  }
  write_text(out_path, out);
  return {out_path};
}

Artifacts stage_explain_grid(const PipelineConfig& cfg, const fs::path& in_dir) {
  auto ds = load_dataset(in_dir);
  auto model = load_model(cfg.model_path);
  TopFeaturesConfig tf;
  tf.top_n = cfg.explain_top_n;
  tf.permutations = cfg.explain_permutations;
  tf.max_instances = cfg.explain_max_instances;
  tf.max_background = cfg.explain_max_background;
  tf.seed = cfg.explain_seed;
  auto report = top_features_per_label(model, ds, tf);

  json per_label = json::array();
  for (std::size_t l = 0; l < report.per_label.size(); ++l) {
    json feats = json::array();
    for (const auto& [f, score] : report.per_label[l])
      feats.push_back({{"feature", ds.vocab.name(f)}, {"mean_abs_phi", score}});
    per_label.push_back({{"label", model.labels.name(l)}, {"top_features", feats}});
  }
  fs::path json_path = cfg.reports_dir / "attribution.json";
  write_json(json_path, json{{"schema_version", 1},
                             {"top_n", tf.top_n},
                             {"permutations", tf.permutations},
                             {"per_label", per_label}});
  fs::path csv_path = cfg.reports_dir / "heatmap.csv";
  write_text(csv_path, grid_csv(report, ds.vocab, model.labels));
  return {json_path, csv_path};
}

Artifacts stage_export_kb(const PipelineConfig& cfg, const fs::path& samples_path) {
  auto samples = read_samples_jsonl(samples_path.string());
  fs::path out_path = cfg.reports_dir / "knowledge_base.csv";
  write_text(out_path, export_knowledge_base(samples));
  return {out_path};
}

void write_manifest(const PipelineConfig& cfg, const Artifacts& artifacts) {
  json list = json::array();
  for (const auto& p : artifacts)
    list.push_back({{"name", p.filename().string()},
                    {"path", p.string()},
                    {"fingerprint", fnv1a64(ReportCache::read_file(p))}});
  write_json(cfg.reports_dir / "latest.json", json{{"schema_version", 1},
                                                   {"artifacts", list}});
}

// Append-only run history; carries wall-clock timestamps and is therefore the
// one reports file excluded from byte-determinism comparisons.
void append_run_log(const PipelineConfig& cfg, const std::string& what) {
  fs::create_directories(cfg.reports_dir);
  std::ofstream log(cfg.reports_dir / "runs.log", std::ios::app);
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  log << buf << " " << what << "\n";
}

int run_pipeline(const PipelineConfig& cfg,
                 const std::map<std::string, std::string>& overrides) {
  cfg.validate();
  Artifacts all;
  auto add = [&](Artifacts a) { all.insert(all.end(), a.begin(), a.end()); };

  std::vector<RawSample> samples;
  add(stage_ingest(cfg, &samples));
  fs::path samples_path = cfg.dataset_dir / "samples.jsonl";
  fs::path full_dir = cfg.dataset_dir / "full";
  fs::path selected_dir = cfg.dataset_dir / "selected";
  fs::path train_dir = cfg.dataset_dir / "train";
  fs::path test_dir = cfg.dataset_dir / "test";

  add(stage_vectorize(cfg, samples_path, full_dir));
  add(stage_select(cfg, full_dir, selected_dir));

  auto selected = load_dataset(selected_dir);
  auto [train, test] = split(selected, cfg.split);
  save_dataset(test, test_dir);
  all.push_back(test_dir / "manifest.json");
  if (cfg.augment_enabled) {
    AugmentReport report;
    auto augmented = mlsmote(train, cfg.augment, &report);
    save_dataset(augmented, train_dir);
    fs::path report_path = cfg.reports_dir / "augment.json";
    write_json(report_path, to_json(report, train.labels));
    all.push_back(report_path);
  } else {
    save_dataset(train, train_dir);
  }
  all.push_back(train_dir / "manifest.json");

  add(stage_train(cfg, train_dir, effective_params(cfg, overrides)));
  add(stage_evaluate(cfg, test_dir));

  auto model = load_model(cfg.model_path);
  add(stage_predict({model}, samples, cfg.reports_dir / "predictions.jsonl"));
  add(stage_explain_grid(cfg, train_dir));
  add(stage_export_kb(cfg, samples_path));

  write_manifest(cfg, all);
  append_run_log(cfg, "pipeline");
  return 0;
}

// ---------------------------------------------------------------------------
// Argument plumbing: every stage option is a config key; file values load
// first, then command line overrides apply on top via the same parser.
// ---------------------------------------------------------------------------

struct SubCtx {
  CLI::App* sub = nullptr;
  std::string config_path;
  std::map<std::string, std::string> overrides;

  PipelineConfig config() const {
    PipelineConfig cfg;
    if (!config_path.empty()) apply_config_pairs(cfg, read_config_pairs(config_path));
    apply_config_pairs(cfg, overrides);
    if (cfg.api_key.empty())
      if (const char* key = std::getenv("DROIDTTP_VT_API_KEY")) cfg.api_key = key;
    return cfg;
  }
};

std::string flag_name(const std::string& key) {
  std::string name = "--" + key;
  for (auto& c : name)
    if (c == '_') c = '-';
  return name;
}

void add_keys(SubCtx& ctx, const std::vector<std::pair<std::string, std::string>>& keys) {
  for (const auto& [key, help] : keys) {
    std::string k = key;
    auto* self = &ctx;
    ctx.sub->add_option_function<std::string>(
        flag_name(key), [self, k](const std::string& v) { self->overrides[k] = v; }, help);
  }
}

void add_bool_flag(SubCtx& ctx, const std::string& key, const std::string& help) {
  auto* self = &ctx;
  std::string k = key;
  ctx.sub->add_flag_function(
      flag_name(key) + ",!" + flag_name("no_" + key),
      [self, k](std::int64_t count) { self->overrides[k] = count > 0 ? "true" : "false"; },
      help);
}

void add_config_opt(SubCtx& ctx) {
  ctx.sub->add_option("--config", ctx.config_path, "flat key = value config file")
      ->check(CLI::ExistingFile);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DroidTTP: map Android apps to MITRE ATT&CK tactics and techniques"};
  app.require_subcommand(1);
  int rc = 0;

  // ---- ingest ----
  SubCtx ingest;
  ingest.sub = app.add_subcommand("ingest", "fetch reports and extract labeled samples");
  add_config_opt(ingest);
  add_keys(ingest, {{"hashes_file", "sha256 list, one per line"},
                    {"labels_file", "JSON label map keyed by sha256"},
                    {"cache_dir", "report cache directory"},
                    {"fixture_dir", "offline report fixtures"},
                    {"dataset_dir", "output directory for samples.jsonl"},
                    {"reports_dir", "output directory for ingest.json"},
                    {"api_key", "VirusTotal API key (or DROIDTTP_VT_API_KEY)"},
                    {"rate_limit_seconds", "minimum seconds between requests"}});
  add_bool_flag(ingest, "offline", "cache and fixtures only, no network");
  ingest.sub->callback([&] {
    auto cfg = ingest.config();
    stage_ingest(cfg, nullptr);
    append_run_log(cfg, "ingest");
  });

  // ---- vectorize ----
  SubCtx vec;
  vec.sub = app.add_subcommand("vectorize", "build the binary feature/label matrices");
  add_config_opt(vec);
  std::string vec_samples, vec_out;
  vec.sub->add_option("--samples", vec_samples, "raw samples JSONL");
  vec.sub->add_option("--out", vec_out, "output dataset directory");
  add_keys(vec, {{"dataset_dir", "dataset root (defaults both paths)"},
                 {"task", "tactic | technique"}});
  add_bool_flag(vec, "strict_labels", "reject labels outside the label space");
  vec.sub->callback([&] {
    auto cfg = vec.config();
    fs::path samples = vec_samples.empty() ? cfg.dataset_dir / "samples.jsonl"
                                           : fs::path(vec_samples);
    fs::path out = vec_out.empty() ? cfg.dataset_dir / "full" : fs::path(vec_out);
    stage_vectorize(cfg, samples, out);
    append_run_log(cfg, "vectorize");
  });

  // ---- select ----
  SubCtx sel;
  sel.sub = app.add_subcommand("select", "chi-square generalizable feature subset");
  add_config_opt(sel);
  std::string sel_in, sel_out;
  sel.sub->add_option("--in", sel_in, "input dataset directory");
  sel.sub->add_option("--out", sel_out, "projected dataset directory");
  add_keys(sel, {{"dataset_dir", "dataset root (defaults both paths)"},
                 {"reports_dir", "output directory for selection.json"},
                 {"select_m", "top features per label"},
                 {"select_seeds", "comma-separated split seeds"},
                 {"select_variant", "presence2 | contingency4"},
                 {"select_test_fraction", "held-out fraction of each re-split"}});
  sel.sub->callback([&] {
    auto cfg = sel.config();
    fs::path in = sel_in.empty() ? cfg.dataset_dir / "full" : fs::path(sel_in);
    fs::path out = sel_out.empty() ? cfg.dataset_dir / "selected" : fs::path(sel_out);
    stage_select(cfg, in, out);
    append_run_log(cfg, "select");
  });

  // ---- augment ----
  SubCtx aug;
  aug.sub = app.add_subcommand("augment", "MLSMOTE minority-label oversampling");
  add_config_opt(aug);
  std::string aug_in, aug_out;
  aug.sub->add_option("--in", aug_in, "input dataset directory");
  aug.sub->add_option("--out", aug_out, "augmented dataset directory");
  add_keys(aug, {{"dataset_dir", "dataset root (defaults both paths)"},
                 {"reports_dir", "output directory for augment.json"},
                 {"augment_k", "nearest neighbors"},
                 {"augment_percent", "target percent of the majority count"},
                 {"augment_seed", "RNG seed"},
                 {"augment_rule", "irlbl_meanir | below_mean_frequency"}});
  add_bool_flag(aug, "augment_interpolate", "interpolation variant of synthesis");
  aug.sub->callback([&] {
    auto cfg = aug.config();
    fs::path in = aug_in.empty() ? cfg.dataset_dir / "selected" : fs::path(aug_in);
    fs::path out = aug_out.empty() ? cfg.dataset_dir / "augmented" : fs::path(aug_out);
    stage_augment(cfg, in, out);
    append_run_log(cfg, "augment");
  });

  // ---- train ----
  SubCtx train;
  train.sub = app.add_subcommand("train", "fit a problem-transformation model");
  add_config_opt(train);
  std::string train_in;
  train.sub->add_option("--in", train_in, "training dataset directory");
  add_keys(train, {{"dataset_dir", "dataset root (defaults --in)"},
                   {"model_path", "output model JSON"},
                   {"strategy", "br | cc | lp"},
                   {"learner", "tree | forest | gbt"},
                   {"preset", "published hyperparameter preset, e.g. paper-lp-tactic"},
                   {"criterion", "gini | entropy"},
                   {"max_depth", "tree depth limit"},
                   {"min_samples_split", "minimum samples to split"},
                   {"min_samples_leaf", "minimum samples per leaf"},
                   {"max_leaf_nodes", "best-first leaf budget"},
                   {"n_estimators", "trees (forest) or rounds (gbt)"},
                   {"max_features", "all | sqrt | log2 | auto"},
                   {"learning_rate", "gbt shrinkage"},
                   {"gamma", "gbt minimum split loss reduction"},
                   {"learner_seed", "RNG seed"}});
  train.sub->callback([&] {
    auto cfg = train.config();
    fs::path in = train_in.empty() ? cfg.dataset_dir / "train" : fs::path(train_in);
    stage_train(cfg, in, effective_params(cfg, train.overrides));
    append_run_log(cfg, "train");
  });

  // ---- evaluate ----
  SubCtx eval;
  eval.sub = app.add_subcommand("evaluate", "score a model on a labeled dataset");
  add_config_opt(eval);
  std::string eval_in;
  eval.sub->add_option("--in", eval_in, "evaluation dataset directory");
  add_keys(eval, {{"dataset_dir", "dataset root (defaults --in)"},
                  {"model_path", "model JSON"},
                  {"reports_dir", "output directory for evaluation.json"}});
  eval.sub->callback([&] {
    auto cfg = eval.config();
    fs::path in = eval_in.empty() ? cfg.dataset_dir / "test" : fs::path(eval_in);
    stage_evaluate(cfg, in);
    append_run_log(cfg, "evaluate");
  });

  // ---- predict ----
  SubCtx pred;
  pred.sub = app.add_subcommand("predict", "predicted tactics/techniques per app");
  add_config_opt(pred);
  std::vector<std::string> pred_models;
  std::string pred_samples, pred_hashes, pred_out;
  pred.sub->add_option("--model", pred_models, "model JSON (repeatable, one per task)");
  pred.sub->add_option("--samples", pred_samples, "raw samples JSONL input");
  pred.sub->add_option("--hashes", pred_hashes, "sha256 list input (fetched via cache)");
  pred.sub->add_option("--out", pred_out, "output JSONL (default stdout)");
  add_keys(pred, {{"model_path", "model JSON (alternative to --model)"},
                  {"cache_dir", "report cache directory"},
                  {"fixture_dir", "offline report fixtures"},
                  {"api_key", "VirusTotal API key (or DROIDTTP_VT_API_KEY)"},
                  {"rate_limit_seconds", "minimum seconds between requests"}});
  add_bool_flag(pred, "offline", "cache and fixtures only, no network");
  pred.sub->callback([&] {
    auto cfg = pred.config();
    std::vector<PtaModel> models;
    for (const auto& m : pred_models) models.push_back(load_model(m));
    if (models.empty()) models.push_back(load_model(cfg.model_path));

    std::vector<RawSample> samples;
    if (!pred_samples.empty()) {
      samples = read_samples_jsonl(pred_samples);
    } else if (!pred_hashes.empty()) {
      ReportCache cache(cfg.cache_dir);
      RateLimiter limiter(std::chrono::milliseconds(cfg.rate_limit_seconds * 1000));
      FetchOptions opt;
      opt.mode = cfg.offline ? FetchMode::offline : FetchMode::online;
      opt.fixture_dir = cfg.fixture_dir;
      opt.api_key = cfg.api_key;
      if (!cfg.offline) opt.rate_limiter = &limiter;
      for (const auto& sha : read_hash_list(pred_hashes)) {
        auto entry = fetch_report(sha, cache, opt);
        if (entry.status == VerificationStatus::unknown) {
          entry.status = verify_android(entry);
          cache.update_status(sha, entry.status);
        }
        samples.push_back(parse_static_features(entry));
      }
    } else {
      throw ConfigError("predict needs --samples or --hashes");
    }
    stage_predict(models, samples, pred_out);
  });

  // ---- explain ----
  SubCtx expl;
  expl.sub = app.add_subcommand("explain", "Shapley attributions for a prediction");
  add_config_opt(expl);
  std::string expl_in, expl_label, expl_instance, expl_out;
  bool expl_grid = false;
  expl.sub->add_option("--in", expl_in, "dataset directory (background + instances)");
  expl.sub->add_option("--label", expl_label, "label name to explain");
  expl.sub->add_option("--instance", expl_instance, "sha256 of the instance");
  expl.sub->add_option("--out", expl_out, "output JSON (default stdout)");
  expl.sub->add_flag("--grid", expl_grid, "emit per-label top features + heatmap CSV");
  add_keys(expl, {{"dataset_dir", "dataset root (defaults --in)"},
                  {"model_path", "model JSON"},
                  {"reports_dir", "output directory in --grid mode"},
                  {"explain_top_n", "features per label in --grid mode"},
                  {"explain_permutations", "Monte Carlo permutations"},
                  {"explain_max_instances", "grid-mode instance subsample"},
                  {"explain_max_background", "background row subsample"},
                  {"explain_seed", "RNG seed"}});
  expl.sub->callback([&] {
    auto cfg = expl.config();
    fs::path in = expl_in.empty() ? cfg.dataset_dir / "train" : fs::path(expl_in);
    if (expl_grid) {
      stage_explain_grid(cfg, in);
      append_run_log(cfg, "explain");
      return;
    }
    if (expl_label.empty() || expl_instance.empty())
      throw ConfigError("explain needs --label and --instance (or --grid)");
    auto ds = load_dataset(in);
    auto model = load_model(cfg.model_path);
    auto label = model.labels.index_of(expl_label);
    if (!label) throw UnknownLabel(expl_label + " not in the model's label space");
    std::size_t row = 0;
    for (; row < ds.n(); ++row)
      if (ds.ids[row] == expl_instance) break;
    if (row == ds.n()) throw NotFound(expl_instance + " not in the dataset");

    Rng rng(cfg.explain_seed);
    std::vector<std::size_t> idx(ds.n());
    std::iota(idx.begin(), idx.end(), 0);
    rng.shuffle(idx);
    idx.resize(std::min(cfg.explain_max_background, idx.size()));
    std::sort(idx.begin(), idx.end());
    auto background = ds.X.select_rows(idx);

    std::vector<std::uint8_t> x(ds.X.row_ptr(row), ds.X.row_ptr(row) + ds.X.cols());
    auto res = shapley_attribution(model, x, *label, background,
                                   cfg.explain_permutations, cfg.explain_seed,
                                   expl_instance);
    json j = to_json(res, ds.vocab, expl_label);
    if (expl_out.empty()) std::cout << j.dump(2) << "\n";
    else write_json(expl_out, j);
  });

  // ---- export-kb ----
  SubCtx kb;
  kb.sub = app.add_subcommand("export-kb", "knowledge base CSV from raw samples");
  add_config_opt(kb);
  std::string kb_samples, kb_out;
  kb.sub->add_option("--samples", kb_samples, "raw samples JSONL");
  kb.sub->add_option("--out", kb_out, "output CSV path");
  add_keys(kb, {{"dataset_dir", "dataset root (defaults --samples)"},
                {"reports_dir", "output directory (defaults --out)"}});
  kb.sub->callback([&] {
    auto cfg = kb.config();
    fs::path samples = kb_samples.empty() ? cfg.dataset_dir / "samples.jsonl"
                                          : fs::path(kb_samples);
    if (!kb_out.empty()) {
      write_text(kb_out, export_knowledge_base(read_samples_jsonl(samples.string())));
    } else {
      stage_export_kb(cfg, samples);
    }
    append_run_log(cfg, "export-kb");
  });

  // ---- pipeline ----
  SubCtx pipe;
  pipe.sub = app.add_subcommand("pipeline", "run every stage end to end");
  add_config_opt(pipe);
  pipe.sub->get_option("--config")->required();
  add_keys(pipe, {{"hashes_file", "sha256 list"},
                  {"labels_file", "label map JSON"},
                  {"cache_dir", "report cache directory"},
                  {"fixture_dir", "offline report fixtures"},
                  {"dataset_dir", "dataset root"},
                  {"reports_dir", "reports root"},
                  {"model_path", "model JSON"},
                  {"task", "tactic | technique"},
                  {"strategy", "br | cc | lp"},
                  {"learner", "tree | forest | gbt"},
                  {"preset", "published hyperparameter preset"}});
  add_bool_flag(pipe, "offline", "cache and fixtures only, no network");
  add_bool_flag(pipe, "augment", "MLSMOTE on the training fold");
  pipe.sub->callback([&] {
    auto cfg = pipe.config();
    run_pipeline(cfg, pipe.overrides);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    std::cerr << app.help() << "\n";
    return 2;
  } catch (const droidttp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
