#ifndef DROIDTTP_INGEST_HPP
#define DROIDTTP_INGEST_HPP

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#ifdef CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#endif

#include "common.hpp"
#include "raw_sample.hpp"
#include "taxonomy.hpp"

namespace droidttp {

namespace fs = std::filesystem;

enum class VerificationStatus { android_app, not_android, unknown };

inline std::string to_string(VerificationStatus s) {
  switch (s) {
    case VerificationStatus::android_app: return "android_app";
    case VerificationStatus::not_android: return "not_android";
    default: return "unknown";
  }
}

inline VerificationStatus verification_status_from_string(const std::string& s) {
  if (s == "android_app") return VerificationStatus::android_app;
  if (s == "not_android") return VerificationStatus::not_android;
  return VerificationStatus::unknown;
}

struct ReportCacheEntry {
  std::string sha256;
  std::string bytes;          // raw report JSON
  std::int64_t fetched_at = 0;  // UTC seconds; 0 in offline mode
  VerificationStatus status = VerificationStatus::unknown;
};

// ---------------------------------------------------------------------------
// Report cache: <dir>/<first2>/<sha256>.json + sidecar .meta with timestamp
// and verification status. Re-reading a cached entry never touches the
// network; writes go through a temp file + rename.
// ---------------------------------------------------------------------------

class ReportCache {
 public:
  explicit ReportCache(fs::path dir) : dir_(std::move(dir)) {}

  fs::path report_path(const std::string& sha256) const {
    return dir_ / sha256.substr(0, 2) / (sha256 + ".json");
  }
  fs::path meta_path(const std::string& sha256) const {
    return dir_ / sha256.substr(0, 2) / (sha256 + ".meta");
  }

  bool contains(const std::string& sha256) const {
    return fs::exists(report_path(sha256));
  }

  std::optional<ReportCacheEntry> get(const std::string& sha256) const {
    if (!contains(sha256)) return std::nullopt;
    ReportCacheEntry e;
    e.sha256 = sha256;
    e.bytes = read_file(report_path(sha256));
    if (fs::exists(meta_path(sha256))) {
      json m = json::parse(read_file(meta_path(sha256)));
      e.fetched_at = m.value("fetched_at", std::int64_t{0});
      e.status = verification_status_from_string(m.value("status", "unknown"));
    }
    return e;
  }

  void put(const ReportCacheEntry& e) {
    std::lock_guard<std::mutex> lock(write_mutex_);
    fs::create_directories(report_path(e.sha256).parent_path());
    write_atomic(report_path(e.sha256), e.bytes);
    json m{{"sha256", e.sha256},
           {"fetched_at", e.fetched_at},
           {"status", to_string(e.status)}};
    write_atomic(meta_path(e.sha256), m.dump(2) + "\n");
  }

  void update_status(const std::string& sha256, VerificationStatus status) {
    auto e = get(sha256);
    if (!e) throw NotFound("no cache entry for " + sha256);
    e->status = status;
    put(*e);
  }

  static std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

 private:
  static void write_atomic(const fs::path& p, const std::string& data) {
    fs::path tmp = p;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw IoError("cannot write " + tmp.string());
      out << data;
    }
    fs::rename(tmp, p);
  }

  fs::path dir_;
  std::mutex write_mutex_;
};

// Shared, serialized token source: callers block until the configured minimum
// interval since the previous grant has elapsed.
class RateLimiter {
 public:
  explicit RateLimiter(std::chrono::milliseconds min_interval)
      : min_interval_(min_interval) {}

  void acquire() {
    std::unique_lock<std::mutex> lock(mutex_);
    auto now = std::chrono::steady_clock::now();
    if (last_ && now < *last_ + min_interval_) {
      auto wake = *last_ + min_interval_;
      lock.unlock();
      std::this_thread::sleep_until(wake);
      lock.lock();
      now = std::chrono::steady_clock::now();
    }
    last_ = now;
  }

 private:
  std::chrono::milliseconds min_interval_;
  std::optional<std::chrono::steady_clock::time_point> last_;
  std::mutex mutex_;
};

enum class FetchMode { online, offline };

struct FetchOptions {
  FetchMode mode = FetchMode::offline;
  fs::path fixture_dir;       // searched in offline mode after the cache
  std::string api_key;        // required online
  int max_attempts = 3;       // transient network errors, exponential backoff
  std::chrono::milliseconds backoff_base{500};
  RateLimiter* rate_limiter = nullptr;
  // Injectable transport for tests; returns report bytes or throws
  // NetworkError/NotFound. Defaults to the HTTPS client when unset.
  std::function<std::string(const std::string& sha256, const std::string& api_key)> transport;
};

inline std::string default_transport(const std::string& sha256, const std::string& api_key);

inline ReportCacheEntry fetch_report(const std::string& sha256, ReportCache& cache,
                                     const FetchOptions& opt) {
  if (!is_sha256_hex(sha256)) throw InvalidInput("not a lowercase sha256 hex: " + sha256);

  if (auto cached = cache.get(sha256)) return *cached;

  if (opt.mode == FetchMode::offline) {
    fs::path fixture = opt.fixture_dir / (sha256 + ".json");
    if (opt.fixture_dir.empty() || !fs::exists(fixture))
      throw OfflineMiss("no cached report or fixture for " + sha256);
    ReportCacheEntry e;
    e.sha256 = sha256;
    e.bytes = ReportCache::read_file(fixture);
    e.fetched_at = 0;  // offline entries carry no wall-clock time
    e.status = VerificationStatus::unknown;
    cache.put(e);
    return e;
  }

  if (opt.api_key.empty()) throw ConfigError("online mode requires an API key");
  auto transport = opt.transport
                       ? opt.transport
                       : std::function<std::string(const std::string&, const std::string&)>(
                             default_transport);
  std::string last_error;
  for (int attempt = 0; attempt < opt.max_attempts; ++attempt) {
    if (attempt > 0)
      std::this_thread::sleep_for(opt.backoff_base * (1 << (attempt - 1)));
    if (opt.rate_limiter) opt.rate_limiter->acquire();
    try {
      std::string body = transport(sha256, opt.api_key);
      ReportCacheEntry e;
      e.sha256 = sha256;
      e.bytes = std::move(body);
      e.fetched_at = std::chrono::duration_cast<std::chrono::seconds>(
                         std::chrono::system_clock::now().time_since_epoch())
                         .count();
      e.status = VerificationStatus::unknown;
      cache.put(e);
      return e;
    } catch (const NotFound&) {
      throw;  // the source does not know this hash; retrying will not help
    } catch (const NetworkError& err) {
      last_error = err.what();
    }
  }
  throw NetworkError("fetch failed after " + std::to_string(opt.max_attempts) +
                     " attempts: " + last_error);
}

// ---------------------------------------------------------------------------
// Report parsing. The report schema mirrors VirusTotal v3 file objects:
// data.attributes.type_tag identifies the file kind, data.attributes.androguard
// holds the static-analysis block. Top-level fallbacks keep hand-written
// fixtures short.
// ---------------------------------------------------------------------------

inline const json* find_node(const json& root, std::initializer_list<const char*> keys) {
  const json* cur = &root;
  if (cur->contains("data")) cur = &cur->at("data");
  if (cur->contains("attributes")) cur = &cur->at("attributes");
  for (const char* k : keys)
    if (cur->contains(k)) return &cur->at(k);
  // fall back to the raw root for flat fixtures
  for (const char* k : keys)
    if (root.contains(k)) return &root.at(k);
  return nullptr;
}

inline json parse_report_json(const ReportCacheEntry& entry) {
  try {
    return json::parse(entry.bytes);
  } catch (const json::exception& e) {
    throw ParseError("report " + entry.sha256 + ": " + e.what());
  }
}

inline VerificationStatus verify_android(const ReportCacheEntry& entry) {
  json j = parse_report_json(entry);
  const json* type = find_node(j, {"type_tag", "type"});
  if (!type || !type->is_string()) return VerificationStatus::unknown;
  std::string t = type->get<std::string>();
  std::transform(t.begin(), t.end(), t.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (t.find("android") != std::string::npos || t == "apk")
    return VerificationStatus::android_app;
  return VerificationStatus::not_android;
}

inline std::vector<std::string> string_list(const json& block,
                                            std::initializer_list<const char*> keys) {
  for (const char* k : keys) {
    if (!block.contains(k)) continue;
    const json& v = block.at(k);
    std::vector<std::string> out;
    if (v.is_array()) {
      for (const auto& e : v)
        if (e.is_string()) out.push_back(e.get<std::string>());
    } else if (v.is_object()) {
      for (auto it = v.begin(); it != v.end(); ++it) out.push_back(it.key());
    }
    return sorted_unique(std::move(out));
  }
  return {};
}

inline RawSample parse_static_features(const ReportCacheEntry& entry) {
  if (entry.status == VerificationStatus::not_android)
    throw NotAndroid(entry.sha256 + " is not an Android app");
  if (entry.status != VerificationStatus::android_app)
    throw NotAndroid(entry.sha256 + " is unverified");
  json j = parse_report_json(entry);
  RawSample s;
  s.sha256 = entry.sha256;
  if (const json* ag = find_node(j, {"androguard"})) {
    s.permissions = string_list(*ag, {"permissions", "Permissions"});
    s.activities = string_list(*ag, {"activities", "Activities"});
    s.services = string_list(*ag, {"services", "Services"});
    s.receivers = string_list(*ag, {"receivers", "Receivers"});
    s.intent_actions = string_list(*ag, {"intent_actions", "IntentActions"});
    s.intent_categories = string_list(*ag, {"intent_categories", "IntentCategories"});
  }
  s.normalize();
  s.validate();
  return s;
}

// Copies the label-map assignment onto the sample. Tactics are the union of
// the explicit list and the default tactics of every listed technique; labels
// already present on the sample are never removed.
inline RawSample attach_labels(RawSample sample, const LabelMap& labels) {
  auto it = labels.find(sample.sha256);
  if (it == labels.end()) throw UnknownHash(sample.sha256 + " absent from label map");
  const auto& a = it->second;
  for (const auto& t : a.tactics) sample.tactics.push_back(t);
  for (const auto& tech : a.techniques) {
    sample.techniques.push_back(tech);
    auto m = technique_to_tactics().find(tech);
    if (m != technique_to_tactics().end())
      for (const auto& tac : m->second) sample.tactics.push_back(tac);
  }
  sample.normalize();
  sample.validate();
  return sample;
}

#ifdef CPPHTTPLIB_OPENSSL_SUPPORT
inline std::string default_transport(const std::string& sha256, const std::string& api_key) {
  httplib::SSLClient cli("www.virustotal.com");
  cli.set_connection_timeout(10);
  cli.set_read_timeout(30);
  httplib::Headers headers{{"x-apikey", api_key}};
  auto res = cli.Get(("/api/v3/files/" + sha256).c_str(), headers);
  if (!res) throw NetworkError("no response from VirusTotal");
  if (res->status == 404) throw NotFound(sha256 + " unknown to VirusTotal");
  if (res->status != 200)
    throw NetworkError("HTTP " + std::to_string(res->status));
  return res->body;
}
#else
inline std::string default_transport(const std::string&, const std::string&) {
  throw NetworkError("built without TLS support; online mode unavailable");
}
#endif

}  // namespace droidttp

#endif  // DROIDTTP_INGEST_HPP
