#ifndef DROIDTTP_RAW_SAMPLE_HPP
#define DROIDTTP_RAW_SAMPLE_HPP

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "common.hpp"

namespace droidttp {


// A parsed Android app report: the six static feature categories plus any
// attached multi-label assignment. Lists are kept deduplicated and sorted.
struct RawSample {
  std::string sha256;
  std::vector<std::string> permissions;
  std::vector<std::string> activities;
  std::vector<std::string> services;
  std::vector<std::string> receivers;
  std::vector<std::string> intent_actions;
  std::vector<std::string> intent_categories;
  std::vector<std::string> tactics;
  std::vector<std::string> techniques;

  void normalize() {
    permissions = sorted_unique(std::move(permissions));
    activities = sorted_unique(std::move(activities));
    services = sorted_unique(std::move(services));
    receivers = sorted_unique(std::move(receivers));
    intent_actions = sorted_unique(std::move(intent_actions));
    intent_categories = sorted_unique(std::move(intent_categories));
    tactics = sorted_unique(std::move(tactics));
    techniques = sorted_unique(std::move(techniques));
  }

  void validate() const {
    if (!is_sha256_hex(sha256)) throw InvalidInput("bad sha256: " + sha256);
    for (const auto& t : techniques)
      if (!is_technique_id(t)) throw InvalidInput("bad technique id: " + t);
  }

  // Namespaced feature names in vocabulary order semantics: prefix + raw name.
  std::vector<std::string> namespaced_features() const {
    std::vector<std::string> out;
    out.reserve(permissions.size() + activities.size() + services.size() +
                receivers.size() + intent_actions.size() + intent_categories.size());
    for (const auto& v : permissions) out.push_back("perm:" + v);
    for (const auto& v : activities) out.push_back("act:" + v);
    for (const auto& v : services) out.push_back("svc:" + v);
    for (const auto& v : receivers) out.push_back("rcv:" + v);
    for (const auto& v : intent_actions) out.push_back("ia:" + v);
    for (const auto& v : intent_categories) out.push_back("ic:" + v);
    return out;
  }
};

inline json to_json(const RawSample& s) {
  return json{{"sha256", s.sha256},
              {"permissions", s.permissions},
              {"activities", s.activities},
              {"services", s.services},
              {"receivers", s.receivers},
              {"intent_actions", s.intent_actions},
              {"intent_categories", s.intent_categories},
              {"tactics", s.tactics},
              {"techniques", s.techniques}};
}

inline RawSample raw_sample_from_json(const json& j) {
  RawSample s;
  auto get_list = [&](const char* key) {
    std::vector<std::string> v;
    if (j.contains(key)) v = j.at(key).get<std::vector<std::string>>();
    return v;
  };
  s.sha256 = j.at("sha256").get<std::string>();
  s.permissions = get_list("permissions");
  s.activities = get_list("activities");
  s.services = get_list("services");
  s.receivers = get_list("receivers");
  s.intent_actions = get_list("intent_actions");
  s.intent_categories = get_list("intent_categories");
  s.tactics = get_list("tactics");
  s.techniques = get_list("techniques");
  s.normalize();
  s.validate();
  return s;
}

// JSON Lines, one RawSample per line.
inline std::vector<RawSample> read_samples_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<RawSample> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError("bad JSONL line in " + path + ": " + e.what());
    }
    out.push_back(raw_sample_from_json(j));
  }
  return out;
}

inline void write_samples_jsonl(const std::string& path,
                                const std::vector<RawSample>& samples) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  for (const auto& s : samples) out << to_json(s).dump() << "\n";
}

// Label map file: JSON object keyed by sha256, values {tactics:[],techniques:[]}.
struct LabelAssignment {
  std::vector<std::string> tactics;
  std::vector<std::string> techniques;
};

using LabelMap = std::map<std::string, LabelAssignment>;

inline LabelMap read_label_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad label map JSON: ") + e.what());
  }
  LabelMap m;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!is_sha256_hex(it.key())) throw InvalidInput("label map key is not a sha256: " + it.key());
    LabelAssignment a;
    if (it.value().contains("tactics"))
      a.tactics = it.value().at("tactics").get<std::vector<std::string>>();
    if (it.value().contains("techniques"))
      a.techniques = it.value().at("techniques").get<std::vector<std::string>>();
    m.emplace(it.key(), std::move(a));
  }
  return m;
}

}  // namespace droidttp

#endif  // DROIDTTP_RAW_SAMPLE_HPP
