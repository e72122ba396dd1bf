#include "rdsync/spec_io.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace rdsync {

using nlohmann::json;

ParsedSpec parse_spec_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SpecError("BadJson", std::string("spec is not valid JSON: ") + e.what());
  }
  ParsedSpec spec;
  if (!j.contains("states") || !j["states"].is_array()) {
    throw SpecError("BadSpec", "spec must contain a 'states' array");
  }
  std::unordered_map<std::string, int> index;
  for (const auto& s : j["states"]) {
    spec.chain.states.push_back(s.get<std::string>());
    index.emplace(spec.chain.states.back(), static_cast<int>(spec.chain.states.size()) - 1);
  }
  if (!j.contains("transitions") || !j["transitions"].is_array()) {
    throw SpecError("BadSpec", "spec must contain a 'transitions' array");
  }
  for (const auto& t : j["transitions"]) {
    spec.chain.transitions.push_back(
        {t.at("from").get<std::string>(), t.at("to").get<std::string>(),
         t.at("prob").get<double>()});
  }
  if (j.contains("rds")) {
    spec.has_rds = true;
    spec.rds_kind = j["rds"].at("kind").get<std::string>();
    if (spec.rds_kind == "explicit") {
      for (const auto& m : j["rds"].at("maps")) {
        spec.explicit_maps.probs.push_back(m.at("prob").get<double>());
        std::vector<int> map(spec.chain.states.size(), -1);
        for (const auto& [from, to] : m.at("map").items()) {
          auto fi = index.find(from);
          auto ti = index.find(to.get<std::string>());
          if (fi == index.end()) throw UnknownState("unknown state '" + from + "' in map");
          if (ti == index.end()) {
            throw UnknownState("unknown state '" + to.get<std::string>() + "' in map");
          }
          map[fi->second] = ti->second;
        }
        for (size_t i = 0; i < map.size(); ++i) {
          if (map[i] < 0) {
            throw SpecError("BadMapFamily",
                            "map is not total: no image for state '" +
                                spec.chain.states[i] + "'");
          }
        }
        spec.explicit_maps.maps.push_back(std::move(map));
      }
    } else if (spec.rds_kind != "independent") {
      throw SpecError("BadSpec", "rds kind must be 'independent' or 'explicit'");
    }
  }
  return spec;
}

ParsedSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("FileNotFound", "cannot open spec file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec_json(buf.str());
}

RdsRepresentation build_rds(const ParsedSpec& spec, const TransitionKernel& kernel) {
  if (spec.has_rds && spec.rds_kind == "explicit") {
    return RdsRepresentation::make_explicit(spec.explicit_maps, kernel);
  }
  return RdsRepresentation::make_independent(kernel);
}

std::string spec_to_json(const ChainSpec& chain) {
  json j;
  j["states"] = chain.states;
  j["transitions"] = json::array();
  for (const auto& t : chain.transitions) {
    j["transitions"].push_back({{"from", t.from}, {"to", t.to}, {"prob", t.prob}});
  }
  return j.dump(2);
}

}  // namespace rdsync
