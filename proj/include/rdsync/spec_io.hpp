#pragma once

#include <string>

#include "rdsync/rds.hpp"

namespace rdsync {

// Chain spec files are UTF-8 JSON:
//   {"states": ["a", ...],
//    "transitions": [{"from": "a", "to": "b", "prob": 0.5}, ...],
//    "rds": {"kind": "independent"}                      // optional
//         | {"kind": "explicit",
//            "maps": [{"prob": 0.5, "map": {"a": "b", ...}}, ...]}}

struct ParsedSpec {
  ChainSpec chain;
  bool has_rds = false;
  std::string rds_kind;                      // "independent" | "explicit"
  RandomMapDistribution explicit_maps;       // by state label, resolved on build
};

ParsedSpec parse_spec_json(const std::string& json_text);
ParsedSpec load_spec_file(const std::string& path);

// Builds the representation named in the spec ("independent" when absent).
RdsRepresentation build_rds(const ParsedSpec& spec, const TransitionKernel& kernel);

std::string spec_to_json(const ChainSpec& chain);

}  // namespace rdsync
