#pragma once

#include <string>

#include <json.hpp>

#include "gifslab/balanced_builder.hpp"
#include "gifslab/gifs_systems.hpp"
#include "gifslab/lipschitz_ext.hpp"
#include "gifslab/metric_core.hpp"

namespace gifslab {

using json = nlohmann::json;

// CompactNet: {"dim": int, "resolution": float, "points": [[float,...],...]}
// Doubles round-trip bit-exactly through dump/parse.
json to_json(const CompactNet& net);
CompactNet net_from_json(const json& j);

json to_json(const ArityProfile& profile);
ArityProfile profile_from_json(const json& j);

json to_json(const Address& a);
Address address_from_json(const json& j);

// CellTree: {"ambient": [lo,hi], "q": float, "arities": [...], "b": [...],
//            "phi": {"1": [1], ...}, "cells": {"1.2.3": [lo,hi], ...}}
json to_json(const CellTree& tree);
CellTree tree_from_json(const json& j);

json to_json(const VerifyReport& report);

// GIFS_inf systems serialize by construction recipe (variant + parameters +
// inline tree) alongside a descriptive map list; loading rebuilds through
// the corresponding builder. variant is "witness", "refined" or "union";
// r is the target bound for the latter two.
json serialize_inf_system(const GifsInfSystem& sys, const std::string& variant, double r = 0.0);
GifsInfSystem inf_system_from_json(const json& j);

json to_json(const LipschitzCertificate& cert);

// Extended systems: the full anchor table (input digit classes -> output
// coordinates) per map.
json to_json(const ExtendedSystem& sys);

// CLI-facing 1-D affine descriptions of finite-order systems.
IfsSystem ifs_from_json(const json& j);
GifsSystem gifs_from_json(const json& j);

std::string net_to_csv(const CompactNet& net);

// FNV-1a over the canonical dump; embedded in every CLI report.
std::string config_hash(const json& config);

json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace gifslab
