#pragma once

#include <nlohmann/json.hpp>

#include "rauzy/aiet.hpp"
#include "rauzy/analysis.hpp"
#include "rauzy/circle.hpp"
#include "rauzy/combinat.hpp"
#include "rauzy/iet.hpp"
#include "rauzy/renorm.hpp"
#include "rauzy/spectral.hpp"

namespace rauzy {

using Json = nlohmann::ordered_json;

// Readers throw DomainError on malformed or invalid input. Rationals are
// written as "p/q" strings, reals as round-trip decimal strings.

/// {"top": [...], "bottom": [...]}
Json to_json(const Perm& p);
Perm perm_from_json(const Json& j);

/// {"perm": {...}, "lambda": ["1/3", "2/3"]}
Json to_json(const IET& t);
IET iet_from_json(const Json& j);

/// {"perm": {...}, "lengths": [...], "log_slope": [...], "precision_bits": 256}
Json to_json(const AIET& f);
/// Lengths and log-slopes accept decimal or "p/q" strings, or numbers.
AIET aiet_from_json(const Json& j);

/// {"breaks": [...], "slopes": [...], "shift": "0", "precision_bits": 256};
/// shift and precision_bits are optional.
Json to_json(const PLCircleMap& f);
PLCircleMap pl_map_from_json(const Json& j, BigReal::Precision default_bits = BigReal::default_precision());

Json to_json(const RatVec& v);
RatVec rat_vec_from_json(const Json& j);
Json to_json(const IntMatrix& m);  ///< rows of decimal integer strings

/// Node list (key, rows) and arc list (from, type, to).
Json to_json(const RauzyClass& cls);
Json to_json(const RotationPath& path);
Json to_json(const GenericConditionReport& rep);
Json to_json(const CriterionReport& rep);
Json to_json(const LyapunovEstimate& est);
Json to_json(const CFExpansion& cf);

/// Parses a JSON document; DomainError with the parser message on failure.
Json parse_json(const std::string& text);

}  // namespace rauzy
