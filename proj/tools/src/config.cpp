#include "rauzy_cli/config.hpp"

#include <cstdlib>
#include <string>

#include "rauzy/error.hpp"

namespace rauzy::cli {

namespace {

template <class T>
void take(const Json& j, const char* key, T& dst) {
  try {
    dst = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw DomainError(std::string("config key '") + key + "' has the wrong type");
  }
}

}  // namespace

Json ExperimentConfig::to_json() const {
  Json j{{"command", command},
         {"d", d},
         {"perm", perm},
         {"rotation", rotation},
         {"input", input},
         {"map", map},
         {"preset", preset},
         {"lambda", lambda},
         {"alpha", alpha},
         {"samples", samples},
         {"seed", seed ? Json(*seed) : Json(nullptr)},
         {"lambda_bits", lambda_bits},
         {"precision_bits", precision_bits},
         {"n_blocks", n_blocks},
         {"max_iter", max_iter},
         {"n", n},
         {"lookahead", lookahead},
         {"window", window},
         {"x0", x0},
         {"c0", c0},
         {"schedule", schedule},
         {"levels", levels},
         {"omega", omega},
         {"clock", clock},
         {"format", format},
         {"jobs", jobs}};
  return j;
}

void ExperimentConfig::apply_json(const Json& j) {
  if (!j.is_object()) throw DomainError("config must be a JSON object");
  // a manifest carries its config under "config"
  const Json& c = j.contains("config") && j.at("config").is_object() ? j.at("config") : j;
  for (const auto& [key, value] : c.items()) {
    if (key == "command") {
      // the subcommand on the command line wins; a mismatch is an error
      std::string other;
      take(c, "command", other);
      if (!command.empty() && other != command) {
        throw DomainError("config is for command '" + other + "', not '" + command + "'");
      }
    } else if (key == "d") {
      take(c, "d", d);
    } else if (key == "perm") {
      take(c, "perm", perm);
    } else if (key == "rotation") {
      take(c, "rotation", rotation);
    } else if (key == "input") {
      take(c, "input", input);
    } else if (key == "map") {
      take(c, "map", map);
    } else if (key == "preset") {
      take(c, "preset", preset);
    } else if (key == "lambda") {
      take(c, "lambda", lambda);
    } else if (key == "alpha") {
      take(c, "alpha", alpha);
    } else if (key == "samples") {
      take(c, "samples", samples);
    } else if (key == "seed") {
      if (value.is_null()) {
        seed.reset();
      } else {
        std::uint64_t s = 0;
        take(c, "seed", s);
        seed = s;
      }
    } else if (key == "lambda_bits") {
      take(c, "lambda_bits", lambda_bits);
    } else if (key == "precision_bits") {
      take(c, "precision_bits", precision_bits);
    } else if (key == "n_blocks") {
      take(c, "n_blocks", n_blocks);
    } else if (key == "max_iter") {
      take(c, "max_iter", max_iter);
    } else if (key == "n") {
      take(c, "n", n);
    } else if (key == "lookahead") {
      take(c, "lookahead", lookahead);
    } else if (key == "window") {
      take(c, "window", window);
    } else if (key == "x0") {
      take(c, "x0", x0);
    } else if (key == "c0") {
      take(c, "c0", c0);
    } else if (key == "schedule") {
      take(c, "schedule", schedule);
    } else if (key == "levels") {
      take(c, "levels", levels);
    } else if (key == "omega") {
      take(c, "omega", omega);
    } else if (key == "clock") {
      take(c, "clock", clock);
    } else if (key == "out") {
      take(c, "out", out);
    } else if (key == "format") {
      take(c, "format", format);
    } else if (key == "jobs") {
      take(c, "jobs", jobs);
    } else {
      throw DomainError("unknown config key '" + key + "'");
    }
  }
}

bool ExperimentConfig::randomized() const {
  if (command == "lyapunov" || command == "scan") return input.empty();
  if (command == "criterion" || command == "dimension") return input.empty();
  return false;
}

void ExperimentConfig::validate() const {
  auto positive = [](std::size_t v, const char* name) {
    if (v == 0) throw DomainError(std::string(name) + " must be positive");
  };
  positive(samples, "samples");
  positive(lambda_bits, "lambda_bits");
  positive(precision_bits, "precision_bits");
  positive(n_blocks, "n_blocks");
  positive(max_iter, "max_iter");
  positive(jobs, "jobs");
  if (precision_bits < 32) throw DomainError("precision_bits must be at least 32");
  if (randomized() && !seed) throw DomainError("a seed is required for the randomized command '" + command + "'");
  if (format != "json" && format != "csv") throw DomainError("format must be json or csv");
  if (omega != "zero" && omega != "cs" && omega != "s") throw DomainError("omega must be zero, cs or s");
  if (clock != "block" && clock != "rv") throw DomainError("clock must be block or rv");
}

std::size_t precision_from_env() {
  const char* v = std::getenv("RAUZY_PRECISION");
  if (!v || !*v) return 256;
  char* end = nullptr;
  const unsigned long bits = std::strtoul(v, &end, 10);
  if (*end != '\0' || bits < 32) throw DomainError("RAUZY_PRECISION must be an integer >= 32");
  return bits;
}

}  // namespace rauzy::cli
