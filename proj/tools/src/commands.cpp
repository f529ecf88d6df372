#include <openssl/evp.h>

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "rauzy/error.hpp"
#include "rauzy/random.hpp"
#include "rauzy_cli/cli.hpp"
#include "rauzy_cli/config.hpp"
#include "rauzy_cli/experiments.hpp"

#ifndef RAUZY_VERSION
#define RAUZY_VERSION "0.0.0"
#endif

namespace rauzy::cli {

namespace fs = std::filesystem;

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

namespace {

using rauzy::to_json;
using rauzy::cli::to_json;

/// Collects outputs: to stdout, or atomically into the output directory
/// with digests for the manifest.
class Sink {
 public:
  Sink(const ExperimentConfig& cfg, std::ostream& out) : cfg_(cfg), out_(out) {}

  void emit(const std::string& name, const std::string& content) {
    if (cfg_.out.empty()) {
      out_ << content;
      return;
    }
    const fs::path dir(cfg_.out);
    fs::create_directories(dir);
    const fs::path tmp = dir / (name + ".tmp");
    {
      std::ofstream f(tmp, std::ios::binary);
      if (!f) throw DomainError("cannot write " + tmp.string());
      f << content;
      if (!f) throw DomainError("cannot write " + tmp.string());
    }
    fs::rename(tmp, dir / name);
    files_.push_back(Json{{"file", name}, {"sha256", sha256_hex(content)}, {"bytes", content.size()}});
  }

  void instance(const std::string& id, const std::string& status, const std::string& note = "") {
    Json j{{"id", id}, {"status", status}};
    if (!note.empty()) j["note"] = note;
    instances_.push_back(std::move(j));
  }

  void write_manifest(double seconds) {
    if (cfg_.out.empty()) return;
    Json m{{"tool", "rauzy"},
           {"version", RAUZY_VERSION},
           {"command", cfg_.command},
           {"config", cfg_.to_json()},
           {"instances", instances_},
           {"wall_time_s", seconds},
           {"outputs", files_}};
    const fs::path dir(cfg_.out);
    const fs::path tmp = dir / "manifest.json.tmp";
    {
      std::ofstream f(tmp, std::ios::binary);
      f << m.dump(2) << '\n';
    }
    fs::rename(tmp, dir / "manifest.json");
  }

 private:
  const ExperimentConfig& cfg_;
  std::ostream& out_;
  Json files_ = Json::array();
  Json instances_ = Json::array();
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DomainError("cannot read '" + path + "'");
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

std::string json_text(const Json& j) { return j.dump(2) + "\n"; }

Perm perm_of(const ExperimentConfig& cfg) {
  if (!cfg.perm.empty()) return Perm::parse(cfg.perm);
  if (!cfg.input.empty()) {
    const Json j = parse_json(read_file(cfg.input));
    return perm_from_json(j.contains("perm") ? j.at("perm") : j);
  }
  if (cfg.d >= 2) return canonical_rotation_perm(cfg.d);
  throw DomainError("give --perm, --input or --d (>= 2)");
}

IET golden_iet(std::size_t depth) {
  BigInt a = 1, b = 1;
  for (std::size_t i = 0; i < depth + 40; ++i) {
    BigInt c = a + b;
    a = b;
    b = c;
  }
  return build_iet({Rational(b), Rational(a)}, Perm::parse("AB/BA"));
}

IET iet_of(const ExperimentConfig& cfg) {
  if (cfg.preset == "golden") return golden_iet(cfg.n_blocks);
  if (!cfg.preset.empty()) throw DomainError("unknown preset '" + cfg.preset + "' for an IET (golden)");
  if (!cfg.input.empty() && cfg.lambda.empty()) return iet_from_json(parse_json(read_file(cfg.input)));
  if (cfg.lambda.empty()) throw DomainError("give --input, --lambda with --perm/--d, or --preset golden");
  RatVec lam;
  std::stringstream ss(cfg.lambda);
  for (std::string tok; std::getline(ss, tok, ',');) lam.push_back(parse_rational(tok));
  return build_iet(lam, perm_of(cfg));
}

BigReal golden_mean(BigReal::Precision bits) {
  return (sqrt(BigReal(5, bits)) - BigReal(1, bits)) * BigReal::pow2(-1, bits);
}

PLCircleMap map_of(const ExperimentConfig& cfg) {
  const auto bits = static_cast<BigReal::Precision>(cfg.precision_bits);
  if (!cfg.map.empty()) return pl_map_from_json(parse_json(read_file(cfg.map)), bits);
  if (cfg.preset == "golden") return PLCircleMap::rotation(golden_mean(bits), bits);
  if (cfg.preset == "golden-two-break") return golden_two_break_map(bits, std::max<std::size_t>(20, cfg.n + 2));
  throw DomainError("give --map or --preset golden|golden-two-break");
}

Schedule schedule_of(const ExperimentConfig& cfg) { return builtin_schedule(cfg.schedule); }

// ---------------------------------------------------------------- commands

void cmd_rauzy_class(const ExperimentConfig& cfg, Sink& sink) {
  const Perm p = perm_of(cfg);
  if (!is_irreducible(p)) throw DomainError("permutation " + p.key() + " is reducible");
  const RauzyClass cls = rauzy_class(p);
  std::vector<std::string> rot;
  for (const auto& q : cls.perms) {
    if (is_rotation_type(q)) rot.push_back(q.key());
  }
  bool all_rotation = true;
  for (const auto& q : rotation_type_perms(p.d())) all_rotation = all_rotation && cls.contains_up_to_relabeling(q);
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "id,perm,rotation_type\n";
    for (std::size_t i = 0; i < cls.perms.size(); ++i) {
      os << i << ",\"" << cls.perms[i].key() << "\"," << (is_rotation_type(cls.perms[i]) ? 1 : 0) << '\n';
    }
    sink.emit("rauzy_class.csv", os.str());
  } else {
    Json j = to_json(cls);
    j["rotation_perms"] = rot;
    j["contains_all_rotation_perms"] = all_rotation;
    sink.emit("rauzy_class.json", json_text(j));
  }
  sink.instance(p.key(), "complete");
}

void cmd_orbit(const ExperimentConfig& cfg, Sink& sink) {
  const IET t = iet_of(cfg);
  OrbitOptions oo;
  oo.stop_on_tie = true;
  const OrbitRecord rec = orbit(t, cfg.n_blocks, oo);
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "# precision: exact, rationals as p/q\n";
    write_orbit_csv(os, rec);
    sink.emit("orbit.csv", os.str());
  } else {
    Json j{{"iet", to_json(t)},
           {"blocks", rec.size()},
           {"path", to_json(rotation_path(rec))},
           {"lambda", to_json(rec.lambda(rec.size()))},
           {"cumulative", to_json(rec.last().cumulative)}};
    sink.emit("orbit.json", json_text(j));
  }
  if (rec.tie_step()) {
    sink.instance("orbit", "tie", "tie at Rauzy-Veech step " + std::to_string(*rec.tie_step()));
  } else {
    sink.instance("orbit", "complete");
  }
}

void cmd_path(const ExperimentConfig& cfg, Sink& sink) {
  const IET t = iet_of(cfg);
  OrbitOptions oo;
  oo.stop_on_tie = true;
  const OrbitRecord rec = orbit(t, cfg.n_blocks, oo);
  const RotationPath path = rotation_path(rec);
  std::size_t arcs = 0;
  for (const auto& r : path) arcs += r.z;
  const std::size_t window = cfg.window ? cfg.window : arcs;
  Json j{{"blocks", path.size()},
         {"arcs", arcs},
         {"path", to_json(path)},
         {"window", window},
         {"infinity_complete", is_infinity_complete(path, window)},
         {"matrix", to_json(path_matrix(path))}};
  sink.emit("path.json", json_text(j));
  sink.instance("path", rec.tie_step() ? "tie" : "complete");
}

void cmd_lyapunov(const ExperimentConfig& cfg, Sink& sink) {
  const Perm p = perm_of(cfg);
  LyapunovOptions lo;
  lo.bits = cfg.lambda_bits;
  lo.jobs = cfg.jobs;
  const LyapunovClock clock = cfg.clock == "rv" ? LyapunovClock::per_rv_step : LyapunovClock::per_zorich_block;
  const LyapunovEstimate est = lyapunov_top(p.d(), p, cfg.n_blocks, cfg.samples, *cfg.seed, lo, clock);
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "# precision: binary64, 17 significant digits\n";
    write_lyapunov_csv(os, est);
    sink.emit("lyapunov.csv", os.str());
  } else {
    sink.emit("lyapunov.json", json_text(to_json(est)));
  }
  sink.instance("estimate", "complete",
                std::to_string(est.samples) + " samples, " + std::to_string(est.skipped) + " skipped");
}

Json visit_json(const ScanVisit& v) {
  return Json{{"n", v.n},
              {"target", v.target.get_str()},
              {"min_ratio", format_rational(v.min_ratio)},
              {"min_length", format_rational(v.min_length)},
              {"height_balance", format_rational(v.height_balance)}};
}

void cmd_scan(const ExperimentConfig& cfg, Sink& sink) {
  const Rational c0 = parse_rational(cfg.c0);
  const Schedule sched = schedule_of(cfg);
  if (!cfg.input.empty()) {
    const IET t = iet_of(cfg);
    const GenericConditionReport rep = generic_condition_scan(t, c0, sched, cfg.n_blocks);
    if (cfg.format == "csv") {
      std::ostringstream os;
      os << "# precision: binary64 for ratios; exact values in the JSON report\n";
      write_scan_csv(os, rep);
      sink.emit("scan.csv", os.str());
    } else {
      sink.emit("scan.json", json_text(to_json(rep)));
    }
    sink.instance("input", "complete");
    return;
  }
  const Perm p = perm_of(cfg);
  ScanSampleOptions so;
  so.c0 = c0;
  so.schedule = sched;
  so.n_blocks = cfg.n_blocks;
  so.lambda_bits = cfg.lambda_bits;
  const auto samples = run_instances<ScanSample>(cfg.samples, cfg.jobs, [&](std::size_t i) {
    return run_scan_sample(p, *cfg.seed, i, so);
  });
  std::size_t with_hit = 0;
  Json per = Json::array();
  std::ostringstream csv;
  csv << "# precision: binary64 for ratios; exact values in the JSON report\n";
  csv << "sample,n,target,min_ratio,min_length,height_balance\n";
  for (const auto& s : samples) {
    if (!s.scan.hits.empty()) ++with_hit;
    Json hits = Json::array();
    for (const auto& v : s.scan.visits) {
      if (!v.hit()) continue;
      hits.push_back(visit_json(v));
      csv << s.index << ',' << v.n << ',' << v.target.get_str() << ',' << v.min_ratio.get_d() << ','
          << v.min_length.get_d() << ',' << v.height_balance.get_d() << '\n';
    }
    per.push_back(Json{{"index", s.index},
                       {"status", s.status},
                       {"blocks", s.scan.blocks},
                       {"visits", s.scan.visits.size()},
                       {"hits", std::move(hits)},
                       {"warnings", s.scan.warnings}});
    sink.instance("sample-" + std::to_string(s.index), s.status);
  }
  const double frac = static_cast<double>(with_hit) / static_cast<double>(samples.size());
  if (cfg.format == "csv") {
    sink.emit("scan.csv", csv.str());
  } else {
    Json j{{"perm", p.key()},
           {"c0", format_rational(c0)},
           {"schedule", sched.id},
           {"schedule_diverges", sched.diverges ? Json(*sched.diverges) : Json(nullptr)},
           {"n_blocks", cfg.n_blocks},
           {"samples", samples.size()},
           {"samples_with_hit", with_hit},
           {"fraction_with_hit", frac},
           {"per_sample", std::move(per)}};
    sink.emit("scan.json", json_text(j));
  }
}

void cmd_criterion(const ExperimentConfig& cfg, Sink& sink) {
  const Schedule sched = schedule_of(cfg);
  if (!cfg.input.empty()) {
    const AIET f = aiet_from_json(parse_json(read_file(cfg.input)));
    std::vector<std::size_t> levels = cfg.levels;
    if (levels.empty()) levels.push_back(cfg.n_blocks);
    CriterionOptions co;
    co.rigidity_target = [sched](std::size_t n) -> BigInt {
      return BigInt(static_cast<unsigned long>(n)) * sched.value(n) - 2;
    };
    const CriterionReport rep = check_criterion(f, levels, co);
    if (cfg.format == "csv") {
      std::ostringstream os;
      os << "# precision_bits=" << f.precision() << "; masses and gaps as binary64\n";
      write_criterion_csv(os, rep);
      sink.emit("criterion.csv", os.str());
    } else {
      sink.emit("criterion.json", json_text(to_json(rep)));
    }
    sink.instance("input", to_string(rep.status), rep.note);
    return;
  }
  const Perm p = perm_of(cfg);
  ScanSampleOptions so;
  so.c0 = parse_rational(cfg.c0);
  so.schedule = sched;
  so.n_blocks = cfg.n_blocks;
  so.lambda_bits = cfg.lambda_bits;
  so.check_hits = true;
  const auto samples = run_instances<ScanSample>(cfg.samples, cfg.jobs, [&](std::size_t i) {
    return run_scan_sample(p, *cfg.seed, i, so);
  });
  std::size_t with_hit = 0, checked = 0, adjacency_ok = 0, criterion_ok = 0;
  Json per = Json::array();
  std::ostringstream csv;
  csv << "# precision: exact counts; masses and gaps as binary64\n";
  csv << "sample,n,target,adjacency_certified,adjacency_counts_ok,criterion_ok,designated_rigidity\n";
  for (const auto& s : samples) {
    if (!s.scan.hits.empty()) ++with_hit;
    for (const auto& h : s.checks) {
      ++checked;
      if (h.adjacency_certified && h.adjacency_counts_ok) ++adjacency_ok;
      if (h.criterion_ok()) ++criterion_ok;
      std::uint64_t m = 0;
      if (h.criterion) {
        for (const auto& e : h.criterion->entries) {
          if (e.designated) m = e.rigidity;
        }
      }
      csv << s.index << ',' << h.n << ',' << h.target.get_str() << ',' << h.adjacency_certified << ','
          << h.adjacency_counts_ok << ',' << h.criterion_ok() << ',' << m << '\n';
    }
    per.push_back(to_json(s));
    sink.instance("sample-" + std::to_string(s.index), s.status);
  }
  if (cfg.format == "csv") {
    sink.emit("criterion.csv", csv.str());
  } else {
    Json j{{"perm", p.key()},
           {"c0", cfg.c0},
           {"schedule", sched.id},
           {"n_blocks", cfg.n_blocks},
           {"samples", samples.size()},
           {"samples_with_hit", with_hit},
           {"fraction_with_hit", static_cast<double>(with_hit) / static_cast<double>(samples.size())},
           {"hits_checked", checked},
           {"adjacency_ok", adjacency_ok},
           {"criterion_ok", criterion_ok},
           {"per_sample", std::move(per)}};
    sink.emit("criterion.json", json_text(j));
  }
}

Json trace_json(const DimensionTrace& tr) {
  Json levels = Json::array();
  for (const auto& l : tr.levels) {
    levels.push_back(Json{{"n", l.n}, {"rv_steps", l.rv_steps}, {"log10_interval", l.log10_interval},
                          {"estimate", l.estimate}, {"ratio", l.ratio}});
  }
  return Json{{"status", to_string(tr.status)},
              {"precision_bits", tr.precision},
              {"cone_spread", tr.cone_spread},
              {"levels", std::move(levels)}};
}

void cmd_dimension(const ExperimentConfig& cfg, Sink& sink) {
  struct Instance {
    std::string status;
    std::string note;
    std::optional<DimensionTrace> trace;
  };
  const auto bits = static_cast<BigReal::Precision>(cfg.precision_bits);
  std::vector<Instance> runs;
  if (!cfg.input.empty()) {
    const AIET f = aiet_from_json(parse_json(read_file(cfg.input)));
    DimensionTrace tr = local_dimension_estimates(f, cfg.n_blocks, cfg.lookahead);
    runs.push_back({to_string(tr.status), "", std::move(tr)});
  } else {
    const Perm p = perm_of(cfg);
    const SlopeDirection kind = parse_direction(cfg.omega);
    runs = run_instances<Instance>(cfg.samples, cfg.jobs, [&](std::size_t i) -> Instance {
      const IET t = sample_iet(p, *cfg.seed, i, cfg.lambda_bits);
      auto rng = make_stream(*cfg.seed, (std::uint64_t(1) << 40) + i);
      const RatVec omega = sample_direction(t, kind, rng);
      try {
        const AIET f = aiet_over_iet(t, cfg.n_blocks + cfg.lookahead + 1, omega, bits);
        DimensionTrace tr = local_dimension_estimates(f, cfg.n_blocks, cfg.lookahead);
        return {to_string(tr.status), "", std::move(tr)};
      } catch (const PrecisionExhausted& e) {
        return {to_string(InductionStatus::precision_exhausted), e.what(), std::nullopt};
      }
    });
  }
  if (cfg.format == "csv") {
    std::ostringstream os;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      if (runs.size() > 1) os << "# sample " << i << '\n';
      if (runs[i].trace) {
        write_dimension_csv(os, *runs[i].trace);
      } else {
        os << "# precision_bits=" << bits << " status=" << runs[i].status << "\n";
      }
    }
    sink.emit("dimension.csv", os.str());
  } else {
    Json per = Json::array();
    for (std::size_t i = 0; i < runs.size(); ++i) {
      Json j{{"index", i}, {"status", runs[i].status}};
      if (runs[i].trace) j["trace"] = trace_json(*runs[i].trace);
      if (!runs[i].note.empty()) j["note"] = runs[i].note;
      per.push_back(std::move(j));
    }
    sink.emit("dimension.json", json_text(Json{{"omega", cfg.omega}, {"instances", std::move(per)}}));
  }
  for (std::size_t i = 0; i < runs.size(); ++i) {
    sink.instance((cfg.input.empty() ? "sample-" : "input-") + std::to_string(i), runs[i].status, runs[i].note);
  }
}

void cmd_partition(const ExperimentConfig& cfg, Sink& sink) {
  const PLCircleMap f = map_of(cfg);
  const BigReal x0 = BigReal::parse(cfg.x0, f.precision());
  const DynamicalPartition part = dynamical_partition(f, x0, cfg.n, cfg.max_iter);
  if (cfg.format == "csv") {
    std::ostringstream os;
    os << "# precision_bits=" << f.precision() << " digits=30\n";
    write_partition_csv(os, part);
    sink.emit("partition.csv", os.str());
  } else {
    Json j{{"n", part.n},
           {"cf", to_json(part.cf)},
           {"long_arcs", part.long_arcs.size()},
           {"short_arcs", part.short_arcs.size()},
           {"covering_error", part.covering_error.to_string(6)},
           {"min_gap", part.min_gap.to_string(12)},
           {"precision_bits", f.precision()}};
    try {
      const RefinementReport r = check_refinement(f, x0, cfg.n, cfg.max_iter);
      j["refinement"] = Json{{"holds", r.holds}, {"arcs_checked", r.arcs_checked},
                             {"quotient", r.quotient.get_str()}, {"min_margin", r.min_margin.to_string(6)}};
    } catch (const std::exception& e) {
      j["refinement"] = Json{{"error", e.what()}};
    }
    sink.emit("partition.json", json_text(j));
  }
  sink.instance("partition", "complete");
}

void cmd_rotation_number(const ExperimentConfig& cfg, Sink& sink) {
  const PLCircleMap f = map_of(cfg);
  const RotationNumber rn = rotation_number(f, cfg.max_iter);
  Json j{{"estimate", rn.estimate.to_string(30)},
         {"error_bound", rn.error_bound.to_string(6)},
         {"iterations", cfg.max_iter},
         {"precision_bits", f.precision()}};
  try {
    j["cf"] = to_json(rotation_continued_fraction(f, cfg.n, cfg.max_iter));
  } catch (const std::exception& e) {
    j["cf_error"] = e.what();
  }
  sink.emit("rotation_number.json", json_text(j));
  sink.instance("rotation-number", "complete");
}

void cmd_cf(const ExperimentConfig& cfg, Sink& sink) {
  if (cfg.alpha.empty()) throw DomainError("give --alpha (p/q, decimal, golden or sqrt2)");
  const auto bits = static_cast<BigReal::Precision>(cfg.precision_bits);
  Json j;
  if (cfg.alpha == "golden" || cfg.alpha == "sqrt2") {
    const BigReal x = cfg.alpha == "golden" ? golden_mean(bits) : sqrt(BigReal(2, bits)) - BigReal(1, bits);
    const CFExpansion cf = trusted_continued_fraction(x, cfg.n);
    j = to_json(cf);
    j["exact"] = false;
    j["precision_bits"] = bits;
    j["trusted"] = cf.size();
  } else {
    const Rational x = parse_rational(cfg.alpha);
    if (!(sgn(x) > 0) || !(x < 1)) throw DomainError("alpha must lie in (0, 1)");
    j = to_json(continued_fraction(x, cfg.n));
    j["exact"] = true;
  }
  sink.emit("cf.json", json_text(j));
  sink.instance("cf", "complete");
}

using Command = void (*)(const ExperimentConfig&, Sink&);

struct Sub {
  const char* name;
  const char* help;
  Command fn;
};

const Sub kSubs[] = {
    {"rauzy-class", "Rauzy class of a permutation", cmd_rauzy_class},
    {"orbit", "Zorich orbit of an IET", cmd_orbit},
    {"path", "combinatorial rotation number of an IET", cmd_path},
    {"lyapunov", "top Lyapunov exponent by Monte Carlo", cmd_lyapunov},
    {"scan", "generic-condition scan", cmd_scan},
    {"criterion", "zero-dimension criterion on towers", cmd_criterion},
    {"dimension", "local-dimension trace of an affine map", cmd_dimension},
    {"partition", "dynamical partition of a PL circle map", cmd_partition},
    {"rotation-number", "rotation number of a PL circle map", cmd_rotation_number},
    {"cf", "continued fraction of a number", cmd_cf},
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  CLI::App app{"Rauzy-Veech renormalization toolkit", "rauzy"};
  app.require_subcommand(1);
  std::string config_file;
  std::optional<std::size_t> precision;
  std::optional<std::uint64_t> seed;
  for (const Sub& s : kSubs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--config", config_file, "JSON config; its keys override flags");
    sub->add_option("--d", cfg.d, "number of intervals");
    sub->add_option("--perm", cfg.perm, "permutation, e.g. \"A B C / C A B\"");
    sub->add_flag("--rotation", cfg.rotation, "canonical rotation perm of size d");
    sub->add_option("--input", cfg.input, "JSON descriptor file");
    sub->add_option("--map", cfg.map, "PL circle map JSON file");
    sub->add_option("--preset", cfg.preset, "named input: golden, golden-two-break");
    sub->add_option("--lambda", cfg.lambda, "lengths as comma separated rationals");
    sub->add_option("--alpha", cfg.alpha, "number: p/q, decimal, golden or sqrt2");
    sub->add_option("--samples", cfg.samples, "number of random instances");
    sub->add_option("--seed", seed, "seed for every random draw");
    sub->add_option("--lambda-bits", cfg.lambda_bits, "bits of random length numerators");
    sub->add_option("--precision", precision, "working precision in bits");
    sub->add_option("--blocks", cfg.n_blocks, "Zorich blocks");
    sub->add_option("--max-iter", cfg.max_iter, "iteration budget");
    sub->add_option("--n", cfg.n, "partition level or number of quotients");
    sub->add_option("--lookahead", cfg.lookahead, "extra blocks for the measure estimate");
    sub->add_option("--window", cfg.window, "arcs checked for completeness (0 = all)");
    sub->add_option("--x0", cfg.x0, "base point");
    sub->add_option("--c0", cfg.c0, "scanner constant");
    sub->add_option("--schedule", cfg.schedule, "C(n): log2, const or linear");
    sub->add_option("--levels", cfg.levels, "criterion levels")->delimiter(',');
    sub->add_option("--omega", cfg.omega, "log-slope direction: zero, cs or s");
    sub->add_option("--clock", cfg.clock, "Lyapunov normalization: block or rv");
    sub->add_option("--out", cfg.out, "output directory (writes a manifest)");
    sub->add_option("--format", cfg.format, "json or csv");
    sub->add_option("--jobs", cfg.jobs, "worker threads");
  }
  const auto started = std::chrono::steady_clock::now();
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
      app.parse(rev);
    } catch (const CLI::ParseError& e) {
      std::ostringstream o, e2;
      const int code = app.exit(e, o, e2);
      out << o.str();
      err << e2.str();
      return code == 0 ? kExitOk : kExitDomain;
    }
    const Sub* chosen = nullptr;
    for (const Sub& s : kSubs) {
      if (app.got_subcommand(s.name)) chosen = &s;
    }
    cfg.command = chosen->name;
    cfg.precision_bits = precision ? *precision : precision_from_env();
    cfg.seed = seed;
    if (!config_file.empty()) cfg.apply_json(parse_json(read_file(config_file)));
    cfg.validate();
    PrecisionGuard guard(static_cast<BigReal::Precision>(cfg.precision_bits));
    Sink sink(cfg, out);
    chosen->fn(cfg, sink);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    sink.write_manifest(secs);
    return kExitOk;
  } catch (const ResourceGuard& e) {
    err << "rauzy: resource guard: " << e.what() << '\n';
    return kExitResource;
  } catch (const PrecisionExhausted& e) {
    err << "rauzy: precision exhausted: " << e.what() << '\n';
    return kExitResource;
  } catch (const DomainError& e) {
    err << "rauzy: " << e.what() << '\n';
    return kExitDomain;
  } catch (const NotRenormalizable& e) {
    err << "rauzy: " << e.what() << '\n';
    return kExitDomain;
  } catch (const fs::filesystem_error& e) {
    err << "rauzy: " << e.what() << '\n';
    return kExitDomain;
  }
}

}  // namespace rauzy::cli
