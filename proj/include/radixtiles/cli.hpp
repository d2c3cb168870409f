#pragma once

// Orchestration for the command-line tool: problem specs, per-case analysis
// records with the radix<=>tiling cross-check, batch suite runs, and the
// fixed twin-dragon figure.

#include <atomic>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "radixtiles/json_io.hpp"

namespace radixtiles::cli {

struct CaseOptions {
  int depth = tile::kDefaultSampleDepth;
  std::uint64_t samples = tile::kDefaultSamples;
  std::uint64_t seed = tile::kDefaultSeed;
  unsigned kmax = spectral::kDefaultBetaLimit;
  std::uint64_t cap = radix::kDefaultPointCap;
  double probe_radius = tile::kDefaultProbeRadius;
  int probe_depth = tile::kDefaultProbeDepth;
  bool run_mra = true;
};

struct ProblemSpec {
  std::string name;
  IntMatrix matrix;
  bool canonical = true;
  std::vector<IntVector> explicit_digits;
  CaseOptions options;
};

inline io::json to_json(const CaseOptions& o) {
  return io::json{{"depth", o.depth},
                  {"samples", o.samples},
                  {"seed", o.seed},
                  {"kmax", o.kmax},
                  {"cap", o.cap},
                  {"probe_radius", o.probe_radius},
                  {"probe_depth", o.probe_depth},
                  {"mra", o.run_mra}};
}

inline io::json to_json(const ProblemSpec& s) {
  io::json digits;
  if (s.canonical) {
    digits = "canonical";
  } else {
    digits = io::json::array();
    for (const auto& d : s.explicit_digits) digits.push_back(io::vector_to_json(d));
  }
  return io::json{{"name", s.name},
                  {"matrix", io::matrix_to_json(s.matrix)},
                  {"digits", std::move(digits)},
                  {"options", to_json(s.options)}};
}

inline CaseOptions options_from_json(const io::json& j) {
  CaseOptions o;
  if (j.contains("depth")) o.depth = j.at("depth").get<int>();
  if (j.contains("samples")) o.samples = j.at("samples").get<std::uint64_t>();
  if (j.contains("seed")) o.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("kmax")) o.kmax = j.at("kmax").get<unsigned>();
  if (j.contains("cap")) o.cap = j.at("cap").get<std::uint64_t>();
  if (j.contains("probe_radius")) o.probe_radius = j.at("probe_radius").get<double>();
  if (j.contains("probe_depth")) o.probe_depth = j.at("probe_depth").get<int>();
  if (j.contains("mra")) o.run_mra = j.at("mra").get<bool>();
  return o;
}

inline ProblemSpec spec_from_json(const io::json& j) {
  ProblemSpec s;
  if (j.contains("name")) s.name = j.at("name").get<std::string>();
  if (!j.contains("matrix")) throw std::invalid_argument("problem spec is missing \"matrix\"");
  s.matrix = io::matrix_from_json(j.at("matrix"));
  if (j.contains("digits") && !j.at("digits").is_string()) {
    s.canonical = false;
    for (const auto& d : j.at("digits")) s.explicit_digits.push_back(io::vector_from_json(d));
  } else if (j.contains("digits") && j.at("digits").get<std::string>() != "canonical") {
    throw std::invalid_argument("\"digits\" must be \"canonical\" or an array of vectors");
  }
  if (j.contains("options")) s.options = options_from_json(j.at("options"));
  return s;
}

struct CrossCheck {
  bool ok = true;
  std::vector<std::string> notes;
};

struct AnalyzeRecord {
  ProblemSpec spec;
  std::optional<spectral::SpectralReport> spectral;
  std::optional<digits::DigitSet> digit_set;
  std::optional<radix::DecisionReport> decision;
  std::optional<tile::MultiplicityEstimate> multiplicity;
  std::optional<tile::ProbeResult> probe;
  tile::InteriorVerdict interior = tile::InteriorVerdict::Inconclusive;
  std::optional<wavelet::MRAReport> mra;
  std::vector<std::string> warnings;  // surfaced resource limits etc.
  CrossCheck cross_check;
  std::string error;  // fatal per-case failure (input error)
};

// spectral -> digits -> decide -> multiplicity -> interior -> wavelet
inline AnalyzeRecord run_analyze(const ProblemSpec& spec) {
  AnalyzeRecord rec;
  rec.spec = spec;
  const CaseOptions& opt = spec.options;
  try {
    rec.spectral = spectral::spectral_report(spec.matrix);
    if (!rec.spectral->is_dilation)
      throw std::invalid_argument("matrix is not a dilation matrix");

    rec.digit_set = spec.canonical ? digits::canonical_digits(spec.matrix)
                                   : digits::validate_digit_set(spec.matrix, spec.explicit_digits);

    try {
      rec.decision = radix::decide_radix(*rec.digit_set, opt.cap);
    } catch (const ResourceLimitError& e) {
      rec.warnings.push_back(std::string("decision skipped: ") + e.what());
    }

    tile::Geometry geom = tile::make_geometry(*rec.digit_set);
    rec.multiplicity = tile::multiplicity_estimate(geom, opt.samples, opt.depth, opt.seed);
    rec.probe = tile::numeric_interior_probe(geom, opt.probe_depth, opt.probe_radius);

    std::optional<bool> yields;
    if (rec.decision) yields = rec.decision->yields;
    std::optional<double> mean;
    if (rec.multiplicity) mean = rec.multiplicity->mean_multiplicity;
    rec.interior = tile::interior_verdict_from(yields, mean, *rec.probe);

    if (opt.run_mra) {
      try {
        rec.mra = wavelet::haar_mra(spec.matrix, opt.kmax, opt.samples, opt.depth, opt.seed,
                                    opt.cap);
      } catch (const NoBetaFoundError& e) {
        rec.warnings.push_back(e.what());
      } catch (const ResourceLimitError& e) {
        rec.warnings.push_back(std::string("mra skipped: ") + e.what());
      }
    }

    // radix representation <=> (tiling multiplicity 1 and 0 interior)
    if (rec.decision && rec.multiplicity && rec.probe) {
      bool mult_ok = std::abs(rec.multiplicity->mean_multiplicity - 1.0) <= 0.05;
      bool probe_ok = rec.probe->all_candidate();
      if (rec.decision->yields && !(mult_ok && probe_ok))
        rec.cross_check.notes.push_back(
            "decision positive but tiling/interior evidence fails (mean=" +
            std::to_string(rec.multiplicity->mean_multiplicity) +
            ", outside probes=" + std::to_string(rec.probe->outside) + ")");
      if (!rec.decision->yields && mult_ok && probe_ok)
        rec.cross_check.notes.push_back(
            "decision negative but translates tile with 0 interior (mean=" +
            std::to_string(rec.multiplicity->mean_multiplicity) + ")");
      if (!rec.decision->yields && mult_ok &&
          rec.interior != tile::InteriorVerdict::BoundaryByTheorem)
        rec.cross_check.notes.push_back("expected BoundaryByTheorem verdict");
    }
    rec.cross_check.ok = rec.cross_check.notes.empty();
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  return rec;
}

inline io::json to_json(const AnalyzeRecord& rec) {
  io::json out;
  out["spec"] = to_json(rec.spec);
  out["seed"] = rec.spec.options.seed;
  if (!rec.error.empty()) out["error"] = rec.error;
  if (rec.spectral) out["spectral"] = io::to_json(*rec.spectral);
  if (rec.digit_set) out["digit_set"] = io::to_json(*rec.digit_set);
  if (rec.decision) out["decision"] = io::to_json(*rec.decision);
  if (rec.multiplicity) out["multiplicity"] = io::to_json(*rec.multiplicity);
  if (rec.probe)
    out["interior_probe"] = io::json{{"probes", rec.probe->probes},
                                     {"outside", rec.probe->outside},
                                     {"passes", rec.probe->all_candidate()}};
  out["interior"] = io::to_string(rec.interior);
  if (rec.mra) out["mra"] = io::to_json(*rec.mra);
  if (!rec.warnings.empty()) out["warnings"] = rec.warnings;
  out["cross_check"] = io::json{{"ok", rec.cross_check.ok}, {"notes", rec.cross_check.notes}};
  return out;
}

struct SuiteResult {
  std::vector<AnalyzeRecord> records;
  std::vector<std::string> violations;  // empty iff every cross-check held
};

inline SuiteResult run_suite(const std::vector<ProblemSpec>& specs, unsigned jobs = 1) {
  SuiteResult result;
  result.records.resize(specs.size());
  if (jobs < 1) jobs = 1;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= specs.size()) break;
      result.records[i] = run_analyze(specs[i]);
    }
  };
  if (jobs == 1 || specs.size() <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (std::size_t i = 0; i < result.records.size(); ++i) {
    const auto& rec = result.records[i];
    if (!rec.cross_check.ok) {
      std::string label = rec.spec.name.empty() ? ("case " + std::to_string(i)) : rec.spec.name;
      for (const auto& note : rec.cross_check.notes)
        result.violations.push_back(label + ": " + note);
    }
  }
  return result;
}

inline io::json to_json(const SuiteResult& s) {
  io::json cases = io::json::array();
  for (const auto& rec : s.records) cases.push_back(to_json(rec));
  return io::json{{"cases", std::move(cases)},
                  {"cross_check_violations", s.violations},
                  {"seed", tile::kDefaultSeed}};
}

inline std::vector<ProblemSpec> suite_from_json(const io::json& j) {
  std::vector<ProblemSpec> specs;
  const io::json& arr = j.is_array() ? j : j.at("cases");
  for (const auto& c : arr) specs.push_back(spec_from_json(c));
  return specs;
}

// Fixed twin-dragon rendering: digit set {0, e1}, depth 16, 800x800. The
// window is frozen so the filled fraction is a stable regression quantity.
struct FigureDefaults {
  static constexpr int kDepth = 16;
  static constexpr int kWidth = 800;
  static constexpr int kHeight = 800;
  static constexpr tile::Window kWindow{-2.0, 2.0, -1.5, 2.5};
};

inline digits::DigitSet twin_dragon_digits() {
  IntMatrix a(2, 2);
  a << 1, 1, -1, 1;
  std::vector<IntVector> d(2, IntVector::Zero(2));
  d[1](0) = 1;
  return digits::validate_digit_set(a, d);
}

inline tile::Raster cmd_figure1(int depth = FigureDefaults::kDepth,
                                std::optional<digits::DigitSet> digit_set = std::nullopt,
                                std::optional<tile::Window> window = std::nullopt) {
  digits::DigitSet d = digit_set.value_or(twin_dragon_digits());
  tile::Window win = window.value_or(FigureDefaults::kWindow);
  if (digit_set.has_value() && !window.has_value())
    return tile::render_tile_2d(d, depth, FigureDefaults::kWidth, FigureDefaults::kHeight);
  return tile::render_tile_2d(d, depth, FigureDefaults::kWidth, FigureDefaults::kHeight, win);
}

}  // namespace radixtiles::cli
