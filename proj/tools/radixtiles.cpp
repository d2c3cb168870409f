// radixtiles command-line tool: decide radix representability of integer
// dilation matrices, analyze the associated self-affine tiles, and verify
// Haar-type scaling-function properties. All reports are JSON with
// arbitrary-precision integers rendered as decimal strings.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "radixtiles/cli.hpp"
#include "radixtiles/radixtiles.hpp"

namespace rt = radixtiles;
using rt::io::json;

namespace {

json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(what + ": " + e.what());
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

rt::IntMatrix parse_matrix_arg(const std::string& text) {
  return rt::io::matrix_from_json(parse_json_text(text, "--matrix"));
}

std::vector<rt::IntVector> parse_digits_arg(const std::string& inline_json,
                                            const std::string& file) {
  json j;
  if (!file.empty())
    j = load_json_file(file);
  else
    j = parse_json_text(inline_json, "--digits");
  if (j.is_object() && j.contains("digits")) j = j.at("digits");
  std::vector<rt::IntVector> out;
  for (const auto& d : j) out.push_back(rt::io::vector_from_json(d));
  return out;
}

rt::IntVector parse_vector_arg(const std::string& text) {
  return rt::io::vector_from_json(parse_json_text(text, "--x"));
}

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    out << j.dump(2) << "\n";
  }
}

struct CommonArgs {
  std::string matrix;
  std::string digits;
  std::string digits_file;
  bool canonical = false;
  std::string out;

  void attach(CLI::App* cmd, bool need_digits = true) {
    cmd->add_option("--matrix", matrix, "dilation matrix as JSON rows of decimal strings")
        ->required();
    if (need_digits) {
      cmd->add_option("--digits", digits, "digit set as a JSON array of vectors");
      cmd->add_option("--digits-file", digits_file, "file with the digit set JSON");
      cmd->add_flag("--canonical", canonical, "use the canonical digit set A(F) ∩ Z^n");
    }
    cmd->add_option("--out", out, "write the JSON report to this file");
  }

  rt::digits::DigitSet resolve_digits() const {
    rt::IntMatrix a = parse_matrix_arg(matrix);
    if (!digits.empty() || !digits_file.empty())
      return rt::digits::validate_digit_set(a, parse_digits_arg(digits, digits_file));
    return rt::digits::canonical_digits(a);
  }
};

std::uint64_t cap_from_env(std::uint64_t fallback) {
  if (const char* env = std::getenv("RADIXTILES_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
    std::cerr << "warning: ignoring malformed RADIXTILES_CAP=" << env << "\n";
  }
  return fallback;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"radix representations, self-affine tiles, and Haar-type scaling functions"};
  app.require_subcommand(1);

  rt::cli::CaseOptions defaults;
  defaults.cap = cap_from_env(defaults.cap);

  // ---- analyze ----------------------------------------------------------
  auto* analyze = app.add_subcommand("analyze", "full per-case pipeline with cross-checks");
  CommonArgs analyze_args;
  analyze_args.attach(analyze);
  auto analyze_opts = std::make_shared<rt::cli::CaseOptions>(defaults);
  analyze->add_option("--depth", analyze_opts->depth, "membership search depth");
  analyze->add_option("--samples", analyze_opts->samples, "Monte Carlo sample count");
  analyze->add_option("--seed", analyze_opts->seed, "RNG seed (printed in the report)");
  analyze->add_option("--kmax", analyze_opts->kmax, "largest power tried for beta");
  analyze->add_option("--cap", analyze_opts->cap, "lattice-point cap for the decision");
  analyze->add_flag("!--no-mra", analyze_opts->run_mra, "skip the MRA verification stage");

  // ---- digits ------------------------------------------------------------
  auto* digits_cmd = app.add_subcommand("digits", "canonical digit set or validation report");
  CommonArgs digits_args;
  digits_args.attach(digits_cmd);

  // ---- expand ------------------------------------------------------------
  auto* expand_cmd = app.add_subcommand("expand", "digit expansion of one lattice vector");
  CommonArgs expand_args;
  expand_args.attach(expand_cmd);
  std::string expand_x;
  std::uint64_t expand_max_steps = 100000;
  expand_cmd->add_option("--x", expand_x, "lattice vector as a JSON array")->required();
  expand_cmd->add_option("--max-steps", expand_max_steps, "step budget");

  // ---- decide ------------------------------------------------------------
  auto* decide_cmd = app.add_subcommand("decide", "exact radix-representation decision");
  CommonArgs decide_args;
  decide_args.attach(decide_cmd);
  std::uint64_t decide_cap = defaults.cap;
  decide_cmd->add_option("--cap", decide_cap, "lattice-point cap");

  // ---- beta --------------------------------------------------------------
  auto* beta_cmd = app.add_subcommand("beta", "smallest beta with A^beta representable");
  CommonArgs beta_args;
  beta_args.attach(beta_cmd, false);
  unsigned beta_kmax = defaults.kmax;
  std::uint64_t beta_cap = defaults.cap;
  beta_cmd->add_option("--kmax", beta_kmax, "largest power tried");
  beta_cmd->add_option("--cap", beta_cap, "lattice-point cap per decision");

  // ---- tile --------------------------------------------------------------
  auto* tile_cmd = app.add_subcommand("tile", "tile approximations and statistics");
  tile_cmd->require_subcommand(1);

  auto* render_cmd = tile_cmd->add_subcommand("render", "rasterize the tile point cloud");
  CommonArgs render_args;
  render_args.attach(render_cmd);
  int render_depth = 12, render_width = 800, render_height = 800;
  std::vector<double> render_window;
  render_cmd->add_option("--depth", render_depth, "point-cloud depth k");
  render_cmd->add_option("--width", render_width, "raster width");
  render_cmd->add_option("--height", render_height, "raster height");
  render_cmd->add_option("--window", render_window, "x0 x1 y0 y1 (defaults to the R_T box)")
      ->expected(4);

  auto* mult_cmd = tile_cmd->add_subcommand("multiplicity", "sampled covering multiplicity");
  CommonArgs mult_args;
  mult_args.attach(mult_cmd);
  auto mult_opts = std::make_shared<rt::cli::CaseOptions>(defaults);
  mult_cmd->add_option("--samples", mult_opts->samples, "sample count");
  mult_cmd->add_option("--depth", mult_opts->depth, "membership depth");
  mult_cmd->add_option("--seed", mult_opts->seed, "RNG seed");

  // ---- wavelet -----------------------------------------------------------
  auto* wavelet_cmd = app.add_subcommand("wavelet", "scaling-function verification");
  wavelet_cmd->require_subcommand(1);

  auto* check_cmd = wavelet_cmd->add_subcommand("check", "refinement and orthonormality");
  CommonArgs check_args;
  check_args.attach(check_cmd);
  auto check_opts = std::make_shared<rt::cli::CaseOptions>(defaults);
  check_cmd->add_option("--samples", check_opts->samples, "sample count");
  check_cmd->add_option("--depth", check_opts->depth, "membership depth");
  check_cmd->add_option("--seed", check_opts->seed, "RNG seed");

  auto* mra_cmd = wavelet_cmd->add_subcommand("mra", "beta search plus scaling checks");
  CommonArgs mra_args;
  mra_args.attach(mra_cmd, false);
  auto mra_opts = std::make_shared<rt::cli::CaseOptions>(defaults);
  mra_cmd->add_option("--kmax", mra_opts->kmax, "largest power tried");
  mra_cmd->add_option("--samples", mra_opts->samples, "sample count");
  mra_cmd->add_option("--depth", mra_opts->depth, "membership depth");
  mra_cmd->add_option("--seed", mra_opts->seed, "RNG seed");
  mra_cmd->add_option("--cap", mra_opts->cap, "lattice-point cap per decision");

  auto* symbol_cmd = wavelet_cmd->add_subcommand("symbol", "low-pass symbol m0(xi)");
  CommonArgs symbol_args;
  symbol_args.attach(symbol_cmd);
  std::vector<double> symbol_xi;
  symbol_cmd->add_option("--xi", symbol_xi, "frequency vector")->required();

  // ---- figure1 -----------------------------------------------------------
  auto* figure_cmd = app.add_subcommand("figure1", "deterministic twin-dragon raster");
  std::string figure_out = "figure1.pgm";
  int figure_depth = rt::cli::FigureDefaults::kDepth;
  std::string figure_matrix, figure_digits;
  figure_cmd->add_option("--out", figure_out, "output PGM path");
  figure_cmd->add_option("--depth", figure_depth, "point-cloud depth");
  figure_cmd->add_option("--matrix", figure_matrix, "override the dilation matrix");
  figure_cmd->add_option("--digits", figure_digits, "override the digit set");

  // ---- suite -------------------------------------------------------------
  auto* suite_cmd = app.add_subcommand("suite", "batch analyze with aggregated cross-checks");
  std::string suite_file, suite_out;
  unsigned suite_jobs = 1;
  suite_cmd->add_option("file", suite_file, "suite JSON file")->required();
  suite_cmd->add_option("--out", suite_out, "write the aggregated JSON here");
  suite_cmd->add_option("--jobs", suite_jobs, "concurrent cases");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) {
      rt::cli::ProblemSpec spec;
      spec.matrix = parse_matrix_arg(analyze_args.matrix);
      if (!analyze_args.digits.empty() || !analyze_args.digits_file.empty()) {
        spec.canonical = false;
        spec.explicit_digits = parse_digits_arg(analyze_args.digits, analyze_args.digits_file);
      }
      spec.options = *analyze_opts;
      rt::cli::AnalyzeRecord rec = rt::cli::run_analyze(spec);
      emit(rt::cli::to_json(rec), analyze_args.out);
      if (!rec.error.empty()) {
        std::cerr << "error: " << rec.error << "\n";
        return 1;
      }
      return rec.cross_check.ok ? 0 : 2;
    }

    if (*digits_cmd) {
      emit(rt::io::to_json(digits_args.resolve_digits()), digits_args.out);
      return 0;
    }

    if (*expand_cmd) {
      auto d = expand_args.resolve_digits();
      auto e = rt::radix::expand(parse_vector_arg(expand_x), d, expand_max_steps);
      emit(rt::io::to_json(e), expand_args.out);
      return 0;
    }

    if (*decide_cmd) {
      auto d = decide_args.resolve_digits();
      emit(rt::io::to_json(rt::radix::decide_radix(d, decide_cap)), decide_args.out);
      return 0;
    }

    if (*beta_cmd) {
      rt::IntMatrix a = parse_matrix_arg(beta_args.matrix);
      auto found = rt::spectral::find_beta(a, beta_kmax, beta_cap);
      if (!found) {
        emit(json{{"beta", nullptr}, {"kmax", beta_kmax}}, beta_args.out);
        return 0;
      }
      emit(rt::io::to_json(*found), beta_args.out);
      return 0;
    }

    if (*render_cmd) {
      auto d = render_args.resolve_digits();
      std::optional<rt::tile::Window> win;
      if (!render_window.empty())
        win = rt::tile::Window{render_window[0], render_window[1], render_window[2],
                               render_window[3]};
      auto raster =
          rt::tile::render_tile_2d(d, render_depth, render_width, render_height, win);
      std::string out = render_args.out.empty() ? "tile.pgm" : render_args.out;
      rt::tile::write_pgm(raster, out);
      std::cout << json{{"out", out}, {"filled_pixels", raster.filled()}}.dump(2) << "\n";
      return 0;
    }

    if (*mult_cmd) {
      auto d = mult_args.resolve_digits();
      auto est = rt::tile::multiplicity_estimate(d, mult_opts->samples, mult_opts->depth,
                                                 mult_opts->seed);
      emit(rt::io::to_json(est), mult_args.out);
      return 0;
    }

    if (*check_cmd) {
      auto d = check_args.resolve_digits();
      auto phi = rt::wavelet::make_scaling_function(d, check_opts->depth);
      auto refinement =
          rt::wavelet::refinement_check(phi, check_opts->samples, check_opts->depth,
                                        check_opts->seed);
      auto ortho = rt::wavelet::orthonormality_check(phi, check_opts->samples, check_opts->depth,
                                                     check_opts->seed);
      emit(json{{"refinement", rt::io::to_json(refinement)},
                {"orthonormality", rt::io::to_json(ortho)}},
           check_args.out);
      return 0;
    }

    if (*mra_cmd) {
      rt::IntMatrix a = parse_matrix_arg(mra_args.matrix);
      auto report = rt::wavelet::haar_mra(a, mra_opts->kmax, mra_opts->samples, mra_opts->depth,
                                          mra_opts->seed, mra_opts->cap);
      emit(rt::io::to_json(report), mra_args.out);
      return 0;
    }

    if (*symbol_cmd) {
      auto d = symbol_args.resolve_digits();
      auto m0 = rt::wavelet::lowpass_symbol(d, symbol_xi);
      emit(json{{"re", m0.real()}, {"im", m0.imag()}, {"abs", std::abs(m0)}}, symbol_args.out);
      return 0;
    }

    if (*figure_cmd) {
      std::optional<rt::digits::DigitSet> d;
      if (!figure_matrix.empty()) {
        rt::IntMatrix a = parse_matrix_arg(figure_matrix);
        if (!figure_digits.empty())
          d = rt::digits::validate_digit_set(a, parse_digits_arg(figure_digits, ""));
        else
          d = rt::digits::canonical_digits(a);
      }
      auto raster = rt::cli::cmd_figure1(figure_depth, d);
      rt::tile::write_pgm(raster, figure_out);
      std::cout << json{{"out", figure_out},
                        {"filled_pixels", raster.filled()},
                        {"filled_fraction",
                         static_cast<double>(raster.filled()) /
                             (static_cast<double>(raster.width) * raster.height)}}
                       .dump(2)
                << "\n";
      return 0;
    }

    if (*suite_cmd) {
      auto specs = rt::cli::suite_from_json(load_json_file(suite_file));
      auto result = rt::cli::run_suite(specs, suite_jobs);
      emit(rt::cli::to_json(result), suite_out);
      return result.violations.empty() ? 0 : 2;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
