// fringestep: two-frame fringe-pattern phase-step estimation toolkit.
//
// Subcommands: synth (generate a synthetic pair), estimate (phase step of a
// PFM pair), demod (wrapped phase of a pair), experiment (noise-sweep runs to
// CSV + charts), plot (charts from an existing CSV).
//
// Exit codes: 0 success, 2 usage error, 3 data/format error, 4 numerical
// degeneracy (parallel frames / starved mask).

#include "fringestep/gs_step.hpp"
#include "fringestep/harness.hpp"
#include "fringestep/io.hpp"
#include "fringestep/prefilter.hpp"
#include "fringestep/svg.hpp"
#include "fringestep/synth.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace fringestep;

namespace {

struct SizeSpec {
  int width = 256;
  int height = 256;
};

SizeSpec parse_size(const std::string& text) {
  SizeSpec s;
  const std::size_t x = text.find('x');
  try {
    if (x == std::string::npos) {
      s.width = s.height = std::stoi(text);
    } else {
      s.width = std::stoi(text.substr(0, x));
      s.height = std::stoi(text.substr(x + 1));
    }
  } catch (const std::exception&) {
    throw CLI::ValidationError("--size", "expected WIDTHxHEIGHT or a single integer");
  }
  if (s.width < 2 || s.height < 2) {
    throw CLI::ValidationError("--size", "dimensions must be at least 2x2");
  }
  return s;
}

int cmd_synth(const std::string& case_name, double delta, double sigma, std::uint64_t seed,
              const std::string& size_text, double fringe_scale, const std::string& out_dir,
              bool preview) {
  SynthSpec spec;
  const SizeSpec size = parse_size(size_text);
  spec.width = size.width;
  spec.height = size.height;
  spec.fringe_case = parse_fringe_case(case_name);
  spec.delta = delta;
  spec.sigma = sigma;
  spec.seed = seed;
  spec.fringe_scale = fringe_scale;

  const FringePair pair = synthesize(spec);
  fs::create_directories(out_dir);
  const auto path = [&out_dir](const char* name) { return (fs::path(out_dir) / name).string(); };
  write_pfm(path("i1.pfm"), pair.i1);
  write_pfm(path("i2.pfm"), pair.i2);
  write_pfm(path("truth_phi.pfm"), pair.truth->phi);
  write_pfm(path("truth_a.pfm"), pair.truth->a);
  write_pfm(path("truth_b.pfm"), pair.truth->b);
  write_synth_meta(path("meta.txt"), spec);
  if (preview) {
    write_pgm_preview(path("i1.pgm"), pair.i1);
    write_pgm_preview(path("i2.pgm"), pair.i2);
  }
  std::cout << "wrote i1.pfm i2.pfm truth_phi.pfm truth_a.pfm truth_b.pfm meta.txt"
            << (preview ? " i1.pgm i2.pgm" : "") << " in " << out_dir << "\n";
  return 0;
}

int cmd_estimate(const std::string& i1_path, const std::string& i2_path,
                 const std::string& estimator_name_text, const std::string& prefilter_name_text,
                 const std::string& aggregator_name_text) {
  const Estimator estimator = parse_estimator(estimator_name_text);
  const Prefilter prefilter = parse_prefilter(prefilter_name_text);
  const Aggregator aggregator = parse_aggregator(aggregator_name_text);

  const ScalarField u1 = apply_prefilter(read_pfm(i1_path), prefilter);
  const ScalarField u2 = apply_prefilter(read_pfm(i2_path), prefilter);
  const StepEstimate est = estimator == Estimator::Tan
                               ? estimate_step_tan(u1, u2, aggregator)
                               : estimate_step_sin(u1, u2);

  char line[256];
  std::snprintf(line, sizeof line,
                "delta_hat_rad=%.12g delta_hat_deg=%.12g sign=%+d estimator=%s "
                "kappa_ratio=%.6g mask_fraction=%.6g",
                est.delta_hat, est.delta_hat * 180.0 / kPi, est.sign,
                estimator_name(est.estimator), est.kappa_ratio, est.mask_fraction);
  std::cout << line << "\n";
  return 0;
}

int cmd_demod(const std::string& i1_path, const std::string& i2_path,
              const std::string& out_path) {
  const ScalarField u1 = read_pfm(i1_path);
  const ScalarField u2 = read_pfm(i2_path);
  write_pfm(out_path, demodulate(u1, u2));
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

// Splits summaries per case and writes one chart per case; multi-case output
// paths get a _case_<C> suffix before the extension.  Returns written paths.
std::vector<std::string> write_charts(const std::vector<MaeSummary>& summaries,
                                      const std::string& out_svg) {
  std::map<int, std::vector<MaeSummary>> per_case;
  std::map<int, FringeCase> case_of;
  for (const MaeSummary& s : summaries) {
    const int id = static_cast<int>(s.key.fringe_case);
    per_case[id].push_back(s);
    case_of[id] = s.key.fringe_case;
  }
  std::vector<std::string> written;
  for (const auto& [id, rows] : per_case) {
    const char* cname = fringe_case_name(case_of[id]);
    std::string path = out_svg;
    if (per_case.size() > 1) {
      const fs::path p(out_svg);
      fs::path withSuffix = p.parent_path() /
                            (p.stem().string() + "_case_" + cname + p.extension().string());
      path = withSuffix.string();
    }
    write_mae_chart_svg(path, std::string("Case ") + cname + ": median |error| vs noise level",
                        rows);
    written.push_back(path);
  }
  return written;
}

int cmd_experiment(const std::string& plan_path, bool default_paper, const std::string& out_csv,
                   int threads) {
  ExperimentPlan plan;
  if (default_paper) {
    plan = default_paper_plan();
  } else {
    plan = load_plan(plan_path);
  }
  const std::size_t total = plan.combos.size() * plan.sigmas.size() *
                            static_cast<std::size_t>(plan.trials);
  std::cerr << "running " << total << " trials (" << plan.combos.size() << " pipelines x "
            << plan.sigmas.size() << " noise levels x " << plan.trials << " trials)...\n";
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<ExperimentRecord> records = run_plan(plan, threads);
  const auto t1 = std::chrono::steady_clock::now();
  const double secs = std::chrono::duration<double>(t1 - t0).count();
  write_result_csv(out_csv, records);
  std::cout << "wrote " << out_csv << " (" << records.size() << " records, "
            << static_cast<int>(secs) << " s)\n";
  if (default_paper) {
    const fs::path p(out_csv);
    const std::string svg = (p.parent_path() / (p.stem().string() + ".svg")).string();
    for (const std::string& f : write_charts(aggregate_mae(records), svg)) {
      std::cout << "wrote " << f << "\n";
    }
  }
  return 0;
}

int cmd_plot(const std::string& in_csv, const std::string& out_svg) {
  const std::vector<ExperimentRecord> records = read_result_csv(in_csv);
  if (records.empty()) {
    throw FileFormatError("plot: '" + in_csv + "' holds no records");
  }
  for (const std::string& f : write_charts(aggregate_mae(records), out_svg)) {
    std::cout << "wrote " << f << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-frame fringe-pattern phase-step estimation toolkit"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic phase-shifted fringe pair");
  std::string case_name;
  double delta = kPi / 3.0;
  double sigma = 0.0;
  std::uint64_t seed = 1;
  std::string size_text = "256x256";
  double fringe_scale = 20.0;
  std::string out_dir = ".";
  bool preview = false;
  synth->add_option("--case", case_name, "Scenario: I, II, or III")->required();
  synth->add_option("--delta", delta, "Phase step in radians (0, pi]");
  synth->add_option("--sigma", sigma, "Noise standard deviation");
  synth->add_option("--seed", seed, "Master seed");
  synth->add_option("--size", size_text, "Image size, WIDTHxHEIGHT or one integer");
  synth->add_option("--fringe-scale", fringe_scale, "Fringe density coefficient");
  synth->add_option("--out-dir", out_dir, "Output directory");
  synth->add_flag("--preview", preview, "Also write 8-bit PGM previews");

  // estimate
  auto* estimate = app.add_subcommand("estimate", "Estimate the phase step of a PFM pair");
  std::string i1_path;
  std::string i2_path;
  std::string estimator_text = "tan";
  std::string prefilter_text = "none";
  std::string aggregator_text = "median";
  estimate->add_option("--i1", i1_path, "First frame (PFM)")->required();
  estimate->add_option("--i2", i2_path, "Second frame (PFM)")->required();
  estimate->add_option("--estimator", estimator_text, "tan (ratio map) or sin (least squares)");
  estimate->add_option("--prefilter", prefilter_text, "none, isotropic, or gfb");
  estimate->add_option("--aggregator", aggregator_text, "mean or median (tan estimator)");

  // demod
  auto* demod = app.add_subcommand("demod", "Write the wrapped phase of a PFM pair");
  std::string demod_i1;
  std::string demod_i2;
  std::string demod_out;
  demod->add_option("--i1", demod_i1, "First frame (PFM)")->required();
  demod->add_option("--i2", demod_i2, "Second frame (PFM)")->required();
  demod->add_option("--out", demod_out, "Output wrapped-phase PFM")->required();

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Run a noise-sweep evaluation to CSV");
  std::string plan_path;
  bool default_paper = false;
  std::string out_csv = "results.csv";
  int threads = 0;
  experiment->add_option("--plan", plan_path, "Plan config file (key = value)");
  experiment->add_flag("--default-paper", default_paper,
                       "Run the built-in full three-case evaluation (also emits charts)");
  experiment->add_option("--out", out_csv, "Output CSV path");
  experiment->add_option("--threads", threads, "Worker threads (0 = hardware)");

  // plot
  auto* plot = app.add_subcommand("plot", "Render per-case MAE charts from a result CSV");
  std::string plot_in;
  std::string plot_out = "results.svg";
  plot->add_option("--in", plot_in, "Input CSV")->required();
  plot->add_option("--out", plot_out, "Output SVG path (multi-case input gets suffixes)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // normalize every usage failure to 2
  }

  try {
    if (synth->parsed()) {
      return cmd_synth(case_name, delta, sigma, seed, size_text, fringe_scale, out_dir, preview);
    }
    if (estimate->parsed()) {
      return cmd_estimate(i1_path, i2_path, estimator_text, prefilter_text, aggregator_text);
    }
    if (demod->parsed()) {
      return cmd_demod(demod_i1, demod_i2, demod_out);
    }
    if (experiment->parsed()) {
      if (default_paper == !plan_path.empty()) {
        std::cerr << "error: experiment needs exactly one of --plan FILE or --default-paper\n";
        return 2;
      }
      return cmd_experiment(plan_path, default_paper, out_csv, threads);
    }
    if (plot->parsed()) {
      return cmd_plot(plot_in, plot_out);
    }
    std::cerr << "error: no subcommand selected\n";
    return 2;
  } catch (const DegeneratePairError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const MaskStarvationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
