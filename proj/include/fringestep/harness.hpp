#pragma once

#include "fringestep/gs_step.hpp"
#include "fringestep/prefilter.hpp"
#include "fringestep/synth.hpp"

#include <cstdint>
#include <vector>

namespace fringestep {

// Geometry shared by every trial of a plan.
struct ImageParams {
  int width = 256;
  int height = 256;
  double fringe_scale = 20.0;
};

// One (case, prefilter, estimator) pipeline under evaluation.
struct TrialCombo {
  FringeCase fringe_case = FringeCase::I;
  Prefilter prefilter = Prefilter::None;
  Estimator estimator = Estimator::Tan;
};

// Noise-sweep experiment: every combo runs at every sigma level for `trials`
// repetitions.  Combinations are listed explicitly; a plan is invalid if it
// pairs the sin estimator with no prefilter on case III (that estimator
// assumes background-free, unit-amplitude input there).
struct ExperimentPlan {
  std::vector<TrialCombo> combos;
  std::vector<double> sigmas;  // ascending, non-negative
  int trials = 50;
  double delta_true = kPi / 3.0;
  std::uint64_t base_seed = 1;
  ImageParams image;
};

// The default 10-level noise grid sigma_i = i/9, i = 0..9.
std::vector<double> default_sigma_levels();

// The full built-in evaluation: cases I and II with both estimators and no
// prefilter, case III with the sin estimator under both normalizers; 10 sigma
// levels x 50 trials, delta = pi/3, 256x256, fringe_scale 20.
ExperimentPlan default_paper_plan();

// Throws std::invalid_argument describing the first problem found.
void validate_plan(const ExperimentPlan& plan);

enum class TrialStatus { Ok, Failed };

// One trial's outcome.  delta_hat and abs_err are NaN when status == Failed
// (degenerate pair or mask starvation); kappa_ratio and mask_fraction are 0
// in that case so every record stays finite.
struct ExperimentRecord {
  FringeCase fringe_case = FringeCase::I;
  Prefilter prefilter = Prefilter::None;
  Estimator estimator = Estimator::Tan;
  double sigma = 0.0;
  int trial = 0;
  double delta_true = 0.0;
  double delta_hat = 0.0;
  double abs_err = 0.0;
  TrialStatus status = TrialStatus::Ok;
  double kappa_ratio = 0.0;
  double mask_fraction = 0.0;
  std::uint64_t seed = 0;
};

// Deterministic per-trial seed: base_seed XOR a SplitMix64 hash of the trial
// coordinates.  The estimator and prefilter do not enter, so pipelines are
// compared on identical synthetic pairs.
std::uint64_t trial_seed(std::uint64_t base_seed, FringeCase fringe_case, int sigma_index,
                         int trial_index);

// Runs one trial: synthesize -> prefilter both frames -> estimate.  Estimator
// degeneracy and mask starvation are recorded as a failed row, not thrown.
ExperimentRecord run_trial(FringeCase fringe_case, Prefilter prefilter, Estimator estimator,
                           double sigma, double delta_true, std::uint64_t seed,
                           const ImageParams& image);

// Runs combos x sigmas x trials.  Records come back in canonical order (combo,
// then sigma, then trial) regardless of scheduling; n_threads = 0 uses the
// hardware concurrency.
std::vector<ExperimentRecord> run_plan(const ExperimentPlan& plan, int n_threads = 0);

// Aggregation key and summary for one (case, prefilter, estimator, sigma) group.
struct MaeKey {
  FringeCase fringe_case = FringeCase::I;
  Prefilter prefilter = Prefilter::None;
  Estimator estimator = Estimator::Tan;
  double sigma = 0.0;

  friend bool operator==(const MaeKey&, const MaeKey&) = default;
};

struct MaeSummary {
  MaeKey key;
  int n_ok = 0;
  int n_failed = 0;
  // Statistics over |delta_hat - delta_true| of successful trials; NaN when
  // the whole group failed (the row itself is the all-failed marker).
  double mae_mean = 0.0;
  double mae_median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
};

// Groups records and summarizes the error distribution per group, sorted by
// (case, prefilter, estimator, sigma).  Throws std::invalid_argument when
// records is empty.
std::vector<MaeSummary> aggregate_mae(const std::vector<ExperimentRecord>& records);

// Spearman rank correlation (mid-rank ties).  Used to check that estimator
// error grows monotonically with the noise level.
double spearman_rho(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace fringestep
