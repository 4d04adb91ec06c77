#include "fringestep/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace fringestep {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int case_id(FringeCase c) {
  switch (c) {
    case FringeCase::I: return 1;
    case FringeCase::II: return 2;
    case FringeCase::III: return 3;
  }
  throw std::logic_error("case_id: bad enum value");
}

std::tuple<int, int, int, double> key_tuple(const MaeKey& k) {
  return {case_id(k.fringe_case), static_cast<int>(k.prefilter), static_cast<int>(k.estimator),
          k.sigma};
}

}  // namespace

std::vector<double> default_sigma_levels() {
  std::vector<double> out(10);
  for (int i = 0; i < 10; ++i) out[static_cast<std::size_t>(i)] = static_cast<double>(i) / 9.0;
  return out;
}

ExperimentPlan default_paper_plan() {
  ExperimentPlan plan;
  plan.combos = {
      {FringeCase::I, Prefilter::None, Estimator::Tan},
      {FringeCase::I, Prefilter::None, Estimator::Sin},
      {FringeCase::II, Prefilter::None, Estimator::Tan},
      {FringeCase::II, Prefilter::None, Estimator::Sin},
      {FringeCase::III, Prefilter::Isotropic, Estimator::Sin},
      {FringeCase::III, Prefilter::Gfb, Estimator::Sin},
  };
  plan.sigmas = default_sigma_levels();
  plan.trials = 50;
  plan.delta_true = kPi / 3.0;
  plan.base_seed = 1;
  plan.image = ImageParams{};
  return plan;
}

void validate_plan(const ExperimentPlan& plan) {
  if (plan.combos.empty()) {
    throw std::invalid_argument("plan: needs at least one combo");
  }
  for (std::size_t i = 0; i < plan.combos.size(); ++i) {
    const TrialCombo& c = plan.combos[i];
    if (c.fringe_case == FringeCase::III && c.prefilter == Prefilter::None &&
        c.estimator == Estimator::Sin) {
      throw std::invalid_argument(
          "plan: case III with the sin estimator requires a prefilter "
          "(the estimator assumes background-free, unit-amplitude input)");
    }
    for (std::size_t j = i + 1; j < plan.combos.size(); ++j) {
      const TrialCombo& d = plan.combos[j];
      if (c.fringe_case == d.fringe_case && c.prefilter == d.prefilter &&
          c.estimator == d.estimator) {
        throw std::invalid_argument("plan: duplicate combo");
      }
    }
  }
  if (plan.sigmas.empty()) {
    throw std::invalid_argument("plan: needs at least one sigma level");
  }
  for (std::size_t i = 0; i < plan.sigmas.size(); ++i) {
    if (plan.sigmas[i] < 0.0) {
      throw std::invalid_argument("plan: sigma levels must be non-negative");
    }
    if (i > 0 && plan.sigmas[i] <= plan.sigmas[i - 1]) {
      throw std::invalid_argument("plan: sigma levels must be strictly ascending");
    }
  }
  if (plan.trials < 1) {
    throw std::invalid_argument("plan: trials must be at least 1");
  }
  if (!(plan.delta_true > 0.0 && plan.delta_true <= kPi)) {
    throw std::invalid_argument("plan: delta must lie in (0, pi]");
  }
  if (plan.image.width < 2 || plan.image.height < 2) {
    throw std::invalid_argument("plan: image dimensions must be at least 2x2");
  }
  if (!(plan.image.fringe_scale > 0.0)) {
    throw std::invalid_argument("plan: fringe_scale must be positive");
  }
}

std::uint64_t trial_seed(std::uint64_t base_seed, FringeCase fringe_case, int sigma_index,
                         int trial_index) {
  const std::uint64_t h =
      mix_seed(mix_seed(static_cast<std::uint64_t>(case_id(fringe_case)),
                        static_cast<std::uint64_t>(sigma_index)),
               static_cast<std::uint64_t>(trial_index));
  return base_seed ^ h;
}

ExperimentRecord run_trial(FringeCase fringe_case, Prefilter prefilter, Estimator estimator,
                           double sigma, double delta_true, std::uint64_t seed,
                           const ImageParams& image) {
  ExperimentRecord rec;
  rec.fringe_case = fringe_case;
  rec.prefilter = prefilter;
  rec.estimator = estimator;
  rec.sigma = sigma;
  rec.delta_true = delta_true;
  rec.seed = seed;

  SynthSpec spec;
  spec.width = image.width;
  spec.height = image.height;
  spec.fringe_case = fringe_case;
  spec.delta = delta_true;
  spec.sigma = sigma;
  spec.seed = seed;
  spec.fringe_scale = image.fringe_scale;
  const FringePair pair = synthesize(spec);

  try {
    const ScalarField f1 = apply_prefilter(pair.i1, prefilter);
    const ScalarField f2 = apply_prefilter(pair.i2, prefilter);
    const StepEstimate est = estimator == Estimator::Tan ? estimate_step_tan(f1, f2)
                                                         : estimate_step_sin(f1, f2);
    rec.status = TrialStatus::Ok;
    rec.delta_hat = est.delta_hat;
    rec.abs_err = std::abs(est.delta_hat - delta_true);
    rec.kappa_ratio = est.kappa_ratio;
    rec.mask_fraction = est.mask_fraction;
  } catch (const DegeneratePairError&) {
    rec.status = TrialStatus::Failed;
    rec.delta_hat = kNaN;
    rec.abs_err = kNaN;
    rec.kappa_ratio = 0.0;
    rec.mask_fraction = 0.0;
  } catch (const MaskStarvationError&) {
    rec.status = TrialStatus::Failed;
    rec.delta_hat = kNaN;
    rec.abs_err = kNaN;
    rec.kappa_ratio = 0.0;
    rec.mask_fraction = 0.0;
  }
  return rec;
}

std::vector<ExperimentRecord> run_plan(const ExperimentPlan& plan, int n_threads) {
  validate_plan(plan);

  struct Job {
    TrialCombo combo;
    int sigma_index = 0;
    int trial_index = 0;
  };
  std::vector<Job> jobs;
  jobs.reserve(plan.combos.size() * plan.sigmas.size() * static_cast<std::size_t>(plan.trials));
  for (const TrialCombo& combo : plan.combos) {
    for (std::size_t si = 0; si < plan.sigmas.size(); ++si) {
      for (int t = 0; t < plan.trials; ++t) {
        jobs.push_back({combo, static_cast<int>(si), t});
      }
    }
  }

  std::vector<ExperimentRecord> records(jobs.size());
  const auto worker_count = [n_threads, &jobs]() -> unsigned {
    if (n_threads > 0) return static_cast<unsigned>(n_threads);
    const unsigned hw = std::thread::hardware_concurrency();
    const unsigned cap = static_cast<unsigned>(jobs.size());
    return std::max(1u, std::min(hw == 0 ? 1u : hw, cap));
  }();

  // Indexed result slots: the record content depends only on the job, so the
  // output is identical no matter how jobs land on threads.
  std::atomic<std::size_t> next{0};
  const auto work = [&]() {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= jobs.size()) return;
      const Job& job = jobs[k];
      const std::uint64_t seed = trial_seed(plan.base_seed, job.combo.fringe_case,
                                            job.sigma_index, job.trial_index);
      records[k] = run_trial(job.combo.fringe_case, job.combo.prefilter, job.combo.estimator,
                             plan.sigmas[static_cast<std::size_t>(job.sigma_index)],
                             plan.delta_true, seed, plan.image);
      records[k].trial = job.trial_index;
    }
  };

  if (worker_count <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(worker_count);
    for (unsigned t = 0; t < worker_count; ++t) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  return records;
}

std::vector<MaeSummary> aggregate_mae(const std::vector<ExperimentRecord>& records) {
  if (records.empty()) {
    throw std::invalid_argument("aggregate_mae: no records");
  }
  std::map<std::tuple<int, int, int, double>, MaeSummary> groups;
  std::map<std::tuple<int, int, int, double>, std::vector<double>> errors;
  for (const ExperimentRecord& rec : records) {
    const MaeKey key{rec.fringe_case, rec.prefilter, rec.estimator, rec.sigma};
    const auto tk = key_tuple(key);
    MaeSummary& g = groups[tk];
    g.key = key;
    if (rec.status == TrialStatus::Ok) {
      ++g.n_ok;
      errors[tk].push_back(rec.abs_err);
    } else {
      ++g.n_failed;
    }
  }
  std::vector<MaeSummary> out;
  out.reserve(groups.size());
  for (auto& [tk, g] : groups) {
    const auto it = errors.find(tk);
    if (it == errors.end() || it->second.empty()) {
      // All trials failed: keep the row as an explicit marker.
      g.mae_mean = kNaN;
      g.mae_median = kNaN;
      g.q25 = kNaN;
      g.q75 = kNaN;
    } else {
      g.mae_mean = mean(it->second);
      g.mae_median = median(it->second);
      g.q25 = percentile(it->second, 25.0);
      g.q75 = percentile(it->second, 75.0);
    }
    out.push_back(g);
  }
  return out;
}

double spearman_rho(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("spearman_rho: need two sequences of equal length >= 2");
  }
  const auto ranks = [](const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    for (std::size_t k = 0; k < n; ++k) order[k] = k;
    std::sort(order.begin(), order.end(),
              [&v](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(n);
    std::size_t k = 0;
    while (k < n) {
      std::size_t j = k;
      while (j + 1 < n && v[order[j + 1]] == v[order[k]]) ++j;
      const double mid = 0.5 * static_cast<double>(k + j) + 1.0;  // mid-rank, 1-based
      for (std::size_t q = k; q <= j; ++q) r[order[q]] = mid;
      k = j + 1;
    }
    return r;
  };
  const std::vector<double> rx = ranks(x);
  const std::vector<double> ry = ranks(y);
  const double mx = mean(rx);
  const double my = mean(ry);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t k = 0; k < rx.size(); ++k) {
    const double dx = rx[k] - mx;
    const double dy = ry[k] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw std::invalid_argument("spearman_rho: a sequence is constant");
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace fringestep
