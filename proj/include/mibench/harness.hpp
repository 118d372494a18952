#pragma once

#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mibench/adam.hpp"
#include "mibench/critics.hpp"
#include "mibench/datagen/dataset.hpp"
#include "mibench/estimators.hpp"
#include "mibench/io.hpp"

namespace mibench {

struct ScheduleLevel {
  double mi_bits = 2.0;
  Index steps = 4000;
};

// Stepwise schedule: five MI levels, 4000 steps each.
inline std::vector<ScheduleLevel> default_schedule() {
  return {{2.0, 4000}, {4.0, 4000}, {6.0, 4000}, {8.0, 4000}, {10.0, 4000}};
}

struct HarnessOptions {
  CriticConfig critic;
  EstimatorKind estimator = EstimatorKind::dv();
  Index batch_size = 64;
  double learning_rate = 5e-4;
  double mine_ema_decay = 0.99;
  std::vector<ScheduleLevel> schedule = default_schedule();
  std::uint64_t seed = 0;
  Index eval_stride = 1;
  bool reinit_critic_per_level = false;

  void validate() const {
    if (batch_size < 2) throw ConfigError("batch_size must be >= 2");
    if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
    if (!(mine_ema_decay > 0.0 && mine_ema_decay < 1.0))
      throw ConfigError("mine_ema_decay must lie in (0, 1)");
    if (schedule.empty()) throw ConfigError("schedule must contain at least one level");
    for (const auto& level : schedule) {
      if (level.steps < 1) throw ConfigError("schedule step counts must be >= 1");
      if (level.mi_bits < 0.0) throw ConfigError("schedule MI levels must be >= 0");
    }
    if (eval_stride < 1) throw ConfigError("eval_stride must be >= 1");
    for (const auto& level : schedule)
      if (level.steps % eval_stride != 0)
        throw ConfigError("eval_stride must divide every level's step count");
    if (critic.hidden_dim < 1 || critic.depth < 1 || critic.embed_dim < 1)
      throw ConfigError("critic dimensions must be >= 1");
  }
};

struct MetricRecord {
  Index step = 0;
  double true_mi_nats = 0.0;
  double estimate_nats = 0.0;
  double loss = 0.0;
};

// Train the critic against the scheduled true-MI levels and record estimates.
// The critic persists across level transitions unless reinit is requested.
inline std::vector<MetricRecord> run_benchmark(
    PairSampler& sampler, const HarnessOptions& opts,
    const std::function<void(const MetricRecord&)>& observer = {}) {
  opts.validate();
  // Check every level is reachable before spending any training time.
  for (const auto& level : opts.schedule) sampler.set_level_nats(bits_to_nats(level.mi_bits));

  const Index dim = std::max(sampler.dim_x(), sampler.dim_y());
  Rng init_rng = make_rng(opts.seed, rng_stream::kCriticInit);
  Rng data_rng = make_rng(opts.seed, rng_stream::kData);

  CriticParams params = init_critic(opts.critic, dim, dim, init_rng);
  AdamConfig adam_cfg;
  adam_cfg.lr = opts.learning_rate;
  AdamState adam = AdamState::init(std::as_const(params).tensors(), adam_cfg);
  EmaState ema;
  ema.decay = opts.mine_ema_decay;

  std::vector<MetricRecord> records;
  Index global_step = 0;
  for (std::size_t li = 0; li < opts.schedule.size(); ++li) {
    const ScheduleLevel& level = opts.schedule[li];
    sampler.set_level_nats(bits_to_nats(level.mi_bits));
    const double truth = sampler.level_nats();
    if (opts.reinit_critic_per_level && li > 0) {
      params = init_critic(opts.critic, dim, dim, init_rng);
      adam = AdamState::init(std::as_const(params).tensors(), adam_cfg);
      ema = EmaState{};
      ema.decay = opts.mine_ema_decay;
    }

    for (Index s = 1; s <= level.steps; ++s) {
      ++global_step;
      MetricRecord rec;
      try {
        PairBatch batch = sampler.sample(opts.batch_size, data_rng);
        if (batch.x.cols() != batch.y.cols()) {
          if (batch.x.cols() < batch.y.cols())
            batch.x = pad_redundant(batch.x, batch.y.cols());
          else
            batch.y = pad_redundant(batch.y, batch.x.cols());
        }
        CriticCache cache;
        ScoreMatrix scores = score_matrix(opts.critic, params, batch.x, batch.y, &cache);
        LossResult loss = optimization_loss(opts.estimator, scores, &ema);
        CriticGrads grads = score_backward(opts.critic, params, cache, loss.grad_scores);
        for (auto& g : grads) g = -g;  // maximize the bound
        if (!grads.empty()) adam_step(params.tensors(), grads, adam);
        rec = {global_step, truth, estimate(opts.estimator, scores), loss.loss};
      } catch (const NumericError& e) {
        throw NumericError("step " + std::to_string(global_step) + ": " + e.what());
      } catch (const ShapeError& e) {
        throw ShapeError("step " + std::to_string(global_step) + ": " + e.what());
      }
      if (s % opts.eval_stride == 0) {
        records.push_back(rec);
        if (observer) observer(rec);
      }
    }
  }
  return records;
}

// Per-level estimation quality over a record window.
struct SummarySlice {
  double true_mi_nats = 0.0;
  double mean_estimate_nats = 0.0;
  double bias_nats = 0.0;
  double variance_nats2 = 0.0;
  double mse_nats2 = 0.0;
  double true_mi_bits = 0.0;
  double mean_estimate_bits = 0.0;
  double bias_bits = 0.0;
  double variance_bits2 = 0.0;
  double mse_bits2 = 0.0;
  Index count = 0;
};

struct Window {
  Index first_step = 0;
  Index last_step = 0;
};

inline std::vector<Window> schedule_windows(const std::vector<ScheduleLevel>& schedule) {
  std::vector<Window> windows;
  Index at = 0;
  for (const auto& level : schedule) {
    windows.push_back({at + 1, at + level.steps});
    at += level.steps;
  }
  return windows;
}

// Mean/bias/population-variance/MSE of the estimates inside each window.
// Empty windows are skipped.
inline std::vector<SummarySlice> summarize(const std::vector<MetricRecord>& records,
                                           const std::vector<Window>& windows) {
  constexpr double ln2 = kNatsPerBit;
  std::vector<SummarySlice> slices;
  for (const auto& w : windows) {
    double sum = 0.0, truth = 0.0;
    Index n = 0;
    for (const auto& r : records)
      if (r.step >= w.first_step && r.step <= w.last_step) {
        sum += r.estimate_nats;
        truth = r.true_mi_nats;
        ++n;
      }
    if (n == 0) continue;
    const double mean = sum / static_cast<double>(n);
    double var = 0.0, mse = 0.0;
    for (const auto& r : records)
      if (r.step >= w.first_step && r.step <= w.last_step) {
        var += (r.estimate_nats - mean) * (r.estimate_nats - mean);
        mse += (r.estimate_nats - truth) * (r.estimate_nats - truth);
      }
    var /= static_cast<double>(n);
    mse /= static_cast<double>(n);

    SummarySlice s;
    s.count = n;
    s.true_mi_nats = truth;
    s.mean_estimate_nats = mean;
    s.bias_nats = mean - truth;
    s.variance_nats2 = var;
    s.mse_nats2 = mse;
    s.true_mi_bits = truth / ln2;
    s.mean_estimate_bits = mean / ln2;
    s.bias_bits = s.bias_nats / ln2;
    s.variance_bits2 = var / (ln2 * ln2);
    s.mse_bits2 = mse / (ln2 * ln2);
    slices.push_back(s);
  }
  return slices;
}

// Windows inferred from contiguous runs of equal true MI.
inline std::vector<SummarySlice> summarize(const std::vector<MetricRecord>& records) {
  std::vector<Window> windows;
  for (std::size_t i = 0; i < records.size();) {
    std::size_t j = i;
    while (j < records.size() && records[j].true_mi_nats == records[i].true_mi_nats) ++j;
    windows.push_back({records[i].step, records[j - 1].step});
    i = j;
  }
  return summarize(records, windows);
}

// Mean estimate over true MI; absent when the truth is (near) zero.
inline std::optional<double> estimate_ratio(const SummarySlice& slice) {
  if (std::abs(slice.true_mi_nats) < 1e-12) return std::nullopt;
  return slice.mean_estimate_nats / slice.true_mi_nats;
}

// CSV stream of per-step records. The header comment pins config hash and
// seed so files are traceable; formatting is fixed for byte-identical reruns.
inline void write_metrics_csv(const std::string& path, const std::vector<MetricRecord>& records,
                              const std::string& config_hash, std::uint64_t seed) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "# mibench config_hash=" << config_hash << " seed=" << seed << "\n";
  out << "step,true_mi_bits,estimate_bits,loss\n";
  for (const auto& r : records)
    out << r.step << ',' << format_double(nats_to_bits(r.true_mi_nats)) << ','
        << format_double(nats_to_bits(r.estimate_nats)) << ',' << format_double(r.loss) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace mibench
