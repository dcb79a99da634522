// Copyright 2026 The decaylab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "decaylab/error.hpp"
#include "decaylab/interior.hpp"

namespace decaylab {
namespace {

constexpr std::size_t kBlockSize = 16;

// Per-step running mean and sum of squared deviations.
struct BlockStats {
  double count = 0.0;
  std::vector<double> mean;
  std::vector<double> m2;
};

void accumulate(BlockStats& stats, const std::vector<double>& products) {
  stats.count += 1.0;
  for (std::size_t k = 0; k < products.size(); ++k) {
    const double x = products[k];
    const double d = x - stats.mean[k];
    stats.mean[k] += d / stats.count;
    stats.m2[k] += d * (x - stats.mean[k]);
  }
}

void merge(BlockStats& into, const BlockStats& from) {
  if (from.count == 0.0) return;
  if (into.count == 0.0) {
    into = from;
    return;
  }
  const double total = into.count + from.count;
  for (std::size_t k = 0; k < into.mean.size(); ++k) {
    const double d = from.mean[k] - into.mean[k];
    into.mean[k] += d * from.count / total;
    into.m2[k] += from.m2[k] + d * d * into.count * from.count / total;
  }
  into.count = total;
}

// Running product at k = 0..N; zero after termination.
void trajectory_products(const InteriorEnsembleConfig& config, const StepContext& ctx,
                         std::size_t steps, RandomStream& rng, std::vector<double>& products) {
  products.assign(steps + 1, 0.0);
  products[0] = 1.0;
  InteriorState state = initial_state(config);
  double log_product = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    StepOutcome step = sample_step(config, state, ctx, rng);
    if (step.terminated) return;
    log_product += std::log(step.survival);
    products[k + 1] = std::exp(log_product);
    state = std::move(step.next);
  }
}

}  // namespace

SurvivalCurve ensemble_survival(const InteriorEnsembleConfig& config, const SequencePlan& plan,
                                std::size_t n_traj, std::size_t workers) {
  config.validate();
  if (n_traj < 2) throw Error(ErrorKind::invalid_input, "ensemble_survival: n_traj must be >= 2");
  StepContext ctx = make_step_context(config, plan.step());
  ctx.record_commutator = false;
  const auto steps = static_cast<std::size_t>(plan.steps());

  const std::size_t n_blocks = (n_traj + kBlockSize - 1) / kBlockSize;
  std::vector<BlockStats> blocks(n_blocks);
  if (workers == 0) workers = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  workers = std::min(workers, n_blocks);

  std::atomic<std::size_t> next_block{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    std::vector<double> products;
    for (;;) {
      const std::size_t b = next_block.fetch_add(1);
      if (b >= n_blocks) return;
      try {
        BlockStats stats;
        stats.mean.assign(steps + 1, 0.0);
        stats.m2.assign(steps + 1, 0.0);
        const std::size_t end = std::min(n_traj, (b + 1) * kBlockSize);
        for (std::size_t i = b * kBlockSize; i < end; ++i) {
          RandomStream rng(split_seed(config.seed, i));
          trajectory_products(config, ctx, steps, rng, products);
          accumulate(stats, products);
        }
        blocks[b] = std::move(stats);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next_block.store(n_blocks);
        return;
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  BlockStats total;
  for (const auto& block : blocks) merge(total, block);

  SurvivalCurve curve;
  curve.reserve(steps + 1);
  const double n = total.count;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double variance = std::max(0.0, total.m2[k] / (n - 1.0));
    curve.push_back({plan.time_at(k), total.mean[k], std::sqrt(variance / n)});
  }
  return curve;
}

}  // namespace decaylab
