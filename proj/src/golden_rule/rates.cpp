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
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "decaylab/error.hpp"
#include "decaylab/golden_rule.hpp"

namespace decaylab {
namespace {

std::size_t resonance_window(std::size_t levels) {
  return std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(static_cast<double>(levels) / 20.0)));
}

// Golden-rule rate from a sorted set of continuum levels, using the set's own
// level density. Shared by fgr_rate and channel_rates so that the whole-band
// channel reproduces fgr_rate bit for bit.
RateEstimate rate_over_levels(const ContinuumModel& model, const std::vector<std::size_t>& levels) {
  if (levels.empty()) throw Error(ErrorKind::invalid_input, "golden rule: empty channel");
  const auto& energies = model.energies();
  const double total = static_cast<double>(model.levels());
  const double count = static_cast<double>(levels.size());
  const double cell = model.band_width() / total;

  // Span of the channel measured in level cells: (last - first) index units
  // stretched by count / (count - 1) so an every-other-level channel covers
  // the whole band.
  const double span_cells =
      levels.size() == 1
          ? 1.0
          : static_cast<double>(levels.back() - levels.front()) * count / (count - 1.0);
  const double density = (count * total) / (span_cells * model.band_width());

  RateEstimate out;
  out.method = RateMethod::formula;
  out.diagnostics["levels"] = count;
  out.diagnostics["density_of_states"] = density;

  const double e_i = model.bound_energy();
  const double low = energies[levels.front()] - (levels.size() == 1 ? cell / 2.0 : 0.0);
  const double high = energies[levels.back()] + (levels.size() == 1 ? cell / 2.0 : 0.0);
  if (e_i < low || e_i > high) {
    out.rate = 0.0;
    out.diagnostics["below_resonance"] = 1.0;
    return out;
  }

  const std::size_t n_res = std::min(resonance_window(levels.size()), levels.size());
  std::vector<std::size_t> nearest = levels;
  std::stable_sort(nearest.begin(), nearest.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(energies[a] - e_i) < std::abs(energies[b] - e_i);
  });
  nearest.resize(n_res);
  std::sort(nearest.begin(), nearest.end());

  double sum = 0.0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const std::size_t m : nearest) {
    const double w = std::norm(model.coupling(m));
    sum += w;
    lo = std::min(lo, w);
    hi = std::max(hi, w);
  }
  const double mean_sq = sum / static_cast<double>(n_res);
  out.rate = 2.0 * std::numbers::pi / model.hbar() * mean_sq * density;
  out.diagnostics["resonance_levels"] = static_cast<double>(n_res);
  out.diagnostics["coupling_spread"] = hi - lo;
  out.diagnostics["mean_coupling_sq"] = mean_sq;
  out.diagnostics["below_resonance"] = 0.0;
  return out;
}

}  // namespace

RateEstimate fgr_rate(const ContinuumModel& model, const std::optional<std::string>& channel) {
  if (channel) {
    const auto levels = model.channel_levels(*channel);
    if (levels.empty()) {
      throw Error(ErrorKind::invalid_input, "fgr_rate: no levels on channel '" + *channel + "'");
    }
    return rate_over_levels(model, levels);
  }
  std::vector<std::size_t> all(model.levels());
  std::iota(all.begin(), all.end(), 0);
  return rate_over_levels(model, all);
}

ChannelPartition::ChannelPartition(
    std::vector<std::pair<std::string, std::vector<std::size_t>>> groups, std::size_t levels)
    : groups_(std::move(groups)) {
  std::vector<int> seen(levels, 0);
  for (auto& [label, members] : groups_) {
    if (label.empty()) throw Error(ErrorKind::invalid_input, "partition: empty channel label");
    if (members.empty()) {
      throw Error(ErrorKind::invalid_input, "partition: channel '" + label + "' has no levels");
    }
    std::sort(members.begin(), members.end());
    for (const std::size_t m : members) {
      if (m >= levels) throw Error(ErrorKind::invalid_input, "partition: level out of range");
      if (++seen[m] > 1) {
        throw Error(ErrorKind::invalid_input,
                    "partition: level " + std::to_string(m) + " assigned twice");
      }
    }
  }
  for (std::size_t m = 0; m < levels; ++m) {
    if (seen[m] == 0) {
      throw Error(ErrorKind::invalid_input,
                  "partition: level " + std::to_string(m) + " not assigned to any channel");
    }
  }
}

ChannelPartition ChannelPartition::from_model(const ContinuumModel& model) {
  std::vector<std::pair<std::string, std::vector<std::size_t>>> groups;
  for (const auto& label : model.channels()) groups.emplace_back(label, model.channel_levels(label));
  return ChannelPartition(std::move(groups), model.levels());
}

std::vector<ChannelRate> channel_rates(const ContinuumModel& model,
                                       const ChannelPartition& partition) {
  // Re-validate against this model's size.
  ChannelPartition checked(partition.groups(), model.levels());
  std::vector<ChannelRate> out;
  for (const auto& [label, members] : checked.groups()) {
    RateEstimate est = rate_over_levels(model, members);
    // V_k must not connect |phi> to final states outside channel k.
    const Operator vk = model.interaction(members);
    std::vector<bool> inside(model.levels(), false);
    for (const std::size_t m : members) inside[m] = true;
    double leak = 0.0;
    for (std::size_t m = 0; m < model.levels(); ++m) {
      if (!inside[m]) leak = std::max(leak, std::abs(vk(m + 1, 0)));
    }
    est.diagnostics["separation_residual"] = leak;
    out.push_back({label, std::move(est)});
  }
  return out;
}

double multi_channel_survival(std::span<const double> rates, double t) {
  double product = 1.0;
  for (const double r : rates) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
      throw Error(ErrorKind::invalid_input, "multi_channel_survival: rates must be >= 0");
    }
    product *= std::exp(-t * r);
  }
  return product;
}

}  // namespace decaylab
