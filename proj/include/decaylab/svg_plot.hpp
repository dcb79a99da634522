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

#pragma once

#include <string>
#include <vector>

namespace decaylab {

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  std::string title;
  std::string x_label = "t";
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
};

/// Self-contained SVG 1.1 line plot with a legend. Output bytes depend only
/// on the inputs.
std::string render_plot(const std::vector<PlotSeries>& series, const PlotOptions& options);

/// render_plot written to `path`; throws io on failure.
void emit_plot(const std::vector<PlotSeries>& series, const std::string& path,
               const PlotOptions& options = {});

}  // namespace decaylab
