#pragma once

#include "fringestep/harness.hpp"

#include <string>
#include <vector>

namespace fringestep {

// Minimal handwritten chart: grouped bars of median |error| per sigma level,
// one bar series per (prefilter, estimator) pipeline, with q25..q75 whiskers.
// All-failed groups are drawn as an 'x' marker instead of a bar.  rows must
// all belong to the same case and be non-empty.
void write_mae_chart_svg(const std::string& path, const std::string& title,
                         const std::vector<MaeSummary>& rows);

}  // namespace fringestep
