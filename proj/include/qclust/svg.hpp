#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qclust/dataset.hpp"

// Dependency-free SVG emission for the scatter and elbow figures. Output is
// deterministic (fixed-precision coordinates) so golden-file tests can diff it.

namespace qclust::svg {

/// 2-D scatter of the first two feature columns, one color per cluster,
/// an X marker per non-empty cluster centroid. Empty clusters get no marker
/// (a warning is printed).
std::string scatter_plot(const Dataset& data, const std::vector<int>& assignments,
                         const Dataset& centroids, const std::string& title,
                         const std::string& x_label, const std::string& y_label);

/// Simple polyline chart, used for the elbow curve.
std::string line_plot(const std::vector<std::pair<int, double>>& points,
                      const std::string& title, const std::string& x_label,
                      const std::string& y_label);

}  // namespace qclust::svg
