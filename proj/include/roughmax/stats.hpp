#pragma once

#include <vector>

namespace roughmax {

// Least-squares slope of ys against xs.
double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys);

double median(std::vector<double> v);

// max(v) / min(v); infinity if min is 0.
double spread(const std::vector<double>& v);

}  // namespace roughmax
