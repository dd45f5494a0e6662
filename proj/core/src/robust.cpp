#include "spca/robust.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "spca/error.hpp"

namespace spca {

namespace {

double median_in_place(std::vector<double>& v) {
  const std::size_t n = v.size();
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(v.begin(), mid, v.end());
  const double upper = *mid;
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), mid);
  return lower + (upper - lower) / 2.0;
}

}  // namespace

double median(std::span<const double> values) {
  if (values.empty()) throw EmptyInput("median of an empty list");
  std::vector<double> v(values.begin(), values.end());
  return median_in_place(v);
}

double mad(std::span<const double> values) {
  if (values.empty()) throw EmptyInput("MAD of an empty list");
  std::vector<double> v(values.begin(), values.end());
  const double center = median_in_place(v);
  for (auto& x : v) x = std::abs(x - center);
  return median_in_place(v);
}

}  // namespace spca
