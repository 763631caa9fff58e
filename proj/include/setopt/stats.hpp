#pragma once

#include <span>

namespace setopt {

/// (Min, Max, Mean, Median, Mode, SD) of a sample.
struct Summary {
  double min = 0;
  double max = 0;
  double mean = 0;
  double median = 0;
  double mode = 0;
  double sd = 0;  // population standard deviation
};

/// Median averages the two middle values for even counts. With integer_mode
/// the mode is taken over values rounded to the nearest integer; otherwise over
/// exact values. Ties go to the smallest candidate. Throws on empty input.
Summary summarize(std::span<const double> values, bool integer_mode);

}  // namespace setopt
