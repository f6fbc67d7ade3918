#pragma once

#include <string>
#include <vector>

#include "kdr/matrix.hpp"

namespace kdr {

// A labeled feature table. `subject_ids` and `feature_names` are optional;
// an empty vector means "absent". When present, `subject_ids` has one entry
// per row and `feature_names` one entry per column.
struct Dataset {
  Matrix X{0, 0};
  std::vector<int> y;
  std::vector<std::string> subject_ids;
  std::vector<std::string> feature_names;

  std::size_t rows() const { return X.rows(); }
  std::size_t cols() const { return X.cols(); }
};

// Distinct labels in ascending order.
std::vector<int> distinct_labels(const std::vector<int>& y);

// Throws Error on structural problems: label length mismatch, subject_ids
// length mismatch, feature_names length mismatch, or non-finite values.
void validate_dataset(const Dataset& ds);

}  // namespace kdr
