#include "kdr/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "kdr/errors.hpp"

namespace kdr {

std::vector<int> distinct_labels(const std::vector<int>& y) {
  std::vector<int> labels(y);
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  return labels;
}

void validate_dataset(const Dataset& ds) {
  if (ds.y.size() != ds.X.rows())
    raise(ErrorCode::LengthMismatch, "label count " + std::to_string(ds.y.size()) +
                                         " does not match row count " +
                                         std::to_string(ds.X.rows()));
  if (!ds.subject_ids.empty() && ds.subject_ids.size() != ds.X.rows())
    raise(ErrorCode::LengthMismatch,
          "subject id count " + std::to_string(ds.subject_ids.size()) +
              " does not match row count " + std::to_string(ds.X.rows()));
  if (!ds.feature_names.empty() && ds.feature_names.size() != ds.X.cols())
    raise(ErrorCode::LengthMismatch,
          "feature name count " + std::to_string(ds.feature_names.size()) +
              " does not match column count " + std::to_string(ds.X.cols()));
  for (double v : ds.X.flat())
    if (!std::isfinite(v)) raise(ErrorCode::ParseError, "non-finite feature value");
}

}  // namespace kdr
