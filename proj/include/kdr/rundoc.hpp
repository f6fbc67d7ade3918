#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

#include "kdr/dataset.hpp"
#include "kdr/pipeline.hpp"
#include "kdr/synthdata.hpp"

namespace kdr {

// A self-contained experiment record: the echoed config suffices to reproduce
// the metrics bit-identically via execute_rundoc. Serialized form:
//   {"format": "kdr-run", "version": 1, "command": ..., "config": {...},
//    "metrics": {...}, "artifacts": {...}, "tool_version": ...,
//    "wall_seconds": ...}
// Supported commands: "eval", "fit", "transform", "roc", "tune", "lopo",
// "ensemble", "simsep".
struct RunDocument {
  std::string command;
  nlohmann::json config;
  nlohmann::json metrics;     // filled by execute_rundoc
  nlohmann::json artifacts;   // path map, informational only
  std::string tool_version = kToolVersion;
  double wall_seconds = 0.0;  // filled by execute_rundoc
};

std::string rundoc_to_json_text(const RunDocument& doc);
RunDocument rundoc_from_json_text(const std::string& text);

// Re-computes metrics from the echoed config (workers only affects wall time,
// never the metrics). Throws InvalidArgument for unknown commands and
// ParseError for malformed configs.
RunDocument execute_rundoc(RunDocument doc, std::size_t workers = 1);

// Config fragments <-> domain structs (defaults applied for missing keys).
nlohmann::json synth_spec_to_json(const SynthSpec& spec);
SynthSpec synth_spec_from_json(const nlohmann::json& j);
nlohmann::json method_config_to_json(const MethodConfig& mc);
MethodConfig method_config_from_json(const nlohmann::json& j);
nlohmann::json svm_config_to_json(const SvmConfig& sc);
SvmConfig svm_config_from_json(const nlohmann::json& j);
nlohmann::json grid_spec_to_json(const GridSpec& grid);
GridSpec grid_spec_from_json(const nlohmann::json& j);

// Dataset source: {"synth": {...}} or {"csv": "path"}, optionally followed by
// {"split": {"fraction": f, "seed": s, "take": "train"|"test"}}.
Dataset dataset_from_config(const nlohmann::json& j);

// Full report as JSON: accuracy, confusion [[TP,FN],[FP,TN]], positive_label,
// plus tpr/tnr/auc/roc_points when defined.
nlohmann::json eval_report_to_json(const EvalReport& rep);

}  // namespace kdr
