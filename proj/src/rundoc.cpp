#include "kdr/rundoc.hpp"

#include <chrono>
#include <cmath>

#include "kdr/errors.hpp"
#include "kdr/io.hpp"

namespace kdr {

namespace {

using nlohmann::json;

[[noreturn]] void bad_config(const std::string& what) {
  raise(ErrorCode::ParseError, "run document config: " + what);
}

json report_metrics(const RunResult& r) {
  json m;
  m["accuracy"] = r.accuracy;
  if (r.report) {
    const EvalReport& rep = *r.report;
    m["confusion"] = {{rep.confusion[0][0], rep.confusion[0][1]},
                      {rep.confusion[1][0], rep.confusion[1][1]}};
    if (rep.tpr) m["tpr"] = *rep.tpr;
    if (rep.tnr) m["tnr"] = *rep.tnr;
    if (rep.auc) m["auc"] = *rep.auc;
    m["positive_label"] = rep.positive_label;
  }
  m["ridge_used"] = r.ridge_used;
  m["warnings"] = r.warnings;
  return m;
}

json grid_rows_to_json(const std::vector<GridRow>& rows) {
  json arr = json::array();
  for (const GridRow& r : rows) {
    json row;
    row["delta"] = r.delta;
    row["eta"] = r.eta;
    row["cost"] = r.cost;
    row["d"] = r.d;
    if (r.failed) {
      row["failed"] = true;
      row["error"] = r.error;
    } else {
      row["accuracy"] = r.accuracy;
    }
    arr.push_back(std::move(row));
  }
  return arr;
}

json exec_eval(const json& cfg, std::size_t) {
  const Dataset train = dataset_from_config(cfg.at("train"));
  const Dataset test = dataset_from_config(cfg.at("test"));
  ExperimentConfig ec;
  ec.dr = method_config_from_json(cfg.value("dr", json::object()));
  ec.svm = svm_config_from_json(cfg.value("svm", json::object()));
  return report_metrics(run_single(train, test, ec));
}

json exec_tune(const json& cfg, std::size_t workers) {
  const Dataset train = dataset_from_config(cfg.at("train"));
  const Dataset test = dataset_from_config(cfg.at("test"));
  ExperimentConfig ec;
  ec.dr = method_config_from_json(cfg.value("dr", json::object()));
  ec.svm = svm_config_from_json(cfg.value("svm", json::object()));
  const GridSpec grid = grid_spec_from_json(cfg.value("grid", json::object()));
  const std::vector<GridRow> rows = grid_search(train, test, ec, grid, workers);
  json m;
  m["rows"] = grid_rows_to_json(rows);
  for (const GridRow& r : rows)
    if (!r.failed) {
      m["best"] = {{"delta", r.delta}, {"eta", r.eta},   {"cost", r.cost},
                   {"d", r.d},         {"accuracy", r.accuracy}};
      break;
    }
  return m;
}

json exec_lopo(const json& cfg, std::size_t workers) {
  const Dataset data = dataset_from_config(cfg.at("data"));
  ExperimentConfig ec;
  ec.dr = method_config_from_json(cfg.value("dr", json::object()));
  ec.svm = svm_config_from_json(cfg.value("svm", json::object()));
  const LopoResult r = lopo_cv(data, ec, workers);
  json m;
  m["subjects"] = r.subjects;
  m["fold_accuracies"] = r.fold_accuracies;
  m["mean_accuracy"] = r.mean_accuracy;
  return m;
}

json exec_ensemble(const json& cfg, std::size_t workers) {
  const Dataset m1 = dataset_from_config(cfg.at("m1"));
  const Dataset m2 = dataset_from_config(cfg.at("m2"));
  ExperimentConfig ec;
  ec.dr = method_config_from_json(cfg.value("dr", json::object()));
  ec.svm = svm_config_from_json(cfg.value("svm", json::object()));
  const std::size_t n_samples = cfg.value("n_samples", std::size_t{5});
  const std::size_t sample_size = cfg.value("sample_size", std::size_t{1000});
  const std::uint64_t base_seed = cfg.value("base_seed", std::uint64_t{0});
  const EnsembleResult r =
      bootstrap_ensemble(m1, m2, ec, n_samples, sample_size, base_seed, workers);
  json m;
  m["worker_accuracies"] = r.worker_accuracies;
  m["merged_accuracy"] = r.merged_accuracy;
  if (r.merged_report) {
    const EvalReport& rep = *r.merged_report;
    if (rep.tpr) m["tpr"] = *rep.tpr;
    if (rep.tnr) m["tnr"] = *rep.tnr;
  }
  return m;
}

json exec_fit(const json& cfg, std::size_t) {
  const Dataset train = dataset_from_config(cfg.at("train"));
  validate_dataset(train);
  const MethodConfig mc = method_config_from_json(cfg.value("dr", json::object()));
  const FitResult fit = fit_from_config(train, mc);
  json m;
  m["method"] = method_name(fit.projector.method);
  m["d"] = fit.projector.d;
  m["requested_d"] = fit.info.requested_d;
  m["ridge_used"] = fit.info.ridge_used;
  m["eigenvalues"] = fit.projector.eigenvalues;
  m["warnings"] = fit.info.warnings;
  return m;
}

json exec_transform(const json& cfg, std::size_t) {
  const Projector p = load_projector(cfg.at("model").get<std::string>());
  const Dataset in = dataset_from_config(cfg.at("in"));
  const Matrix proj = transform(p, in.X);
  json m;
  m["rows"] = proj.rows();
  m["cols"] = proj.cols();
  std::vector<double> col_means(proj.cols(), 0.0);
  double sq = 0.0;
  for (std::size_t j = 0; j < proj.cols(); ++j) {
    for (std::size_t i = 0; i < proj.rows(); ++i) {
      col_means[j] += proj(i, j);
      sq += proj(i, j) * proj(i, j);
    }
    if (proj.rows() > 0) col_means[j] /= double(proj.rows());
  }
  m["col_means"] = col_means;
  m["fro_norm"] = std::sqrt(sq);
  return m;
}

// The input is a scores dataset: feature f0 holds the decision value, label
// holds the truth. Predictions for the confusion matrix use the 0 threshold
// (the SVM decision rule); the ROC sweep itself is threshold-free.
json exec_roc(const json& cfg, std::size_t) {
  const Dataset ds = dataset_from_config(cfg.at("in"));
  validate_dataset(ds);
  if (ds.cols() < 1) bad_config("roc needs a dataset with a score column");
  const std::vector<int> labels = distinct_labels(ds.y);
  if (labels.size() < 2)
    raise(ErrorCode::SingleClass, "roc needs both classes in the truth labels");
  std::vector<double> scores(ds.rows());
  std::vector<int> pred(ds.rows());
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    scores[i] = ds.X(i, 0);
    pred[i] = scores[i] > 0.0 ? labels.back() : labels.front();
  }
  json m = eval_report_to_json(evaluate(ds.y, pred, &scores));
  m["n"] = ds.rows();
  return m;
}

// Several methods evaluated on one split of one dataset, each through its own
// parameter grid; the per-method entry records the best row.
json exec_simsep(const json& cfg, std::size_t workers) {
  const Dataset data = dataset_from_config(cfg.at("data"));
  const double fraction = cfg.value("fraction", 0.5);
  const std::uint64_t split_seed = cfg.value("split_seed", std::uint64_t{0});
  const auto [train, test] = stratified_split(data, fraction, split_seed);
  if (!cfg.contains("methods") || !cfg.at("methods").is_array())
    bad_config("simsep needs a methods array");
  json m;
  for (const json& entry : cfg.at("methods")) {
    const std::string name = entry.at("name").get<std::string>();
    ExperimentConfig ec;
    ec.dr = method_config_from_json(entry.value("dr", json::object()));
    ec.svm = svm_config_from_json(entry.value("svm", json::object()));
    const GridSpec grid = grid_spec_from_json(entry.value("grid", json::object()));
    const std::vector<GridRow> rows = grid_search(train, test, ec, grid, workers);
    json best;
    bool found = false;
    for (const GridRow& r : rows)
      if (!r.failed) {
        best = {{"delta", r.delta}, {"eta", r.eta},   {"cost", r.cost},
                {"d", r.d},         {"accuracy", r.accuracy}};
        found = true;
        break;
      }
    if (!found) best = {{"error", rows.empty() ? "EmptyGrid" : rows.front().error}};
    m[name] = std::move(best);
  }
  return m;
}

}  // namespace

nlohmann::json synth_spec_to_json(const SynthSpec& spec) {
  json j;
  j["dataset"] = synth_name(spec.dataset);
  j["n_per_class"] = spec.n_per_class;
  j["noise_sd"] = spec.noise_sd;
  j["seed"] = spec.seed;
  return j;
}

SynthSpec synth_spec_from_json(const nlohmann::json& j) {
  try {
    SynthSpec spec;
    spec.dataset = synth_from_name(j.at("dataset").get<std::string>());
    spec.n_per_class = j.at("n_per_class").get<std::size_t>();
    spec.noise_sd = j.value("noise_sd", 0.1);
    spec.seed = j.value("seed", std::uint64_t{0});
    return spec;
  } catch (const json::exception& e) {
    bad_config(std::string("synth spec: ") + e.what());
  }
}

nlohmann::json method_config_to_json(const MethodConfig& mc) {
  json j;
  j["method"] = method_name(mc.method);
  j["d"] = mc.d;
  j["family"] = mc.family == KernelFamily::rbf ? "rbf" : "linear";
  j["delta"] = mc.delta;
  j["link"] = mc.link == LinkKind::indicator ? "indicator" : "modified";
  j["eta"] = mc.eta;
  j["center"] = mc.center;
  return j;
}

MethodConfig method_config_from_json(const nlohmann::json& j) {
  try {
    MethodConfig mc;
    if (j.contains("method")) mc.method = method_from_name(j.at("method").get<std::string>());
    mc.d = j.value("d", mc.d);
    if (j.contains("family")) {
      const std::string fam = j.at("family").get<std::string>();
      if (fam == "rbf")
        mc.family = KernelFamily::rbf;
      else if (fam == "linear")
        mc.family = KernelFamily::linear;
      else
        bad_config("unknown kernel family '" + fam + "'");
    }
    mc.delta = j.value("delta", mc.delta);
    if (j.contains("link")) {
      const std::string link = j.at("link").get<std::string>();
      if (link == "indicator")
        mc.link = LinkKind::indicator;
      else if (link == "modified")
        mc.link = LinkKind::modified;
      else
        bad_config("unknown link kind '" + link + "'");
    }
    mc.eta = j.value("eta", mc.eta);
    mc.center = j.value("center", mc.center);
    return mc;
  } catch (const json::exception& e) {
    bad_config(std::string("method config: ") + e.what());
  }
}

nlohmann::json svm_config_to_json(const SvmConfig& sc) {
  json j;
  j["cost"] = sc.cost;
  j["tol"] = sc.tol;
  j["max_updates"] = sc.max_updates;
  j["seed"] = sc.seed;
  j["platt"] = sc.platt;
  return j;
}

SvmConfig svm_config_from_json(const nlohmann::json& j) {
  try {
    SvmConfig sc;
    sc.cost = j.value("cost", sc.cost);
    sc.tol = j.value("tol", sc.tol);
    sc.max_updates = j.value("max_updates", sc.max_updates);
    sc.seed = j.value("seed", sc.seed);
    sc.platt = j.value("platt", sc.platt);
    return sc;
  } catch (const json::exception& e) {
    bad_config(std::string("svm config: ") + e.what());
  }
}

nlohmann::json grid_spec_to_json(const GridSpec& grid) {
  json j;
  if (!grid.deltas.empty()) j["delta"] = grid.deltas;
  if (!grid.etas.empty()) j["eta"] = grid.etas;
  if (!grid.costs.empty()) j["cost"] = grid.costs;
  if (!grid.dims.empty()) j["d"] = grid.dims;
  return j;
}

GridSpec grid_spec_from_json(const nlohmann::json& j) {
  try {
    GridSpec grid;
    if (j.contains("delta")) grid.deltas = j.at("delta").get<std::vector<double>>();
    if (j.contains("eta")) grid.etas = j.at("eta").get<std::vector<double>>();
    if (j.contains("cost")) grid.costs = j.at("cost").get<std::vector<double>>();
    if (j.contains("d")) grid.dims = j.at("d").get<std::vector<std::size_t>>();
    return grid;
  } catch (const json::exception& e) {
    bad_config(std::string("grid spec: ") + e.what());
  }
}

Dataset dataset_from_config(const nlohmann::json& j) {
  if (!j.is_object()) bad_config("dataset source must be an object");
  Dataset ds;
  if (j.contains("synth"))
    ds = generate(synth_spec_from_json(j.at("synth")));
  else if (j.contains("csv"))
    ds = read_dataset_csv(j.at("csv").get<std::string>());
  else
    bad_config("dataset source needs a 'synth' or 'csv' key");
  if (j.contains("split")) {
    const json& sp = j.at("split");
    const double fraction = sp.value("fraction", 0.5);
    std::uint64_t seed = 0;
    try {
      seed = sp.at("seed").get<std::uint64_t>();
    } catch (const json::exception&) {
      bad_config("split needs a seed");
    }
    const std::string take = sp.value("take", "train");
    auto [train, test] = stratified_split(ds, fraction, seed);
    if (take == "train")
      ds = std::move(train);
    else if (take == "test")
      ds = std::move(test);
    else
      bad_config("split take must be 'train' or 'test'");
  }
  return ds;
}

nlohmann::json eval_report_to_json(const EvalReport& rep) {
  json m;
  m["accuracy"] = rep.accuracy;
  m["confusion"] = {{rep.confusion[0][0], rep.confusion[0][1]},
                    {rep.confusion[1][0], rep.confusion[1][1]}};
  m["positive_label"] = rep.positive_label;
  if (rep.tpr) m["tpr"] = *rep.tpr;
  if (rep.tnr) m["tnr"] = *rep.tnr;
  if (rep.auc) m["auc"] = *rep.auc;
  if (!rep.roc_points.empty()) {
    json pts = json::array();
    for (const auto& [fpr, tpr] : rep.roc_points) pts.push_back({fpr, tpr});
    m["roc_points"] = std::move(pts);
  }
  return m;
}

std::string rundoc_to_json_text(const RunDocument& doc) {
  json j;
  j["format"] = "kdr-run";
  j["version"] = 1;
  j["command"] = doc.command;
  j["config"] = doc.config;
  j["metrics"] = doc.metrics;
  j["artifacts"] = doc.artifacts;
  j["tool_version"] = doc.tool_version;
  j["wall_seconds"] = doc.wall_seconds;
  return j.dump(2) + "\n";
}

RunDocument rundoc_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    raise(ErrorCode::ParseError, std::string("invalid run document: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != "kdr-run")
    raise(ErrorCode::ParseError, "not a kdr-run document");
  if (j.value("version", -1) != 1)
    raise(ErrorCode::ParseError, "unsupported run document version");
  RunDocument doc;
  try {
    doc.command = j.at("command").get<std::string>();
    doc.config = j.value("config", json::object());
    doc.metrics = j.value("metrics", json::object());
    doc.artifacts = j.value("artifacts", json::object());
    doc.tool_version = j.value("tool_version", "");
    doc.wall_seconds = j.value("wall_seconds", 0.0);
  } catch (const json::exception& e) {
    raise(ErrorCode::ParseError, std::string("malformed run document: ") + e.what());
  }
  return doc;
}

RunDocument execute_rundoc(RunDocument doc, std::size_t workers) {
  const auto t0 = std::chrono::steady_clock::now();
  json metrics;
  try {
    if (doc.command == "eval")
      metrics = exec_eval(doc.config, workers);
    else if (doc.command == "fit")
      metrics = exec_fit(doc.config, workers);
    else if (doc.command == "transform")
      metrics = exec_transform(doc.config, workers);
    else if (doc.command == "roc")
      metrics = exec_roc(doc.config, workers);
    else if (doc.command == "tune")
      metrics = exec_tune(doc.config, workers);
    else if (doc.command == "lopo")
      metrics = exec_lopo(doc.config, workers);
    else if (doc.command == "ensemble")
      metrics = exec_ensemble(doc.config, workers);
    else if (doc.command == "simsep")
      metrics = exec_simsep(doc.config, workers);
    else
      raise(ErrorCode::InvalidArgument, "unknown run document command '" + doc.command + "'");
  } catch (const json::exception& e) {
    bad_config(e.what());
  }
  doc.metrics = std::move(metrics);
  doc.tool_version = kToolVersion;
  doc.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return doc;
}

}  // namespace kdr
