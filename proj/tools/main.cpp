// Command-line surface. Everything goes through the C interface in
// include/kdr/kdr.h (this binary links the shared library, not the core), so
// the CLI doubles as a workout for the public ABI.
//
// Every experiment command writes a kdr-run JSON document whose echoed config
// reproduces the metrics bit-identically when re-executed (see `rerun`). The
// wall_seconds field is zeroed in written documents so identical inputs give
// byte-identical outputs; measured times go to stdout instead.
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "kdr/kdr.h"

namespace {

using nlohmann::json;

[[noreturn]] void fail(kdr_status st) {
  const std::string name = kdr_status_name(st);
  const std::string message = kdr_last_error();
  if (message.rfind(name + ":", 0) == 0)  // library messages carry the name
    std::cerr << message << "\n";
  else
    std::cerr << name << ": " << message << "\n";
  std::exit(1);
}

[[noreturn]] void fail_msg(const std::string& name, const std::string& message) {
  std::cerr << name << ": " << message << "\n";
  std::exit(1);
}

void check(kdr_status st) {
  if (st != KDR_OK) fail(st);
}

std::string take(char* s) {
  std::string out = s == nullptr ? std::string() : std::string(s);
  kdr_string_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_msg("IoError", "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail_msg("IoError", "cannot open '" + path + "' for writing");
  out << text;
  if (!out) fail_msg("IoError", "failed writing '" + path + "'");
}

// 17 significant digits: parses back to the same double.
std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json parse_json_file(const std::string& path, const char* what) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    fail_msg("ParseError", std::string(what) + " '" + path + "': " + e.what());
  }
}

// Builds and executes a run document, writes it to run_path with wall_seconds
// zeroed for byte-stable output, and returns the executed document.
json run_and_write(const std::string& command, const json& config,
                   const json& artifacts, std::size_t workers,
                   const std::string& run_path) {
  json doc;
  doc["format"] = "kdr-run";
  doc["version"] = 1;
  doc["command"] = command;
  doc["config"] = config;
  doc["artifacts"] = artifacts;
  char* out = nullptr;
  check(kdr_run_execute(doc.dump().c_str(), workers, &out));
  json done = json::parse(take(out));
  done["artifacts"] = artifacts;  // the library does not track file paths
  if (!run_path.empty()) {
    json stable = done;
    stable["wall_seconds"] = 0.0;
    write_file(run_path, stable.dump(2) + "\n");
  }
  return done;
}

// Flags shared by every command that fits a reduction method.
struct MethodFlags {
  std::string method = "pca";
  std::size_t d = 2;
  std::string family = "rbf";
  double delta = 1.0;
  std::string link = "indicator";
  double eta = 0.0;
  bool no_center = false;
  bool paper_sign = false;

  json to_json() const {
    json j;
    j["method"] = method;
    j["d"] = d;
    j["family"] = family;
    // canonical convention: k = exp(-delta * ||x-y||^2); --paper-sign says the
    // given value is the exponent coefficient of exp(+delta * r^2) instead
    j["delta"] = paper_sign ? -delta : delta;
    j["link"] = link;
    j["eta"] = eta;
    j["center"] = !no_center;
    return j;
  }
};

void add_method_flags(CLI::App* cmd, MethodFlags& mf) {
  cmd->add_option("--method", mf.method, "Reduction method: pca|lda|kpca|skpca|klda")
      ->capture_default_str();
  cmd->add_option("--d", mf.d, "Retained dimension")->capture_default_str();
  cmd->add_option("--family", mf.family, "Kernel family: rbf|linear")
      ->capture_default_str();
  cmd->add_option("--delta", mf.delta,
                  "Kernel scale in k = exp(-delta*||x-y||^2)")
      ->capture_default_str();
  cmd->add_option("--link", mf.link, "Label link: indicator|modified")
      ->capture_default_str();
  cmd->add_option("--eta", mf.eta, "Modified-link exponent scale")
      ->capture_default_str();
  cmd->add_flag("--no-center", mf.no_center, "Skip Gram centering (kpca only)");
  cmd->add_flag("--paper-sign", mf.paper_sign,
                "Deltas are exponent coefficients of exp(+delta*r^2); negate "
                "them into the canonical exp(-delta*r^2) form");
}

// Defaults mirror the library's SvmConfig.
struct SvmFlags {
  double cost = 1.0;
  double tol = 1e-3;
  std::size_t max_updates = 10'000'000;
  std::uint64_t seed = 0x73766d2d6b6472ull;
  bool platt = false;

  json to_json() const {
    json j;
    j["cost"] = cost;
    j["tol"] = tol;
    j["max_updates"] = max_updates;
    j["seed"] = seed;
    j["platt"] = platt;
    return j;
  }
};

void add_svm_flags(CLI::App* cmd, SvmFlags& sf) {
  cmd->add_option("--cost", sf.cost, "SVM cost parameter C")->capture_default_str();
  cmd->add_option("--svm-tol", sf.tol, "Dual KKT violation tolerance")
      ->capture_default_str();
  cmd->add_option("--max-updates", sf.max_updates,
                  "Coordinate-update budget before NonConvergence")
      ->capture_default_str();
  cmd->add_option("--svm-seed", sf.seed, "Shuffle seed for the dual solver")
      ->capture_default_str();
  cmd->add_flag("--platt", sf.platt, "Fit a Platt sigmoid on training decisions");
}

json csv_source(const std::string& path) { return json{{"csv", path}}; }

// ---- commands ----------------------------------------------------------

struct GenArgs {
  std::string dataset = "wine_chocolate";
  std::size_t n_per_class = 300;
  double noise_sd = 0.1;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_gen(const GenArgs& a) {
  kdr_dataset* ds = nullptr;
  check(kdr_dataset_generate(a.dataset.c_str(), a.n_per_class, a.noise_sd,
                             a.seed, &ds));
  check(kdr_dataset_write_csv(ds, a.out.c_str()));
  std::cout << "wrote " << a.out << ": " << kdr_dataset_rows(ds) << " rows, "
            << kdr_dataset_cols(ds) << " features, "
            << kdr_dataset_num_classes(ds) << " classes\n";
  kdr_dataset_free(ds);
  return 0;
}

struct FitArgs {
  std::string in;
  std::string model;
  std::string run;
  MethodFlags mf;
};

int cmd_fit(const FitArgs& a) {
  kdr_dataset* train = nullptr;
  check(kdr_dataset_read_csv(a.in.c_str(), &train));
  kdr_projector* proj = nullptr;
  check(kdr_fit(train, a.mf.to_json().dump().c_str(), &proj));
  check(kdr_projector_save(proj, a.model.c_str()));

  char* info_text = nullptr;
  check(kdr_projector_info(proj, &info_text));
  const json info = json::parse(take(info_text));

  // kdr_projector_info reports exactly what executing this document computes,
  // and the fit is deterministic, so the document can be assembled without a
  // second fit.
  const std::string run_path = a.run.empty() ? a.model + ".run.json" : a.run;
  json doc;
  doc["format"] = "kdr-run";
  doc["version"] = 1;
  doc["command"] = "fit";
  doc["config"] = {{"train", csv_source(a.in)}, {"dr", a.mf.to_json()}};
  doc["metrics"] = info;
  doc["artifacts"] = {{"model", a.model}};
  doc["tool_version"] = kdr_version();
  doc["wall_seconds"] = 0.0;
  write_file(run_path, doc.dump(2) + "\n");

  std::cout << info.at("method").get<std::string>() << " fit: d=" << info.at("d")
            << " (requested " << info.at("requested_d")
            << "), ridge=" << g17(info.at("ridge_used").get<double>())
            << "; model -> " << a.model << "; run -> " << run_path << "\n";
  kdr_projector_free(proj);
  kdr_dataset_free(train);
  return 0;
}

struct TransformArgs {
  std::string model;
  std::string in;
  std::string out;
  std::string run;
};

int cmd_transform(const TransformArgs& a) {
  kdr_projector* proj = nullptr;
  check(kdr_projector_load(a.model.c_str(), &proj));
  kdr_dataset* in = nullptr;
  check(kdr_dataset_read_csv(a.in.c_str(), &in));
  kdr_dataset* projected = nullptr;
  check(kdr_transform(proj, in, &projected));
  check(kdr_dataset_write_csv(projected, a.out.c_str()));

  const std::string run_path = a.run.empty() ? a.out + ".run.json" : a.run;
  const json config = {{"model", a.model}, {"in", csv_source(a.in)}};
  run_and_write("transform", config, {{"projections", a.out}}, 1, run_path);

  std::cout << "projected " << kdr_dataset_rows(projected) << " rows to "
            << kdr_dataset_cols(projected) << " columns -> " << a.out << "\n";
  kdr_dataset_free(projected);
  kdr_dataset_free(in);
  kdr_projector_free(proj);
  return 0;
}

struct ClassifyArgs {
  std::string train;
  std::string test;
  std::string run;
  std::string scores;
  std::string save_projector;
  std::string save_svm;
  std::size_t workers = 1;
  MethodFlags mf;
  SvmFlags sf;
};

// Writes the scores dataset (f0 = decision value, label = truth) consumed by
// the roc command.
void write_scores_csv(const std::string& path, const std::vector<double>& scores,
                      const std::vector<int32_t>& truth) {
  std::string text = "f0,label\n";
  for (std::size_t i = 0; i < scores.size(); ++i)
    text += g17(scores[i]) + "," + std::to_string(truth[i]) + "\n";
  write_file(path, text);
}

int cmd_classify(const ClassifyArgs& a) {
  json config;
  config["train"] = csv_source(a.train);
  config["test"] = csv_source(a.test);
  config["dr"] = a.mf.to_json();
  config["svm"] = a.sf.to_json();

  json artifacts = json::object();
  if (!a.scores.empty()) artifacts["scores"] = a.scores;
  if (!a.save_projector.empty()) artifacts["projector"] = a.save_projector;
  if (!a.save_svm.empty()) artifacts["svm"] = a.save_svm;

  const json done = run_and_write("eval", config, artifacts, a.workers, a.run);
  const json& m = done.at("metrics");
  std::cout << "accuracy=" << g17(m.at("accuracy").get<double>());
  if (m.contains("auc")) std::cout << " auc=" << g17(m.at("auc").get<double>());
  std::cout << " [" << g17(done.at("wall_seconds").get<double>())
            << "s] -> " << a.run << "\n";

  // Per-row artifacts need the fitted models; recompute them through the same
  // C calls the document execution used internally.
  if (!artifacts.empty()) {
    kdr_dataset* train = nullptr;
    kdr_dataset* test = nullptr;
    check(kdr_dataset_read_csv(a.train.c_str(), &train));
    check(kdr_dataset_read_csv(a.test.c_str(), &test));
    kdr_projector* proj = nullptr;
    check(kdr_fit(train, a.mf.to_json().dump().c_str(), &proj));
    if (!a.save_projector.empty())
      check(kdr_projector_save(proj, a.save_projector.c_str()));

    if (!a.scores.empty() || !a.save_svm.empty()) {
      if (kdr_dataset_num_classes(train) != 2)
        fail_msg("InvalidArgument",
                 "--scores/--save-svm need binary labels (one-vs-rest models "
                 "are recorded only in the run document)");
      kdr_dataset* ptrain = nullptr;
      kdr_dataset* ptest = nullptr;
      check(kdr_transform(proj, train, &ptrain));
      check(kdr_transform(proj, test, &ptest));
      kdr_svm* svm = nullptr;
      check(kdr_svm_fit(ptrain, a.sf.to_json().dump().c_str(), &svm));
      if (!a.save_svm.empty()) check(kdr_svm_save(svm, a.save_svm.c_str()));
      if (!a.scores.empty()) {
        const std::size_t n = kdr_dataset_rows(ptest);
        std::vector<double> scores(n);
        std::vector<int32_t> truth(n);
        check(kdr_svm_decision(svm, ptest, scores.data()));
        check(kdr_dataset_labels(ptest, truth.data()));
        write_scores_csv(a.scores, scores, truth);
        std::cout << "scores -> " << a.scores << "\n";
      }
      kdr_svm_free(svm);
      kdr_dataset_free(ptest);
      kdr_dataset_free(ptrain);
    }
    kdr_projector_free(proj);
    kdr_dataset_free(test);
    kdr_dataset_free(train);
  }
  return 0;
}

struct TuneArgs {
  std::string train;
  std::string test;
  std::string grid;
  std::string out;
  std::string run;
  std::size_t workers = 1;
  MethodFlags mf;
  SvmFlags sf;
};

int cmd_tune(const TuneArgs& a) {
  json grid = parse_json_file(a.grid, "grid file");
  if (a.mf.paper_sign && grid.contains("delta"))
    for (json& v : grid.at("delta")) v = -v.get<double>();

  json config;
  config["train"] = csv_source(a.train);
  config["test"] = csv_source(a.test);
  config["dr"] = a.mf.to_json();
  config["svm"] = a.sf.to_json();
  config["grid"] = grid;

  const std::string run_path = a.run.empty() ? a.out + ".run.json" : a.run;
  const json done =
      run_and_write("tune", config, {{"table", a.out}}, a.workers, run_path);

  // Ranked table, best first (failed rows sort last and carry the error name).
  const json& rows = done.at("metrics").at("rows");
  std::string table = "rank,delta,eta,cost,d,accuracy,status\n";
  std::size_t rank = 1;
  for (const json& r : rows) {
    table += std::to_string(rank++) + "," + g17(r.at("delta").get<double>()) +
             "," + g17(r.at("eta").get<double>()) + "," +
             g17(r.at("cost").get<double>()) + "," +
             std::to_string(r.at("d").get<std::size_t>()) + ",";
    if (r.value("failed", false))
      table += "," + r.at("error").get<std::string>();
    else
      table += g17(r.at("accuracy").get<double>()) + ",ok";
    table += "\n";
  }
  write_file(a.out, table);

  if (done.at("metrics").contains("best")) {
    const json& b = done.at("metrics").at("best");
    std::cout << "best: delta=" << g17(b.at("delta").get<double>())
              << " eta=" << g17(b.at("eta").get<double>())
              << " cost=" << g17(b.at("cost").get<double>()) << " d=" << b.at("d")
              << " accuracy=" << g17(b.at("accuracy").get<double>());
  } else {
    std::cout << "no configuration succeeded";
  }
  std::cout << " (" << rows.size() << " rows) -> " << a.out << "\n";
  return 0;
}

struct LopoArgs {
  std::string in;
  std::string run;
  std::string table;
  std::size_t workers = 1;
  MethodFlags mf;
  SvmFlags sf;
};

int cmd_lopo(const LopoArgs& a) {
  json config;
  config["data"] = csv_source(a.in);
  config["dr"] = a.mf.to_json();
  config["svm"] = a.sf.to_json();

  json artifacts = json::object();
  if (!a.table.empty()) artifacts["table"] = a.table;
  const json done = run_and_write("lopo", config, artifacts, a.workers, a.run);
  const json& m = done.at("metrics");

  if (!a.table.empty()) {
    std::string table = "subject,accuracy\n";
    const auto& subjects = m.at("subjects");
    const auto& accs = m.at("fold_accuracies");
    for (std::size_t i = 0; i < subjects.size(); ++i)
      table += subjects[i].get<std::string>() + "," +
               g17(accs[i].get<double>()) + "\n";
    write_file(a.table, table);
  }
  std::cout << "mean accuracy=" << g17(m.at("mean_accuracy").get<double>())
            << " over " << m.at("subjects").size() << " subjects -> " << a.run
            << "\n";
  return 0;
}

struct EnsembleArgs {
  std::string train;
  std::string test;
  std::size_t samples = 5;
  std::size_t sample_size = 1000;
  std::uint64_t base_seed = 0;
  std::string run;
  std::size_t workers = 1;
  MethodFlags mf;
  SvmFlags sf;
};

int cmd_ensemble(const EnsembleArgs& a) {
  json config;
  config["m1"] = csv_source(a.train);
  config["m2"] = csv_source(a.test);
  config["dr"] = a.mf.to_json();
  config["svm"] = a.sf.to_json();
  config["n_samples"] = a.samples;
  config["sample_size"] = a.sample_size;
  config["base_seed"] = a.base_seed;

  const json done = run_and_write("ensemble", config, json::object(), a.workers,
                                  a.run);
  const json& m = done.at("metrics");
  std::cout << "merged accuracy=" << g17(m.at("merged_accuracy").get<double>())
            << " (workers:";
  for (const json& w : m.at("worker_accuracies"))
    std::cout << " " << g17(w.get<double>());
  std::cout << ") [" << g17(done.at("wall_seconds").get<double>()) << "s] -> "
            << a.run << "\n";
  return 0;
}

struct RocArgs {
  std::string scores;
  std::string out;
  std::string run;
};

int cmd_roc(const RocArgs& a) {
  const std::string run_path = a.run.empty() ? a.out + ".run.json" : a.run;
  const json config = {{"in", csv_source(a.scores)}};
  const json done =
      run_and_write("roc", config, {{"roc", a.out}}, 1, run_path);
  const json& m = done.at("metrics");

  std::string text = "# auc=" + g17(m.at("auc").get<double>()) + "\n";
  text += "fpr,tpr\n";
  for (const json& pt : m.at("roc_points"))
    text += g17(pt.at(0).get<double>()) + "," + g17(pt.at(1).get<double>()) + "\n";
  write_file(a.out, text);

  std::cout << "auc=" << g17(m.at("auc").get<double>()) << ", "
            << m.at("roc_points").size() << " points -> " << a.out << "\n";
  return 0;
}

struct RerunArgs {
  std::string in;
  std::string out;
  std::size_t workers = 1;
};

int cmd_rerun(const RerunArgs& a) {
  const std::string text = read_file(a.in);
  char* out = nullptr;
  check(kdr_run_execute(text.c_str(), a.workers, &out));
  json done = json::parse(take(out));

  json previous;
  try {
    previous = json::parse(text).value("metrics", json::object());
  } catch (const json::exception&) {
    previous = json::object();
  }
  const bool unchanged = previous.dump() == done.at("metrics").dump();

  if (!a.out.empty()) {
    json stable = done;
    stable["wall_seconds"] = 0.0;
    write_file(a.out, stable.dump(2) + "\n");
  }
  std::cout << done.at("command").get<std::string>() << " rerun: metrics "
            << (unchanged ? "unchanged" : "DIFFER") << " ["
            << g17(done.at("wall_seconds").get<double>()) << "s]";
  if (!a.out.empty()) std::cout << " -> " << a.out;
  std::cout << "\n";
  return unchanged || previous.empty() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kernel dimension-reduction and classification toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("kdr ") + kdr_version());

  GenArgs gen;
  CLI::App* c_gen = app.add_subcommand("gen", "Generate a synthetic dataset CSV");
  c_gen->add_option("--dataset", gen.dataset,
                    "wine_chocolate|apple_tart|swiss_roll")
      ->capture_default_str();
  c_gen->add_option("--n-per-class", gen.n_per_class, "Rows per class")
      ->capture_default_str();
  c_gen->add_option("--noise-sd", gen.noise_sd, "Noise standard deviation")
      ->capture_default_str();
  c_gen->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
  c_gen->add_option("--out", gen.out, "Output CSV path")->required();

  FitArgs fit;
  CLI::App* c_fit = app.add_subcommand("fit", "Fit a reduction model on a CSV");
  c_fit->add_option("--in", fit.in, "Training CSV")->required();
  c_fit->add_option("--model", fit.model, "Model output path")->required();
  c_fit->add_option("--run", fit.run, "Run document path (default <model>.run.json)");
  add_method_flags(c_fit, fit.mf);

  TransformArgs tr;
  CLI::App* c_tr = app.add_subcommand("transform", "Project a CSV with a saved model");
  c_tr->add_option("--model", tr.model, "Saved model path")->required();
  c_tr->add_option("--in", tr.in, "Input CSV")->required();
  c_tr->add_option("--out", tr.out, "Projection CSV path")->required();
  c_tr->add_option("--run", tr.run, "Run document path (default <out>.run.json)");

  ClassifyArgs cl;
  CLI::App* c_cl = app.add_subcommand(
      "classify", "Reduce, train a linear SVM, and evaluate on a test CSV");
  c_cl->add_option("--train", cl.train, "Training CSV")->required();
  c_cl->add_option("--test", cl.test, "Test CSV")->required();
  c_cl->add_option("--run", cl.run, "Run document path")->required();
  c_cl->add_option("--scores", cl.scores,
                   "Write test decision scores (f0=score,label=truth)");
  c_cl->add_option("--save-projector", cl.save_projector, "Save the fitted projector");
  c_cl->add_option("--save-svm", cl.save_svm, "Save the fitted SVM (binary only)");
  c_cl->add_option("--workers", cl.workers, "Worker threads")->capture_default_str();
  add_method_flags(c_cl, cl.mf);
  add_svm_flags(c_cl, cl.sf);

  TuneArgs tu;
  CLI::App* c_tu = app.add_subcommand("tune", "Grid-search parameters against a test CSV");
  c_tu->add_option("--train", tu.train, "Training CSV")->required();
  c_tu->add_option("--test", tu.test, "Test CSV")->required();
  c_tu->add_option("--grid", tu.grid,
                   "JSON file with candidate arrays: delta, eta, cost, d")
      ->required();
  c_tu->add_option("--out", tu.out, "Ranked table CSV path")->required();
  c_tu->add_option("--run", tu.run, "Run document path (default <out>.run.json)");
  c_tu->add_option("--workers", tu.workers, "Worker threads")->capture_default_str();
  add_method_flags(c_tu, tu.mf);
  add_svm_flags(c_tu, tu.sf);

  LopoArgs lo;
  CLI::App* c_lo = app.add_subcommand(
      "lopo", "Leave-one-person-out cross-validation over subject_id");
  c_lo->add_option("--in", lo.in, "CSV with a subject_id column")->required();
  c_lo->add_option("--run", lo.run, "Run document path")->required();
  c_lo->add_option("--table", lo.table, "Per-subject accuracy CSV");
  c_lo->add_option("--workers", lo.workers, "Worker threads")->capture_default_str();
  add_method_flags(c_lo, lo.mf);
  add_svm_flags(c_lo, lo.sf);

  EnsembleArgs en;
  CLI::App* c_en = app.add_subcommand(
      "ensemble", "Bootstrap-sampled workers with majority-vote merging");
  c_en->add_option("--train", en.train, "Training pool CSV")->required();
  c_en->add_option("--test", en.test, "Test CSV")->required();
  c_en->add_option("--samples", en.samples, "Number of bootstrap workers")
      ->capture_default_str();
  c_en->add_option("--sample-size", en.sample_size, "Rows drawn per worker")
      ->capture_default_str();
  c_en->add_option("--base-seed", en.base_seed, "Base seed for sampling")
      ->capture_default_str();
  c_en->add_option("--run", en.run, "Run document path")->required();
  c_en->add_option("--workers", en.workers, "Worker threads")->capture_default_str();
  add_method_flags(c_en, en.mf);
  add_svm_flags(c_en, en.sf);

  RocArgs roc;
  CLI::App* c_roc = app.add_subcommand("roc", "ROC points and AUC from a scores CSV");
  c_roc->add_option("--scores", roc.scores, "Scores CSV (from classify --scores)")
      ->required();
  c_roc->add_option("--out", roc.out, "ROC CSV path (leading '# auc=' line)")
      ->required();
  c_roc->add_option("--run", roc.run, "Run document path (default <out>.run.json)");

  RerunArgs re;
  CLI::App* c_re = app.add_subcommand(
      "rerun", "Re-execute a run document from its echoed config");
  c_re->add_option("--run", re.in, "Run document to execute")->required();
  c_re->add_option("--out", re.out, "Where to write the refreshed document");
  c_re->add_option("--workers", re.workers, "Worker threads")->capture_default_str();

  CLI::App* c_ver = app.add_subcommand("version", "Print the tool version");

  CLI11_PARSE(app, argc, argv);

  if (c_gen->parsed()) return cmd_gen(gen);
  if (c_fit->parsed()) return cmd_fit(fit);
  if (c_tr->parsed()) return cmd_transform(tr);
  if (c_cl->parsed()) return cmd_classify(cl);
  if (c_tu->parsed()) return cmd_tune(tu);
  if (c_lo->parsed()) return cmd_lopo(lo);
  if (c_en->parsed()) return cmd_ensemble(en);
  if (c_roc->parsed()) return cmd_roc(roc);
  if (c_re->parsed()) return cmd_rerun(re);
  if (c_ver->parsed()) {
    std::cout << "kdr " << kdr_version() << "\n";
    return 0;
  }
  return 0;
}
