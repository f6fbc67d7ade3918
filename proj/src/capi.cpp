#include "kdr/kdr.h"

#include <cstring>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "kdr/classify.hpp"
#include "kdr/dataset.hpp"
#include "kdr/dimred.hpp"
#include "kdr/errors.hpp"
#include "kdr/io.hpp"
#include "kdr/pipeline.hpp"
#include "kdr/rundoc.hpp"
#include "kdr/synthdata.hpp"

struct kdr_dataset {
  kdr::Dataset ds;
};

struct kdr_projector {
  kdr::Projector proj;
  std::optional<kdr::FitInfo> info;  // present only on handles from kdr_fit
};

struct kdr_svm {
  kdr::LinearSvmModel model;
};

namespace {

thread_local std::string g_last_error;

kdr_status to_status(kdr::ErrorCode code) {
  return static_cast<kdr_status>(code) + 1;
}

// Every entry point body runs inside this wrapper so no exception can cross
// the C boundary; the message lands in the thread-local last-error slot.
template <typename Fn>
kdr_status guarded(Fn&& fn) {
  try {
    fn();
    return KDR_OK;
  } catch (const kdr::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return KDR_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return KDR_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) kdr::raise(kdr::ErrorCode::InvalidArgument, what);
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Config strings come from C callers; malformed JSON or wrong value types are
// ParseError, not internal errors.
template <typename Fn>
auto parse_guard(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    kdr::raise(kdr::ErrorCode::ParseError, e.what());
  }
}

}  // namespace

extern "C" {

const char* kdr_version(void) { return kdr::kToolVersion; }

const char* kdr_status_name(kdr_status status) {
  if (status == KDR_OK) return "Ok";
  const kdr_status last = to_status(kdr::ErrorCode::ParseError);
  if (status >= 1 && status <= last)
    return kdr::error_name(static_cast<kdr::ErrorCode>(status - 1));
  return "InternalError";
}

const char* kdr_last_error(void) { return g_last_error.c_str(); }

void kdr_string_free(char* s) { delete[] s; }

/* ---- datasets ---------------------------------------------------------- */

kdr_status kdr_dataset_generate(const char* name, size_t n_per_class,
                                double noise_sd, uint64_t seed,
                                kdr_dataset** out) {
  return guarded([&] {
    require(name != nullptr && out != nullptr, "null argument");
    kdr::SynthSpec spec;
    spec.dataset = kdr::synth_from_name(name);
    spec.n_per_class = n_per_class;
    spec.noise_sd = noise_sd;
    spec.seed = seed;
    *out = new kdr_dataset{kdr::generate(spec)};
  });
}

kdr_status kdr_dataset_read_csv(const char* path, kdr_dataset** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new kdr_dataset{kdr::read_dataset_csv(path)};
  });
}

kdr_status kdr_dataset_write_csv(const kdr_dataset* ds, const char* path) {
  return guarded([&] {
    require(ds != nullptr && path != nullptr, "null argument");
    kdr::write_dataset_csv(ds->ds, path);
  });
}

kdr_status kdr_dataset_from_csv_text(const char* text, kdr_dataset** out) {
  return guarded([&] {
    require(text != nullptr && out != nullptr, "null argument");
    *out = new kdr_dataset{kdr::dataset_from_csv(text)};
  });
}

kdr_status kdr_dataset_to_csv_text(const kdr_dataset* ds, char** out_text) {
  return guarded([&] {
    require(ds != nullptr && out_text != nullptr, "null argument");
    *out_text = dup_string(kdr::dataset_to_csv(ds->ds));
  });
}

size_t kdr_dataset_rows(const kdr_dataset* ds) {
  return ds == nullptr ? 0 : ds->ds.rows();
}

size_t kdr_dataset_cols(const kdr_dataset* ds) {
  return ds == nullptr ? 0 : ds->ds.cols();
}

size_t kdr_dataset_num_classes(const kdr_dataset* ds) {
  return ds == nullptr ? 0 : kdr::distinct_labels(ds->ds.y).size();
}

kdr_status kdr_dataset_labels(const kdr_dataset* ds, int32_t* out_labels) {
  return guarded([&] {
    require(ds != nullptr && out_labels != nullptr, "null argument");
    for (std::size_t i = 0; i < ds->ds.y.size(); ++i)
      out_labels[i] = static_cast<int32_t>(ds->ds.y[i]);
  });
}

kdr_status kdr_dataset_split(const kdr_dataset* ds, double train_fraction,
                             uint64_t seed, kdr_dataset** out_train,
                             kdr_dataset** out_test) {
  return guarded([&] {
    require(ds != nullptr && out_train != nullptr && out_test != nullptr,
            "null argument");
    auto [train, test] = kdr::stratified_split(ds->ds, train_fraction, seed);
    *out_train = new kdr_dataset{std::move(train)};
    *out_test = new kdr_dataset{std::move(test)};
  });
}

void kdr_dataset_free(kdr_dataset* ds) { delete ds; }

/* ---- dimension reduction ---------------------------------------------- */

kdr_status kdr_fit(const kdr_dataset* train, const char* method_config_json,
                   kdr_projector** out) {
  return guarded([&] {
    require(train != nullptr && method_config_json != nullptr && out != nullptr,
            "null argument");
    kdr::validate_dataset(train->ds);
    const kdr::MethodConfig mc = parse_guard([&] {
      return kdr::method_config_from_json(
          nlohmann::json::parse(method_config_json));
    });
    kdr::FitResult fit = kdr::fit_from_config(train->ds, mc);
    *out = new kdr_projector{std::move(fit.projector), std::move(fit.info)};
  });
}

kdr_status kdr_projector_save(const kdr_projector* p, const char* path) {
  return guarded([&] {
    require(p != nullptr && path != nullptr, "null argument");
    kdr::save_projector(p->proj, path);
  });
}

kdr_status kdr_projector_load(const char* path, kdr_projector** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new kdr_projector{kdr::load_projector(path), std::nullopt};
  });
}

kdr_status kdr_projector_info(const kdr_projector* p, char** out_json) {
  return guarded([&] {
    require(p != nullptr && out_json != nullptr, "null argument");
    nlohmann::json j;
    j["method"] = kdr::method_name(p->proj.method);
    j["d"] = p->proj.d;
    j["eigenvalues"] = p->proj.eigenvalues;
    if (p->info) {
      j["requested_d"] = p->info->requested_d;
      j["ridge_used"] = p->info->ridge_used;
      j["warnings"] = p->info->warnings;
    }
    *out_json = dup_string(j.dump(2) + "\n");
  });
}

kdr_status kdr_transform(const kdr_projector* p, const kdr_dataset* in,
                         kdr_dataset** out) {
  return guarded([&] {
    require(p != nullptr && in != nullptr && out != nullptr, "null argument");
    kdr::Dataset projected;
    projected.X = kdr::transform(p->proj, in->ds.X);
    projected.y = in->ds.y;
    projected.subject_ids = in->ds.subject_ids;
    *out = new kdr_dataset{std::move(projected)};
  });
}

void kdr_projector_free(kdr_projector* p) { delete p; }

/* ---- classification ---------------------------------------------------- */

kdr_status kdr_svm_fit(const kdr_dataset* train, const char* svm_config_json,
                       kdr_svm** out) {
  return guarded([&] {
    require(train != nullptr && svm_config_json != nullptr && out != nullptr,
            "null argument");
    kdr::validate_dataset(train->ds);
    const kdr::SvmConfig sc = parse_guard([&] {
      return kdr::svm_config_from_json(nlohmann::json::parse(svm_config_json));
    });
    *out = new kdr_svm{kdr::fit_svm_standardized(train->ds.X, train->ds.y, sc)};
  });
}

kdr_status kdr_svm_save(const kdr_svm* m, const char* path) {
  return guarded([&] {
    require(m != nullptr && path != nullptr, "null argument");
    kdr::save_svm(m->model, path);
  });
}

kdr_status kdr_svm_load(const char* path, kdr_svm** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new kdr_svm{kdr::load_svm(path)};
  });
}

kdr_status kdr_svm_predict(const kdr_svm* m, const kdr_dataset* data,
                           int32_t* out_labels) {
  return guarded([&] {
    require(m != nullptr && data != nullptr && out_labels != nullptr,
            "null argument");
    const std::vector<int> pred = kdr::svm_predict(m->model, data->ds.X);
    for (std::size_t i = 0; i < pred.size(); ++i)
      out_labels[i] = static_cast<int32_t>(pred[i]);
  });
}

kdr_status kdr_svm_decision(const kdr_svm* m, const kdr_dataset* data,
                            double* out_scores) {
  return guarded([&] {
    require(m != nullptr && data != nullptr && out_scores != nullptr,
            "null argument");
    const std::vector<double> f = kdr::svm_decision(m->model, data->ds.X);
    std::memcpy(out_scores, f.data(), f.size() * sizeof(double));
  });
}

kdr_status kdr_svm_probability(const kdr_svm* m, const kdr_dataset* data,
                               double* out_probabilities) {
  return guarded([&] {
    require(m != nullptr && data != nullptr && out_probabilities != nullptr,
            "null argument");
    const std::vector<double> p = kdr::svm_probability(m->model, data->ds.X);
    std::memcpy(out_probabilities, p.data(), p.size() * sizeof(double));
  });
}

void kdr_svm_free(kdr_svm* m) { delete m; }

/* ---- evaluation -------------------------------------------------------- */

kdr_status kdr_evaluate(const kdr_dataset* truth, const int32_t* y_pred,
                        const double* scores_or_null, char** out_json) {
  return guarded([&] {
    require(truth != nullptr && y_pred != nullptr && out_json != nullptr,
            "null argument");
    const std::size_t n = truth->ds.rows();
    std::vector<int> pred(n);
    for (std::size_t i = 0; i < n; ++i) pred[i] = y_pred[i];
    std::vector<double> scores;
    const std::vector<double>* scores_ptr = nullptr;
    if (scores_or_null != nullptr) {
      scores.assign(scores_or_null, scores_or_null + n);
      scores_ptr = &scores;
    }
    const kdr::EvalReport rep = kdr::evaluate(truth->ds.y, pred, scores_ptr);
    *out_json = dup_string(kdr::eval_report_to_json(rep).dump(2) + "\n");
  });
}

/* ---- run documents ----------------------------------------------------- */

kdr_status kdr_run_execute(const char* rundoc_json, size_t workers,
                           char** out_json) {
  return guarded([&] {
    require(rundoc_json != nullptr && out_json != nullptr, "null argument");
    kdr::RunDocument doc = kdr::rundoc_from_json_text(rundoc_json);
    doc = kdr::execute_rundoc(std::move(doc), workers);
    *out_json = dup_string(kdr::rundoc_to_json_text(doc));
  });
}

} /* extern "C" */
