#include "kdr/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>
#include <system_error>

#include "json.hpp"

#include "kdr/errors.hpp"

namespace kdr {

namespace {

using nlohmann::json;

// 17 significant digits guarantee an exact double round-trip; to_chars is
// locale-independent.
std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view tok, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
    raise(ErrorCode::ParseError, "line " + std::to_string(line) +
                                     ": bad numeric value '" + std::string(tok) + "'");
  return v;
}

int parse_label(std::string_view tok, std::size_t line) {
  int v = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
    raise(ErrorCode::ParseError, "line " + std::to_string(line) +
                                     ": bad integer label '" + std::string(tok) + "'");
  return v;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

json matrix_to_json(const Matrix& m) {
  json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  j["data"] = std::vector<double>(m.flat().begin(), m.flat().end());
  return j;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
    raise(ErrorCode::ParseError, "matrix object requires rows/cols/data");
  const std::size_t rows = j.at("rows").get<std::size_t>();
  const std::size_t cols = j.at("cols").get<std::size_t>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (data.size() != rows * cols)
    raise(ErrorCode::ParseError, "matrix data length does not match rows*cols");
  Matrix m(rows, cols);
  std::copy(data.begin(), data.end(), m.flat().begin());
  return m;
}

json envelope(const char* kind) {
  json j;
  j["format"] = "kdr-model";
  j["version"] = 1;
  j["kind"] = kind;
  return j;
}

json parse_envelope(const std::string& text, const char* kind) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    raise(ErrorCode::ParseError, std::string("invalid model document: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != "kdr-model")
    raise(ErrorCode::ParseError, "not a kdr-model document");
  if (j.value("version", -1) != 1)
    raise(ErrorCode::ParseError, "unsupported model document version");
  if (j.value("kind", "") != kind)
    raise(ErrorCode::ParseError, "expected document kind '" + std::string(kind) +
                                     "', found '" + j.value("kind", "") + "'");
  return j;
}

}  // namespace

std::string dataset_to_csv(const Dataset& ds) {
  validate_dataset(ds);
  const bool subjects = !ds.subject_ids.empty();
  std::string out;
  for (std::size_t j = 0; j < ds.cols(); ++j) {
    out += "f" + std::to_string(j);
    out += ',';
  }
  out += "label";
  if (subjects) out += ",subject_id";
  out += '\n';
  for (std::size_t i = 0; i < ds.rows(); ++i) {
    for (std::size_t j = 0; j < ds.cols(); ++j) {
      out += format_double(ds.X(i, j));
      out += ',';
    }
    out += std::to_string(ds.y[i]);
    if (subjects) {
      out += ',';
      out += ds.subject_ids[i];
    }
    out += '\n';
  }
  return out;
}

Dataset dataset_from_csv(const std::string& text) {
  std::vector<std::string_view> lines;
  {
    std::string_view rest(text);
    while (!rest.empty()) {
      std::size_t nl = rest.find('\n');
      std::string_view line = nl == std::string_view::npos ? rest : rest.substr(0, nl);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (!line.empty()) lines.push_back(line);
      if (nl == std::string_view::npos) break;
      rest = rest.substr(nl + 1);
    }
  }
  if (lines.empty()) raise(ErrorCode::ParseError, "empty dataset file");

  const auto header = split_fields(lines[0]);
  std::size_t p = 0;
  while (p < header.size() && header[p] == "f" + std::to_string(p)) ++p;
  if (p == 0 || p >= header.size() || header[p] != "label")
    raise(ErrorCode::ParseError,
          "header must be f0,...,f{p-1},label[,subject_id]");
  bool subjects = false;
  if (header.size() == p + 2) {
    if (header[p + 1] != "subject_id")
      raise(ErrorCode::ParseError, "unexpected trailing header column '" +
                                       std::string(header[p + 1]) + "'");
    subjects = true;
  } else if (header.size() != p + 1) {
    raise(ErrorCode::ParseError, "unexpected extra header columns after label");
  }

  const std::size_t n = lines.size() - 1;
  Dataset ds;
  ds.X = Matrix(n, p);
  ds.y.resize(n);
  if (subjects) ds.subject_ids.resize(n);
  ds.feature_names.reserve(p);
  for (std::size_t j = 0; j < p; ++j) ds.feature_names.push_back("f" + std::to_string(j));

  for (std::size_t i = 0; i < n; ++i) {
    const auto fields = split_fields(lines[i + 1]);
    if (fields.size() != header.size())
      raise(ErrorCode::ParseError, "line " + std::to_string(i + 2) + ": expected " +
                                       std::to_string(header.size()) + " fields, found " +
                                       std::to_string(fields.size()));
    for (std::size_t j = 0; j < p; ++j) ds.X(i, j) = parse_double(fields[j], i + 2);
    ds.y[i] = parse_label(fields[p], i + 2);
    if (subjects) ds.subject_ids[i] = std::string(fields[p + 1]);
  }
  validate_dataset(ds);
  return ds;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::IoError, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) raise(ErrorCode::IoError, "error while reading '" + path + "'");
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  out.write(text.data(), std::streamsize(text.size()));
  out.flush();
  if (!out) raise(ErrorCode::IoError, "error while writing '" + path + "'");
}

void write_dataset_csv(const Dataset& ds, const std::string& path) {
  write_text_file(path, dataset_to_csv(ds));
}

Dataset read_dataset_csv(const std::string& path) {
  return dataset_from_csv(read_text_file(path));
}

std::string projector_to_json_text(const Projector& p) {
  json j = envelope("projector");
  j["method"] = method_name(p.method);
  j["d"] = p.d;
  j["basis"] = matrix_to_json(p.basis);
  j["eigenvalues"] = p.eigenvalues;
  if (p.kernel) {
    j["kernel"] = {{"family", p.kernel->family == KernelFamily::rbf ? "rbf" : "linear"},
                   {"delta", p.kernel->delta}};
  } else {
    j["kernel"] = nullptr;
  }
  if (p.link) {
    j["link"] = {{"kind", p.link->kind == LinkKind::indicator ? "indicator" : "modified"},
                 {"eta", p.link->eta},
                 {"delta", p.link->delta}};
  } else {
    j["link"] = nullptr;
  }
  j["train_x"] = matrix_to_json(p.train_X);
  j["col_means"] = p.train_col_means;
  j["col_stds"] = p.train_col_stds;
  j["gram_row_means"] = p.train_gram_row_means;
  j["gram_total_mean"] = p.train_gram_total_mean;
  return j.dump(2) + "\n";
}

Projector projector_from_json_text(const std::string& text) {
  const json j = parse_envelope(text, "projector");
  try {
    Projector p;
    p.method = method_from_name(j.at("method").get<std::string>());
    p.d = j.at("d").get<std::size_t>();
    p.basis = matrix_from_json(j.at("basis"));
    p.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
    if (!j.at("kernel").is_null()) {
      KernelSpec k;
      const std::string fam = j.at("kernel").at("family").get<std::string>();
      if (fam == "rbf")
        k.family = KernelFamily::rbf;
      else if (fam == "linear")
        k.family = KernelFamily::linear;
      else
        raise(ErrorCode::ParseError, "unknown kernel family '" + fam + "'");
      k.delta = j.at("kernel").at("delta").get<double>();
      p.kernel = k;
    }
    if (!j.at("link").is_null()) {
      LinkSpec l;
      const std::string kind = j.at("link").at("kind").get<std::string>();
      if (kind == "indicator")
        l.kind = LinkKind::indicator;
      else if (kind == "modified")
        l.kind = LinkKind::modified;
      else
        raise(ErrorCode::ParseError, "unknown link kind '" + kind + "'");
      l.eta = j.at("link").at("eta").get<double>();
      l.delta = j.at("link").at("delta").get<double>();
      p.link = l;
    }
    p.train_X = matrix_from_json(j.at("train_x"));
    p.train_col_means = j.at("col_means").get<std::vector<double>>();
    p.train_col_stds = j.at("col_stds").get<std::vector<double>>();
    p.train_gram_row_means = j.at("gram_row_means").get<std::vector<double>>();
    p.train_gram_total_mean = j.at("gram_total_mean").get<double>();
    return p;
  } catch (const json::exception& e) {
    raise(ErrorCode::ParseError, std::string("malformed projector document: ") + e.what());
  }
}

void save_projector(const Projector& p, const std::string& path) {
  write_text_file(path, projector_to_json_text(p));
}

Projector load_projector(const std::string& path) {
  return projector_from_json_text(read_text_file(path));
}

std::string svm_to_json_text(const LinearSvmModel& m) {
  json j = envelope("svm");
  j["w"] = m.w;
  j["b"] = m.b;
  j["cost"] = m.cost;
  j["label_neg"] = m.label_neg;
  j["label_pos"] = m.label_pos;
  if (m.platt_a && m.platt_b) {
    j["platt_a"] = *m.platt_a;
    j["platt_b"] = *m.platt_b;
  } else {
    j["platt_a"] = nullptr;
    j["platt_b"] = nullptr;
  }
  return j.dump(2) + "\n";
}

LinearSvmModel svm_from_json_text(const std::string& text) {
  const json j = parse_envelope(text, "svm");
  try {
    LinearSvmModel m;
    m.w = j.at("w").get<std::vector<double>>();
    m.b = j.at("b").get<double>();
    m.cost = j.at("cost").get<double>();
    m.label_neg = j.at("label_neg").get<int>();
    m.label_pos = j.at("label_pos").get<int>();
    if (!j.at("platt_a").is_null() && !j.at("platt_b").is_null()) {
      m.platt_a = j.at("platt_a").get<double>();
      m.platt_b = j.at("platt_b").get<double>();
    }
    return m;
  } catch (const json::exception& e) {
    raise(ErrorCode::ParseError, std::string("malformed svm document: ") + e.what());
  }
}

void save_svm(const LinearSvmModel& m, const std::string& path) {
  write_text_file(path, svm_to_json_text(m));
}

LinearSvmModel load_svm(const std::string& path) {
  return svm_from_json_text(read_text_file(path));
}

}  // namespace kdr
