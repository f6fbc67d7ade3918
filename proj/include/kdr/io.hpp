#pragma once

#include <string>

#include "kdr/classify.hpp"
#include "kdr/dataset.hpp"
#include "kdr/dimred.hpp"

namespace kdr {

// Canonical dataset CSV: UTF-8, header row "f0,...,f{p-1},label[,subject_id]"
// in exactly that column order. Feature values are written with 17 significant
// digits so that write -> read is bit-exact. Labels are integers.
// Readers throw ParseError on schema or value problems; file operations throw
// IoError when the file cannot be opened.
std::string dataset_to_csv(const Dataset& ds);
Dataset dataset_from_csv(const std::string& text);
void write_dataset_csv(const Dataset& ds, const std::string& path);
Dataset read_dataset_csv(const std::string& path);

// Versioned self-describing model documents (JSON). The envelope is
//   {"format": "kdr-model", "version": 1, "kind": "projector"|"svm", ...}
// and loading verifies format, version and kind. Round-trips are bit-exact:
// a loaded projector transforms identically to the in-memory original.
std::string projector_to_json_text(const Projector& p);
Projector projector_from_json_text(const std::string& text);
void save_projector(const Projector& p, const std::string& path);
Projector load_projector(const std::string& path);

std::string svm_to_json_text(const LinearSvmModel& m);
LinearSvmModel svm_from_json_text(const std::string& text);
void save_svm(const LinearSvmModel& m, const std::string& path);
LinearSvmModel load_svm(const std::string& path);

// Whole-file helpers shared by the CLI and tests.
std::string read_text_file(const std::string& path);   // IoError if unreadable
void write_text_file(const std::string& path, const std::string& text);

}  // namespace kdr
