// kner -- morpheme-level Korean NER corpus toolkit
//
// Shared helpers for the test binaries: fixture paths, whole-file IO and a
// scratch directory per process.
#pragma once

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace testutil {

inline std::string data_path(const std::string& name) {
  if (const char* dir = std::getenv("KNER_DATA_DIR")) {
    return std::string(dir) + "/" + name;
  }
  return "tests/data/" + name;
}

inline std::string template_path(const std::string& name) {
  if (const char* dir = std::getenv("KNER_TEMPLATE_DIR")) {
    return std::string(dir) + "/" + name;
  }
  return "data/templates/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  out << body;
  if (!out) throw std::runtime_error("cannot write " + path);
}

// Per-process scratch directory, cleaned up on first use of the run.
inline std::string scratch_dir() {
  static std::string dir = [] {
    auto base = std::filesystem::temp_directory_path() /
                ("kner-test-" + std::to_string(::getpid()));
    std::filesystem::remove_all(base);
    std::filesystem::create_directories(base);
    return base.string();
  }();
  return dir;
}

inline std::string scratch_path(const std::string& name) {
  return scratch_dir() + "/" + name;
}

}  // namespace testutil
