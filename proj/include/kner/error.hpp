// kner -- morpheme-level Korean NER corpus toolkit
#ifndef KNER_ERROR_HPP_
#define KNER_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kner {

// Error taxonomy. Every failure raised by the library carries a Kind so the
// C API and the CLI can map it onto a stable status / exit code without
// string matching.
enum class ErrorKind {
  Io,           // file unreadable / unwritable
  Parse,        // malformed line, wrong column count
  Structure,    // ids out of order, broken span, text mismatch
  Vocab,        // tag or symbol outside the configured inventory
  Align,        // ner/morph streams disagree, contraction not alignable
  Granularity,  // annotation not expressible at the coarser level
  Mismatch,     // gold/pred token or sentence counts differ
  Validation,   // tag sequence violates the declared scheme
  InvalidArg,   // bad API usage
  Internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg, std::size_t line = 0)
      : std::runtime_error(line ? msg + " (line " + std::to_string(line) + ")" : msg),
        kind_(kind),
        line_(line) {}

  ErrorKind kind() const { return kind_; }
  // 1-based input line when the error is anchored to one, else 0.
  std::size_t line() const { return line_; }

 private:
  ErrorKind kind_;
  std::size_t line_;
};

inline Error io_error(const std::string& msg) { return {ErrorKind::Io, msg}; }
inline Error parse_error(const std::string& msg, std::size_t line = 0) {
  return {ErrorKind::Parse, msg, line};
}
inline Error structure_error(const std::string& msg, std::size_t line = 0) {
  return {ErrorKind::Structure, msg, line};
}
inline Error vocab_error(const std::string& msg, std::size_t line = 0) {
  return {ErrorKind::Vocab, msg, line};
}
inline Error align_error(const std::string& msg) { return {ErrorKind::Align, msg}; }
inline Error granularity_error(const std::string& msg) {
  return {ErrorKind::Granularity, msg};
}
inline Error mismatch_error(const std::string& msg) { return {ErrorKind::Mismatch, msg}; }
inline Error validation_error(const std::string& msg) {
  return {ErrorKind::Validation, msg};
}

}  // namespace kner

#endif  // KNER_ERROR_HPP_
