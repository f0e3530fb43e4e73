#ifndef QMT_ERRORS_HPP
#define QMT_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace qmt {

/// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input text (terms, theory files, certificates). CLI exit code 2.
struct ParseError : Error {
  ParseError(const std::string& msg, std::size_t offset)
      : Error(msg + " (at offset " + std::to_string(offset) + ")"), offset(offset) {}
  explicit ParseError(const std::string& msg) : Error(msg), offset(0) {}
  std::size_t offset;
};

/// Ill-typed term or dimension mismatch.
struct TypeError : Error {
  using Error::Error;
};

/// Mixed quantale variants.
struct VariantError : Error {
  using Error::Error;
};

/// Scalar or argument outside a schema's admissible domain.
struct DomainError : Error {
  using Error::Error;
};

/// Operation not available for the given theory/model/limits.
struct UnsupportedError : Error {
  using Error::Error;
};

/// Certificate validation failure; `path` is the child-index path to the bad node.
struct CheckError : Error {
  CheckError(const std::string& msg, std::vector<int> path)
      : Error(msg + " [node " + path_string(path) + "]"), path(std::move(path)) {}
  std::vector<int> path;

  static std::string path_string(const std::vector<int>& p) {
    if (p.empty()) return "root";
    std::string s = "root";
    for (int i : p) s += "." + std::to_string(i);
    return s;
  }
};

}  // namespace qmt

#endif
