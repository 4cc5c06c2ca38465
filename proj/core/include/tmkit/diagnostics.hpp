#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tmkit {

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  std::vector<std::string> elements;  // ids of the offending elements
  bool operator==(const Diagnostic&) const = default;
};

struct ValidationReport {
  std::vector<Diagnostic> diagnostics;

  /// ok iff there is no error-severity diagnostic; warnings do not count.
  bool ok() const {
    for (const auto& d : diagnostics)
      if (d.severity == Severity::Error) return false;
    return true;
  }

  std::size_t error_count() const {
    std::size_t n = 0;
    for (const auto& d : diagnostics)
      if (d.severity == Severity::Error) ++n;
    return n;
  }

  std::size_t warning_count() const {
    return diagnostics.size() - error_count();
  }

  void error(std::string code, std::string message,
             std::vector<std::string> elements = {}) {
    diagnostics.push_back({Severity::Error, std::move(code),
                           std::move(message), std::move(elements)});
  }

  void warn(std::string code, std::string message,
            std::vector<std::string> elements = {}) {
    diagnostics.push_back({Severity::Warning, std::move(code),
                           std::move(message), std::move(elements)});
  }

  void merge(const ValidationReport& other) {
    diagnostics.insert(diagnostics.end(), other.diagnostics.begin(),
                       other.diagnostics.end());
  }

  bool has_code(std::string_view code) const {
    for (const auto& d : diagnostics)
      if (d.code == code) return true;
    return false;
  }
};

/// Coded failure for operations whose preconditions do not hold.
/// Structural problems inside models are reported as diagnostics instead.
class TmError : public std::runtime_error {
 public:
  TmError(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

}  // namespace tmkit
