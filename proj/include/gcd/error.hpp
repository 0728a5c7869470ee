#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gcd {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Diagnostic {
  int line = 0;
  int column = 0;
  std::string code;
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

/// `file:line:col code message`
std::string format_diagnostic(const Diagnostic& d, const std::string& file);

class GrammarError : public Error {
 public:
  explicit GrammarError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

class RegexError : public Error {
 public:
  RegexError(std::size_t offset, const std::string& message)
      : Error(message), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class VocabularyError : public Error {
 public:
  using Error::Error;
};

/// LALR(1) shift/reduce or reduce/reduce conflict.
class ConflictError : public Error {
 public:
  using Error::Error;
};

class ArtifactError : public Error {
 public:
  using Error::Error;
};

/// Raised by `advance` when the token is not in the current mask.
class MaskedTokenError : public Error {
 public:
  using Error::Error;
};

}  // namespace gcd
