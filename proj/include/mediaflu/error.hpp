#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mediaflu {

enum class ErrorKind {
  ParameterDomain,
  ModelVariant,
  IntegrationBlowup,
  EmptyInput,
  Coverage,
  TruncatedWindow,
  InfeasibleInit,
  SampleTooSmall,
  DegenerateFit,
  ComparisonMismatch,
  UndefinedStatistic,
  RankDeficient,
  LengthMismatch,
  Schema,
  Parse,
  Duplicate,
  InsufficientOverlap,
  FitFailure,
  Io,
};

const char* to_string(ErrorKind kind);

// Base for everything the library throws on a violated contract.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class IntegrationError : public Error {
 public:
  IntegrationError(std::size_t step, const std::string& what)
      : Error(ErrorKind::IntegrationBlowup, what), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

// Parse and schema errors carry the 1-based line of the offending row.
class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, std::size_t line, const std::string& what)
      : Error(kind, what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace mediaflu
