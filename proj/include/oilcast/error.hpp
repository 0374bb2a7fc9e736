#pragma once

#include <chrono>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace oilcast {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A value violates a domain invariant (bad bar, unsorted dates, shape mismatch ...).
class DataError : public Error {
 public:
  using Error::Error;
};

/// A computation is undefined for the given input, e.g. Pearson on a constant vector.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Failure of the market-data provider or of the transport to it.
class ProviderError : public Error {
 public:
  using Error::Error;
};

/// The provider asked us to back off.
class RateLimitError : public ProviderError {
 public:
  RateLimitError(const std::string& what, std::chrono::seconds retry_after)
      : ProviderError(what), retry_after_(retry_after) {}
  std::chrono::seconds retry_after() const noexcept { return retry_after_; }

 private:
  std::chrono::seconds retry_after_;
};

/// Error raised while running an experiment, annotated with the pipeline stage.
class PipelineError : public Error {
 public:
  PipelineError(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace oilcast
