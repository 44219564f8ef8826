#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace salpan {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Raised when an operation receives a raster in the wrong color space.
class InvalidSpace : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  IoError(const std::string& path, const std::string& what)
      : Error(path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

private:
  std::string path_;
};

/// A linear system that cannot be solved as posed (e.g. a zero-degree node).
class NumericalError : public Error {
public:
  using Error::Error;
};

/// Foreground seed estimation found neither strong nor weak seeds.
class NoSeedsError : public Error {
public:
  using Error::Error;
};

class InvalidGroundTruth : public Error {
public:
  using Error::Error;
};

/// Wraps an error raised inside a pipeline stage with the stage name.
class StageError : public Error {
public:
  StageError(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

private:
  std::string stage_;
};

struct Warning {
  std::string stage;
  std::string message;
};

/// Collects degenerate-case notices. Operations take an optional pointer and
/// append to it; a null sink drops warnings.
class Diagnostics {
public:
  void warn(std::string stage, std::string message) {
    warnings_.push_back({std::move(stage), std::move(message)});
  }
  const std::vector<Warning>& warnings() const noexcept { return warnings_; }
  bool empty() const noexcept { return warnings_.empty(); }
  bool has(const std::string& stage) const {
    for (const auto& w : warnings_)
      if (w.stage == stage) return true;
    return false;
  }
  void append(const Diagnostics& other) {
    warnings_.insert(warnings_.end(), other.warnings_.begin(), other.warnings_.end());
  }

private:
  std::vector<Warning> warnings_;
};

inline void warn(Diagnostics* diag, std::string stage, std::string message) {
  if (diag) diag->warn(std::move(stage), std::move(message));
}

}  // namespace salpan
