#pragma once

#include <stdexcept>
#include <string>

namespace cem {

// Error categories; the numeric values are mirrored by cem_status in cem.h.
enum class ErrorCode : int {
  argument = 1,
  dimension = 2,
  domain = 3,
  capacity = 4,
  config = 5,
  io = 6,
  runtime = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct ArgumentError : Error {
  explicit ArgumentError(const std::string& what) : Error(ErrorCode::argument, what) {}
};

struct DimensionError : Error {
  DimensionError(std::size_t expected, std::size_t got)
      : Error(ErrorCode::dimension, "dimension mismatch: expected " + std::to_string(expected) +
                                        ", got " + std::to_string(got)) {}
};

struct DomainError : Error {
  explicit DomainError(const std::string& what) : Error(ErrorCode::domain, what) {}
};

struct CapacityError : Error {
  explicit CapacityError(const std::string& what) : Error(ErrorCode::capacity, what) {}
};

/// Invalid configuration; `field()` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& constraint)
      : Error(ErrorCode::config, field + ": " + constraint), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct IoError : Error {
  IoError(const std::string& path, const std::string& what)
      : Error(ErrorCode::io, path + ": " + what) {}
};

}  // namespace cem
