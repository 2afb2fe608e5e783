#pragma once

#include <stdexcept>
#include <string>

namespace ids {

/// Base of every error the toolkit raises. The subclasses map onto the CLI
/// exit codes (usage 1, data 2, model 3).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

/// Malformed, missing or infeasible input data.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Model file problems and schema mismatches between a model and its input.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Writes a warning line to stderr. Warnings never change results.
void warn(const std::string& message);

}  // namespace ids
