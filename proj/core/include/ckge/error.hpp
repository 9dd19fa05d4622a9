/* Copyright 2026 The ckge Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef CKGE_ERROR_HPP_
#define CKGE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace ckge {

// Root of every exception thrown by the library. The CLI maps the concrete
// subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad hyperparameter, malformed config, or invalid argument.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Anything wrong with input data: missing files, unknown ids, broken
// invariants of a snapshot sequence, corrupt checkpoints.
class DataError : public Error {
 public:
  using Error::Error;
};

class IngestionError : public DataError {
 public:
  using DataError::DataError;
};

class ConsistencyError : public DataError {
 public:
  using DataError::DataError;
};

class InvariantError : public DataError {
 public:
  using DataError::DataError;
};

// NaN/Inf during optimization.
class NumericError : public Error {
 public:
  using Error::Error;
};

[[noreturn]] void throw_config(const std::string& what);

}  // namespace ckge

#define CKGE_CHECK(cond, ExceptionType, msg) \
  do {                                       \
    if (!(cond)) throw ExceptionType(msg);   \
  } while (false)

#endif  // CKGE_ERROR_HPP_
