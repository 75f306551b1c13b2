// Copyright 2026 the ldpmatch authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace ldpm {

// Base class for all domain errors raised by the library. The CLI maps
// these to exit code 1; anything else escaping is a bug.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A value violates an operation's input contract (empty keyword, epsilon <= 0, ...).
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// An object is in the wrong state for the operation (e.g. inserting into a
// perturbed filter, re-perturbing, publishing from an offline node).
class StateError : public Error {
 public:
  using Error::Error;
};

// Two filters with different lengths were combined.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Byte-level or text-level input could not be decoded; the message carries
// an offset or line number.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A configuration is internally inconsistent or infeasible.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Cosine similarity requested on an all-zero filter.
class UndefinedSimilarityError : public Error {
 public:
  using Error::Error;
};

// Filesystem-level failure (missing file, unreadable path).
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ldpm
