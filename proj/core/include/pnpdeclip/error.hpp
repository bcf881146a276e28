// Copyright 2026 The pnpdeclip Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PNPDECLIP_ERROR_HPP_
#define PNPDECLIP_ERROR_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pnpdeclip {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

// The observation contains samples outside [-tau, tau].
class InconsistentObservation : public Error {
 public:
  using Error::Error;
};

// Bisection could not reach the requested input SDR.
class NoSolution : public Error {
 public:
  using Error::Error;
};

// The window does not cover every sample (zero overlap-sum somewhere).
class FrameIncomplete : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed binary input. `offset` is the byte position where parsing failed.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::uint64_t offset)
      : Error(what + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::uint64_t offset() const { return offset_; }

 private:
  std::uint64_t offset_;
};

}  // namespace pnpdeclip

#endif  // PNPDECLIP_ERROR_HPP_
