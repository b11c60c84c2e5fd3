// Copyright 2026 The INP-X Authors. All Rights Reserved.
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

#ifndef INPX_ERROR_HPP_
#define INPX_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace inpx {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Input bytes are not a supported or well-formed image / document.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Argument outside its documented domain.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Operands whose shapes must agree do not.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// The requested quantity is mathematically undefined for the input
/// (constant signal correlation, single-class AUC, ...).
class UndefinedError : public Error {
 public:
  using Error::Error;
};

}  // namespace inpx

#endif  // INPX_ERROR_HPP_
