/*
 * Copyright 2026 The Trident Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef TRIDENT_COMMON_ERROR_HPP_
#define TRIDENT_COMMON_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace trident {

// Error categories double as process exit codes for the command-line tool.
enum class ErrorKind : int {
  kValidation = 2,
  kProtocol = 3,
  kIntegrity = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

// Invalid parameters, shapes, or configuration.
class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& what)
      : Error(ErrorKind::kValidation, what) {}
};

// A rotation needed a Galois element whose key was never provisioned.
class MissingKeyError : public Error {
 public:
  MissingKeyError(unsigned long galois_element, const std::string& what)
      : Error(ErrorKind::kProtocol, what), element_(galois_element) {}
  unsigned long galois_element() const noexcept { return element_; }

 private:
  unsigned long element_;
};

class ProtocolError : public Error {
 public:
  explicit ProtocolError(const std::string& what)
      : Error(ErrorKind::kProtocol, what) {}
};

// Tampered or corrupted cryptographic material, or a decryption mismatch.
class IntegrityError : public Error {
 public:
  explicit IntegrityError(const std::string& what)
      : Error(ErrorKind::kIntegrity, what) {}
};

}  // namespace trident

#endif  // TRIDENT_COMMON_ERROR_HPP_
