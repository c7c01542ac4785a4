/**
 * Copyright 2026 The ColMix Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef COLMIX_ERROR_HPP_
#define COLMIX_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace colmix {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed annotation/config/detection input.
class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Invalid parameter combination or unusable resource (e.g. empty mixer directory).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// No annotation to draw from.
class SelectionError : public Error {
 public:
  using Error::Error;
};

/// Evaluation input that references unknown ids or an incomplete corruption grid.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Broken internal precondition; never expected through the public entry points.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace colmix

#endif  // COLMIX_ERROR_HPP_
