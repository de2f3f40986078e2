// Copyright 2026 The vipguide Authors
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

#ifndef VIPGUIDE__ERRORS_HPP_
#define VIPGUIDE__ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace vipguide
{

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Malformed serialized input. `field()` names the offending JSON field or PGM header item.
class DecodeError : public Error
{
public:
  DecodeError(std::string field, const std::string & what);
  const std::string & field() const noexcept { return field_; }

private:
  std::string field_;
};

/// Well-formed input whose parts disagree (dimension mismatch, bad run sums, ordering).
class ConsistencyError : public Error
{
public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error
{
public:
  using Error::Error;
};

/// Invalid or infeasible configuration.
class ConfigError : public Error
{
public:
  using Error::Error;
};

/// Graph file violating the navigation graph schema.
class SchemaError : public Error
{
public:
  using Error::Error;
};

class UnreachableError : public Error
{
public:
  using Error::Error;
};

class InsufficientHistoryError : public Error
{
public:
  using Error::Error;
};

class RankDeficiencyError : public Error
{
public:
  using Error::Error;
};

}  // namespace vipguide

#endif  // VIPGUIDE__ERRORS_HPP_
