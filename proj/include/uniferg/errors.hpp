// Copyright 2026 The uniferg Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace uniferg {

/// Broad failure classes. The CLI maps these onto its exit codes.
enum class ErrorKind {
    precondition,  ///< a caller-supplied argument violates an operation's contract
    budget,        ///< a word or table would exceed the configured memory budget
    depth,         ///< a finite coefficient list is too short for the request
    unsaturated,   ///< a sampled prefix is too short to witness the requested quantity
    domain,        ///< a word is not a factor of the source it is evaluated against
    invariant,     ///< an internal cross-check disagreed
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct PreconditionError : Error {
    explicit PreconditionError(const std::string& what) : Error(ErrorKind::precondition, what) {}
};

struct BudgetError : Error {
    explicit BudgetError(const std::string& what) : Error(ErrorKind::budget, what) {}
};

struct DepthError : Error {
    explicit DepthError(const std::string& what) : Error(ErrorKind::depth, what) {}
};

struct UnsaturatedError : Error {
    explicit UnsaturatedError(const std::string& what) : Error(ErrorKind::unsaturated, what) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& what) : Error(ErrorKind::domain, what) {}
};

struct InvariantViolation : Error {
    explicit InvariantViolation(const std::string& what) : Error(ErrorKind::invariant, what) {}
};

/// Upper bound on the number of letters any single operation may materialise.
struct MemoryBudget {
    std::size_t max_letters = std::size_t{64} << 20;
};

}  // namespace uniferg
