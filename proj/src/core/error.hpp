/*
 * Copyright 2026 The mccal Authors.
 *
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

#ifndef MCCAL_CORE_ERROR_HPP_
#define MCCAL_CORE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace mccal {

// Numeric values are shared with the C API status codes in mccal.h.
enum class ErrorCode : int {
  kInvalidArgument = 1,
  kNonpositiveWeight = 2,
  kScoreOutOfRange = 3,
  kInvalidResponse = 4,
  kShapeMismatch = 5,
  kZeroScore = 6,
  kNoPositives = 7,
  kEmptySubpopulation = 8,
  kWrongMode = 9,
  kInfiniteRatio = 10,
  kNoCovariates = 11,
  kAttemptsExhausted = 12,
  kPredictorContract = 13,
  kNonFinite = 14,
  kIo = 15,
  kParse = 16,
  kInternal = 99,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace mccal

#endif  // MCCAL_CORE_ERROR_HPP_
