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

// RAII wrappers over the C handles. Failing calls throw CliError.

#ifndef MCCAL_TOOLS_CLI_CAPI_HPP_
#define MCCAL_TOOLS_CLI_CAPI_HPP_

#include <memory>
#include <stdexcept>
#include <string>

#include "mccal/mccal.h"

namespace mccal::cli {

// Exit codes: 1 for validation failures, 2 for I/O failures.
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

class CliError : public std::runtime_error {
 public:
  CliError(int exit_code, const std::string& what)
      : std::runtime_error(what), exit_code_(exit_code) {}
  int exit_code() const { return exit_code_; }

 private:
  int exit_code_;
};

inline void Check(mccal_status status) {
  if (status == MCCAL_OK) return;
  throw CliError(status == MCCAL_ERR_IO ? kExitIo : kExitValidation,
                 std::string(mccal_status_name(status)) + ": " +
                     mccal_last_error());
}

struct PopulationDeleter {
  void operator()(mccal_population* p) const { mccal_population_free(p); }
};
struct SubpopsDeleter {
  void operator()(mccal_subpops* s) const { mccal_subpops_free(s); }
};
struct ReportDeleter {
  void operator()(mccal_report* r) const { mccal_report_free(r); }
};

using PopulationHandle = std::unique_ptr<mccal_population, PopulationDeleter>;
using SubpopsHandle = std::unique_ptr<mccal_subpops, SubpopsDeleter>;
using ReportHandle = std::unique_ptr<mccal_report, ReportDeleter>;

}  // namespace mccal::cli

#endif  // MCCAL_TOOLS_CLI_CAPI_HPP_
