// Copyright 2026 The wdistill Authors
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

#ifndef WDISTILL_CLI_H
#define WDISTILL_CLI_H

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace wdistill::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kInvalidSpec = 2,
    kNumerical = 3,
};

struct DistillOptions {
    std::string spec_path;
    std::optional<std::string> out_path;
    bool allow_unnormalized = false;
};

struct CavityOptions {
    std::string spec_path;
    std::optional<std::string> out_path;
    bool allow_unnormalized = false;
    double epsilon = 1;
    double omega = 1;
    std::optional<double> omega0;  // defaults to omega
    std::size_t fock = 1;
};

struct SampleOptions {
    std::string spec_path;
    std::optional<std::string> out_path;
    bool allow_unnormalized = false;
    std::uint64_t trials = 10000;
    std::uint64_t seed = 0;
    std::string scheme = "abstract";
    double epsilon = 1;
    double omega = 1;
    std::optional<double> omega0;
    std::size_t fock = 1;
    unsigned threads = 0;
    double z = 1.96;
};

struct SweepOptions {
    std::size_t n = 3;
    std::size_t steps = 10;
    std::optional<std::string> out_path;
};

struct WStateOptions {
    std::size_t n = 3;
};

int cmd_distill(const DistillOptions &opts, std::ostream &out, std::ostream &err);
int cmd_cavity(const CavityOptions &opts, std::ostream &out, std::ostream &err);
int cmd_sample(const SampleOptions &opts, std::ostream &out, std::ostream &err);
int cmd_sweep(const SweepOptions &opts, std::ostream &out, std::ostream &err);
int cmd_wstate(const WStateOptions &opts, std::ostream &out, std::ostream &err);

/// Parses arguments and dispatches to a subcommand. Only ever returns 0, 1, 2 or 3.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace wdistill::cli

#endif
