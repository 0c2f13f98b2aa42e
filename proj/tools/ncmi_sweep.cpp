// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <fstream>
#include <iostream>

#include "ncmi/sweep.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

} // namespace

int main(int argc, char** argv)
{
    std::optional<ncmi::SweepSpec> spec;
    try {
        spec = ncmi::parse_spec(argc, argv, std::cout);
    } catch (const ncmi::UsageError& e) {
        std::cerr << "ncmi_sweep: " << e.what() << "\nRun with --help for usage.\n";
        return kExitUsage;
    }
    if (!spec) {
        return 0;
    }

    std::ofstream file;
    std::ostream* os = &std::cout;
    if (spec->output != "-") {
        file.open(spec->output, std::ios::out | std::ios::trunc);
        if (!file) {
            std::cerr << "ncmi_sweep: cannot open " << spec->output << " for writing\n";
            return kExitIo;
        }
        os = &file;
    }

    try {
        ncmi::SweepWriter writer(*spec, *os);
        ncmi::run_sweep(
            *spec, [&](const ncmi::SweepRow& r) { writer.row(r); },
            [](const std::string& msg) { std::cerr << "ncmi_sweep: warning: " << msg << '\n'; });
        writer.finish();
    } catch (const ncmi::SweepFailure& e) {
        std::cerr << "ncmi_sweep: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "ncmi_sweep: write failed: " << e.what() << '\n';
        return kExitIo;
    }
    return 0;
}
