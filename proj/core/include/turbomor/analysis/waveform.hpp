// Copyright 2026 The TurboMOR Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "turbomor/analysis/transient.hpp"

namespace turbomor {

/// Reads `t,port1,port2,...` CSV with one breakpoint per row into one PWL
/// source per column.
std::vector<PwlSource> read_pwl_csv(std::istream& in, const std::string& source = "<csv>");
std::vector<PwlSource> read_pwl_csv_file(const std::string& path);

/// Writes `t,<names...>` rows. Names default to port1..portP.
void write_waveform_csv(std::ostream& out, const TransientResult& result,
                        const std::vector<std::string>& names = {});
void write_waveform_csv_file(const std::string& path, const TransientResult& result,
                             const std::vector<std::string>& names = {});

/// Reads a results CSV written by write_waveform_csv.
TransientResult read_waveform_csv_file(const std::string& path);

}  // namespace turbomor
