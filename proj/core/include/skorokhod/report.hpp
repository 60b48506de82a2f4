// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "skorokhod/diffusion.hpp"
#include "skorokhod/verify.hpp"

namespace skorokhod {

/// Library version string, e.g. "0.1.0".
[[nodiscard]] std::string tool_version();

/// 64-bit FNV-1a hash as 16 lowercase hex digits.
[[nodiscard]] std::string fnv1a_hex(std::string_view bytes);

/// Context written next to the checks of a report.
struct ReportMeta {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, double>> numbers;
    std::vector<std::pair<std::string, std::string>> strings;
};

/// Pretty-printed JSON document with the tool version, the meta fields and
/// one object per check. Non-finite numbers are written as the strings
/// "inf", "-inf" and "nan".
void write_report_json(std::ostream& out, const VerificationReport& report, const ReportMeta& meta);

/// `path_index,x_stop,tau` rows.
void write_empirical_csv(std::ostream& out, const EmpiricalLaw& law, std::span<const std::string> comments = {});

}  // namespace skorokhod
