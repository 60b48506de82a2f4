// SPDX-License-Identifier: MIT
#include "skorokhod/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

namespace skorokhod {

std::string tool_version() { return "0.1.0"; }

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

nlohmann::ordered_json number(double v) {
    if (std::isfinite(v)) return v;
    return format_number(v);
}

}  // namespace

void write_report_json(std::ostream& out, const VerificationReport& report, const ReportMeta& meta) {
    nlohmann::ordered_json doc;
    doc["tool"] = "skorokhod";
    doc["version"] = tool_version();
    doc["scenario"] = report.scenario();
    doc["config_hash"] = meta.config_hash;
    doc["seed"] = meta.seed;
    doc["passed"] = report.passed();
    doc["n_failed"] = report.n_failed();
    for (const auto& [k, v] : meta.numbers) doc["values"][k] = number(v);
    for (const auto& [k, v] : meta.strings) doc["notes"][k] = v;
    auto& checks = doc["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : report.checks()) {
        checks.push_back({{"name", c.name},
                          {"outcome", to_string(c.outcome)},
                          {"statistic", number(c.statistic)},
                          {"threshold", number(c.threshold)},
                          {"n_samples", c.n_samples},
                          {"seed", c.seed},
                          {"note", c.note}});
    }
    out << doc.dump(2) << '\n';
}

void write_empirical_csv(std::ostream& out, const EmpiricalLaw& law, std::span<const std::string> comments) {
    for (const auto& c : comments) out << "# " << c << '\n';
    out << "path_index,x_stop,tau\n";
    for (std::size_t i = 0; i < law.samples.size(); ++i) {
        out << i << ',' << format_number(law.samples[i]) << ',' << format_number(law.stop_times[i]) << '\n';
    }
}

}  // namespace skorokhod
