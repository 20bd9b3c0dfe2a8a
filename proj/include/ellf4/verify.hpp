#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ellf4/base.hpp"

namespace ellf4 {

/// Bounds on seeded parameter draws.  Nome moduli are drawn log-uniform in
/// [0.2, max_abs_*]; a candidate point is rejected and redrawn while any
/// relevant pole or denominator-zero clearance is below pole_margin.
struct SampleEnvelope {
    double max_abs_p = 0.5;
    double max_abs_q = 0.5;
    double pole_margin = 0.05;

    bool operator==(const SampleEnvelope&) const = default;
};

/// Request to run one registered identity suite.  An empty tolerances map
/// keeps the per-identity defaults; entries override by identity label.
/// fixed_p / fixed_q pin the nomes instead of sampling them.
struct SuiteSpec {
    std::string name;
    int n_points = 0;  // must be >= 1; default_spec fills the registry value
    std::uint64_t seed = 0;
    SampleEnvelope base_envelope{};
    std::map<std::string, double> tolerances{};
    std::optional<Complex> fixed_p{};
    std::optional<Complex> fixed_q{};
};

/// One checked identity instance.  When evaluation throws, the error code
/// string lands in `error`, pass stays false, and the numeric fields are zero;
/// otherwise pass <=> rel_err <= the tolerance for this identity.
struct CaseRecord {
    int index = 0;
    std::string identity;
    std::vector<std::pair<std::string, Complex>> inputs;
    Complex lhs{};
    Complex rhs{};
    double abs_err = 0.0;
    double rel_err = 0.0;
    double tolerance = 0.0;
    long n_used = 0;  // contour samples consumed; 0 for closed forms
    bool pass = false;
    std::string error;

    bool operator==(const CaseRecord&) const = default;
};

struct SuiteSummary {
    int n_cases = 0;
    int n_pass = 0;
    int n_error = 0;  // evaluation errors, counted apart from tolerance misses
    double max_rel_err = 0.0;
    double wall_time_seconds = 0.0;

    bool operator==(const SuiteSummary&) const = default;
};

struct VerificationReport {
    std::string suite;
    std::uint64_t seed = 0;
    std::vector<CaseRecord> cases;
    SuiteSummary summary;

    bool all_pass() const { return summary.n_pass == summary.n_cases; }
    bool operator==(const VerificationReport&) const = default;
};

/// Registered suite names in registry order.
const std::vector<std::string>& suite_names();

/// Spec with the registry defaults (points, seed, tolerances) filled in.
/// Unknown names throw UnknownSuite.
SuiteSpec default_spec(const std::string& name);

/// Runs one suite.  Deterministic for a fixed spec: the report is identical
/// except for summary.wall_time_seconds.  A failing case never aborts the run.
VerificationReport run_suite(const SuiteSpec& spec);

enum class ReportFormat { Json, Text };

std::string report_to_json(const VerificationReport& report);
std::string report_to_text(const VerificationReport& report);
VerificationReport report_from_json(const std::string& text);

/// Writes the chosen rendering to a file, or to stdout when destination is
/// "-".  IO failures throw with the path in the message.
void emit_report(const VerificationReport& report, ReportFormat format,
                 const std::string& destination);

}  // namespace ellf4
