#pragma once

// Per-iteration (or per-sample) records shared by all solvers, the
// contraction certificate, and the CSV/JSON writers.

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace hessdamp {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline constexpr double kDefaultTolRel = 1e-9;
inline constexpr double kDefaultTolAbsScale = 1e-12;

struct CertificateResult {
    std::size_t k = 0;
    double lhs = 0.0;  // (1 + A h) E_{k+1}
    double rhs = 0.0;  // E_k
    double slack = 0.0;
    bool passed = true;
};

// passed <=> factor * e_next <= e_curr + tol_abs + tol_rel |e_curr|.
CertificateResult certify_contraction(std::size_t k, double e_curr, double e_next, double factor,
                                      double tol_rel, double tol_abs);

enum class TraceKind { Discrete, Continuous };

struct TraceRecord {
    double index = 0.0;  // k for discrete runs, t for continuous ones
    double f_gap_x = kNaN;
    double f_gap_y = kNaN;  // the quantity the theorem bounds (f_gap for continuous runs)
    double grad_norm = kNaN;
    double energy = kNaN;
    double certificate_slack = kNaN;
    double theorem_bound = kNaN;
};

struct CheckCount {
    std::size_t checked = 0;
    std::size_t failed = 0;
    double worst_slack = std::numeric_limits<double>::infinity();

    void add(bool ok, double slack = kNaN);
};

struct TraceSummary {
    std::string solver;
    std::string problem;
    std::string regime;
    std::map<std::string, double> params;
    double rate_theory = kNaN;  // rho, or the decay rate for continuous runs
    std::optional<double> rate_empirical;
    std::optional<std::size_t> iterations_to_threshold;
    bool certified = false;  // energy certificates were evaluated
    bool gap_is_exact = true;  // false when gaps are relative to the best value seen
    std::map<std::string, CheckCount> checks;
    bool aborted = false;
    std::string abort_reason;
    double wall_seconds = 0.0;

    std::size_t total_checked() const;
    std::size_t total_failed() const;
    bool ok() const { return !aborted && total_failed() == 0; }
};

struct Trace {
    TraceKind kind = TraceKind::Discrete;
    std::vector<TraceRecord> records;
    TraceSummary summary;
};

// Bytes depend only on the records, never on timing.
void write_csv(std::ostream& os, const Trace& trace);
void write_json_summary(std::ostream& os, const Trace& trace);
std::string summary_json(const Trace& trace, int indent = 2);

// Number formatting shared by every text output: shortest round-trip form,
// empty for NaN.
std::string format_number(double v);

}  // namespace hessdamp
