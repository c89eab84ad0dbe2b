#include "hessdamp/trace.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <cmath>

namespace hessdamp {

CertificateResult certify_contraction(std::size_t k, double e_curr, double e_next, double factor, double tol_rel,
                                      double tol_abs) {
    CertificateResult c;
    c.k = k;
    c.lhs = factor * e_next;
    c.rhs = e_curr;
    c.slack = c.rhs - c.lhs;
    c.passed = std::isfinite(c.slack) && c.slack >= -tol_abs - tol_rel * std::abs(c.rhs);
    return c;
}

void CheckCount::add(bool ok, double slack) {
    ++checked;
    if (!ok) ++failed;
    if (!std::isnan(slack)) worst_slack = std::min(worst_slack, slack);
}

std::size_t TraceSummary::total_checked() const {
    std::size_t n = 0;
    for (const auto& [_, c] : checks) n += c.checked;
    return n;
}

std::size_t TraceSummary::total_failed() const {
    std::size_t n = 0;
    for (const auto& [_, c] : checks) n += c.failed;
    return n;
}

std::string format_number(double v) {
    if (std::isnan(v)) return {};
    return fmt::format("{}", v);
}

void write_csv(std::ostream& os, const Trace& trace) {
    if (trace.kind == TraceKind::Discrete) {
        os << "k,f_gap_x,f_gap_y,grad_norm,energy,certificate_slack,theorem_bound\n";
        for (const auto& r : trace.records) {
            os << fmt::format("{},{},{},{},{},{},{}\n", static_cast<long long>(r.index), format_number(r.f_gap_x),
                              format_number(r.f_gap_y), format_number(r.grad_norm), format_number(r.energy),
                              format_number(r.certificate_slack), format_number(r.theorem_bound));
        }
    } else {
        os << "t,f_gap,energy,envelope,certificate_slack\n";
        for (const auto& r : trace.records) {
            os << fmt::format("{},{},{},{},{}\n", format_number(r.index), format_number(r.f_gap_y),
                              format_number(r.energy), format_number(r.theorem_bound),
                              format_number(r.certificate_slack));
        }
    }
}

namespace {

nlohmann::json number_or_null(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

}  // namespace

std::string summary_json(const Trace& trace, int indent) {
    const TraceSummary& s = trace.summary;
    nlohmann::json j;
    j["solver"] = s.solver;
    j["problem"] = s.problem;
    j["regime"] = s.regime;
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [k, v] : s.params) params[k] = number_or_null(v);
    j["params"] = params;
    j["records"] = trace.records.size();
    j["rate_theory"] = number_or_null(s.rate_theory);
    j["rate_empirical"] = s.rate_empirical ? number_or_null(*s.rate_empirical) : nlohmann::json(nullptr);
    j["iterations_to_threshold"] =
        s.iterations_to_threshold ? nlohmann::json(*s.iterations_to_threshold) : nlohmann::json(nullptr);
    j["certified"] = s.certified;
    j["gap_is_exact"] = s.gap_is_exact;
    nlohmann::json checks = nlohmann::json::object();
    for (const auto& [name, c] : s.checks) {
        checks[name] = {{"checked", c.checked}, {"failed", c.failed}, {"worst_slack", number_or_null(c.worst_slack)}};
    }
    j["checks"] = checks;
    j["checks_passed"] = s.total_checked() - s.total_failed();
    j["checks_failed"] = s.total_failed();
    j["aborted"] = s.aborted;
    if (s.aborted) j["abort_reason"] = s.abort_reason;
    j["ok"] = s.ok();
    j["wall_seconds"] = s.wall_seconds;
    return j.dump(indent);
}

void write_json_summary(std::ostream& os, const Trace& trace) { os << summary_json(trace) << '\n'; }

}  // namespace hessdamp
