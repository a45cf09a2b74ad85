#include "forge/simplex_core.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace forge {

OutcomeSpace::OutcomeSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.size() < 2) throw std::invalid_argument("an outcome space needs at least two outcomes");
    std::set<std::string> seen(labels_.begin(), labels_.end());
    if (seen.size() != labels_.size()) throw std::invalid_argument("outcome labels must be distinct");
}

std::size_t OutcomeSpace::index_of(std::string_view label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw std::invalid_argument("unknown outcome '" + std::string(label) + "'");
    return static_cast<std::size_t>(it - labels_.begin());
}

void validate_distribution(const Vec& p, std::size_t n) {
    if (p.size() != n) throw std::invalid_argument("distribution has the wrong number of entries");
    Rational total = 0;
    for (const auto& x : p) {
        if (sgn(x) < 0) throw std::invalid_argument("distribution has a negative entry");
        total += x;
    }
    if (total != 1) throw std::invalid_argument("distribution does not sum to 1");
}

Vec uniform_distribution(std::size_t n) { return Vec(n, Rational(1, static_cast<unsigned long>(n))); }

Vec point_mass(std::size_t n, std::size_t y) { return unit(n, y); }

DiscreteLoss::DiscreteLoss(OutcomeSpace outcomes, std::vector<std::string> reports, std::vector<Vec> matrix)
    : outcomes_(std::move(outcomes)), reports_(std::move(reports)), matrix_(std::move(matrix)) {
    if (reports_.empty()) throw std::invalid_argument("a discrete loss needs at least one report");
    if (matrix_.size() != reports_.size()) throw std::invalid_argument("loss matrix needs one row per report");
    std::set<std::string> seen(reports_.begin(), reports_.end());
    if (seen.size() != reports_.size()) throw std::invalid_argument("report identifiers must be distinct");
    for (const auto& row : matrix_) {
        if (row.size() != outcomes_.size()) throw std::invalid_argument("loss row has the wrong number of outcomes");
        for (const auto& v : row) {
            if (sgn(v) < 0) throw std::invalid_argument("discrete loss entries must be nonnegative");
        }
    }
}

std::size_t DiscreteLoss::report_index(std::string_view report) const {
    auto it = std::find(reports_.begin(), reports_.end(), report);
    if (it == reports_.end()) throw std::invalid_argument("unknown report '" + std::string(report) + "'");
    return static_cast<std::size_t>(it - reports_.begin());
}

DiscreteLoss DiscreteLoss::scaled(const Rational& factor) const {
    std::vector<Vec> m;
    for (const auto& row : matrix_) m.push_back(scale(row, factor));
    return DiscreteLoss(outcomes_, reports_, std::move(m));
}

Rational expected_discrete_loss(const DiscreteLoss& loss, std::size_t report, const Vec& p) {
    if (report >= loss.num_reports()) throw std::invalid_argument("report index out of range");
    return dot(p, loss.row(report));
}

Rational expected_discrete_loss(const DiscreteLoss& loss, std::string_view report, const Vec& p) {
    return expected_discrete_loss(loss, loss.report_index(report), p);
}

DiscreteRisk discrete_bayes_risk(const DiscreteLoss& loss, const Vec& p) {
    if (p.size() != loss.num_outcomes()) throw std::invalid_argument("distribution dimension mismatch");
    DiscreteRisk out;
    for (std::size_t r = 0; r < loss.num_reports(); ++r) {
        Rational v = dot(p, loss.row(r));
        if (out.argmin.empty() || v < out.value) {
            out.value = v;
            out.argmin.assign(1, r);
        } else if (v == out.value) {
            out.argmin.push_back(r);
        }
    }
    return out;
}

Polyhedron level_set_polyhedron(const DiscreteLoss& loss, std::size_t report) {
    if (report >= loss.num_reports()) throw std::invalid_argument("report index out of range");
    Polyhedron cell = Polyhedron::probability_simplex(loss.num_outcomes());
    for (std::size_t other = 0; other < loss.num_reports(); ++other) {
        if (other == report) continue;
        Vec diff = sub(loss.row(report), loss.row(other));
        if (std::all_of(diff.begin(), diff.end(), [](const Rational& x) { return sgn(x) == 0; })) continue;
        cell.add_inequality(std::move(diff), 0);
    }
    return cell;
}

Polyhedron level_set_polyhedron(const DiscreteLoss& loss, std::string_view report) {
    return level_set_polyhedron(loss, loss.report_index(report));
}

NonRedundancy check_non_redundant(const DiscreteLoss& loss) {
    NonRedundancy out;
    const std::size_t n = loss.num_outcomes();
    for (std::size_t r = 0; r < loss.num_reports(); ++r) {
        // Maximize the common margin s by which r beats every other report.
        LinearProgram lp(n + 1);
        for (std::size_t y = 0; y < n; ++y) lp.require_nonnegative(y);
        Vec sum(n + 1, Rational(1));
        sum[n] = 0;
        lp.add(sum, Relation::Equal, 1);
        for (std::size_t other = 0; other < loss.num_reports(); ++other) {
            if (other == r) continue;
            Vec row = sub(loss.row(r), loss.row(other));
            row.push_back(1);
            lp.add(std::move(row), Relation::LessEq, 0);
        }
        lp.add(unit(n + 1, n), Relation::LessEq, 1);
        lp.objective = unit(n + 1, n);
        lp.sense = Sense::Maximize;
        auto res = lp_solve(lp);
        bool found = false;
        if (res.optimal() && sgn(res.value) > 0) {
            Vec p(res.point.begin(), res.point.begin() + static_cast<std::ptrdiff_t>(n));
            auto risk = discrete_bayes_risk(loss, p);
            if (risk.argmin.size() == 1 && risk.argmin.front() == r) {
                out.witnesses.emplace(loss.report(r), std::move(p));
                found = true;
            }
        }
        if (!found) out.failures.push_back(loss.report(r));
    }
    return out;
}

std::vector<Vec> simplex_grid(std::size_t n, std::size_t m) {
    if (n == 0) throw std::invalid_argument("simplex_grid: n must be positive");
    if (m == 0) throw std::invalid_argument("simplex_grid: m must be at least 1");
    std::vector<Vec> out;
    std::vector<std::size_t> counts(n, 0);
    const Rational step(1, static_cast<unsigned long>(m));
    // Recursive enumeration of compositions of m into n parts, first part slowest.
    auto rec = [&](auto&& self, std::size_t i, std::size_t remaining) -> void {
        if (i + 1 == n) {
            counts[i] = remaining;
            Vec p(n);
            for (std::size_t k = 0; k < n; ++k) p[k] = step * static_cast<unsigned long>(counts[k]);
            out.push_back(std::move(p));
            return;
        }
        for (std::size_t c = 0; c <= remaining; ++c) {
            counts[i] = c;
            self(self, i + 1, remaining - c);
        }
    };
    rec(rec, 0, m);
    return out;
}

FiniteProperty finite_property(const DiscreteLoss& loss) {
    FiniteProperty prop;
    prop.num_outcomes = loss.num_outcomes();
    prop.reports = loss.reports();
    for (std::size_t r = 0; r < loss.num_reports(); ++r) prop.cells.push_back(level_set_polyhedron(loss, r));
    return prop;
}

}  // namespace forge
