#include "forge/link.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace forge {

std::vector<std::vector<std::size_t>> report_sets(const OptimalSetFamily& family, const Embedding& phi) {
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t j = 0; j < family.members.size(); ++j) {
        const auto& set = family.members[j].set;
        std::vector<std::size_t> reports;
        for (std::size_t r = 0; r < phi.size(); ++r) {
            if (phi.point(r).size() != set.dim()) throw std::invalid_argument("report_sets: embedding dimension mismatch");
            if (set.contains(phi.point(r))) reports.push_back(r);
        }
        if (reports.empty())
            throw std::runtime_error("optimal set " + std::to_string(j) + " contains no embedding point");
        out.push_back(std::move(reports));
    }
    return out;
}

std::vector<Rational> default_epsilon_ladder() {
    std::vector<Rational> ladder;
    for (unsigned long k = 1; k <= 64; k *= 2) ladder.emplace_back(1, k);
    return ladder;
}

EpsilonCertificate max_valid_epsilon(const OptimalSetFamily& family, Norm norm, const std::vector<Rational>& candidates) {
    if (candidates.empty()) throw std::invalid_argument("max_valid_epsilon: no candidates");
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (sgn(candidates[i]) <= 0) throw std::invalid_argument("max_valid_epsilon: candidates must be positive");
        if (i && candidates[i] >= candidates[i - 1])
            throw std::invalid_argument("max_valid_epsilon: candidates must be strictly descending");
    }
    EpsilonCertificate cert;
    const auto& members = family.members;
    if (!members.empty()) {
        const std::size_t d = members.front().set.dim();
        std::vector<std::size_t> current;
        std::vector<Polyhedron> sets;
        // Extends intersecting subfamilies of size <= d by later members.
        auto dfs = [&](auto&& self, std::size_t start) -> void {
            for (std::size_t j = start; j < members.size(); ++j) {
                current.push_back(j);
                sets.push_back(members[j].set);
                if (sets_intersect(sets)) {
                    ++cert.intersecting_visited;
                    if (current.size() <= d) self(self, j + 1);
                } else {
                    Rational radius = common_thickening_radius(sets, norm);
                    if (!cert.has_threshold || radius < cert.threshold) cert.threshold = radius;
                    cert.has_threshold = true;
                    cert.checked.push_back({current, radius});
                }
                current.pop_back();
                sets.pop_back();
            }
        };
        dfs(dfs, 0);
    }
    for (const auto& eps : candidates) {
        if (!cert.has_threshold || eps <= cert.threshold) {
            cert.epsilon = eps;
            return cert;
        }
    }
    throw std::runtime_error("max_valid_epsilon: no candidate validates (smallest separating radius " +
                             to_string(cert.threshold) + ")");
}

Link::Link(LinkSpec spec) : spec_(std::move(spec)) {
    if (sgn(spec_.epsilon) <= 0) throw std::invalid_argument("link epsilon must be positive");
    member_reports_ = report_sets(spec_.family, spec_.embedding);
    const auto& names = spec_.embedding.reports();
    std::vector<std::size_t> order(names.size());
    std::iota(order.begin(), order.end(), 0);
    auto preferred = [&](std::size_t i) -> std::size_t {
        auto it = std::find(spec_.tie_break.begin(), spec_.tie_break.end(), names[i]);
        return static_cast<std::size_t>(it - spec_.tie_break.begin());
    };
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        auto pa = preferred(a), pb = preferred(b);
        if (pa != pb) return pa < pb;
        return names[a] < names[b];
    });
    rank_.assign(names.size(), 0);
    for (std::size_t pos = 0; pos < order.size(); ++pos) rank_[order[pos]] = pos;
}

std::vector<std::size_t> Link::envelope(const Vec& u) const {
    std::vector<std::size_t> psi(spec_.embedding.size());
    std::iota(psi.begin(), psi.end(), 0);
    for (std::size_t j = 0; j < spec_.family.members.size() && !psi.empty(); ++j) {
        const auto& member = spec_.family.members[j];
        if (!within_distance(member.set, u, spec_.epsilon, spec_.norm, &member.point)) continue;
        std::vector<std::size_t> next;
        std::set_intersection(psi.begin(), psi.end(), member_reports_[j].begin(), member_reports_[j].end(),
                              std::back_inserter(next));
        psi = std::move(next);
    }
    return psi;
}

std::string Link::operator()(const Vec& u) const {
    auto psi = envelope(u);
    if (psi.empty()) throw std::logic_error("link envelope is empty at u = " + point_label(u) + "; epsilon too large");
    std::size_t best = psi.front();
    for (std::size_t r : psi) {
        if (rank_[r] < rank_[best]) best = r;
    }
    return spec_.embedding.reports()[best];
}

Link build_link(LinkSpec spec) { return Link(std::move(spec)); }

std::vector<Vec> UGrid::points() const {
    const std::size_t d = lower.size();
    if (upper.size() != d || d == 0) throw std::invalid_argument("u-grid bounds mismatch");
    if (sgn(step) <= 0) throw std::invalid_argument("u-grid step must be positive");
    std::vector<std::vector<Rational>> axes(d);
    for (std::size_t i = 0; i < d; ++i) {
        if (upper[i] < lower[i]) throw std::invalid_argument("u-grid box is empty");
        for (Rational x = lower[i]; x <= upper[i]; x += step) axes[i].push_back(x);
    }
    std::vector<Vec> out;
    std::vector<std::size_t> idx(d, 0);
    while (true) {
        Vec u(d);
        for (std::size_t i = 0; i < d; ++i) u[i] = axes[i][idx[i]];
        out.push_back(std::move(u));
        std::size_t i = d;
        while (true) {
            if (i == 0) return out;
            --i;
            if (++idx[i] < axes[i].size()) break;
            idx[i] = 0;
        }
    }
}

UGrid symmetric_grid(std::size_t d, const Rational& radius, const Rational& step) {
    return {Vec(d, Rational(-radius)), Vec(d, radius), step};
}

AuditGrid::AuditGrid(const PolyhedralLoss& surrogate, const LinkFunction& link, const DiscreteLoss& target,
                     const UGrid& grid) {
    if (surrogate.num_outcomes() != target.num_outcomes()) throw std::invalid_argument("audit: outcome count mismatch");
    points_ = grid.points();
    for (const auto& u : points_) {
        Vec v = eval_loss(surrogate, u);
        std::vector<double> vd;
        for (const auto& x : v) vd.push_back(x.get_d());
        losses_.push_back(std::move(v));
        losses_double_.push_back(std::move(vd));
        reports_.push_back(target.report_index(link(u)));
    }
}

namespace {

LinearProgram risk_region(const PolyhedralLoss& surrogate) {
    const std::size_t d = surrogate.dim(), n = surrogate.num_outcomes();
    LinearProgram lp(d + n);
    for (std::size_t y = 0; y < n; ++y) {
        for (const auto& piece : surrogate.pieces(y)) {
            Vec row(d + n, Rational(0));
            for (std::size_t i = 0; i < d; ++i) row[i] = piece.a[i];
            row[d + y] = -1;
            lp.add(std::move(row), Relation::LessEq, -piece.b);
        }
    }
    return lp;
}

}  // namespace

RiskOracle::RiskOracle(const PolyhedralLoss& surrogate)
    : d_(surrogate.dim()), n_(surrogate.num_outcomes()), solver_(risk_region(surrogate)) {}

Rational RiskOracle::operator()(const Vec& p) {
    validate_distribution(p, n_);
    Vec objective(d_ + n_, Rational(0));
    for (std::size_t y = 0; y < n_; ++y) objective[d_ + y] = p[y];
    auto r = solver_.optimize(objective, Sense::Minimize);
    if (!r.optimal()) throw std::domain_error("expected loss is unbounded below");
    return r.value;
}

AuditEntry calibration_audit(const AuditGrid& grid, const PolyhedralLoss& surrogate, const DiscreteLoss& target,
                             const Vec& p, const Rational& surrogate_risk) {
    AuditEntry entry;
    entry.p = p;
    auto gamma = discrete_bayes_risk(target, p).argmin;
    std::vector<double> pd;
    for (const auto& x : p) pd.push_back(x.get_d());

    // Floating-point screen, then exact evaluation of everything near the minimum.
    std::vector<double> values(grid.size(), std::numeric_limits<double>::infinity());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (std::binary_search(gamma.begin(), gamma.end(), grid.report(i))) continue;
        const auto& l = grid.loss_double(i);
        double v = 0;
        for (std::size_t y = 0; y < pd.size(); ++y) v += pd[y] * l[y];
        values[i] = v;
        best = std::min(best, v);
    }
    if (best == std::numeric_limits<double>::infinity()) {
        entry.vacuous = true;
        return entry;
    }
    const double tolerance = 1e-9 * (1 + std::abs(best));
    bool first = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (values[i] > best + tolerance) continue;
        Rational gap = dot(p, grid.loss(i)) - surrogate_risk;
        if (first || gap < entry.gap) {
            entry.gap = gap;
            entry.witness = grid.point(i);
            entry.witness_report = target.report(grid.report(i));
            first = false;
        }
    }
    if (sgn(entry.gap) <= 0) {
        // Re-derive from scratch rather than trusting cached grid values.
        Rational excess = expected_surrogate_loss(surrogate, entry.witness, p) - surrogate_risk;
        std::size_t r = target.report_index(entry.witness_report);
        entry.violation = sgn(excess) <= 0 && !std::binary_search(gamma.begin(), gamma.end(), r);
    }
    return entry;
}

AuditEntry calibration_audit(const PolyhedralLoss& surrogate, const LinkFunction& link, const DiscreteLoss& target,
                             const Vec& p, const UGrid& grid) {
    AuditGrid audit_grid(surrogate, link, target, grid);
    return calibration_audit(audit_grid, surrogate, target, p, surrogate_bayes_risk(surrogate, p));
}

CalibrationAudit calibration_scan(const PolyhedralLoss& surrogate, const LinkFunction& link, const DiscreteLoss& target,
                                  std::size_t m, const UGrid& grid) {
    AuditGrid audit_grid(surrogate, link, target, grid);
    RiskOracle risk(surrogate);
    CalibrationAudit audit;
    for (const auto& p : simplex_grid(target.num_outcomes(), m)) {
        auto entry = calibration_audit(audit_grid, surrogate, target, p, risk(p));
        if (!entry.vacuous) {
            if (!audit.min_gap || entry.gap < *audit.min_gap) audit.min_gap = entry.gap;
            if (entry.violation) ++audit.violations;
        }
        audit.entries.push_back(std::move(entry));
    }
    return audit;
}

SlopeEstimate separation_slope(const PolyhedralLoss& surrogate, const Vec& p, const std::vector<Vec>& samples, Norm norm) {
    auto minimum = minimize_expected(surrogate, p);
    SlopeEstimate est;
    for (const auto& u : samples) {
        Rational dist = point_set_distance(minimum.argmin, u, norm);
        if (sgn(dist) == 0) {
            ++est.skipped;
            continue;
        }
        Rational ratio = (expected_surrogate_loss(surrogate, u, p) - minimum.risk) / dist;
        if (est.used == 0 || ratio < est.c_hat) est.c_hat = ratio;
        ++est.used;
    }
    if (est.used == 0) throw std::runtime_error("separation_slope: every sample lies in the argmin");
    return est;
}

}  // namespace forge
