#include "forge/embedding.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace forge {

void Embedding::add(std::string report, Vec point) {
    if (has(report)) throw std::invalid_argument("embedding already has report '" + report + "'");
    if (!points_.empty() && point.size() != points_.front().size())
        throw std::invalid_argument("embedding points must share one dimension");
    reports_.push_back(std::move(report));
    points_.push_back(std::move(point));
}

std::size_t Embedding::index_of(std::string_view report) const {
    auto it = std::find(reports_.begin(), reports_.end(), report);
    if (it == reports_.end()) throw std::invalid_argument("embedding has no report '" + std::string(report) + "'");
    return static_cast<std::size_t>(it - reports_.begin());
}

const Vec& Embedding::point(std::string_view report) const { return points_[index_of(report)]; }

bool Embedding::has(std::string_view report) const {
    return std::find(reports_.begin(), reports_.end(), report) != reports_.end();
}

bool Embedding::injective() const {
    std::set<Vec> seen(points_.begin(), points_.end());
    return seen.size() == points_.size();
}

std::string point_label(const Vec& u) { return "(" + to_string(u, ",") + ")"; }

EmbeddedSurrogate conjugate_surrogate(const DiscreteLoss& loss) {
    auto check = check_non_redundant(loss);
    if (!check.ok()) {
        std::string names;
        for (const auto& r : check.failures) names += (names.empty() ? "" : ", ") + r;
        throw std::invalid_argument("loss is redundant; no unique-optimality witness for: " + names);
    }
    const std::size_t n = loss.num_outcomes();

    // Vertices q of all level sets, with the Bayes risk <q, l(r)> there.
    std::map<Vec, Rational> vertex_risk;
    for (std::size_t r = 0; r < loss.num_reports(); ++r) {
        for (auto& q : enumerate_vertices(level_set_polyhedron(loss, r))) {
            Rational value = dot(q, loss.row(r));
            auto [it, inserted] = vertex_risk.emplace(std::move(q), value);
            if (!inserted && it->second != value) throw std::logic_error("conjugate_surrogate: inconsistent vertex risk");
        }
    }
    for (std::size_t y = 0; y < n; ++y) {
        // The piece through e_y gives L(u)_y >= l(r)_y >= 0.
        if (!vertex_risk.count(unit(n, y))) throw std::logic_error("conjugate_surrogate: simplex vertex missing");
    }

    std::vector<std::vector<AffinePiece>> pieces(n);
    for (std::size_t y = 0; y < n; ++y) {
        for (const auto& [q, value] : vertex_risk) pieces[y].push_back({sub(q, unit(n, y)), value});
    }
    PolyhedralLoss surrogate(n, loss.outcomes(), std::move(pieces));

    Embedding phi;
    for (std::size_t r = 0; r < loss.num_reports(); ++r) {
        Vec u = scale(loss.row(r), -1);
        if (eval_loss(surrogate, u) != loss.row(r))
            throw std::logic_error("conjugate_surrogate: embedding check failed for '" + loss.report(r) + "'");
        phi.add(loss.report(r), std::move(u));
    }
    return {std::move(surrogate), std::move(phi)};
}

bool EmbeddingReport::verified() const {
    if (sgn(bayes_gap) != 0) return false;
    if (std::find(loss_match.begin(), loss_match.end(), false) != loss_match.end()) return false;
    for (const auto& row : optimality) {
        if (std::find(row.begin(), row.end(), false) != row.end()) return false;
    }
    return true;
}

EmbeddingReport verify_embedding(const PolyhedralLoss& surrogate, const DiscreteLoss& loss, const Embedding& phi,
                                 std::size_t m) {
    if (!phi.injective()) throw std::invalid_argument("verify_embedding: embedding is not injective");
    if (surrogate.outcomes() != loss.outcomes()) throw std::invalid_argument("verify_embedding: outcome spaces differ");
    std::vector<const Vec*> points;
    for (const auto& r : loss.reports()) {
        const Vec& u = phi.point(r);
        if (u.size() != surrogate.dim()) throw std::invalid_argument("verify_embedding: embedding dimension mismatch");
        points.push_back(&u);
    }

    EmbeddingReport report;
    for (std::size_t r = 0; r < loss.num_reports(); ++r)
        report.loss_match.push_back(eval_loss(surrogate, *points[r]) == loss.row(r));
    report.grid = simplex_grid(loss.num_outcomes(), m);
    report.bayes_gap = 0;
    for (const auto& p : report.grid) {
        auto surrogate_min = minimize_expected(surrogate, p);
        auto discrete = discrete_bayes_risk(loss, p);
        std::vector<bool> row(loss.num_reports());
        for (std::size_t r = 0; r < loss.num_reports(); ++r) {
            bool discrete_opt = std::binary_search(discrete.argmin.begin(), discrete.argmin.end(), r);
            row[r] = discrete_opt == surrogate_min.argmin.contains(*points[r]);
        }
        report.optimality.push_back(std::move(row));
        Rational gap = abs(surrogate_min.risk - discrete.value);
        if (gap > report.bayes_gap) report.bayes_gap = gap;
    }
    return report;
}

Rational bayes_risk_gap(const PolyhedralLoss& surrogate, const DiscreteLoss& loss, std::size_t m) {
    if (surrogate.num_outcomes() != loss.num_outcomes()) throw std::invalid_argument("bayes_risk_gap: outcome count mismatch");
    Rational worst = 0;
    for (const auto& p : simplex_grid(loss.num_outcomes(), m)) {
        Rational gap = abs(surrogate_bayes_risk(surrogate, p) - discrete_bayes_risk(loss, p).value);
        if (gap > worst) worst = gap;
    }
    return worst;
}

Extraction extract_embedded_loss(const PolyhedralLoss& surrogate, std::size_t m) {
    OptimalSetFamily family = enumerate_optimal_sets(surrogate, m);

    std::vector<std::string> names;
    std::vector<Vec> rows, points;
    std::set<Vec> seen;
    for (const auto& member : family.members) {
        Vec u = lex_min_point(member.set).value_or(member.point);
        Vec v = eval_loss(surrogate, u);
        if (!seen.insert(v).second) continue;
        names.push_back(point_label(u));
        rows.push_back(std::move(v));
        points.push_back(std::move(u));
    }
    DiscreteLoss candidates(surrogate.outcomes(), names, rows);
    auto check = check_non_redundant(candidates);

    std::vector<std::string> kept_names;
    std::vector<Vec> kept_rows;
    Embedding phi;
    for (std::size_t r = 0; r < names.size(); ++r) {
        if (!check.witnesses.count(names[r])) continue;
        kept_names.push_back(names[r]);
        kept_rows.push_back(rows[r]);
        phi.add(names[r], points[r]);
    }
    DiscreteLoss extracted(surrogate.outcomes(), kept_names, kept_rows);

    // risk_L is concave and risk_l is linear on each level set of l, so
    // agreement at the level-set vertices gives agreement everywhere.
    std::map<Vec, Rational> risk_cache;
    for (std::size_t r = 0; r < extracted.num_reports(); ++r) {
        for (const auto& q : enumerate_vertices(level_set_polyhedron(extracted, r))) {
            auto it = risk_cache.find(q);
            if (it == risk_cache.end()) it = risk_cache.emplace(q, surrogate_bayes_risk(surrogate, q)).first;
            if (it->second != dot(q, extracted.row(r))) {
                throw GridTooCoarse("optimal-set grid of denominator " + std::to_string(m) +
                                    " misses part of the Bayes risk (mismatch at q = " + point_label(q) + ")");
            }
        }
    }
    return {std::move(extracted), std::move(phi), std::move(family), m};
}

std::vector<std::size_t> trim_property(const std::vector<Polyhedron>& cells) {
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < cells.size() && !dominated; ++j) {
            if (i == j || !contains(cells[j], cells[i])) continue;
            // Strictly inside j, or equal to an earlier cell.
            dominated = !contains(cells[i], cells[j]) || j < i;
        }
        if (!dominated) kept.push_back(i);
    }
    return kept;
}

bool equal_up_to_relabeling(const DiscreteLoss& a, const DiscreteLoss& b) {
    if (a.outcomes() != b.outcomes()) return false;
    auto ra = a.matrix(), rb = b.matrix();
    std::sort(ra.begin(), ra.end());
    std::sort(rb.begin(), rb.end());
    return ra == rb;
}

}  // namespace forge
