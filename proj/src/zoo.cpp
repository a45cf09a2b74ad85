#include "forge/zoo.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace forge {

namespace {

std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        out.push_back(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) return out;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

std::string index_set_label(const std::vector<std::size_t>& idx) {
    std::string s = "{";
    for (std::size_t i = 0; i < idx.size(); ++i) s += (i ? "," : "") + std::to_string(idx[i] + 1);
    return s + "}";
}

Rational positive_part(const Rational& x) { return sgn(x) > 0 ? x : Rational(0); }

}  // namespace

OutcomeSpace binary_outcomes() { return OutcomeSpace({"+1", "-1"}); }

OutcomeSpace multiclass_outcomes(std::size_t n) {
    std::vector<std::string> labels;
    for (std::size_t y = 1; y <= n; ++y) labels.push_back("y" + std::to_string(y));
    return OutcomeSpace(std::move(labels));
}

DiscreteLoss zero_one(std::size_t n) {
    if (n < 2) throw std::invalid_argument("zero_one: n must be at least 2");
    OutcomeSpace outcomes = n == 2 ? binary_outcomes() : multiclass_outcomes(n);
    std::vector<Vec> rows;
    for (std::size_t r = 0; r < n; ++r) {
        Vec row(n, Rational(1));
        row[r] = 0;
        rows.push_back(std::move(row));
    }
    return DiscreteLoss(outcomes, outcomes.labels(), std::move(rows));
}

PolyhedralLoss hinge() {
    return PolyhedralLoss(1, binary_outcomes(),
                          {{{{-1}, 1}, {{0}, 0}},
                           {{{1}, 1}, {{0}, 0}}});
}

DiscreteLoss abstain_loss(std::size_t n, const Rational& alpha) {
    if (n < 2) throw std::invalid_argument("abstain_loss: n must be at least 2");
    if (sgn(alpha) <= 0 || alpha >= 1) throw std::invalid_argument("abstain_loss: alpha must lie in (0, 1)");
    OutcomeSpace outcomes = multiclass_outcomes(n);
    std::vector<std::string> reports = outcomes.labels();
    std::vector<Vec> rows;
    for (std::size_t r = 0; r < n; ++r) {
        Vec row(n, Rational(1));
        row[r] = 0;
        rows.push_back(std::move(row));
    }
    reports.push_back("abstain");
    rows.push_back(Vec(n, alpha));
    return DiscreteLoss(outcomes, std::move(reports), std::move(rows));
}

std::size_t abstain_dim(std::size_t n) {
    std::size_t d = 1;
    while ((std::size_t{1} << d) < n) ++d;
    return d;
}

std::vector<int> abstain_code(std::size_t n, std::size_t y) {
    if (y >= n) throw std::invalid_argument("abstain_code: label index out of range");
    const std::size_t d = abstain_dim(n);
    std::vector<int> code(d);
    for (std::size_t j = 0; j < d; ++j) code[j] = (y >> (d - 1 - j)) & 1 ? 1 : -1;
    return code;
}

PolyhedralLoss abstain_surrogate(std::size_t n) {
    if (n < 2) throw std::invalid_argument("abstain_surrogate: n must be at least 2");
    const std::size_t d = abstain_dim(n);
    std::vector<std::vector<AffinePiece>> pieces(n);
    for (std::size_t y = 0; y < n; ++y) {
        auto code = abstain_code(n, y);
        for (std::size_t j = 0; j < d; ++j) pieces[y].push_back({scale(unit(d, j), code[j]), 1});
        pieces[y].push_back({zeros(d), 0});
    }
    return PolyhedralLoss(d, multiclass_outcomes(n), std::move(pieces));
}

Embedding abstain_embedding(std::size_t n) {
    const std::size_t d = abstain_dim(n);
    Embedding phi;
    for (std::size_t y = 0; y < n; ++y) {
        auto code = abstain_code(n, y);
        Vec u(d);
        for (std::size_t j = 0; j < d; ++j) u[j] = -code[j];
        phi.add("y" + std::to_string(y + 1), std::move(u));
    }
    phi.add("abstain", zeros(d));
    return phi;
}

namespace {

std::string label_from_negated_signs(std::size_t n, const Vec& u) {
    const std::size_t d = abstain_dim(n);
    if (u.size() != d) throw std::invalid_argument("abstain link: dimension mismatch");
    std::size_t index = 0;
    for (std::size_t j = 0; j < d; ++j) {
        if (sgn(u[j]) <= 0) index |= std::size_t{1} << (d - 1 - j);  // sgn(-u_j) = +1, ties included
    }
    if (index >= n) throw std::domain_error("abstain link: sign pattern codes no label");
    return "y" + std::to_string(index + 1);
}

}  // namespace

std::string abstain_link_linf(std::size_t n, const Vec& u) {
    if (u.size() != abstain_dim(n)) throw std::invalid_argument("abstain link: dimension mismatch");
    for (const auto& x : u) {
        if (abs(x) <= Rational(1, 2)) return "abstain";
    }
    return label_from_negated_signs(n, u);
}

std::string abstain_link_l1(std::size_t n, const Vec& u) {
    if (u.size() != abstain_dim(n)) throw std::invalid_argument("abstain link: dimension mismatch");
    if (norm_l1(u) <= 1) return "abstain";
    return label_from_negated_signs(n, u);
}

// ------------------------------------------------------------ set functions

SetFunction::SetFunction(std::size_t k_, Vec values_) : k(k_), values(std::move(values_)) {
    if (k == 0 || k > 20) throw std::invalid_argument("set function ground set size must be in 1..20");
    if (values.size() != (std::size_t{1} << k)) throw std::invalid_argument("set function needs 2^k values");
    if (sgn(values[0]) != 0) throw std::invalid_argument("set function must be normalized (f(empty) = 0)");
}

SetFunction cardinality(std::size_t k) {
    Vec v(std::size_t{1} << k);
    for (std::uint32_t s = 0; s < v.size(); ++s) v[s] = __builtin_popcount(s);
    return SetFunction(k, std::move(v));
}

SetFunction indicator_nonempty(std::size_t k) {
    Vec v(std::size_t{1} << k, Rational(1));
    v[0] = 0;
    return SetFunction(k, std::move(v));
}

bool is_submodular(const SetFunction& f) {
    for (std::uint32_t s = 0; s <= f.full(); ++s) {
        for (std::size_t i = 0; i < f.k; ++i) {
            if (s & (1u << i)) continue;
            for (std::size_t j = i + 1; j < f.k; ++j) {
                if (s & (1u << j)) continue;
                if (f(s | 1u << i) + f(s | 1u << j) < f(s | 1u << i | 1u << j) + f(s)) return false;
            }
        }
    }
    return true;
}

bool is_increasing(const SetFunction& f) {
    for (std::uint32_t s = 0; s <= f.full(); ++s) {
        for (std::size_t i = 0; i < f.k; ++i) {
            if (!(s & (1u << i)) && f(s | 1u << i) < f(s)) return false;
        }
    }
    return true;
}

bool is_modular(const SetFunction& f) {
    for (std::uint32_t s = 0; s <= f.full(); ++s) {
        Rational sum = 0;
        for (std::size_t i = 0; i < f.k; ++i) {
            if (s & (1u << i)) sum += f(1u << i);
        }
        if (sum != f(s)) return false;
    }
    return true;
}

Rational lovasz_extension(const SetFunction& f, const Vec& w) {
    if (w.size() != f.k) throw std::invalid_argument("lovasz_extension: dimension mismatch");
    std::vector<std::size_t> order(f.k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return w[a] > w[b]; });
    Rational total = 0;
    std::uint32_t prefix = 0;
    for (std::size_t i : order) {
        std::uint32_t next = prefix | 1u << i;
        total += w[i] * (f(next) - f(prefix));
        prefix = next;
    }
    return total;
}

Rational mean_value(const SetFunction& f) {
    Rational total = 0;
    for (const auto& v : f.values) total += v;
    return total / Rational(f.values.size());
}

std::string sign_label(std::uint32_t mask, std::size_t k) {
    std::string s(k, '-');
    for (std::size_t i = 0; i < k; ++i) {
        if (mask & (1u << i)) s[i] = '+';
    }
    return s;
}

std::uint32_t set_of_sign_index(std::size_t j, std::size_t k) {
    std::uint32_t mask = 0;
    for (std::size_t i = 0; i < k; ++i) {
        if (!((j >> (k - 1 - i)) & 1)) mask |= 1u << i;
    }
    return mask;
}

std::size_t sign_index_of_set(std::uint32_t mask, std::size_t k) {
    std::size_t j = 0;
    for (std::size_t i = 0; i < k; ++i) {
        if (!(mask & (1u << i))) j |= std::size_t{1} << (k - 1 - i);
    }
    return j;
}

OutcomeSpace sign_outcomes(std::size_t k) {
    std::vector<std::string> labels;
    for (std::size_t j = 0; j < (std::size_t{1} << k); ++j) labels.push_back(sign_label(set_of_sign_index(j, k), k));
    return OutcomeSpace(std::move(labels));
}

DiscreteLoss lovasz_target_loss(const SetFunction& f) {
    const std::size_t n = std::size_t{1} << f.k;
    OutcomeSpace outcomes = sign_outcomes(f.k);
    std::vector<Vec> rows;
    for (std::size_t r = 0; r < n; ++r) {
        std::uint32_t a = set_of_sign_index(r, f.k);
        Vec row(n);
        for (std::size_t y = 0; y < n; ++y) row[y] = f(a ^ set_of_sign_index(y, f.k));
        rows.push_back(std::move(row));
    }
    return DiscreteLoss(outcomes, outcomes.labels(), std::move(rows));
}

DiscreteLoss hamming(std::size_t k) { return lovasz_target_loss(cardinality(k)); }

PolyhedralLoss lovasz_hinge(const SetFunction& f) {
    if (f.k > 5) throw std::invalid_argument("lovasz_hinge: k must be at most 5");
    if (!is_increasing(f)) throw std::invalid_argument("lovasz_hinge: only increasing set functions are supported");
    if (!is_submodular(f)) throw std::invalid_argument("lovasz_hinge: set function must be submodular");
    const std::size_t k = f.k;
    const std::size_t n = std::size_t{1} << k;

    // Greedy vectors s^pi: marginal gains along each ordering. With f
    // increasing they are nonnegative, so F(w_+) = max_pi max_A sum_{i in A} s_i w_i.
    std::vector<Vec> greedy;
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        Vec s(k);
        std::uint32_t prefix = 0;
        for (std::size_t i : perm) {
            s[i] = f(prefix | 1u << i) - f(prefix);
            prefix |= 1u << i;
        }
        greedy.push_back(std::move(s));
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::sort(greedy.begin(), greedy.end());
    greedy.erase(std::unique(greedy.begin(), greedy.end()), greedy.end());

    std::vector<std::vector<AffinePiece>> pieces(n);
    for (std::size_t y = 0; y < n; ++y) {
        std::uint32_t s_mask = set_of_sign_index(y, k);
        std::set<std::pair<Vec, Rational>> unique;
        for (const auto& s : greedy) {
            for (std::uint32_t clip = 0; clip < n; ++clip) {
                Vec slope = zeros(k);
                Rational intercept = 0;
                for (std::size_t i = 0; i < k; ++i) {
                    if (!(clip & (1u << i))) continue;
                    int chi = s_mask & (1u << i) ? 1 : -1;
                    slope[i] = -s[i] * chi;
                    intercept += s[i];
                }
                unique.emplace(std::move(slope), std::move(intercept));
            }
        }
        for (const auto& [slope, intercept] : unique) pieces[y].push_back({slope, intercept});
    }
    return PolyhedralLoss(k, sign_outcomes(k), std::move(pieces));
}

Vec lovasz_hinge_direct(const SetFunction& f, const Vec& u) {
    if (u.size() != f.k) throw std::invalid_argument("lovasz_hinge_direct: dimension mismatch");
    const std::size_t n = std::size_t{1} << f.k;
    Vec out(n);
    for (std::size_t y = 0; y < n; ++y) {
        std::uint32_t s_mask = set_of_sign_index(y, f.k);
        Vec w(f.k);
        for (std::size_t i = 0; i < f.k; ++i) {
            Rational chi = s_mask & (1u << i) ? 1 : -1;
            w[i] = positive_part(1 - u[i] * chi);
        }
        out[y] = lovasz_extension(f, w);
    }
    return out;
}

std::string restricted_label(std::uint32_t a, std::uint32_t b, std::size_t k) {
    std::string s(k, '-');
    for (std::size_t i = 0; i < k; ++i) {
        if (a & (1u << i)) s[i] = '+';
        if (b & (1u << i)) s[i] = '0';
    }
    return s;
}

Vec restricted_point(std::uint32_t a, std::uint32_t b, std::size_t k) {
    Vec u(k);
    for (std::size_t i = 0; i < k; ++i) u[i] = (a & (1u << i)) ? 1 : (b & (1u << i)) ? 0 : -1;
    return u;
}

DiscreteLoss restricted_lovasz_loss(const SetFunction& f) {
    const std::size_t k = f.k;
    const std::size_t n = std::size_t{1} << k;
    std::vector<std::string> reports;
    std::vector<Vec> rows;
    for (std::uint32_t a = 0; a < n; ++a) {
        for (std::uint32_t b = 0; b < n; ++b) {
            if (a & b) continue;
            Vec row(n);
            for (std::size_t y = 0; y < n; ++y) {
                std::uint32_t d = a ^ set_of_sign_index(y, k);
                row[y] = f(d & ~b) + f(d | b);
            }
            reports.push_back(restricted_label(a, b, k));
            rows.push_back(std::move(row));
        }
    }
    return DiscreteLoss(sign_outcomes(k), std::move(reports), std::move(rows));
}

std::string sign_link(const Vec& u) {
    std::string s(u.size(), '-');
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (sgn(u[i]) >= 0) s[i] = '+';
    }
    return s;
}

LovaszWitness lovasz_inconsistency_witness(const SetFunction& f) {
    if (!is_increasing(f) || !is_submodular(f))
        throw std::invalid_argument("lovasz_inconsistency_witness: f must be increasing and submodular");
    for (std::size_t i = 0; i < f.k; ++i) {
        if (sgn(f(1u << i)) <= 0) throw std::invalid_argument("lovasz_inconsistency_witness: f({i}) must be positive");
    }
    if (is_modular(f)) throw std::invalid_argument("lovasz_inconsistency_witness: f is modular, so no witness exists");
    const std::size_t k = f.k;
    const std::size_t n = std::size_t{1} << k;

    LovaszWitness w;
    w.fbar = mean_value(f);
    w.f_full = f(f.full());
    w.epsilon = (2 * w.fbar - w.f_full) / (4 * w.fbar);
    w.p = Vec(n, (1 - w.epsilon) / Rational(n));
    w.p[sign_index_of_set(0, k)] += w.epsilon;

    DiscreteLoss restricted = restricted_lovasz_loss(f);
    bool first = true;
    for (std::uint32_t a = 0; a < n; ++a) {
        Rational v = expected_discrete_loss(restricted, restricted_label(a, 0, k), w.p);
        if (first || v < w.min_unabstained) w.min_unabstained = v;
        first = false;
    }
    w.abstain_all = expected_discrete_loss(restricted, restricted_label(0, f.full(), k), w.p);

    auto risk = discrete_bayes_risk(restricted, w.p);
    bool found = false;
    for (std::uint32_t a = 0; a < n && !found; ++a) {
        for (std::uint32_t b = 1; b < n && !found; ++b) {
            if (a & b) continue;
            std::size_t r = restricted.report_index(restricted_label(a, b, k));
            if (std::binary_search(risk.argmin.begin(), risk.argmin.end(), r)) {
                w.optimal_report = restricted_label(a, b, k);
                w.u = restricted_point(a, b, k);
                found = true;
            }
        }
    }
    if (!found) return w;

    PolyhedralLoss surrogate = lovasz_hinge(f);
    w.surrogate_risk = surrogate_bayes_risk(surrogate, w.p);
    w.value_at_u = expected_surrogate_loss(surrogate, w.u, w.p);
    DiscreteLoss target = lovasz_target_loss(f);
    for (std::size_t r : discrete_bayes_risk(target, w.p).argmin) w.target_optimal.push_back(target.report(r));
    w.linked = sign_link(w.u);
    const std::string empty_report = sign_label(0, k);
    w.verified = w.min_unabstained > w.f_full && w.abstain_all == w.f_full && w.value_at_u == w.surrogate_risk &&
                 w.target_optimal == std::vector<std::string>{empty_report} && w.linked != empty_report;
    return w;
}

// ------------------------------------------------------------ top-k

DiscreteLoss top_k_loss(std::size_t n, std::size_t k) {
    if (k <= 1 || k >= n) throw std::invalid_argument("top_k_loss: need 1 < k < n");
    std::vector<std::string> reports;
    std::vector<Vec> rows;
    for (const auto& idx : combinations(n, k)) {
        Vec row(n, Rational(1));
        for (std::size_t i : idx) row[i] = 0;
        reports.push_back(index_set_label(idx));
        rows.push_back(std::move(row));
    }
    return DiscreteLoss(multiclass_outcomes(n), std::move(reports), std::move(rows));
}

PolyhedralLoss top_k_surrogate(std::size_t n, std::size_t k) {
    if (k <= 1 || k >= n) throw std::invalid_argument("top_k_surrogate: need 1 < k < n");
    const Rational inv_k(1, static_cast<unsigned long>(k));
    std::vector<std::vector<AffinePiece>> pieces(n);
    for (std::size_t y = 0; y < n; ++y) {
        for (const auto& idx : combinations(n, k)) {
            Vec slope = scale(unit(n, y), -1);
            Rational intercept = 1;
            for (std::size_t i : idx) {
                slope[i] += inv_k;
                if (i == y) intercept -= inv_k;
            }
            pieces[y].push_back({std::move(slope), intercept});
        }
        pieces[y].push_back({zeros(n), 0});
    }
    return PolyhedralLoss(n, multiclass_outcomes(n), std::move(pieces));
}

Rational top_k_direct(const Vec& u, std::size_t y, std::size_t k) {
    Vec shifted = u;
    shifted.at(y) -= 1;
    std::sort(shifted.begin(), shifted.end(), [](const Rational& a, const Rational& b) { return a > b; });
    Rational top = 0;
    for (std::size_t i = 0; i < k; ++i) top += shifted.at(i);
    return positive_part(1 - u[y] + top / Rational(static_cast<unsigned long>(k)));
}

std::string top_k_link(const Vec& u, std::size_t k) {
    if (k == 0 || k > u.size()) throw std::invalid_argument("top_k_link: k out of range");
    std::vector<std::size_t> order(u.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return u[a] > u[b]; });
    order.resize(k);
    std::sort(order.begin(), order.end());
    return index_set_label(order);
}

DiscreteLoss embedded_top2_loss() {
    std::vector<Vec> reports_points;
    for (Vec base : {Vec{1, 0, 0}, Vec{1, 1, 0}, Vec{2, 1, 0}}) {
        std::sort(base.begin(), base.end());
        do {
            reports_points.push_back(base);
        } while (std::next_permutation(base.begin(), base.end()));
    }
    std::vector<std::string> names;
    std::vector<Vec> rows;
    for (const auto& r : reports_points) {
        Rational total = r[0] + r[1] + r[2];
        Vec row(3);
        for (std::size_t y = 0; y < 3; ++y) row[y] = r[y] == 2 ? Rational(0) : 1 - r[y] + (total - r[y]) / 2;
        names.push_back(point_label(r));
        rows.push_back(std::move(row));
    }
    return DiscreteLoss(multiclass_outcomes(3), std::move(names), std::move(rows));
}

RefinementResult refinement_check(const FiniteProperty& fine, const FiniteProperty& coarse) {
    if (fine.num_outcomes != coarse.num_outcomes) throw std::invalid_argument("refinement_check: outcome spaces differ");
    for (std::size_t i = 0; i < fine.cells.size(); ++i) {
        auto deep = deepest_point(fine.cells[i]);
        if (!deep || sgn(deep->slack) <= 0) continue;  // not full-dimensional
        bool inside = std::any_of(coarse.cells.begin(), coarse.cells.end(),
                                  [&](const Polyhedron& c) { return contains(c, fine.cells[i]); });
        if (!inside) return {false, fine.reports[i], deep->point};
    }
    return {};
}

}  // namespace forge
