#include "forge/polyhedral.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace forge {

PolyhedralLoss::PolyhedralLoss(std::size_t d, OutcomeSpace outcomes, std::vector<std::vector<AffinePiece>> pieces)
    : d_(d), outcomes_(std::move(outcomes)), pieces_(std::move(pieces)) {
    if (d_ == 0) throw std::invalid_argument("polyhedral loss dimension must be at least 1");
    if (pieces_.size() != outcomes_.size()) throw std::invalid_argument("need one piece list per outcome");
    for (const auto& list : pieces_) {
        if (list.empty()) throw std::invalid_argument("every outcome needs at least one affine piece");
        for (const auto& piece : list) {
            if (piece.a.size() != d_) throw std::invalid_argument("affine piece slope has the wrong dimension");
        }
    }
}

Vec eval_loss(const PolyhedralLoss& loss, const Vec& u) {
    if (u.size() != loss.dim()) throw std::invalid_argument("eval_loss: dimension mismatch");
    Vec out(loss.num_outcomes());
    for (std::size_t y = 0; y < loss.num_outcomes(); ++y) {
        const auto& list = loss.pieces(y);
        Rational best = list.front().eval(u);
        for (std::size_t c = 1; c < list.size(); ++c) {
            Rational v = list[c].eval(u);
            if (v > best) best = v;
        }
        out[y] = best;
    }
    return out;
}

Rational expected_surrogate_loss(const PolyhedralLoss& loss, const Vec& u, const Vec& p) {
    return dot(p, eval_loss(loss, u));
}

namespace {

bool is_zero(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](const Rational& x) { return sgn(x) == 0; });
}

// Pieces of each support outcome that stay tight on the whole optimal face.
// The active set at a relative-interior point of the face is exactly this
// set, so outcomes with one active piece at u* need no further work.
std::vector<std::vector<std::size_t>> face_tight_pieces(const PolyhedralLoss& loss, const Vec& p,
                                                        const std::vector<std::size_t>& support, const Vec& u_star,
                                                        const Rational& risk) {
    const std::size_t d = loss.dim();
    std::vector<std::vector<std::size_t>> active(support.size());
    bool ambiguous = false;
    for (std::size_t k = 0; k < support.size(); ++k) {
        const auto& list = loss.pieces(support[k]);
        Rational best = list.front().eval(u_star);
        std::vector<Rational> vals;
        for (const auto& piece : list) {
            vals.push_back(piece.eval(u_star));
            if (vals.back() > best) best = vals.back();
        }
        for (std::size_t c = 0; c < list.size(); ++c) {
            if (vals[c] == best) active[k].push_back(c);
        }
        if (active[k].size() > 1) ambiguous = true;
    }
    if (!ambiguous) return active;

    // Homogenized face: (u~, t~, tau) with tau >= 1 represents u~/tau on the
    // optimal face. Each candidate gets w <= its slack, 0 <= w <= 1. Scaling a
    // relative-interior point makes every non-tight slack at least 1, so at
    // the optimum w = 1 exactly on pieces that are slack somewhere.
    struct Candidate {
        std::size_t k, c;
    };
    std::vector<Candidate> cands;
    for (std::size_t k = 0; k < support.size(); ++k) {
        if (active[k].size() > 1) {
            for (std::size_t c : active[k]) cands.push_back({k, c});
        }
    }
    const std::size_t nt = support.size();
    const std::size_t tau = d + nt;
    const std::size_t w0 = tau + 1;
    const std::size_t nv = w0 + cands.size();
    LinearProgram lp(nv);
    for (std::size_t k = 0; k < nt; ++k) {
        for (const auto& piece : loss.pieces(support[k])) {
            Vec row(nv, Rational(0));
            for (std::size_t i = 0; i < d; ++i) row[i] = piece.a[i];
            row[d + k] = -1;
            row[tau] = piece.b;
            lp.add(std::move(row), Relation::LessEq, 0);
        }
    }
    {
        Vec row(nv, Rational(0));
        for (std::size_t k = 0; k < nt; ++k) row[d + k] = p[support[k]];
        row[tau] = -risk;
        lp.add(std::move(row), Relation::LessEq, 0);
    }
    lp.add(unit(nv, tau), Relation::GreaterEq, 1);
    for (std::size_t j = 0; j < cands.size(); ++j) {
        const auto& piece = loss.pieces(support[cands[j].k])[cands[j].c];
        Vec row(nv, Rational(0));
        for (std::size_t i = 0; i < d; ++i) row[i] = piece.a[i];
        row[d + cands[j].k] = -1;
        row[tau] = piece.b;
        row[w0 + j] = 1;
        lp.add(std::move(row), Relation::LessEq, 0);
        lp.require_nonnegative(w0 + j);
        lp.add(unit(nv, w0 + j), Relation::LessEq, 1);
    }
    lp.objective.assign(nv, Rational(0));
    for (std::size_t j = 0; j < cands.size(); ++j) lp.objective[w0 + j] = 1;
    lp.sense = Sense::Maximize;
    auto res = lp_solve(lp);
    if (!res.optimal()) throw std::logic_error("face_tight_pieces: homogenized face LP failed");

    std::vector<std::vector<std::size_t>> tight(support.size());
    for (std::size_t k = 0; k < support.size(); ++k) {
        if (active[k].size() == 1) tight[k] = active[k];
    }
    for (std::size_t j = 0; j < cands.size(); ++j) {
        if (sgn(res.point[w0 + j]) == 0) tight[cands[j].k].push_back(cands[j].c);
    }
    for (const auto& t : tight) {
        if (t.empty()) throw std::logic_error("face_tight_pieces: outcome with no face-tight piece");
    }
    return tight;
}

}  // namespace

ExpectedMinimum minimize_expected(const PolyhedralLoss& loss, const Vec& p) {
    validate_distribution(p, loss.num_outcomes());
    const std::size_t d = loss.dim();
    std::vector<std::size_t> support;
    for (std::size_t y = 0; y < p.size(); ++y) {
        if (sgn(p[y]) > 0) support.push_back(y);
    }
    const std::size_t nt = support.size();
    LinearProgram lp(d + nt);
    for (std::size_t k = 0; k < nt; ++k) {
        for (const auto& piece : loss.pieces(support[k])) {
            Vec row(d + nt, Rational(0));
            for (std::size_t i = 0; i < d; ++i) row[i] = piece.a[i];
            row[d + k] = -1;
            lp.add(std::move(row), Relation::LessEq, -piece.b);
        }
    }
    lp.objective.assign(d + nt, Rational(0));
    for (std::size_t k = 0; k < nt; ++k) lp.objective[d + k] = p[support[k]];
    auto res = lp_solve(lp);
    if (res.status == LpStatus::Unbounded) throw std::domain_error("expected loss is unbounded below");
    if (!res.optimal()) throw std::logic_error("minimize_expected: LP infeasible");

    ExpectedMinimum out{res.value, Polyhedron(d), {}, Vec(res.point.begin(), res.point.begin() + static_cast<std::ptrdiff_t>(d))};
    auto tight = face_tight_pieces(loss, p, support, out.point, out.risk);

    std::set<std::pair<Vec, Rational>> seen_ineq, seen_eq;
    for (std::size_t k = 0; k < nt; ++k) {
        const auto& list = loss.pieces(support[k]);
        const auto& ref = list[tight[k].front()];
        for (std::size_t c : tight[k]) out.signature.emplace_back(support[k], c);
        std::vector<bool> is_tight(list.size(), false);
        for (std::size_t c : tight[k]) is_tight[c] = true;
        for (std::size_t c = 0; c < list.size(); ++c) {
            if (c == tight[k].front()) continue;
            Vec normal = sub(list[c].a, ref.a);
            Rational offset = ref.b - list[c].b;
            if (is_zero(normal)) continue;  // constant gap; consistent by optimality
            if (is_tight[c]) {
                if (seen_eq.emplace(normal, offset).second) out.argmin.add_equality(std::move(normal), std::move(offset));
            } else {
                if (seen_ineq.emplace(normal, offset).second) out.argmin.add_inequality(std::move(normal), std::move(offset));
            }
        }
    }
    std::sort(out.signature.begin(), out.signature.end());
    return out;
}

Rational surrogate_bayes_risk(const PolyhedralLoss& loss, const Vec& p) { return minimize_expected(loss, p).risk; }

OptimalSetFamily enumerate_optimal_sets(const PolyhedralLoss& loss, std::size_t m) {
    OptimalSetFamily family;
    std::set<Signature> seen;
    for (const auto& p : simplex_grid(loss.num_outcomes(), m)) {
        auto minimum = minimize_expected(loss, p);
        if (!seen.insert(minimum.signature).second) continue;
        bool duplicate = false;
        for (const auto& member : family.members) {
            if (contains(member.set, minimum.argmin) && contains(minimum.argmin, member.set)) {
                duplicate = true;
                break;
            }
        }
        if (duplicate) continue;
        family.members.push_back({std::move(minimum.argmin), p, std::move(minimum.signature), std::move(minimum.point)});
    }
    return family;
}

std::vector<Vec> box_grid(std::size_t d, const Rational& lo, const Rational& hi, const Rational& step) {
    if (sgn(step) <= 0) throw std::invalid_argument("box_grid: step must be positive");
    if (hi < lo) throw std::invalid_argument("box_grid: empty box");
    std::vector<Rational> axis;
    for (Rational x = lo; x <= hi; x += step) axis.push_back(x);
    std::vector<Vec> out;
    std::vector<std::size_t> idx(d, 0);
    while (true) {
        Vec u(d);
        for (std::size_t i = 0; i < d; ++i) u[i] = axis[idx[i]];
        out.push_back(std::move(u));
        std::size_t i = d;
        while (i > 0) {
            --i;
            if (++idx[i] < axis.size()) break;
            idx[i] = 0;
            if (i == 0) return out;
        }
    }
}

namespace {

// Extreme points of sum_y p_y conv(active slopes of outcome y at u).
std::vector<Vec> subdifferential_vertices(const PolyhedralLoss& loss, const Vec& p, const Vec& u) {
    const std::size_t d = loss.dim();
    std::vector<Vec> sums{zeros(d)};
    for (std::size_t y = 0; y < loss.num_outcomes(); ++y) {
        const auto& list = loss.pieces(y);
        Rational best = list.front().eval(u);
        for (const auto& piece : list) {
            Rational v = piece.eval(u);
            if (v > best) best = v;
        }
        std::set<Vec> slopes;
        for (const auto& piece : list) {
            if (piece.eval(u) == best) slopes.insert(piece.a);
        }
        std::set<Vec> next;
        for (const auto& s : sums) {
            for (const auto& g : slopes) next.insert(add(s, scale(g, p[y])));
        }
        sums.assign(next.begin(), next.end());
    }
    if (sums.size() <= 2) return sums;
    std::vector<Vec> extreme;
    for (std::size_t i = 0; i < sums.size(); ++i) {
        // sums[i] is not extreme iff it is a convex combination of the others.
        const std::size_t k = sums.size() - 1;
        LinearProgram lp(k);
        for (std::size_t j = 0; j < k; ++j) lp.require_nonnegative(j);
        lp.add(Vec(k, Rational(1)), Relation::Equal, 1);
        for (std::size_t c = 0; c < d; ++c) {
            Vec row;
            for (std::size_t j = 0; j < sums.size(); ++j) {
                if (j != i) row.push_back(sums[j][c]);
            }
            lp.add(std::move(row), Relation::Equal, sums[i][c]);
        }
        if (!lp_solve(lp).optimal()) extreme.push_back(sums[i]);
    }
    return extreme;
}

std::vector<std::size_t> cell_labels(const PolyhedralLoss& loss, const Vec& p, const std::vector<Vec>& grid) {
    std::map<std::vector<Vec>, std::size_t> ids;
    std::vector<std::size_t> labels;
    for (const auto& u : grid) {
        auto key = subdifferential_vertices(loss, p, u);
        auto [it, inserted] = ids.emplace(std::move(key), ids.size());
        labels.push_back(it->second);
    }
    return labels;
}

}  // namespace

bool check_diagram_invariance(const PolyhedralLoss& loss, const Vec& p, const Vec& p_prime, const Rational& radius,
                              const Rational& step) {
    validate_distribution(p, loss.num_outcomes());
    validate_distribution(p_prime, loss.num_outcomes());
    for (std::size_t y = 0; y < p.size(); ++y) {
        if (sgn(p[y]) == 0 || sgn(p_prime[y]) == 0)
            throw std::invalid_argument("check_diagram_invariance: distributions must be strictly positive");
    }
    auto grid = box_grid(loss.dim(), -radius, radius, step);
    return cell_labels(loss, p, grid) == cell_labels(loss, p_prime, grid);
}

}  // namespace forge
