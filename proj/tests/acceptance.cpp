// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.
// Every comparison is exact rational equality; the only tolerances are the
// wall-clock budgets of criteria 1 and 5.

#include "forge/embedding.hpp"
#include "forge/link.hpp"
#include "forge/polyhedral.hpp"
#include "forge/zoo.hpp"
#include "oracles.hpp"
#include "set_functions.hpp"
#include "support.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

using namespace forge;
using forge::testing::frac;
using forge::testing::Gen;

namespace {

constexpr double kConjugateBudgetSeconds = 30;
constexpr double kScanBudgetSeconds = 120;

// Collects failed expectations for one criterion.
class Checker {
public:
    void expect(bool ok, const std::string& what) {
        if (!ok && failures_.size() < 5) failures_.push_back(what);
        if (!ok) ++failed_;
    }
    bool ok() const { return failed_ == 0; }
    std::string failures() const {
        std::string s;
        for (const auto& f : failures_) s += "\n    " + f;
        if (failed_ > failures_.size()) s += "\n    ... " + std::to_string(failed_ - failures_.size()) + " more";
        return s;
    }
    std::string detail;

private:
    std::vector<std::string> failures_;
    std::size_t failed_ = 0;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string seconds(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1fs", s);
    return buf;
}

Extraction extract_doubling(const PolyhedralLoss& L, std::size_t m) {
    for (;; m *= 2) {
        try {
            return extract_embedded_loss(L, m);
        } catch (const GridTooCoarse&) {
            if (m >= 64) throw;
        }
    }
}

std::vector<std::pair<std::string, DiscreteLoss>> conjugate_instances() {
    return {{"zero-one n=2", zero_one(2)},
            {"zero-one n=3", zero_one(3)},
            {"abstain n=3", abstain_loss(3, frac(1, 2))},
            {"abstain n=4", abstain_loss(4, frac(1, 2))},
            {"top-2 n=3", top_k_loss(3, 2)}};
}

void criterion_1(Checker& c) {
    auto t0 = std::chrono::steady_clock::now();
    for (const auto& [name, loss] : conjugate_instances()) {
        auto s = conjugate_surrogate(loss);
        Rational gap = bayes_risk_gap(s.loss, loss, 12);
        c.expect(gap == 0, name + ": bayes gap " + to_string(gap));
    }
    double t = seconds_since(t0);
    c.expect(t < kConjugateBudgetSeconds, "runtime " + seconds(t));
    c.detail = "5 losses, gap 0 at m=12 in " + seconds(t);
}

void criterion_2(Checker& c) {
    for (const auto& [name, loss] : conjugate_instances()) {
        auto s = conjugate_surrogate(loss);
        auto x = extract_doubling(s.loss, 4);
        c.expect(equal_up_to_relabeling(x.loss, loss), name + ": extracted loss differs");
    }
    c.detail = "5 roundtrips exact up to relabeling";
}

// Gamma_hinge(p) for p = P(+1), written out by hand.
bool hinge_optimal(const Rational& p_plus, const Rational& u) {
    if (p_plus == 0) return u <= -1;
    if (p_plus == 1) return u >= 1;
    if (p_plus < frac(1, 2)) return u == -1;
    if (p_plus > frac(1, 2)) return u == 1;
    return -1 <= u && u <= 1;
}

void criterion_3(Checker& c) {
    auto x = extract_embedded_loss(hinge(), 4);
    auto rows = x.loss.matrix();
    std::sort(rows.begin(), rows.end());
    c.expect(rows == std::vector<Vec>{{0, 2}, {2, 0}}, "hinge extraction rows");

    auto h = hinge();
    for (const auto& p_plus : {Rational(0), frac(1, 4), frac(1, 2), frac(3, 4), Rational(1)}) {
        auto m = minimize_expected(h, {p_plus, 1 - p_plus});
        c.expect(m.risk == 2 * std::min(p_plus, Rational(1 - p_plus)), "risk at p+ = " + to_string(p_plus));
        for (const auto& u : box_grid(1, -4, 4, frac(1, 8)))
            c.expect(m.argmin.contains(u) == hinge_optimal(p_plus, u[0]),
                     "argmin at p+ = " + to_string(p_plus) + ", u = " + to_string(u[0]));
    }
    c.detail = "rows {(0,2),(2,0)}; five argmin cases match on [-4,4] step 1/8";
}

void criterion_4(Checker& c) {
    auto family = enumerate_optimal_sets(abstain_surrogate(4), 8);
    auto linf_cert = max_valid_epsilon(family, Norm::LInf, default_epsilon_ladder());
    auto l1_cert = max_valid_epsilon(family, Norm::L1, default_epsilon_ladder());
    c.expect(linf_cert.epsilon == frac(1, 2), "linf epsilon " + to_string(linf_cert.epsilon));
    c.expect(l1_cert.epsilon == 1, "l1 epsilon " + to_string(l1_cert.epsilon));

    auto build = [&](Norm norm, const Rational& eps) {
        return Link({norm, eps, family, abstain_embedding(4), {}});
    };
    auto linf = build(Norm::LInf, linf_cert.epsilon);
    auto l1 = build(Norm::L1, l1_cert.epsilon);
    Gen gen(4);
    std::size_t compared_linf = 0, compared_l1 = 0, disagreements = 0;
    for (int i = 0; i < 10000; ++i) {
        Vec u = gen.vec(2, 3, 16);
        bool on_axis = sgn(u[0]) == 0 || sgn(u[1]) == 0;
        bool boundary_linf = on_axis || abs(u[0]) == frac(1, 2) || abs(u[1]) == frac(1, 2);
        bool boundary_l1 = on_axis || abs(u[0]) + abs(u[1]) == 1;
        if (!boundary_linf) {
            ++compared_linf;
            if (linf(u) != abstain_link_linf(4, u)) ++disagreements;
        }
        if (!boundary_l1) {
            ++compared_l1;
            if (l1(u) != abstain_link_l1(4, u)) ++disagreements;
        }
    }
    c.expect(disagreements == 0, std::to_string(disagreements) + " disagreements");
    c.detail = "eps 1/2 (linf), 1 (l1); " + std::to_string(compared_linf) + " + " + std::to_string(compared_l1) +
               " off-boundary points, " + std::to_string(disagreements) + " disagreements";
}

void criterion_5(Checker& c) {
    auto t0 = std::chrono::steady_clock::now();
    auto L = abstain_surrogate(4);
    auto target = abstain_loss(4, frac(1, 2)).scaled(2);
    LinkFunction psi = [](const Vec& u) { return abstain_link_l1(4, u); };
    auto audit = calibration_scan(L, psi, target, 8, symmetric_grid(2, 3, frac(1, 8)));
    double t = seconds_since(t0);
    c.expect(audit.min_gap.has_value() && sgn(*audit.min_gap) > 0, "min gap not positive");
    c.expect(audit.violations == 0, std::to_string(audit.violations) + " violations");
    c.expect(t < kScanBudgetSeconds, "runtime " + seconds(t));
    c.detail = std::to_string(audit.entries.size()) + " distributions, min gap " +
               (audit.min_gap ? to_string(*audit.min_gap) : std::string("none")) + ", " +
               std::to_string(audit.violations) + " violations in " + seconds(t);
}

bool in_argmin(const DiscreteLoss& loss, const Vec& p, const std::string& report) {
    auto risk = discrete_bayes_risk(loss, p);
    std::size_t r = loss.report_index(report);
    return std::find(risk.argmin.begin(), risk.argmin.end(), r) != risk.argmin.end();
}

Rational mean_by_hand(const SetFunction& f) {
    Rational total = 0;
    for (const auto& v : f.values) total += v;
    return total / Rational(static_cast<long>(f.values.size()));
}

void criterion_6(Checker& c) {
    // (a) g = 1 on nonempty sets, k = 2.
    auto g = indicator_nonempty(2);
    auto L = lovasz_hinge(g);
    auto target = lovasz_target_loss(g);
    Vec p{frac(1, 5), frac(1, 5), frac(1, 5), frac(2, 5)};
    Vec zero{0, 0};
    c.expect(dot(p, lovasz_hinge_direct(g, zero)) == surrogate_bayes_risk(L, p), "u = 0 is not surrogate-optimal");
    c.expect(sign_link(zero) == "++", "sign link at 0 is " + sign_link(zero));
    auto gamma = discrete_bayes_risk(target, p).argmin;
    c.expect(gamma.size() == 1 && target.report(gamma[0]) == "--", "gamma(p) is not {--}");
    c.expect(!in_argmin(target, p, "++"), "++ is optimal at p");
    LinkFunction sign = [](const Vec& u) { return sign_link(u); };
    auto entry = calibration_audit(L, sign, target, p, symmetric_grid(2, 2, frac(1, 4)));
    c.expect(entry.violation && sgn(entry.gap) == 0, "audit did not certify the violation");

    // (b) modular f: no violation.
    Gen gen(6);
    std::size_t modular_violations = 0;
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t k = static_cast<std::size_t>(gen.integer(1, 3));
        auto f = testing::random_modular(gen, k);
        auto audit = calibration_scan(lovasz_hinge(f), sign, lovasz_target_loss(f), 6, symmetric_grid(k, 2, frac(1, 4)));
        modular_violations += audit.violations;
    }
    c.expect(modular_violations == 0, std::to_string(modular_violations) + " violations for modular f");

    // (c) non-modular submodular increasing f: the witness re-checks exactly.
    std::size_t verified = 0;
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t k = static_cast<std::size_t>(gen.integer(2, 3));
        auto f = testing::random_coverage(gen, k, true);
        if (is_modular(f)) {
            c.expect(false, "generator produced a modular f");
            continue;
        }
        auto w = lovasz_inconsistency_witness(f);
        Rational fbar = mean_by_hand(f);
        Rational total = 0;
        for (const auto& x : w.p) total += x;
        bool ok = w.verified && total == 1 && w.epsilon == (2 * fbar - f(f.full())) / (4 * fbar) &&
                  dot(w.p, lovasz_hinge_direct(f, w.u)) == surrogate_bayes_risk(lovasz_hinge(f), w.p) &&
                  sign_link(w.u) == w.linked && !in_argmin(lovasz_target_loss(f), w.p, w.linked);
        c.expect(ok, "witness " + std::to_string(trial) + " fails re-verification");
        verified += ok;
    }
    c.detail = "violation at u=0 (++ vs {--}); 20 modular scans, " + std::to_string(modular_violations) +
               " violations; " + std::to_string(verified) + "/20 witnesses verified";
}

std::vector<Vec> cube_lattice(std::size_t k) {
    std::vector<Vec> out{{}};
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<Vec> next;
        for (const auto& v : out)
            for (int x = -1; x <= 1; ++x) {
                Vec w = v;
                w.push_back(x);
                next.push_back(w);
            }
        out = std::move(next);
    }
    return out;
}

bool modular_by_hand(const SetFunction& f) {
    for (std::uint32_t s = 0; s <= f.full(); ++s) {
        Rational sum = 0;
        for (std::size_t i = 0; i < f.k; ++i)
            if (s & (1u << i)) sum += f(1u << i);
        if (f(s) != sum) return false;
    }
    return true;
}

void criterion_7(Checker& c) {
    Gen gen(7);
    std::size_t restricted_checks = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t k = static_cast<std::size_t>(gen.integer(1, 3));
        auto f = gen.coin() ? testing::random_modular(gen, k) : testing::random_coverage(gen, k, gen.coin());
        auto p = gen.distribution(std::size_t{1} << k, 12, false);
        Rational best;
        bool first = true;
        for (const auto& u : cube_lattice(k)) {
            Rational v = dot(p, lovasz_hinge_direct(f, u));
            if (first || v < best) best = v;
            first = false;
        }
        c.expect(best == surrogate_bayes_risk(lovasz_hinge(f), p), "lattice min differs from LP, trial " + std::to_string(trial));

        auto R = restricted_lovasz_loss(f);
        for (std::uint32_t a = 0; a <= f.full(); ++a)
            for (std::size_t y = 0; y < R.num_outcomes(); ++y) {
                c.expect(R.row(R.report_index(restricted_label(a, 0, k)))[y] == 2 * f(a ^ set_of_sign_index(y, k)),
                         "restricted loss B = {} mismatch");
                ++restricted_checks;
            }
    }
    std::size_t modular = 0, strict = 0;
    for (int trial = 0; trial < 500; ++trial) {
        std::size_t k = static_cast<std::size_t>(gen.integer(1, 4));
        auto f = gen.integer(0, 3) == 0 ? testing::random_modular(gen, k) : testing::random_coverage(gen, k, gen.coin());
        Rational fbar = mean_by_hand(f);
        c.expect(mean_value(f) == fbar, "mean value");
        c.expect(2 * fbar >= f(f.full()), "fbar below f(N)/2");
        bool mod = modular_by_hand(f);
        c.expect((2 * fbar == f(f.full())) == mod, "equality case does not match modularity");
        (mod ? modular : strict)++;
    }
    c.expect(modular > 0 && strict > 0, "bound sample lacks one of the cases");
    c.detail = "100 lattice/LP pairs; 500 fbar bounds (" + std::to_string(modular) + " modular); " +
               std::to_string(restricted_checks) + " restricted entries";
}

// (1 - u_y + (1/k) * sum of the k largest entries of u - e_y)_+
Rational top_k_by_hand(const Vec& u, std::size_t y, std::size_t k) {
    Vec v = u;
    v[y] -= 1;
    std::sort(v.begin(), v.end(), [](const Rational& a, const Rational& b) { return a > b; });
    Rational s = 0;
    for (std::size_t i = 0; i < k; ++i) s += v[i];
    Rational value = 1 - u[y] + s / Rational(static_cast<long>(k));
    return sgn(value) > 0 ? value : Rational(0);
}

Vec point_from_label(const std::string& label) {
    Vec out;
    std::stringstream in(label.substr(1, label.size() - 2));
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(parse_rational(item));
    return out;
}

void criterion_8(Checker& c) {
    Gen gen(8);
    std::size_t compared = 0;
    for (int i = 0; i < 1000; ++i) {
        std::size_t n = static_cast<std::size_t>(gen.integer(3, 5));
        std::size_t k = static_cast<std::size_t>(gen.integer(2, std::min<int>(3, static_cast<int>(n) - 1)));
        Vec u = gen.vec(n, 3, 4);
        Vec v = eval_loss(top_k_surrogate(n, k), u);
        for (std::size_t y = 0; y < n; ++y) {
            c.expect(v[y] == top_k_by_hand(u, y, k), "top-k pieces differ at n=" + std::to_string(n));
            ++compared;
        }
    }

    auto L = top_k_surrogate(3, 2);
    auto table = embedded_top2_loss();
    for (std::size_t r = 0; r < table.num_reports(); ++r) {
        Vec u = point_from_label(table.report(r));
        for (std::size_t y = 0; y < 3; ++y)
            c.expect(table.row(r)[y] == top_k_by_hand(u, y, 2), "table row " + table.report(r));
    }
    auto x = extract_doubling(L, 4);
    c.expect(equal_up_to_relabeling(x.loss, table), "extraction differs from the l^2 table");

    auto fine = finite_property(table);
    auto coarse_loss = top_k_loss(3, 2);
    auto res = refinement_check(fine, finite_property(coarse_loss));
    c.expect(!res.refines, "refinement reported");
    if (!res.refines) {
        const Vec& p = res.interior_p;
        bool interior = std::all_of(p.begin(), p.end(), [](const Rational& q) { return sgn(q) > 0; });
        auto risk = discrete_bayes_risk(table, p);
        interior = interior && risk.argmin.size() == 1 && table.report(risk.argmin[0]) == res.cell;
        c.expect(interior, "witness p is not interior to " + res.cell);
        // Each coarse report fails at some vertex of the fine cell.
        auto vertices = enumerate_vertices(level_set_polyhedron(table, res.cell));
        for (const auto& report : coarse_loss.reports()) {
            bool escapes = std::any_of(vertices.begin(), vertices.end(),
                                       [&](const Vec& q) { return !in_argmin(coarse_loss, q, report); });
            c.expect(escapes, "cell " + res.cell + " lies inside the cell of " + report);
        }
    }
    c.detail = std::to_string(compared) + " piece values; " + std::to_string(table.num_reports()) +
               "-report table recovered; no refinement, witness cell " + res.cell;
}

void criterion_9(Checker& c) {
    auto L = abstain_surrogate(4);
    Gen gen(9);
    auto grid = simplex_grid(4, 8);
    std::shuffle(grid.begin(), grid.end(), gen.engine());
    grid.resize(20);
    Rational smallest;
    bool first = true;
    std::size_t checks = 0;
    for (const auto& p : grid) {
        std::vector<Vec> samples;
        for (int i = 0; i < 200; ++i) samples.push_back(gen.vec(2, 3, 8));
        auto est = separation_slope(L, p, samples, Norm::LInf);
        c.expect(sgn(est.c_hat) > 0, "c_hat not positive at p = " + to_string(p));
        auto argmin = minimize_expected(L, p);
        for (const auto& u : samples) {
            Rational excess = expected_surrogate_loss(L, u, p) - argmin.risk;
            c.expect(excess >= est.c_hat * point_set_distance(argmin.argmin, u, Norm::LInf),
                     "slope inequality fails at p = " + to_string(p));
            ++checks;
        }
        if (first || est.c_hat < smallest) smallest = est.c_hat;
        first = false;
    }
    c.detail = "20 distributions, smallest c_hat " + to_string(smallest) + ", " + std::to_string(checks) +
               " inequalities exact";
}

void criterion_10(Checker& c) {
    Gen gen(10);
    std::size_t disagreements = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        LinearProgram lp = testing::random_bounded_lp(gen);
        auto expected = testing::brute_force_max(lp);
        auto r = lp_solve(lp);
        bool agree = expected ? (r.optimal() && r.value == *expected && testing::satisfies(lp, r.point))
                              : r.status == LpStatus::Infeasible;
        disagreements += !agree;
    }
    c.expect(disagreements == 0, std::to_string(disagreements) + " LP disagreements");
    std::size_t invariant = 0;
    for (int trial = 0; trial < 50; ++trial) {
        auto L = testing::random_loss_2d(gen, 3);
        bool ok = check_diagram_invariance(L, gen.distribution(3, 12, true), gen.distribution(3, 12, true));
        c.expect(ok, "diagram invariance fails, trial " + std::to_string(trial));
        invariant += ok;
    }
    c.detail = "1000 LPs, " + std::to_string(disagreements) + " disagreements; " + std::to_string(invariant) +
               "/50 diagrams invariant";
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Checker&)>>> criteria{
        {"conjugate construction", criterion_1}, {"conjugate roundtrip", criterion_2},
        {"hinge embeds 2 x zero-one", criterion_3}, {"abstain links", criterion_4},
        {"abstain calibration scan", criterion_5}, {"Lovasz hinge inconsistency", criterion_6},
        {"Lovasz structure", criterion_7}, {"top-k", criterion_8},
        {"separation slope", criterion_9}, {"kernel soundness", criterion_10}};
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Checker c;
        try {
            criteria[i].second(c);
        } catch (const std::exception& e) {
            c.expect(false, std::string("exception: ") + e.what());
        }
        std::cout << (c.ok() ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first << ": " << c.detail
                  << (c.ok() ? "" : c.failures()) << std::endl;
        failed += !c.ok();
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
              << std::endl;
    return failed == 0 ? 0 : 1;
}
