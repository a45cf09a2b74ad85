#pragma once

// Thickened links: report sets of optimal sets, exact validation of the
// thickening radius, the link evaluator, and calibration audits.

#include "forge/embedding.hpp"
#include "forge/geometry.hpp"
#include "forge/polyhedral.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace forge {

/// R_U = {r : phi(r) in U} per member, as ascending indices into phi.
/// Throws std::runtime_error when some member contains no embedding point.
std::vector<std::vector<std::size_t>> report_sets(const OptimalSetFamily& family, const Embedding& phi);

struct SubfamilyCheck {
    std::vector<std::size_t> members;
    Rational radius;  // common thickening radius; the subfamily has empty intersection
};

struct EpsilonCertificate {
    Rational epsilon;
    Rational threshold;  // smallest radius over checked subfamilies (unset if none)
    bool has_threshold = false;
    std::vector<SubfamilyCheck> checked;
    std::size_t intersecting_visited = 0;
};

/// Largest candidate eps such that no subfamily with empty intersection has
/// intersecting open eps-thickenings. Subfamilies are explored depth-first
/// through intersecting ones; every minimal empty subfamily has at most d+1
/// members (Helly), so the search is exhaustive. Throws std::runtime_error if
/// no candidate validates.
EpsilonCertificate max_valid_epsilon(const OptimalSetFamily& family, Norm norm, const std::vector<Rational>& candidates);

/// 1, 1/2, ..., 1/64.
std::vector<Rational> default_epsilon_ladder();

struct LinkSpec {
    Norm norm = Norm::LInf;
    Rational epsilon;
    OptimalSetFamily family;
    Embedding embedding;
    std::vector<std::string> tie_break;  // preferred reports first; others lexicographic
};

class Link {
public:
    explicit Link(LinkSpec spec);

    /// Psi(u), ascending indices into the embedding.
    std::vector<std::size_t> envelope(const Vec& u) const;
    /// psi(u); throws std::logic_error when Psi(u) is empty.
    std::string operator()(const Vec& u) const;

    const LinkSpec& spec() const { return spec_; }
    const std::vector<std::vector<std::size_t>>& member_reports() const { return member_reports_; }

private:
    LinkSpec spec_;
    std::vector<std::vector<std::size_t>> member_reports_;
    std::vector<std::size_t> rank_;  // tie-break rank per embedding index
};

Link build_link(LinkSpec spec);

using LinkFunction = std::function<std::string(const Vec&)>;

struct UGrid {
    Vec lower, upper;
    Rational step;

    std::vector<Vec> points() const;
};

/// Box [-r, r]^d.
UGrid symmetric_grid(std::size_t d, const Rational& radius, const Rational& step);

struct AuditEntry {
    Vec p;
    bool vacuous = false;        // link never leaves gamma(p) on the grid
    Rational gap;                // min excess expected loss over off-target grid points
    Vec witness;                 // grid point attaining the gap
    std::string witness_report;
    bool violation = false;      // gap <= 0, re-verified exactly
};

struct CalibrationAudit {
    std::vector<AuditEntry> entries;
    std::optional<Rational> min_gap;  // over non-vacuous entries
    std::size_t violations = 0;
};

/// Surrogate values and links at every grid point, computed once and shared
/// across distributions.
class AuditGrid {
public:
    AuditGrid(const PolyhedralLoss& surrogate, const LinkFunction& link, const DiscreteLoss& target, const UGrid& grid);

    std::size_t size() const { return points_.size(); }
    const Vec& point(std::size_t i) const { return points_[i]; }
    const Vec& loss(std::size_t i) const { return losses_[i]; }
    std::size_t report(std::size_t i) const { return reports_[i]; }
    const std::vector<double>& loss_double(std::size_t i) const { return losses_double_[i]; }

private:
    std::vector<Vec> points_;
    std::vector<Vec> losses_;
    std::vector<std::vector<double>> losses_double_;
    std::vector<std::size_t> reports_;  // index into the target's reports
};

/// Warm-started exact Bayes risk of a polyhedral loss; the feasible region
/// does not depend on p, so successive calls reuse the last optimal basis.
class RiskOracle {
public:
    explicit RiskOracle(const PolyhedralLoss& surrogate);
    Rational operator()(const Vec& p);

private:
    std::size_t d_, n_;
    SimplexSolver solver_;
};

AuditEntry calibration_audit(const AuditGrid& grid, const PolyhedralLoss& surrogate, const DiscreteLoss& target,
                             const Vec& p, const Rational& surrogate_risk);
AuditEntry calibration_audit(const PolyhedralLoss& surrogate, const LinkFunction& link, const DiscreteLoss& target,
                             const Vec& p, const UGrid& grid);

CalibrationAudit calibration_scan(const PolyhedralLoss& surrogate, const LinkFunction& link, const DiscreteLoss& target,
                                  std::size_t m, const UGrid& grid);

struct SlopeEstimate {
    Rational c_hat;
    std::size_t used = 0;     // samples off Gamma(p)
    std::size_t skipped = 0;  // samples inside Gamma(p)
};

/// min over samples off Gamma(p) of (<p, L(u)> - risk_L(p)) / d(Gamma(p), u).
/// Throws std::runtime_error if every sample lies in Gamma(p).
SlopeEstimate separation_slope(const PolyhedralLoss& surrogate, const Vec& p, const std::vector<Vec>& samples, Norm norm);

}  // namespace forge
