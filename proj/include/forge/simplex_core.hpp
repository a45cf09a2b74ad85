#pragma once

// Distributions over finite outcome spaces, discrete losses, their Bayes
// risks, and the level sets of the properties they elicit.

#include "forge/geometry.hpp"
#include "forge/rational.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace forge {

class OutcomeSpace {
public:
    OutcomeSpace() = default;
    explicit OutcomeSpace(std::vector<std::string> labels);

    std::size_t size() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    std::size_t index_of(std::string_view label) const;

    bool operator==(const OutcomeSpace&) const = default;

private:
    std::vector<std::string> labels_;
};

/// Throws std::invalid_argument unless p has n nonnegative entries summing to 1.
void validate_distribution(const Vec& p, std::size_t n);

Vec uniform_distribution(std::size_t n);
Vec point_mass(std::size_t n, std::size_t y);

/// A nonnegative loss on a finite report set; rows are reports, columns outcomes.
class DiscreteLoss {
public:
    DiscreteLoss(OutcomeSpace outcomes, std::vector<std::string> reports, std::vector<Vec> matrix);

    const OutcomeSpace& outcomes() const { return outcomes_; }
    const std::vector<std::string>& reports() const { return reports_; }
    const std::string& report(std::size_t r) const { return reports_.at(r); }
    const Vec& row(std::size_t r) const { return matrix_.at(r); }
    const std::vector<Vec>& matrix() const { return matrix_; }
    std::size_t num_reports() const { return reports_.size(); }
    std::size_t num_outcomes() const { return outcomes_.size(); }
    std::size_t report_index(std::string_view report) const;

    DiscreteLoss scaled(const Rational& factor) const;

private:
    OutcomeSpace outcomes_;
    std::vector<std::string> reports_;
    std::vector<Vec> matrix_;
};

Rational expected_discrete_loss(const DiscreteLoss& loss, std::size_t report, const Vec& p);
Rational expected_discrete_loss(const DiscreteLoss& loss, std::string_view report, const Vec& p);

struct DiscreteRisk {
    Rational value;
    std::vector<std::size_t> argmin;  // ascending report indices, never empty
};

DiscreteRisk discrete_bayes_risk(const DiscreteLoss& loss, const Vec& p);

/// {p in simplex : <p, l(r) - l(r')> <= 0 for all r'}.
Polyhedron level_set_polyhedron(const DiscreteLoss& loss, std::size_t report);
Polyhedron level_set_polyhedron(const DiscreteLoss& loss, std::string_view report);

struct NonRedundancy {
    std::map<std::string, Vec> witnesses;  // report -> distribution where it is the unique minimizer
    std::vector<std::string> failures;     // reports with no such distribution

    bool ok() const { return failures.empty(); }
};

NonRedundancy check_non_redundant(const DiscreteLoss& loss);

/// All distributions with entries in (1/m)Z, lexicographic in the integer
/// composition: for n = 2, m = 2 this is (0,1), (1/2,1/2), (1,0).
std::vector<Vec> simplex_grid(std::size_t n, std::size_t m);

/// Level sets of the property elicited by a discrete loss, one per report.
struct FiniteProperty {
    std::size_t num_outcomes = 0;
    std::vector<std::string> reports;
    std::vector<Polyhedron> cells;
};

FiniteProperty finite_property(const DiscreteLoss& loss);

}  // namespace forge
