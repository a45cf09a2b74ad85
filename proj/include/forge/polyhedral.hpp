#pragma once

// Piecewise-linear convex losses: evaluation, expected-loss minimization with
// full argmin faces, and the finite family of optimal sets.

#include "forge/geometry.hpp"
#include "forge/simplex_core.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace forge {

struct AffinePiece {
    Vec a;
    Rational b;

    Rational eval(const Vec& u) const { return dot(a, u) + b; }
    bool operator==(const AffinePiece&) const = default;
};

/// L(u)_y = max over the pieces of outcome y of a.u + b.
class PolyhedralLoss {
public:
    PolyhedralLoss(std::size_t d, OutcomeSpace outcomes, std::vector<std::vector<AffinePiece>> pieces);

    std::size_t dim() const { return d_; }
    const OutcomeSpace& outcomes() const { return outcomes_; }
    std::size_t num_outcomes() const { return outcomes_.size(); }
    const std::vector<AffinePiece>& pieces(std::size_t y) const { return pieces_.at(y); }
    const std::vector<std::vector<AffinePiece>>& all_pieces() const { return pieces_; }

private:
    std::size_t d_;
    OutcomeSpace outcomes_;
    std::vector<std::vector<AffinePiece>> pieces_;
};

Vec eval_loss(const PolyhedralLoss& loss, const Vec& u);
Rational expected_surrogate_loss(const PolyhedralLoss& loss, const Vec& u, const Vec& p);

/// Sorted (outcome, piece index) pairs tight on a whole optimal face.
using Signature = std::vector<std::pair<std::size_t, std::size_t>>;

struct ExpectedMinimum {
    Rational risk;
    Polyhedron argmin;
    Signature signature;
    Vec point;  // one minimizer
};

/// Minimizes <p, L(u)> over R^d. The argmin is the polyhedron on which, for
/// every outcome in the support of p, the pieces tight on the whole optimal
/// face tie and dominate the remaining pieces. Throws std::domain_error when
/// the expected loss is unbounded below.
ExpectedMinimum minimize_expected(const PolyhedralLoss& loss, const Vec& p);

Rational surrogate_bayes_risk(const PolyhedralLoss& loss, const Vec& p);

struct OptimalSet {
    Polyhedron set;
    Vec witness;  // distribution whose argmin this is
    Signature signature;
    Vec point;    // a point of the set found by the LP
};

struct OptimalSetFamily {
    std::vector<OptimalSet> members;
};

/// Argmin polyhedra over every grid distribution of denominator m (which
/// visits every support), deduplicated by signature and by set equality.
OptimalSetFamily enumerate_optimal_sets(const PolyhedralLoss& loss, std::size_t m);

/// Whether the cell partitions induced by <p, L(.)> and <p', L(.)> agree on
/// the grid {-radius, ..., radius}^d with the given step. Two grid points
/// share a cell when the subdifferentials of the expected loss coincide.
/// Throws std::invalid_argument unless p and p' are strictly positive.
bool check_diagram_invariance(const PolyhedralLoss& loss, const Vec& p, const Vec& p_prime,
                              const Rational& radius = 2, const Rational& step = Rational(1, 4));

/// Every point of {lo, lo + step, ..., hi}^d.
std::vector<Vec> box_grid(std::size_t d, const Rational& lo, const Rational& hi, const Rational& step);

}  // namespace forge
