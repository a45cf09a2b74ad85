#pragma once

// Surrogate construction from a discrete loss, extraction of the discrete
// loss embedded by a polyhedral loss, and embedding verification.

#include "forge/polyhedral.hpp"
#include "forge/simplex_core.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace forge {

/// Report -> point in R^d.
class Embedding {
public:
    void add(std::string report, Vec point);

    std::size_t size() const { return reports_.size(); }
    const std::vector<std::string>& reports() const { return reports_; }
    const std::vector<Vec>& points() const { return points_; }
    const Vec& point(std::size_t i) const { return points_.at(i); }
    const Vec& point(std::string_view report) const;
    std::size_t index_of(std::string_view report) const;
    bool has(std::string_view report) const;
    bool injective() const;

private:
    std::vector<std::string> reports_;
    std::vector<Vec> points_;
};

struct EmbeddedSurrogate {
    PolyhedralLoss loss;
    Embedding embedding;
};

/// L(u) = C(u) 1 - u with C(u) the max over vertices q of the level sets of
/// <q, u> + <q, l(r_q)>; embedding r -> -l(r). Throws std::invalid_argument
/// listing the offending reports when l is redundant.
EmbeddedSurrogate conjugate_surrogate(const DiscreteLoss& loss);

struct EmbeddingReport {
    std::vector<bool> loss_match;                // per report: L(phi(r)) == l(r)
    std::vector<Vec> grid;                       // distributions checked
    std::vector<std::vector<bool>> optimality;   // [grid point][report]: r optimal iff phi(r) optimal
    Rational bayes_gap;                          // max |risk_L - risk_l| over the grid

    bool verified() const;
};

/// Checks both embedding conditions on simplex_grid(n, m). The embedding
/// must name every report of the discrete loss. Throws std::invalid_argument
/// if phi is not injective.
EmbeddingReport verify_embedding(const PolyhedralLoss& surrogate, const DiscreteLoss& loss, const Embedding& phi,
                                 std::size_t m);

Rational bayes_risk_gap(const PolyhedralLoss& surrogate, const DiscreteLoss& loss, std::size_t m);

class GridTooCoarse : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Extraction {
    DiscreteLoss loss;
    Embedding embedding;
    OptimalSetFamily family;
    std::size_t grid_m = 0;
};

/// Recovers the discrete loss embedded by a polyhedral loss. Candidate
/// reports are L(u_U) for the lexicographically least point u_U of each
/// optimal set found on the grid; candidates never uniquely optimal are
/// dropped, and the result is certified exactly by checking
/// risk_L(q) = risk_l(q) at every vertex q of every level set of l. Throws
/// GridTooCoarse when that certificate fails.
Extraction extract_embedded_loss(const PolyhedralLoss& surrogate, std::size_t m);

/// Indices of the cells not strictly contained in another; of several equal
/// cells only the first is kept.
std::vector<std::size_t> trim_property(const std::vector<Polyhedron>& cells);

/// Same outcomes and the same multiset of loss rows.
bool equal_up_to_relabeling(const DiscreteLoss& a, const DiscreteLoss& b);

/// Name used for an extracted report: its embedding point, e.g. "(2,1,0)".
std::string point_label(const Vec& u);

}  // namespace forge
