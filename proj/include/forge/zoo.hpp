#pragma once

// Concrete losses: 0-1 and hinge, abstain, the Lovasz hinge with its
// submodular machinery, and top-k.
//
// Naming conventions:
//  - binary outcomes are "+1", "-1" in that order;
//  - multiclass outcomes are "y1" .. "yn"; the abstain report is "abstain";
//  - set-valued outcomes over N = {1..k} are sign strings, character i being
//    '+' when i is in the set. Outcome index j has character i equal to '-'
//    exactly when bit (k-1-i) of j is set, so for k = 2 the order is
//    "++", "+-", "-+", "--".

#include "forge/embedding.hpp"
#include "forge/polyhedral.hpp"
#include "forge/simplex_core.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace forge {

// ------------------------------------------------------------ basic losses

OutcomeSpace binary_outcomes();
OutcomeSpace multiclass_outcomes(std::size_t n);

/// n = 2 uses the binary labels, otherwise "y1".."yn"; reports equal outcomes.
DiscreteLoss zero_one(std::size_t n);

/// Pieces {1 - u, 0} for "+1" and {1 + u, 0} for "-1".
PolyhedralLoss hinge();

// ------------------------------------------------------------ abstain

/// Reports "y1".."yn" and "abstain" (last); abstaining costs alpha.
DiscreteLoss abstain_loss(std::size_t n, const Rational& alpha);

std::size_t abstain_dim(std::size_t n);

/// B(y): binary digits of the label index, most significant first, 0 -> -1.
std::vector<int> abstain_code(std::size_t n, std::size_t y);

/// L(u)_y = max(max_j B(y)_j u_j + 1, 0) on R^{ceil(log2 n)}.
PolyhedralLoss abstain_surrogate(std::size_t n);

/// y -> -B(y), abstain -> 0.
Embedding abstain_embedding(std::size_t n);

/// Abstain when min_i |u_i| <= 1/2, else the label coded by sgn(-u).
std::string abstain_link_linf(std::size_t n, const Vec& u);
/// Abstain when ||u||_1 <= 1, else the label coded by sgn(-u).
std::string abstain_link_l1(std::size_t n, const Vec& u);

// ------------------------------------------------------------ set functions

/// f : 2^N -> Q with values indexed by bitmask (bit i set iff element i+1 in S).
struct SetFunction {
    std::size_t k = 0;
    Vec values;

    SetFunction() = default;
    SetFunction(std::size_t k, Vec values);

    const Rational& operator()(std::uint32_t mask) const { return values.at(mask); }
    std::uint32_t full() const { return (1u << k) - 1; }
};

SetFunction cardinality(std::size_t k);
/// 0 on the empty set and 1 elsewhere.
SetFunction indicator_nonempty(std::size_t k);

bool is_submodular(const SetFunction& f);
bool is_increasing(const SetFunction& f);
bool is_modular(const SetFunction& f);

/// Sort-based extension: sum_i w_{pi_i} (f(S_i) - f(S_{i-1})) with pi sorting
/// w in decreasing order and S_i the first i sorted elements.
Rational lovasz_extension(const SetFunction& f, const Vec& w);

/// 2^{-k} sum_S f(S).
Rational mean_value(const SetFunction& f);

OutcomeSpace sign_outcomes(std::size_t k);
std::uint32_t set_of_sign_index(std::size_t j, std::size_t k);
std::size_t sign_index_of_set(std::uint32_t mask, std::size_t k);
std::string sign_label(std::uint32_t mask, std::size_t k);

/// Weighted set-valued loss l^f(r)_S = f(r xor S) over sign reports.
DiscreteLoss lovasz_target_loss(const SetFunction& f);
/// Hamming loss on k signs: l^f with f(S) = |S|.
DiscreteLoss hamming(std::size_t k);

/// L(u)_S = F((1 - u o chi_S)_+), materialized as a max of affine pieces
/// over clip patterns and orderings. Requires f normalized, increasing and
/// submodular (for other f the expression is not convex); k <= 5.
PolyhedralLoss lovasz_hinge(const SetFunction& f);

/// Direct evaluation of F((1 - u o chi_S)_+) for every outcome.
Vec lovasz_hinge_direct(const SetFunction& f, const Vec& u);

/// Restricted reports (A, B), A and B disjoint; label character i is '+' for
/// i in A, '0' for i in B, '-' otherwise. Loss f(A^S \ B) + f(A^S u B).
DiscreteLoss restricted_lovasz_loss(const SetFunction& f);
std::string restricted_label(std::uint32_t a, std::uint32_t b, std::size_t k);
/// chi_A + 1_B.
Vec restricted_point(std::uint32_t a, std::uint32_t b, std::size_t k);

/// {i : u_i >= 0} as a sign report label (sgn(0) = +1).
std::string sign_link(const Vec& u);

struct LovaszWitness {
    Rational epsilon;            // (2 fbar - f(N)) / (4 fbar)
    Vec p;                       // (1 - eps) uniform + eps delta_empty
    Rational fbar, f_full;
    Rational min_unabstained;    // min over A of restricted loss of (A, {}) at p
    Rational abstain_all;        // restricted loss of ({}, N) at p
    std::string optimal_report;  // optimal restricted report with nonempty B
    Vec u;                       // chi_A + 1_B
    Rational surrogate_risk;     // LP value of min_u <p, L(u)>
    Rational value_at_u;         // <p, L(u)>
    std::vector<std::string> target_optimal;  // gamma(p) for l^f
    std::string linked;          // sign_link(u)
    bool verified = false;
};

/// Inconsistency witness for the Lovasz hinge with sign link, every claim
/// re-checked exactly. Throws std::invalid_argument for modular f or when f
/// is not normalized, increasing and submodular with f({i}) > 0.
LovaszWitness lovasz_inconsistency_witness(const SetFunction& f);

// ------------------------------------------------------------ top-k

/// Reports are k-subsets named like "{1,3}", outcomes "y1".."yn"; l(r)_y = 1 - [y in r].
DiscreteLoss top_k_loss(std::size_t n, std::size_t k);
/// L(u)_y = (1 - u_y + (1/k) * sum of the k largest entries of u - e_y)_+.
PolyhedralLoss top_k_surrogate(std::size_t n, std::size_t k);
Rational top_k_direct(const Vec& u, std::size_t y, std::size_t k);
/// Indices of the k largest entries, ties to the smaller index.
std::string top_k_link(const Vec& u, std::size_t k);

/// l^2 on the twelve reports given by permutations of (1,0,0), (1,1,0), (2,1,0).
DiscreteLoss embedded_top2_loss();

struct RefinementResult {
    bool refines = true;
    std::string cell;  // report whose full-dimensional cell fits in no coarse cell
    Vec interior_p;    // a point of that cell's interior
};

RefinementResult refinement_check(const FiniteProperty& fine, const FiniteProperty& coarse);

}  // namespace forge
