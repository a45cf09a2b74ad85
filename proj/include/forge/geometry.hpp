#pragma once

// Exact linear programming and polyhedral kernel.
//
// Everything here works over mpq rationals. The LP solver is a dense-tableau
// two-phase primal simplex; polyhedra are kept in halfspace form and vertex
// form is produced only on request.

#include "forge/rational.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace forge {

enum class Relation { LessEq, Equal, GreaterEq };
enum class Sense { Minimize, Maximize };
enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LinearConstraint {
    Vec coeffs;
    Relation relation = Relation::LessEq;
    Rational rhs;
};

struct LinearProgram {
    std::size_t num_vars = 0;
    Vec objective;  // empty means zero objective
    Sense sense = Sense::Minimize;
    std::vector<LinearConstraint> constraints;
    std::vector<bool> nonnegative;  // empty means every variable is free

    explicit LinearProgram(std::size_t n = 0) : num_vars(n) {}

    void add(Vec coeffs, Relation relation, Rational rhs);
    void require_nonnegative(std::size_t var);
};

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    Rational value;
    Vec point;

    bool optimal() const { return status == LpStatus::Optimal; }
};

const char* to_string(LpStatus status);

/// Two-phase tableau simplex over the feasible region of an LP. Phase one
/// runs once at construction; optimize() may then be called repeatedly with
/// different objectives, each starting from the previous optimal basis.
///
/// Pivoting uses Dantzig's rule until a run of degenerate pivots appears, then
/// switches to Bland's smallest-index rule for the rest of that solve, which
/// rules out cycling.
class SimplexSolver {
public:
    explicit SimplexSolver(const LinearProgram& region);

    bool feasible() const { return feasible_; }
    std::size_t num_vars() const { return num_vars_; }

    LpResult optimize(const Vec& objective, Sense sense);

    // Pivot count across all solves, for diagnostics.
    std::size_t pivots() const { return pivots_; }

private:
    Rational& at(std::size_t row, std::size_t col) { return tableau_[row * stride_ + col]; }
    const Rational& at(std::size_t row, std::size_t col) const { return tableau_[row * stride_ + col]; }

    void pivot(std::size_t row, std::size_t col);
    void load_objective(const Vec& column_costs);
    // Returns false when the objective is unbounded below.
    bool run();
    Vec extract_point() const;
    void drop_row(std::size_t row);

    std::size_t num_vars_ = 0;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;  // structural + slack + artificial columns
    std::size_t stride_ = 0;
    std::size_t first_artificial_ = 0;
    std::vector<Rational> tableau_;  // rows_ constraint rows plus one cost row
    std::vector<std::size_t> basis_;
    std::vector<long> pos_col_;
    std::vector<long> neg_col_;
    std::vector<std::size_t> nz_scratch_;
    bool feasible_ = false;
    std::size_t pivots_ = 0;
};

/// Solves an LP exactly. Throws std::invalid_argument on dimension mismatch.
LpResult lp_solve(const LinearProgram& problem);

struct Halfspace {
    Vec normal;
    Rational offset;  // normal . x <= offset  (or == for equalities)
};

/// Closed polyhedron { x : A x <= b, E x = f } in R^dim.
class Polyhedron {
public:
    explicit Polyhedron(std::size_t dim);

    static Polyhedron probability_simplex(std::size_t n);
    static Polyhedron whole_space(std::size_t dim) { return Polyhedron(dim); }
    static Polyhedron point(const Vec& x);
    static Polyhedron box(const Vec& lower, const Vec& upper);

    std::size_t dim() const { return dim_; }
    const std::vector<Halfspace>& inequalities() const { return inequalities_; }
    const std::vector<Halfspace>& equalities() const { return equalities_; }

    Polyhedron& add_inequality(Vec normal, Rational offset);  // normal . x <= offset
    Polyhedron& add_equality(Vec normal, Rational offset);

    bool contains(const Vec& x) const;

    /// Appends the constraints, with variables starting at var_offset, to an
    /// LP whose num_vars is already large enough.
    void append_to(LinearProgram& lp, std::size_t var_offset) const;

    /// Intersection (stacked constraints).
    Polyhedron intersect(const Polyhedron& other) const;

    const std::optional<std::vector<Vec>>& cached_vertices() const { return vertices_; }
    /// Enumerates and caches vertices (bounded polyhedra only).
    void cache_vertices();

private:
    std::size_t dim_;
    std::vector<Halfspace> inequalities_;
    std::vector<Halfspace> equalities_;
    std::optional<std::vector<Vec>> vertices_;
};

enum class Norm { L1, LInf };

Norm parse_norm(std::string_view text);
std::string_view to_string(Norm norm);
Rational norm_of(const Vec& v, Norm norm);
// Dual norm, used for distance lower bounds from separating halfspaces.
Rational dual_norm_of(const Vec& v, Norm norm);

std::optional<Vec> find_point(const Polyhedron& p);
bool is_empty(const Polyhedron& p);
bool is_bounded(const Polyhedron& p);

/// Lexicographically smallest point, or nullopt when P is empty or the
/// lexicographic minimum does not exist (P unbounded below along the order).
std::optional<Vec> lex_min_point(const Polyhedron& p);

/// All vertices of a bounded polyhedron by brute force over subsets of
/// inequalities, deduplicated and sorted lexicographically. Throws
/// std::domain_error if P is unbounded; returns empty for empty P.
std::vector<Vec> enumerate_vertices(const Polyhedron& p);

/// inf over x in P of ||x - u||. Throws std::domain_error if P is empty.
Rational point_set_distance(const Polyhedron& p, const Vec& u, Norm norm);

/// Whether d(P, u) < eps, using exact cheap bounds before falling back to
/// the distance LP. known_point, when given, must lie in P.
bool within_distance(const Polyhedron& p, const Vec& u, const Rational& eps, Norm norm,
                     const Vec* known_point = nullptr);

bool sets_intersect(std::span<const Polyhedron> family);

/// min over u of max_j d(U_j, u), the smallest radius at which the closed
/// thickenings of all members share a point. Zero iff the family intersects.
Rational common_thickening_radius(std::span<const Polyhedron> family, Norm norm);

/// True iff some u has d(U_j, u) < eps for every member (open thickenings).
bool thickened_family_intersects(std::span<const Polyhedron> family, const Rational& eps, Norm norm);

/// inner is a subset of outer, decided by one LP per constraint of outer.
bool contains(const Polyhedron& outer, const Polyhedron& inner);

struct DeepestPoint {
    Rational slack;  // capped at 1
    Vec point;
};

/// Maximizes the common slack s (s <= 1) of all inequalities subject to the
/// equalities. s > 0 iff P has nonempty interior relative to the affine
/// subspace cut out by its equalities.
std::optional<DeepestPoint> deepest_point(const Polyhedron& p);

}  // namespace forge
