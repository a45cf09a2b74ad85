#include "forge/geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace forge {

void LinearProgram::add(Vec coeffs, Relation relation, Rational rhs) {
    if (coeffs.size() != num_vars) throw std::invalid_argument("constraint width does not match num_vars");
    constraints.push_back({std::move(coeffs), relation, std::move(rhs)});
}

void LinearProgram::require_nonnegative(std::size_t var) {
    if (var >= num_vars) throw std::invalid_argument("variable index out of range");
    if (nonnegative.empty()) nonnegative.assign(num_vars, false);
    nonnegative[var] = true;
}

const char* to_string(LpStatus status) {
    switch (status) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
    }
    return "?";
}

namespace {

constexpr std::size_t kDegenerateRunLimit = 16;

}  // namespace

SimplexSolver::SimplexSolver(const LinearProgram& region) : num_vars_(region.num_vars) {
    if (!region.nonnegative.empty() && region.nonnegative.size() != num_vars_)
        throw std::invalid_argument("nonnegative flags do not match num_vars");
    for (const auto& c : region.constraints) {
        if (c.coeffs.size() != num_vars_) throw std::invalid_argument("constraint width does not match num_vars");
    }

    std::size_t col = 0;
    pos_col_.assign(num_vars_, -1);
    neg_col_.assign(num_vars_, -1);
    for (std::size_t j = 0; j < num_vars_; ++j) {
        pos_col_[j] = static_cast<long>(col++);
        bool nonneg = !region.nonnegative.empty() && region.nonnegative[j];
        if (!nonneg) neg_col_[j] = static_cast<long>(col++);
    }
    const std::size_t structural = col;

    struct Row {
        Vec coeffs;  // over structural columns
        Relation rel;
        Rational rhs;
    };
    std::vector<Row> rows;
    for (const auto& c : region.constraints) {
        Row r{Vec(structural, Rational(0)), c.relation, c.rhs};
        bool any = false;
        for (std::size_t j = 0; j < num_vars_; ++j) {
            if (sgn(c.coeffs[j]) == 0) continue;
            any = true;
            r.coeffs[pos_col_[j]] = c.coeffs[j];
            if (neg_col_[j] >= 0) r.coeffs[neg_col_[j]] = -c.coeffs[j];
        }
        if (!any) {
            int s = sgn(c.rhs);
            bool ok = c.relation == Relation::LessEq ? s >= 0 : c.relation == Relation::Equal ? s == 0 : s <= 0;
            if (!ok) {
                feasible_ = false;
                return;
            }
            continue;
        }
        if (sgn(r.rhs) < 0) {
            for (auto& v : r.coeffs) v = -v;
            r.rhs = -r.rhs;
            if (r.rel == Relation::LessEq) r.rel = Relation::GreaterEq;
            else if (r.rel == Relation::GreaterEq) r.rel = Relation::LessEq;
        }
        rows.push_back(std::move(r));
    }

    std::size_t slacks = 0, artificials = 0;
    for (const auto& r : rows) {
        if (r.rel != Relation::Equal) ++slacks;
        if (r.rel != Relation::LessEq) ++artificials;
    }
    rows_ = rows.size();
    first_artificial_ = structural + slacks;
    cols_ = first_artificial_ + artificials;
    stride_ = cols_ + 1;
    tableau_.assign((rows_ + 1) * stride_, Rational(0));
    basis_.assign(rows_, 0);

    std::size_t next_slack = structural, next_art = first_artificial_;
    for (std::size_t i = 0; i < rows_; ++i) {
        const Row& r = rows[i];
        for (std::size_t j = 0; j < structural; ++j) at(i, j) = r.coeffs[j];
        at(i, cols_) = r.rhs;
        if (r.rel == Relation::LessEq) {
            at(i, next_slack) = 1;
            basis_[i] = next_slack++;
        } else if (r.rel == Relation::GreaterEq) {
            at(i, next_slack++) = -1;
            at(i, next_art) = 1;
            basis_[i] = next_art++;
        } else {
            at(i, next_art) = 1;
            basis_[i] = next_art++;
        }
    }

    if (artificials > 0) {
        Vec costs(cols_, Rational(0));
        for (std::size_t j = first_artificial_; j < cols_; ++j) costs[j] = 1;
        load_objective(costs);
        run();
        if (sgn(at(rows_, cols_)) != 0) {
            feasible_ = false;
            return;
        }
        // Drive artificials out of the basis; rows where that is impossible
        // are linear combinations of the others.
        for (std::size_t i = 0; i < rows_;) {
            if (basis_[i] < first_artificial_) {
                ++i;
                continue;
            }
            std::size_t enter = cols_;
            for (std::size_t j = 0; j < first_artificial_; ++j) {
                if (sgn(at(i, j)) != 0) {
                    enter = j;
                    break;
                }
            }
            if (enter == cols_) {
                drop_row(i);
            } else {
                pivot(i, enter);
                ++i;
            }
        }
        // Compact away the artificial columns.
        const std::size_t new_stride = first_artificial_ + 1;
        std::vector<Rational> compact((rows_ + 1) * new_stride);
        for (std::size_t i = 0; i <= rows_; ++i) {
            for (std::size_t j = 0; j < first_artificial_; ++j) compact[i * new_stride + j] = at(i, j);
            compact[i * new_stride + first_artificial_] = at(i, cols_);
        }
        tableau_ = std::move(compact);
        cols_ = first_artificial_;
        stride_ = new_stride;
    }
    feasible_ = true;
}

void SimplexSolver::drop_row(std::size_t row) {
    auto first = tableau_.begin() + static_cast<std::ptrdiff_t>(row * stride_);
    tableau_.erase(first, first + static_cast<std::ptrdiff_t>(stride_));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(row));
    --rows_;
}

void SimplexSolver::pivot(std::size_t row, std::size_t col) {
    Rational inv = 1;
    inv /= at(row, col);
    nz_scratch_.clear();
    for (std::size_t j = 0; j < stride_; ++j) {
        Rational& v = at(row, j);
        if (sgn(v) == 0) continue;
        v *= inv;
        nz_scratch_.push_back(j);
    }
    Rational f;
    for (std::size_t i = 0; i <= rows_; ++i) {
        if (i == row || sgn(at(i, col)) == 0) continue;
        f = at(i, col);
        for (std::size_t j : nz_scratch_) at(i, j) -= f * at(row, j);
    }
    basis_[row] = col;
    ++pivots_;
}

void SimplexSolver::load_objective(const Vec& column_costs) {
    for (std::size_t j = 0; j < cols_; ++j) at(rows_, j) = column_costs[j];
    at(rows_, cols_) = 0;
    for (std::size_t i = 0; i < rows_; ++i) {
        const Rational& cb = column_costs[basis_[i]];
        if (sgn(cb) == 0) continue;
        for (std::size_t j = 0; j <= cols_; ++j) {
            if (sgn(at(i, j)) != 0) at(rows_, j) -= cb * at(i, j);
        }
    }
}

bool SimplexSolver::run() {
    bool bland = false;
    std::size_t degenerate_run = 0;
    Rational best_ratio, ratio;
    while (true) {
        std::size_t enter = cols_;
        for (std::size_t j = 0; j < cols_; ++j) {
            const Rational& d = at(rows_, j);
            if (sgn(d) >= 0) continue;
            if (bland) {
                enter = j;
                break;
            }
            if (enter == cols_ || d < at(rows_, enter)) enter = j;
        }
        if (enter == cols_) return true;

        std::size_t leave = rows_;
        for (std::size_t i = 0; i < rows_; ++i) {
            const Rational& a = at(i, enter);
            if (sgn(a) <= 0) continue;
            ratio = at(i, cols_) / a;
            if (leave == rows_ || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave == rows_) return false;

        if (sgn(best_ratio) == 0) {
            if (++degenerate_run >= kDegenerateRunLimit) bland = true;
        } else {
            degenerate_run = 0;
        }
        pivot(leave, enter);
    }
}

Vec SimplexSolver::extract_point() const {
    Vec column_values(cols_, Rational(0));
    for (std::size_t i = 0; i < rows_; ++i) column_values[basis_[i]] = at(i, cols_);
    Vec x(num_vars_);
    for (std::size_t j = 0; j < num_vars_; ++j) {
        x[j] = column_values[pos_col_[j]];
        if (neg_col_[j] >= 0) x[j] -= column_values[neg_col_[j]];
    }
    return x;
}

LpResult SimplexSolver::optimize(const Vec& objective, Sense sense) {
    if (!objective.empty() && objective.size() != num_vars_)
        throw std::invalid_argument("objective width does not match num_vars");
    LpResult result;
    if (!feasible_) {
        result.status = LpStatus::Infeasible;
        return result;
    }
    Vec costs(cols_, Rational(0));
    for (std::size_t j = 0; j < objective.size(); ++j) {
        Rational c = sense == Sense::Maximize ? Rational(-objective[j]) : objective[j];
        costs[pos_col_[j]] = c;
        if (neg_col_[j] >= 0) costs[neg_col_[j]] = -c;
    }
    load_objective(costs);
    if (!run()) {
        result.status = LpStatus::Unbounded;
        return result;
    }
    result.status = LpStatus::Optimal;
    result.point = extract_point();
    result.value = objective.empty() ? Rational(0) : dot(objective, result.point);
    return result;
}

LpResult lp_solve(const LinearProgram& problem) {
    if (!problem.objective.empty() && problem.objective.size() != problem.num_vars)
        throw std::invalid_argument("objective width does not match num_vars");
    SimplexSolver solver(problem);
    return solver.optimize(problem.objective, problem.sense);
}

// ---------------------------------------------------------------- Polyhedron

Polyhedron::Polyhedron(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw std::invalid_argument("polyhedron dimension must be at least 1");
}

Polyhedron Polyhedron::probability_simplex(std::size_t n) {
    Polyhedron p(n);
    for (std::size_t i = 0; i < n; ++i) p.add_inequality(scale(unit(n, i), -1), 0);
    p.add_equality(Vec(n, Rational(1)), 1);
    return p;
}

Polyhedron Polyhedron::point(const Vec& x) {
    Polyhedron p(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) p.add_equality(unit(x.size(), i), x[i]);
    return p;
}

Polyhedron Polyhedron::box(const Vec& lower, const Vec& upper) {
    if (lower.size() != upper.size()) throw std::invalid_argument("box bounds differ in dimension");
    Polyhedron p(lower.size());
    for (std::size_t i = 0; i < lower.size(); ++i) {
        p.add_inequality(unit(lower.size(), i), upper[i]);
        p.add_inequality(scale(unit(lower.size(), i), -1), -lower[i]);
    }
    return p;
}

Polyhedron& Polyhedron::add_inequality(Vec normal, Rational offset) {
    if (normal.size() != dim_) throw std::invalid_argument("inequality dimension mismatch");
    inequalities_.push_back({std::move(normal), std::move(offset)});
    vertices_.reset();
    return *this;
}

Polyhedron& Polyhedron::add_equality(Vec normal, Rational offset) {
    if (normal.size() != dim_) throw std::invalid_argument("equality dimension mismatch");
    equalities_.push_back({std::move(normal), std::move(offset)});
    vertices_.reset();
    return *this;
}

bool Polyhedron::contains(const Vec& x) const {
    if (x.size() != dim_) throw std::invalid_argument("point dimension mismatch");
    for (const auto& h : inequalities_) {
        if (dot(h.normal, x) > h.offset) return false;
    }
    for (const auto& h : equalities_) {
        if (dot(h.normal, x) != h.offset) return false;
    }
    return true;
}

void Polyhedron::append_to(LinearProgram& lp, std::size_t var_offset) const {
    if (var_offset + dim_ > lp.num_vars) throw std::invalid_argument("LP too narrow for polyhedron");
    auto widen = [&](const Vec& a) {
        Vec row(lp.num_vars, Rational(0));
        for (std::size_t i = 0; i < dim_; ++i) row[var_offset + i] = a[i];
        return row;
    };
    for (const auto& h : inequalities_) lp.add(widen(h.normal), Relation::LessEq, h.offset);
    for (const auto& h : equalities_) lp.add(widen(h.normal), Relation::Equal, h.offset);
}

Polyhedron Polyhedron::intersect(const Polyhedron& other) const {
    if (other.dim_ != dim_) throw std::invalid_argument("intersect: dimension mismatch");
    Polyhedron r = *this;
    r.vertices_.reset();
    for (const auto& h : other.inequalities_) r.inequalities_.push_back(h);
    for (const auto& h : other.equalities_) r.equalities_.push_back(h);
    return r;
}

void Polyhedron::cache_vertices() { vertices_ = enumerate_vertices(*this); }

// ---------------------------------------------------------------- norms

Norm parse_norm(std::string_view text) {
    if (text == "l1" || text == "L1") return Norm::L1;
    if (text == "linf" || text == "Linf" || text == "inf") return Norm::LInf;
    throw std::invalid_argument("unknown norm '" + std::string(text) + "' (expected l1 or linf)");
}

std::string_view to_string(Norm norm) { return norm == Norm::L1 ? "l1" : "linf"; }

Rational norm_of(const Vec& v, Norm norm) { return norm == Norm::L1 ? norm_l1(v) : norm_linf(v); }

Rational dual_norm_of(const Vec& v, Norm norm) { return norm == Norm::L1 ? norm_linf(v) : norm_l1(v); }

// ---------------------------------------------------------------- queries

namespace {

LinearProgram region_lp(const Polyhedron& p) {
    LinearProgram lp(p.dim());
    p.append_to(lp, 0);
    return lp;
}

// Solves the square system A x = b; nullopt when A is singular.
std::optional<Vec> solve_square(std::vector<Vec> a, Vec b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = n;
        for (std::size_t r = c; r < n; ++r) {
            if (sgn(a[r][c]) != 0) {
                piv = r;
                break;
            }
        }
        if (piv == n) return std::nullopt;
        std::swap(a[piv], a[c]);
        std::swap(b[piv], b[c]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || sgn(a[r][c]) == 0) continue;
            Rational f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    Vec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

// Row-reduces the equality system, returning an independent subset of rows.
// Throws nothing; inconsistent systems are caught earlier by feasibility.
std::vector<Halfspace> independent_rows(const std::vector<Halfspace>& rows, std::size_t dim) {
    std::vector<Halfspace> kept;
    std::vector<Vec> echelon;  // reduced copies of kept rows
    std::vector<std::size_t> pivots;
    for (const auto& h : rows) {
        Vec v = h.normal;
        for (std::size_t k = 0; k < echelon.size(); ++k) {
            if (sgn(v[pivots[k]]) == 0) continue;
            Rational f = v[pivots[k]] / echelon[k][pivots[k]];
            for (std::size_t j = 0; j < dim; ++j) v[j] -= f * echelon[k][j];
        }
        auto it = std::find_if(v.begin(), v.end(), [](const Rational& x) { return sgn(x) != 0; });
        if (it == v.end()) continue;
        pivots.push_back(static_cast<std::size_t>(it - v.begin()));
        echelon.push_back(std::move(v));
        kept.push_back(h);
    }
    return kept;
}

bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
    const std::size_t k = idx.size();
    for (std::size_t i = k; i-- > 0;) {
        if (idx[i] < n - k + i) {
            ++idx[i];
            for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

std::optional<Vec> find_point(const Polyhedron& p) {
    auto r = lp_solve(region_lp(p));
    if (!r.optimal()) return std::nullopt;
    return r.point;
}

bool is_empty(const Polyhedron& p) { return !find_point(p).has_value(); }

bool is_bounded(const Polyhedron& p) {
    SimplexSolver solver(region_lp(p));
    if (!solver.feasible()) return true;
    for (std::size_t i = 0; i < p.dim(); ++i) {
        Vec e = unit(p.dim(), i);
        if (solver.optimize(e, Sense::Maximize).status == LpStatus::Unbounded) return false;
        if (solver.optimize(e, Sense::Minimize).status == LpStatus::Unbounded) return false;
    }
    return true;
}

std::optional<Vec> lex_min_point(const Polyhedron& p) {
    LinearProgram lp = region_lp(p);
    Vec point;
    for (std::size_t i = 0; i < p.dim(); ++i) {
        auto r = lp_solve([&] {
            LinearProgram step = lp;
            step.objective = unit(p.dim(), i);
            return step;
        }());
        if (!r.optimal()) return std::nullopt;
        lp.add(unit(p.dim(), i), Relation::Equal, r.value);
        point = r.point;
    }
    return point;
}

std::vector<Vec> enumerate_vertices(const Polyhedron& p) {
    const std::size_t d = p.dim();
    SimplexSolver solver(region_lp(p));
    if (!solver.feasible()) return {};
    for (std::size_t i = 0; i < d; ++i) {
        Vec e = unit(d, i);
        if (solver.optimize(e, Sense::Maximize).status == LpStatus::Unbounded ||
            solver.optimize(e, Sense::Minimize).status == LpStatus::Unbounded)
            throw std::domain_error("enumerate_vertices: polyhedron is unbounded");
    }

    std::vector<Halfspace> eqs = independent_rows(p.equalities(), d);
    if (eqs.size() > d) throw std::logic_error("enumerate_vertices: equality rank exceeds dimension");
    const std::size_t need = d - eqs.size();

    // Only inequalities that can be tight somewhere on P can define a vertex.
    std::vector<const Halfspace*> touching;
    for (const auto& h : p.inequalities()) {
        auto r = solver.optimize(h.normal, Sense::Maximize);
        if (r.optimal() && r.value == h.offset) touching.push_back(&h);
    }

    std::vector<Vec> vertices;
    auto try_system = [&](const std::vector<std::size_t>& chosen) {
        std::vector<Vec> a;
        Vec b;
        for (const auto& h : eqs) {
            a.push_back(h.normal);
            b.push_back(h.offset);
        }
        for (std::size_t idx : chosen) {
            a.push_back(touching[idx]->normal);
            b.push_back(touching[idx]->offset);
        }
        auto x = solve_square(std::move(a), std::move(b));
        if (x && p.contains(*x)) vertices.push_back(std::move(*x));
    };

    if (need == 0) {
        try_system({});
    } else if (touching.size() >= need) {
        std::vector<std::size_t> idx(need);
        for (std::size_t i = 0; i < need; ++i) idx[i] = i;
        do {
            try_system(idx);
        } while (next_combination(idx, touching.size()));
    }
    std::sort(vertices.begin(), vertices.end(), lex_less);
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    return vertices;
}

Rational point_set_distance(const Polyhedron& p, const Vec& u, Norm norm) {
    const std::size_t d = p.dim();
    if (u.size() != d) throw std::invalid_argument("point_set_distance: dimension mismatch");
    if (p.contains(u)) return 0;
    // Variables: x (d), then t (1 for linf, d for l1).
    const std::size_t nt = norm == Norm::LInf ? 1 : d;
    LinearProgram lp(d + nt);
    p.append_to(lp, 0);
    for (std::size_t i = 0; i < d; ++i) {
        std::size_t t = d + (norm == Norm::LInf ? 0 : i);
        Vec row(d + nt, Rational(0));
        row[i] = 1;
        row[t] = -1;
        lp.add(row, Relation::LessEq, u[i]);
        row[i] = -1;
        lp.add(row, Relation::LessEq, -u[i]);
    }
    lp.objective.assign(d + nt, Rational(0));
    for (std::size_t t = d; t < d + nt; ++t) lp.objective[t] = 1;
    auto r = lp_solve(lp);
    if (r.status == LpStatus::Infeasible) throw std::domain_error("point_set_distance: empty polyhedron");
    if (!r.optimal()) throw std::logic_error("point_set_distance: distance LP unbounded");
    return r.value;
}

bool within_distance(const Polyhedron& p, const Vec& u, const Rational& eps, Norm norm, const Vec* known_point) {
    if (u.size() != p.dim()) throw std::invalid_argument("within_distance: dimension mismatch");
    bool inside = true;
    // For a violated constraint a.x <= b, every x in P has ||u - x|| >= (a.u - b) / ||a||_*.
    for (const auto& h : p.inequalities()) {
        Rational excess = dot(h.normal, u) - h.offset;
        if (sgn(excess) <= 0) continue;
        inside = false;
        if (excess >= eps * dual_norm_of(h.normal, norm)) return false;
    }
    for (const auto& h : p.equalities()) {
        Rational excess = abs(dot(h.normal, u) - h.offset);
        if (sgn(excess) == 0) continue;
        inside = false;
        if (excess >= eps * dual_norm_of(h.normal, norm)) return false;
    }
    if (inside) return sgn(eps) > 0;
    if (known_point && norm_of(sub(u, *known_point), norm) < eps) return true;
    return point_set_distance(p, u, norm) < eps;
}

bool sets_intersect(std::span<const Polyhedron> family) {
    if (family.empty()) throw std::invalid_argument("sets_intersect: empty family");
    const std::size_t d = family.front().dim();
    LinearProgram lp(d);
    for (const auto& p : family) {
        if (p.dim() != d) throw std::invalid_argument("sets_intersect: dimension mismatch");
        p.append_to(lp, 0);
    }
    return lp_solve(lp).optimal();
}

Rational common_thickening_radius(std::span<const Polyhedron> family, Norm norm) {
    if (family.empty()) throw std::invalid_argument("common_thickening_radius: empty family");
    const std::size_t d = family.front().dim();
    const std::size_t m = family.size();
    // Variables: u (d), x_j (d each), s, then for l1 the per-coordinate bounds z_j (d each).
    const std::size_t s_var = d + m * d;
    const std::size_t z0 = s_var + 1;
    const std::size_t n = z0 + (norm == Norm::L1 ? m * d : 0);
    LinearProgram lp(n);
    for (std::size_t j = 0; j < m; ++j) {
        if (family[j].dim() != d) throw std::invalid_argument("common_thickening_radius: dimension mismatch");
        const std::size_t xj = d + j * d;
        family[j].append_to(lp, xj);
        for (std::size_t i = 0; i < d; ++i) {
            const std::size_t bound = norm == Norm::LInf ? s_var : z0 + j * d + i;
            Vec row(n, Rational(0));
            row[i] = 1;
            row[xj + i] = -1;
            row[bound] = -1;
            lp.add(row, Relation::LessEq, 0);
            row[i] = -1;
            row[xj + i] = 1;
            lp.add(row, Relation::LessEq, 0);
        }
        if (norm == Norm::L1) {
            Vec row(n, Rational(0));
            for (std::size_t i = 0; i < d; ++i) row[z0 + j * d + i] = 1;
            row[s_var] = -1;
            lp.add(row, Relation::LessEq, 0);
        }
    }
    lp.objective = unit(n, s_var);
    auto r = lp_solve(lp);
    if (r.status == LpStatus::Infeasible) throw std::domain_error("common_thickening_radius: empty member");
    if (!r.optimal()) throw std::logic_error("common_thickening_radius: LP unbounded");
    return r.value;
}

bool thickened_family_intersects(std::span<const Polyhedron> family, const Rational& eps, Norm norm) {
    if (sgn(eps) <= 0) throw std::invalid_argument("thickened_family_intersects: eps must be positive");
    return common_thickening_radius(family, norm) < eps;
}

bool contains(const Polyhedron& outer, const Polyhedron& inner) {
    if (outer.dim() != inner.dim()) throw std::invalid_argument("contains: dimension mismatch");
    SimplexSolver solver(region_lp(inner));
    if (!solver.feasible()) return true;
    for (const auto& h : outer.inequalities()) {
        auto r = solver.optimize(h.normal, Sense::Maximize);
        if (!r.optimal() || r.value > h.offset) return false;
    }
    for (const auto& h : outer.equalities()) {
        auto hi = solver.optimize(h.normal, Sense::Maximize);
        if (!hi.optimal() || hi.value != h.offset) return false;
        auto lo = solver.optimize(h.normal, Sense::Minimize);
        if (!lo.optimal() || lo.value != h.offset) return false;
    }
    return true;
}

std::optional<DeepestPoint> deepest_point(const Polyhedron& p) {
    const std::size_t d = p.dim();
    LinearProgram lp(d + 1);
    for (const auto& h : p.inequalities()) {
        Vec row = h.normal;
        row.push_back(1);
        lp.add(row, Relation::LessEq, h.offset);
    }
    for (const auto& h : p.equalities()) {
        Vec row = h.normal;
        row.push_back(0);
        lp.add(row, Relation::Equal, h.offset);
    }
    lp.add(unit(d + 1, d), Relation::LessEq, 1);
    lp.objective = unit(d + 1, d);
    lp.sense = Sense::Maximize;
    auto r = lp_solve(lp);
    if (!r.optimal()) return std::nullopt;
    DeepestPoint out;
    out.slack = r.value;
    out.point.assign(r.point.begin(), r.point.begin() + static_cast<std::ptrdiff_t>(d));
    return out;
}

}  // namespace forge
