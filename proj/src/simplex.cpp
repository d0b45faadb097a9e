#include "enplan/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace enplan::simplex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Csc {
    int m = 0, n = 0;
    std::vector<int> ptr;  // size n+1
    std::vector<int> idx;
    std::vector<double> val;
};

// Sparse LU of the basis with partial pivoting, plus a product-form eta
// file for pivot updates between refactorizations.
//
// Basis columns are indexed by position, rows by constraint index. factor()
// processes positions in an nnz-ascending order q and produces L, U with a
// row pivot order prow such that B[prow[i]][q[j]] = (L U)[i][j].
class BasisFactor {
public:
    int eta_count() const { return static_cast<int>(etas_.size()); }

    template <typename ColFn>
    bool factor(int m, ColFn&& basis_col) {
        m_ = m;
        lcols_.assign(static_cast<std::size_t>(m), {});
        ucols_.assign(static_cast<std::size_t>(m), {});
        udiag_.assign(static_cast<std::size_t>(m), 0.0);
        prow_.assign(static_cast<std::size_t>(m), -1);
        pinv_.assign(static_cast<std::size_t>(m), -1);
        q_.resize(static_cast<std::size_t>(m));
        etas_.clear();
        x_.assign(static_cast<std::size_t>(m), 0.0);
        mark_.assign(static_cast<std::size_t>(m), -1);
        stamp_ = 0;
        topo_.resize(static_cast<std::size_t>(m));
        stack_.resize(static_cast<std::size_t>(m));
        citer_.resize(static_cast<std::size_t>(m));
        work_.assign(static_cast<std::size_t>(m), 0.0);

        std::vector<int> rows;
        std::vector<double> vals;
        std::vector<std::pair<int, int>> order(static_cast<std::size_t>(m));
        for (int p = 0; p < m; ++p) {
            rows.clear();
            vals.clear();
            basis_col(p, rows, vals);
            order[(std::size_t)p] = {static_cast<int>(rows.size()), p};
        }
        std::sort(order.begin(), order.end());
        for (int k = 0; k < m; ++k) q_[(std::size_t)k] = order[(std::size_t)k].second;

        for (int k = 0; k < m; ++k) {
            rows.clear();
            vals.clear();
            basis_col(q_[(std::size_t)k], rows, vals);
            int top = sparse_solve(rows, vals);
            int piv = -1;
            double best = 0.0;
            for (int t = top; t < m_; ++t) {
                int i = topo_[(std::size_t)t];
                if (pinv_[(std::size_t)i] >= 0) continue;
                double a = std::abs(x_[(std::size_t)i]);
                if (a > best) {
                    best = a;
                    piv = i;
                }
            }
            if (piv < 0 || best < 1e-12) {
                for (int t = top; t < m_; ++t) x_[(std::size_t)topo_[(std::size_t)t]] = 0.0;
                return false;  // numerically singular basis
            }
            double pval = x_[(std::size_t)piv];
            pinv_[(std::size_t)piv] = k;
            prow_[(std::size_t)k] = piv;
            udiag_[(std::size_t)k] = pval;
            for (int t = top; t < m_; ++t) {
                int i = topo_[(std::size_t)t];
                double xi = x_[(std::size_t)i];
                x_[(std::size_t)i] = 0.0;
                if (xi == 0.0 || i == piv) continue;
                int pi = pinv_[(std::size_t)i];
                if (pi >= 0 && pi < k) {
                    ucols_[(std::size_t)k].emplace_back(pi, xi);
                } else if (pi < 0) {
                    lcols_[(std::size_t)k].emplace_back(i, xi / pval);
                }
            }
        }
        // L row indices switch from constraint space to pivot coordinates.
        for (auto& col : lcols_)
            for (auto& e : col) e.first = pinv_[(std::size_t)e.first];
        return true;
    }

    // Solves B w = a in place. Input indexed by constraint row, output by
    // basis position.
    void ftran(std::vector<double>& a) const {
        auto& w = work_;
        for (int k = 0; k < m_; ++k) w[(std::size_t)k] = a[(std::size_t)prow_[(std::size_t)k]];
        for (int j = 0; j < m_; ++j) {
            double xj = w[(std::size_t)j];
            if (xj == 0.0) continue;
            for (const auto& [r, v] : lcols_[(std::size_t)j]) w[(std::size_t)r] -= v * xj;
        }
        for (int j = m_ - 1; j >= 0; --j) {
            double xj = w[(std::size_t)j];
            if (xj != 0.0) {
                xj /= udiag_[(std::size_t)j];
                for (const auto& [r, v] : ucols_[(std::size_t)j]) w[(std::size_t)r] -= v * xj;
            } else {
                xj = 0.0;
            }
            w[(std::size_t)j] = xj;
        }
        for (int k = 0; k < m_; ++k) a[(std::size_t)q_[(std::size_t)k]] = w[(std::size_t)k];
        for (const auto& e : etas_) {
            double xp = a[(std::size_t)e.pos] / e.pivot;
            a[(std::size_t)e.pos] = xp;
            if (xp == 0.0) continue;
            for (const auto& [i, v] : e.entries)
                if (i != e.pos) a[(std::size_t)i] -= v * xp;
        }
    }

    // Solves B' y = c in place. Input indexed by basis position, output by
    // constraint row.
    void btran(std::vector<double>& c) const {
        for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
            double acc = c[(std::size_t)it->pos];
            for (const auto& [i, v] : it->entries)
                if (i != it->pos) acc -= v * c[(std::size_t)i];
            c[(std::size_t)it->pos] = acc / it->pivot;
        }
        auto& s = work_;
        for (int k = 0; k < m_; ++k) s[(std::size_t)k] = c[(std::size_t)q_[(std::size_t)k]];
        for (int j = 0; j < m_; ++j) {
            double acc = s[(std::size_t)j];
            for (const auto& [r, v] : ucols_[(std::size_t)j]) acc -= v * s[(std::size_t)r];
            s[(std::size_t)j] = acc / udiag_[(std::size_t)j];
        }
        for (int j = m_ - 1; j >= 0; --j) {
            double acc = s[(std::size_t)j];
            for (const auto& [r, v] : lcols_[(std::size_t)j]) acc -= v * s[(std::size_t)r];
            s[(std::size_t)j] = acc;
        }
        for (int k = 0; k < m_; ++k) c[(std::size_t)prow_[(std::size_t)k]] = s[(std::size_t)k];
    }

    // Basis position `pos` is replaced by a column with ftran image w.
    // Returns false when the pivot is too small to absorb as an eta.
    bool update(const std::vector<double>& w, int pos) {
        double pivot = w[(std::size_t)pos];
        if (std::abs(pivot) < 1e-9) return false;
        Eta e;
        e.pos = pos;
        e.pivot = pivot;
        for (int i = 0; i < m_; ++i)
            if (w[(std::size_t)i] != 0.0) e.entries.emplace_back(i, w[(std::size_t)i]);
        etas_.push_back(std::move(e));
        return true;
    }

private:
    struct Eta {
        int pos = 0;
        double pivot = 1.0;
        std::vector<std::pair<int, double>> entries;
    };

    // Scatters the column, discovers the solve pattern by DFS over pivoted
    // L columns, and eliminates in topological order. Returns the start
    // index of the pattern in topo_.
    int sparse_solve(const std::vector<int>& rows, const std::vector<double>& vals) {
        int top = m_;
        for (int root : rows) {
            if (mark_[(std::size_t)root] == stamp_) continue;
            int head = 0;
            stack_[0] = root;
            citer_[0] = 0;
            mark_[(std::size_t)root] = stamp_;
            while (head >= 0) {
                int node = stack_[(std::size_t)head];
                int j = pinv_[(std::size_t)node];
                bool descended = false;
                if (j >= 0) {
                    auto& col = lcols_[(std::size_t)j];
                    int& ci = citer_[(std::size_t)head];
                    while (ci < static_cast<int>(col.size())) {
                        int child = col[(std::size_t)ci].first;
                        ++ci;
                        if (mark_[(std::size_t)child] != stamp_) {
                            mark_[(std::size_t)child] = stamp_;
                            ++head;
                            stack_[(std::size_t)head] = child;
                            citer_[(std::size_t)head] = 0;
                            descended = true;
                            break;
                        }
                    }
                }
                if (!descended) {
                    topo_[(std::size_t)--top] = node;
                    --head;
                }
            }
        }
        ++stamp_;
        for (std::size_t t = 0; t < rows.size(); ++t) x_[(std::size_t)rows[t]] += vals[t];
        for (int t = top; t < m_; ++t) {
            int i = topo_[(std::size_t)t];
            int j = pinv_[(std::size_t)i];
            if (j < 0) continue;
            double xi = x_[(std::size_t)i];
            if (xi == 0.0) continue;
            for (const auto& [r, v] : lcols_[(std::size_t)j]) x_[(std::size_t)r] -= v * xi;
        }
        return top;
    }

    int m_ = 0;
    std::vector<std::vector<std::pair<int, double>>> lcols_, ucols_;
    std::vector<double> udiag_;
    std::vector<int> prow_, pinv_, q_;
    std::vector<Eta> etas_;
    std::vector<double> x_;
    mutable std::vector<double> work_;
    std::vector<int> mark_, topo_, stack_, citer_;
    int stamp_ = 0;
};

enum NbStatus : uint8_t { AtLower = 0, AtUpper = 1, Free = 2 };

class BoundedSimplex {
public:
    BoundedSimplex(const lp::LpInstance& inst, const Tolerances& tol, const SnapshotFn& snap)
        : inst_(inst), tol_(tol), snapshot_(snap) {}

    Solution run();

private:
    void build_arrays();
    void equilibrate();
    void init_basis();
    bool refactorize();
    void recompute_basic_values();
    double max_infeasibility() const;
    double infeasibility_sum() const;
    void phase_costs(int phase, std::vector<double>& cb) const;
    double nonbasic_value(int j) const;
    template <typename Fn>
    void for_column(int j, Fn&& fn) const;
    double column_dot(int j, const std::vector<double>& y) const;
    Solution extract(Status status);
    void emit_snapshot(int phase);

    const lp::LpInstance& inst_;
    Tolerances tol_;
    SnapshotFn snapshot_;

    int m_ = 0, n_ = 0, ncols_ = 0;
    Csc a_;
    std::vector<double> lb_, ub_, cost_, rhs_;
    std::vector<double> rowscale_, colscale_;

    std::vector<int> basis_;   // position -> column
    std::vector<int> where_;   // column -> position or -1
    std::vector<uint8_t> nb_;  // column -> NbStatus when nonbasic
    std::vector<double> xb_;   // position -> value
    BasisFactor factor_;
    long iterations_ = 0;
    bool built_ = false;
};

void BoundedSimplex::build_arrays() {
    m_ = inst_.num_rows();
    n_ = inst_.num_vars();
    ncols_ = n_ + m_;

    a_.m = m_;
    a_.n = n_;
    std::vector<int> count((std::size_t)n_, 0);
    for (int i = 0; i < m_; ++i)
        for (const auto& e : inst_.row(i).entries) count[(std::size_t)e.var]++;
    a_.ptr.assign((std::size_t)n_ + 1, 0);
    for (int j = 0; j < n_; ++j) a_.ptr[(std::size_t)j + 1] = a_.ptr[(std::size_t)j] + count[(std::size_t)j];
    a_.idx.resize((std::size_t)a_.ptr[(std::size_t)n_]);
    a_.val.resize(a_.idx.size());
    std::vector<int> fill(a_.ptr.begin(), a_.ptr.end() - 1);
    for (int i = 0; i < m_; ++i) {
        for (const auto& e : inst_.row(i).entries) {
            int& pos = fill[(std::size_t)e.var];
            a_.idx[(std::size_t)pos] = i;
            a_.val[(std::size_t)pos] = e.coef;
            ++pos;
        }
    }

    lb_.assign((std::size_t)ncols_, 0.0);
    ub_.assign((std::size_t)ncols_, 0.0);
    cost_.assign((std::size_t)ncols_, 0.0);
    for (int j = 0; j < n_; ++j) {
        const auto& v = inst_.variable(j);
        lb_[(std::size_t)j] = v.lower;
        ub_[(std::size_t)j] = v.upper;
        cost_[(std::size_t)j] = v.objective;
    }
    rhs_.resize((std::size_t)m_);
    for (int i = 0; i < m_; ++i) {
        const auto& r = inst_.row(i);
        rhs_[(std::size_t)i] = r.rhs;
        std::size_t lj = (std::size_t)(n_ + i);
        switch (r.sense) {
            case lp::Sense::LessEqual:
                lb_[lj] = 0.0;
                ub_[lj] = kInf;
                break;
            case lp::Sense::GreaterEqual:
                lb_[lj] = -kInf;
                ub_[lj] = 0.0;
                break;
            case lp::Sense::Equal:
                lb_[lj] = 0.0;
                ub_[lj] = 0.0;
                break;
        }
    }
    rowscale_.assign((std::size_t)m_, 1.0);
    colscale_.assign((std::size_t)ncols_, 1.0);
}

void BoundedSimplex::equilibrate() {
    if (!tol_.scale) return;
    std::vector<double> rs((std::size_t)m_);
    for (int pass = 0; pass < 2; ++pass) {
        std::vector<double> rmax((std::size_t)m_, 0.0), rmin((std::size_t)m_, kInf);
        for (std::size_t k = 0; k < a_.val.size(); ++k) {
            double v = std::abs(a_.val[k]);
            if (v == 0.0) continue;
            std::size_t i = (std::size_t)a_.idx[k];
            rmax[i] = std::max(rmax[i], v);
            rmin[i] = std::min(rmin[i], v);
        }
        for (int i = 0; i < m_; ++i) {
            std::size_t si = (std::size_t)i;
            double s = 1.0;
            if (rmax[si] > 0.0) s = 1.0 / std::sqrt(rmax[si] * rmin[si]);
            if (!std::isfinite(s) || s <= 0.0) s = 1.0;
            rs[si] = s;
            rowscale_[si] *= s;
        }
        for (std::size_t k = 0; k < a_.val.size(); ++k) a_.val[k] *= rs[(std::size_t)a_.idx[k]];
        for (int j = 0; j < n_; ++j) {
            std::size_t sj = (std::size_t)j;
            double cmax = 0.0, cmin = kInf;
            for (int k = a_.ptr[sj]; k < a_.ptr[sj + 1]; ++k) {
                double v = std::abs(a_.val[(std::size_t)k]);
                if (v == 0.0) continue;
                cmax = std::max(cmax, v);
                cmin = std::min(cmin, v);
            }
            if (cmax == 0.0) continue;
            double s = 1.0 / std::sqrt(cmax * cmin);
            if (!std::isfinite(s) || s <= 0.0) continue;
            colscale_[sj] *= s;
            for (int k = a_.ptr[sj]; k < a_.ptr[sj + 1]; ++k) a_.val[(std::size_t)k] *= s;
        }
    }
    for (int j = 0; j < n_; ++j) {
        std::size_t sj = (std::size_t)j;
        double s = colscale_[sj];
        cost_[sj] *= s;
        if (std::isfinite(lb_[sj])) lb_[sj] /= s;
        if (std::isfinite(ub_[sj])) ub_[sj] /= s;
    }
    for (int i = 0; i < m_; ++i) {
        std::size_t si = (std::size_t)i;
        std::size_t lj = (std::size_t)(n_ + i);
        rhs_[si] *= rowscale_[si];
        colscale_[lj] = 1.0 / rowscale_[si];
        double s = colscale_[lj];
        if (std::isfinite(lb_[lj])) lb_[lj] /= s;
        if (std::isfinite(ub_[lj])) ub_[lj] /= s;
    }
}

double BoundedSimplex::nonbasic_value(int j) const {
    std::size_t sj = (std::size_t)j;
    switch (nb_[sj]) {
        case AtLower: return lb_[sj];
        case AtUpper: return ub_[sj];
        default: return 0.0;
    }
}

template <typename Fn>
void BoundedSimplex::for_column(int j, Fn&& fn) const {
    if (j < n_) {
        std::size_t sj = (std::size_t)j;
        for (int k = a_.ptr[sj]; k < a_.ptr[sj + 1]; ++k)
            fn(a_.idx[(std::size_t)k], a_.val[(std::size_t)k]);
    } else {
        fn(j - n_, 1.0);
    }
}

double BoundedSimplex::column_dot(int j, const std::vector<double>& y) const {
    double acc = 0.0;
    for_column(j, [&](int i, double v) { acc += v * y[(std::size_t)i]; });
    return acc;
}

void BoundedSimplex::init_basis() {
    basis_.resize((std::size_t)m_);
    where_.assign((std::size_t)ncols_, -1);
    nb_.assign((std::size_t)ncols_, AtLower);
    for (int j = 0; j < ncols_; ++j) {
        std::size_t sj = (std::size_t)j;
        if (std::isfinite(lb_[sj])) nb_[sj] = AtLower;
        else if (std::isfinite(ub_[sj])) nb_[sj] = AtUpper;
        else nb_[sj] = Free;
    }
    for (int i = 0; i < m_; ++i) {
        basis_[(std::size_t)i] = n_ + i;
        where_[(std::size_t)(n_ + i)] = i;
    }
    xb_.assign((std::size_t)m_, 0.0);
}

bool BoundedSimplex::refactorize() {
    return factor_.factor(m_, [&](int pos, std::vector<int>& rows, std::vector<double>& vals) {
        for_column(basis_[(std::size_t)pos], [&](int i, double v) {
            rows.push_back(i);
            vals.push_back(v);
        });
    });
}

void BoundedSimplex::recompute_basic_values() {
    std::vector<double> r = rhs_;
    for (int j = 0; j < ncols_; ++j) {
        if (where_[(std::size_t)j] >= 0) continue;
        double v = nonbasic_value(j);
        if (v == 0.0) continue;
        for_column(j, [&](int i, double a) { r[(std::size_t)i] -= a * v; });
    }
    factor_.ftran(r);
    xb_ = r;
}

double BoundedSimplex::max_infeasibility() const {
    double worst = 0.0;
    for (int k = 0; k < m_; ++k) {
        std::size_t sc = (std::size_t)basis_[(std::size_t)k];
        double v = xb_[(std::size_t)k];
        if (v < lb_[sc]) worst = std::max(worst, lb_[sc] - v);
        else if (v > ub_[sc]) worst = std::max(worst, v - ub_[sc]);
    }
    return worst;
}

double BoundedSimplex::infeasibility_sum() const {
    double sum = 0.0;
    for (int k = 0; k < m_; ++k) {
        std::size_t sc = (std::size_t)basis_[(std::size_t)k];
        double v = xb_[(std::size_t)k];
        if (v < lb_[sc]) sum += lb_[sc] - v;
        else if (v > ub_[sc]) sum += v - ub_[sc];
    }
    return sum;
}

void BoundedSimplex::phase_costs(int phase, std::vector<double>& cb) const {
    cb.assign((std::size_t)m_, 0.0);
    double ftol = tol_.feasibility;
    for (int k = 0; k < m_; ++k) {
        std::size_t sc = (std::size_t)basis_[(std::size_t)k];
        if (phase == 1) {
            double v = xb_[(std::size_t)k];
            if (v < lb_[sc] - ftol) cb[(std::size_t)k] = -1.0;
            else if (v > ub_[sc] + ftol) cb[(std::size_t)k] = 1.0;
        } else {
            cb[(std::size_t)k] = cost_[sc];
        }
    }
}

void BoundedSimplex::emit_snapshot(int phase) {
    if (!snapshot_) return;
    IterationSnapshot s;
    s.phase = phase;
    s.iteration = iterations_;
    s.infeasibility = infeasibility_sum();
    // Scaling leaves c'x invariant, so this is the true objective.
    double obj = 0.0;
    for (int j = 0; j < n_; ++j) {
        std::size_t sj = (std::size_t)j;
        double v = where_[sj] >= 0 ? xb_[(std::size_t)where_[sj]] : nonbasic_value(j);
        obj += cost_[sj] * v;
    }
    s.objective = obj;
    snapshot_(s);
}

Solution BoundedSimplex::run() {
    auto issues = inst_.structural_issues();
    if (!issues.empty())
        throw std::invalid_argument("LP instance is malformed: " + issues.front());

    build_arrays();
    equilibrate();
    init_basis();
    built_ = true;
    for (int j = 0; j < ncols_; ++j)
        if (lb_[(std::size_t)j] > ub_[(std::size_t)j]) return extract(Status::Infeasible);

    if (!refactorize()) return extract(Status::NumericalFailure);
    recompute_basic_values();

    long max_iter = tol_.max_iterations > 0 ? tol_.max_iterations
                                            : 10000 + 40L * static_cast<long>(m_ + n_);
    const double ftol = tol_.feasibility;
    const double dtol = tol_.optimality;
    const int refactor_every = 64;

    int phase = max_infeasibility() > ftol ? 1 : 2;
    bool bland = false;
    long stalled = 0;
    int certify_retries = 0;

    std::vector<double> y((std::size_t)m_);
    std::vector<double> alpha((std::size_t)m_);

    while (true) {
        if (iterations_ >= max_iter) return extract(Status::IterationLimit);

        if (factor_.eta_count() >= refactor_every) {
            if (!refactorize()) return extract(Status::NumericalFailure);
            recompute_basic_values();
        }

        if (phase == 1 && max_infeasibility() <= ftol) {
            if (!refactorize()) return extract(Status::NumericalFailure);
            recompute_basic_values();
            if (max_infeasibility() <= 10.0 * ftol) {
                phase = 2;
                bland = false;
                stalled = 0;
                continue;
            }
        }

        phase_costs(phase, y);
        factor_.btran(y);

        // Pricing: Dantzig by default, lowest index once Bland's rule is on.
        int enter = -1;
        int dir = 0;
        double best_violation = dtol;
        for (int j = 0; j < ncols_; ++j) {
            std::size_t sj = (std::size_t)j;
            if (where_[sj] >= 0) continue;
            if (lb_[sj] == ub_[sj]) continue;
            double cj = phase == 2 ? cost_[sj] : 0.0;
            double d = cj - column_dot(j, y);
            int cand_dir = 0;
            double violation = 0.0;
            if (nb_[sj] == AtLower) {
                if (d < -best_violation) {
                    cand_dir = 1;
                    violation = -d;
                }
            } else if (nb_[sj] == AtUpper) {
                if (d > best_violation) {
                    cand_dir = -1;
                    violation = d;
                }
            } else {
                if (std::abs(d) > best_violation) {
                    cand_dir = d < 0 ? 1 : -1;
                    violation = std::abs(d);
                }
            }
            if (cand_dir != 0) {
                enter = j;
                dir = cand_dir;
                if (bland) break;
                best_violation = violation;
            }
        }

        bool fresh = factor_.eta_count() == 0;
        if (enter < 0) {
            if (!fresh) {
                // Re-price against a clean factorization before concluding.
                if (!refactorize()) return extract(Status::NumericalFailure);
                recompute_basic_values();
                continue;
            }
            if (phase == 1) {
                if (max_infeasibility() <= 10.0 * ftol) {
                    phase = 2;
                    bland = false;
                    stalled = 0;
                    continue;
                }
                return extract(Status::Infeasible);
            }
            if (max_infeasibility() > 10.0 * ftol && certify_retries < 3) {
                ++certify_retries;
                phase = 1;
                bland = false;
                stalled = 0;
                continue;
            }
            return extract(Status::Optimal);
        }

        std::fill(alpha.begin(), alpha.end(), 0.0);
        for_column(enter, [&](int i, double v) { alpha[(std::size_t)i] = v; });
        factor_.ftran(alpha);

        std::size_t se = (std::size_t)enter;
        const bool in_phase1 = phase == 1;
        const double pivtol = 1e-9;
        double theta_limit = ub_[se] - lb_[se];

        // Blocking step length of basic position k toward `side`, with an
        // optional feasibility slack that relaxes the bound (Harris pass 1).
        auto block_theta = [&](int k, double slack, double& theta, int& side) -> bool {
            std::size_t sc = (std::size_t)basis_[(std::size_t)k];
            double delta = dir * alpha[(std::size_t)k];
            if (std::abs(delta) < pivtol) return false;
            double v = xb_[(std::size_t)k];
            bool below = in_phase1 && v < lb_[sc] - ftol;
            bool above = in_phase1 && v > ub_[sc] + ftol;
            if (delta > 0.0) {  // basic value decreases
                if (below) return false;
                double bound = above ? ub_[sc] : lb_[sc];
                if (!std::isfinite(bound)) return false;
                theta = (v - (bound - slack)) / delta;
                side = above ? AtUpper : AtLower;
                return true;
            }
            // basic value increases
            if (above) return false;
            double bound = below ? lb_[sc] : ub_[sc];
            if (!std::isfinite(bound)) return false;
            theta = (v - (bound + slack)) / delta;
            side = below ? AtLower : AtUpper;
            return true;
        };

        double theta_max = theta_limit;
        for (int k = 0; k < m_; ++k) {
            double th;
            int side;
            if (!block_theta(k, ftol, th, side)) continue;
            if (th < 0.0) th = 0.0;
            theta_max = std::min(theta_max, th);
        }

        int leave = -1;
        int leave_side = AtLower;
        double best_pivot = 0.0;
        for (int k = 0; k < m_; ++k) {
            double th;
            int side;
            if (!block_theta(k, 0.0, th, side)) continue;
            if (th < 0.0) th = 0.0;
            if (th > theta_max * (1.0 + 1e-9) + 1e-15) continue;
            if (bland) {
                if (leave < 0 || basis_[(std::size_t)k] < basis_[(std::size_t)leave]) {
                    leave = k;
                    leave_side = side;
                }
            } else {
                double p = std::abs(alpha[(std::size_t)k]);
                if (p > best_pivot) {
                    best_pivot = p;
                    leave = k;
                    leave_side = side;
                }
            }
        }

        double theta;
        if (leave < 0) {
            if (std::isfinite(theta_limit)) {
                // Bound flip: entering variable crosses to its other bound.
                theta = theta_limit;
                for (int k = 0; k < m_; ++k)
                    xb_[(std::size_t)k] -= dir * theta * alpha[(std::size_t)k];
                nb_[se] = nb_[se] == AtLower ? AtUpper : AtLower;
                ++iterations_;
                stalled = 0;
                bland = false;
                emit_snapshot(phase);
                continue;
            }
            if (!fresh) {
                if (!refactorize()) return extract(Status::NumericalFailure);
                recompute_basic_values();
                continue;
            }
            return extract(in_phase1 ? Status::NumericalFailure : Status::Unbounded);
        }

        {
            std::size_t sc = (std::size_t)basis_[(std::size_t)leave];
            double delta = dir * alpha[(std::size_t)leave];
            double bound = leave_side == AtLower ? lb_[sc] : ub_[sc];
            theta = (xb_[(std::size_t)leave] - bound) / delta;
            if (theta < 0.0) theta = 0.0;
        }

        for (int k = 0; k < m_; ++k) xb_[(std::size_t)k] -= dir * theta * alpha[(std::size_t)k];
        double enter_value = nonbasic_value(enter) + dir * theta;

        int leaving_col = basis_[(std::size_t)leave];
        where_[(std::size_t)leaving_col] = -1;
        nb_[(std::size_t)leaving_col] = static_cast<uint8_t>(leave_side);
        basis_[(std::size_t)leave] = enter;
        where_[se] = leave;
        xb_[(std::size_t)leave] = enter_value;

        if (!factor_.update(alpha, leave)) {
            if (!refactorize()) return extract(Status::NumericalFailure);
            recompute_basic_values();
        }
        ++iterations_;

        // A positive step strictly improves the phase objective; only
        // degenerate pivots count toward the Bland trigger.
        if (theta > 1e-13) {
            stalled = 0;
            bland = false;
        } else {
            ++stalled;
            if (stalled > tol_.bland_trigger) bland = true;
        }
        emit_snapshot(phase);
    }
}

Solution BoundedSimplex::extract(Status status) {
    Solution sol;
    sol.status = status;
    sol.iterations = iterations_;
    sol.values.assign((std::size_t)inst_.num_vars(), 0.0);
    sol.reduced_costs.assign((std::size_t)inst_.num_vars(), 0.0);
    sol.row_duals.assign((std::size_t)inst_.num_rows(), 0.0);
    sol.row_activity.assign((std::size_t)inst_.num_rows(), 0.0);
    if (!built_) return sol;

    for (int j = 0; j < n_; ++j) {
        std::size_t sj = (std::size_t)j;
        double v = where_[sj] >= 0 ? xb_[(std::size_t)where_[sj]] : nonbasic_value(j);
        sol.values[sj] = v * colscale_[sj];
    }
    if (status == Status::Optimal || status == Status::IterationLimit) {
        std::vector<double> y((std::size_t)m_);
        phase_costs(2, y);
        factor_.btran(y);
        for (int i = 0; i < m_; ++i)
            sol.row_duals[(std::size_t)i] = y[(std::size_t)i] * rowscale_[(std::size_t)i];
        for (int j = 0; j < n_; ++j) {
            std::size_t sj = (std::size_t)j;
            double d = cost_[sj] - column_dot(j, y);
            sol.reduced_costs[sj] = d / colscale_[sj];
        }
    }

    double obj = 0.0;
    double max_violation = 0.0;
    for (int j = 0; j < inst_.num_vars(); ++j) {
        std::size_t sj = (std::size_t)j;
        obj += inst_.variable(j).objective * sol.values[sj];
        max_violation = std::max(max_violation, inst_.variable(j).lower - sol.values[sj]);
        max_violation = std::max(max_violation, sol.values[sj] - inst_.variable(j).upper);
    }
    sol.objective = obj;
    for (int i = 0; i < inst_.num_rows(); ++i) {
        const auto& r = inst_.row(i);
        double act = 0.0;
        for (const auto& e : r.entries) act += e.coef * sol.values[(std::size_t)e.var];
        sol.row_activity[(std::size_t)i] = act;
        double viol = 0.0;
        switch (r.sense) {
            case lp::Sense::LessEqual: viol = act - r.rhs; break;
            case lp::Sense::GreaterEqual: viol = r.rhs - act; break;
            case lp::Sense::Equal: viol = std::abs(act - r.rhs); break;
        }
        max_violation = std::max(max_violation, viol);
    }
    sol.primal_residual = std::max(0.0, max_violation);
    return sol;
}

}  // namespace

const char* status_name(Status status) {
    switch (status) {
        case Status::Optimal: return "optimal";
        case Status::Infeasible: return "infeasible";
        case Status::Unbounded: return "unbounded";
        case Status::IterationLimit: return "iteration_limit";
        case Status::NumericalFailure: return "numerical_failure";
    }
    return "numerical_failure";
}

Solution solve(const lp::LpInstance& instance, const Tolerances& tol, const SnapshotFn& snapshot) {
    BoundedSimplex solver(instance, tol, snapshot);
    return solver.run();
}

}  // namespace enplan::simplex
