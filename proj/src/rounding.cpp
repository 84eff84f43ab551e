#include "turan/rounding.hpp"

#include "exact_linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace turan {

using detail::RationalMatrix;

std::vector<Integer> RoundingOptions::default_denominators() {
    std::vector<Integer> out;
    for (unsigned bits = 8; bits <= 32; bits += 4) out.push_back(Integer(1) << bits);
    return out;
}

std::vector<Rational> RoundingOptions::default_epsilons() {
    std::vector<Rational> out{Rational(0)};
    Integer p = 1;
    for (int k = 1; k <= 10; ++k) {
        p *= 10;
        if (k >= 5) out.push_back(make_rational(1, p));
    }
    std::sort(out.begin() + 1, out.end());
    return out;
}

std::vector<std::vector<Rational>> construction_kernel_vectors(const LimitConstruction& limit,
                                                               const FlagContext& context) {
    const int s = context.type_order();
    const int m = context.flag_order();
    const int classes = static_cast<int>(limit.weights.size());
    std::vector<std::vector<Rational>> out;
    std::vector<int> class_of(m, 0);

    auto for_each_assignment = [&](int from, int to, auto&& body) {
        // all class assignments of positions [from, to), odometer style
        for (int v = from; v < to; ++v) class_of[v] = 0;
        while (true) {
            body();
            int v = to - 1;
            while (v >= from && ++class_of[v] == classes) class_of[v--] = 0;
            if (v < from) return;
        }
    };

    for_each_assignment(0, s, [&] {
        const std::span<const int> labels(class_of.data(), static_cast<std::size_t>(s));
        for (int c : labels)
            if (sgn(limit.weights[c]) <= 0) return;
        if (pattern_graph(limit, labels) != context.type()) return;
        std::vector<Rational> v(context.dimension(), Rational(0));
        Rational covered = 0;
        const std::vector<int> saved(class_of.begin(), class_of.begin() + s);
        for_each_assignment(s, m, [&] {
            Rational w = 1;
            for (int u = s; u < m; ++u) w *= limit.weights[class_of[u]];
            if (sgn(w) == 0) return;
            const ThreeGraph flag = pattern_graph(limit, class_of);
            const int idx = context.find_flag(flag_representative(flag, s));
            if (idx < 0) return;
            v[idx] += w;
            covered += w;
        });
        std::copy(saved.begin(), saved.end(), class_of.begin());
        // Flags missing from the context would make the vector incomplete.
        if (covered == 1) out.push_back(std::move(v));
    });
    return out;
}

namespace {

FieldMatrix to_field(const RationalMatrix& m) {
    FieldMatrix out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (const Rational& x : m[i]) out[i].emplace_back(x);
    return out;
}

Eigen::MatrixXd to_eigen(const DenseMatrix& m) {
    Eigen::MatrixXd out(m.n, m.n);
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j) out(i, j) = 0.5 * (m(i, j) + m(j, i));
    return out;
}

Eigen::MatrixXd to_eigen(const RationalMatrix& m, std::size_t cols) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(m.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j) out(i, j) = m[i][j].get_d();
    return out;
}

// A low-height rational whose double is exactly x is kept as is; anything
// else goes to the nearest multiple of 1/q. A shared denominator keeps exact
// elimination cheap.
Rational round_to_grid(double x, const Integer& q) {
    static const Integer snap_limit = Integer(1) << 16;
    const Rational snapped = rationalize(x, q < snap_limit ? q : snap_limit);
    if (snapped.get_d() == x) return snapped;
    const Rational scaled = exact_rational(x) * q + Rational(1, 2);
    return make_rational(floor(scaled), q);
}

RationalMatrix rationalize_matrix(const Eigen::MatrixXd& m, const Integer& q, const Rational& eps) {
    const auto n = static_cast<std::size_t>(m.rows());
    RationalMatrix out(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(j);
            out[i][j] = out[j][i] = round_to_grid(0.5 * (m(a, b) + m(b, a)), q);
        }
    for (std::size_t i = 0; i < n; ++i) out[i][i] += eps;
    return out;
}

// B R B^T for a basis matrix B (N x r, row-major) and symmetric R (r x r).
RationalMatrix expand(const RationalMatrix& basis, std::size_t r, const RationalMatrix& inner) {
    const std::size_t n = basis.size();
    RationalMatrix br(n, std::vector<Rational>(r, Rational(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < r; ++k) {
            if (sgn(basis[i][k]) == 0) continue;
            for (std::size_t j = 0; j < r; ++j)
                if (sgn(inner[k][j]) != 0) br[i][j] += basis[i][k] * inner[k][j];
        }
    RationalMatrix out(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            Rational sum = 0;
            for (std::size_t k = 0; k < r; ++k)
                if (sgn(br[i][k]) != 0 && sgn(basis[j][k]) != 0) sum += br[i][k] * basis[j][k];
            out[i][j] = out[j][i] = sum;
        }
    return out;
}

// Complement basis and the numeric inner matrix for one block.
struct BlockPlan {
    std::size_t dim = 0;
    std::size_t rank = 0;     // columns of the basis
    RationalMatrix basis;     // dim x rank, integer entries
    Eigen::MatrixXd inner;    // numeric R with Q ~ B R B^T
    std::size_t kernel_from_construction = 0;
    std::size_t kernel_numeric = 0;
};

double vector_residual(const Eigen::MatrixXd& q, const Eigen::VectorXd& v) { return (q * v).norm() / v.norm(); }

// Rational vectors spanning (approximately) the columns of w, obtained by
// normalizing pivot rows to the identity and rationalizing the rest.
std::vector<std::vector<Rational>> rationalize_span(const Eigen::MatrixXd& q, const Eigen::MatrixXd& w, double tol) {
    const Eigen::Index k = w.cols();
    if (k == 0) return {};
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(w.transpose());
    const Eigen::VectorXi piv = qr.colsPermutation().indices();
    Eigen::MatrixXd sel(k, k);
    for (Eigen::Index i = 0; i < k; ++i) sel.row(i) = w.row(piv(i));
    const Eigen::MatrixXd reduced = w * sel.inverse();

    for (long max_den : {16L, 256L, 4096L, 65536L, 1048576L}) {
        std::vector<std::vector<Rational>> out;
        bool ok = true;
        for (Eigen::Index c = 0; c < k && ok; ++c) {
            std::vector<Rational> v(static_cast<std::size_t>(w.rows()));
            Eigen::VectorXd approx(w.rows());
            for (Eigen::Index r = 0; r < w.rows(); ++r) {
                v[static_cast<std::size_t>(r)] = rationalize(reduced(r, c), Integer(max_den));
                approx(r) = v[static_cast<std::size_t>(r)].get_d();
            }
            ok = vector_residual(q, approx) < tol;
            out.push_back(std::move(v));
        }
        if (ok) return out;
    }
    return {};
}

BlockPlan plan_block(const DenseMatrix& numeric, const FlagContext& context, const RoundingOptions& options) {
    BlockPlan plan;
    plan.dim = context.dimension();
    const Eigen::MatrixXd q = to_eigen(numeric);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(q);
    const Eigen::VectorXd values = eig.eigenvalues();
    const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
    const double threshold = options.kernel_tolerance * scale;
    std::vector<Eigen::Index> kernel_idx;
    for (Eigen::Index i = 0; i < values.size(); ++i)
        if (values(i) < threshold) kernel_idx.push_back(i);
    const double check = std::sqrt(options.kernel_tolerance) * scale;

    RationalMatrix kernel;
    if (options.construction) {
        for (auto& v : construction_kernel_vectors(*options.construction, context)) {
            Eigen::VectorXd approx(static_cast<Eigen::Index>(v.size()));
            for (std::size_t i = 0; i < v.size(); ++i) approx(static_cast<Eigen::Index>(i)) = v[i].get_d();
            if (vector_residual(q, approx) < check) kernel.push_back(std::move(v));
        }
        kernel.erase(std::unique(kernel.begin(), kernel.end()), kernel.end());
    }
    std::size_t exact_rank = detail::rank(kernel, plan.dim);
    plan.kernel_from_construction = exact_rank;

    if (kernel_idx.size() > exact_rank) {
        // Numeric kernel directions not explained by the construction.
        Eigen::MatrixXd u(q.rows(), static_cast<Eigen::Index>(kernel_idx.size()));
        for (std::size_t i = 0; i < kernel_idx.size(); ++i) u.col(static_cast<Eigen::Index>(i)) = eig.eigenvectors().col(kernel_idx[i]);
        if (exact_rank > 0) {
            Eigen::MatrixXd k = to_eigen(kernel, plan.dim).transpose();
            Eigen::HouseholderQR<Eigen::MatrixXd> kq(k);
            const Eigen::MatrixXd basis = kq.householderQ() * Eigen::MatrixXd::Identity(k.rows(), k.cols());
            const Eigen::MatrixXd residual = u - basis * (basis.transpose() * u);
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(residual, Eigen::ComputeThinU);
            const Eigen::Index extra = static_cast<Eigen::Index>(kernel_idx.size() - exact_rank);
            u = svd.matrixU().leftCols(extra);
        }
        auto extra = rationalize_span(q, u, check);
        if (!extra.empty() || u.cols() == 0) {
            for (auto& v : extra) kernel.push_back(std::move(v));
            exact_rank = detail::rank(kernel, plan.dim);
        }
    }
    plan.kernel_numeric = exact_rank - plan.kernel_from_construction;

    if (kernel.empty()) {
        plan.basis.assign(plan.dim, std::vector<Rational>(plan.dim, Rational(0)));
        for (std::size_t i = 0; i < plan.dim; ++i) plan.basis[i][i] = 1;
        plan.rank = plan.dim;
    } else {
        const auto cols = detail::nullspace(kernel, plan.dim);
        plan.rank = cols.size();
        plan.basis.assign(plan.dim, std::vector<Rational>(plan.rank));
        for (std::size_t c = 0; c < plan.rank; ++c)
            for (std::size_t i = 0; i < plan.dim; ++i) plan.basis[i][c] = cols[c][i];
    }
    if (plan.rank > 0) {
        const Eigen::MatrixXd b = to_eigen(plan.basis, plan.rank);
        const Eigen::MatrixXd g = (b.transpose() * b).inverse();
        plan.inner = g * b.transpose() * q * b * g;
    }
    return plan;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(3);
    os << x;
    return os.str();
}

// Coefficient of R_ij (i <= j) in <B R B^T, P> = sum_kl R_kl (B^T P B)_kl,
// where R_ij and R_ji move together.
Rational inner_coefficient(const PairDensityMatrix& pd, const RationalMatrix& basis, std::size_t i, std::size_t j) {
    Rational sum = 0;
    for (const auto& e : pd.entries) {
        const std::vector<Rational>& ra = basis[e.row];
        const std::vector<Rational>& rb = basis[e.col];
        Rational t = ra[i] * rb[j];
        if (e.row != e.col) t += rb[i] * ra[j];
        if (sgn(t) != 0) sum += t * e.count;
    }
    if (i != j) sum *= 2;
    return sum / pd.denominator;
}

class Search {
public:
    Search(const Family& family, int n, const NumericSolution& numeric, const FieldElement& target,
           const RoundingOptions& options)
        : family_(family), n_(n), numeric_(numeric), target_(target), options_(options) {
        admissible_ = generate_admissible(n, family);
        if (admissible_.empty()) throw DomainError("round_solution: no admissible graphs");
        contexts_ = enumerate_types_and_flags(n, admissible_);
        if (numeric.blocks.size() != contexts_.size())
            throw DomainError("round_solution: solution has " + std::to_string(numeric.blocks.size()) +
                              " blocks, the layout has " + std::to_string(contexts_.size()));
        for (std::size_t b = 0; b < contexts_.size(); ++b) {
            const DenseMatrix& m = numeric.blocks[b];
            if (m.n != static_cast<int>(contexts_[b].dimension()))
                throw DomainError("round_solution: block " + std::to_string(b) + " has the wrong dimension");
            double norm = 1;
            for (double x : m.data) norm = std::max(norm, std::abs(x));
            for (int i = 0; i < m.n; ++i)
                for (int j = 0; j < i; ++j)
                    if (std::abs(m(i, j) - m(j, i)) > 1e-6 * norm)
                        throw DomainError("round_solution: block " + std::to_string(b) + " is not symmetric");
        }
        densities_ = density_table(admissible_, contexts_);
    }

    RoundingResult run() {
        direct();
        if (result_) return finish();
        if (target_.is_rational()) {
            sharp();
            if (result_) return finish();
        }
        std::string what = "no schedule entry yields a valid certificate";
        if (!worst_slack_graph_.empty())
            what += "; best attempt's worst slack " + fmt(best_min_slack_) + " at graph " + worst_slack_graph_;
        if (!worst_pivot_block_.empty()) what += "; worst pivot " + fmt(worst_pivot_) + " in " + worst_pivot_block_;
        throw RoundingFailed(what, attempts_);
    }

private:
    RoundingResult finish() {
        result_->attempts = attempts_;
        return std::move(*result_);
    }

    Certificate certificate_for(const std::vector<FieldMatrix>& matrices) const {
        Certificate c;
        c.n = n_;
        c.family = family_;
        c.discriminant = target_.discriminant();
        c.bound = target_;
        for (std::size_t b = 0; b < contexts_.size(); ++b)
            c.blocks.push_back({contexts_[b].type(), contexts_[b].flags(), matrices[b]});
        return c;
    }

    // Slack test (cheap) then PSD test; on success stores the verified result.
    bool accept(const std::vector<FieldMatrix>& matrices, RoundingAttempt attempt) {
        const std::vector<FieldElement> slacks = slacks_for(admissible_, densities_, matrices, target_);
        std::size_t worst = 0;
        for (std::size_t h = 1; h < slacks.size(); ++h)
            if (slacks[h] < slacks[worst]) worst = h;
        if (slacks[worst].sign() < 0) {
            const double v = slacks[worst].to_double();
            if (worst_slack_graph_.empty() || v > best_min_slack_) {
                best_min_slack_ = v;
                worst_slack_graph_ = to_string(admissible_[worst]);
            }
            attempt.outcome = "negative slack " + fmt(v) + " at " + to_string(admissible_[worst]);
            attempts_.push_back(std::move(attempt));
            last_failure_psd_ = false;
            return false;
        }
        for (std::size_t b = 0; b < matrices.size(); ++b) {
            const LdltResult f = ldlt(matrices[b]);
            if (!f.positive_semidefinite) {
                const double v = f.failed_value.to_double();
                if (worst_pivot_block_.empty() || std::abs(v) < std::abs(worst_pivot_)) {
                    worst_pivot_ = v;
                    worst_pivot_block_ = "block " + std::to_string(b);
                }
                attempt.outcome = "block " + std::to_string(b) + " not PSD (" + f.reason + ", value " + fmt(v) + ")";
                attempts_.push_back(std::move(attempt));
                last_failure_psd_ = true;
                return false;
            }
        }
        Certificate c = certificate_for(matrices);
        SlackReport report = verify_certificate(c);
        attempt.outcome = "ok";
        attempts_.push_back(std::move(attempt));
        result_ = RoundingResult{std::move(c), std::move(report), {}};
        return true;
    }

    void direct() {
        std::vector<Eigen::MatrixXd> blocks;
        for (const DenseMatrix& m : numeric_.blocks) blocks.push_back(to_eigen(m));
        for (const Integer& q : options_.denominators) {
            for (const Rational& eps : options_.epsilons) {
                std::vector<FieldMatrix> matrices;
                for (const auto& b : blocks) matrices.push_back(to_field(rationalize_matrix(b, q, eps)));
                if (accept(matrices, {"direct", q, eps, ""})) return;
                // A shift only lowers slacks, so it cannot repair a slack failure.
                if (!last_failure_psd_) break;
            }
        }
    }

    double numeric_slack(std::size_t h) const {
        double s = target_.to_double() - edge_density(admissible_[h]).get_d();
        for (std::size_t b = 0; b < contexts_.size(); ++b) {
            const PairDensityMatrix& pd = densities_[h][b];
            const DenseMatrix& q = numeric_.blocks[b];
            double sum = 0;
            for (const auto& e : pd.entries) {
                const double v = 0.5 * (q(e.row, e.col) + q(e.col, e.row));
                sum += (e.row == e.col ? 1.0 : 2.0) * static_cast<double>(e.count) * v;
            }
            s -= sum / pd.denominator.get_d();
        }
        return s;
    }

    std::vector<std::size_t> tight_graphs() const {
        std::set<std::size_t> tight;
        for (std::size_t h = 0; h < admissible_.size(); ++h)
            if (numeric_slack(h) < options_.sharp_tolerance) tight.insert(h);
        if (options_.construction) {
            for (const ThreeGraph& g : limit_support(*options_.construction, n_)) {
                auto it = std::lower_bound(admissible_.begin(), admissible_.end(), g,
                                           [](const ThreeGraph& a, const ThreeGraph& b) { return a.mask() < b.mask(); });
                if (it != admissible_.end() && *it == g) tight.insert(static_cast<std::size_t>(it - admissible_.begin()));
            }
        }
        return {tight.begin(), tight.end()};
    }

    // Positions of R entries that the correction may change.
    struct Position {
        std::size_t block, i, j;
    };

    std::vector<Position> positions(const std::vector<BlockPlan>& plans, bool full) const {
        std::vector<Position> out;
        for (std::size_t b = 0; b < plans.size(); ++b)
            for (std::size_t i = 0; i < plans[b].rank; ++i)
                for (std::size_t j = i; j < (full ? plans[b].rank : i + 1); ++j) out.push_back({b, i, j});
        return out;
    }

    // Exact least-norm change of R at the positions that zeroes the given
    // slacks of the tight graphs, or nothing if impossible.
    std::optional<std::vector<Rational>> correction(const std::vector<BlockPlan>& plans, const std::vector<Position>& pos,
                                                    const std::vector<std::size_t>& tight,
                                                    const std::vector<Rational>& slack) const {
        RationalMatrix a(tight.size(), std::vector<Rational>(pos.size()));
        for (std::size_t t = 0; t < tight.size(); ++t)
            for (std::size_t p = 0; p < pos.size(); ++p)
                a[t][p] = inner_coefficient(densities_[tight[t]][pos[p].block], plans[pos[p].block].basis, pos[p].i, pos[p].j);
        RationalMatrix gram(tight.size(), std::vector<Rational>(tight.size()));
        for (std::size_t s = 0; s < tight.size(); ++s)
            for (std::size_t t = s; t < tight.size(); ++t) {
                Rational sum = 0;
                for (std::size_t p = 0; p < pos.size(); ++p)
                    if (sgn(a[s][p]) != 0 && sgn(a[t][p]) != 0) sum += a[s][p] * a[t][p];
                gram[s][t] = gram[t][s] = sum;
            }
        auto mu = detail::solve(gram, slack, tight.size());
        if (!mu) return std::nullopt;
        std::vector<Rational> delta(pos.size(), Rational(0));
        for (std::size_t p = 0; p < pos.size(); ++p)
            for (std::size_t t = 0; t < tight.size(); ++t)
                if (sgn((*mu)[t]) != 0) delta[p] += a[t][p] * (*mu)[t];
        return delta;
    }

    void sharp() {
        const std::vector<std::size_t> tight = tight_graphs();
        std::vector<BlockPlan> plans;
        for (std::size_t b = 0; b < contexts_.size(); ++b) plans.push_back(plan_block(numeric_.blocks[b], contexts_[b], options_));

        for (const Integer& q : options_.denominators) {
            for (const Rational& eps : options_.epsilons) {
                std::vector<RationalMatrix> inner;
                std::vector<FieldMatrix> expanded;
                for (const BlockPlan& p : plans) {
                    inner.push_back(p.rank ? rationalize_matrix(p.inner, q, eps) : RationalMatrix{});
                    expanded.push_back(to_field(p.rank ? expand(p.basis, p.rank, inner.back())
                                                       : RationalMatrix(p.dim, std::vector<Rational>(p.dim, Rational(0)))));
                }
                const std::vector<FieldElement> slacks = slacks_for(admissible_, densities_, expanded, target_);
                std::vector<Rational> tight_slack;
                for (std::size_t h : tight) tight_slack.push_back(slacks[h].rational_part());

                bool corrected = false;
                for (bool full : {false, true}) {
                    const std::vector<Position> pos = positions(plans, full);
                    auto delta = correction(plans, pos, tight, tight_slack);
                    if (!delta) continue;
                    std::vector<RationalMatrix> fixed = inner;
                    for (std::size_t p = 0; p < pos.size(); ++p) {
                        fixed[pos[p].block][pos[p].i][pos[p].j] += (*delta)[p];
                        if (pos[p].i != pos[p].j) fixed[pos[p].block][pos[p].j][pos[p].i] += (*delta)[p];
                    }
                    // PSD of R is the real condition; Q = B R B^T inherits it.
                    bool psd = true;
                    for (std::size_t b = 0; b < plans.size() && psd; ++b) {
                        if (!plans[b].rank) continue;
                        const LdltResult f = ldlt(to_field(fixed[b]));
                        if (!f.positive_semidefinite) {
                            psd = false;
                            const double v = f.failed_value.to_double();
                            if (worst_pivot_block_.empty() || std::abs(v) < std::abs(worst_pivot_)) {
                                worst_pivot_ = v;
                                worst_pivot_block_ = "block " + std::to_string(b) + " (inner)";
                            }
                            attempts_.push_back({full ? "sharp-full" : "sharp", q, eps,
                                                 "inner block " + std::to_string(b) + " not PSD (value " + fmt(v) + ")"});
                        }
                    }
                    last_failure_psd_ = !psd;
                    if (!psd) break;  // the full correction is larger, it will not help
                    std::vector<FieldMatrix> matrices;
                    for (std::size_t b = 0; b < plans.size(); ++b)
                        matrices.push_back(to_field(plans[b].rank ? expand(plans[b].basis, plans[b].rank, fixed[b])
                                                                  : RationalMatrix(plans[b].dim, std::vector<Rational>(plans[b].dim, Rational(0)))));
                    if (accept(matrices, {full ? "sharp-full" : "sharp", q, eps, ""})) return;
                    corrected = true;
                    break;
                }
                if (!corrected && !last_failure_psd_) {
                    attempts_.push_back({"sharp", q, eps, "tight equalities are inconsistent"});
                    break;
                }
                if (!last_failure_psd_) break;
            }
        }
    }

    const Family& family_;
    int n_;
    const NumericSolution& numeric_;
    FieldElement target_;
    const RoundingOptions& options_;
    std::vector<ThreeGraph> admissible_;
    std::vector<FlagContext> contexts_;
    DensityTable densities_;

    std::vector<RoundingAttempt> attempts_;
    std::optional<RoundingResult> result_;
    bool last_failure_psd_ = false;
    double best_min_slack_ = 0;
    std::string worst_slack_graph_;
    double worst_pivot_ = 0;
    std::string worst_pivot_block_;
};

}  // namespace

RoundingResult round_solution(const Family& family, int n, const NumericSolution& numeric, const FieldElement& target,
                              const RoundingOptions& options) {
    return Search(family, n, numeric, target, options).run();
}

}  // namespace turan
