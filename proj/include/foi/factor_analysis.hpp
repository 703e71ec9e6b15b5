#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/special_functions/gamma.hpp>

#include "foi/cell.hpp"
#include "foi/csv.hpp"
#include "foi/error.hpp"

// Exploratory factor analysis: Pearson correlation with pairwise or listwise deletion,
// principal-component extraction, varimax rotation (optionally Kaiser-normalized),
// KMO sampling adequacy, Bartlett's sphericity test and regression-method factor scores.

namespace foi::fa {

/// Observations (rows) × variables (columns) with explicit MISSING cells.
class VariableMatrix {
public:
    VariableMatrix() = default;

    VariableMatrix(std::vector<std::string> rows, std::vector<std::string> variables, std::vector<Cell> values)
        : rows_(std::move(rows)), variables_(std::move(variables)), values_(std::move(values)) {
        if (values_.size() != rows_.size() * variables_.size()) {
            throw InputError("variable matrix: grid has " + std::to_string(values_.size()) + " cells, expected " +
                             std::to_string(rows_.size() * variables_.size()));
        }
    }

    const std::vector<std::string>& row_labels() const { return rows_; }
    const std::vector<std::string>& variables() const { return variables_; }
    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return variables_.size(); }
    const Cell& at(std::size_t r, std::size_t c) const { return values_[r * cols() + c]; }

    bool row_complete(std::size_t r) const {
        for (std::size_t c = 0; c < cols(); ++c) {
            if (!at(r, c)) return false;
        }
        return true;
    }

    /// Effective observation count: rows without any MISSING cell.
    std::size_t n() const {
        std::size_t count = 0;
        for (std::size_t r = 0; r < rows(); ++r) count += row_complete(r) ? 1 : 0;
        return count;
    }

    /// Keeps the named columns, in the given order.
    VariableMatrix select(std::span<const std::string> names) const {
        std::vector<std::size_t> idx;
        for (const auto& name : names) {
            auto it = std::find(variables_.begin(), variables_.end(), name);
            if (it == variables_.end()) throw InputError("variable matrix: unknown variable '" + name + "'");
            idx.push_back(static_cast<std::size_t>(it - variables_.begin()));
        }
        std::vector<Cell> values;
        for (std::size_t r = 0; r < rows(); ++r) {
            for (auto c : idx) values.push_back(at(r, c));
        }
        return VariableMatrix(rows_, std::vector<std::string>(names.begin(), names.end()), std::move(values));
    }

private:
    std::vector<std::string> rows_;
    std::vector<std::string> variables_;
    std::vector<Cell> values_;
};

inline VariableMatrix from_table(const CsvTable& table) {
    std::vector<Cell> values;
    for (const auto& row : table.rows) values.insert(values.end(), row.begin(), row.end());
    return VariableMatrix(table.keys, table.columns, std::move(values));
}

inline VariableMatrix load_variable_matrix(const std::string& path) { return from_table(read_csv_table(path)); }

enum class MissingHandling { Pairwise, Listwise };

inline MissingHandling parse_missing_handling(std::string_view s) {
    if (s == "pairwise") return MissingHandling::Pairwise;
    if (s == "listwise") return MissingHandling::Listwise;
    throw InputError("invalid missing handling '" + std::string(s) + "' (expected pairwise or listwise)");
}

struct CorrelationMatrix {
    std::vector<std::string> variables;
    Eigen::MatrixXd r;
    Eigen::MatrixXi counts;  // observations used per entry

    std::size_t p() const { return static_cast<std::size_t>(r.rows()); }

    std::size_t min_count() const { return counts.size() == 0 ? 0 : static_cast<std::size_t>(counts.minCoeff()); }
};

/// Wraps a given matrix; checks it is square, symmetric and unit-diagonal.
inline CorrelationMatrix make_correlation(const Eigen::MatrixXd& r, std::vector<std::string> names = {}, int observations = 0) {
    if (r.rows() != r.cols()) throw DomainError("correlation matrix must be square");
    const auto p = r.rows();
    for (Eigen::Index i = 0; i < p; ++i) {
        if (std::abs(r(i, i) - 1.0) > 1e-12) throw DomainError("correlation matrix diagonal must be 1");
        for (Eigen::Index j = 0; j < i; ++j) {
            if (std::abs(r(i, j) - r(j, i)) > 1e-12) throw DomainError("correlation matrix must be symmetric");
            if (std::abs(r(i, j)) > 1.0 + 1e-12) throw DomainError("correlation entries must lie in [-1, 1]");
        }
    }
    if (names.empty()) {
        for (Eigen::Index i = 0; i < p; ++i) names.push_back("v" + std::to_string(i + 1));
    }
    if (static_cast<Eigen::Index>(names.size()) != p) throw DomainError("correlation matrix: name count does not match dimension");
    return {std::move(names), r, Eigen::MatrixXi::Constant(p, p, observations)};
}

/// Pearson correlations. Pairwise uses every row complete for the pair; listwise drops rows with any MISSING.
inline CorrelationMatrix correlation_matrix(const VariableMatrix& data, MissingHandling missing = MissingHandling::Pairwise) {
    const auto p = data.cols();
    std::vector<bool> use_row(data.rows(), true);
    if (missing == MissingHandling::Listwise) {
        for (std::size_t r = 0; r < data.rows(); ++r) use_row[r] = data.row_complete(r);
    }

    for (std::size_t c = 0; c < p; ++c) {
        std::vector<double> xs;
        for (std::size_t r = 0; r < data.rows(); ++r) {
            if (use_row[r] && data.at(r, c)) xs.push_back(*data.at(r, c));
        }
        if (xs.size() >= 2 && std::all_of(xs.begin(), xs.end(), [&](double v) { return v == xs.front(); })) {
            throw NumericalError("correlation: variable '" + data.variables()[c] + "' has zero variance");
        }
    }

    CorrelationMatrix out;
    out.variables = data.variables();
    out.r = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
    out.counts = Eigen::MatrixXi::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));

    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i; j < p; ++j) {
            std::vector<double> xs, ys;
            for (std::size_t r = 0; r < data.rows(); ++r) {
                if (!use_row[r]) continue;
                const auto& a = data.at(r, i);
                const auto& b = data.at(r, j);
                if (a && b) {
                    xs.push_back(*a);
                    ys.push_back(*b);
                }
            }
            const auto n = xs.size();
            if (n < 3) {
                throw NumericalError("correlation: fewer than 3 complete observations for pair ('" + data.variables()[i] + "', '" +
                                     data.variables()[j] + "')");
            }
            const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(n);
            const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(n);
            double sxx = 0.0, syy = 0.0, sxy = 0.0;
            for (std::size_t t = 0; t < n; ++t) {
                sxx += (xs[t] - mx) * (xs[t] - mx);
                syy += (ys[t] - my) * (ys[t] - my);
                sxy += (xs[t] - mx) * (ys[t] - my);
            }
            if (sxx == 0.0 || syy == 0.0) {
                const auto& name = sxx == 0.0 ? data.variables()[i] : data.variables()[j];
                throw NumericalError("correlation: variable '" + name + "' has zero variance over the rows paired with '" +
                                     (sxx == 0.0 ? data.variables()[j] : data.variables()[i]) + "'");
            }
            const auto ii = static_cast<Eigen::Index>(i);
            const auto jj = static_cast<Eigen::Index>(j);
            const double rho = i == j ? 1.0 : std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
            out.r(ii, jj) = out.r(jj, ii) = rho;
            out.counts(ii, jj) = out.counts(jj, ii) = static_cast<int>(n);
        }
    }
    return out;
}

struct BartlettResult {
    double chi_square = 0.0;
    int df = 0;
    double p_value = 1.0;
};

/// Bartlett's sphericity test: chi2 = -(n - 1 - (2p + 5) / 6) ln det R, df = p(p - 1) / 2.
inline BartlettResult bartlett_test(const CorrelationMatrix& corr, std::size_t n) {
    const auto p = corr.p();
    if (n <= p) throw DomainError("bartlett: need n > p (n = " + std::to_string(n) + ", p = " + std::to_string(p) + ")");
    Eigen::LLT<Eigen::MatrixXd> llt(corr.r);
    if (llt.info() != Eigen::Success) throw NumericalError("bartlett: correlation matrix is not positive definite");
    const Eigen::MatrixXd l = llt.matrixL();
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < l.rows(); ++i) log_det += 2.0 * std::log(l(i, i));
    if (!std::isfinite(log_det)) throw NumericalError("bartlett: determinant is not positive");

    BartlettResult res;
    res.df = static_cast<int>(p * (p - 1) / 2);
    const double factor = static_cast<double>(n) - 1.0 - (2.0 * static_cast<double>(p) + 5.0) / 6.0;
    res.chi_square = std::max(0.0, -factor * log_det);
    res.p_value = res.df == 0 ? 1.0 : boost::math::gamma_q(res.df / 2.0, res.chi_square / 2.0);
    return res;
}

struct KmoResult {
    double overall = 0.0;
    Eigen::VectorXd per_variable;  // MSA
};

namespace detail {

inline Eigen::MatrixXd checked_inverse(const Eigen::MatrixXd& m, const char* who) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) throw NumericalError(std::string(who) + ": correlation matrix is singular");
    return lu.inverse();
}

}  // namespace detail

/// Kaiser-Meyer-Olkin adequacy with per-variable MSA. Partial correlations come from the anti-image
/// of the inverse correlation matrix: q_ij = -inv_ij / sqrt(inv_ii inv_jj).
inline KmoResult kmo(const CorrelationMatrix& corr) {
    const Eigen::MatrixXd inv = detail::checked_inverse(corr.r, "kmo");
    const auto p = corr.r.rows();
    KmoResult res;
    res.per_variable.resize(p);
    double sum_r2 = 0.0, sum_q2 = 0.0;
    for (Eigen::Index i = 0; i < p; ++i) {
        double row_r2 = 0.0, row_q2 = 0.0;
        for (Eigen::Index j = 0; j < p; ++j) {
            if (i == j) continue;
            const double q = -inv(i, j) / std::sqrt(inv(i, i) * inv(j, j));
            row_r2 += corr.r(i, j) * corr.r(i, j);
            row_q2 += q * q;
        }
        res.per_variable(i) = row_r2 + row_q2 > 0.0 ? row_r2 / (row_r2 + row_q2) : std::numeric_limits<double>::quiet_NaN();
        sum_r2 += row_r2;
        sum_q2 += row_q2;
    }
    if (sum_r2 + sum_q2 <= 0.0 || sum_r2 < 1e-300) {
        throw NumericalError("kmo: statistic undefined (all off-diagonal correlations are zero)");
    }
    res.overall = sum_r2 / (sum_r2 + sum_q2);
    return res;
}

inline double kmo_statistic(const CorrelationMatrix& corr) { return kmo(corr).overall; }

struct PcaResult {
    Eigen::MatrixXd loadings;     // p × k
    Eigen::VectorXd eigenvalues;  // length p, descending
    bool eigenvalue_ties = false;
};

namespace detail {

/// Flips each column so its largest-magnitude entry is positive (first one wins on exact ties).
inline void orient_columns(Eigen::MatrixXd& m, Eigen::MatrixXd* companion = nullptr) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        Eigen::Index best = 0;
        for (Eigen::Index i = 1; i < m.rows(); ++i) {
            if (std::abs(m(i, j)) > std::abs(m(best, j)) + 1e-12) best = i;
        }
        if (m.rows() > 0 && m(best, j) < 0.0) {
            m.col(j) = -m.col(j);
            if (companion) companion->col(j) = -companion->col(j);
        }
    }
}

}  // namespace detail

/// Principal-component loadings: column j = eigenvector j * sqrt(eigenvalue j), eigenvalues descending.
inline PcaResult pca_extract(const CorrelationMatrix& corr, std::size_t k) {
    const auto p = corr.p();
    if (k < 1 || k > p) throw DomainError("pca: k = " + std::to_string(k) + " outside 1.." + std::to_string(p));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(corr.r);
    if (solver.info() != Eigen::Success) throw NumericalError("pca: eigendecomposition failed");

    const auto n = static_cast<Eigen::Index>(p);
    PcaResult res;
    res.eigenvalues.resize(n);
    Eigen::MatrixXd vectors(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        res.eigenvalues(j) = solver.eigenvalues()(n - 1 - j);
        vectors.col(j) = solver.eigenvectors().col(n - 1 - j);
    }
    for (Eigen::Index j = 1; j < n; ++j) {
        const double scale = std::max(1.0, std::abs(res.eigenvalues(j)));
        if (std::abs(res.eigenvalues(j - 1) - res.eigenvalues(j)) <= 1e-10 * scale) res.eigenvalue_ties = true;
    }
    detail::orient_columns(vectors);

    res.loadings.resize(n, static_cast<Eigen::Index>(k));
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(k); ++j) {
        res.loadings.col(j) = vectors.col(j) * std::sqrt(std::max(0.0, res.eigenvalues(j)));
    }
    return res;
}

/// Number of eigenvalues strictly greater than 1.
inline std::size_t kaiser_count(const Eigen::VectorXd& eigenvalues) {
    return static_cast<std::size_t>((eigenvalues.array() > 1.0).count());
}

/// Varimax criterion: sum over factors of the variance of squared loadings.
inline double varimax_criterion(const Eigen::MatrixXd& loadings) {
    const double p = static_cast<double>(loadings.rows());
    double total = 0.0;
    for (Eigen::Index j = 0; j < loadings.cols(); ++j) {
        const Eigen::ArrayXd sq = loadings.col(j).array().square();
        const double mean = sq.sum() / p;
        total += sq.square().sum() / p - mean * mean;
    }
    return total;
}

struct VarimaxOptions {
    bool kaiser_normalize = true;
    double tol = 1e-12;
    int max_iter = 1000;
};

struct VarimaxResult {
    Eigen::MatrixXd loadings;  // rotated, original row scale
    Eigen::MatrixXd rotation;  // k × k orthogonal; loadings = input * rotation
    double criterion = 0.0;    // on Kaiser-normalized rows when normalization is on
    int sweeps = 0;
    bool converged = true;
    std::vector<double> criterion_history;  // before the first sweep, then after each sweep
};

/// Varimax by pairwise planar rotations. Each planar angle is the closed-form maximizer
/// phi = atan2(D - 2AB/p, C - (A^2 - B^2)/p) / 4 for the two columns involved.
inline VarimaxResult varimax_rotate(const Eigen::MatrixXd& loadings, const VarimaxOptions& options = {},
                                    std::span<const std::string> names = {}) {
    const auto p = loadings.rows();
    const auto k = loadings.cols();
    if (k < 1) throw DomainError("varimax: need at least one factor");

    Eigen::VectorXd h = Eigen::VectorXd::Ones(p);
    Eigen::MatrixXd a = loadings;
    if (options.kaiser_normalize) {
        for (Eigen::Index i = 0; i < p; ++i) {
            h(i) = loadings.row(i).norm();
            if (h(i) <= 1e-300) {
                const auto idx = static_cast<std::size_t>(i);
                const std::string name = idx < names.size() ? names[idx] : "row " + std::to_string(i + 1);
                throw NumericalError("varimax: variable '" + name + "' has zero communality");
            }
            a.row(i) /= h(i);
        }
    }

    VarimaxResult res;
    res.rotation = Eigen::MatrixXd::Identity(k, k);
    const double pd = static_cast<double>(p);
    double current = varimax_criterion(a);
    res.criterion_history.push_back(current);
    res.converged = true;

    if (k > 1) {
        res.converged = false;
        for (int sweep = 0; sweep < options.max_iter; ++sweep) {
            for (Eigen::Index j = 0; j < k - 1; ++j) {
                for (Eigen::Index l = j + 1; l < k; ++l) {
                    const Eigen::ArrayXd x = a.col(j).array();
                    const Eigen::ArrayXd y = a.col(l).array();
                    const Eigen::ArrayXd u = x.square() - y.square();
                    const Eigen::ArrayXd v = 2.0 * x * y;
                    const double A = u.sum();
                    const double B = v.sum();
                    const double C = (u.square() - v.square()).sum();
                    const double D = 2.0 * (u * v).sum();
                    const double num = D - 2.0 * A * B / pd;
                    const double den = C - (A * A - B * B) / pd;
                    if (std::abs(num) <= 1e-15 * std::max(1.0, std::abs(den)) && den >= 0.0) continue;
                    const double phi = 0.25 * std::atan2(num, den);
                    const double c = std::cos(phi);
                    const double s = std::sin(phi);
                    const Eigen::VectorXd aj = a.col(j);
                    a.col(j) = c * aj + s * a.col(l);
                    a.col(l) = -s * aj + c * a.col(l);
                    const Eigen::VectorXd tj = res.rotation.col(j);
                    res.rotation.col(j) = c * tj + s * res.rotation.col(l);
                    res.rotation.col(l) = -s * tj + c * res.rotation.col(l);
                }
            }
            const double next = varimax_criterion(a);
            res.criterion_history.push_back(next);
            res.sweeps = sweep + 1;
            const double gain = (next - current) / std::max(std::abs(current), 1e-300);
            current = next;
            if (gain < options.tol) {
                res.converged = true;
                break;
            }
        }
    }

    res.criterion = current;
    res.loadings = a;
    for (Eigen::Index i = 0; i < p; ++i) res.loadings.row(i) *= h(i);
    detail::orient_columns(res.loadings, &res.rotation);
    return res;
}

/// Sum of all squared loadings over p.
inline double variance_explained(const Eigen::MatrixXd& loadings, std::size_t p) {
    if (p == 0) throw DomainError("variance_explained: p must be positive");
    return loadings.squaredNorm() / static_cast<double>(p);
}

/// Per-variable communalities (row sums of squared loadings).
inline Eigen::VectorXd communalities(const Eigen::MatrixXd& loadings) { return loadings.rowwise().squaredNorm(); }

struct FactorScores {
    std::vector<std::string> rows;
    std::size_t k = 0;
    std::vector<std::vector<Cell>> values;  // rows × k; MISSING for incomplete rows
};

/// Regression-method scores: Z · R^-1 · L, Z standardized over complete rows (sample SD).
/// Rows with any MISSING variable yield MISSING scores.
inline FactorScores factor_scores(const VariableMatrix& data, const CorrelationMatrix& corr, const Eigen::MatrixXd& loadings) {
    const auto p = data.cols();
    if (corr.p() != p || static_cast<std::size_t>(loadings.rows()) != p) {
        throw DomainError("factor_scores: data, correlation and loadings dimensions do not conform");
    }
    const Eigen::MatrixXd weights = detail::checked_inverse(corr.r, "factor_scores") * loadings;

    std::vector<std::size_t> complete;
    for (std::size_t r = 0; r < data.rows(); ++r) {
        if (data.row_complete(r)) complete.push_back(r);
    }
    FactorScores out;
    out.rows = data.row_labels();
    out.k = static_cast<std::size_t>(loadings.cols());
    out.values.assign(data.rows(), std::vector<Cell>(out.k, kMissing));
    if (complete.size() < 2) return out;

    Eigen::VectorXd mean = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
    Eigen::VectorXd sd = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
    for (std::size_t c = 0; c < p; ++c) {
        double m = 0.0;
        for (auto r : complete) m += *data.at(r, c);
        m /= static_cast<double>(complete.size());
        double ss = 0.0;
        for (auto r : complete) ss += (*data.at(r, c) - m) * (*data.at(r, c) - m);
        const double s = std::sqrt(ss / static_cast<double>(complete.size() - 1));
        if (s == 0.0) throw NumericalError("factor_scores: variable '" + data.variables()[c] + "' has zero variance over complete rows");
        mean(static_cast<Eigen::Index>(c)) = m;
        sd(static_cast<Eigen::Index>(c)) = s;
    }
    for (auto r : complete) {
        Eigen::RowVectorXd z(static_cast<Eigen::Index>(p));
        for (std::size_t c = 0; c < p; ++c) {
            const auto cc = static_cast<Eigen::Index>(c);
            z(cc) = (*data.at(r, c) - mean(cc)) / sd(cc);
        }
        const Eigen::RowVectorXd s = z * weights;
        for (std::size_t j = 0; j < out.k; ++j) out.values[r][j] = s(static_cast<Eigen::Index>(j));
    }
    return out;
}

/// Simple-structure loading matrix: variable i loads `primary` on factor (i * k / p), `cross` elsewhere.
inline Eigen::MatrixXd block_loadings(std::size_t p, std::size_t k, double primary = 0.8, double cross = 0.0) {
    Eigen::MatrixXd l = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(k), cross);
    for (std::size_t i = 0; i < p; ++i) l(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i * k / p)) = primary;
    return l;
}

/// Synthetic data = factors · loadings^T + noise · N(0, 1), seeded and deterministic.
inline VariableMatrix synthesize_known_factors(std::size_t p, std::size_t k, std::size_t n, const Eigen::MatrixXd& loadings, double noise,
                                               std::uint64_t seed) {
    if (k < 1 || p < k || n <= p) throw DomainError("synthesize: need p >= k >= 1 and n > p");
    if (static_cast<std::size_t>(loadings.rows()) != p || static_cast<std::size_t>(loadings.cols()) != k) {
        throw DomainError("synthesize: loading matrix must be p × k");
    }
    if (noise < 0.0) throw DomainError("synthesize: noise must be non-negative");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    Eigen::MatrixXd factors(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
    for (Eigen::Index i = 0; i < factors.rows(); ++i) {
        for (Eigen::Index j = 0; j < factors.cols(); ++j) factors(i, j) = normal(rng);
    }
    Eigen::MatrixXd x = factors * loadings.transpose();
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) += noise * normal(rng);
    }

    std::vector<std::string> rows, vars;
    for (std::size_t i = 0; i < n; ++i) rows.push_back("OBS" + std::to_string(i + 1));
    for (std::size_t j = 0; j < p; ++j) vars.push_back("V" + std::to_string(j + 1));
    std::vector<Cell> values;
    values.reserve(n * p);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) values.push_back(x(i, j));
    }
    return VariableMatrix(std::move(rows), std::move(vars), std::move(values));
}

struct FactorModelOptions {
    std::size_t k = 2;
    bool use_kaiser_count = false;  // choose k as the count of eigenvalues > 1 instead
    MissingHandling missing = MissingHandling::Pairwise;
    VarimaxOptions varimax{};
};

struct FactorModel {
    std::vector<std::string> variables;
    CorrelationMatrix correlation;
    Eigen::MatrixXd unrotated;
    Eigen::MatrixXd rotated;
    Eigen::MatrixXd rotation;
    Eigen::VectorXd eigenvalues;
    bool eigenvalue_ties = false;
    double kmo = 0.0;
    Eigen::VectorXd msa;
    BartlettResult bartlett;
    std::size_t n = 0;
    double variance_explained = 0.0;
    double varimax_criterion = 0.0;
    int varimax_sweeps = 0;
    bool converged = true;
    FactorScores scores;
};

inline FactorModel fit_factor_model(const VariableMatrix& data, const FactorModelOptions& options = {}) {
    FactorModel m;
    m.variables = data.variables();
    m.correlation = correlation_matrix(data, options.missing);
    const auto p = m.correlation.p();

    PcaResult pca = pca_extract(m.correlation, 1);
    std::size_t k = options.k;
    if (options.use_kaiser_count) k = std::max<std::size_t>(1, kaiser_count(pca.eigenvalues));
    pca = pca_extract(m.correlation, k);
    m.unrotated = pca.loadings;
    m.eigenvalues = pca.eigenvalues;
    m.eigenvalue_ties = pca.eigenvalue_ties;

    auto rot = varimax_rotate(m.unrotated, options.varimax, m.variables);
    m.rotated = rot.loadings;
    m.rotation = rot.rotation;
    m.varimax_criterion = rot.criterion;
    m.varimax_sweeps = rot.sweeps;
    m.converged = rot.converged;

    const auto adequacy = kmo(m.correlation);
    m.kmo = adequacy.overall;
    m.msa = adequacy.per_variable;
    m.n = m.correlation.min_count();
    m.bartlett = bartlett_test(m.correlation, m.n);
    m.variance_explained = variance_explained(m.rotated, p);
    m.scores = factor_scores(data, m.correlation, m.rotated);
    return m;
}

}  // namespace foi::fa
