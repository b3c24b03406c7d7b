#include "dyadic/spectral.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <deque>

#include "dyadic/counting.hpp"
#include "dyadic/parallel.hpp"
#include "dyadic/rng.hpp"

namespace dyadic {

namespace {

// CSR image of (P+I)/2 in doubles.
struct ShiftedMatrix {
    std::size_t n;
    std::vector<std::size_t> row_ptr;
    std::vector<std::uint32_t> col;
    std::vector<double> val;
    std::vector<double> diag;

    explicit ShiftedMatrix(const TransitionMatrix& m) : n(m.dimension()) {
        const double den = 2.0 * static_cast<double>(m.denominator());
        row_ptr.assign(n + 1, 0);
        col.reserve(m.row_end(n - 1));
        val.reserve(m.row_end(n - 1));
        diag.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t s = m.row_begin(i); s < m.row_end(i); ++s) {
                col.push_back(m.col(s));
                val.push_back(m.numer(s) / den);
            }
            row_ptr[i + 1] = col.size();
            diag[i] =
                static_cast<double>(m.denominator() - m.offdiagonal_numerator_sum(i)) / den + 0.5;
        }
    }

    void multiply(const std::vector<double>& x, std::vector<double>& y, int threads) const {
        parallel_for(0, n, threads, [&](std::size_t i) {
            double acc = diag[i] * x[i];
            for (std::size_t s = row_ptr[i]; s < row_ptr[i + 1]; ++s) acc += val[s] * x[col[s]];
            y[i] = acc;
        });
    }
};

bool matrix_connected(const TransitionMatrix& m) {
    const std::size_t n = m.dimension();
    std::vector<char> seen(n, 0);
    std::vector<std::uint32_t> stack{0};
    seen[0] = 1;
    std::size_t visited = 1;
    while (!stack.empty()) {
        const std::uint32_t u = stack.back();
        stack.pop_back();
        for (std::size_t s = m.row_begin(u); s < m.row_end(u); ++s) {
            const std::uint32_t v = m.col(s);
            if (!seen[v]) {
                seen[v] = 1;
                ++visited;
                stack.push_back(v);
            }
        }
    }
    return visited == n;
}

void project_out_constant(std::vector<double>& v) {
    double mean = 0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    for (double& x : v) x -= mean;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

}  // namespace

SpectralReport spectral_gap(const TransitionMatrix& matrix, const SpectralOptions& options) {
    if (matrix.dimension() < 2) {
        throw TilingError(TilingErrorKind::SizeGuard, "spectral gap needs at least two states");
    }
    if (!matrix_connected(matrix)) {
        throw TilingError(TilingErrorKind::Disconnected, "chain is disconnected");
    }
    const ShiftedMatrix shifted(matrix);
    const std::size_t n = shifted.n;

    SplitMix64 rng(options.seed);
    std::vector<double> v(n), y(n);
    for (double& x : v) x = static_cast<double>(rng.next() >> 11) * 0x1p-53 - 0.5;
    project_out_constant(v);
    double norm = std::sqrt(dot(v, v));
    for (double& x : v) x /= norm;

    std::deque<double> history;
    double theta = 0, residual = 0;
    std::int64_t iter = 0;
    bool converged = false;
    while (iter < options.max_iterations) {
        ++iter;
        shifted.multiply(v, y, options.threads);
        project_out_constant(y);
        theta = dot(v, y);
        double r2 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = y[i] - theta * v[i];
            r2 += d * d;
        }
        residual = std::sqrt(r2);
        history.push_back(theta);
        if (static_cast<int>(history.size()) > options.plateau_window + 1) history.pop_front();
        const bool plateau =
            static_cast<int>(history.size()) > options.plateau_window &&
            std::abs(theta - history.front()) <= options.plateau_relative_change * std::abs(theta);
        if (plateau && residual <= options.residual_tol) {
            converged = true;
            break;
        }
        norm = std::sqrt(dot(y, y));
        if (norm == 0) break;  // projected to nothing: dimension-2 exact kill
        for (std::size_t i = 0; i < n; ++i) v[i] = y[i] / norm;
    }
    if (!converged && iter >= options.max_iterations) {
        throw TilingError(TilingErrorKind::NonConvergence, "power iteration hit the iteration cap");
    }

    SpectralReport report;
    report.k = matrix.size_exponent();
    report.chain = matrix.kind();
    report.lambda2 = 2.0 * theta - 1.0;
    report.gap = 2.0 * (1.0 - theta);
    report.relaxation_time = 1.0 / report.gap;
    report.residual = residual;
    report.iterations = iter;
    report.converged = converged;
    return report;
}

double dense_lambda2(const TransitionMatrix& matrix) {
    if (matrix.dimension() > 2000) {
        throw TilingError(TilingErrorKind::SizeGuard, "dense oracle supports dimension <= 2000");
    }
    const Eigen::MatrixXd dense = Eigen::MatrixXd(matrix.to_sparse());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();  // ascending
    return ev[ev.size() - 2];
}

double variance_uniform(std::span<const double> f) {
    const double n = static_cast<double>(f.size());
    double mean = 0, mean_sq = 0;
    for (double x : f) {
        mean += x;
        mean_sq += x * x;
    }
    mean /= n;
    mean_sq /= n;
    return mean_sq - mean * mean;
}

double variance_uniform_pairwise(std::span<const double> f) {
    const double n = static_cast<double>(f.size());
    double acc = 0;
    for (std::size_t x = 0; x < f.size(); ++x) {
        for (std::size_t y = x + 1; y < f.size(); ++y) {
            const double d = f[x] - f[y];
            acc += d * d;
        }
    }
    return acc / (n * n);
}

double dirichlet_form(const TransitionMatrix& matrix, std::span<const double> f) {
    const double n = static_cast<double>(matrix.dimension());
    const double den = static_cast<double>(matrix.denominator());
    double acc = 0;
    for (std::size_t i = 0; i < matrix.dimension(); ++i) {
        for (std::size_t s = matrix.row_begin(i); s < matrix.row_end(i); ++s) {
            const double d = f[i] - f[matrix.col(s)];
            acc += matrix.numer(s) / den * d * d;
        }
    }
    return acc / (2.0 * n);
}

GapRecursionReport verify_gap_recursion(const SpectralReport& gap_k, const SpectralReport& gap_previous,
                                        const SpectralReport& gap_block, double slack_tol) {
    GapRecursionReport out;
    out.k = gap_k.k;
    out.gap_k = gap_k.gap;
    out.gap_previous = gap_previous.gap;
    out.gap_block = gap_block.gap;
    out.ratio = gap_k.gap / (gap_block.gap * gap_previous.gap);
    out.slack_tol = slack_tol;
    out.holds = gap_k.gap >= gap_block.gap * gap_previous.gap - slack_tol;
    return out;
}

LowerBoundReport lower_bound_check(int k, double gamma_k, double slack_tol) {
    LowerBoundReport out;
    out.k = k;
    out.gamma = gamma_k;
    out.dirichlet_exact = vertical_indicator_dirichlet(k);
    out.variance_exact = vertical_indicator_variance(k);
    out.rayleigh = static_cast<double>((out.dirichlet_exact / out.variance_exact).to_long_double());
    out.slack_tol = slack_tol;
    out.holds = gamma_k <= out.rayleigh + slack_tol;
    return out;
}

}  // namespace dyadic
