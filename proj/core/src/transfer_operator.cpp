#include "cfdim/transfer_operator.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "cfdim/errors.hpp"

namespace cfdim {

TransferOperator::TransferOperator(int alphabet_max, int grid, bool complete_tail)
    : alphabet_max_(alphabet_max), grid_(grid), complete_tail_(complete_tail) {
    if (alphabet_max < 1) throw InvalidDigitError("alphabet_max must be >= 1");
    if (grid < 4) throw Error("transfer operator: grid must be >= 4");

    // Chebyshev-Lobatto points mapped to [0, 1]; nodes_[0] = 0, nodes_.back() = 1.
    const int G = grid;
    nodes_.resize(G);
    for (int j = 0; j < G; ++j)
        nodes_[j] = 0.5 * (1.0 - std::cos(std::numbers::pi_v<double> * j / (G - 1)));
    nodes_[0] = 0.0;
    nodes_[G - 1] = 1.0;

    std::vector<double> bary(G);
    for (int i = 0; i < G; ++i) bary[i] = (i % 2 == 0 ? 1.0 : -1.0);
    bary[0] *= 0.5;
    bary[G - 1] *= 0.5;

    // Pull-back points y = 1/(a + x_j) with their interpolation rows l_i(y)
    // and the log shifts ln(a + x_j); none of it depends on s.
    log_shift_.resize(static_cast<std::size_t>(alphabet_max) * G);
    coeff_.assign(static_cast<std::size_t>(alphabet_max) * G * G, 0.0);
    for (int a = 1; a <= alphabet_max; ++a) {
        for (int j = 0; j < G; ++j) {
            double shift = static_cast<double>(a) + nodes_[j];
            std::size_t aj = (static_cast<std::size_t>(a - 1) * G + j);
            log_shift_[aj] = std::log(shift);
            double y = 1.0 / shift;
            double* row = coeff_.data() + aj * G;
            int hit = -1;
            for (int i = 0; i < G; ++i) {
                if (y == nodes_[i]) {
                    hit = i;
                    break;
                }
            }
            if (hit >= 0) {
                row[hit] = 1.0;
                continue;
            }
            double denom = 0.0;
            for (int i = 0; i < G; ++i) {
                row[i] = bary[i] / (y - nodes_[i]);
                denom += row[i];
            }
            for (int i = 0; i < G; ++i) row[i] /= denom;
        }
    }
}

void TransferOperator::assemble(double s, std::vector<double>& matrix) const {
    const int G = grid_;
    matrix.assign(static_cast<std::size_t>(G) * G, 0.0);
    const double two_s = 2.0 * s;
    for (int a = 1; a <= alphabet_max_; ++a) {
        for (int j = 0; j < G; ++j) {
            std::size_t aj = static_cast<std::size_t>(a - 1) * G + j;
            double w = std::exp(-two_s * log_shift_[aj]);
            const double* row = coeff_.data() + aj * G;
            double* out = matrix.data() + static_cast<std::size_t>(j) * G;
            for (int i = 0; i < G; ++i) out[i] += w * row[i];
        }
    }
    if (complete_tail_) {
        if (s <= 0.5) throw DivergenceError("tail completion diverges at s <= 1/2");
        // Euler-Maclaurin over the digits a > M.  Their branch points
        // 1/(a + x) pile up at 0, a collocation node, so the whole tail
        // weight lands on the l_0 column; the neglected f variation there
        // is O(M^(-2s)) relative.
        for (int j = 0; j < G; ++j) {
            double y = static_cast<double>(alphabet_max_) + 1.0 + nodes_[j];
            double w = std::exp(-two_s * std::log(y));
            double tail = w * y / (two_s - 1.0) + 0.5 * w + two_s / 12.0 * w / y;
            matrix[static_cast<std::size_t>(j) * G] += tail;
        }
    }
}

namespace {

void apply(const std::vector<double>& matrix, const std::vector<double>& v, std::vector<double>& out) {
    const std::size_t G = v.size();
    for (std::size_t j = 0; j < G; ++j) {
        const double* row = matrix.data() + j * G;
        double acc = 0.0;
        for (std::size_t i = 0; i < G; ++i) acc += row[i] * v[i];
        out[j] = acc;
    }
}

}  // namespace

double TransferOperator::leading_eigenvalue(double s, double rel_tol, int max_iter) const {
    std::vector<double> matrix;
    assemble(s, matrix);

    const int G = grid_;
    std::vector<double> v(static_cast<std::size_t>(G), 1.0), u(static_cast<std::size_t>(G));
    double lambda = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        apply(matrix, v, u);
        double num = 0.0, den = 0.0;
        for (int j = 0; j < G; ++j) {
            num += u[j] * v[j];
            den += v[j] * v[j];
        }
        double next = num / den;
        double norm = 0.0;
        for (double x : u) norm = std::max(norm, std::abs(x));
        if (!(norm > 0.0) || !std::isfinite(norm))
            throw NumericError("power iteration collapsed", norm);
        for (int j = 0; j < G; ++j) v[j] = u[j] / norm;
        if (it > 0 && std::abs(next - lambda) <= rel_tol * std::abs(next)) return next;
        lambda = next;
    }
    throw NumericError("power iteration did not converge", lambda);
}

double TransferOperator::iterated_endpoint_log_sum(double s, int n) const {
    if (n < 1) throw Error("iterated_endpoint_log_sum: n must be >= 1");
    std::vector<double> matrix;
    assemble(s, matrix);

    const int G = grid_;
    std::vector<double> v(static_cast<std::size_t>(G), 1.0), u(static_cast<std::size_t>(G));
    double log_scale = 0.0;
    for (int step = 0; step < n; ++step) {
        apply(matrix, v, u);
        double norm = 0.0;
        for (double x : u) norm = std::max(norm, std::abs(x));
        if (!(norm > 0.0) || !std::isfinite(norm))
            throw NumericError("operator iterate collapsed", norm);
        for (int j = 0; j < G; ++j) v[j] = u[j] / norm;
        log_scale += std::log(norm);
    }
    if (!(v[0] > 0.0))
        throw NumericError("operator iterate endpoint is not positive", v[0]);
    return log_scale + std::log(v[0]);
}

double transfer_eigenvalue(int alphabet_max, double s, int grid) {
    return TransferOperator(alphabet_max, grid).leading_eigenvalue(s);
}

double spectral_tail_bound(int alphabet_max, double s) {
    if (s <= 0.5) return std::numeric_limits<double>::infinity();
    return std::pow(static_cast<double>(alphabet_max), 1.0 - 2.0 * s) / (2.0 * s - 1.0);
}

PressureEstimate pressure_spectral(const Potential& pot, int alphabet_max, int grid) {
    TransferOperator op(alphabet_max, grid);
    double lambda = op.leading_eigenvalue(pot.s);
    if (!(lambda > 0.0)) throw NumericError("leading eigenvalue is not positive", lambda);
    PressureEstimate est;
    est.method = PressureMethod::spectral;
    est.alphabet_max = alphabet_max;
    est.grid = grid;
    est.value = std::log(lambda) + pot.h(pot.s);
    est.tail_bound = spectral_tail_bound(alphabet_max, pot.s);
    return est;
}

}  // namespace cfdim
