#include "cfdim/formulas.hpp"

#include <cmath>

namespace cfdim {

double f_m(int m, double s) {
    if (m < 1) throw Error("f_m: m must be >= 1");
    if (!(s >= 0.0)) throw Error("f_m: s must be >= 0");
    double f = s;
    for (int k = 1; k < m; ++k) {
        double denom = 1.0 - s + f;
        if (!(denom > 0.0)) throw NumericError("f_m: recurrence denominator vanished", denom);
        f = s * f / denom;
    }
    return f;
}

namespace {

// sum_{i=0}^{k-1} t^i (1-t)^{k-1-i}; equals (t^k - (1-t)^k)/(2t - 1) with the
// removable factor cancelled.
double geometric_bridge(int k, double t) {
    double u = 1.0 - t;
    double acc = 0.0;
    for (int i = 0; i < k; ++i) acc += std::pow(t, i) * std::pow(u, k - 1 - i);
    return acc;
}

}  // namespace

double theta_m(int m, double t) {
    if (m < 2) throw Error("theta_m: m must be >= 2");
    if (!(t > 0.0) || !(t < 1.0)) throw Error("theta_m: t must lie in (0, 1)");
    return t * geometric_bridge(m - 1, t) / geometric_bridge(m, t);
}

std::vector<double> equalizing_exponents(int m, double t) {
    if (m < 1) throw Error("equalizing_exponents: m must be >= 1");
    if (!(t > 0.5) || !(t < 1.0)) throw Error("equalizing_exponents: t must lie in (1/2, 1)");
    std::vector<double> e(static_cast<std::size_t>(m));
    double total = 0.0;
    for (int i = 0; i < m; ++i) {
        e[static_cast<std::size_t>(i)] = std::pow(t, m - 1 - i) * std::pow(1.0 - t, i);
        total += e[static_cast<std::size_t>(i)];
    }
    double partial = 0.0;
    for (int i = 0; i + 1 < m; ++i) {
        e[static_cast<std::size_t>(i)] /= total;
        partial += e[static_cast<std::size_t>(i)];
    }
    e[static_cast<std::size_t>(m - 1)] = 1.0 - partial;  // exact unit sum
    return e;
}

GrowthProfile equalizing_profile(double B, int m, double t) {
    if (!(B > 1.0)) throw Error("equalizing_profile: B must exceed 1");
    GrowthProfile p;
    double log_b = std::log(B);
    for (double e : equalizing_exponents(m, t)) {
        p.A.push_back(std::exp(e * log_b));
        p.c.push_back(1.0);
    }
    p.validate();
    return p;
}

GrowthProfile equalizing_profile(double B, int m, const SolveOptions& opt) {
    return equalizing_profile(B, m, product_dimension(B, m, opt).value);
}

double weighted_regime(double t0, double t1, double s) {
    return s / t1 - (2.0 * s - 1.0) / t0;
}

double weighted_f(double t0, double t1, double s) {
    if (!(t0 > 0.0) || !(t1 > 0.0)) throw Error("weighted_f: weights must be positive");
    if (!(s >= 0.0)) throw Error("weighted_f: s must be >= 0");
    if (s == 0.0) return 0.0;
    double f_t0 = s / t0;
    double denom = t1 * (f_t0 + std::max(0.0, weighted_regime(t0, t1, s)));
    if (!(denom > 0.0)) throw NumericError("weighted_f: denominator vanished", denom);
    return s * f_t0 / denom;
}

DimensionResult product_dimension(double B, int m, const SolveOptions& opt) {
    if (!(B > 1.0)) throw Error("product_dimension: B must exceed 1");
    if (m < 1) throw Error("product_dimension: m must be >= 1");
    if (m == 1) return solve_root(offset_single(B), opt);
    double log_b = std::log(B);
    return solve_root(Offset::custom([m, log_b](double s) { return -f_m(m, s) * log_b; }), opt);
}

DimensionResult weighted_dimension(double B, double t0, double t1, const SolveOptions& opt) {
    if (!(B > 1.0)) throw Error("weighted_dimension: B must exceed 1");
    if (!(t0 >= t1) || !(t1 > 0.0)) throw Error("weighted_dimension: need t0 >= t1 > 0");
    double log_b = std::log(B);
    return solve_root(
        Offset::custom([t0, t1, log_b](double s) { return -weighted_f(t0, t1, s) * log_b; }), opt);
}

double doubly_exponential_dim(double b) {
    if (!(b > 1.0)) throw Error("doubly_exponential_dim: b must exceed 1");
    return 1.0 / (1.0 + b);
}

DimensionResult triple_product_dimension(double B, const SolveOptions& opt) {
    if (!(B >= 1.0)) throw Error("triple_product_dimension: B must be >= 1");
    if (B == 1.0) {
        DimensionResult out;
        out.value = 1.0;
        out.bracket_lo = 1.0;
        out.bracket_hi = 1.0;
        return out;
    }
    return solve_root(offset_two_param(B * B, B), opt);
}

namespace {

LinearCheck make_check(double slope, double intercept) {
    LinearCheck chk;
    chk.slope = slope;
    chk.intercept = intercept;
    // margin(n) = slope * n + intercept >= 0 for all large n?
    if (slope > 0.0) {
        chk.eventually = true;
        if (intercept >= -slope) {
            chk.satisfied_from = 1;
        } else {
            long long n0 = static_cast<long long>(std::ceil(-intercept / slope - 1e-12));
            if (slope * static_cast<double>(n0) + intercept < 0.0) ++n0;
            chk.satisfied_from = n0;
        }
    } else if (slope == 0.0) {
        chk.eventually = intercept >= 0.0;
        chk.satisfied_from = chk.eventually ? 1 : 0;
    } else {
        chk.eventually = false;
        chk.satisfied_from = 0;
    }
    return chk;
}

// The three embedding inequalities for a witness profile against the window:
//   (product over all m digits)      >= B1^n
//   (product over the first m-1)     <  B2^{n-1}
//   (product over the last m-1)      <  B2^n
// in log-linear form margin(n) >= 0.
std::vector<LinearCheck> witness_checks(const GrowthProfile& p, double log_b1, double log_b2) {
    int m = p.m();
    double log_c_all = 0.0;
    for (double ci : p.c) log_c_all += std::log(ci);
    double log_c_head = log_c_all - std::log(p.c[static_cast<std::size_t>(m - 1)]);
    double log_c_tail = log_c_all - std::log(p.c[0]);
    double log_beta_all = std::log(p.beta(m - 1));
    double log_beta_head = std::log(p.beta(m - 2));
    double log_beta_tail = log_beta_all - std::log(p.A[0]);

    std::vector<LinearCheck> out;
    out.push_back(make_check(log_beta_all - log_b1, log_c_all));
    out.push_back(make_check(log_b2 - log_beta_head, -log_b2 - log_c_head));
    out.push_back(make_check(log_b2 - log_beta_tail, -log_c_tail));
    return out;
}

}  // namespace

FmClassification classify_window(double B1, double B2, int m, const ClassifyOptions& opt) {
    if (!(B1 > 1.0) || !(B2 > 1.0)) throw Error("classify_window: B1, B2 must exceed 1");
    if (m < 2) throw Error("classify_window: m must be >= 2");

    FmClassification out;
    const double log_b1 = std::log(B1);
    const double log_b2 = std::log(B2);
    const double tol = opt.boundary_rel_tol * std::max(1.0, std::abs(log_b1));

    // Empty window: the two growth conditions multiply into a contradiction
    // whenever B2 <= sqrt(B1), equality included.
    if (log_b2 <= 0.5 * log_b1 + tol) {
        out.regime = FmCase::empty;
        if (log_b2 > 0.5 * log_b1 - tol) {
            out.boundary = true;  // right at the emptiness edge: report the g side too
            out.g_dimension = solve_root(offset_two_param(B1, B2), opt.solve).value;
        }
        return out;
    }

    out.t = product_dimension(B1, m, opt.solve).value;
    out.theta = theta_m(m, out.t);
    out.log_threshold = out.theta * log_b1;

    bool t_side = log_b2 >= out.log_threshold;
    out.boundary = std::abs(log_b2 - out.log_threshold) <= tol;
    out.regime = t_side ? FmCase::t_regime : FmCase::g_regime;

    double g = solve_root(offset_two_param(B1, B2), opt.solve).value;
    if (out.boundary) {
        out.t_dimension = out.t;
        out.g_dimension = g;
    }
    out.dimension = t_side ? out.t : g;

    // Witness profile: the equalizing chain pinned to beta_{m-2}, which sits
    // at the threshold in the t regime and at B2 in the g regime, with the
    // published constants.
    GrowthProfile w;
    double log_beta_m2 = t_side ? out.log_threshold : log_b2;
    // beta_{m-2} = A_0^{E} with E = bridge(m-1) / t^{m-2}, the cancelled form
    // of (t^{m-1} - (1-t)^{m-1})/(t^{m-2}(2t-1)).
    double chain_e = geometric_bridge(m - 1, out.t) / std::pow(out.t, m - 2);
    double log_a0 = log_beta_m2 / chain_e;
    double ratio = (1.0 - out.t) / out.t;
    double step = 1.0;
    double log_beta = 0.0;
    for (int k = 0; k + 1 < m; ++k) {
        w.A.push_back(std::exp(log_a0 * step));
        log_beta += log_a0 * step;
        step *= ratio;
    }
    w.A.push_back(std::exp(log_b1 - log_beta));  // last base tops the product up to B1
    w.c.assign(static_cast<std::size_t>(m), 1.0);
    const double pow2 = std::ldexp(1.0, m - 1);
    if (t_side) {
        w.c[0] = pow2 * B2;
        w.c[static_cast<std::size_t>(m - 1)] = B2 * B2 * pow2;
        if (m >= 3) w.c[1] = 1.0 / (B2 * B2 * B2 * pow2 * pow2);
    } else {
        w.c[static_cast<std::size_t>(m - 2)] = 1.0 / (B2 * B2);
        w.c[static_cast<std::size_t>(m - 1)] = B2 * B2;
    }
    w.validate();
    out.witness_checks = witness_checks(w, log_b1, log_b2);
    out.witness = std::move(w);
    return out;
}

}  // namespace cfdim
