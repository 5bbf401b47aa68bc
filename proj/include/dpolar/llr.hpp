#pragma once

#include <cmath>

namespace dpolar {

// All decoder inputs are clamped to this magnitude. Internal g-chains may grow
// beyond it; doubles handle that without special casing.
inline constexpr double kLlrSaturation = 40.0;

inline double clamp_llr(double x) {
    if (x > kLlrSaturation) return kLlrSaturation;
    if (x < -kLlrSaturation) return -kLlrSaturation;
    return x;
}

// ln(1 + e^x) without overflow. For x > 0 rewrite as x + ln(1 + e^-x); beyond
// +-37 the correction is below double resolution of the result, so skip the
// transcendentals entirely (keeps hot loops cheap at saturated LLRs).
inline double softplus(double x) {
    if (x > 37.0) return x;
    if (x < -37.0) return std::exp(x);
    if (x > 0.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

// Check-node combination, exact form: f(a,b) = ln((1 + e^{a+b})/(e^a + e^b)).
// Evaluated as sign(a)sign(b) min(|a|,|b|) plus two stable corrections via
// ln cosh identities; equal to 2 atanh(tanh(a/2) tanh(b/2)).
inline double f_op(double a, double b) {
    double s = 0.5 * (a + b);
    double d = 0.5 * (a - b);
    double as = std::fabs(s), ad = std::fabs(d);
    double v = as - ad;  // = sign(ab) * min(|a|, |b|)
    if (2.0 * as <= 37.0) v += std::log1p(std::exp(-2.0 * as));
    if (2.0 * ad <= 37.0) v -= std::log1p(std::exp(-2.0 * ad));
    return v;
}

// Min-sum approximation of f. Opt-in; the exactness tests never use it.
inline double f_op_minsum(double a, double b) {
    double m = std::fmin(std::fabs(a), std::fabs(b));
    return (a < 0.0) == (b < 0.0) ? m : -m;
}

inline double f_op(double a, double b, bool min_sum) {
    return min_sum ? f_op_minsum(a, b) : f_op(a, b);
}

// Variable-node combination with the partial-sum bit u folded in.
inline double g_op(double a, double b, unsigned u) {
    return (u & 1u) ? b - a : b + a;
}

// Path metric update for one decision v against decision LLR lambda:
// phi(mu, lambda, v) = mu + ln(1 + e^{(2v-1) lambda}).
inline double phi_metric(double mu, double lambda, unsigned v) {
    return mu + softplus((v & 1u) ? lambda : -lambda);
}

// Fused metric update for a level carrying both a channel and a source LLR.
inline double phi_tilde_metric(double mu, double lambda_c, double lambda_s, unsigned v) {
    if (v & 1u) return mu + softplus(lambda_c) + softplus(lambda_s);
    return mu + softplus(-lambda_c) + softplus(-lambda_s);
}

}  // namespace dpolar
