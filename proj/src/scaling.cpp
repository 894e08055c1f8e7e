#include "rcw/scaling.hpp"

#include <cmath>
#include <string>

#include "rcw/errors.hpp"

namespace rcw {

void ScalingParams::validate() const {
    if (!(alpha >= 1.0))
        throw validation_error("scaling: alpha must be >= 1");
    if (!(beta > 1.0)) throw validation_error("scaling: beta must be > 1");
    if (!(epsilon >= 0.0) || !(epsilon + 1.0 < beta))
        throw validation_error("scaling: need 0 <= epsilon and epsilon+1 < beta");
    if (!(c5 > 0.0) || !(c6 > 0.0))
        throw validation_error("scaling: c5, c6 must be positive");
}

ScalingParams catalog_params(GraphKind kind, int dim) {
    ScalingParams p;
    if (kind == GraphKind::lattice_box) {
        p.alpha = static_cast<double>(dim);
        p.beta = 2.0;
    } else {
        p.alpha = std::log(3.0) / std::log(2.0);
        p.beta = std::log(5.0) / std::log(2.0);
    }
    return p;
}

namespace {

void check_domain(double q, const char* what) {
    if (!(q > std::exp(1.0)))
        throw validation_error(std::string(what) + ": argument must be > e");
}

}  // namespace

double phi(double q, double beta) {
    check_domain(q, "phi");
    return std::pow(q, 1.0 / beta) *
           std::pow(std::log(std::log(q)), 1.0 - 1.0 / beta);
}

double psi(double n, double beta) {
    check_domain(n, "psi");
    return std::pow(n, 1.0 / beta) *
           std::pow(std::log(std::log(n)), -1.0 / beta);
}

SequenceTable sequence_table(std::uint32_t k_max, const ScalingParams& params) {
    params.validate();
    if (k_max < 1)
        throw validation_error("sequence_table: k_max must be >= 1");
    SequenceTable t;
    double sigma = 0.0;
    for (std::uint32_t k = 1; k <= k_max; ++k) {
        const double kk = static_cast<double>(k);
        const double lam =
            std::log(params.c5 * std::pow(1.0 + kk, 2.0 / 3.0)) / params.c6;
        if (!(lam > 0.0))
            throw validation_error("sequence_table: lambda_" +
                                   std::to_string(k) +
                                   " is nonpositive (c5 too small)");
        t.k.push_back(k);
        t.a.push_back(std::exp(kk * kk / params.beta));
        t.b.push_back(std::exp(kk / params.beta));
        t.lambda.push_back(lam);
        t.u.push_back(lam * std::exp(kk * kk));
        t.sigma.push_back(sigma);  // sum over i < k, so sigma_1 = 0
        sigma += t.u.back();
    }
    return t;
}

}  // namespace rcw
