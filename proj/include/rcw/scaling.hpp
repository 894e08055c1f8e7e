#pragma once

#include <cstdint>
#include <vector>

#include "rcw/graph.hpp"

namespace rcw {

struct ScalingParams {
    double alpha = 2.0;
    double beta = 2.0;
    double epsilon = 0.0;  // must satisfy epsilon + 1 < beta
    double c5 = 1.0;       // enter lambda_k only
    double c6 = 1.0;

    void validate() const;
};

// Catalog exponents per graph family: lattices have alpha = d, beta = 2;
// the gasket has alpha = log 3 / log 2, beta = log 5 / log 2.
ScalingParams catalog_params(GraphKind kind, int dim);

// Phi(q) = q^{1/beta} (log log q)^{1 - 1/beta}; domain q > e.
double phi(double q, double beta);

// psi(n) = n^{1/beta} (log log n)^{-1/beta}; domain n > e.
double psi(double n, double beta);

struct SequenceTable {
    std::vector<std::uint32_t> k;
    std::vector<double> a;       // a_k = e^{k^2/beta}
    std::vector<double> b;       // b_k = e^{k/beta}
    std::vector<double> lambda;  // c6^{-1} log(c5 (1+k)^{2/3})
    std::vector<double> u;       // lambda_k a_k^beta
    std::vector<double> sigma;   // prefix sums of u, sigma_1 = 0
};

SequenceTable sequence_table(std::uint32_t k_max, const ScalingParams& params);

}  // namespace rcw
