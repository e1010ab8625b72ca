#ifndef KDAG_PARAMS_HPP
#define KDAG_PARAMS_HPP

#include <cstdint>
#include <string>

#include "kdag/errors.hpp"

namespace kdag {

/// Parameters of the broadcasting process: k parents per vertex (odd),
/// per-selection mutation probability p, and the initial red count ell
/// among the k roots. Red is assumed to be the initial majority
/// (ell > k/2), so every error probability below is relative to red.
struct ModelParams {
    int k = 3;
    double p = 0.0;
    int ell = 2;

    void validate() const;
};

inline void validate_k(int k) {
    if (k < 1 || k % 2 == 0)
        throw invalid_parameter("k must be a positive odd integer, got " + std::to_string(k));
}

inline void validate_p(double p) {
    if (!(p >= 0.0 && p <= 0.5))
        throw invalid_parameter("p must lie in [0, 1/2], got " + std::to_string(p));
}

inline void validate_unit(double t, const char* name) {
    if (!(t >= 0.0 && t <= 1.0))
        throw invalid_parameter(std::string(name) + " must lie in [0, 1], got " + std::to_string(t));
}

inline void ModelParams::validate() const {
    validate_k(k);
    validate_p(p);
    if (2 * ell <= k || ell > k)
        throw invalid_parameter("ell must satisfy k/2 < ell <= k, got ell=" +
                                std::to_string(ell) + " for k=" + std::to_string(k));
}

} // namespace kdag

#endif // KDAG_PARAMS_HPP
