#pragma once

namespace isospec {

/// Numerical tolerances shared by every module. Functions that need a
/// tolerance take this record (or one field of it) rather than hard-coding one.
struct Tolerances {
    double quadrature = 1e-10;          ///< absolute target for adaptive quadrature
    double quadrature_relative = 1e-13; ///< relative floor for large integrals
    long evaluation_budget = 1'000'000; ///< integrand evaluations per adaptive call
    double root = 1e-12;                ///< bisection width for singularity scans
    double eigenvalue = 1e-10;          ///< Sturm bisection width
    int boundary_exclusion = 10;        ///< grid points skipped at each edge by residual norms
};

inline const Tolerances& default_tolerances() {
    static const Tolerances t{};
    return t;
}

}  // namespace isospec
