#pragma once

#include <stdexcept>
#include <string>

namespace comb {

// Base class for all numerical failures raised by this library.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adaptive quadrature ran out of subdivisions before reaching tolerance.
struct budget_exceeded_error : numerical_error {
    using numerical_error::numerical_error;
};

// Bracketed root-finding was handed an interval without a sign change.
struct no_sign_change_error : numerical_error {
    using numerical_error::numerical_error;
};

// Semi-infinite integrand did not decay over the probe window.
struct tail_estimate_error : numerical_error {
    using numerical_error::numerical_error;
};

// Evaluation too close to a pole of the scattering amplitudes.
struct pole_proximity_error : numerical_error {
    using numerical_error::numerical_error;
};

// |t| below threshold: the node potential is opaque and h_V is singular.
struct transparency_error : numerical_error {
    using numerical_error::numerical_error;
};

// A zero of the secular function sits on (or too close to) a contour ray.
struct contour_crossing_error : numerical_error {
    using numerical_error::numerical_error;
};

// Polylogarithm argument outside the unit disk.
struct polylog_domain_error : numerical_error {
    using numerical_error::numerical_error;
};

// Branched power evaluated on its cut.
struct branch_cut_error : numerical_error {
    using numerical_error::numerical_error;
};

// Contour vertex below kappa_min while a negative band exists.
struct unitarity_violation_error : numerical_error {
    using numerical_error::numerical_error;
};

// Phase-shift grid too coarse to unwrap reliably.
struct grid_too_coarse_error : numerical_error {
    using numerical_error::numerical_error;
};

}  // namespace comb
