#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "shadowlab/measure_core.hpp"
#include "shadowlab/rates.hpp"

namespace shadowlab {

enum class DensityFamily { Constant, Exponential, Laplace, Cauchy, Gaussian, Tabulated };

const char* family_name(DensityFamily f);

// Positive weight h on the line. The closed-form families:
//   Constant:    h(x) = 1
//   Exponential: h(x) = exp(sign * x)
//   Laplace:     h(x) = exp(-|x - lambda| / b) / (2b)
//   Cauchy:      h(x) = 1 / (pi (1 + x^2))
//   Gaussian:    h(x) = exp(-x^2)
// Tabulated densities are piecewise linear on the grid xs (ascending).
struct DensityModel {
    DensityFamily family = DensityFamily::Constant;
    int sign = +1;
    double b = 1.0;
    double lambda = 0.0;
    std::vector<double> xs, hs;
};

void validate_density(const DensityModel& model);

double density_value(const DensityModel& model, double x);

// Exact integral of h over [a, b] for the closed-form families, adaptive
// quadrature for tabulated ones.
double density_cell_mass(const DensityModel& model, double a, double b);

// Adaptive Gauss-Kronrod integral of h over [a, b]; QuadratureFailure when
// the error estimate stays above tolerance.
double integrate_density(const DensityModel& model, double a, double b);

enum class EnvelopeMode { ClosedForm, AdaptiveGrid };

// Essential inf m_k and sup M_k of the translation ratio
// rho_k(x) = h(x + k) / h(x) over the base cell [0, 1).
struct Envelopes {
    std::int64_t lo = 0;
    std::int64_t hi = -1;
    std::vector<double> m, M;
    bool closed_form = false;
    bool unverified = false;     // adaptive-grid values are widened brackets
    bool ratio_unbounded = false;
    LogSeq log_m, log_M;
};

Envelopes envelopes(const DensityModel& model, std::int64_t lo, std::int64_t hi,
                    EnvelopeMode mode = EnvelopeMode::ClosedForm);

struct RatioBoundReport {
    bool bounded = true;
    double bound = 1.0; // sup_k M_k / m_k when bounded
    std::int64_t attained_k = 0;
    bool exact = false;
    std::string detail;
};

RatioBoundReport check_bounded_ratio(const DensityModel& model, std::int64_t scan = 1024);

// Envelope growth condition. The default orientation is the pessimistic
// one: sup conditions compare M against m, inf conditions m against M;
// swap_envelopes exchanges the two. Throws HypothesisViolated when the
// envelope ratio is unbounded.
RateEstimate eval_rn_condition(const Envelopes& env, Cond cond, int depth,
                               bool swap_envelopes = false);

struct DensityClassifyOptions {
    int depth = 64;
    double margin = 0.05;
    std::int64_t window = 256;
    bool swap_envelopes = false;
    EnvelopeMode mode = EnvelopeMode::ClosedForm;
};

Classification classify_density(const DensityModel& model,
                                const DensityClassifyOptions& opts = {});

// Cell masses nu_k = integral of h over [k, k+1). Closed-form families get
// a closed-form generator profile when their log masses have usable tails.
MeasureSequence measures_from_density(const DensityModel& model, std::int64_t lo,
                                      std::int64_t hi);

// Sub-cell masses for a partition of the base cell into subintervals
// [a_i, b_i); the intervals must tile [0, 1). The space mass is nu_0.
SubCellMeasures density_cells(const DensityModel& model,
                              const std::vector<std::pair<std::string, std::pair<double, double>>>& intervals,
                              std::int64_t lo, std::int64_t hi, double p);

} // namespace shadowlab
