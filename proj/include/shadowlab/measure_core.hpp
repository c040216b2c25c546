#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shadowlab/errors.hpp"
#include "shadowlab/rates.hpp"

namespace shadowlab {

struct SpaceParams {
    double p = 2.0;    // exponent of the sequence space, p >= 1
    double mu_w = 1.0; // mass of the base cell
};

void validate_space(const SpaceParams& space);

enum class GenKind { Tabulated, Geometric, ExpAbs, Density };

// Optional closed-form law behind a tabulated measure sequence. When the
// profile is closed form, classification can evaluate exact tail limits
// instead of windowed estimates.
struct MeasureGenerator {
    GenKind kind = GenKind::Tabulated;
    double r = 1.0;   // Geometric: nu_k = nu0 * r^k
    double c = 1.0;   // ExpAbs:    nu_k = nu0 * c^{-|k|}
    double nu0 = 1.0;
    std::string density_tag; // Density: family label, used in reports
    LogSeq profile;          // log nu_k; closed_form false for Tabulated

    bool closed_form() const { return profile.closed_form; }
};

MeasureGenerator geometric_generator(double r, double nu0 = 1.0);
MeasureGenerator expabs_generator(double c, double nu0 = 1.0);

struct MeasureSequence {
    std::int64_t lo = 0;
    std::int64_t hi = -1;
    std::vector<double> nu; // cell masses, index k - lo
    MeasureGenerator gen;

    std::int64_t span() const { return hi - lo; }
    bool in_window(std::int64_t k) const { return k >= lo && k <= hi; }
    double at(std::int64_t k) const;     // window value, else generator value
    double log_at(std::int64_t k) const; // computed in log space for generators
    LogSeq log_view() const;
};

MeasureSequence tabulated_measures(std::int64_t lo, std::vector<double> nu);
MeasureSequence generated_measures(const MeasureGenerator& gen, std::int64_t lo,
                                   std::int64_t hi);

// Positivity and, when a closed-form generator is attached, agreement of the
// tabulated values with it (relative 1e-9).
void validate_measure_sequence(const MeasureSequence& seq);

RateEstimate eval_condition(const MeasureSequence& seq, Cond cond, int depth);

enum class Kind { Contraction, Dilation, GeneralizedHyperbolic, NonShadowing, Inconclusive };

const char* kind_name(Kind k);

struct ClassifyOptions {
    int depth = 64;
    double margin = 0.05; // strictness margin applied to windowed estimates
};

struct Classification {
    Kind kind = Kind::Inconclusive;
    std::optional<double> stable_rate;
    std::optional<double> unstable_rate;
    bool exact = false;
    bool hyperbolic = false;
    std::string reason;
    std::vector<RateEstimate> evidence; // HC, HD, GH_minus, GH_plus
};

// Shared verdict logic. A windowed estimate only counts as strictly below
// (above) one when it clears the margin and the extremum was not pinned to
// a window-induced edge; exact limits compare against one directly. The
// refuted verdict requires all four limits to be exact.
Classification classify_from_estimates(const RateEstimate& hc, const RateEstimate& hd,
                                       const RateEstimate& ghm, const RateEstimate& ghp,
                                       double margin);

Classification classify_measures(const MeasureSequence& seq,
                                 const ClassifyOptions& opts = {});

struct SubCell {
    std::string id;
    double mu = 0.0; // base mass inside the base cell
};

// Masses of the forward/backward images of each sub-cell, tabulated per k.
struct SubCellMeasures {
    SpaceParams space;
    MeasureSequence nu;
    std::vector<SubCell> cells;
    std::vector<std::vector<double>> per_k; // [cell][k - nu.lo]

    double cell_mass(std::size_t cell, std::int64_t k) const;
};

// Sub-cells whose image masses stay exactly proportional to nu_k. The theta
// weights must sum to one; the base mass is nu_0, so the window must
// contain 0.
SubCellMeasures proportional_cells(double p, const MeasureSequence& nu,
                                   const std::vector<std::pair<std::string, double>>& weights);

void validate_partition(const SubCellMeasures& sc);

struct DistortionReport {
    double K_hat = 1.0;
    double H = 1.0;      // K_hat^2
    double star_c = 1.0; // H * sup_k max(nu_{k-1}/nu_k, nu_{k+1}/nu_k)
    std::string worst_cell;
    std::int64_t worst_k = 0;
};

DistortionReport check_bounded_distortion(const SubCellMeasures& sc);

} // namespace shadowlab
