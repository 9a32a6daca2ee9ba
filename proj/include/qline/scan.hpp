#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qline/certify.hpp"
#include "qline/smoothness.hpp"

namespace qline::scan {

using certify::RealnessCertificate;
using line::ComplexLine;
using numerics::Complex;
using quadrics::Point6;
using quadrics::QuadricParams;

enum class SearchStrategy { Grid, UniformRandom, CoordinateRefine };

enum class IntegrabilityFilter { Either, IntegrableOnly, NonIntegrableOnly };

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

struct SearchSpec {
    std::array<Range, 6> c_ranges{{{-3, 3}, {-3, 3}, {-3, 3}, {-3, 3}, {-3, 3}, {-3, 3}}};
    std::array<Range, 3> d_ranges{{{2.5, 6.0}, {0.3, 1.2}, {-3.0, 3.0}}};
    SearchStrategy strategy = SearchStrategy::UniformRandom;
    std::uint64_t budget = 1000;
    std::uint64_t seed = 0;
    bool require_real_smooth = true;
    bool require_complex_smooth = true;
    IntegrabilityFilter integrability = IntegrabilityFilter::Either;
    std::uint64_t max_results = 25;
    int threads = 1;
};

struct FoundInstance {
    QuadricParams params;
    ComplexLine line;
    RealnessCertificate certificate;
    double integrability = 0.0;
};

struct SearchResult {
    std::vector<FoundInstance> found;
    std::map<std::string, std::uint64_t> rejections;  // stage name -> count
    std::uint64_t evaluated = 0;
    bool budget_exhausted = false;  // budget spent without reaching max_results
};

/// Left side of the Liouville-integrability relation
///   c1 c4 (c2+c5-c3-c6) + c2 c5 (c3+c6-c1-c4) + c3 c6 (c1+c4-c2-c5).
double integrability_indicator(const QuadricParams& params);

/// Scale for deciding "indicator vanishes": max(1, |c|_inf^3).
double integrability_scale(const QuadricParams& params);

/// Searches parameter space for instances passing, in order: real
/// smoothness, complex smoothness, the integrability filter, line
/// construction, certification. Deterministic for a fixed (spec, seed);
/// with threads > 1 candidates are evaluated in parallel and merged by
/// index, so the result is identical to the sequential run.
SearchResult parameter_search(const SearchSpec& spec, const Tolerances& tol = {});

struct Direction {
    Point6 v{};                 // normalized: component of largest modulus equals 1
    double membership_residual = 0.0;  // worst of the six line conditions, scaled
    bool is_base_direction = false;
};

struct DirectionOptions {
    int multistarts = 200;
    std::uint64_t seed = 0;
    const Point6* hint = nullptr;  // known direction seeded as an extra start
};

/// Directions v with f_j(v) = 0 and B_j(p, v) = 0 (j = 1..3): lines through p
/// inside the intersection. Damped Newton on a squared-up system from random
/// starts; results deduplicated at projective distance tol.direction_dedupe.
std::vector<Direction> directions_through_point(const QuadricParams& params, const Point6& p,
                                                const DirectionOptions& opts = {},
                                                const Tolerances& tol = {});

struct IntersectionSample {
    Complex t{};
    Point6 point{};
    std::vector<Direction> directions;
    std::vector<RealnessCertificate> certificates;  // oracle-driven, one per direction
};

struct IntersectionReport {
    std::vector<IntersectionSample> samples;
    int coverage = 0;  // number of base points sampled
    bool any_real_point_on_intersecting_line = false;
    bool heuristic = true;  // sampling evidence, not a proof
};

/// Samples base points t on the line (low-discrepancy points of the disk
/// |t| <= 4 (1 + |a|inf / |b|inf)), finds intersecting lines through each and
/// runs the realness oracle on every direction found.
IntersectionReport scan_intersecting_lines(const QuadricParams& params, const ComplexLine& l,
                                           int n_base_points = 64, std::uint64_t seed = 0,
                                           const Tolerances& tol = {});

}  // namespace qline::scan
