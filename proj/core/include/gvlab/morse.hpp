#pragma once

#include "gvlab/domain.hpp"

#include <cstdint>
#include <optional>

namespace gvlab {

struct CriticalPoint {
    Vec location;
    double value = 0.0;        // rho at the critical point
    int index = 0;             // number of negative Hessian eigenvalues
    Vec hessian_eigenvalues;   // sorted ascending
    bool nondegenerate = true;
};

/// Multistart damped Newton on grad rho = 0 over the box, deduplicated by
/// proximity and classified by Hessian eigendecomposition. Sorted by value
/// descending, so the last entry is the minimum.
std::vector<CriticalPoint> find_critical_points(const Domain& dom, int restarts,
                                                std::uint64_t seed);

/// Morse index bound for strictly plurisubharmonic functions: index <= n.
bool index_bound_check(const Domain& dom, const CriticalPoint& cp);

struct NormalFormFit {
    std::vector<int> a_signs;          // +1/-1 per coordinate, pluses first
    double max_residual_ratio = 0.0;   // max |residual| / |w|^3 over the trace
    std::vector<std::pair<double, double>> ball_trace;  // (radius, ratio)
};

/// Fits rho = rho(0) + sum x_j^2 + sum a_j y_j^2 in rescaled
/// Hessian-eigenbasis coordinates; a bounded residual ratio over the
/// shrinking-ball trace confirms the cubic remainder.
NormalFormFit normal_form_fit(const Domain& dom, const CriticalPoint& cp);

struct ComponentTrace {
    std::vector<double> levels;  // t values; the level set is {rho = -t}
    std::vector<int> counts;
    int grid_res = 0;
    std::vector<std::string> warnings;
};

/// Rasterizes the slab {|rho + t| <= band} on a grid over `region` (default:
/// the domain box) and counts connected components by union-find with face
/// adjacency. band is the per-cell variation estimate of rho.
ComponentTrace component_counts(const Domain& dom, const std::vector<double>& levels, int grid_res,
                                const Box* region = nullptr,
                                const std::vector<double>* known_critical_values = nullptr);

struct ConnectednessVerdict {
    bool refused = false;
    std::string refusal_reason;
    bool connected = false;
    int components = 0;
    ComponentTrace trace;
    PshCertificate certificate;
};

/// Counts boundary components at level 0 and replays the level walk from 0
/// down toward the minimum. Refuses the verdict when the strict-psh
/// certificate fails (the hypothesis of the connectedness statement).
ConnectednessVerdict boundary_connectedness(const Domain& dom, int grid_res);

}  // namespace gvlab
