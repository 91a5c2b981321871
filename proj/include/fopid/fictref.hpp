#pragma once

#include <string>

#include "fopid/lti.hpp"

// Fictitious-reference construction from one recorded input/output pair.
// Given data (u, y) and a candidate controller with impulse response c, the
// fictitious reference
//   r~ = C^-1 * u + y
// is the reference that would have produced exactly this data under the
// closed loop with that controller, for any candidate controller. Solving
// the lower-triangular Toeplitz system r~ * t = y then recovers the
// closed-loop impulse response the candidate would realize, without a plant
// model. The Toeplitz matrix is never materialized; both steps are O(N^2)
// forward substitutions on sequences.
namespace fopid {

// One-shot experiment record. u[0] must be nonzero (data collection starts
// when a nonzero input is applied).
struct DataRecord {
    Sequence u;
    Sequence y;
    std::string meta;
};

DataRecord make_data_record(Sequence u, Sequence y, std::string meta = {});

struct FictitiousData {
    Sequence r_tilde;      // fictitious reference
    Sequence t_est;        // estimated closed-loop impulse response
    double leading_value;  // r_tilde[0], the Toeplitz diagonal
};

// Threshold below which |r_tilde[0]| makes the implied Toeplitz system
// unusably close to singular: eps * max(1, max|u|, max|y|).
double singularity_threshold(const DataRecord& data, double eps);

// r~ = deconvolve(c, u) + y. Throws SingularityError when |c[0]| is below
// eps * max(1, max|c|) (controller not invertible).
Sequence fictitious_reference(const DataRecord& data, const Sequence& c_imp, double eps = 1e-6);

// Forward solve of the lower-triangular Toeplitz system r~ * t = y.
// guard_threshold is an absolute floor on |r~[0]|.
Sequence estimated_t(const Sequence& r_tilde, const Sequence& y, double guard_threshold = 0.0);

// Both steps together, with the r~[0] guard scaled from the data record.
FictitiousData fictitious_data(const DataRecord& data, const Sequence& c_imp, double eps = 1e-6);

}  // namespace fopid
