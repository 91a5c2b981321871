#include "fopid/fictref.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fopid {

DataRecord make_data_record(Sequence u, Sequence y, std::string meta) {
    if (u.size() != y.size()) throw DataInvalidError("data record: u and y must have equal length");
    if (u.sample_time != y.sample_time) {
        throw DataInvalidError("data record: u and y must share a sample_time");
    }
    if (u.values[0] == 0.0) {
        throw DataInvalidError(
            "data record: first input sample u[0] is zero; the method assumes data "
            "collection starts when a nonzero input is applied (u[0] != 0)");
    }
    return DataRecord{std::move(u), std::move(y), std::move(meta)};
}

double singularity_threshold(const DataRecord& data, double eps) {
    return eps * std::max({1.0, max_abs(data.u), max_abs(data.y)});
}

Sequence fictitious_reference(const DataRecord& data, const Sequence& c_imp, double eps) {
    const double c0 = c_imp.values.empty() ? 0.0 : c_imp[0];
    const double c_floor = eps * std::max(1.0, max_abs(c_imp));
    if (std::fabs(c0) < c_floor) {
        std::ostringstream msg;
        msg << "fictitious reference: controller leading impulse coefficient " << c0
            << " is below the invertibility guard " << c_floor;
        throw SingularityError(msg.str());
    }
    Sequence c = c_imp;
    c.values.resize(data.u.size(), 0.0);  // align truncation horizons
    Sequence r = deconvolve(c, data.u);
    for (std::size_t k = 0; k < r.size(); ++k) r[k] += data.y[k];
    if (!all_finite(r)) throw NonFiniteError("fictitious reference overflowed");
    return r;
}

Sequence estimated_t(const Sequence& r_tilde, const Sequence& y, double guard_threshold) {
    return deconvolve(r_tilde, y, guard_threshold);
}

FictitiousData fictitious_data(const DataRecord& data, const Sequence& c_imp, double eps) {
    Sequence r = fictitious_reference(data, c_imp, eps);
    Sequence t = estimated_t(r, data.y, singularity_threshold(data, eps));
    const double r0 = r[0];
    return FictitiousData{std::move(r), std::move(t), r0};
}

}  // namespace fopid
